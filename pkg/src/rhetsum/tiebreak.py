"""Ordering of equally weighted units.

Each tie group goes through a fixed cascade and the first stage that
separates its units decides the order:

1. mixed media: the profile's media hierarchy;
2. same media: rhetorical role (nuclei before pure satellites, then more
   nucleus/satellite relations headed first);
3. an interactive profile with a prompt callback: the user's ordering;
4. otherwise: profile topic interest, then document order.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Literal, Mapping, Sequence

from .document_model import MediaType, UserProfile
from .graph import RhetGraph
from .weighting import Ranking

Method = Literal[
    "media_hierarchy", "role_precedence", "user_intervention", "document_order_fallback"
]


class InteractionError(RuntimeError):
    pass


@dataclass(frozen=True)
class TieCandidate:
    """What the user is shown about one tied unit."""

    id: str
    media: MediaType | None
    duration_s: float | None
    raw_weight: float | None
    topics: tuple[str, ...]


@dataclass(frozen=True)
class TieDecision:
    group: tuple[str, ...]
    chosen_order: tuple[str, ...]
    method: Method
    detail: str


Prompt = Callable[[Sequence[str], Sequence[TieCandidate]], Sequence[str]]


def _role_key(g: RhetGraph, uid: str) -> tuple[int, int]:
    is_nucleus = g.heads_ns(uid) or g.in_multi_nucleus(uid)
    return (0 if is_nucleus else 1, -g.ns_out_degree(uid))


def _fallback(
    group: tuple[str, ...], g: RhetGraph, profile: UserProfile, note: str = ""
) -> TieDecision:
    scores = {u: profile.topic_score(g.nodes[u].topics) for u in group}
    order = tuple(sorted(group, key=lambda u: (-scores[u], g.position[u])))
    if len(set(scores.values())) > 1:
        detail = "ordered by profile topic interest, then document order"
    else:
        detail = "no distinguishing criterion; document order"
    if note:
        detail = f"{note}; {detail}"
    return TieDecision(group, order, "document_order_fallback", detail)


def resolve_group(
    group: Sequence[str],
    g: RhetGraph,
    profile: UserProfile,
    prompt: Prompt | None = None,
    weights: Mapping[str, float] | None = None,
    strict: bool = False,
) -> TieDecision:
    group = tuple(group)
    if len(group) < 2:
        return TieDecision(group, group, "document_order_fallback", "single unit; nothing to order")

    pos = g.position
    topic = {u: profile.topic_score(g.nodes[u].topics) for u in group}
    role = {u: _role_key(g, u) for u in group}

    media = {u: g.nodes[u].media for u in group}
    if len(set(media.values())) > 1:
        order = tuple(
            sorted(group, key=lambda u: (profile.media_rank(media[u]), role[u], -topic[u], pos[u]))
        )
        prefs = " > ".join(m.value for m in profile.media_hierarchy if m in set(media.values()))
        return TieDecision(group, order, "media_hierarchy", f"media preference {prefs}")

    if len(set(role.values())) > 1:
        order = tuple(sorted(group, key=lambda u: (role[u], -topic[u], pos[u])))
        return TieDecision(
            group, order, "role_precedence", "nuclei before satellites, then by relations headed"
        )

    if profile.interactive and prompt is not None:
        candidates = [
            TieCandidate(
                u,
                g.nodes[u].media,
                g.nodes[u].duration_s,
                None if weights is None else weights.get(u),
                g.nodes[u].topics,
            )
            for u in group
        ]
        try:
            answer = tuple(prompt(group, candidates))
            if sorted(answer) != sorted(group):
                raise InteractionError(f"response {list(answer)} is not an ordering of the group")
        except Exception as exc:
            if strict:
                if isinstance(exc, InteractionError):
                    raise
                raise InteractionError(str(exc)) from exc
            return _fallback(group, g, profile, note=f"user intervention failed ({exc})")
        return TieDecision(group, answer, "user_intervention", "ordered by the user")

    return _fallback(group, g, profile)


def resolve_equal_weights(
    groups: Sequence[Sequence[str]],
    g: RhetGraph,
    profile: UserProfile,
    prompt: Prompt | None = None,
    weights: Mapping[str, float] | None = None,
    strict: bool = False,
) -> list[TieDecision]:
    """One decision per tie group. With ``strict`` a failed prompt raises
    :class:`InteractionError` instead of falling back to document order."""
    return [resolve_group(grp, g, profile, prompt, weights, strict) for grp in groups]


def apply_tie_decisions(ranking: Ranking, decisions: Sequence[TieDecision]) -> tuple[str, ...]:
    """The ranking with every tie group rewritten in its chosen order."""
    order = list(ranking.order)
    index = {u: i for i, u in enumerate(order)}
    for d in decisions:
        slots = sorted(index[u] for u in d.group)
        for slot, uid in zip(slots, d.chosen_order):
            order[slot] = uid
    return tuple(order)
