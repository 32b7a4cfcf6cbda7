"""Budgeted selection of ranked units.

One forward pass over the ranking, most important first. A unit is admitted
when all of its nuclei are already in and its duration still fits. The pass
stops admitting at the first unit that does not fit; everything ranked after
it is reported as over budget. This keeps the selection a prefix-closed
function of the budget: raising the budget never drops a selected unit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Literal, Sequence

from .document_model import Diagnostic, SummaryBudget, UnitKind
from .graph import RhetGraph

SkipReason = Literal["over_budget", "nucleus_absent", "closure_removed"]


@dataclass(frozen=True)
class Skip:
    id: str
    reason: SkipReason


@dataclass(frozen=True)
class SelectionResult:
    selected: tuple[str, ...]
    total_duration_s: float
    skipped: tuple[Skip, ...] = field(default=())


def _duration(g: RhetGraph, uid: str) -> float:
    node = g.nodes[uid]
    if node.kind is not UnitKind.ESU:
        raise ValueError(f"{uid!r} is a composite unit; only simple units are selectable")
    return node.duration_s


def trim_to_budget(
    ranked: Sequence[str], g: RhetGraph, budget: SummaryBudget
) -> SelectionResult:
    limit = budget.max_duration_s
    included: list[str] = []
    durations: list[float] = []
    skipped: list[Skip] = []
    exhausted = False
    for uid in ranked:
        dur = _duration(g, uid)
        if exhausted:
            skipped.append(Skip(uid, "over_budget"))
            continue
        if math.fsum(durations + [dur]) > limit:
            skipped.append(Skip(uid, "over_budget"))
            exhausted = True
        elif any(n not in included for n in g.nuclei_of(uid)):
            skipped.append(Skip(uid, "nucleus_absent"))
        else:
            included.append(uid)
            durations.append(dur)

    # Safety net for rankings that omit a nucleus: drop satellites whose
    # nuclei are not selected, repeating until nothing changes.
    kept = set(included)
    changed = True
    while changed:
        changed = False
        for uid in included:
            if uid in kept and any(n not in kept for n in g.nuclei_of(uid)):
                kept.discard(uid)
                skipped.append(Skip(uid, "closure_removed"))
                changed = True

    selected = tuple(sorted(kept, key=g.position.__getitem__))
    total = math.fsum(g.nodes[u].duration_s for u in selected)
    return SelectionResult(selected, total, tuple(skipped))


def verify_selection(
    result: SelectionResult, g: RhetGraph, budget: SummaryBudget
) -> list[Diagnostic]:
    """Independent check of a selection: budget bound and satellite closure."""
    out: list[Diagnostic] = []
    chosen = set(result.selected)
    known = [u for u in result.selected if u in g.nodes and g.nodes[u].kind is UnitKind.ESU]
    for uid in result.selected:
        if uid not in g.nodes or g.nodes[uid].kind is not UnitKind.ESU:
            out.append(Diagnostic("unknown_unit", uid, "not a simple unit of this graph"))
    if len(chosen) != len(result.selected):
        out.append(Diagnostic("duplicate", "selected", "a unit is selected more than once"))

    actual = math.fsum(g.nodes[u].duration_s for u in known)
    if not math.isclose(actual, result.total_duration_s, rel_tol=1e-12, abs_tol=1e-9):
        out.append(
            Diagnostic(
                "total_mismatch",
                "total_duration_s",
                f"reported {result.total_duration_s} but durations sum to {actual}",
            )
        )
    if actual > budget.max_duration_s:
        out.append(
            Diagnostic(
                "over_budget",
                "total_duration_s",
                f"{actual} s exceeds the budget of {budget.max_duration_s} s",
            )
        )

    for uid in known:
        for n in g.nuclei_of(uid):
            if n not in chosen:
                out.append(Diagnostic("orphan_satellite", uid, f"nucleus {n!r} is not selected"))

    positions = [g.position[u] for u in known]
    if positions != sorted(positions):
        out.append(Diagnostic("order", "selected", "selected units are not in document order"))
    for s in result.skipped:
        if s.id in chosen:
            out.append(Diagnostic("skipped_selected", s.id, "listed as both selected and skipped"))
    return out
