"""Unit importance weights and ranking.

Weights follow the traversal used for levels. For a unit reached first along
edge ``s -> d``:

* multi-nucleus edge: ``d`` takes the weight of ``s``;
* nucleus/satellite edge, ``d`` heads a nucleus/satellite relation of its own:
  ``raw(s) + nucleus_increment``;
* nucleus/satellite edge, ``d`` is a pure satellite: the sum over every
  incoming nucleus/satellite edge ``n -> d`` of ``coefficient * raw(n) / orbit``.

All members of a multi-nucleus group (units joined by multi-nucleus edges)
share one weight, fixed by whichever member the traversal reaches first.
Values are evaluated in dependency order, so a satellite sum always sees the
final weights of its nuclei.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Iterator, Mapping, Sequence

from .config import ConfigError, WeightConfig
from .document_model import DocumentSpec, SpecError, UnitKind
from .graph import RhetGraph, build_graph, compute_levels, traversal

__all__ = [
    "ConfigError",
    "MissingPresetError",
    "Ranking",
    "WeightConfig",
    "WeightRecord",
    "WeightTable",
    "apply_preset_weights",
    "compute_weights",
    "rank_entities",
    "weight_key",
]


class MissingPresetError(SpecError):
    pass


@dataclass(frozen=True)
class WeightRecord:
    raw_weight: float
    normalized_weight: float
    level: int
    rank: int


@dataclass(frozen=True)
class WeightTable:
    """Per-unit weights. ``selectable`` lists the simple units in document
    order; composite units mirror the record of the unit in ``delegate``."""

    records: Mapping[str, WeightRecord]
    selectable: tuple[str, ...]
    delegate: Mapping[str, str]

    def __getitem__(self, uid: str) -> WeightRecord:
        return self.records[uid]

    def __contains__(self, uid: object) -> bool:
        return uid in self.records

    def __iter__(self) -> Iterator[str]:
        return iter(self.records)

    def __len__(self) -> int:
        return len(self.records)

    def raw(self, uid: str) -> float:
        return self.records[uid].raw_weight

    def with_ranks(self, order: Sequence[str]) -> "WeightTable":
        """Copy with ranks 1..n assigned along ``order`` (selectable ids only)."""
        if sorted(order) != sorted(self.selectable):
            raise ValueError("rank order must be a permutation of the selectable units")
        rank = {u: i + 1 for i, u in enumerate(order)}
        records = {}
        for uid, rec in self.records.items():
            records[uid] = replace(rec, rank=rank[self.delegate.get(uid, uid)])
        return WeightTable(records, self.selectable, self.delegate)


def _table(
    raw: Mapping[str, float],
    levels: Mapping[str, int],
    unit_order: Sequence[str],
    delegate: Mapping[str, str],
) -> WeightTable:
    selectable = tuple(u for u in unit_order if u not in delegate and u in raw)
    top = max((raw[u] for u in selectable), default=0.0)
    provisional = _sorted_by_weight({u: raw[u] for u in selectable}, selectable)
    rank = {u: i + 1 for i, u in enumerate(provisional)}
    records = {}
    for uid in unit_order:
        base = delegate.get(uid, uid)
        if base not in raw:
            continue
        value = raw[base]
        records[uid] = WeightRecord(
            raw_weight=value,
            normalized_weight=value / top if top > 0 else 0.0,
            level=levels.get(uid, levels.get(base, 0)),
            rank=rank[base],
        )
    return WeightTable(records, selectable, dict(delegate))


def weight_key(x: float) -> float:
    """Ranking key: weights equal to 12 significant digits compare equal.

    Sums taken along different paths can differ in the last ulp (0.7 versus
    0.6999999999999998); without this, such ties would split arbitrarily and
    the order could change under a uniform rescaling of the weights.
    """
    return float(f"{x:.12g}")


def _sorted_by_weight(raw: Mapping[str, float], order: Sequence[str]) -> list[str]:
    pos = {u: i for i, u in enumerate(order)}
    return sorted(raw, key=lambda u: (-weight_key(raw[u]), pos[u]))


def compute_weights(
    g: RhetGraph, levels: Mapping[str, int] | None = None, config: WeightConfig | None = None
) -> WeightTable:
    config = config or WeightConfig()
    if levels is None:
        levels = compute_levels(g)
    arrivals = traversal(g)
    group = g.mn_groups
    entry: dict[str, str] = {}
    for u in arrivals:
        entry.setdefault(group[u], u)

    def deps(u: str) -> list[str]:
        e = entry[group[u]]
        if e != u:
            return [e]
        arrival = arrivals[u]
        if arrival is None:
            return []
        src, _ = arrival
        if g.heads_ns(u):
            return [src]
        return [s for s, edge in g.in_edges(u) if edge.is_ns and group[s] != group[u]]

    def value(u: str) -> float:
        e = entry[group[u]]
        if e != u:
            return raw[e]
        arrival = arrivals[u]
        if arrival is None:
            return config.base_value
        src, _ = arrival
        if g.heads_ns(u):
            return raw[src] + config.nucleus_increment
        total = 0.0
        for s, edge in g.in_edges(u):
            if edge.is_ns and group[s] != group[u]:
                total += edge.coefficient * raw[s] / edge.orbit
        return total

    raw: dict[str, float] = {}
    for start in arrivals:
        if start in raw:
            continue
        path = [start]
        on_path = {start}
        while path:
            u = path[-1]
            d = next((d for d in deps(u) if d not in raw), None)
            if d is not None:
                if d in on_path:
                    raise ValueError(f"weight of {u!r} depends on itself via {d!r}")
                path.append(d)
                on_path.add(d)
                continue
            raw[u] = value(u)
            path.pop()
            on_path.discard(u)

    delegate = {uid: g.resolve(uid) for uid in g.order if g.nodes[uid].kind is UnitKind.ECU}
    return _table(raw, levels, g.order, delegate)


def _doc_delegates(doc: DocumentSpec) -> dict[str, str]:
    by_id = {u.id: u for u in doc.units}
    out = {}
    for u in doc.units:
        if u.kind is UnitKind.ECU:
            cur = u
            while cur.kind is UnitKind.ECU:
                cur = by_id[cur.main_unit]
            out[u.id] = cur.id
    return out


def apply_preset_weights(
    doc: DocumentSpec, levels: Mapping[str, int] | None = None
) -> WeightTable:
    """Weight table taken verbatim from the units' ``preset_weight`` fields."""
    missing = [u.id for u in doc.units if u.is_esu and u.preset_weight is None]
    if missing:
        raise MissingPresetError(f"units without preset_weight: {', '.join(missing)}")
    if levels is None:
        levels = compute_levels(build_graph(doc))
    raw = {u.id: u.preset_weight for u in doc.units if u.is_esu}
    return _table(raw, levels, doc.unit_ids, _doc_delegates(doc))


@dataclass(frozen=True)
class Ranking:
    order: tuple[str, ...]
    tie_groups: tuple[tuple[str, ...], ...]


def rank_entities(w: WeightTable) -> Ranking:
    """Selectable units by descending raw weight.

    Maximal runs of equal weight (see :func:`weight_key`) are reported as tie
    groups; inside a run the provisional order is document order.
    """
    order = _sorted_by_weight({u: w.raw(u) for u in w.selectable}, w.selectable)
    groups: list[tuple[str, ...]] = []
    i = 0
    while i < len(order):
        j = i + 1
        while j < len(order) and weight_key(w.raw(order[j])) == weight_key(w.raw(order[i])):
            j += 1
        if j - i > 1:
            groups.append(tuple(order[i:j]))
        i = j
    return Ranking(tuple(order), tuple(groups))
