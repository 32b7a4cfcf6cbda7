"""Summary manifest, Markdown rendering and DOT export."""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from typing import Any, Mapping, Sequence

from . import __version__
from .document_model import DocumentSpec, MediaType, SummaryBudget, UnitKind
from .graph import RhetGraph
from .selection import SelectionResult, Skip
from .tiebreak import TieDecision
from .weighting import WeightTable

MANIFEST_KEYS = (
    "document_title",
    "budget_s",
    "total_duration_s",
    "entries",
    "tie_decisions",
    "skipped",
    "toolchain",
)


class ManifestError(ValueError):
    pass


@dataclass(frozen=True)
class ManifestEntry:
    id: str
    media: MediaType
    duration_s: float
    raw_weight: float
    normalized_weight: float
    level: int
    rank: int
    # Composite units represented by this unit (it is their main unit).
    ecus: tuple[str, ...] = ()


@dataclass(frozen=True)
class SummaryManifest:
    document_title: str
    budget_s: float
    total_duration_s: float
    entries: tuple[ManifestEntry, ...]
    tie_decisions: tuple[TieDecision, ...]
    skipped: tuple[Skip, ...]
    toolchain: Mapping[str, Any] = field(default_factory=dict)

    def to_dict(self) -> dict[str, Any]:
        return {
            "document_title": self.document_title,
            "budget_s": _num(self.budget_s),
            "total_duration_s": _num(self.total_duration_s),
            "entries": [
                {
                    "id": e.id,
                    "media": e.media.value,
                    "duration_s": _num(e.duration_s),
                    "raw_weight": _num(e.raw_weight),
                    "normalized_weight": _num(e.normalized_weight),
                    "level": e.level,
                    "rank": e.rank,
                    "ecus": list(e.ecus),
                }
                for e in self.entries
            ],
            "tie_decisions": [
                {
                    "group": list(d.group),
                    "chosen_order": list(d.chosen_order),
                    "method": d.method,
                    "detail": d.detail,
                }
                for d in self.tie_decisions
            ],
            "skipped": [{"id": s.id, "reason": s.reason} for s in self.skipped],
            "toolchain": _canonical(self.toolchain),
        }

    def to_json(self) -> str:
        """Canonical serialization: sorted keys, numbers rounded to 9 decimals."""
        return json.dumps(self.to_dict(), sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def _num(x: float) -> float:
    return round(float(x), 9) + 0.0  # + 0.0 folds -0.0


def _canonical(value: Any) -> Any:
    if isinstance(value, bool) or value is None or isinstance(value, str):
        return value
    if isinstance(value, (int, float)):
        return _num(value) if isinstance(value, float) else value
    if isinstance(value, Mapping):
        return {str(k): _canonical(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_canonical(v) for v in value]
    return str(value)


def emit_manifest(
    result: SelectionResult,
    weights: WeightTable,
    ties: Sequence[TieDecision],
    doc: DocumentSpec,
    budget: SummaryBudget,
    config: Mapping[str, Any] | None = None,
) -> SummaryManifest:
    units = {u.id: u for u in doc.units}
    represented: dict[str, list[str]] = {}
    for ecu, esu in weights.delegate.items():
        represented.setdefault(esu, []).append(ecu)

    entries = []
    for uid in result.selected:
        if uid not in weights or uid not in units:
            raise ManifestError(f"selected unit {uid!r} has no weight entry")
        rec = weights[uid]
        unit = units[uid]
        entries.append(
            ManifestEntry(
                id=uid,
                media=unit.media,
                duration_s=unit.duration_s,
                raw_weight=rec.raw_weight,
                normalized_weight=rec.normalized_weight,
                level=rec.level,
                rank=rec.rank,
                ecus=tuple(represented.get(uid, ())),
            )
        )
    return SummaryManifest(
        document_title=doc.title,
        budget_s=budget.max_duration_s,
        total_duration_s=result.total_duration_s,
        entries=tuple(entries),
        tie_decisions=tuple(ties),
        skipped=tuple(result.skipped),
        toolchain={"version": __version__, "config": dict(config or {})},
    )


def _secs(x: float) -> str:
    return f"{x:.0f}" if float(x).is_integer() else f"{x:g}"


def render_markdown(m: SummaryManifest, doc: DocumentSpec) -> str:
    units = {u.id: u for u in doc.units}
    lines = [f"# {m.document_title}", ""]
    lines.append(
        f"_{len(m.entries)} of {sum(u.is_esu for u in doc.units)} units, "
        f"{_secs(m.total_duration_s)} s of a {_secs(m.budget_s)} s budget._"
    )
    for e in m.entries:
        unit = units[e.id]
        lines += ["", f"## {e.id}", ""]
        if e.media is MediaType.TEXT:
            lines.append(unit.content if unit.content else "_(no text provided)_")
        else:
            ref = unit.content if unit.content else "no asset reference"
            lines.append(f"[{e.media.value}] `{e.id}` ({_secs(e.duration_s)} s): {ref}")
    methods = Counter(d.method for d in m.tie_decisions)
    tie_text = ", ".join(f"{k} ({v})" for k, v in sorted(methods.items())) or "none"
    lines += [
        "",
        "---",
        "",
        f"- Budget: {_secs(m.budget_s)} s",
        f"- Total duration: {_secs(m.total_duration_s)} s",
        f"- Tie-break methods: {tie_text}",
        "",
    ]
    return "\n".join(lines)


def _q(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def export_dot(g: RhetGraph, weights: WeightTable, levels: Mapping[str, int]) -> str:
    """Graphviz source: one statement per unit (document order), one per edge."""
    lines = ["digraph rhetorical_relations {", "  rankdir=TB;"]
    for uid in g.order:
        label = _q(uid)[1:-1]
        if uid in weights:
            rec = weights[uid]
            label += f"\\nw={rec.raw_weight:.3f} ({rec.normalized_weight:.3f})"
        if uid in levels:
            label += f"\\nL={levels[uid]}"
        text = f'"{label}"'
        shape = "box" if g.nodes[uid].kind is UnitKind.ECU else "ellipse"
        lines.append(f"  {_q(uid)} [label={text}, shape={shape}];")
    for e in g.edges:
        if e.is_ns:
            attrs = f"label={_q(f'{e.rel_type}/{e.orbit}')}, style=solid"
        else:
            attrs = f"label={_q(e.rel_type)}, style=dashed"
        lines.append(f"  {_q(e.source)} -> {_q(e.target)} [{attrs}];")
    lines.append("}")
    return "\n".join(lines) + "\n"
