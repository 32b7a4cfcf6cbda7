"""End-to-end summary generation over in-memory inputs."""

from __future__ import annotations

from dataclasses import dataclass

from .config import WeightConfig
from .document_model import DEFAULT_PROFILE, DocumentSpec, SummaryBudget, UserProfile
from .graph import RhetGraph, build_graph, compute_levels
from .presentation import SummaryManifest, emit_manifest
from .selection import SelectionResult, trim_to_budget
from .tiebreak import Prompt, TieDecision, apply_tie_decisions, resolve_equal_weights
from .weighting import Ranking, WeightTable, apply_preset_weights, compute_weights, rank_entities


@dataclass(frozen=True)
class SummaryRun:
    doc: DocumentSpec
    graph: RhetGraph
    levels: dict[str, int]
    weights: WeightTable
    ranking: Ranking
    decisions: tuple[TieDecision, ...]
    final_order: tuple[str, ...]
    selection: SelectionResult
    manifest: SummaryManifest


def generate_summary(
    doc: DocumentSpec,
    budget: SummaryBudget,
    profile: UserProfile = DEFAULT_PROFILE,
    config: WeightConfig | None = None,
    pre_weighted: bool = False,
    prompt: Prompt | None = None,
    strict: bool = False,
) -> SummaryRun:
    """Graph, weights, ranking, tie-breaks, trimming and manifest in one call.

    Ties are resolved before trimming so that the chosen order decides which
    of several equally weighted units make it into the budget.
    """
    config = config or WeightConfig()
    graph = build_graph(doc, config)
    levels = compute_levels(graph)
    if pre_weighted:
        weights = apply_preset_weights(doc, levels)
    else:
        weights = compute_weights(graph, levels, config)
    ranking = rank_entities(weights)
    raw = {u: weights.raw(u) for u in weights.selectable}
    decisions = tuple(
        resolve_equal_weights(ranking.tie_groups, graph, profile, prompt, raw, strict)
    )
    final_order = apply_tie_decisions(ranking, decisions)
    weights = weights.with_ranks(final_order)
    selection = trim_to_budget(final_order, graph, budget)
    echo = {"weights": config.to_json(), "pre_weighted": pre_weighted}
    manifest = emit_manifest(selection, weights, decisions, doc, budget, echo)
    return SummaryRun(
        doc, graph, levels, weights, ranking, decisions, final_order, selection, manifest
    )
