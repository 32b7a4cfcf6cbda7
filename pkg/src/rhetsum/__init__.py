"""Rhetorical-relations-based summarization of multimedia documents."""

__version__ = "0.1.0"

from .config import ConfigError, WeightConfig, load_weight_config
from .document_model import (
    DEFAULT_PROFILE,
    Diagnostic,
    DocumentSpec,
    MediaType,
    Relation,
    RelationCategory,
    SpecError,
    SummaryBudget,
    Unit,
    UnitKind,
    UserProfile,
    parse_document_spec,
    parse_user_profile,
    serialize_document,
    validate_document,
)
from .graph import RhetGraph, build_graph, compute_levels, detect_cycles
from .pipeline import SummaryRun, generate_summary
from .presentation import SummaryManifest, emit_manifest, export_dot, render_markdown
from .selection import SelectionResult, trim_to_budget, verify_selection
from .tiebreak import TieDecision, resolve_equal_weights
from .weighting import WeightTable, apply_preset_weights, compute_weights, rank_entities
