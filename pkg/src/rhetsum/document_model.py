"""Input model: multimedia document specs, user profiles and the time budget.

Documents and profiles are read from UTF-8 JSON. Parsing is layered: JSON
syntax, then a JSON Schema pass for field names and types, then model checks
(ECU structure, references). Graph-level checks (cycles, reachability) live in
:func:`validate_document`, which also re-runs the model checks so that
documents built in code get the same treatment as parsed ones.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field
from typing import Any, Iterable

import jsonschema


class MediaType(str, enum.Enum):
    TEXT = "text"
    IMAGE = "image"
    VIDEO = "video"
    AUDIO = "audio"


class UnitKind(str, enum.Enum):
    ESU = "esu"
    ECU = "ecu"


class RelationCategory(str, enum.Enum):
    NUCLEUS_SATELLITE = "nucleus_satellite"
    MULTI_NUCLEUS = "multi_nucleus"


@dataclass(frozen=True)
class Diagnostic:
    """One problem found in an input; ``subject`` is a unit id or ``relations[i]``."""

    code: str
    subject: str
    message: str

    def __str__(self) -> str:
        return f"{self.code}: {self.subject}: {self.message}"


class SpecError(ValueError):
    """Base class for input rejections. Carries the diagnostics that caused it."""

    def __init__(self, message: str, diagnostics: Iterable[Diagnostic] = ()):
        super().__init__(message)
        self.diagnostics = list(diagnostics)


class SpecSyntaxError(SpecError):
    pass


class SchemaError(SpecError):
    pass


class UnresolvedReferenceError(SpecError):
    pass


class ModelError(SpecError):
    pass


class HierarchyError(SpecError):
    pass


class ValidationError(SpecError):
    """Raised when a graph-level invariant (acyclicity, reachability) fails."""


@dataclass(frozen=True)
class Unit:
    id: str
    kind: UnitKind
    media: MediaType | None = None
    duration_s: float | None = None
    members: tuple[str, ...] = ()
    main_unit: str | None = None
    topics: tuple[str, ...] = ()
    preset_weight: float | None = None
    # Inline text for text units, asset reference for the other media.
    content: str | None = None

    @property
    def is_esu(self) -> bool:
        return self.kind is UnitKind.ESU


@dataclass(frozen=True)
class Relation:
    category: RelationCategory
    rel_type: str
    nucleus: str | None = None
    satellite: str | None = None
    orbit: int = 1
    members: tuple[str, ...] = ()

    def unit_refs(self) -> tuple[str, ...]:
        if self.category is RelationCategory.MULTI_NUCLEUS:
            return self.members
        return tuple(x for x in (self.nucleus, self.satellite) if x is not None)


@dataclass(frozen=True)
class DocumentSpec:
    title: str
    root: str
    units: tuple[Unit, ...]
    relations: tuple[Relation, ...] = ()

    def unit(self, uid: str) -> Unit:
        for u in self.units:
            if u.id == uid:
                return u
        raise KeyError(uid)

    @property
    def unit_ids(self) -> tuple[str, ...]:
        return tuple(u.id for u in self.units)


@dataclass(frozen=True)
class TopicInterest:
    tag: str
    weight: float


@dataclass(frozen=True)
class UserProfile:
    media_hierarchy: tuple[MediaType, ...] = (
        MediaType.TEXT,
        MediaType.IMAGE,
        MediaType.VIDEO,
        MediaType.AUDIO,
    )
    topics: tuple[TopicInterest, ...] = ()
    interactive: bool = False

    def media_rank(self, media: MediaType | None) -> int:
        if media is None:
            return len(self.media_hierarchy)
        return self.media_hierarchy.index(media)

    def topic_score(self, tags: Iterable[str]) -> float:
        """Highest profile weight among the given tags, 0.0 when none match."""
        wanted = {t.casefold() for t in tags}
        return max((t.weight for t in self.topics if t.tag.casefold() in wanted), default=0.0)


@dataclass(frozen=True)
class SummaryBudget:
    max_duration_s: float

    def __post_init__(self):
        if not self.max_duration_s > 0:
            raise ValueError(f"summary budget must be positive, got {self.max_duration_s!r}")


# --- JSON schemas -----------------------------------------------------------

_NONNEG = {"type": "number", "minimum": 0}
_MEDIA = {"enum": [m.value for m in MediaType]}
_ID_LIST = {"type": "array", "items": {"type": "string", "minLength": 1}}

DOCUMENT_SCHEMA: dict[str, Any] = {
    "type": "object",
    "additionalProperties": False,
    "required": ["title", "root", "units"],
    "properties": {
        "title": {"type": "string"},
        "root": {"type": "string", "minLength": 1},
        "units": {
            "type": "array",
            "minItems": 1,
            "items": {
                "type": "object",
                "additionalProperties": False,
                "required": ["id", "kind"],
                "properties": {
                    "id": {"type": "string", "minLength": 1},
                    "kind": {"enum": [k.value for k in UnitKind]},
                    "media": _MEDIA,
                    "duration_s": _NONNEG,
                    "members": _ID_LIST,
                    "main_unit": {"type": "string", "minLength": 1},
                    "topics": {"type": "array", "items": {"type": "string"}},
                    "preset_weight": _NONNEG,
                    "content": {"type": "string"},
                },
            },
        },
        "relations": {
            "type": "array",
            "items": {
                "type": "object",
                "additionalProperties": False,
                "required": ["category", "rel_type"],
                "properties": {
                    "category": {"enum": [c.value for c in RelationCategory]},
                    "rel_type": {"type": "string", "minLength": 1},
                    "nucleus": {"type": "string", "minLength": 1},
                    "satellite": {"type": "string", "minLength": 1},
                    "orbit": {"type": "integer", "minimum": 1},
                    "members": _ID_LIST,
                },
            },
        },
    },
}

PROFILE_SCHEMA: dict[str, Any] = {
    "type": "object",
    "additionalProperties": False,
    "required": ["media_hierarchy"],
    "properties": {
        "media_hierarchy": {"type": "array", "items": _MEDIA},
        "topics": {
            "type": "array",
            "items": {
                "type": "object",
                "additionalProperties": False,
                "required": ["tag", "weight"],
                "properties": {
                    "tag": {"type": "string", "minLength": 1},
                    "weight": {"type": "number", "minimum": 0, "maximum": 1},
                },
            },
        },
        "interactive": {"type": "boolean"},
    },
}


def _load_json(text: str | bytes, what: str) -> Any:
    if isinstance(text, bytes):
        try:
            text = text.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise SpecSyntaxError(f"{what} is not valid UTF-8: {exc}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        diag = Diagnostic("syntax", f"line {exc.lineno} col {exc.colno}", exc.msg)
        raise SpecSyntaxError(f"{what}: malformed JSON: {exc}", [diag]) from exc


def _check_schema(data: Any, schema: dict, what: str) -> None:
    validator = jsonschema.Draft202012Validator(schema)
    errors = sorted(validator.iter_errors(data), key=lambda e: list(e.absolute_path))
    if errors:
        diags = [
            Diagnostic("schema", "/".join(map(str, e.absolute_path)) or "<top>", e.message)
            for e in errors
        ]
        raise SchemaError(f"{what}: {diags[0]}", diags)


def _unit_from_json(d: dict) -> Unit:
    duration = d.get("duration_s")
    preset = d.get("preset_weight")
    return Unit(
        id=d["id"],
        kind=UnitKind(d["kind"]),
        media=MediaType(d["media"]) if "media" in d else None,
        duration_s=float(duration) if duration is not None else None,
        members=tuple(d.get("members", ())),
        main_unit=d.get("main_unit"),
        topics=tuple(d.get("topics", ())),
        preset_weight=float(preset) if preset is not None else None,
        content=d.get("content"),
    )


def _relation_from_json(d: dict) -> Relation:
    return Relation(
        category=RelationCategory(d["category"]),
        rel_type=d["rel_type"],
        nucleus=d.get("nucleus"),
        satellite=d.get("satellite"),
        orbit=d.get("orbit", 1),
        members=tuple(d.get("members", ())),
    )


def parse_document_spec(text: str | bytes) -> DocumentSpec:
    """Parse and check a document description.

    Raises :class:`SpecSyntaxError`, :class:`SchemaError`,
    :class:`UnresolvedReferenceError` or :class:`ModelError`. Graph-level
    problems are not raised here; see :func:`validate_document`.
    """
    data = _load_json(text, "document")
    _check_schema(data, DOCUMENT_SCHEMA, "document")
    doc = DocumentSpec(
        title=data["title"],
        root=data["root"],
        units=tuple(_unit_from_json(u) for u in data["units"]),
        relations=tuple(_relation_from_json(r) for r in data.get("relations", ())),
    )
    diags = structural_diagnostics(doc)
    refs = [d for d in diags if d.code == "unknown_ref"]
    if refs:
        raise UnresolvedReferenceError(f"document: {refs[0]}", diags)
    if diags:
        raise ModelError(f"document: {diags[0]}", diags)
    return doc


def serialize_document(doc: DocumentSpec) -> str:
    units = []
    for u in doc.units:
        d: dict[str, Any] = {"id": u.id, "kind": u.kind.value}
        if u.media is not None:
            d["media"] = u.media.value
        if u.duration_s is not None:
            d["duration_s"] = u.duration_s
        if u.members:
            d["members"] = list(u.members)
        if u.main_unit is not None:
            d["main_unit"] = u.main_unit
        if u.topics:
            d["topics"] = list(u.topics)
        if u.preset_weight is not None:
            d["preset_weight"] = u.preset_weight
        if u.content is not None:
            d["content"] = u.content
        units.append(d)
    relations = []
    for r in doc.relations:
        d = {"category": r.category.value, "rel_type": r.rel_type}
        if r.category is RelationCategory.MULTI_NUCLEUS:
            d["members"] = list(r.members)
        else:
            d.update(nucleus=r.nucleus, satellite=r.satellite, orbit=r.orbit)
        relations.append(d)
    payload = {"title": doc.title, "root": doc.root, "units": units, "relations": relations}
    return json.dumps(payload, indent=2, ensure_ascii=False) + "\n"


def parse_user_profile(text: str | bytes) -> UserProfile:
    data = _load_json(text, "profile")
    _check_schema(data, PROFILE_SCHEMA, "profile")
    hierarchy = [MediaType(m) for m in data["media_hierarchy"]]
    seen: set[MediaType] = set()
    for m in hierarchy:
        if m in seen:
            raise HierarchyError(
                f"profile: media {m.value!r} listed twice",
                [Diagnostic("hierarchy", m.value, "listed more than once")],
            )
        seen.add(m)
    missing = [m.value for m in MediaType if m not in seen]
    if missing:
        raise HierarchyError(
            f"profile: media_hierarchy is missing {missing}",
            [Diagnostic("hierarchy", m, "missing from media_hierarchy") for m in missing],
        )
    return UserProfile(
        media_hierarchy=tuple(hierarchy),
        topics=tuple(TopicInterest(t["tag"], float(t["weight"])) for t in data.get("topics", ())),
        interactive=data.get("interactive", False),
    )


# --- validation -------------------------------------------------------------


def _rel_subject(i: int) -> str:
    return f"relations[{i}]"


def structural_diagnostics(doc: DocumentSpec) -> list[Diagnostic]:
    """Model-level checks that need no graph: fields, ECU structure, references."""
    out: list[Diagnostic] = []
    by_id: dict[str, Unit] = {}
    for u in doc.units:
        if u.id in by_id:
            out.append(Diagnostic("duplicate_id", u.id, "unit id declared more than once"))
        else:
            by_id[u.id] = u

    if doc.root not in by_id:
        out.append(Diagnostic("unknown_ref", "root", f"root {doc.root!r} is not a unit"))
    elif doc.units[0].id != doc.root:
        out.append(Diagnostic("root_not_first", doc.root, "root must be the first listed unit"))

    owner: dict[str, str] = {}
    for u in doc.units:
        if u.is_esu:
            if u.media is None or u.duration_s is None:
                out.append(Diagnostic("esu_fields", u.id, "ESU needs media and duration_s"))
            if u.members or u.main_unit is not None:
                out.append(Diagnostic("esu_fields", u.id, "ESU cannot have members or main_unit"))
            if u.duration_s is not None and u.duration_s < 0:
                out.append(Diagnostic("esu_fields", u.id, "duration_s must be non-negative"))
        else:
            if u.media is not None or u.duration_s is not None:
                out.append(Diagnostic("ecu_fields", u.id, "ECU cannot have media or duration_s"))
            if u.preset_weight is not None:
                out.append(Diagnostic("ecu_fields", u.id, "ECU weight comes from its main unit"))
            if not u.members:
                out.append(Diagnostic("ecu_fields", u.id, "ECU needs at least one member"))
            if u.main_unit is None:
                out.append(Diagnostic("ecu_main", u.id, "ECU has no main_unit"))
            elif u.main_unit not in u.members:
                out.append(Diagnostic("ecu_main", u.id, f"main_unit {u.main_unit!r} is not a member"))
            for m in u.members:
                if m not in by_id:
                    out.append(Diagnostic("unknown_ref", u.id, f"member {m!r} is not a unit"))
                elif m == u.id:
                    out.append(Diagnostic("ecu_membership", u.id, "ECU lists itself as a member"))
                elif m in owner and owner[m] != u.id:
                    out.append(
                        Diagnostic("ecu_membership", m, f"member of both {owner[m]!r} and {u.id!r}")
                    )
                else:
                    owner[m] = u.id
        if u.preset_weight is not None and u.preset_weight < 0:
            out.append(Diagnostic("esu_fields", u.id, "preset_weight must be non-negative"))

    # ECU containment must be a forest: walk each chain of owners upwards.
    for start in owner:
        seen = {start}
        cur = owner.get(start)
        while cur is not None:
            if cur in seen:
                out.append(Diagnostic("ecu_membership", start, "ECU membership forms a cycle"))
                break
            seen.add(cur)
            cur = owner.get(cur)

    for i, r in enumerate(doc.relations):
        subj = _rel_subject(i)
        if r.category is RelationCategory.NUCLEUS_SATELLITE:
            if r.nucleus is None or r.satellite is None:
                out.append(Diagnostic("relation_fields", subj, "needs nucleus and satellite"))
            if r.members:
                out.append(Diagnostic("relation_fields", subj, "members only apply to multi_nucleus"))
            if r.nucleus is not None and r.nucleus == r.satellite:
                out.append(Diagnostic("self_relation", subj, "nucleus and satellite are the same unit"))
            if r.orbit < 1:
                out.append(Diagnostic("relation_fields", subj, "orbit must be >= 1"))
        else:
            if r.nucleus is not None or r.satellite is not None:
                out.append(Diagnostic("relation_fields", subj, "nucleus/satellite only apply to N-S"))
            if len(r.members) < 2:
                out.append(Diagnostic("relation_fields", subj, "multi_nucleus needs >= 2 members"))
            if len(set(r.members)) != len(r.members):
                out.append(Diagnostic("duplicate_member", subj, "member listed more than once"))
        for ref in r.unit_refs():
            if ref not in by_id:
                out.append(Diagnostic("unknown_ref", subj, f"unit {ref!r} is not declared"))
    return out


def validate_document(doc: DocumentSpec) -> list[Diagnostic]:
    """Every structural and graph-level problem in ``doc``; empty when usable."""
    diags = structural_diagnostics(doc)
    if diags:
        return diags
    # Local import: the graph module builds on the types defined here.
    from .graph import graph_diagnostics

    return graph_diagnostics(doc)


DEFAULT_PROFILE = UserProfile()
