"""Random valid documents for property tests and experiments.

Documents are grown as a tree of relations over simple units (each new unit
hangs off an earlier one), then decorated with extra nucleus/satellite edges
and composite units. Every edge points from an earlier to a later unit, so
the result is acyclic; drafts that still fail validation (a path leaving and
re-entering a multi-nucleus group) are discarded and redrawn.
"""

from __future__ import annotations

import random
from dataclasses import replace

from .document_model import (
    DocumentSpec,
    MediaType,
    Relation,
    RelationCategory,
    Unit,
    UnitKind,
    validate_document,
)

REL_TYPES = ("Elaboration", "Cause", "Contrast", "Background")
TOPIC_POOL = ("history", "missions", "mars", "moon", "station", "future")
PRESET_GRID = tuple(round(0.1 * k, 1) for k in range(1, 11))


def _draft(
    rng: random.Random,
    max_units: int,
    p_mn: float,
    p_extra: float,
    p_ecu: float,
    preset: bool,
) -> DocumentSpec:
    n_total = rng.randint(1, max_units)
    n_ecu = sum(rng.random() < p_ecu for _ in range(n_total - 1))
    n_esu = n_total - n_ecu
    esus = [f"u{i}" for i in range(n_esu)]

    relations: list[Relation] = []
    mn_by_source: dict[str, int] = {}
    for i in range(1, n_esu):
        parent = esus[rng.randrange(i)]
        if rng.random() < p_mn:
            if parent in mn_by_source and rng.random() < 0.5:
                k = mn_by_source[parent]
                r = relations[k]
                relations[k] = replace(r, members=r.members + (esus[i],))
            else:
                mn_by_source[parent] = len(relations)
                relations.append(
                    Relation(RelationCategory.MULTI_NUCLEUS, "Joint", members=(parent, esus[i]))
                )
        else:
            relations.append(_ns(rng, parent, esus[i]))
    for i in range(1, n_esu):
        if rng.random() < p_extra:
            relations.append(_ns(rng, esus[rng.randrange(i)], esus[i]))

    units: dict[str, Unit] = {}
    for uid in esus:
        units[uid] = Unit(
            id=uid,
            kind=UnitKind.ESU,
            media=rng.choice(list(MediaType)),
            duration_s=float(rng.randint(1, 300)),
            topics=tuple(rng.sample(TOPIC_POOL, rng.randint(0, 2))),
            preset_weight=rng.choice(PRESET_GRID) if preset else None,
        )

    # Composite units: group a main unit with a few unowned units. A main may
    # be an earlier composite, which nests them.
    free = list(esus)
    root = esus[0]
    for k in range(n_ecu):
        eid = f"e{k}"
        if not free:
            break
        main = rng.choice(free)
        free.remove(main)
        members = [main]
        for _ in range(rng.randint(0, 2)):
            if free:
                m = rng.choice(free)
                if m.startswith("u"):
                    free.remove(m)
                    members.append(m)
        units[eid] = Unit(id=eid, kind=UnitKind.ECU, members=tuple(members), main_unit=main)
        # Let some relations point at the composite instead of its main unit.
        relations = [_retarget(rng, r, main, eid) for r in relations]
        if main == root and rng.random() < 0.5:
            root = eid
        free.append(eid)

    order = [root] + [u for u in units if u != root]
    rest = order[1:]
    rng.shuffle(rest)
    return DocumentSpec(
        title="random document",
        root=root,
        units=tuple(units[u] for u in [root] + rest),
        relations=tuple(relations),
    )


def _ns(rng: random.Random, nucleus: str, satellite: str) -> Relation:
    return Relation(
        RelationCategory.NUCLEUS_SATELLITE,
        rng.choice(REL_TYPES),
        nucleus=nucleus,
        satellite=satellite,
        orbit=rng.randint(1, 3),
    )


def _retarget(rng: random.Random, r: Relation, old: str, new: str) -> Relation:
    if rng.random() >= 0.5:
        return r
    if r.category is RelationCategory.MULTI_NUCLEUS:
        return replace(r, members=tuple(new if m == old else m for m in r.members))
    return replace(
        r,
        nucleus=new if r.nucleus == old else r.nucleus,
        satellite=new if r.satellite == old else r.satellite,
    )


def random_document(
    rng: random.Random,
    max_units: int = 20,
    p_mn: float = 0.3,
    p_extra: float = 0.25,
    p_ecu: float = 0.1,
    preset: bool = False,
) -> DocumentSpec:
    """A random document with at most ``max_units`` units that validates cleanly."""
    while True:
        doc = _draft(rng, max_units, p_mn, p_extra, p_ecu, preset)
        if not validate_document(doc):
            return doc


def random_budget(rng: random.Random, doc: DocumentSpec) -> float:
    total = sum(u.duration_s for u in doc.units if u.is_esu)
    return float(rng.randint(1, max(1, int(total * 1.2))))
