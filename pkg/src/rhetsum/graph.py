"""Rhetorical relations graph: construction, traversal, levels and cycle checks.

Edges run nucleus -> satellite for nucleus/satellite relations and from the
first member to each other member for multi-nucleus relations. Composite
units (ECUs) never take part in a traversal themselves; any edge touching an
ECU is followed as if it touched the ECU's main unit (recursively, since a
main unit may itself be composite).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Iterator

from .config import WeightConfig
from .document_model import (
    Diagnostic,
    DocumentSpec,
    MediaType,
    RelationCategory,
    UnitKind,
    ValidationError,
    validate_document,
)


@dataclass(frozen=True)
class Node:
    id: str
    kind: UnitKind
    media: MediaType | None = None
    duration_s: float | None = None
    topics: tuple[str, ...] = ()
    members: tuple[str, ...] = ()
    main_unit: str | None = None
    is_main_unit_of: str | None = None


@dataclass(frozen=True)
class Edge:
    source: str
    target: str
    category: RelationCategory
    rel_type: str
    orbit: int | None
    coefficient: float
    relation_index: int

    @property
    def is_ns(self) -> bool:
        return self.category is RelationCategory.NUCLEUS_SATELLITE


@dataclass(frozen=True)
class RhetGraph:
    root: str
    nodes: dict[str, Node]
    edges: tuple[Edge, ...]
    # Document order of unit ids; kept apart from ``nodes`` so that graphs built
    # from reordered unit lists still compare equal on nodes/edges.
    order: tuple[str, ...] = field(compare=False)

    def resolve(self, uid: str) -> str:
        """The simple unit that stands for ``uid`` (itself, for an ESU)."""
        seen = set()
        node = self.nodes[uid]
        while node.kind is UnitKind.ECU:
            if node.id in seen:
                raise ValueError(f"ECU main-unit chain loops at {node.id!r}")
            seen.add(node.id)
            node = self.nodes[node.main_unit]
        return node.id

    @cached_property
    def esus(self) -> tuple[str, ...]:
        return tuple(u for u in self.order if self.nodes[u].kind is UnitKind.ESU)

    @cached_property
    def position(self) -> dict[str, int]:
        return {u: i for i, u in enumerate(self.order)}

    @cached_property
    def resolved_edges(self) -> tuple[tuple[str, str, Edge], ...]:
        return tuple((self.resolve(e.source), self.resolve(e.target), e) for e in self.edges)

    @cached_property
    def _out(self) -> dict[str, list[tuple[str, Edge]]]:
        out: dict[str, list[tuple[str, Edge]]] = {u: [] for u in self.esus}
        for s, t, e in self.resolved_edges:
            out[s].append((t, e))
        return out

    @cached_property
    def _in(self) -> dict[str, list[tuple[str, Edge]]]:
        inc: dict[str, list[tuple[str, Edge]]] = {u: [] for u in self.esus}
        for s, t, e in self.resolved_edges:
            inc[t].append((s, e))
        return inc

    def out_edges(self, esu: str) -> list[tuple[str, Edge]]:
        """(resolved target, edge) pairs leaving ``esu``, in declaration order."""
        return self._out[esu]

    def in_edges(self, esu: str) -> list[tuple[str, Edge]]:
        """(resolved source, edge) pairs entering ``esu``, in declaration order."""
        return self._in[esu]

    def nuclei_of(self, esu: str) -> list[str]:
        """Resolved nuclei of every nucleus/satellite relation where ``esu`` is satellite."""
        out: list[str] = []
        for s, e in self._in[esu]:
            if e.is_ns and s not in out:
                out.append(s)
        return out

    def heads_ns(self, esu: str) -> bool:
        """True when ``esu`` is the nucleus of at least one nucleus/satellite relation."""
        return any(e.is_ns for _, e in self._out[esu])

    def ns_out_degree(self, esu: str) -> int:
        return sum(1 for _, e in self._out[esu] if e.is_ns)

    def in_multi_nucleus(self, esu: str) -> bool:
        return any(not e.is_ns for _, e in self._out[esu]) or any(
            not e.is_ns for _, e in self._in[esu]
        )

    @cached_property
    def mn_groups(self) -> dict[str, str]:
        """Map each ESU to a representative of its multi-nucleus group.

        Groups are the connected components of the multi-nucleus edges; units
        outside any multi-nucleus relation form their own singleton group.
        """
        parent = {u: u for u in self.esus}

        def find(x: str) -> str:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for s, t, e in self.resolved_edges:
            if not e.is_ns:
                a, b = find(s), find(t)
                if a != b:
                    # Keep the earliest unit in document order as representative.
                    if self.position[a] > self.position[b]:
                        a, b = b, a
                    parent[b] = a
        return {u: find(u) for u in self.esus}


def _assemble(doc: DocumentSpec, coefficient: Callable[[str], float]) -> RhetGraph:
    main_of = {u.main_unit: u.id for u in doc.units if u.kind is UnitKind.ECU}
    nodes = {
        u.id: Node(
            id=u.id,
            kind=u.kind,
            media=u.media,
            duration_s=u.duration_s,
            topics=u.topics,
            members=u.members,
            main_unit=u.main_unit,
            is_main_unit_of=main_of.get(u.id),
        )
        for u in doc.units
    }
    edges: list[Edge] = []
    for i, r in enumerate(doc.relations):
        coeff = coefficient(r.rel_type)
        if r.category is RelationCategory.NUCLEUS_SATELLITE:
            edges.append(Edge(r.nucleus, r.satellite, r.category, r.rel_type, r.orbit, coeff, i))
        else:
            first, *peers = r.members
            for p in peers:
                edges.append(Edge(first, p, r.category, r.rel_type, None, coeff, i))
    return RhetGraph(root=doc.root, nodes=nodes, edges=tuple(edges), order=doc.unit_ids)


def build_graph(doc: DocumentSpec, config: WeightConfig | None = None) -> RhetGraph:
    """Build the relations graph, attaching each edge's coefficient from ``config``.

    Raises :class:`ValidationError` if ``doc`` does not validate and
    :class:`~rhetsum.config.ConfigError` if a relation type has no coefficient.
    """
    diags = validate_document(doc)
    if diags:
        raise ValidationError(f"document is invalid: {diags[0]}", diags)
    config = config or WeightConfig()
    return _assemble(doc, config.coefficient)


def traversal(g: RhetGraph) -> dict[str, tuple[str, Edge] | None]:
    """Depth-first first arrivals from the root.

    Returns resolved unit -> (predecessor, edge) in visit order; the root maps
    to None. Outgoing edges are tried in declaration order and a unit keeps
    the first arrival that reaches it.
    """
    start = g.resolve(g.root)
    arrivals: dict[str, tuple[str, Edge] | None] = {start: None}
    stack: list[tuple[str, Iterator[tuple[str, Edge]]]] = [(start, iter(g.out_edges(start)))]
    while stack:
        node, it = stack[-1]
        for target, edge in it:
            if target not in arrivals:
                arrivals[target] = (node, edge)
                stack.append((target, iter(g.out_edges(target))))
                break
        else:
            stack.pop()
    return arrivals


def compute_levels(g: RhetGraph) -> dict[str, int]:
    """Hierarchy level of every reachable unit; an ECU carries its main unit's level."""
    levels: dict[str, int] = {}
    for unit, arrival in traversal(g).items():
        levels[unit] = 0 if arrival is None else levels[arrival[0]] + 1
    out = {}
    for uid in g.order:
        r = g.resolve(uid)
        if r in levels:
            out[uid] = levels[r]
    return out


def _sccs(nodes: list[str], succ: dict[str, list[str]]) -> list[list[str]]:
    """Strongly connected components (iterative Tarjan)."""
    index: dict[str, int] = {}
    low: dict[str, int] = {}
    on_stack: set[str] = set()
    stack: list[str] = []
    comps: list[list[str]] = []
    counter = 0
    for root in nodes:
        if root in index:
            continue
        work = [(root, iter(succ[root]))]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack.add(root)
        while work:
            v, it = work[-1]
            advanced = False
            for w in it:
                if w not in index:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack.add(w)
                    work.append((w, iter(succ[w])))
                    advanced = True
                    break
                if w in on_stack:
                    low[v] = min(low[v], index[w])
            if advanced:
                continue
            work.pop()
            if work:
                low[work[-1][0]] = min(low[work[-1][0]], low[v])
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    comp.append(w)
                    if w == v:
                        break
                comps.append(comp)
    return comps


def detect_cycles(g: RhetGraph, limit: int = 1000) -> list[list[str]]:
    """Elementary cycles over traversal edges, each rotated to start at its
    smallest id. At most ``limit`` cycles are reported."""
    nodes = sorted(g.esus)
    succ: dict[str, list[str]] = {u: [] for u in nodes}
    for s, t, _ in g.resolved_edges:
        if t not in succ[s]:
            succ[s].append(t)
    for u in nodes:
        succ[u].sort()

    found: list[list[str]] = []
    for comp in _sccs(nodes, succ):
        if len(comp) == 1 and comp[0] not in succ[comp[0]]:
            continue
        members = set(comp)
        for start in sorted(comp):
            # Only search through ids larger than the start so each cycle is
            # found once, already in canonical rotation.
            path = [start]
            on_path = {start}
            iters = [iter(succ[start])]
            while iters:
                advanced = False
                for w in iters[-1]:
                    if w == start:
                        found.append(list(path))
                        if len(found) >= limit:
                            return sorted(found)
                    elif w in members and w > start and w not in on_path:
                        path.append(w)
                        on_path.add(w)
                        iters.append(iter(succ[w]))
                        advanced = True
                        break
                if not advanced:
                    iters.pop()
                    on_path.discard(path.pop())
    return sorted(found)


def graph_diagnostics(doc: DocumentSpec) -> list[Diagnostic]:
    """Cycle, multi-nucleus-group and reachability checks for a structurally sound doc."""
    g = _assemble(doc, lambda _t: 1.0)
    out: list[Diagnostic] = []
    cycles = detect_cycles(g)
    for cyc in cycles:
        out.append(Diagnostic("cycle", cyc[0], "relation cycle: " + " -> ".join(cyc + cyc[:1])))

    if not cycles:
        # Units of one multi-nucleus group share a weight, so a path that
        # leaves a group and re-enters it makes the weight depend on itself.
        group = g.mn_groups
        reps = sorted(set(group.values()))
        succ: dict[str, list[str]] = {r: [] for r in reps}
        for s, t, _ in g.resolved_edges:
            a, b = group[s], group[t]
            if a != b and b not in succ[a]:
                succ[a].append(b)
        for comp in _sccs(reps, succ):
            if len(comp) > 1:
                units = sorted(u for u in g.esus if group[u] in comp)
                out.append(
                    Diagnostic(
                        "mn_cycle",
                        units[0],
                        "a path leaves a multi-nucleus group and re-enters it: "
                        + ", ".join(units),
                    )
                )

    reached = traversal(g)
    for u in g.esus:
        if u not in reached:
            out.append(Diagnostic("unreachable", u, f"not reachable from root {doc.root!r}"))
    return out
