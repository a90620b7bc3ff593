"""
Simplicial graph core.

Stars, components of Γ−st(v), the shared/dominant/subordinate trichotomy,
clique counts and the dominating-vertex reduction. Vertex labels are
semantic: their order decides which element of Γ−st(v) is minimal.
"""
import json
import logging
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from typing import Dict, FrozenSet, Iterable, Iterator, List, Optional, Tuple

import networkx as nx
from pydantic import ValidationError

from whitehead.core.errors import GraphDomainError, GraphParseError
from whitehead.models.requests import GraphDocument

logger = logging.getLogger(__name__)

Vertex = int
Edge = Tuple[int, int]


@dataclass(frozen=True)
class Component:
    """A connected component of Γ−st(anchor).

    Equality and hashing use the vertex set only, so a component of Γ−st(u)
    equals a component of Γ−st(v) exactly when it is shared.
    """

    vertices: FrozenSet[Vertex]
    anchor: Vertex = field(compare=False)

    @property
    def minimum(self) -> Vertex:
        return min(self.vertices)

    def sorted(self) -> Tuple[Vertex, ...]:
        return tuple(sorted(self.vertices))

    def __contains__(self, vertex: object) -> bool:
        return vertex in self.vertices

    def __iter__(self) -> Iterator[Vertex]:
        return iter(sorted(self.vertices))

    def __len__(self) -> int:
        return len(self.vertices)

    def __repr__(self) -> str:
        return "{" + ",".join(map(str, self.sorted())) + "}"


class ComponentClass(str, Enum):
    """Position of a component of Γ−st(u) relative to a vertex v ∉ st(u)."""

    SHARED = "Shared"
    DOMINANT = "Dominant"
    SUBORDINATE = "Subordinate"


@dataclass(frozen=True)
class Graph:
    """Finite simplicial graph with ordered vertex labels."""

    vertices: Tuple[Vertex, ...]
    edges: FrozenSet[Edge] = frozenset()

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Iterable[int]] = ()) -> "Graph":
        """Graph on 1..n; edges are normalized to (min, max) pairs."""
        normalized = frozenset((min(u, v), max(u, v)) for u, v in (tuple(e) for e in edges))
        return cls(vertices=tuple(range(1, n + 1)), edges=normalized)

    @property
    def n(self) -> int:
        return len(self.vertices)

    @cached_property
    def adjacency(self) -> Dict[Vertex, FrozenSet[Vertex]]:
        neighbours: Dict[Vertex, set] = {v: set() for v in self.vertices}
        for u, v in self.edges:
            neighbours[u].add(v)
            neighbours[v].add(u)
        return {v: frozenset(adjacent) for v, adjacent in neighbours.items()}

    @cached_property
    def nx_graph(self) -> nx.Graph:
        graph = nx.Graph()
        graph.add_nodes_from(self.vertices)
        graph.add_edges_from(self.edges)
        return graph

    @cached_property
    def _components(self) -> Dict[Vertex, Tuple[Component, ...]]:
        # filled lazily by components_minus_star
        return {}

    def has_vertex(self, v: Vertex) -> bool:
        return v in self.adjacency

    def adjacent(self, u: Vertex, v: Vertex) -> bool:
        return (min(u, v), max(u, v)) in self.edges

    def sorted_edges(self) -> List[List[int]]:
        return [list(edge) for edge in sorted(self.edges)]

    def induced(self, keep: Iterable[Vertex]) -> "Graph":
        """Induced subgraph on the given vertices, labels preserved."""
        kept = frozenset(keep)
        return Graph(
            vertices=tuple(v for v in self.vertices if v in kept),
            edges=frozenset(e for e in self.edges if e[0] in kept and e[1] in kept),
        )

    def __repr__(self) -> str:
        return f"Graph(vertices={list(self.vertices)}, edges={self.sorted_edges()})"


def parse_graph(text: str) -> Graph:
    """
    Parse an edge-list or JSON graph document.

    Args:
        text: Either "n" followed by "u v" lines ("#" starts a comment),
            or a JSON document {"n": int, "edges": [[u, v], ...]}

    Returns:
        Validated Graph on vertices 1..n

    Raises:
        GraphParseError: On malformed input, naming the offending line
    """
    if text.lstrip().startswith("{"):
        return _parse_document(text)

    n: Optional[int] = None
    seen: Dict[Edge, int] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split()
        if n is None:
            if len(fields) != 1 or not fields[0].isdecimal():
                raise GraphParseError(f"expected a vertex count, got {line!r}", lineno)
            n = int(fields[0])
            continue
        if len(fields) != 2:
            raise GraphParseError(f"expected 'u v', got {line!r}", lineno)
        try:
            u, v = int(fields[0]), int(fields[1])
        except ValueError:
            raise GraphParseError(f"non-integer endpoint in {line!r}", lineno) from None
        if not (1 <= u <= n and 1 <= v <= n):
            raise GraphParseError(f"endpoint out of range 1..{n} in {line!r}", lineno)
        if u == v:
            raise GraphParseError(f"self-loop at vertex {u}", lineno)
        key = (min(u, v), max(u, v))
        if key in seen:
            raise GraphParseError(f"duplicate edge {key} (first on line {seen[key]})", lineno)
        seen[key] = lineno

    if n is None:
        raise GraphParseError("missing vertex count")
    return Graph.from_edges(n, seen)


def _parse_document(text: str) -> Graph:
    try:
        document = GraphDocument.model_validate_json(text)
    except ValidationError as exc:
        first = exc.errors()[0]
        raise GraphParseError(f"invalid graph document: {first['msg']}") from None
    return Graph.from_edges(document.n, document.edges)


def canonical_form(g: Graph) -> str:
    """Deterministic text form used for cache keys (labels are significant)."""
    return json.dumps(
        {"vertices": list(g.vertices), "edges": g.sorted_edges()},
        separators=(",", ":"),
    )


def _check_vertex(g: Graph, v: Vertex) -> None:
    if not g.has_vertex(v):
        raise GraphDomainError(f"unknown vertex {v}", detail={"vertex": v})


def star(g: Graph, v: Vertex) -> FrozenSet[Vertex]:
    """st(v) = lk(v) ∪ {v}."""
    _check_vertex(g, v)
    return g.adjacency[v] | {v}


def link(g: Graph, v: Vertex) -> FrozenSet[Vertex]:
    _check_vertex(g, v)
    return g.adjacency[v]


def dominating_vertices(g: Graph) -> List[Vertex]:
    everything = frozenset(g.vertices)
    return [v for v in g.vertices if star(g, v) == everything]


def reduce_dominating(g: Graph) -> Graph:
    """
    Remove dominating vertices until none remains.

    Returns:
        The reduced graph, possibly with no vertices
    """
    reduced = g
    while True:
        dominating = dominating_vertices(reduced)
        if not dominating:
            break
        logger.debug("Removing dominating vertices %s", dominating)
        reduced = reduced.induced(v for v in reduced.vertices if v not in dominating)
    return reduced


def components_minus_star(g: Graph, v: Vertex) -> Tuple[Component, ...]:
    """
    Connected components of Γ−st(v), sorted by minimum vertex.

    Raises:
        GraphDomainError: If v is unknown or dominating
    """
    cached = g._components.get(v)
    if cached is not None:
        return cached

    rest = [w for w in g.vertices if w not in star(g, v)]
    if not rest:
        raise GraphDomainError(
            f"vertex {v} is dominating; reduce the graph first", detail={"vertex": v}
        )
    found = [
        Component(vertices=frozenset(part), anchor=v)
        for part in nx.connected_components(g.nx_graph.subgraph(rest))
    ]
    components = tuple(sorted(found, key=lambda c: c.minimum))
    g._components[v] = components
    return components


def minimal_vertex(g: Graph, v: Vertex) -> Vertex:
    """Smallest label in Γ−st(v)."""
    return components_minus_star(g, v)[0].minimum


def minimal_component(g: Graph, v: Vertex) -> Component:
    """Component of Γ−st(v) containing its minimal element."""
    return components_minus_star(g, v)[0]


def component_containing(g: Graph, v: Vertex, w: Vertex) -> Component:
    for component in components_minus_star(g, v):
        if w in component:
            return component
    raise GraphDomainError(f"vertex {w} lies in st({v})", detail={"anchor": v, "vertex": w})


def dominant_component(g: Graph, u: Vertex, v: Vertex) -> Component:
    """The component of Γ−st(u) containing v (requires u ∉ st(v))."""
    if u in star(g, v):
        raise GraphDomainError(f"{u} and {v} are adjacent or equal", detail={"u": u, "v": v})
    return component_containing(g, u, v)


def classify_component(g: Graph, u: Vertex, v: Vertex, component: Component) -> ComponentClass:
    """
    Classify a component of Γ−st(u) relative to v.

    Args:
        g: Reduced graph
        u: Operative vertex
        v: Vertex with u ∉ st(v)
        component: A component of Γ−st(u)

    Returns:
        Shared, Dominant or Subordinate

    Raises:
        GraphDomainError: If u ∈ st(v) or component is not a component of Γ−st(u)
    """
    if u in star(g, v):
        raise GraphDomainError(f"{u} and {v} are adjacent or equal", detail={"u": u, "v": v})
    if component not in components_minus_star(g, u):
        raise GraphDomainError(
            f"{component!r} is not a component of Γ−st({u})", detail={"u": u}
        )
    if component in components_minus_star(g, v):
        return ComponentClass.SHARED
    if v in component:
        return ComponentClass.DOMINANT
    if component.vertices <= dominant_component(g, v, u).vertices:
        return ComponentClass.SUBORDINATE
    raise GraphDomainError(f"{component!r} escapes the trichotomy for ({u}, {v})")


def shared_components(g: Graph, u: Vertex, v: Vertex) -> List[Component]:
    """Components of Γ−st(u) that are also components of Γ−st(v)."""
    others = set(components_minus_star(g, v))
    return [c for c in components_minus_star(g, u) if c in others]


def non_adjacent_pairs(g: Graph) -> List[Tuple[Vertex, Vertex]]:
    return [
        (u, v)
        for index, u in enumerate(g.vertices)
        for v in g.vertices[index + 1:]
        if not g.adjacent(u, v)
    ]


def sil_pairs(g: Graph) -> List[Tuple[Vertex, Vertex]]:
    """Non-adjacent pairs with a shared component; the only pairs that can cross."""
    return [(u, v) for u, v in non_adjacent_pairs(g) if shared_components(g, u, v)]


def partial_conjugation_count(g: Graph) -> int:
    """Number of partial conjugations C_A^v of a reduced graph."""
    return sum(len(components_minus_star(g, v)) for v in g.vertices)


def clique_counts(g: Graph) -> List[int]:
    """
    Count cliques by size.

    Returns:
        N with N[j] the number of j-cliques and N[0] = 1
    """
    sizes = Counter(len(clique) for clique in nx.enumerate_all_cliques(g.nx_graph))
    top = max(sizes, default=0)
    return [1] + [sizes[j] for j in range(1, top + 1)]
