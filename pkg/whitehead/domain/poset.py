"""
The Γ-Whitehead poset.

Vertex types are enumerated by combining the based partitions of every
vertex and discarding combinations in which two partitions cross. Only
SIL pairs (non-adjacent pairs with a shared component) can cross, so the
crossing verdicts are tabulated once per SIL pair and the combination
search consults those tables.
"""
import logging
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

import networkx as nx

from whitehead.core.config import settings
from whitehead.core.errors import DomainError, ResourceCapError
from whitehead.domain.graph import Graph, Vertex, sil_pairs
from whitehead.domain.partition import (
    BasedPartition,
    binary_splits,
    compatible,
    crosses,
    enumerate_based_partitions,
    refines,
    trivial_partition,
    validate_partition,
)
from whitehead.models.responses import PosetDocument
from whitehead.workers.processor import ChunkProcessor

logger = logging.getLogger(__name__)

Chain = Tuple[int, ...]
Choice = Tuple[int, ...]


@dataclass(frozen=True)
class VertexType:
    """One based partition per vertex of the reduced graph, in vertex order."""

    parts: Tuple[BasedPartition, ...]

    @cached_property
    def _by_vertex(self) -> Dict[Vertex, BasedPartition]:
        return {p.operative: p for p in self.parts}

    def part(self, v: Vertex) -> BasedPartition:
        return self._by_vertex[v]

    @property
    def rank(self) -> int:
        return sum(p.length - 1 for p in self.parts)

    @property
    def nontrivial(self) -> List[Vertex]:
        return [p.operative for p in self.parts if p.length > 1]

    def replace(self, new_part: BasedPartition) -> "VertexType":
        return VertexType(
            tuple(new_part if p.operative == new_part.operative else p for p in self.parts)
        )

    def to_document(self) -> Dict[int, List[List[int]]]:
        return {p.operative: p.to_document() for p in self.parts}

    def __repr__(self) -> str:
        shown = [repr(p) for p in self.parts if p.length > 1]
        return "VertexType(" + (" ".join(shown) or "nuclear") + ")"


def nuclear_type(g: Graph) -> VertexType:
    """All partitions trivial: the unique minimal element."""
    return VertexType(tuple(trivial_partition(g, v) for v in g.vertices))


def rank(tau: VertexType) -> int:
    """Σ_v (l(τ_v) − 1)."""
    return tau.rank


def leq(tau: VertexType, other: VertexType) -> bool:
    """τ ≤ τ' iff the partitions refine at every vertex."""
    if [p.operative for p in tau.parts] != [p.operative for p in other.parts]:
        raise DomainError("vertex types belong to different graphs")
    return all(refines(p, q) for p, q in zip(tau.parts, other.parts))


def is_vertex_type(g: Graph, tau: VertexType) -> bool:
    """Pairwise compatibility of the partitions of tau."""
    parts = tau.parts
    return all(
        compatible(g, parts[a], parts[b])
        for a in range(len(parts))
        for b in range(a + 1, len(parts))
    )


@dataclass(frozen=True)
class SearchPlan:
    """Backtracking plan over per-vertex partition indices.

    checks[k] lists (earlier position, allowed) where allowed maps the
    earlier choice to the choices at position k that do not cross it.
    """

    sizes: Tuple[int, ...]
    checks: Tuple[Tuple[Tuple[int, Dict[int, FrozenSet[int]]], ...], ...]
    cap: int


def _plan(g: Graph, options: Dict[Vertex, List[BasedPartition]], cap: int) -> SearchPlan:
    position = {v: k for k, v in enumerate(g.vertices)}
    checks: List[List[Tuple[int, Dict[int, FrozenSet[int]]]]] = [[] for _ in g.vertices]
    for u, v in sil_pairs(g):
        allowed = {
            i: frozenset(j for j, q in enumerate(options[v]) if not crosses(g, p, q))
            for i, p in enumerate(options[u])
        }
        checks[position[v]].append((position[u], allowed))
    return SearchPlan(
        sizes=tuple(len(options[v]) for v in g.vertices),
        checks=tuple(tuple(c) for c in checks),
        cap=cap,
    )


def search_choices(task: Tuple[SearchPlan, Choice]) -> List[Choice]:
    """
    Enumerate all compatible choice tuples extending a fixed prefix.

    Stops once more than plan.cap tuples were found.
    """
    plan, prefix = task
    found: List[Choice] = []
    chosen = list(prefix)
    last = len(plan.sizes)

    def extend(k: int) -> bool:
        if k == last:
            found.append(tuple(chosen))
            return len(found) <= plan.cap
        for j in range(plan.sizes[k]):
            if all(j in allowed[chosen[a]] for a, allowed in plan.checks[k]):
                chosen.append(j)
                keep_going = extend(k + 1)
                chosen.pop()
                if not keep_going:
                    return False
        return True

    extend(len(chosen))
    return found


def _prefixes(plan: SearchPlan) -> List[Choice]:
    # split the search on the first vertex with a real choice
    if not plan.sizes:
        return [()]
    branching = next((k for k, size in enumerate(plan.sizes) if size > 1), None)
    if branching is None:
        return [tuple(0 for _ in plan.sizes)]
    head = [0] * branching
    for k in range(branching):
        if any(0 not in allowed[0] for _, allowed in plan.checks[k]):
            return [()]
    return [
        tuple(head + [j])
        for j in range(plan.sizes[branching])
        if all(j in allowed[head[a]] for a, allowed in plan.checks[branching])
    ]


class SubcomplexKind(str, Enum):
    SUPP = "supp"
    PERIPHERAL = "peripheral"
    CONE = "cone"


@dataclass
class WhiteheadPoset:
    """Elements sorted by (rank, choice), Hasse edges and the order relation."""

    graph: Graph
    elements: List[VertexType]
    hasse_edges: List[Tuple[int, int]]
    _chains: Dict[int, List[Chain]] = field(default_factory=dict, repr=False)
    _bases: Dict[int, FrozenSet] = field(default_factory=dict, repr=False)

    def __post_init__(self) -> None:
        self.index: Dict[VertexType, int] = {tau: i for i, tau in enumerate(self.elements)}
        self.ranks: List[int] = [tau.rank for tau in self.elements]
        covers: List[List[int]] = [[] for _ in self.elements]
        for low, high in self.hasse_edges:
            covers[low].append(high)
        self.covers: List[Tuple[int, ...]] = [tuple(sorted(c)) for c in covers]
        above: List[FrozenSet[int]] = [frozenset()] * len(self.elements)
        for i in sorted(range(len(self.elements)), key=lambda i: -self.ranks[i]):
            reach = set(self.covers[i])
            for c in self.covers[i]:
                reach |= above[c]
            above[i] = frozenset(reach)
        self.above = above
        self._sorted_above = [tuple(sorted(a)) for a in above]

    def __len__(self) -> int:
        return len(self.elements)

    @property
    def height(self) -> int:
        return max(self.ranks, default=0)

    @property
    def rank_histogram(self) -> List[int]:
        histogram = [0] * (self.height + 1)
        for r in self.ranks:
            histogram[r] += 1
        return histogram

    def index_of(self, tau: VertexType) -> int:
        try:
            return self.index[tau]
        except KeyError:
            raise DomainError(f"{tau!r} is not an element of the poset") from None

    def leq_index(self, i: int, j: int) -> bool:
        return i == j or j in self.above[i]

    def upper_covers(self, i: int) -> Tuple[int, ...]:
        return self.covers[i]

    def chains(self, dim: int) -> List[Chain]:
        """Strictly increasing sequences of dim + 1 elements, lexicographic by index."""
        if dim < 0:
            raise DomainError(f"chain dimension must be non-negative, got {dim}")
        if dim in self._chains:
            return self._chains[dim]
        found: List[Chain] = []
        stack: List[int] = []

        def extend() -> None:
            if len(stack) == dim + 1:
                found.append(tuple(stack))
                return
            for nxt in self._sorted_above[stack[-1]]:
                stack.append(nxt)
                extend()
                stack.pop()

        if dim <= self.height:
            for start in range(len(self.elements)):
                stack.append(start)
                extend()
                stack.pop()
        self._chains[dim] = found
        return found

    def chain_counts(self) -> List[int]:
        return [len(self.chains(d)) for d in range(self.height + 1)]

    def basis(self, i: int) -> FrozenSet:
        """Canonical basis of element i (memoized)."""
        if i not in self._bases:
            from whitehead.domain.essential import canonical_basis

            self._bases[i] = canonical_basis(self.graph, self.elements[i])
        return self._bases[i]

    def to_document(self) -> PosetDocument:
        return PosetDocument(
            vertices=list(self.graph.vertices),
            edges=self.graph.sorted_edges(),
            elements=[tau.to_document() for tau in self.elements],
            rank_histogram=self.rank_histogram,
            hasse_edges=[list(edge) for edge in self.hasse_edges],
        )

    @classmethod
    def from_document(cls, document: PosetDocument) -> "WhiteheadPoset":
        graph = Graph(
            vertices=tuple(document.vertices),
            edges=frozenset((min(e), max(e)) for e in document.edges),
        )
        elements = []
        for position, element in enumerate(document.elements):
            missing = [v for v in graph.vertices if v not in element]
            if missing:
                raise DomainError(f"element {position} has no partition at {missing}")
            elements.append(
                VertexType(
                    tuple(
                        validate_partition(graph, BasedPartition.from_document(v, element[v]))
                        for v in graph.vertices
                    )
                )
            )
        poset = cls(
            graph=graph,
            elements=elements,
            hasse_edges=[(low, high) for low, high in document.hasse_edges],
        )
        if poset.rank_histogram != document.rank_histogram:
            raise DomainError("serialized rank histogram disagrees with the elements")
        return poset

    def to_dot(self) -> str:
        """Hasse diagram in DOT format."""
        diagram = nx.DiGraph(name="hasse")
        for i, r in enumerate(self.ranks):
            diagram.add_node(i, label=f"{i}:{r}")
        diagram.add_edges_from(self.hasse_edges)
        return nx.nx_pydot.to_pydot(diagram).to_string()


def enumerate_poset(g: Graph, cap: Optional[int] = None, jobs: Optional[int] = None) -> WhiteheadPoset:
    """
    Enumerate Wh_Γ of a reduced graph.

    Args:
        g: Reduced graph (no dominating vertex)
        cap: Maximum number of elements (default from settings)
        jobs: Worker processes for the combination search

    Returns:
        The poset with elements sorted by rank; index 0 is the nuclear type

    Raises:
        ResourceCapError: If the element count exceeds cap
    """
    cap = settings.poset_cap if cap is None else cap
    options = {v: enumerate_based_partitions(g, v) for v in g.vertices}
    plan = _plan(g, options, cap)
    logger.info(
        "Enumerating vertex types: %d vertices, %d SIL pairs, %d raw combinations",
        g.n, sum(len(c) for c in plan.checks), _product(plan.sizes),
    )

    processor = ChunkProcessor(jobs)
    found: List[Choice] = []
    for chunk in processor.map(search_choices, [(plan, prefix) for prefix in _prefixes(plan)]):
        found.extend(chunk)
        if len(found) > cap:
            raise ResourceCapError(cap=cap, partial_count=len(found))

    def rank_of(choice: Choice) -> int:
        return sum(options[v][j].length - 1 for v, j in zip(g.vertices, choice))

    found.sort(key=lambda choice: (rank_of(choice), choice))
    elements = [
        VertexType(tuple(options[v][j] for v, j in zip(g.vertices, choice))) for choice in found
    ]
    hasse = _hasse_edges(g, options, found)
    logger.info("Enumerated %d vertex types, %d covering pairs", len(elements), len(hasse))
    return WhiteheadPoset(graph=g, elements=elements, hasse_edges=hasse)


def _product(sizes: Iterable[int]) -> int:
    total = 1
    for size in sizes:
        total *= size
    return total


def _hasse_edges(
    g: Graph, options: Dict[Vertex, List[BasedPartition]], found: Sequence[Choice]
) -> List[Tuple[int, int]]:
    # every cover is a single binary split of a single petal
    position = {choice: i for i, choice in enumerate(found)}
    successors: Dict[Vertex, List[List[int]]] = {}
    for v in g.vertices:
        lookup = {p: j for j, p in enumerate(options[v])}
        successors[v] = [
            sorted(
                {
                    lookup[split]
                    for index in range(p.length)
                    for _, split in binary_splits(g, p, index)
                }
            )
            for p in options[v]
        ]

    edges = []
    for i, choice in enumerate(found):
        for k, v in enumerate(g.vertices):
            for j in successors[v][choice[k]]:
                target = position.get(choice[:k] + (j,) + choice[k + 1:])
                if target is not None:
                    edges.append((i, target))
    edges.sort()
    return edges


def chains(p: WhiteheadPoset, dim: int) -> List[Chain]:
    return p.chains(dim)


def rank_table(p: WhiteheadPoset) -> List[Tuple[int, int, int]]:
    """(rank, vertex types, essential types) per rank."""
    from whitehead.domain.essential import essential_flags

    flags = essential_flags(p)
    rows = []
    for r, count in enumerate(p.rank_histogram):
        essential = sum(1 for i, flag in enumerate(flags) if flag and p.ranks[i] == r)
        rows.append((r, count, essential))
    return rows


def subcomplex_cells(p: WhiteheadPoset, generators: Iterable, kind: SubcomplexKind) -> List[Chain]:
    """
    Cells of supp(A), Peripheral(A) or C(A).

    A chain σ lies in C(A) when τ(A) ≤ τ⁰(σ) and in supp(A) when
    A ⊆ B(τ⁰(σ)); Peripheral(A) is their difference.

    Raises:
        IncompatibleGeneratorsError: If A has no cone point
    """
    from whitehead.domain.essential import cone_point

    family = frozenset(generators)
    cone = p.index_of(cone_point(p.graph, family))
    cells = []
    for dim in range(p.height + 1):
        for chain in p.chains(dim):
            bottom = chain[0]
            in_stabilizer = p.leq_index(cone, bottom)
            if not in_stabilizer:
                continue
            in_support = family <= p.basis(bottom)
            if kind is SubcomplexKind.CONE:
                cells.append(chain)
            elif kind is SubcomplexKind.SUPP and in_support:
                cells.append(chain)
            elif kind is SubcomplexKind.PERIPHERAL and not in_support:
                cells.append(chain)
    return cells
