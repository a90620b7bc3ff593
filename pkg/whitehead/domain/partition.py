"""
Based partitions of Γ−st(u), petal splits, crossings and compatibility.

The block {u} of a based partition is implicit; only petals are stored,
in ascending order of their minimum.
"""
from dataclasses import dataclass
from itertools import combinations
from typing import FrozenSet, Iterable, List, Tuple

from sympy.utilities.iterables import multiset_partitions

from whitehead.core.errors import PartitionDomainError
from whitehead.domain.graph import (
    Component,
    Graph,
    Vertex,
    components_minus_star,
    dominant_component,
    shared_components,
    star,
)

Petal = FrozenSet[Vertex]


@dataclass(frozen=True)
class BasedPartition:
    """Petals partitioning Γ−st(operative) into unions of components."""

    operative: Vertex
    petals: Tuple[Petal, ...]

    @classmethod
    def of(cls, operative: Vertex, petals: Iterable[Iterable[Vertex]]) -> "BasedPartition":
        """Build a partition in canonical petal order."""
        normalized = sorted((frozenset(petal) for petal in petals), key=min)
        return cls(operative=operative, petals=tuple(normalized))

    @property
    def length(self) -> int:
        return len(self.petals)

    @property
    def key(self) -> Tuple[Tuple[Vertex, ...], ...]:
        return tuple(tuple(sorted(petal)) for petal in self.petals)

    def petal_index(self, vertex: Vertex) -> int:
        for index, petal in enumerate(self.petals):
            if vertex in petal:
                return index
        raise PartitionDomainError(
            f"vertex {vertex} is not in any petal at {self.operative}",
            detail={"operative": self.operative, "vertex": vertex},
        )

    def to_document(self) -> List[List[Vertex]]:
        return [list(petal) for petal in self.key]

    @classmethod
    def from_document(cls, operative: Vertex, petals: List[List[Vertex]]) -> "BasedPartition":
        return cls.of(operative, petals)

    def __repr__(self) -> str:
        body = "|".join(",".join(map(str, petal)) for petal in self.key)
        return f"τ{self.operative}[{body}]"


def validate_partition(g: Graph, p: BasedPartition) -> BasedPartition:
    """
    Check that p is a valid based partition of g.

    Raises:
        PartitionDomainError: If petals overlap, miss vertices or cut a component
    """
    components = components_minus_star(g, p.operative)
    expected = frozenset().union(*(c.vertices for c in components))
    covered: set = set()
    for petal in p.petals:
        if not petal:
            raise PartitionDomainError(f"empty petal at {p.operative}")
        if covered & petal:
            raise PartitionDomainError(f"overlapping petals at {p.operative}")
        covered |= petal
        for component in components:
            if component.vertices & petal and not component.vertices <= petal:
                raise PartitionDomainError(
                    f"petal {sorted(petal)} cuts component {component!r} of Γ−st({p.operative})"
                )
    if covered != expected:
        raise PartitionDomainError(
            f"petals at {p.operative} do not cover Γ−st({p.operative})",
            detail={"missing": sorted(expected - covered), "extra": sorted(covered - expected)},
        )
    return p


def trivial_partition(g: Graph, u: Vertex) -> BasedPartition:
    """The one-petal partition {Γ−st(u)}."""
    components = components_minus_star(g, u)
    return BasedPartition.of(u, [frozenset().union(*(c.vertices for c in components))])


def enumerate_based_partitions(g: Graph, u: Vertex) -> List[BasedPartition]:
    """
    All based partitions at u: every set partition of the components of
    Γ−st(u), each block merged into one petal.

    Returns:
        Partitions ordered by length, then by petal lists (trivial first)
    """
    components = components_minus_star(g, u)
    found = []
    for blocks in multiset_partitions(list(range(len(components)))):
        petals = [frozenset().union(*(components[i].vertices for i in block)) for block in blocks]
        found.append(BasedPartition.of(u, petals))
    return sorted(found, key=lambda p: (p.length, p.key))


def refines(p: BasedPartition, q: BasedPartition) -> bool:
    """p ≤ q: every petal of q lies inside a petal of p."""
    if p.operative != q.operative:
        raise PartitionDomainError(
            f"cannot compare partitions at {p.operative} and {q.operative}"
        )
    return all(any(small <= big for big in p.petals) for small in q.petals)


def _dominants(g: Graph, u: Vertex, v: Vertex) -> Tuple[Component, Component]:
    # D^v in Γ−st(u) and D^u in Γ−st(v)
    return dominant_component(g, u, v), dominant_component(g, v, u)


def crosses(g: Graph, p: BasedPartition, q: BasedPartition) -> bool:
    """
    Direct crossing test: petals P of p and Q of q meet while P avoids D^v
    and Q avoids D^u. Adjacent operative vertices never cross.
    """
    u, v = p.operative, q.operative
    if u == v:
        raise PartitionDomainError(f"both partitions are based at {u}")
    if u in star(g, v):
        return False
    d_v, d_u = _dominants(g, u, v)
    free_p = [P for P in p.petals if not d_v.vertices <= P]
    free_q = [Q for Q in q.petals if not d_u.vertices <= Q]
    return any(P & Q for P in free_p for Q in free_q)


def crosses_via_shared(g: Graph, p: BasedPartition, q: BasedPartition) -> bool:
    """Crossing through a shared component sitting in dominant-free petals."""
    u, v = p.operative, q.operative
    if u == v:
        raise PartitionDomainError(f"both partitions are based at {u}")
    if u in star(g, v):
        return False
    d_v, d_u = _dominants(g, u, v)
    for shared in shared_components(g, u, v):
        P = p.petals[p.petal_index(shared.minimum)]
        Q = q.petals[q.petal_index(shared.minimum)]
        if not d_v.vertices <= P and not d_u.vertices <= Q:
            return True
    return False


def compatible(g: Graph, p: BasedPartition, q: BasedPartition) -> bool:
    """Adjacent operative vertices, or no crossing."""
    if p.operative in star(g, q.operative) and p.operative != q.operative:
        return True
    return not crosses(g, p, q)


def _replace_petal(p: BasedPartition, index: int, part: Petal) -> BasedPartition:
    petal = p.petals[index]
    others = [other for i, other in enumerate(p.petals) if i != index]
    return BasedPartition.of(p.operative, others + [part, petal - part])


def split_petal(g: Graph, p: BasedPartition, index: int, part: Iterable[Vertex]) -> BasedPartition:
    """
    Replace petal `index` by {part, petal − part}.

    Raises:
        PartitionDomainError: If part is empty, improper or cuts a component
    """
    if not 0 <= index < p.length:
        raise PartitionDomainError(f"no petal #{index} at {p.operative}")
    chosen = frozenset(part)
    petal = p.petals[index]
    if not chosen or not chosen < petal:
        raise PartitionDomainError(
            f"split part {sorted(chosen)} must be a nonempty proper subset of {sorted(petal)}"
        )
    for component in components_minus_star(g, p.operative):
        if component.vertices & chosen and not component.vertices <= chosen:
            raise PartitionDomainError(
                f"split part {sorted(chosen)} cuts component {component!r} of Γ−st({p.operative})"
            )
    return _replace_petal(p, index, chosen)


def petal_components(g: Graph, p: BasedPartition, index: int) -> List[Component]:
    petal = p.petals[index]
    return [c for c in components_minus_star(g, p.operative) if c.vertices <= petal]


def binary_splits(g: Graph, p: BasedPartition, index: int) -> List[Tuple[Petal, BasedPartition]]:
    """
    Every binary split of a petal, once each.

    Parts never contain the petal's minimal component and are ordered by
    their sorted vertex lists.
    """
    _, *tail = petal_components(g, p, index)
    parts = [
        frozenset().union(*(c.vertices for c in chosen))
        for size in range(1, len(tail) + 1)
        for chosen in combinations(tail, size)
    ]
    parts.sort(key=lambda part: tuple(sorted(part)))
    return [(part, _replace_petal(p, index, part)) for part in parts]
