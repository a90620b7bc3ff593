"""
Canonical generators, worrisome petals and essential vertex types.

A canonical generator (j, I) is a petal I of some τ_j avoiding the minimal
element of Γ−st(v_j). A vertex type is essential when no petal avoiding
the minimal element can be split without creating a crossing.
"""
import logging
import random
from collections import defaultdict
from dataclasses import dataclass
from functools import total_ordering
from itertools import combinations
from math import comb
from typing import Dict, FrozenSet, Iterable, List, Optional, Tuple

from whitehead.core.errors import DomainError, IncompatibleGeneratorsError
from whitehead.domain.graph import Graph, Vertex, components_minus_star, minimal_vertex
from whitehead.domain.partition import BasedPartition, binary_splits, compatible
from whitehead.domain.poset import VertexType, WhiteheadPoset, enumerate_poset, is_vertex_type
from whitehead.workers.processor import ChunkProcessor

logger = logging.getLogger(__name__)


@total_ordering
@dataclass(frozen=True)
class CanonicalGenerator:
    """The partial conjugation C_I^j (dually γ_I^j) with min(Γ−st(v_j)) ∉ I."""

    operative: Vertex
    petal: FrozenSet[Vertex]

    @classmethod
    def of(cls, operative: Vertex, petal: Iterable[Vertex]) -> "CanonicalGenerator":
        return cls(operative=operative, petal=frozenset(petal))

    @property
    def sort_key(self) -> Tuple[Vertex, Tuple[Vertex, ...]]:
        return (self.operative, tuple(sorted(self.petal)))

    def __lt__(self, other: "CanonicalGenerator") -> bool:
        return self.sort_key < other.sort_key

    def __repr__(self) -> str:
        return f"C{self.operative}:{','.join(map(str, sorted(self.petal)))}"


GeneratorSet = FrozenSet[CanonicalGenerator]


def canonical_basis(g: Graph, tau: VertexType) -> GeneratorSet:
    """B(τ): every petal of τ that avoids the minimal element at its vertex."""
    basis = set()
    for part in tau.parts:
        minimum = minimal_vertex(g, part.operative)
        basis.update(
            CanonicalGenerator(part.operative, petal) for petal in part.petals if minimum not in petal
        )
    return frozenset(basis)


def sorted_basis(g: Graph, tau: VertexType) -> List[CanonicalGenerator]:
    return sorted(canonical_basis(g, tau))


def _others(tau: VertexType, j: Vertex) -> List[BasedPartition]:
    return [p for p in tau.parts if p.operative != j]


def admissible_splits(
    g: Graph, tau: VertexType, j: Vertex, index: int
) -> List[Tuple[FrozenSet[Vertex], BasedPartition]]:
    """Binary splits of petal `index` of τ_j that keep τ a vertex type."""
    others = _others(tau, j)
    return [
        (part, candidate)
        for part, candidate in binary_splits(g, tau.part(j), index)
        if all(compatible(g, candidate, q) for q in others)
    ]


def splittable_petals(g: Graph, tau: VertexType, j: Vertex) -> List[int]:
    """Indices of petals of τ_j admitting at least one admissible binary split."""
    return [
        index for index in range(tau.part(j).length) if admissible_splits(g, tau, j, index)
    ]


def worrisome_petals(g: Graph, tau: VertexType) -> List[Tuple[Vertex, int]]:
    """Splittable petals that avoid the minimal element, by vertex then petal."""
    found = []
    for part in tau.parts:
        minimum = minimal_vertex(g, part.operative)
        for index in splittable_petals(g, tau, part.operative):
            if minimum not in part.petals[index]:
                found.append((part.operative, index))
    return found


def is_essential(g: Graph, tau: VertexType) -> bool:
    return not worrisome_petals(g, tau)


def essential_cover(
    g: Graph, tau: VertexType, rng: Optional[random.Random] = None
) -> Tuple[VertexType, int]:
    """
    Split worrisome petals until none remains.

    Without rng the lowest vertex, its first worrisome petal and the least
    split part are taken; with rng both choices are random.

    Returns:
        (essential cover, s) with s the rank difference
    """
    current = tau
    while True:
        worrisome = worrisome_petals(g, current)
        if not worrisome:
            return current, current.rank - tau.rank
        if rng is None:
            j, index = worrisome[0]
            _, refined = admissible_splits(g, current, j, index)[0]
        else:
            j, index = rng.choice(worrisome)
            _, refined = rng.choice(admissible_splits(g, current, j, index))
        current = current.replace(refined)


def validate_generator(g: Graph, generator: CanonicalGenerator) -> CanonicalGenerator:
    """
    Raises:
        DomainError: If the petal is not a canonical union of components
    """
    j, petal = generator.operative, generator.petal
    components = components_minus_star(g, j)
    if not petal:
        raise DomainError(f"{generator!r} has an empty petal")
    if minimal_vertex(g, j) in petal:
        raise DomainError(f"{generator!r} contains the minimal element of Γ−st({j})")
    for component in components:
        if component.vertices & petal and not component.vertices <= petal:
            raise DomainError(f"{generator!r} cuts component {component!r}")
    if not petal <= frozenset().union(*(c.vertices for c in components)):
        raise DomainError(f"{generator!r} leaves Γ−st({j})")
    return generator


def cone_point(g: Graph, generators: Iterable[CanonicalGenerator]) -> VertexType:
    """
    τ(A): at each vertex the petals of A plus the remainder M.

    Raises:
        IncompatibleGeneratorsError: If petals overlap or the result crosses
    """
    petals: Dict[Vertex, List[FrozenSet[Vertex]]] = defaultdict(list)
    for generator in generators:
        if not g.has_vertex(generator.operative):
            raise DomainError(f"{generator!r} is based at an unknown vertex")
        validate_generator(g, generator)
        petals[generator.operative].append(generator.petal)

    parts = []
    for v in g.vertices:
        whole = frozenset().union(*(c.vertices for c in components_minus_star(g, v)))
        used: set = set()
        for petal in petals.get(v, []):
            if used & petal:
                raise IncompatibleGeneratorsError(
                    f"overlapping petals at {v}", detail={"vertex": v}
                )
            used |= petal
        parts.append(BasedPartition.of(v, petals.get(v, []) + [whole - used]))

    tau = VertexType(tuple(parts))
    if not is_vertex_type(g, tau):
        raise IncompatibleGeneratorsError(f"generators cross: {sorted(petals.items())}")
    return tau


def all_canonical_generators(g: Graph) -> List[CanonicalGenerator]:
    """Every canonical (j, I), sorted."""
    found = []
    for v in g.vertices:
        _, *rest = components_minus_star(g, v)
        for size in range(1, len(rest) + 1):
            for chosen in combinations(rest, size):
                found.append(
                    CanonicalGenerator(v, frozenset().union(*(c.vertices for c in chosen)))
                )
    return sorted(found)


def compatible_families(g: Graph, max_size: int) -> List[GeneratorSet]:
    """All compatible generator sets with at most max_size members."""
    universe = all_canonical_generators(g)
    families: List[GeneratorSet] = []
    for size in range(max_size + 1):
        for chosen in combinations(universe, size):
            try:
                cone_point(g, chosen)
            except IncompatibleGeneratorsError:
                continue
            families.append(frozenset(chosen))
    return families


def filtration_degree(g: Graph, generators: Iterable[CanonicalGenerator]) -> int:
    """s(A): the number of splits from τ(A) to its essential cover."""
    return essential_cover(g, cone_point(g, generators))[1]


def _essential_chunk(task: Tuple[Graph, List[VertexType]]) -> List[bool]:
    g, types = task
    return [is_essential(g, tau) for tau in types]


def essential_flags(p: WhiteheadPoset, jobs: Optional[int] = None) -> List[bool]:
    """is_essential for every element, in element order."""
    processor = ChunkProcessor(jobs)
    chunks = processor.chunk(p.elements, processor.jobs * 4)
    flags: List[bool] = []
    for result in processor.map(_essential_chunk, [(p.graph, chunk) for chunk in chunks]):
        flags.extend(result)
    return flags


def essential_counts(
    g: Graph,
    poset: Optional[WhiteheadPoset] = None,
    cap: Optional[int] = None,
    jobs: Optional[int] = None,
) -> List[int]:
    """
    K[q] = number of essential vertex types of rank q.

    Args:
        g: Reduced graph
        poset: Previously enumerated poset of g, if any
        cap: Element cap for enumeration
        jobs: Worker processes

    Returns:
        K, one entry per rank up to the poset height
    """
    poset = poset if poset is not None else enumerate_poset(g, cap=cap, jobs=jobs)
    counts = [0] * (poset.height + 1)
    for r, flag in zip(poset.ranks, essential_flags(poset, jobs)):
        if flag:
            counts[r] += 1
    logger.info("Essential counts %s", counts)
    return counts


def free_group_essential_counts(n: int) -> List[int]:
    """Closed form for the edgeless graph on n vertices: K_q = C(n−2, q)·n^q."""
    if n < 2:
        return [1]
    return [comb(n - 2, q) * n**q for q in range(n - 1)]
