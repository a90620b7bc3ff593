"""
Degree-2 part of the ring R: the bases B₁ and B₂ and the map φ between them.

B₁ indexes the standard basis of H²(ΣPAut):
    Type 1  essential vertex types of rank 2
    Type 2  pairs (τ, j) with τ essential of rank 1 and j any vertex
    Type 3  edges of Γ

B₂ consists of the monomials γ_A^i γ_B^j over single components, excluding,
for non-adjacent i and j, equal shared components and the pair of dominant
components.
"""
import logging
from collections import Counter, defaultdict
from dataclasses import dataclass
from itertools import combinations
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple, Union

from whitehead.algebra.presentation import PartialConjugation, partial_conjugations
from whitehead.core.errors import CaseAnalysisError, DomainError
from whitehead.domain.essential import essential_flags
from whitehead.domain.graph import (
    ComponentClass,
    Edge,
    Graph,
    Vertex,
    classify_component,
    components_minus_star,
    dominant_component,
    minimal_component,
    minimal_vertex,
    shared_components,
    star,
)
from whitehead.domain.poset import VertexType, WhiteheadPoset
from whitehead.models.responses import PhiReport
from whitehead.workers.processor import ChunkProcessor

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class RingBasisElement:
    """γ_A^i γ_B^j with (i, min A) < (j, min B)."""

    first: PartialConjugation
    second: PartialConjugation

    @classmethod
    def of(cls, a: PartialConjugation, b: PartialConjugation) -> "RingBasisElement":
        if a == b:
            raise DomainError(f"{a!r} ∧ {a!r} is not a basis monomial")
        return cls(a, b) if a < b else cls(b, a)

    def __repr__(self) -> str:
        return f"γ[{self.first.symbol}]γ[{self.second.symbol}]"


@dataclass(frozen=True)
class Type1Element:
    tau: VertexType

    @property
    def label(self) -> str:
        return f"1:{self.tau!r}"


@dataclass(frozen=True)
class Type2Element:
    tau: VertexType
    j: Vertex

    @property
    def label(self) -> str:
        return f"2:{self.tau!r},{self.j}"


@dataclass(frozen=True)
class Type3Element:
    edge: Edge

    @property
    def label(self) -> str:
        return f"3:{self.edge[0]}-{self.edge[1]}"


B1Element = Union[Type1Element, Type2Element, Type3Element]


def _gamma(u: Vertex, vertices: Iterable[Vertex]) -> PartialConjugation:
    return PartialConjugation(u, frozenset(vertices))


def _is_component(g: Graph, label: PartialConjugation) -> bool:
    return any(c.vertices == label.component for c in components_minus_star(g, label.operative))


def _both_dominant(g: Graph, a: PartialConjugation, b: PartialConjugation) -> bool:
    return (
        a.component == dominant_component(g, a.operative, b.operative).vertices
        and b.component == dominant_component(g, b.operative, a.operative).vertices
    )


def in_b2(g: Graph, element: RingBasisElement) -> bool:
    """Membership test for B₂."""
    a, b = element.first, element.second
    if a == b or not (a < b):
        return False
    if not (_is_component(g, a) and _is_component(g, b)):
        return False
    if a.operative in star(g, b.operative):
        return True
    if a.component == b.component:
        # equal component sets of two non-adjacent vertices are shared
        return False
    return not _both_dominant(g, a, b)


def enumerate_B2(g: Graph) -> List[RingBasisElement]:
    """All B₂ monomials, sorted by their labels."""
    elements = [
        RingBasisElement(a, b)
        for a, b in combinations(partial_conjugations(g), 2)
        if in_b2(g, RingBasisElement(a, b))
    ]
    logger.debug("B₂ has %d elements", len(elements))
    return elements


def enumerate_B1(
    g: Graph, p: WhiteheadPoset, flags: Optional[Sequence[bool]] = None
) -> List[B1Element]:
    """
    Type 1, then Type 2, then Type 3 elements.

    Args:
        g: Reduced graph
        p: Its Whitehead poset
        flags: Precomputed essential flags of p, if any
    """
    flags = essential_flags(p) if flags is None else flags
    rank_two = [tau for tau, flag in zip(p.elements, flags) if flag and tau.rank == 2]
    rank_one = [tau for tau, flag in zip(p.elements, flags) if flag and tau.rank == 1]
    elements: List[B1Element] = [Type1Element(tau) for tau in rank_two]
    elements.extend(Type2Element(tau, j) for tau in rank_one for j in g.vertices)
    elements.extend(Type3Element(edge) for edge in sorted(g.edges))
    return elements


def _upper_petals(g: Graph, tau: VertexType, v: Vertex) -> Tuple[FrozenSet[Vertex], ...]:
    # petals avoiding the minimal element; petal 0 always holds it
    return tau.part(v).petals[1:]


def _type1(g: Graph, tau: VertexType) -> Tuple[RingBasisElement, str]:
    nontrivial = tau.nontrivial
    if len(nontrivial) == 1 and tau.part(nontrivial[0]).length == 3:
        i = nontrivial[0]
        p2, p3 = _upper_petals(g, tau, i)
        return RingBasisElement.of(_gamma(i, p2), _gamma(i, p3)), "1.1"

    if len(nontrivial) != 2 or any(tau.part(v).length != 2 for v in nontrivial):
        raise CaseAnalysisError(f"{tau!r} is not a rank 2 vertex type", detail={"tau": repr(tau)})

    first, second = nontrivial
    if first not in star(g, second):
        for i, j in ((first, second), (second, first)):
            p1, (p2,) = tau.part(i).petals[0], _upper_petals(g, tau, i)
            (q2,) = _upper_petals(g, tau, j)
            d_j = dominant_component(g, i, j).vertices
            d_i = dominant_component(g, j, i).vertices
            if d_j <= p1 and d_i < q2:
                return RingBasisElement.of(_gamma(i, p2), _gamma(j, d_i)), "1.2.1"

    (p2,) = _upper_petals(g, tau, first)
    (q2,) = _upper_petals(g, tau, second)
    return RingBasisElement.of(_gamma(first, p2), _gamma(second, q2)), "1.2.2"


def _type2(g: Graph, tau: VertexType, b: Vertex) -> Tuple[RingBasisElement, str]:
    nontrivial = tau.nontrivial
    if len(nontrivial) != 1 or tau.part(nontrivial[0]).length != 2:
        raise CaseAnalysisError(f"{tau!r} is not a rank 1 vertex type", detail={"tau": repr(tau)})
    a = nontrivial[0]
    (p2,) = _upper_petals(g, tau, a)
    u_b = minimal_component(g, b).vertices

    if a not in star(g, b):
        min_a, min_b = minimal_vertex(g, a), minimal_vertex(g, b)
        d_b = dominant_component(g, a, b).vertices  # component of Γ−st(a) holding b
        d_a = dominant_component(g, b, a).vertices  # component of Γ−st(b) holding a
        u_a = minimal_component(g, a)
        shared = {c.vertices for c in shared_components(g, a, b)}
        if min_a != min_b:
            if u_b in shared and min_a in d_b and p2 == u_b:
                return RingBasisElement.of(_gamma(a, d_b), _gamma(b, u_b)), "2.1.1"
            if u_a.vertices in shared and min_b in d_a and p2 == d_b:
                return RingBasisElement.of(_gamma(a, d_b), _gamma(b, u_a.vertices)), "2.1.2"
        subordinate = classify_component(g, a, b, u_a) is ComponentClass.SUBORDINATE
        if min_b in d_a and subordinate and p2 == d_b:
            return RingBasisElement.of(_gamma(a, u_a.vertices), _gamma(b, d_a)), "2.2"

    return RingBasisElement.of(_gamma(a, p2), _gamma(b, u_b)), "2.3"


def _type3(g: Graph, edge: Edge) -> Tuple[RingBasisElement, str]:
    i, j = edge
    return (
        RingBasisElement.of(
            _gamma(i, minimal_component(g, i).vertices),
            _gamma(j, minimal_component(g, j).vertices),
        ),
        "3",
    )


def phi_case(g: Graph, e: B1Element) -> Tuple[RingBasisElement, str]:
    """
    Image of a B₁ element together with the label of the case that fired.

    Raises:
        CaseAnalysisError: If the element fits no case or the image leaves B₂
    """
    if isinstance(e, Type1Element):
        image, case = _type1(g, e.tau)
    elif isinstance(e, Type2Element):
        image, case = _type2(g, e.tau, e.j)
    elif isinstance(e, Type3Element):
        image, case = _type3(g, e.edge)
    else:
        raise CaseAnalysisError(f"unknown B₁ element {e!r}")
    if not in_b2(g, image):
        raise CaseAnalysisError(
            f"case {case} sends {e.label} outside B₂: {image!r}",
            detail={"element": e.label, "case": case, "image": repr(image)},
        )
    return image, case


def phi(g: Graph, e: B1Element) -> RingBasisElement:
    return phi_case(g, e)[0]


def _phi_chunk(task: Tuple[Graph, List[B1Element]]) -> List[Tuple[RingBasisElement, str]]:
    g, elements = task
    return [phi_case(g, e) for e in elements]


def verify_phi(g: Graph, p: WhiteheadPoset, jobs: Optional[int] = None) -> PhiReport:
    """
    Check that φ lands in B₂, is injective and that |B₁| = |B₂|.

    Args:
        g: Reduced graph
        p: Its Whitehead poset
        jobs: Worker processes for the image computation

    Returns:
        PhiReport with colliding B₁ labels and a census of the cases used
    """
    b1 = enumerate_B1(g, p, essential_flags(p, jobs))
    b2 = set(enumerate_B2(g))

    processor = ChunkProcessor(jobs)
    chunks = processor.chunk(b1, processor.jobs * 4)
    images: List[Tuple[RingBasisElement, str]] = []
    for result in processor.map(_phi_chunk, [(g, chunk) for chunk in chunks]):
        images.extend(result)

    preimages: Dict[RingBasisElement, List[str]] = defaultdict(list)
    for e, (image, _) in zip(b1, images):
        preimages[image].append(e.label)
    collisions = [
        [labels[0], other] for labels in preimages.values() if len(labels) > 1 for other in labels[1:]
    ]
    report = PhiReport(
        b1_size=len(b1),
        b2_size=len(b2),
        injective=not collisions,
        image_in_b2=all(image in b2 for image, _ in images),
        collisions=collisions,
        case_counts=dict(sorted(Counter(case for _, case in images).items())),
    )
    logger.info(
        "φ: |B₁|=%d |B₂|=%d injective=%s cases=%s",
        report.b1_size, report.b2_size, report.injective, report.case_counts,
    )
    return report


def reduce_monomial(
    g: Graph, a: PartialConjugation, b: PartialConjugation
) -> Dict[RingBasisElement, int]:
    """
    Rewrite γ_a γ_b in the B₂ basis.

    Swapping the factors costs a sign. Squares and the product of the two
    dominant components vanish; a shared component C gives
    γ_C^i γ_C^j = γ_C^i γ_{D^i}^j + γ_{D^j}^i γ_C^j.

    Raises:
        DomainError: If a label is not a single component
    """
    for label in (a, b):
        if not _is_component(g, label):
            raise DomainError(f"{label!r} is not a component of Γ−st({label.operative})")
    if a == b:
        return {}
    sign = 1 if a < b else -1
    first, second = (a, b) if a < b else (b, a)
    i, j = first.operative, second.operative
    if i in star(g, j):
        return {RingBasisElement(first, second): sign}
    if _both_dominant(g, first, second):
        return {}
    if first.component == second.component:
        shared = first.component
        d_i = dominant_component(g, j, i).vertices
        d_j = dominant_component(g, i, j).vertices
        return {
            RingBasisElement(_gamma(i, shared), _gamma(j, d_i)): sign,
            RingBasisElement(_gamma(i, d_j), _gamma(j, shared)): sign,
        }
    return {RingBasisElement(first, second): sign}
