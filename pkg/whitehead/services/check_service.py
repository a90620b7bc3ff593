"""
Property suites behind the `check` subcommand.

Each suite returns None when it holds and a short failure description
otherwise; CheckService wraps the outcome in a CheckResult.
"""
import logging
import random
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from typing import Callable, Dict, List, Optional, Sequence

from whitehead.algebra.homology import (
    betti_psaut_direct,
    build_e1_row,
    convolve_counts,
    e1_dimensions,
    e1_homology,
    subcomplex_homology,
)
from whitehead.algebra.presentation import (
    IDENTITY,
    PartialConjugation,
    failing_relations,
    phi_assignments,
    presentation,
)
from whitehead.algebra.ring import enumerate_B2, in_b2, reduce_monomial, verify_phi
from whitehead.core.config import settings
from whitehead.core.errors import DomainError, WhiteheadError
from whitehead.domain.essential import (
    canonical_basis,
    cone_point,
    essential_cover,
    essential_flags,
    free_group_essential_counts,
    worrisome_petals,
)
from whitehead.domain.graph import (
    Graph,
    classify_component,
    clique_counts,
    components_minus_star,
    dominant_component,
    non_adjacent_pairs,
    partial_conjugation_count,
    reduce_dominating,
    shared_components,
    star,
)
from whitehead.domain.partition import (
    crosses,
    crosses_via_shared,
    enumerate_based_partitions,
    refines,
)
from whitehead.domain.poset import SubcomplexKind, WhiteheadPoset, leq, nuclear_type, subcomplex_cells
from whitehead.models.responses import CheckReport, CheckResult, PosetDocument
from whitehead.services.analysis_service import AnalysisService, analysis_service

logger = logging.getLogger(__name__)

# beyond this many elements the order axioms are sampled
EXHAUSTIVE_ORDER_LIMIT = 200


@dataclass
class CheckContext:
    """Everything the suites share for one graph."""

    graph: Graph
    poset: WhiteheadPoset
    rng: random.Random
    trials: int
    jobs: Optional[int] = None

    @cached_property
    def flags(self) -> List[bool]:
        return essential_flags(self.poset, self.jobs)

    @cached_property
    def k_vector(self) -> List[int]:
        counts = [0] * (self.poset.height + 1)
        for r, flag in zip(self.poset.ranks, self.flags):
            if flag:
                counts[r] += 1
        return counts


Suite = Callable[[CheckContext], Optional[str]]


def _graph_components(ctx: CheckContext) -> Optional[str]:
    g = ctx.graph
    for v in g.vertices:
        components = components_minus_star(g, v)
        covered = frozenset().union(*(c.vertices for c in components))
        if covered != frozenset(g.vertices) - star(g, v):
            return f"components of Γ−st({v}) do not cover its vertices"
        if sum(len(c) for c in components) != len(covered):
            return f"components of Γ−st({v}) overlap"
    for u, v in non_adjacent_pairs(g):
        for a, b in ((u, v), (v, u)):
            classes = [classify_component(g, a, b, c).value for c in components_minus_star(g, a)]
            if classes.count("Dominant") != 1:
                return f"Γ−st({a}) has {classes.count('Dominant')} dominant components for {b}"
    return None


def _partition_pairs(g: Graph):
    options = {v: enumerate_based_partitions(g, v) for v in g.vertices}
    for u, v in non_adjacent_pairs(g):
        for p in options[u]:
            for q in options[v]:
                yield p, q


def _crossing_equivalence(ctx: CheckContext) -> Optional[str]:
    for p, q in _partition_pairs(ctx.graph):
        if crosses(ctx.graph, p, q) != crosses_via_shared(ctx.graph, p, q):
            return f"crossing tests disagree on {p!r}, {q!r}"
    return None


def _crossing_symmetry(ctx: CheckContext) -> Optional[str]:
    for p, q in _partition_pairs(ctx.graph):
        if crosses(ctx.graph, p, q) != crosses(ctx.graph, q, p):
            return f"crossing is not symmetric on {p!r}, {q!r}"
    return None


def _refinement_order(ctx: CheckContext) -> Optional[str]:
    for v in ctx.graph.vertices:
        options = enumerate_based_partitions(ctx.graph, v)
        for p in options:
            if not refines(p, p):
                return f"{p!r} does not refine itself"
        for p, q in combinations(options, 2):
            if refines(p, q) and refines(q, p):
                return f"{p!r} and {q!r} refine each other"
            if refines(p, q) and p.length > q.length:
                return f"{p!r} ≤ {q!r} but is longer"
        for p in options:
            for q in options:
                if not refines(p, q):
                    continue
                for r in options:
                    if refines(q, r) and not refines(p, r):
                        return f"refinement not transitive on {p!r}, {q!r}, {r!r}"
    return None


def _poset_order_axioms(ctx: CheckContext) -> Optional[str]:
    p = ctx.poset
    if p.elements[0] != nuclear_type(ctx.graph):
        return "element 0 is not the nuclear type"
    for low, high in p.hasse_edges:
        if p.ranks[high] != p.ranks[low] + 1 or not leq(p.elements[low], p.elements[high]):
            return f"Hasse edge ({low}, {high}) is not a rank-one refinement"
    indices = range(len(p))
    if len(p) <= EXHAUSTIVE_ORDER_LIMIT:
        pairs = [(i, j) for i in indices for j in indices]
    else:
        pairs = [(ctx.rng.randrange(len(p)), ctx.rng.randrange(len(p))) for _ in range(ctx.trials)]
    for i, j in pairs:
        if p.leq_index(i, j) != leq(p.elements[i], p.elements[j]):
            return f"order by index disagrees with refinement on ({i}, {j})"
        if i != j and p.leq_index(i, j) and p.leq_index(j, i):
            return f"elements {i} and {j} are mutually below each other"
    if p.chain_counts()[0] != len(p):
        return "0-chains do not match the elements"
    return None


def _canonical_basis_size(ctx: CheckContext) -> Optional[str]:
    for i, tau in enumerate(ctx.poset.elements):
        if len(canonical_basis(ctx.graph, tau)) != tau.rank:
            return f"|B(τ)| ≠ rank for element {i}"
    return None


def _cone_point_roundtrip(ctx: CheckContext) -> Optional[str]:
    for i, tau in enumerate(ctx.poset.elements):
        if cone_point(ctx.graph, ctx.poset.basis(i)) != tau:
            return f"τ(B(τ)) ≠ τ for element {i}"
    return None


def _k1_formula(ctx: CheckContext) -> Optional[str]:
    expected = sum(len(components_minus_star(ctx.graph, v)) - 1 for v in ctx.graph.vertices)
    found = ctx.k_vector[1] if len(ctx.k_vector) > 1 else 0
    return None if found == expected else f"K₁ = {found}, expected {expected}"


def _essential_three_way(ctx: CheckContext) -> Optional[str]:
    p = ctx.poset
    for i, (tau, flag) in enumerate(zip(p.elements, ctx.flags)):
        no_worrisome = not worrisome_petals(ctx.graph, tau)
        peripheral_empty = not subcomplex_cells(p, p.basis(i), SubcomplexKind.PERIPHERAL)
        if not flag == no_worrisome == peripheral_empty:
            return f"essential characterizations disagree on element {i}"
    return None


def _essential_cover_order(ctx: CheckContext) -> Optional[str]:
    for i, (tau, flag) in enumerate(zip(ctx.poset.elements, ctx.flags)):
        if flag:
            continue
        cover, s = essential_cover(ctx.graph, tau)
        if s != cover.rank - tau.rank or not leq(tau, cover):
            return f"essential cover of element {i} is not a refinement of rank +{s}"
        for _ in range(ctx.trials):
            if essential_cover(ctx.graph, tau, rng=ctx.rng) != (cover, s):
                return f"random split order changed the cover of element {i}"
    return None


def _free_group_formula(ctx: CheckContext) -> Optional[str]:
    if ctx.graph.edges:
        return None
    expected = free_group_essential_counts(ctx.graph.n)
    return None if ctx.k_vector == expected else f"K = {ctx.k_vector}, closed form {expected}"


def _e1_dd_zero(ctx: CheckContext) -> Optional[str]:
    for q in range(ctx.poset.height + 1):
        try:
            build_e1_row(ctx.poset, q).verify()
        except WhiteheadError as exc:
            return f"row {q}: {exc.message}"
    return None


def _e1_concentration(ctx: CheckContext) -> Optional[str]:
    for report in e1_homology(ctx.poset, ctx.k_vector, jobs=ctx.jobs):
        if not report.concentrated:
            return f"row {report.q} has homology {report.homology.betti}, expected [{report.expected_h0}]"
    return None


def _e1_euler(ctx: CheckContext) -> Optional[str]:
    table = e1_dimensions(ctx.poset)
    for q, k in enumerate(ctx.k_vector):
        euler = sum((-1) ** d * table[d][q] for d in range(len(table)))
        if euler != k:
            return f"row {q} has Euler characteristic {euler}, expected {k}"
    return None


def _psaut_convolution(ctx: CheckContext) -> Optional[str]:
    n_vector = clique_counts(ctx.graph)
    fast, direct = convolve_counts(ctx.k_vector, n_vector), betti_psaut_direct(ctx.k_vector, n_vector)
    if fast != direct:
        return f"convolution {fast} disagrees with direct sum {direct}"
    degree_one = fast[1] if len(fast) > 1 else 0
    if degree_one != partial_conjugation_count(ctx.graph):
        return f"degree-1 Betti number {degree_one} is not the partial conjugation count"
    return None


def _cone_contractible(ctx: CheckContext) -> Optional[str]:
    p = ctx.poset
    for i, tau in enumerate(p.elements):
        if tau.rank > 2:
            continue
        cells = subcomplex_cells(p, p.basis(i), SubcomplexKind.CONE)
        report = subcomplex_homology(cells)
        if not report.acyclic:
            return f"C(B(τ)) for element {i} has reduced homology {report.betti}"
    return None


def _peripheral_contractible(ctx: CheckContext) -> Optional[str]:
    p = ctx.poset
    for i, (tau, flag) in enumerate(zip(p.elements, ctx.flags)):
        if tau.rank != 1 or flag:
            continue
        report = subcomplex_homology(subcomplex_cells(p, p.basis(i), SubcomplexKind.PERIPHERAL))
        if not report.acyclic:
            return f"Peripheral for element {i} has reduced homology {report.betti}"
    return None


def _support_equals_cone(ctx: CheckContext) -> Optional[str]:
    p = ctx.poset
    for i, flag in enumerate(ctx.flags):
        if not flag:
            continue
        family = p.basis(i)
        support = set(subcomplex_cells(p, family, SubcomplexKind.SUPP))
        if support != set(subcomplex_cells(p, family, SubcomplexKind.CONE)):
            return f"supp ≠ C for essential element {i}"
    return None


def _ring_degree2(ctx: CheckContext) -> Optional[str]:
    psaut = convolve_counts(ctx.k_vector, clique_counts(ctx.graph))
    expected = psaut[2] if len(psaut) > 2 else 0
    report = verify_phi(ctx.graph, ctx.poset, jobs=ctx.jobs)
    if report.b2_size != expected:
        return f"|B₂| = {report.b2_size}, expected {expected}"
    if not report.ok:
        return f"φ check failed: {report.collisions[:3]}"
    return None


def _ring_relation_four(ctx: CheckContext) -> Optional[str]:
    g = ctx.graph
    basis = set(enumerate_B2(g))
    for u, v in non_adjacent_pairs(g):
        both = reduce_monomial(
            g,
            PartialConjugation(u, dominant_component(g, u, v).vertices),
            PartialConjugation(v, dominant_component(g, v, u).vertices),
        )
        if both:
            return f"product of dominant components at ({u}, {v}) does not vanish"
        for shared in shared_components(g, u, v):
            terms = reduce_monomial(
                g, PartialConjugation(u, shared.vertices), PartialConjugation(v, shared.vertices)
            )
            if len(terms) != 2 or set(terms.values()) != {1} or not set(terms) <= basis:
                return f"shared component {shared!r} at ({u}, {v}) reduces to {terms}"
    for element in basis:
        swapped = reduce_monomial(g, element.second, element.first)
        if swapped != {element: -1} or not in_b2(g, element):
            return f"graded commutativity fails on {element!r}"
    return None


def _presentation_homomorphisms(ctx: CheckContext) -> Optional[str]:
    g = ctx.graph
    pres = presentation(g)
    corrupted_rejected = None
    for u, v in non_adjacent_pairs(g):
        for i, j in ((u, v), (v, u)):
            failing = failing_relations(pres, phi_assignments(g, i, j))
            if failing:
                return f"φ₁ at ({i}, {j}) breaks {failing[0]}"
            for shared in shared_components(g, i, j):
                assign = phi_assignments(g, i, j, shared)
                failing = failing_relations(pres, assign)
                if failing:
                    return f"φ₂ at ({i}, {j}, {shared!r}) breaks {failing[0]}"
                assign[PartialConjugation(i, shared.vertices).symbol] = IDENTITY
                rejected = bool(failing_relations(pres, assign))
                corrupted_rejected = rejected if corrupted_rejected is None else corrupted_rejected and rejected
    if corrupted_rejected is False:
        return "a corrupted assignment was accepted"
    return None


def _cache_roundtrip(ctx: CheckContext) -> Optional[str]:
    document = ctx.poset.to_document()
    restored = WhiteheadPoset.from_document(PosetDocument.model_validate_json(document.model_dump_json()))
    if restored.elements != ctx.poset.elements or restored.hasse_edges != ctx.poset.hasse_edges:
        return "serialized poset does not restore element-wise"
    return None


SUITES: Dict[str, Suite] = {
    "graph_components": _graph_components,
    "crossing_equivalence": _crossing_equivalence,
    "crossing_symmetry": _crossing_symmetry,
    "refinement_order": _refinement_order,
    "poset_order_axioms": _poset_order_axioms,
    "canonical_basis_size": _canonical_basis_size,
    "cone_point_roundtrip": _cone_point_roundtrip,
    "k1_formula": _k1_formula,
    "essential_three_way": _essential_three_way,
    "essential_cover_order": _essential_cover_order,
    "free_group_formula": _free_group_formula,
    "e1_dd_zero": _e1_dd_zero,
    "e1_concentration": _e1_concentration,
    "e1_euler": _e1_euler,
    "psaut_convolution": _psaut_convolution,
    "cone_contractible": _cone_contractible,
    "peripheral_contractible": _peripheral_contractible,
    "support_equals_cone": _support_equals_cone,
    "ring_degree2": _ring_degree2,
    "ring_relation_four": _ring_relation_four,
    "presentation_homomorphisms": _presentation_homomorphisms,
    "cache_roundtrip": _cache_roundtrip,
}


class CheckService:
    """Runs named property suites against one graph."""

    def __init__(self, analysis: Optional[AnalysisService] = None):
        self.analysis = analysis if analysis is not None else analysis_service

    def context(
        self,
        graph: Graph,
        seed: Optional[int] = None,
        trials: Optional[int] = None,
        cap: Optional[int] = None,
        jobs: Optional[int] = None,
    ) -> CheckContext:
        poset, _ = self.analysis.load_poset(graph, cap=cap, jobs=jobs)
        return CheckContext(
            graph=reduce_dominating(graph),
            poset=poset,
            rng=random.Random(settings.seed if seed is None else seed),
            trials=settings.property_trials if trials is None else trials,
            jobs=jobs,
        )

    def run_suite(self, name: str, ctx: CheckContext) -> CheckResult:
        """
        Run one suite.

        Raises:
            KeyError: If the suite name is unknown
        """
        suite = SUITES[name]
        try:
            failure = suite(ctx)
        except WhiteheadError as exc:
            failure = f"{exc.error}: {exc.message}"
        passed = failure is None
        logger.info("Suite %s %s", name, "passed" if passed else f"FAILED: {failure}")
        return CheckResult(name=name, passed=passed, detail=failure)

    def run(
        self,
        graph: Graph,
        suites: Optional[Sequence[str]] = None,
        seed: Optional[int] = None,
        trials: Optional[int] = None,
        cap: Optional[int] = None,
        jobs: Optional[int] = None,
    ) -> CheckReport:
        """
        Run the selected suites (all by default).

        Raises:
            DomainError: If a suite name is unknown
            ResourceCapError: If enumeration exceeds cap
        """
        names = list(suites) if suites else list(SUITES)
        unknown = [name for name in names if name not in SUITES]
        if unknown:
            raise DomainError(f"unknown suites: {unknown}", detail={"known": list(SUITES)})
        ctx = self.context(graph, seed=seed, trials=trials, cap=cap, jobs=jobs)
        results = [self.run_suite(name, ctx) for name in names]
        return CheckReport(graph=self.analysis.summary(graph), results=results)


# Global check service instance
check_service = CheckService()
