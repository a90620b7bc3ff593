"""
Exact homology: Betti vectors of ΣPOut and ΣPAut, the E¹ page of the
equivariant spectral sequence and reduced homology of poset subcomplexes.
"""
import logging
from collections import defaultdict
from dataclasses import dataclass, field
from itertools import combinations, product
from math import comb
from typing import Dict, Hashable, Iterable, Iterator, List, Optional, Sequence, Set, Tuple

import numpy as np

from whitehead.algebra.matrix import IntegerMatrix, rational_rank, smith_invariants
from whitehead.core.errors import ChainComplexError, DomainError
from whitehead.domain.essential import CanonicalGenerator, essential_counts
from whitehead.domain.graph import Graph, clique_counts, reduce_dominating
from whitehead.domain.poset import Chain, WhiteheadPoset
from whitehead.models.responses import BettiReport, E1RowReport
from whitehead.workers.processor import ChunkProcessor

logger = logging.getLogger(__name__)


@dataclass
class IntegerChainComplex:
    """C_0, ..., C_top with boundaries d_p: C_p -> C_{p−1}.

    With `augmented` the complex carries d_0: C_0 -> Z and its homology is
    the reduced homology.
    """

    dimensions: List[int]
    boundaries: Dict[int, IntegerMatrix] = field(default_factory=dict)
    labels: List[List[Hashable]] = field(default_factory=list)
    augmented: bool = False

    @property
    def top(self) -> int:
        return len(self.dimensions) - 1

    def boundary(self, p: int) -> IntegerMatrix:
        if p in self.boundaries:
            return self.boundaries[p]
        rows = 1 if (p == 0 and self.augmented) else (self.dimensions[p - 1] if 0 < p <= self.top + 1 else 0)
        cols = self.dimensions[p] if 0 <= p <= self.top else 0
        return IntegerMatrix(rows=rows, cols=cols)

    def verify(self) -> None:
        """
        Raises:
            ChainComplexError: On a dimension mismatch or d∘d ≠ 0
        """
        for p, matrix in self.boundaries.items():
            expected_rows = 1 if p == 0 else self.dimensions[p - 1]
            if matrix.shape != (expected_rows, self.dimensions[p]):
                raise ChainComplexError(
                    f"d_{p} has shape {matrix.shape}, expected ({expected_rows}, {self.dimensions[p]})"
                )
        for p in range(1, self.top + 1):
            if not self.boundary(p - 1).compose_is_zero(self.boundary(p)):
                column = self._first_nonzero_column(p)
                raise ChainComplexError(
                    f"d_{p - 1} ∘ d_{p} is not zero on cell {self.cell_name(p, column)}",
                    detail={"degree": p, "column": column},
                )

    def cell_name(self, p: int, k: int) -> str:
        """Label of the k-th basis cell in degree p, or its index when unlabelled."""
        if p < len(self.labels) and k < len(self.labels[p]):
            return repr(self.labels[p][k])
        return f"#{k}"

    def _first_nonzero_column(self, p: int) -> int:
        left, right = self.boundary(p - 1), self.boundary(p)
        left_columns: Dict[int, Dict[int, int]] = {}
        for (r, c), value in left.entries.items():
            left_columns.setdefault(c, {})[r] = value
        image: Dict[int, Dict[int, int]] = {}
        for (k, c), value in right.entries.items():
            column = image.setdefault(c, {})
            for r, coefficient in left_columns.get(k, {}).items():
                column[r] = column.get(r, 0) + coefficient * value
        return min(c for c, column in image.items() if any(column.values()))


def homology(complex_: IntegerChainComplex, torsion: bool = True) -> BettiReport:
    """
    Betti numbers (and torsion) of a chain complex.

    Args:
        complex_: Chain complex with consistent dimensions
        torsion: Use Smith invariants; False takes the rational-rank path

    Returns:
        BettiReport, reduced when the complex is augmented
    """
    if not complex_.dimensions or not any(complex_.dimensions):
        return BettiReport(betti=[], reduced=complex_.augmented, empty=True)

    for p, matrix in complex_.boundaries.items():
        expected_rows = 1 if p == 0 else complex_.dimensions[p - 1]
        if matrix.shape != (expected_rows, complex_.dimensions[p]):
            raise ChainComplexError(f"d_{p} has shape {matrix.shape}")

    ranks: Dict[int, int] = {}
    factors: Dict[int, List[int]] = {}
    first = 0 if complex_.augmented else 1
    for p in range(first, complex_.top + 1):
        matrix = complex_.boundary(p)
        if torsion:
            ranks[p], invariants = smith_invariants(matrix)
            nontrivial = [f for f in invariants if f > 1]
            if nontrivial and p >= 1:
                factors[p - 1] = nontrivial
        else:
            ranks[p] = rational_rank(matrix)

    betti = [
        complex_.dimensions[p] - ranks.get(p, 0) - ranks.get(p + 1, 0)
        for p in range(complex_.top + 1)
    ]
    return BettiReport(betti=betti, torsion=factors, reduced=complex_.augmented)


def faces(chain: Chain) -> Iterator[Tuple[int, Chain]]:
    """(i, chain with its i-th element removed)."""
    for i in range(len(chain)):
        yield i, chain[:i] + chain[i + 1:]


def closure(cells: Iterable[Chain]) -> Set[Chain]:
    """All nonempty faces of the given chains."""
    closed: Set[Chain] = set()
    for cell in cells:
        for size in range(1, len(cell) + 1):
            closed.update(combinations(cell, size))
    return closed


def simplicial_complex(cells: Iterable[Chain], close: bool = False) -> IntegerChainComplex:
    """
    Augmented chain complex of a set of ordered simplices.

    Raises:
        DomainError: If the cells are not closed under faces and close is False
    """
    given = set(cells)
    closed = closure(given)
    if closed != given:
        if not close:
            raise DomainError(
                "cells are not closed under taking faces",
                detail={"missing": len(closed - given)},
            )
        given = closed
    if not given:
        return IntegerChainComplex(dimensions=[], augmented=True)

    top = max(len(cell) for cell in given) - 1
    by_dim: List[List[Chain]] = [sorted(c for c in given if len(c) == d + 1) for d in range(top + 1)]
    index = [{cell: k for k, cell in enumerate(cells_d)} for cells_d in by_dim]
    boundaries = {0: IntegerMatrix(rows=1, cols=len(by_dim[0]), entries={(0, k): 1 for k in range(len(by_dim[0]))})}
    for d in range(1, top + 1):
        columns = []
        for cell in by_dim[d]:
            column: Dict[int, int] = {}
            for i, face in faces(cell):
                row = index[d - 1][face]
                column[row] = column.get(row, 0) + (-1) ** i
            columns.append(column)
        boundaries[d] = IntegerMatrix.from_columns(len(by_dim[d - 1]), columns)
    return IntegerChainComplex(
        dimensions=[len(c) for c in by_dim],
        boundaries=boundaries,
        labels=[list(c) for c in by_dim],
        augmented=True,
    )


def subcomplex_homology(cells: Iterable[Chain], close: bool = False) -> BettiReport:
    """Reduced simplicial homology of a set of order-complex cells."""
    return homology(simplicial_complex(cells, close=close))


def betti_psout(
    g: Graph,
    cap: Optional[int] = None,
    jobs: Optional[int] = None,
    poset: Optional[WhiteheadPoset] = None,
) -> List[int]:
    """Ranks of H^q(ΣPOut(A_Γ)): the essential counts of the reduced graph."""
    reduced = reduce_dominating(g)
    if reduced.n == 0:
        return [1]
    return essential_counts(reduced, poset=poset, cap=cap, jobs=jobs)


def convolve_counts(k_vector: Sequence[int], n_vector: Sequence[int]) -> List[int]:
    return [int(x) for x in np.convolve(np.asarray(k_vector, dtype=np.int64), np.asarray(n_vector, dtype=np.int64))]


def betti_psaut_direct(k_vector: Sequence[int], n_vector: Sequence[int]) -> List[int]:
    """Σ_{i+j=q} K_i·N_j summed term by term."""
    top = len(k_vector) + len(n_vector) - 2
    return [
        sum(k_vector[i] * n_vector[q - i] for i in range(len(k_vector)) if 0 <= q - i < len(n_vector))
        for q in range(top + 1)
    ]


def betti_psaut(
    g: Graph,
    cap: Optional[int] = None,
    jobs: Optional[int] = None,
    poset: Optional[WhiteheadPoset] = None,
) -> List[int]:
    """Ranks of H^q(ΣPAut(A_Γ)) = (K ∗ N)_q with N the clique counts of the reduced graph."""
    reduced = reduce_dominating(g)
    return convolve_counts(betti_psout(reduced, cap=cap, jobs=jobs, poset=poset), clique_counts(reduced))


def e1_dimensions(p: WhiteheadPoset) -> List[List[int]]:
    """D[d][q] = Σ over d-chains σ of C(rank τ⁰(σ), q)."""
    height = p.height
    table = [[0] * (height + 1) for _ in range(height + 1)]
    for d in range(height + 1):
        for chain in p.chains(d):
            r = p.ranks[chain[0]]
            for q in range(r + 1):
                table[d][q] += comb(r, q)
    return table


def e1_csv(table: List[List[int]]) -> str:
    lines = ["p,q,dim"]
    for d, row in enumerate(table):
        for q, value in enumerate(row):
            lines.append(f"{d},{q},{value}")
    return "\n".join(lines) + "\n"


def _permutation_sign(sequence: Sequence[CanonicalGenerator]) -> int:
    inversions = sum(
        1 for a in range(len(sequence)) for b in range(a + 1, len(sequence)) if sequence[b] < sequence[a]
    )
    return -1 if inversions % 2 else 1


def _refinements(
    p: WhiteheadPoset, low: int, high: int
) -> Dict[CanonicalGenerator, List[CanonicalGenerator]]:
    # each generator of B(τ⁰) as the sum of the generators of B(τ¹) inside its petal
    upper = sorted(p.basis(high))
    expansion = {}
    for generator in p.basis(low):
        pieces = [
            h for h in upper
            if h.operative == generator.operative and h.petal <= generator.petal
        ]
        covered = frozenset().union(*(h.petal for h in pieces))
        if covered != generator.petal:
            raise ChainComplexError(
                f"{generator!r} is not a union of canonical petals of element {high}"
            )
        expansion[generator] = pieces
    return expansion


def _corestriction(
    expansion: Dict[CanonicalGenerator, List[CanonicalGenerator]],
    subset: Tuple[CanonicalGenerator, ...],
) -> Iterator[Tuple[Tuple[CanonicalGenerator, ...], int]]:
    # q-th exterior power: e_{a1}∧…∧e_{aq} ↦ Σ sign · e_{sorted(c)}
    for choice in product(*(expansion[generator] for generator in subset)):
        yield tuple(sorted(choice)), _permutation_sign(choice)


def build_e1_row(p: WhiteheadPoset, q: int) -> IntegerChainComplex:
    """
    The row E¹_{•,q} with integer d¹.

    Degree-d basis: (d-chain σ, q-subset of B(τ⁰(σ))). Face i ≥ 1 relabels
    onto the face chain with sign (−1)^i; face 0 applies the exterior power
    of the petal-refinement matrix B(τ⁰) -> B(τ¹).
    """
    if q < 0:
        raise DomainError(f"row index must be non-negative, got {q}")
    labels: List[List[Tuple[Chain, Tuple[CanonicalGenerator, ...]]]] = []
    for d in range(p.height + 1):
        labels.append(
            [
                (chain, subset)
                for chain in p.chains(d)
                for subset in combinations(sorted(p.basis(chain[0])), q)
            ]
        )
    index = [{label: k for k, label in enumerate(level)} for level in labels]

    expansions: Dict[Tuple[int, int], Dict[CanonicalGenerator, List[CanonicalGenerator]]] = {}
    boundaries = {}
    for d in range(1, p.height + 1):
        columns = []
        for chain, subset in labels[d]:
            column: Dict[int, int] = defaultdict(int)
            for i, face in faces(chain):
                if i == 0:
                    continue
                column[index[d - 1][(face, subset)]] += (-1) ** i
            key = (chain[0], chain[1])
            if key not in expansions:
                expansions[key] = _refinements(p, *key)
            for image, sign in _corestriction(expansions[key], subset):
                column[index[d - 1][(chain[1:], image)]] += sign
            columns.append(dict(column))
        boundaries[d] = IntegerMatrix.from_columns(len(labels[d - 1]), columns)

    logger.debug("E¹ row %d dimensions %s", q, [len(level) for level in labels])
    return IntegerChainComplex(
        dimensions=[len(level) for level in labels],
        boundaries=boundaries,
        labels=[list(level) for level in labels],
    )


def _row_report(task: Tuple[WhiteheadPoset, int, int]) -> E1RowReport:
    p, q, expected = task
    row = build_e1_row(p, q)
    row.verify()
    return E1RowReport(q=q, dimensions=row.dimensions, homology=homology(row), expected_h0=expected)


def e1_homology(
    p: WhiteheadPoset, k_vector: Sequence[int], jobs: Optional[int] = None
) -> List[E1RowReport]:
    """Homology of every row q = 0..height; rows are reduced in parallel."""
    tasks = [(p, q, k_vector[q] if q < len(k_vector) else 0) for q in range(p.height + 1)]
    reports = ChunkProcessor(jobs).map(_row_report, tasks)
    for report in reports:
        logger.info(
            "E¹ row %d: H = %s (expected H_0 = %d)", report.q, report.homology.betti, report.expected_h0
        )
    return reports
