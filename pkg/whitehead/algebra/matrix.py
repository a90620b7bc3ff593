"""
Sparse exact integer matrices.

Smith invariants are computed in two stages: unit pivots are eliminated
on sparse rows of Python integers, then whatever is left (typically tiny)
goes to sympy's dense invariant-factor routine.
"""
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Dict, List, Set, Tuple

from sympy.polys.domains import QQ, ZZ
from sympy.polys.matrices import DomainMatrix
from sympy.polys.matrices.normalforms import invariant_factors

from whitehead.core.errors import ChainComplexError


@dataclass
class IntegerMatrix:
    """rows × cols matrix storing only nonzero entries, keyed by (row, col)."""

    rows: int
    cols: int
    entries: Dict[Tuple[int, int], int] = field(default_factory=dict)

    def __post_init__(self) -> None:
        for (r, c), value in self.entries.items():
            if not (0 <= r < self.rows and 0 <= c < self.cols):
                raise ChainComplexError(f"entry ({r}, {c}) outside a {self.rows}x{self.cols} matrix")
        self.entries = {key: value for key, value in self.entries.items() if value}

    @classmethod
    def from_columns(cls, rows: int, columns: List[Dict[int, int]]) -> "IntegerMatrix":
        entries = {
            (r, c): value for c, column in enumerate(columns) for r, value in column.items() if value
        }
        return cls(rows=rows, cols=len(columns), entries=entries)

    @classmethod
    def from_dense(cls, dense: List[List[int]]) -> "IntegerMatrix":
        rows = len(dense)
        cols = len(dense[0]) if dense else 0
        entries = {(r, c): v for r, row in enumerate(dense) for c, v in enumerate(row) if v}
        return cls(rows=rows, cols=cols, entries=entries)

    @property
    def shape(self) -> Tuple[int, int]:
        return (self.rows, self.cols)

    def is_zero(self) -> bool:
        return not self.entries

    def to_dense(self) -> List[List[int]]:
        dense = [[0] * self.cols for _ in range(self.rows)]
        for (r, c), value in self.entries.items():
            dense[r][c] = value
        return dense

    def to_domain_matrix(self, domain=ZZ) -> DomainMatrix:
        """Sparse DomainMatrix over the given domain."""
        rows: Dict[int, Dict[int, object]] = defaultdict(dict)
        for (r, c), value in self.entries.items():
            rows[r][c] = domain(value)
        return DomainMatrix(dict(rows), self.shape, domain)

    def compose_is_zero(self, right: "IntegerMatrix") -> bool:
        """Exact check that self · right = 0."""
        if self.cols != right.rows:
            raise ChainComplexError(
                f"cannot compose {self.rows}x{self.cols} with {right.rows}x{right.cols}"
            )
        if self.is_zero() or right.is_zero():
            return True
        return (self.to_domain_matrix() * right.to_domain_matrix()).is_zero_matrix


def rational_rank(matrix: IntegerMatrix) -> int:
    """Rank over QQ."""
    if matrix.is_zero():
        return 0
    return matrix.to_domain_matrix(QQ).rank()


def smith_invariants(matrix: IntegerMatrix) -> Tuple[int, List[int]]:
    """
    Nonzero invariant factors of an integer matrix.

    Args:
        matrix: Integer matrix

    Returns:
        (rank, factors) with factors the nonzero invariant factors
        in divisibility order, units included
    """
    rows: Dict[int, Dict[int, int]] = defaultdict(dict)
    cols: Dict[int, Set[int]] = defaultdict(set)
    for (r, c), value in matrix.entries.items():
        rows[r][c] = value
        cols[c].add(r)

    units = _eliminate_units(rows, cols)

    remaining_rows = sorted(r for r, row in rows.items() if row)
    remaining_cols = sorted(c for c, members in cols.items() if members)
    factors = [1] * units
    if remaining_rows and remaining_cols:
        position = {c: k for k, c in enumerate(remaining_cols)}
        dense = [[ZZ(0)] * len(remaining_cols) for _ in remaining_rows]
        for i, r in enumerate(remaining_rows):
            for c, value in rows[r].items():
                dense[i][position[c]] = ZZ(value)
        block = DomainMatrix(dense, (len(remaining_rows), len(remaining_cols)), ZZ)
        factors.extend(abs(int(f)) for f in invariant_factors(block) if f)
    return len(factors), factors


def _eliminate_units(rows: Dict[int, Dict[int, int]], cols: Dict[int, Set[int]]) -> int:
    # sweep the columns; each ±1 entry clears its column by row operations,
    # after which its row and column are dropped (column operations would
    # clear the row without touching anything else)
    eliminated = 0
    progress = True
    while progress:
        progress = False
        for c in sorted(cols):
            members = cols.get(c)
            if not members:
                continue
            units = [r for r in members if rows[r][c] in (1, -1)]
            if not units:
                continue
            pivot = min(units, key=lambda r: (len(rows[r]), r))
            _pivot(rows, cols, pivot, c)
            eliminated += 1
            progress = True
    return eliminated


def _pivot(rows: Dict[int, Dict[int, int]], cols: Dict[int, Set[int]], r: int, c: int) -> None:
    pivot_row = rows.pop(r)
    sign = pivot_row[c]
    for other in sorted(cols[c] - {r}):
        target = rows[other]
        factor = target[c] * sign
        for col, value in pivot_row.items():
            updated = target.get(col, 0) - factor * value
            if updated:
                target[col] = updated
                cols[col].add(other)
            else:
                target.pop(col, None)
                cols[col].discard(other)
        if not target:
            del rows[other]
    for col in pivot_row:
        cols[col].discard(r)
    del cols[c]
