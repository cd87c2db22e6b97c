"""
Dual Space Module

Independent multiplicity oracle. The local multiplicity of an isolated
zero a of an ideal is the dimension of the space of differential
functionals at a that vanish on the ideal; it is computed from the
nullities of Macaulay matrices of growing order, with exact fraction-free
integer elimination.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations_with_replacement
from math import gcd, lcm
from typing import Dict, List, Optional, Sequence, Tuple

from src.core.arith import MPoly
from src.core.errors import DomainError, PointNotZeroError, StabilizationError

logger = logging.getLogger(__name__)

DEFAULT_CAP = 64

Exponent = Tuple[int, ...]


@dataclass(frozen=True, order=True)
class DiffIndex:
    """Multi-index j of the functional d_j[a] = coefficient of (x - a)^j."""

    j: Exponent

    @property
    def order(self) -> int:
        return sum(self.j)


def monomials_up_to(nvars: int, degree: int) -> List[DiffIndex]:
    """All multi-indices of total order at most ``degree``, by order then lexicographically."""
    indices = []
    for total in range(degree + 1):
        found = set()
        for combo in combinations_with_replacement(range(nvars), total):
            exps = [0] * nvars
            for v in combo:
                exps[v] += 1
            found.add(tuple(exps))
        indices.extend(DiffIndex(e) for e in sorted(found, reverse=True))
    return indices


def _exponent(mono: Tuple[Tuple[int, int], ...], nvars: int) -> Exponent:
    exps = [0] * nvars
    for v, e in mono:
        exps[v] = e
    return tuple(exps)


def local_terms(poly: MPoly, point: Sequence[Fraction]) -> Dict[Exponent, Fraction]:
    """Coefficients of poly expanded in powers of (x - a)."""
    shifted = poly.translate(dict(enumerate(point)))
    return {_exponent(mono, len(point)): c for mono, c in shifted.terms()}


@dataclass(frozen=True)
class MacaulayMatrix:
    """
    Rows x^alpha * g (|alpha| < order) truncated to order ``order``, columns
    the differential indices of order at most ``order``.
    """

    order: int
    columns: Tuple[DiffIndex, ...]
    rows: Tuple[Dict[int, Fraction], ...]

    @classmethod
    def build(cls, local_gens: Sequence[Dict[Exponent, Fraction]], nvars: int, order: int) -> 'MacaulayMatrix':
        columns = tuple(monomials_up_to(nvars, order))
        position = {c.j: i for i, c in enumerate(columns)}
        shifts = monomials_up_to(nvars, order - 1) if order > 0 else []
        rows = []
        for terms in local_gens:
            for shift in shifts:
                row = {}
                for exps, c in terms.items():
                    moved = tuple(a + b for a, b in zip(exps, shift.j))
                    if sum(moved) <= order:
                        row[position[moved]] = c
                if row:
                    rows.append(row)
        return cls(order, columns, tuple(rows))

    def rank(self) -> int:
        return exact_rank(self.rows)

    def nullity(self) -> int:
        return len(self.columns) - self.rank()


def _integer_row(row: Dict[int, Fraction]) -> Dict[int, int]:
    common = lcm(*(c.denominator for c in row.values()))
    ints = {k: int(c * common) for k, c in row.items()}
    divisor = gcd(*ints.values())
    return {k: v // divisor for k, v in ints.items()}


def exact_rank(rows: Sequence[Dict[int, Fraction]]) -> int:
    """Rank of a sparse rational matrix by fraction-free elimination."""
    pivots: Dict[int, Dict[int, int]] = {}
    for raw in rows:
        if not raw:
            continue
        row = _integer_row(raw)
        while row:
            lead = min(row)
            pivot = pivots.get(lead)
            if pivot is None:
                pivots[lead] = row
                break
            a, b = pivot[lead], row[lead]
            combined = {k: a * v for k, v in row.items()}
            for k, v in pivot.items():
                combined[k] = combined.get(k, 0) - b * v
            row = {k: v for k, v in combined.items() if v}
            if row:
                divisor = gcd(*row.values())
                if divisor > 1:
                    row = {k: v // divisor for k, v in row.items()}
    return len(pivots)


def _nvars(gens: Sequence[MPoly], point: Sequence) -> int:
    used = max((max(g.variables(), default=-1) for g in gens), default=-1) + 1
    if used > len(point):
        raise DomainError(f"point has {len(point)} coordinates but the generators use {used} variables")
    return len(point)


def nullity_sequence(gens: Sequence[MPoly], point: Sequence, max_order: int) -> List[int]:
    """Nullities of the Macaulay matrices of order 0..max_order."""
    point = [Fraction(a) for a in point]
    nvars = _nvars(gens, point)
    local = [local_terms(g, point) for g in gens]
    return [MacaulayMatrix.build(local, nvars, k).nullity() for k in range(max_order + 1)]


def dual_space_dim(gens: Sequence[MPoly], point: Sequence, cap: Optional[int] = None) -> int:
    """
    Local multiplicity of a rational zero, as the dimension of the dual space.

    Args:
        gens: Generators of the ideal
        point: Rational coordinates, one per variable
        cap: Highest Macaulay order tried

    Returns:
        The stabilized nullity

    Raises:
        PointNotZeroError: If some generator does not vanish at the point
        StabilizationError: If the nullity has not stabilized by order ``cap``
    """
    cap = cap or DEFAULT_CAP
    point = [Fraction(a) for a in point]
    nvars = _nvars(gens, point)
    values = dict(enumerate(point))
    for index, g in enumerate(gens):
        if not g.evaluate(values).is_zero():
            raise PointNotZeroError(f"generator {index + 1} does not vanish at the point", index=index)

    local = [local_terms(g, point) for g in gens]
    previous = 1
    for order in range(1, cap + 1):
        nullity = MacaulayMatrix.build(local, nvars, order).nullity()
        logger.debug(f"Macaulay order {order}: nullity {nullity}")
        if nullity == previous:
            return nullity
        previous = nullity
    raise StabilizationError(
        f"dual space did not stabilize by order {cap} (last nullity {previous})",
        last_nullity=previous,
        order=cap,
    )
