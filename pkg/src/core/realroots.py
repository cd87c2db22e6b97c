"""
Univariate Real Roots Module

Exact real root isolation for univariate polynomials over Q using
Descartes' rule of signs on Moebius-transformed intervals, plus the
rational interval type used by the isolation code. Rational roots are
reported exactly as degenerate intervals.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Iterable, List, Optional, Sequence, Tuple

from src.core.arith import MPoly
from src.core.errors import DomainError

logger = logging.getLogger(__name__)

Coefficients = List[Fraction]


@dataclass(frozen=True)
class IntervalQ:
    """
    Closed rational interval [lo, hi]; a degenerate interval is an exact value.

    Also supports interval arithmetic, which the lifting code uses to
    evaluate polynomial coefficients over a box.
    """

    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        object.__setattr__(self, 'lo', Fraction(self.lo))
        object.__setattr__(self, 'hi', Fraction(self.hi))
        if self.lo > self.hi:
            raise DomainError(f"empty interval [{self.lo}, {self.hi}]")

    @classmethod
    def point(cls, value) -> 'IntervalQ':
        return cls(value, value)

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def midpoint(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def is_degenerate(self) -> bool:
        return self.lo == self.hi

    def contains(self, value) -> bool:
        return self.lo <= value <= self.hi

    def overlaps(self, other: 'IntervalQ') -> bool:
        return self.lo <= other.hi and other.lo <= self.hi

    def sign(self) -> Optional[int]:
        """1 or -1 when the interval excludes zero, 0 for exactly [0, 0], None otherwise."""
        if self.lo > 0:
            return 1
        if self.hi < 0:
            return -1
        if self.lo == 0 and self.hi == 0:
            return 0
        return None

    def magnitude(self) -> Fraction:
        return max(abs(self.lo), abs(self.hi))

    def to_strings(self) -> List[str]:
        return [str(self.lo), str(self.hi)]

    def __add__(self, other):
        other = _as_interval(other)
        if other is None:
            return NotImplemented
        return IntervalQ(self.lo + other.lo, self.hi + other.hi)

    __radd__ = __add__

    def __neg__(self):
        return IntervalQ(-self.hi, -self.lo)

    def __sub__(self, other):
        other = _as_interval(other)
        if other is None:
            return NotImplemented
        return IntervalQ(self.lo - other.hi, self.hi - other.lo)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = _as_interval(other)
        if other is None:
            return NotImplemented
        products = (self.lo * other.lo, self.lo * other.hi, self.hi * other.lo, self.hi * other.hi)
        return IntervalQ(min(products), max(products))

    __rmul__ = __mul__

    def __str__(self):
        return f"[{self.lo}, {self.hi}]"


def _as_interval(value) -> Optional[IntervalQ]:
    if isinstance(value, IntervalQ):
        return value
    if isinstance(value, (int, Fraction)):
        return IntervalQ.point(value)
    return None


# dense univariate helpers, coefficients lowest power first

def _trim(coeffs: Sequence) -> list:
    coeffs = list(coeffs)
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return coeffs


def horner(coeffs: Sequence, x):
    result = 0
    for c in reversed(coeffs):
        result = result * x + c
    return result


def _derivative(coeffs: Coefficients) -> Coefficients:
    return [k * c for k, c in enumerate(coeffs)][1:]


def _divmod(a: Coefficients, b: Coefficients) -> Tuple[Coefficients, Coefficients]:
    a, b = _trim(a), _trim(b)
    if not b:
        raise DomainError("division by the zero polynomial")
    quotient = [Fraction(0)] * max(len(a) - len(b) + 1, 0)
    remainder = list(a)
    lead = b[-1]
    while len(remainder) >= len(b):
        shift = len(remainder) - len(b)
        factor = remainder[-1] / lead
        quotient[shift] = factor
        for k, c in enumerate(b):
            remainder[shift + k] -= factor * c
        remainder.pop()
        remainder = _trim(remainder)
    return quotient, remainder


def _gcd(a: Coefficients, b: Coefficients) -> Coefficients:
    a, b = _trim(a), _trim(b)
    while b:
        a, b = b, _divmod(a, b)[1]
    if not a:
        return a
    return [c / a[-1] for c in a]


def taylor_shift(coeffs: Sequence, shift) -> list:
    """Coefficients of p(x + shift)."""
    result = list(coeffs)
    n = len(result)
    for i in range(n - 1):
        for k in range(n - 2, i - 1, -1):
            result[k] = result[k] + shift * result[k + 1]
    return result


def _scale(coeffs: Sequence, factor) -> list:
    power, scaled = 1, []
    for c in coeffs:
        scaled.append(c * power)
        power = power * factor
    return scaled


def moebius(coeffs: Sequence, a, b) -> list:
    """Coefficients of (x+1)^n p((a + b x) / (x + 1)); their sign variations bound the roots in (a, b)."""
    mapped = _scale(taylor_shift(coeffs, a), b - a)
    return taylor_shift(list(reversed(mapped)), 1)


def sign_variations(signs: Iterable[int]) -> int:
    count, previous = 0, 0
    for s in signs:
        if s == 0:
            continue
        if previous and s != previous:
            count += 1
        previous = s
    return count


def _sign(value: Fraction) -> int:
    return (value > 0) - (value < 0)


def univariate_coefficients(poly: MPoly) -> Tuple[Optional[int], Coefficients]:
    """Split a univariate polynomial into its variable index and rational coefficients."""
    variables = poly.variables()
    if len(variables) > 1:
        raise DomainError(f"expected a univariate polynomial, got {poly}")
    if not variables:
        return None, [poly.value] if not poly.is_zero() else []
    v = next(iter(variables))
    return v, [c.value for c in poly.coefficients_in(v)]


def cauchy_bound(coeffs: Coefficients) -> Fraction:
    lead = abs(coeffs[-1])
    return 1 + max((abs(c) for c in coeffs[:-1]), default=Fraction(0)) / lead


def squarefree_part(coeffs: Coefficients) -> Coefficients:
    coeffs = _trim(coeffs)
    g = _gcd(coeffs, _derivative(coeffs))
    if len(g) <= 1:
        return coeffs
    return _divmod(coeffs, g)[0]


def is_squarefree(coeffs: Coefficients) -> bool:
    return len(_gcd(coeffs, _derivative(_trim(coeffs)))) <= 1


def _denominator_bound(coeffs: Coefficients) -> int:
    """Leading coefficient of the integer multiple of coeffs; rational roots have denominators dividing it."""
    common = lcm(*(c.denominator for c in coeffs if c != 0))
    return abs((coeffs[-1] * common).numerator)


def _descartes_roots(coeffs: Coefficients, lo: Fraction, hi: Fraction) -> List[IntervalQ]:
    found = []
    stack = [(lo, hi)]
    while stack:
        a, b = stack.pop()
        variations = sign_variations(_sign(c) for c in moebius(coeffs, a, b))
        if variations == 0:
            continue
        if variations == 1:
            found.append(IntervalQ(a, b))
            continue
        m = (a + b) / 2
        if horner(coeffs, m) == 0:
            found.append(IntervalQ.point(m))
        stack.append((m, b))
        stack.append((a, m))
    return found


def refine_interval(coeffs: Coefficients, interval: IntervalQ, width: Fraction) -> IntervalQ:
    """
    Shrink an isolating interval of a squarefree polynomial below ``width``.

    Bisects on the sign change when both endpoints are non-roots and on the
    parity of the Descartes count otherwise.
    """
    lo, hi = interval.lo, interval.hi
    while hi - lo > width:
        m = (lo + hi) / 2
        value = horner(coeffs, m)
        if value == 0:
            return IntervalQ.point(m)
        s_lo = _sign(horner(coeffs, lo))
        if s_lo != 0 and _sign(horner(coeffs, hi)) != 0:
            left = s_lo != _sign(value)
        else:
            left = sign_variations(_sign(c) for c in moebius(coeffs, lo, m)) % 2 == 1
        lo, hi = (lo, m) if left else (m, hi)
    return IntervalQ(lo, hi)


def _strict_interior(coeffs: Coefficients, interval: IntervalQ) -> IntervalQ:
    """
    Shrink an interval whose interior holds exactly one root until neither
    endpoint is an endpoint of the original, so the closed result lies
    inside the open original.
    """
    a, b = interval.lo, interval.hi
    lo, hi = a, b
    while lo == a or hi == b:
        m = (lo + hi) / 2
        if horner(coeffs, m) == 0:
            return IntervalQ.point(m)
        left = sign_variations(_sign(c) for c in moebius(coeffs, lo, m)) % 2 == 1
        lo, hi = (lo, m) if left else (m, hi)
    return IntervalQ(lo, hi)


def _snap_rational(coeffs: Coefficients, interval: IntervalQ, denominator_bound: int) -> IntervalQ:
    """Return the exact root as a point when the isolated root is rational."""
    target = Fraction(1, 2 * denominator_bound * denominator_bound)
    narrow = refine_interval(coeffs, interval, target)
    if narrow.is_degenerate():
        return narrow
    candidate = narrow.midpoint.limit_denominator(denominator_bound)
    if narrow.contains(candidate) and horner(coeffs, candidate) == 0:
        return IntervalQ.point(candidate)
    return interval


def isolate_coefficients(coeffs: Coefficients, exact_rationals: bool = True) -> List[IntervalQ]:
    """
    Isolate the real roots of a squarefree polynomial given by its coefficients.

    Returns:
        Disjoint intervals sorted by position, one per real root
    """
    coeffs = _trim(coeffs)
    if not coeffs:
        raise DomainError("cannot isolate the roots of the zero polynomial")
    if len(coeffs) == 1:
        return []
    if not is_squarefree(coeffs):
        raise DomainError("real root isolation requires a squarefree polynomial")

    roots = []
    if coeffs[0] == 0:
        roots.append(IntervalQ.point(0))
        coeffs = coeffs[1:]
    if len(coeffs) > 1:
        bound = cauchy_bound(coeffs)
        roots.extend(_descartes_roots(coeffs, Fraction(0), bound))
        mirrored = [c if k % 2 == 0 else -c for k, c in enumerate(coeffs)]
        roots.extend(IntervalQ(-iv.hi, -iv.lo) for iv in _descartes_roots(mirrored, Fraction(0), bound))
        roots = [iv if iv.is_degenerate() else _strict_interior(coeffs, iv) for iv in roots]

    if exact_rationals:
        denominator_bound = _denominator_bound(coeffs)
        roots = [iv if iv.is_degenerate() else _snap_rational(coeffs, iv, denominator_bound) for iv in roots]

    roots.sort(key=lambda iv: (iv.lo, iv.hi))
    logger.debug(f"Isolated {len(roots)} real roots of a degree {len(coeffs) - 1} polynomial")
    return roots


def uni_isolate(poly: MPoly) -> List[IntervalQ]:
    """
    Isolate the real roots of a squarefree univariate polynomial.

    Args:
        poly: Nonzero squarefree polynomial in a single variable

    Returns:
        Pairwise disjoint intervals with rational endpoints, one per real
        root; rational roots appear as degenerate intervals

    Raises:
        DomainError: If poly is zero, multivariate or not squarefree
    """
    _, coeffs = univariate_coefficients(poly)
    return isolate_coefficients(coeffs)


def rational_roots(poly: MPoly) -> List[Fraction]:
    """All rational roots of a nonzero univariate polynomial, ascending."""
    _, coeffs = univariate_coefficients(poly)
    if not coeffs:
        raise DomainError("the zero polynomial has no finite root set")
    if len(coeffs) == 1:
        return []
    intervals = isolate_coefficients(squarefree_part(coeffs))
    return [iv.lo for iv in intervals if iv.is_degenerate()]
