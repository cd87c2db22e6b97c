"""
Regular Chains Module

Triangular sets, zero-dimensional regular chains, reduction modulo a chain
and the regularize primitive: deciding whether a polynomial is invertible
or zero modulo a chain, splitting the chain wherever the answer differs
between its zeros. The gcd-with-splitting engine lives here as well because
regularize and the pseudo gcd are mutually recursive.
"""

import logging
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from itertools import product
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from src.core.arith import (
    ONE, ZERO, MPoly, VarOrder, main_primitive_part, normalize_or_zero, pquo, prem, primitive_normalize,
    pseudo_divide,
)
from src.core.errors import DomainError, NotRegularError
from src.core.realroots import rational_roots

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class TriangularSet:
    """
    Ordered polynomials with strictly increasing leading variables.

    Args:
        polys: Non-constant polynomials [T1, ..., Tr]
        order: Variable order the polynomials are written in
    """

    polys: Tuple[MPoly, ...]
    order: VarOrder

    def __post_init__(self):
        polys = tuple(self.polys)
        object.__setattr__(self, 'polys', polys)
        previous = -1
        for index, poly in enumerate(polys):
            if poly.is_constant():
                raise DomainError(f"polynomial {index + 1} of a triangular set is constant")
            if poly.lv <= previous:
                raise DomainError(f"leading variables are not strictly increasing at polynomial {index + 1}")
            if poly.lv >= len(self.order):
                raise DomainError(f"polynomial {index + 1} uses a variable outside the order")
            previous = poly.lv

    def __len__(self) -> int:
        return len(self.polys)

    def __iter__(self) -> Iterator[MPoly]:
        return iter(self.polys)

    def __getitem__(self, index: int) -> MPoly:
        return self.polys[index]

    @property
    def levels(self) -> Tuple[int, ...]:
        return tuple(p.lv for p in self.polys)

    def poly_for(self, v: int) -> Optional[MPoly]:
        for poly in self.polys:
            if poly.lv == v:
                return poly
        return None

    def format(self) -> List[str]:
        return [p.format(self.order) for p in self.polys]


@dataclass(frozen=True)
class ZeroDimChain:
    """
    Triangular set whose i-th polynomial has leading variable x_i.

    The chain covers the prefix x1..xr of its order; with r equal to the
    number of variables it is a zero-dimensional chain in the full ring.
    Regularity of the initials is checked by ``is_regular_chain``.
    """

    base: TriangularSet

    def __post_init__(self):
        for index, poly in enumerate(self.base.polys):
            if poly.lv != index:
                raise DomainError(
                    f"polynomial {index + 1} must have leading variable {self.base.order.name(index)}"
                )

    @classmethod
    def from_polys(cls, polys: Sequence[MPoly], order: VarOrder) -> 'ZeroDimChain':
        return cls(TriangularSet(tuple(polys), order))

    @classmethod
    def empty(cls, order: VarOrder) -> 'ZeroDimChain':
        return cls(TriangularSet((), order))

    @property
    def polys(self) -> Tuple[MPoly, ...]:
        return self.base.polys

    @property
    def order(self) -> VarOrder:
        return self.base.order

    @property
    def rank(self) -> int:
        return len(self.base.polys)

    def __len__(self) -> int:
        return self.rank

    def __getitem__(self, index: int) -> MPoly:
        return self.base.polys[index]

    def prefix(self, count: int) -> 'ZeroDimChain':
        if count == self.rank:
            return self
        return ZeroDimChain(TriangularSet(self.polys[:count], self.order))

    def extend(self, poly: MPoly) -> 'ZeroDimChain':
        return ZeroDimChain(TriangularSet(self.polys + (poly,), self.order))

    def is_full(self) -> bool:
        return self.rank == len(self.order)

    def format(self) -> List[str]:
        return self.base.format()

    def sort_key(self) -> Tuple:
        return tuple(p.sort_key() for p in self.polys)

    def __str__(self):
        return '[' + ', '.join(self.format()) + ']'


class SplitStatus(Enum):
    INVERTIBLE = 'invertible'
    ZERO = 'zero'


@dataclass(frozen=True)
class SplitOutcome:
    """Case split of a chain by the vanishing of a polynomial."""

    cases: Tuple[Tuple[ZeroDimChain, SplitStatus], ...]

    def __iter__(self):
        return iter(self.cases)

    def __len__(self) -> int:
        return len(self.cases)

    def chains(self, status: Optional[SplitStatus] = None) -> List[ZeroDimChain]:
        return [chain for chain, s in self.cases if status is None or s is status]


def _as_triangular(chain) -> TriangularSet:
    return chain.base if isinstance(chain, ZeroDimChain) else chain


def reduce(poly: MPoly, chain) -> MPoly:
    """
    Pseudo-remainder of poly through the chain, top polynomial first.

    The result has degree below deg(Ti) in every leading variable of the
    chain; a zero result means poly lies in the saturated ideal.
    """
    for t in reversed(_as_triangular(chain).polys):
        v = t.lv
        if poly.degree(v) >= t.main_degree:
            poly = prem(poly, t, v)
    return poly


def reduce_with_multiplier(poly: MPoly, chain) -> Tuple[MPoly, MPoly]:
    """
    Reduce poly and report the multiplier.

    Returns:
        (R, u) with u * poly - R in the ideal of the chain, u a product of
        powers of initials
    """
    multiplier = ONE
    for t in reversed(_as_triangular(chain).polys):
        v = t.lv
        if poly.degree(v) >= t.main_degree:
            _, poly, e = pseudo_divide(poly, t, v)
            if e:
                multiplier = multiplier * t.ini ** e
    return poly, multiplier


def chain_dimension(chain: ZeroDimChain) -> int:
    """Dimension of Q[x]/<T>: the product of the main degrees."""
    dimension = 1
    for poly in chain.polys:
        dimension *= poly.main_degree
    return dimension


def _basis(chain: ZeroDimChain) -> List[Tuple[int, ...]]:
    """Exponent vectors of the reduced monomials spanning Q[x]/<T>."""
    return list(product(*(range(p.main_degree) for p in chain.polys)))


def _monomial(exponents: Tuple[int, ...]) -> MPoly:
    result = ONE
    for v, e in enumerate(exponents):
        if e:
            result = result * MPoly.variable(v) ** e
    return result


def _coordinates(poly: MPoly, rank: int) -> Dict[Tuple[int, ...], Fraction]:
    coordinates = {}
    for mono, c in poly.terms():
        exponents = [0] * rank
        for v, e in mono:
            exponents[v] = e
        coordinates[tuple(exponents)] = c
    return coordinates


def _solve(rows: List[List[Fraction]]) -> Optional[List[Fraction]]:
    """Gauss-Jordan elimination on a square augmented system; None when singular."""
    n = len(rows)
    for col in range(n):
        pivot = next((r for r in range(col, n) if rows[r][col] != 0), None)
        if pivot is None:
            return None
        rows[col], rows[pivot] = rows[pivot], rows[col]
        inverse = 1 / rows[col][col]
        rows[col] = [value * inverse for value in rows[col]]
        for r in range(n):
            factor = rows[r][col]
            if r != col and factor != 0:
                rows[r] = [a - factor * b for a, b in zip(rows[r], rows[col])]
    return [row[n] for row in rows]


def inverse_modulo(h: MPoly, chain: ZeroDimChain) -> MPoly:
    """
    Inverse of h in Q[x]/<T> for a chain whose initials are all constants.

    The inverse is the reduced polynomial u with reduce(u * h) == 1, found
    by solving the multiplication-by-h system on the reduced monomials.

    Raises:
        NotRegularError: If h is a zero divisor modulo the chain
    """
    if any(not p.ini.is_constant() for p in chain.polys):
        raise DomainError("inverse_modulo needs a chain with constant initials")
    h = reduce(h, chain)
    if h.is_zero():
        raise NotRegularError("zero has no inverse modulo a chain")
    if h.is_constant():
        return MPoly.constant(1 / h.value)

    basis = _basis(chain)
    position = {exponents: i for i, exponents in enumerate(basis)}
    n = len(basis)
    rows = [[Fraction(0)] * (n + 1) for _ in range(n)]
    for j, exponents in enumerate(basis):
        for mono, c in _coordinates(reduce(h * _monomial(exponents), chain), chain.rank).items():
            rows[position[mono]][j] = c
    rows[position[(0,) * chain.rank]][n] = Fraction(1)

    solution = _solve(rows)
    if solution is None:
        raise NotRegularError("polynomial is a zero divisor modulo the chain")
    inverse = ZERO
    for exponents, value in zip(basis, solution):
        if value != 0:
            inverse = inverse + _monomial(exponents).scale(value)
    return inverse


def canonical_chain(chain: ZeroDimChain) -> ZeroDimChain:
    """
    Rewrite a regular chain with constant initials and reduced coefficients.

    Bottom up, each polynomial is multiplied by the inverse of its initial
    modulo the rewritten polynomials below it, reduced by them and primitive
    normalized. Main degrees, the ideal and therefore the zeros with their
    multiplicities are unchanged.

    Raises:
        NotRegularError: If an initial is a zero divisor modulo the chain below it
    """
    result = ZeroDimChain.empty(chain.order)
    for poly in chain.polys:
        if not poly.ini.is_constant():
            poly = inverse_modulo(poly.ini, result) * poly
        result = result.extend(primitive_normalize(reduce(poly, result)))
    return result


def _bit_size(poly: MPoly) -> int:
    return sum(c.numerator.bit_length() + c.denominator.bit_length() for c in poly.rational_coefficients())


def compact_chain(chain: ZeroDimChain) -> ZeroDimChain:
    """
    Keep, level by level, the smaller of each polynomial with its content
    in the main variable removed and its rewrite from ``canonical_chain``.

    Both choices generate the same ideal together with the polynomials
    below them, so any mix is an equivalent regular chain. Ties keep the
    content-free polynomial.
    """
    canonical = canonical_chain(chain)
    polys = []
    for original, rewritten in zip(chain.polys, canonical.polys):
        original = main_primitive_part(original)
        polys.append(original if _bit_size(original) <= _bit_size(rewritten) else rewritten)
    return ZeroDimChain.from_polys(polys, chain.order)


def rational_point(chain: ZeroDimChain) -> Optional[Dict[int, Fraction]]:
    """The single zero of a chain of linear polynomials, or None if some polynomial is not linear."""
    point: Dict[int, Fraction] = {}
    for index, poly in enumerate(chain.polys):
        if poly.main_degree != 1:
            return None
        constant, lead = (c.substitute(point) for c in poly.coeffs)
        if not lead.is_constant() or not constant.is_constant() or lead.is_zero():
            return None
        point[index] = -constant.value / lead.value
    return point


# gcd with splitting

def make_regular_lead(poly: MPoly, chain: ZeroDimChain, v: int) -> List[Tuple[MPoly, ZeroDimChain]]:
    """
    Split the chain until the leading coefficient of poly in x_v is invertible.

    On branches where the leading coefficient vanishes the leading term is
    dropped and the search continues, so each result is either zero or has
    an invertible leading coefficient over its chain.
    """
    results = []
    stack = [(poly, chain)]
    while stack:
        current, sub = stack.pop()
        current = reduce(current, sub)
        if current.is_zero():
            results.append((ZERO, sub))
            continue
        lead = current.leading_coefficient(v)
        for refined, status in _regularize(lead, sub):
            if status is SplitStatus.INVERTIBLE:
                results.append((current if refined is sub else reduce(current, refined), refined))
            else:
                stack.append((current.tail(v), refined))
    return results


def gcd_modulo(a: MPoly, b: MPoly, chain: ZeroDimChain, v: int) -> List[Tuple[MPoly, ZeroDimChain]]:
    """
    Euclidean gcd of a and b in x_v over the zeros of a chain below x_v.

    Returns:
        (G, C) pairs whose chains partition the zeros of ``chain``; at each
        zero of C, G specializes to the univariate gcd up to a nonzero
        constant. G is zero only when both inputs vanish on C.
    """
    results = []
    stack = [(a, b, chain)]
    while stack:
        first, second, sub = stack.pop()
        for divisor, refined in make_regular_lead(second, sub, v):
            dividend = reduce(first, refined)
            if divisor.is_zero():
                results.extend(make_regular_lead(dividend, refined, v))
            elif divisor.degree(v) == 0:
                results.append((ONE, refined))
            else:
                remainder = normalize_or_zero(reduce(prem(dividend, divisor, v), refined))
                stack.append((normalize_or_zero(divisor), remainder, refined))
    logger.debug(f"gcd in variable index {v} produced {len(results)} branches")
    return results


# regularize

def _rebuild(chain: ZeroDimChain, level: int, lower: ZeroDimChain, poly: MPoly) -> ZeroDimChain:
    """Replace the lower part and polynomial ``level`` of chain, re-reducing the polynomials above."""
    rebuilt = lower.extend(poly)
    for t in chain.polys[level + 1:]:
        rebuilt = rebuilt.extend(primitive_normalize(reduce(t, rebuilt)))
    return rebuilt


def _coprime_parts(t: MPoly, p: MPoly, lower: ZeroDimChain, v: int) -> List[Tuple[MPoly, ZeroDimChain]]:
    """Largest factor of t coprime to p in x_v, per branch of the lower chain."""
    done = []
    pending = [(t, lower)]
    while pending:
        part, sub = pending.pop()
        for g, refined in gcd_modulo(part, p, sub, v):
            current = part if refined is sub else primitive_normalize(reduce(part, refined))
            if g.degree(v) == 0:
                done.append((current, refined))
            else:
                pending.append((primitive_normalize(reduce(pquo(current, g, v), refined)), refined))
    return done


def _regularize(p: MPoly, chain: ZeroDimChain) -> List[Tuple[ZeroDimChain, SplitStatus]]:
    r = reduce(p, chain)
    if r.is_zero():
        return [(chain, SplitStatus.ZERO)]
    if r.is_constant():
        return [(chain, SplitStatus.INVERTIBLE)]
    level = r.lv
    if level >= chain.rank:
        raise DomainError(f"polynomial involves {chain.order.name(level)}, which the chain does not constrain")

    t = chain[level]
    lower = chain.prefix(level)
    cases = []
    for invertible, sub in _coprime_parts(t, r, lower, level):
        t_sub = t if sub is lower else primitive_normalize(reduce(t, sub))
        degree = invertible.degree(level)
        if degree == t_sub.main_degree:
            cases.append((chain if sub is lower else _rebuild(chain, level, sub, t_sub), SplitStatus.INVERTIBLE))
            continue
        if degree == 0:
            cases.append((chain if sub is lower else _rebuild(chain, level, sub, t_sub), SplitStatus.ZERO))
            continue
        vanishing = primitive_normalize(reduce(pquo(t_sub, invertible, level), sub))
        cases.append((_rebuild(chain, level, sub, vanishing), SplitStatus.ZERO))
        cases.append((_rebuild(chain, level, sub, invertible), SplitStatus.INVERTIBLE))

    logger.debug(f"regularize split a rank {chain.rank} chain into {len(cases)} cases at level {level}")
    return cases


def regularize(p: MPoly, chain: ZeroDimChain) -> SplitOutcome:
    """
    Decide invertibility of p modulo a chain, splitting where needed.

    Args:
        p: Polynomial in the chain variables
        chain: Zero-dimensional chain with regular initials

    Returns:
        SplitOutcome whose chains partition the zeros of ``chain``; p
        vanishes at every zero of a ZERO case and at none of an
        INVERTIBLE case
    """
    return SplitOutcome(tuple(_regularize(p, chain)))


def check_regular(triangular: TriangularSet) -> ZeroDimChain:
    """
    Validate a triangular set as a zero-dimensional regular chain.

    Raises:
        NotRegularError: If a variable has no polynomial or an initial is a
            zero divisor modulo the polynomials below it
    """
    order = triangular.order
    if len(triangular) != len(order) or any(p.lv != i for i, p in enumerate(triangular)):
        missing = [order.name(i) for i in range(len(order)) if triangular.poly_for(i) is None]
        raise NotRegularError(f"chain is not zero-dimensional: no polynomial for {', '.join(missing)}")
    chain = ZeroDimChain(triangular)
    for index, poly in enumerate(chain.polys):
        lower = chain.prefix(index)
        outcome = _regularize(poly.ini, lower) if index else [(lower, SplitStatus.INVERTIBLE)]
        if any(status is SplitStatus.ZERO for _, status in outcome):
            initial = poly.ini.format(order)
            raise NotRegularError(
                f"initial {initial} of polynomial {index + 1} is a zero divisor modulo the chain below it",
                index=index,
                initial=initial,
            )
    return chain


def is_regular_chain(triangular) -> bool:
    """True iff the set is a zero-dimensional regular chain in all variables of its order."""
    try:
        check_regular(_as_triangular(triangular))
    except NotRegularError as e:
        logger.debug(f"Not a regular chain: {e}")
        return False
    return True


def is_simple(chain: ZeroDimChain) -> bool:
    """Every polynomial is squarefree modulo the chain below it."""
    for index, poly in enumerate(chain.polys):
        for g, _ in gcd_modulo(poly, poly.derivative(index), chain.prefix(index), index):
            if g.degree(index) > 0:
                return False
    return True


# rational splitting

def _split_univariate(poly: MPoly, v: int) -> List[MPoly]:
    """Split a univariate polynomial into powers of its rational linear factors and the rest."""
    roots = rational_roots(poly)
    if not roots:
        return [poly]
    factors = []
    rest = poly
    for root in roots:
        linear = primitive_normalize(MPoly.variable(v) - root)
        multiplicity = 0
        while rest.degree(v) > 0:
            quotient, remainder, _ = pseudo_divide(rest, linear, v, field_division=True)
            if not remainder.is_zero():
                break
            rest, multiplicity = quotient, multiplicity + 1
        factors.append(linear ** multiplicity)
    if rest.degree(v) > 0:
        factors.append(primitive_normalize(rest))
    return factors


def split_rational_roots(chain: ZeroDimChain) -> List[ZeroDimChain]:
    """
    Split off rational roots at every level sitting over a rational point.

    Returns:
        Chains partitioning the zeros of ``chain``, with the same total
        dimension; a single-element list holding ``chain`` when nothing splits
    """
    pieces = [chain.prefix(0)]
    for index, poly in enumerate(chain.polys):
        extended = []
        for piece in pieces:
            current = poly if piece == chain.prefix(index) else primitive_normalize(reduce(poly, piece))
            point = rational_point(piece)
            if point is None:
                extended.append(piece.extend(current))
                continue
            factors = _split_univariate(current.substitute(point), index)
            if len(factors) == 1:
                extended.append(piece.extend(current))
            else:
                extended.extend(piece.extend(f) for f in factors)
        pieces = extended
    if len(pieces) > 1:
        logger.debug(f"rational root splitting produced {len(pieces)} chains from a rank {chain.rank} chain")
        return pieces
    return [chain]
