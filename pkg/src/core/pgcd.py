"""
Pseudo GCD Module

Greatest common divisor of a set of polynomials in K[x][z] modulo a
zero-dimensional regular chain in K[x]. The chain is split wherever the
gcd takes a different shape at different zeros; every branch gets its own
gcd with an invertible leading coefficient.
"""

import logging
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from src.core.arith import ONE, ZERO, MPoly, normalizing_factor, pseudo_divide
from src.core.chains import (
    SplitStatus, ZeroDimChain, gcd_modulo, make_regular_lead, reduce_with_multiplier, regularize,
)
from src.core.errors import DomainError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PgcdBranch:
    """
    One branch of a pseudo gcd.

    Args:
        G: The gcd on this branch, primitive-normalized; 1 when coprime, 0
            when every input vanishes on the branch
        chain: Branch chain; the branch chains partition the input zeros
        cofactors: With cofactor tracking, polynomials c_j such that
            multiplier * G - sum(c_j * F_j) reduces to zero modulo the chain
        multiplier: Invertible polynomial G was normalized from when it
            has degree 0 in z, otherwise 1
    """

    G: MPoly
    chain: ZeroDimChain
    cofactors: Optional[Tuple[MPoly, ...]] = None
    multiplier: MPoly = ONE


def check_fibre_variable(polys: Sequence[MPoly], chain: ZeroDimChain, z: int) -> None:
    """
    Raises:
        DomainError: If z is not above the chain or a polynomial uses a
            variable that is neither a chain variable nor z
    """
    if z < chain.rank:
        raise DomainError(f"variable {chain.order.name(z)} is already constrained by the chain")
    for poly in polys:
        stray = [v for v in poly.variables() if v >= chain.rank and v != z]
        if stray:
            names = ', '.join(chain.order.name(v) for v in sorted(stray))
            raise DomainError(f"{poly.format(chain.order)} involves {names}, outside the chain and {chain.order.name(z)}")


def _normalized_gcd(g: MPoly, z: int) -> MPoly:
    if g.is_zero():
        return ZERO
    if g.degree(z) == 0:
        return ONE
    return g.scale(normalizing_factor(g))


def pgcd(polys: Sequence[MPoly], chain: ZeroDimChain, z: int, track_cofactors: bool = False) -> List[PgcdBranch]:
    """
    Pseudo gcd of a polynomial set modulo a chain.

    Args:
        polys: Non-empty list of polynomials in the chain variables and z
        chain: Zero-dimensional chain below z, possibly empty
        z: Index of the gcd variable
        track_cofactors: Also return membership cofactors for each branch

    Returns:
        Branches whose chains partition the zeros of ``chain``; at every
        zero the branch gcd specializes to the univariate gcd of the
        specialized inputs up to a nonzero constant

    Raises:
        DomainError: If polys is empty or uses variables outside the chain and z
    """
    polys = list(polys)
    if not polys:
        raise DomainError("pgcd needs at least one polynomial")
    check_fibre_variable(polys, chain, z)

    if track_cofactors:
        return _tracked_pgcd(polys, chain, z)

    current = make_regular_lead(polys[0], chain, z)
    for poly in polys[1:]:
        folded = []
        for g, sub in current:
            folded.extend(gcd_modulo(g, poly, sub, z))
        current = folded

    branches = [PgcdBranch(_normalized_gcd(g, z), sub) for g, sub in current]
    logger.debug(f"pgcd of {len(polys)} polynomials gave {len(branches)} branches")
    return branches


# cofactor tracking

@dataclass(frozen=True)
class _Tracked:
    """poly together with cofactors c_j, poly = sum(c_j * F_j) modulo the current chain."""

    poly: MPoly
    cofactors: Tuple[MPoly, ...]

    def reduced(self, chain: ZeroDimChain) -> '_Tracked':
        remainder, multiplier = reduce_with_multiplier(self.poly, chain)
        if multiplier.is_one():
            return _Tracked(remainder, self.cofactors)
        return _Tracked(remainder, tuple(c * multiplier for c in self.cofactors))

    def scaled(self, factor) -> '_Tracked':
        return _Tracked(self.poly.scale(factor), tuple(c.scale(factor) for c in self.cofactors))

    def normalized(self) -> '_Tracked':
        if self.poly.is_zero():
            return self
        return self.scaled(normalizing_factor(self.poly))


def _tracked_regular_lead(item: _Tracked, chain: ZeroDimChain, z: int) -> List[Tuple[_Tracked, ZeroDimChain]]:
    results = []
    stack = [(item, chain)]
    while stack:
        current, sub = stack.pop()
        current = current.reduced(sub)
        if current.poly.is_zero():
            results.append((current, sub))
            continue
        for refined, status in regularize(current.poly.leading_coefficient(z), sub):
            if status is SplitStatus.INVERTIBLE:
                results.append((current, refined))
            else:
                # the dropped term vanishes on every zero of the refined chain
                stack.append((_Tracked(current.poly.tail(z), current.cofactors), refined))
    return results


def _tracked_gcd(a: _Tracked, b: _Tracked, chain: ZeroDimChain, z: int) -> List[Tuple[_Tracked, ZeroDimChain]]:
    results = []
    stack = [(a, b, chain)]
    while stack:
        first, second, sub = stack.pop()
        for divisor, refined in _tracked_regular_lead(second, sub, z):
            dividend = first.reduced(refined)
            if divisor.poly.is_zero():
                results.extend(_tracked_regular_lead(dividend, refined, z))
            elif divisor.poly.degree(z) == 0:
                results.append((divisor, refined))
            else:
                quotient, remainder, e = pseudo_divide(dividend.poly, divisor.poly, z)
                power = divisor.poly.leading_coefficient(z) ** e
                cofactors = tuple(
                    power * cf - quotient * cg for cf, cg in zip(dividend.cofactors, divisor.cofactors)
                )
                step = _Tracked(remainder, cofactors).reduced(refined).normalized()
                stack.append((divisor.normalized(), step, refined))
    return results


def _tracked_pgcd(polys: List[MPoly], chain: ZeroDimChain, z: int) -> List[PgcdBranch]:
    count = len(polys)
    unit = [tuple(ONE if j == k else ZERO for j in range(count)) for k in range(count)]
    current = _tracked_regular_lead(_Tracked(polys[0], unit[0]), chain, z)
    for k in range(1, count):
        folded = []
        for g, sub in current:
            folded.extend(_tracked_gcd(g, _Tracked(polys[k], unit[k]), sub, z))
        current = folded

    branches = []
    for g, sub in current:
        if g.poly.is_zero() or g.poly.degree(z) > 0:
            g = g.normalized()
            branches.append(PgcdBranch(g.poly, sub, g.cofactors, ONE))
        else:
            multiplier = g.normalized()
            branches.append(PgcdBranch(ONE, sub, multiplier.cofactors, multiplier.poly))
    return branches
