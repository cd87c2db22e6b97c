"""
Pseudo Squarefree Decomposition Module

Squarefree decomposition of a polynomial in K[x][z] modulo a
zero-dimensional regular chain in K[x], splitting the chain wherever the
squarefree structure of the fibres changes.
"""

import logging
from dataclasses import dataclass
from typing import List, Tuple

from src.core.arith import MPoly, pquo, primitive_normalize
from src.core.chains import ZeroDimChain, make_regular_lead, reduce, split_rational_roots
from src.core.errors import DomainError
from src.core.pgcd import check_fibre_variable, pgcd

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SqfComponent:
    """Squarefree factor P with exponent a."""

    P: MPoly
    a: int


@dataclass(frozen=True)
class PsqfBranch:
    """Components with strictly increasing exponents, valid over the zeros of ``chain``."""

    components: Tuple[SqfComponent, ...]
    chain: ZeroDimChain

    def degree_sum(self, z: int) -> int:
        return sum(c.a * c.P.degree(z) for c in self.components)


@dataclass(frozen=True)
class WorkItem:
    B: MPoly
    C: MPoly
    chain: ZeroDimChain
    acc: Tuple[SqfComponent, ...]
    d: int


def _quotient(dividend: MPoly, divisor: MPoly, chain: ZeroDimChain, z: int) -> MPoly:
    """Exact quotient over the zeros of the chain, normalized; a divisor free of z divides out to a unit."""
    dividend = reduce(dividend, chain)
    if divisor.degree(z) == 0:
        return primitive_normalize(dividend)
    return primitive_normalize(reduce(pquo(dividend, divisor, z), chain))


def _involves_chain(poly: MPoly, z: int) -> bool:
    return any(v != z for v in poly.variables())


def psqf(F: MPoly, chain: ZeroDimChain, z: int, split_rational: bool = True) -> List[PsqfBranch]:
    """
    Pseudo squarefree decomposition of F modulo a chain.

    Args:
        F: Polynomial of positive degree in z
        chain: Zero-dimensional chain below z, possibly empty
        z: Index of the decomposition variable
        split_rational: Split off rational roots of the chain first when F
            depends on the chain variables

    Returns:
        Branches whose chains partition the zeros of ``chain``; at each zero
        the components specialize to the squarefree decomposition of
        F(alpha, z)

    Raises:
        DomainError: If F has degree 0 in z
    """
    if F.degree(z) == 0:
        raise DomainError(f"{F.format(chain.order)} does not involve {chain.order.name(z)}")
    check_fibre_variable([F], chain, z)

    pieces = split_rational_roots(chain) if split_rational and _involves_chain(F, z) else [chain]

    branches = []
    for piece in pieces:
        for lifted, sub in make_regular_lead(F, piece, z):
            if lifted.degree(z) == 0:
                branches.append(PsqfBranch((), sub))
                continue
            lifted = primitive_normalize(lifted)
            stack = []
            for first in pgcd([lifted, lifted.derivative(z)], sub, z):
                stack.append(WorkItem(_quotient(lifted, first.G, first.chain, z), first.G, first.chain, (), 1))

            while stack:
                item = stack.pop()
                if item.B.degree(z) == 0:
                    branches.append(PsqfBranch(item.acc, item.chain))
                    continue
                for step in pgcd([item.B, item.C], item.chain, z):
                    C2 = _quotient(item.C, step.G, step.chain, z)
                    P = _quotient(item.B, step.G, step.chain, z)
                    acc = item.acc + (SqfComponent(P, item.d),) if P.degree(z) > 0 else item.acc
                    stack.append(WorkItem(step.G, C2, step.chain, acc, item.d + 1))

    branches.sort(key=lambda b: (b.chain.sort_key(), tuple((c.a, c.P.sort_key()) for c in b.components)))
    logger.debug(f"psqf produced {len(branches)} branches")
    return branches
