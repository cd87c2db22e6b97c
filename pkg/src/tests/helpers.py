"""
Polynomial construction helpers for the tests.
"""

from fractions import Fraction
from typing import List, Optional, Tuple

import sympy

from src.core.arith import MPoly, VarOrder
from src.core.chains import ZeroDimChain
from src.utils.system_parser import parse_polynomial

XY = VarOrder(('x', 'y'))
XYZ = VarOrder(('x', 'y', 'z'))


def poly(text: str, order: VarOrder = XYZ) -> MPoly:
    return parse_polynomial(text, order)


def chain(texts, order: VarOrder = XYZ) -> ZeroDimChain:
    return ZeroDimChain.from_polys([poly(t, order) for t in texts], order)


def to_sympy(p: MPoly, order: VarOrder = XYZ):
    """The same polynomial as a sympy expression."""
    symbols = sympy.symbols(order.names)
    expr = sympy.Integer(0)
    for mono, c in p.terms():
        term = sympy.Rational(c.numerator, c.denominator)
        for v, e in mono:
            term *= symbols[v] ** e
        expr += term
    return expr


def random_poly(rng, nvars: int, degree: int, terms: int = 4, bound: int = 5) -> MPoly:
    """Sum of a few random monomials of bounded degree in x1..x_nvars."""
    result = MPoly.constant(rng.randint(-bound, bound))
    for _ in range(terms):
        term = MPoly.constant(rng.choice([c for c in range(-bound, bound + 1) if c]))
        for v in range(nvars):
            term = term * MPoly.variable(v) ** rng.randint(0, degree)
        result = result + term
    return result


def random_linear_chain(rng, nvars: int, max_degree: int = 4, order: Optional[VarOrder] = None,
                        squarefree: bool = False) -> Tuple[ZeroDimChain, List[Tuple[Fraction, ...]]]:
    """
    A regular chain whose polynomials are products of powers of monic
    linear factors x_k - (a + sum c_i x_i), together with its distinct zeros.
    With ``squarefree`` every factor is distinct and appears once, so the
    chain is simple.
    """
    order = order or VarOrder(tuple(f"x{k + 1}" for k in range(nvars)))
    polys = []
    shifts_per_level = []
    for k in range(nvars):
        shifts = []
        product = MPoly.constant(1)
        degree = rng.randint(1, max_degree)
        while degree:
            power = 1 if squarefree else rng.randint(1, degree)
            shift = MPoly.constant(rng.randint(-3, 3))
            for i in range(k):
                shift = shift + MPoly.variable(i).scale(rng.randint(-1, 1))
            if squarefree and shift in shifts:
                continue
            product = product * (MPoly.variable(k) - shift) ** power
            shifts.append(shift)
            degree -= power
        polys.append(product)
        shifts_per_level.append(shifts)

    points = [()]
    for k in range(nvars):
        extended = set()
        for point in points:
            values = dict(enumerate(point))
            for shift in shifts_per_level[k]:
                extended.add(point + (shift.substitute(values).value,))
        points = sorted(extended)
    return ZeroDimChain.from_polys(polys, order), points


def vanishes(chain_: ZeroDimChain, point) -> bool:
    values = dict(enumerate(point))
    return all(p.evaluate(values).is_zero() for p in chain_.polys)
