"""
Tests for the pseudo gcd module.
"""

import random

import pytest
import sympy

from src.core.arith import ONE, ZERO
from src.core.chains import ZeroDimChain, chain_dimension, is_simple, reduce
from src.core.errors import DomainError
from src.core.pgcd import pgcd
from src.tests.helpers import XY, XYZ, chain, poly, random_linear_chain, random_poly, to_sympy, vanishes


def test_univariate_over_empty_chain():
    """Test a univariate gcd."""
    empty = ZeroDimChain.empty(XY)
    branches = pgcd([poly('x^3 - x', XY), poly('x^2 - 2*x + 1', XY)], empty, 0)
    assert len(branches) == 1
    assert branches[0].G == poly('x - 1', XY)
    assert branches[0].chain == empty


def test_coprime_gives_one():
    """Test coprime polynomials."""
    branches = pgcd([poly('x^2 + 1', XY), poly('x - 3', XY)], ZeroDimChain.empty(XY), 0)
    assert [b.G for b in branches] == [ONE]


def test_all_zero_gives_zero():
    """Test a gcd that is zero on one part of the chain."""
    c = chain(['x^2 - 1'], XY)
    branches = pgcd([poly('x*y - y', XY), poly('(x - 1)*y^2', XY)], c, 1)
    by_chain = {tuple(b.chain.format()): b.G for b in branches}
    assert by_chain[('x - 1',)] == ZERO
    assert by_chain[('x + 1',)] == poly('y', XY)


def test_splits_where_gcd_changes():
    """Test a split where the gcd differs between zeros."""
    c = chain(['x^2 - 1'], XY)
    branches = pgcd([poly('y^2 - 1', XY), poly('y - x', XY)], c, 1)
    assert sum(chain_dimension(b.chain) for b in branches) == 2
    for b in branches:
        assert b.G.degree(1) == 1


def test_single_polynomial():
    """Test the gcd of one polynomial."""
    c = chain(['x^2 - x'], XY)
    branches = pgcd([poly('x*y^2 + y', XY)], c, 1)
    degrees = sorted(b.G.degree(1) for b in branches)
    assert degrees == [1, 2]


def test_empty_set():
    """Test the gcd of no polynomials."""
    with pytest.raises(DomainError):
        pgcd([], ZeroDimChain.empty(XY), 0)


def test_variable_constrained_by_chain():
    """Test a gcd variable the chain already fixes."""
    with pytest.raises(DomainError):
        pgcd([poly('x', XY)], chain(['x^2 - 2'], XY), 0)


def test_stray_variable():
    """Test a polynomial in a variable outside the chain."""
    with pytest.raises(DomainError):
        pgcd([poly('y + z')], chain(['x^2 - 2']), 1)


def test_cofactors_over_simple_chain():
    """Test cofactors over a simple chain."""
    c = chain(['x^2 - 2'], XY)
    polys = [poly('y^2 - 2', XY), poly('x*y^2 - 2*y', XY)]
    branches = pgcd(polys, c, 1, track_cofactors=True)
    for b in branches:
        combination = b.multiplier * b.G - sum((cf * f for cf, f in zip(b.cofactors, polys)), ZERO)
        assert reduce(combination, b.chain) == ZERO


@pytest.mark.slow
def test_specializations_match_sympy():
    """Test gcds at the zeros of random chains against sympy."""
    rng = random.Random(99)
    checked = 0
    while checked < 60:
        base, points = random_linear_chain(rng, 1, max_degree=3, order=XY, squarefree=True)
        if not is_simple(base):
            continue
        polys = [random_poly(rng, 2, 2, terms=3, bound=3) for _ in range(2)]
        if all(p.degree(1) == 0 for p in polys):
            continue
        branches = pgcd(polys, base, 1, track_cofactors=rng.random() < 0.5)
        assert sum(chain_dimension(b.chain) for b in branches) == chain_dimension(base)
        y = sympy.Symbol('y')
        for point in points:
            owners = [b for b in branches if vanishes(b.chain, point)]
            assert len(owners) == 1
            values = {0: point[0]}
            expected = sympy.gcd(*[to_sympy(p.substitute(values), XY) for p in polys])
            got = to_sympy(owners[0].G.substitute(values), XY)
            if expected == 0:
                assert got == 0
            else:
                assert got != 0
                assert y not in sympy.cancel(got / expected).free_symbols
        checked += 1
