"""
Multiplicities of the shipped benchmark systems.
"""

import pytest

from src.core.chains import check_regular
from src.core.dualspace import dual_space_dim
from src.core.reg2sim import reg2sim, reg_mult
from src.utils.point_parser import parse_point
from src.utils.system_parser import load_corpus


def _entries(corpus_path, **flags):
    return [e for e in load_corpus(corpus_path) if all(getattr(e, k) == v for k, v in flags.items())]


def test_every_system_is_regular(corpus_path):
    """Test that every shipped system is a regular chain."""
    for entry in load_corpus(corpus_path):
        _, triangular = entry.load()
        check_regular(triangular)


def test_worked_example(corpus_path):
    """Test the worked system from the corpus."""
    entry = _entries(corpus_path, name='worked')[0]
    _, triangular = entry.load()
    assert len(reg2sim(triangular)) == 4
    assert reg_mult(triangular, parse_point(','.join(entry.zero))) == entry.multiplicity


@pytest.mark.slow
def test_listed_multiplicities(corpus_path):
    """Test every listed multiplicity of the corpus."""
    for entry in _entries(corpus_path, extended=False):
        _, triangular = entry.load()
        decomposition = reg2sim(triangular)
        assert decomposition.satisfies_dimension_identity(), entry.name
        point = parse_point(','.join(entry.zero))
        assert reg_mult(triangular, point) == entry.multiplicity, entry.name


@pytest.mark.slow
def test_oracle_agrees(corpus_path):
    """Test the dual space oracle on the corpus systems that allow it."""
    for entry in _entries(corpus_path, oracle=True):
        _, triangular = entry.load()
        point = [c.re for c in parse_point(','.join(entry.zero))]
        assert dual_space_dim(list(triangular.polys), point) == entry.multiplicity, entry.name


@pytest.mark.slow
def test_branch_coefficients_stay_small(corpus_path):
    """Test that the branches of the long-coefficient system come out reduced."""
    entry = _entries(corpus_path, name='T4')[0]
    _, triangular = entry.load()
    decomposition = reg2sim(triangular)
    fifth_powers = [b for b in decomposition if b.array[1] == 5]
    assert fifth_powers
    assert all(b.chain[1].format(b.chain.order) == 'y - 1' for b in fifth_powers)
    for branch in decomposition:
        for p in branch.chain.polys:
            for c in p.rational_coefficients():
                assert c.numerator.bit_length() < 512 and c.denominator.bit_length() < 512
