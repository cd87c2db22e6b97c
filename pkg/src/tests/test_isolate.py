"""
Tests for real solution isolation with multiplicities.
"""

import random
from fractions import Fraction

import pytest

from src.core.arith import MPoly
from src.core.chains import ZeroDimChain
from src.core.errors import DomainError, IsolationError, NotRegularError
from src.core.isolate import isolate_simple_set, iso_mult, refine_box
from src.core.reg2sim import _cache, reg2sim
from src.tests.helpers import XY, chain


def _boxes(zeros):
    return [(z.box, z.multiplicity) for z in zeros]


class TestIsoMult:

    def test_example_zeros(self, worked):
        """Test the real zeros of the worked chain."""
        zeros = iso_mult(worked)
        assert len(zeros) == 2
        assert zeros[0].box.contains((-1, 0))
        assert zeros[0].multiplicity == 2
        assert zeros[1].box.contains((-1, Fraction(1, 2)))
        assert zeros[1].multiplicity == 1
        assert zeros[0].box.is_disjoint(zeros[1].box)

    def test_width(self, worked):
        """Test refinement to a requested width."""
        width = Fraction(1, 1024)
        for zero in iso_mult(worked, width=width):
            assert zero.box.max_width <= width

    def test_threads_do_not_change_output(self, worked):
        """Test that threads give the same boxes."""
        assert _boxes(iso_mult(worked, threads=4)) == _boxes(iso_mult(worked, threads=1))

    def test_invalid_width(self, worked):
        """Test that a zero width is refused."""
        with pytest.raises(DomainError):
            iso_mult(worked, width=0)

    def test_rejects_non_regular(self):
        """Test isolation of a chain that is not regular."""
        with pytest.raises(NotRegularError):
            iso_mult(chain(['x^2 - x', 'x*y - 1'], XY))

    def test_no_real_zeros(self):
        """Test a chain without real zeros."""
        assert iso_mult(chain(['x^2 + 1', 'y - x'], XY)) == []

    def test_boxes_of_one_branch_are_disjoint(self):
        """Test that boxes of a single branch never share an endpoint."""
        zeros = iso_mult(chain(['x^2 - 2', 'y'], XY))
        assert len(zeros) == 2
        assert zeros[0].box.is_disjoint(zeros[1].box)
        assert zeros[0].box[0].hi < 0 < zeros[1].box[0].lo

    def test_root_at_split_point(self):
        """Test a fibre that vanishes exactly where the search first splits."""
        zeros = iso_mult(chain(['x^2 - 2', 'y^2 - x*y'], XY))
        assert len(zeros) == 4
        assert all(z.multiplicity == 1 for z in zeros)
        on_axis = [z for z in zeros if z.box[1].contains(0)]
        assert len(on_axis) == 2
        for i in range(len(zeros)):
            for j in range(i + 1, len(zeros)):
                assert zeros[i].box.is_disjoint(zeros[j].box)

    def test_without_cache(self, worked):
        """Test that isolation can skip the decomposition cache."""
        zeros = iso_mult(worked, use_cache=False)
        assert len(zeros) == 2
        assert len(_cache) == 0

    def test_given_decomposition(self, worked):
        """Test that a decomposition computed earlier is used as is."""
        decomposition = reg2sim(worked, use_cache=False)
        zeros = iso_mult(worked, use_cache=False, decomposition=decomposition)
        assert _boxes(zeros) == _boxes(iso_mult(worked))


class TestIsolateSimpleSet:

    def test_irrational_lower_coordinate(self):
        """Test lifting over an irrational first coordinate."""
        boxes = isolate_simple_set(chain(['x^2 - 2', 'y^2 - x'], XY))
        assert len(boxes) == 2
        root = 2 ** 0.25
        for box in boxes:
            assert box[0].lo <= 2 ** 0.5 <= box[0].hi
        assert sum(box[1].lo <= root <= box[1].hi for box in boxes) == 1
        assert sum(box[1].lo <= -root <= box[1].hi for box in boxes) == 1
        assert boxes[0].is_disjoint(boxes[1])

    def test_exact_rational_zeros(self):
        """Test that rational zeros come back as points."""
        boxes = isolate_simple_set(chain(['x^2 - 1', 'y - x'], XY))
        assert sorted(b.sort_key() for b in boxes) == [
            ((-1, -1), (-1, -1)),
            ((1, 1), (1, 1)),
        ]

    def test_depth_cap(self):
        """Test that a tight depth cap stops lifting of close roots."""
        close = chain(['x^2 - 2', '(y - x)*(1000*y - 1000*x - 1)'], XY)
        with pytest.raises(IsolationError):
            isolate_simple_set(close, depth_cap=1)
        assert len(isolate_simple_set(close)) == 4


class TestRefineBox:

    def test_refine(self):
        """Test that refinement stays inside the original box."""
        c = chain(['x^2 - 2', 'y^2 - x'], XY)
        box = isolate_simple_set(c)[0]
        refined = refine_box(c, box, Fraction(1, 100))
        assert refined.max_width <= Fraction(1, 100)
        for outer, inner in zip(box, refined):
            assert outer.lo <= inner.lo and inner.hi <= outer.hi

    def test_non_positive_width(self):
        """Test that refinement needs a positive width."""
        c = chain(['x^2 - 2'], XY)
        box = isolate_simple_set(c)[0]
        with pytest.raises(DomainError):
            refine_box(c, box, 0)


def _irrational_chain(rng):
    k = rng.choice([2, 3, 5, 6, 7])
    pairs = {}
    while len(pairs) < rng.randint(1, 3):
        pairs[(rng.randint(-3, 3), rng.randint(-2, 2))] = rng.randint(1, 2)
    x, y = MPoly.variable(0), MPoly.variable(1)
    second = MPoly.constant(1)
    for (a, b), power in pairs.items():
        second = second * (y - a - x.scale(b)) ** power
    return ZeroDimChain.from_polys([x ** 2 - k, second], XY), pairs


@pytest.mark.slow
def test_stability_under_refinement():
    """Test that refined boxes stay inside the boxes they came from."""
    rng = random.Random(161803)
    for _ in range(100):
        c, pairs = _irrational_chain(rng)
        zeros = iso_mult(c)
        assert len(zeros) == 2 * len(pairs)
        assert sorted(z.multiplicity for z in zeros) == sorted(list(pairs.values()) * 2)
        width = Fraction(1, rng.choice([16, 256, 4096]))
        refined = iso_mult(c, width=width)
        assert len(refined) == len(zeros)
        for after in refined:
            assert after.box.max_width <= width
            owners = [
                before for before in zeros
                if all(o.lo <= i.lo and i.hi <= o.hi for o, i in zip(before.box, after.box))
            ]
            assert len(owners) == 1
            assert owners[0].multiplicity == after.multiplicity
        for i in range(len(refined)):
            for j in range(i + 1, len(refined)):
                assert refined[i].box.is_disjoint(refined[j].box)
