"""
Real Solution Isolation Module

Isolates the real zeros of simple chains by triangular lifting and
attaches multiplicities: each branch of the simple decomposition is
isolated on its own, then boxes are refined until boxes of different
branches are disjoint.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from src.core.arith import MPoly
from src.core.chains import ZeroDimChain
from src.core.errors import DomainError, InvariantViolation, IsolationError
from src.core.realroots import (
    IntervalQ, moebius, refine_interval, sign_variations, uni_isolate, univariate_coefficients,
)
from src.core.reg2sim import Decomposition, reg2sim

logger = logging.getLogger(__name__)

DEFAULT_DEPTH_CAP = 256

_SPLIT_FRACTIONS = (Fraction(1, 2), Fraction(3, 8), Fraction(5, 8), Fraction(1, 4), Fraction(3, 4))

__all__ = [
    'BoxQ', 'ChainIsolator', 'DEFAULT_DEPTH_CAP', 'IntervalQ', 'IsolatedZero',
    'iso_mult', 'isolate_simple_set', 'refine_box', 'uni_isolate',
]


@dataclass(frozen=True)
class BoxQ:
    """Product of rational intervals, one per variable in ascending order."""

    intervals: Tuple[IntervalQ, ...]

    def __len__(self) -> int:
        return len(self.intervals)

    def __getitem__(self, index: int) -> IntervalQ:
        return self.intervals[index]

    def __iter__(self):
        return iter(self.intervals)

    @property
    def max_width(self) -> Fraction:
        return max((iv.width for iv in self.intervals), default=Fraction(0))

    def is_degenerate(self) -> bool:
        return all(iv.is_degenerate() for iv in self.intervals)

    def contains(self, point: Sequence) -> bool:
        return all(iv.contains(x) for iv, x in zip(self.intervals, point))

    def is_disjoint(self, other: 'BoxQ') -> bool:
        """Disjoint in at least one coordinate."""
        return any(not a.overlaps(b) for a, b in zip(self.intervals, other.intervals))

    def sort_key(self) -> Tuple:
        return tuple((iv.lo, iv.hi) for iv in self.intervals)

    def to_strings(self) -> List[List[str]]:
        return [iv.to_strings() for iv in self.intervals]

    def __str__(self):
        return '[' + ', '.join(str(iv) for iv in self.intervals) + ']'


@dataclass(frozen=True)
class IsolatedZero:
    """
    A real zero of a chain.

    Args:
        box: Box containing exactly this zero
        multiplicity: Local multiplicity, the product of the owning branch's array
        branch_index: Index of the owning branch in the decomposition
    """

    box: BoxQ
    multiplicity: int
    branch_index: int


Box = Tuple[IntervalQ, ...]


class ChainIsolator:
    """
    Triangular lifting of the real zeros of one simple chain.

    Coordinates over an exact (degenerate) lower box are isolated exactly;
    otherwise the coefficients are evaluated with interval arithmetic and
    the lower box is refined until Descartes' rule gives certain counts.
    """

    def __init__(self, chain: ZeroDimChain, depth_cap: Optional[int] = None):
        self.chain = chain
        self.depth_cap = depth_cap or DEFAULT_DEPTH_CAP

    def isolate(self) -> List[BoxQ]:
        boxes: List[Box] = [()]
        for level in range(self.chain.rank):
            lifted = []
            for box in boxes:
                lifted.extend(self._lift(box, level))
            boxes = lifted
        logger.debug(f"Isolated {len(boxes)} real zeros of a rank {self.chain.rank} simple chain")
        return [BoxQ(box) for box in boxes]

    def refine(self, box: BoxQ, width: Fraction) -> BoxQ:
        current = tuple(box.intervals)
        for level in range(len(current)):
            current = self._refine_coordinate(current, level, width)
        return BoxQ(current)

    # fibre evaluation

    def _fibre(self, lower: Box, level: int) -> MPoly:
        exact = {j: iv.lo for j, iv in enumerate(lower[:level]) if iv.is_degenerate()}
        poly = self.chain[level]
        return poly.substitute(exact) if exact else poly

    @staticmethod
    def _is_exact(fibre: MPoly, level: int) -> bool:
        return fibre.variables() <= {level}

    @staticmethod
    def _coefficients(fibre: MPoly, lower: Box, level: int) -> List[IntervalQ]:
        values = dict(enumerate(lower[:level]))
        return [c.evaluate_with(values, IntervalQ.point) for c in fibre.coefficients_in(level)]

    @staticmethod
    def _value_at(fibre: MPoly, lower: Box, level: int, y: Fraction) -> IntervalQ:
        values = dict(enumerate(lower[:level]))
        return fibre.substitute({level: y}).evaluate_with(values, IntervalQ.point)

    def _parity(self, fibre: MPoly, lower: Box, level: int, a: Fraction, b: Fraction) -> Optional[bool]:
        signs = [c.sign() for c in moebius(self._coefficients(fibre, lower, level), a, b)]
        if None in signs:
            return None
        return sign_variations(signs) % 2 == 1

    # lifting

    def _lift(self, box: Box, level: int) -> List[Box]:
        attempt = 0
        while True:
            fibre = self._fibre(box, level)
            if self._is_exact(fibre, level):
                return [box + (iv,) for iv in uni_isolate(fibre)]
            coeffs = self._coefficients(fibre, box, level)
            if coeffs[-1].sign() not in (None, 0):
                roots = self._interval_descartes(fibre, box, level, coeffs, 8 + 4 * attempt)
                if roots is not None:
                    return [box + (iv,) for iv in roots]
            attempt += 1
            if attempt > self.depth_cap:
                raise IsolationError(
                    f"could not lift level {level} of {self.chain} within {self.depth_cap} refinements",
                    level=level,
                    depth=attempt,
                )
            box = self._shrink(box, level)

    def _split_point(self, fibre: MPoly, lower: Box, level: int, a: Fraction, b: Fraction) -> Optional[Fraction]:
        """Return a point of (a, b) where the fibre has a certain nonzero sign."""
        for t in _SPLIT_FRACTIONS:
            m = a + (b - a) * t
            if self._value_at(fibre, lower, level, m).sign() not in (None, 0):
                return m
        return None

    def _interior(self, fibre: MPoly, lower: Box, level: int, a: Fraction, b: Fraction) -> Optional[IntervalQ]:
        """Shrink (a, b), holding one root, to a closed interval inside it."""
        lo, hi = a, b
        for _ in range(self.depth_cap):
            if lo != a and hi != b:
                return IntervalQ(lo, hi)
            m = self._split_point(fibre, lower, level, lo, hi)
            if m is None:
                return None
            left = self._parity(fibre, lower, level, lo, m)
            if left is None:
                return None
            lo, hi = (lo, m) if left else (m, hi)
        return None

    def _interval_descartes(self, fibre: MPoly, lower: Box, level: int, coeffs: List[IntervalQ],
                            max_depth: int) -> Optional[List[IntervalQ]]:
        lead = coeffs[-1]
        smallest = min(abs(lead.lo), abs(lead.hi))
        bound = 1 + max((c.magnitude() for c in coeffs[:-1]), default=Fraction(0)) / smallest

        found = []
        stack = [(-bound, bound, 0)]
        while stack:
            a, b, depth = stack.pop()
            signs = [c.sign() for c in moebius(coeffs, a, b)]
            if None not in signs:
                variations = sign_variations(signs)
                if variations == 0:
                    continue
                if variations == 1:
                    interior = self._interior(fibre, lower, level, a, b)
                    if interior is None:
                        return None
                    found.append(interior)
                    continue
            if depth >= max_depth:
                return None
            m = self._split_point(fibre, lower, level, a, b)
            if m is None:
                return None
            stack.append((m, b, depth + 1))
            stack.append((a, m, depth + 1))
        return sorted(found, key=lambda iv: (iv.lo, iv.hi))

    # refinement

    def _shrink(self, box: Box, level: int) -> Box:
        widths = [iv.width for iv in box[:level] if not iv.is_degenerate()]
        if not widths:
            return box
        target = max(widths) / 2
        lower = box[:level]
        for j in range(level):
            lower = self._refine_coordinate(lower, j, target)
        return lower + box[level:]

    def _refine_coordinate(self, box: Box, level: int, width: Fraction) -> Box:
        iv = box[level]
        steps = 0
        while not iv.is_degenerate() and iv.width > width:
            fibre = self._fibre(box, level)
            if self._is_exact(fibre, level):
                _, coeffs = univariate_coefficients(fibre)
                iv = refine_interval(coeffs, iv, width)
                break
            steps += 1
            if steps > self.depth_cap:
                raise IsolationError(
                    f"refinement of coordinate {self.chain.order.name(level)} exceeded {self.depth_cap} steps",
                    level=level,
                    depth=steps,
                )
            s_lo = self._value_at(fibre, box, level, iv.lo).sign()
            s_hi = self._value_at(fibre, box, level, iv.hi).sign()
            chosen = None
            for t in _SPLIT_FRACTIONS[:3]:
                m = iv.lo + iv.width * t
                value = self._value_at(fibre, box, level, m).sign()
                if value == 0:
                    chosen = (m, m)
                    break
                if value is None:
                    continue
                if s_lo not in (None, 0) and s_hi not in (None, 0):
                    chosen = (iv.lo, m) if s_lo != value else (m, iv.hi)
                    break
                left = self._parity(fibre, box, level, iv.lo, m)
                if left is not None:
                    chosen = (iv.lo, m) if left else (m, iv.hi)
                    break
            if chosen is None:
                box = self._shrink(box, level)
                continue
            iv = IntervalQ(*chosen)
            box = box[:level] + (iv,) + box[level + 1:]
        return box[:level] + (iv,) + box[level + 1:]


def isolate_simple_set(chain: ZeroDimChain, depth_cap: Optional[int] = None) -> List[BoxQ]:
    """
    Isolate the real zeros of a simple chain.

    Returns:
        Pairwise disjoint boxes, one per real zero

    Raises:
        IsolationError: If refinement exceeds the depth cap
    """
    return ChainIsolator(chain, depth_cap).isolate()


def refine_box(chain: ZeroDimChain, box: BoxQ, width, depth_cap: Optional[int] = None) -> BoxQ:
    """
    Refine an isolating box until every interval is at most ``width`` wide.

    Raises:
        DomainError: If width is not positive
    """
    width = Fraction(width)
    if width <= 0:
        raise DomainError(f"refinement width must be positive, got {width}")
    return ChainIsolator(chain, depth_cap).refine(box, width)


def _separate(entries: List[List], isolators: Dict[int, ChainIsolator], depth_cap: int) -> None:
    """Refine overlapping boxes in place until all are pairwise disjoint."""
    for round_number in range(depth_cap + 1):
        overlapping = set()
        for i in range(len(entries)):
            for j in range(i + 1, len(entries)):
                if not entries[i][1].is_disjoint(entries[j][1]):
                    if entries[i][1].is_degenerate() and entries[j][1].is_degenerate():
                        raise InvariantViolation(f"two boxes share the zero {entries[i][1]}")
                    overlapping.update((i, j))
        if not overlapping:
            return
        for k in overlapping:
            index, box = entries[k]
            if not box.is_degenerate():
                entries[k][1] = isolators[index].refine(box, box.max_width / 2)
        logger.debug(f"Separation round {round_number + 1} refined {len(overlapping)} boxes")
    raise IsolationError(f"boxes still overlap after {depth_cap} separation rounds", depth=depth_cap)


def iso_mult(chain, threads: int = 1, width=None, depth_cap: Optional[int] = None,
             split_rational: bool = True, use_cache: bool = True,
             decomposition: Optional[Decomposition] = None) -> List[IsolatedZero]:
    """
    Real solution isolation with multiplicity.

    Args:
        chain: Zero-dimensional regular chain
        threads: Number of branches isolated concurrently
        width: Optional final refinement width for every box
        depth_cap: Bisection cap per coordinate
        split_rational: Passed on to the simple decomposition
        use_cache: Reuse a cached decomposition of the same chain
        decomposition: Simple decomposition of the chain computed earlier

    Returns:
        One IsolatedZero per real zero, boxes pairwise disjoint

    Raises:
        NotRegularError: If the chain is not a regular chain
        IsolationError: If refinement exceeds the depth cap
    """
    depth_cap = depth_cap or DEFAULT_DEPTH_CAP
    if decomposition is None:
        decomposition = reg2sim(chain, split_rational=split_rational, use_cache=use_cache)
    isolators = {i: ChainIsolator(b.chain, depth_cap) for i, b in enumerate(decomposition.branches)}

    def isolate_branch(index: int) -> List[List]:
        return [[index, box] for box in isolators[index].isolate()]

    indices = list(isolators)
    if threads > 1 and len(indices) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            per_branch = list(pool.map(isolate_branch, indices))
    else:
        per_branch = [isolate_branch(i) for i in indices]
    entries = [entry for group in per_branch for entry in group]

    _separate(entries, isolators, depth_cap)
    if width is not None:
        width = Fraction(width)
        if width <= 0:
            raise DomainError(f"refinement width must be positive, got {width}")
        for entry in entries:
            entry[1] = isolators[entry[0]].refine(entry[1], width)

    zeros = [
        IsolatedZero(box, decomposition.branches[index].product, index)
        for index, box in entries
    ]
    zeros.sort(key=lambda z: (z.box.sort_key(), z.branch_index))
    logger.info(f"Isolated {len(zeros)} real zeros over {len(decomposition)} branches")
    return zeros
