"""
Simple Decomposition Module

Decomposes a zero-dimensional regular chain into simple chains, each with
a multiplicity array, and answers multiplicity queries at zeros: the local
multiplicity of a zero is the product of the array of the single branch
that vanishes there.
"""

import logging
import threading
from collections import OrderedDict
from dataclasses import dataclass
from math import prod
from typing import Any, Dict, List, Mapping, Sequence, Tuple, Union

from src.core.arith import GaussianRational
from src.core.chains import ZeroDimChain, TriangularSet, chain_dimension, check_regular, compact_chain
from src.core.errors import DomainError, InvariantViolation, PointNotZeroError
from src.core.psqf import psqf

logger = logging.getLogger(__name__)

DEFAULT_CACHE_ENTRIES = 128


@dataclass(frozen=True)
class SimpleBranch:
    """
    A simple chain B with multiplicity array P.

    Args:
        chain: Simple chain [B1, ..., Br]
        array: Positive exponents [p1, ..., pr]
    """

    chain: ZeroDimChain
    array: Tuple[int, ...]

    @property
    def product(self) -> int:
        return prod(self.array)

    def powered(self) -> List:
        """The polynomials B1^p1, ..., Br^pr."""
        return [b ** p for b, p in zip(self.chain.polys, self.array)]

    def weighted_dimension(self) -> int:
        return self.product * chain_dimension(self.chain)

    def vanishes_at(self, point: Mapping[int, GaussianRational]) -> bool:
        return all(b.evaluate(point).is_zero() for b in self.chain.polys)


@dataclass(frozen=True)
class Decomposition:
    branches: Tuple[SimpleBranch, ...]
    source: ZeroDimChain

    def __len__(self) -> int:
        return len(self.branches)

    def __iter__(self):
        return iter(self.branches)

    def weighted_dimension(self) -> int:
        return sum(b.weighted_dimension() for b in self.branches)

    def satisfies_dimension_identity(self) -> bool:
        return self.weighted_dimension() == chain_dimension(self.source)


class DecompositionCache:
    """
    Thread-safe memo table from (chain, options) to Decomposition.

    Holds at most ``max_entries`` decompositions and evicts the least
    recently used one when full.
    """

    def __init__(self, max_entries: int = DEFAULT_CACHE_ENTRIES):
        self._entries: OrderedDict = OrderedDict()
        self._lock = threading.Lock()
        self.max_entries = DEFAULT_CACHE_ENTRIES
        self.resize(max_entries)

    def resize(self, max_entries: int) -> None:
        """
        Change the capacity, evicting the oldest entries that no longer fit.

        Raises:
            DomainError: If max_entries is not positive
        """
        if max_entries < 1:
            raise DomainError(f"cache size must be positive, got {max_entries}")
        with self._lock:
            self.max_entries = max_entries
            self._evict()

    def _evict(self) -> None:
        while len(self._entries) > self.max_entries:
            self._entries.popitem(last=False)

    def get(self, key):
        with self._lock:
            value = self._entries.get(key)
            if value is not None:
                self._entries.move_to_end(key)
            return value

    def put(self, key, value: Decomposition) -> Decomposition:
        with self._lock:
            if key in self._entries:
                self._entries.move_to_end(key)
                return self._entries[key]
            self._entries[key] = value
            self._evict()
            return value

    def clear(self) -> None:
        with self._lock:
            self._entries.clear()

    def __len__(self) -> int:
        with self._lock:
            return len(self._entries)


_cache = DecompositionCache()


def clear_cache() -> None:
    _cache.clear()


def configure_cache(max_entries: int) -> None:
    """Set how many decompositions the shared cache keeps."""
    _cache.resize(max_entries)


def _as_chain(chain: Union[ZeroDimChain, TriangularSet]) -> ZeroDimChain:
    return check_regular(chain.base if isinstance(chain, ZeroDimChain) else chain)


def reg2sim(chain: Union[ZeroDimChain, TriangularSet], split_rational: bool = True,
            use_cache: bool = True) -> Decomposition:
    """
    Decompose a regular chain into simple branches with multiplicity arrays.

    Args:
        chain: Zero-dimensional regular chain
        split_rational: Split rational roots over rational points
        use_cache: Reuse a decomposition computed earlier for the same chain

    Returns:
        Decomposition with branches sorted structurally, each branch
        polynomial kept in its smaller equivalent form

    Raises:
        NotRegularError: If the chain is not a zero-dimensional regular chain
    """
    chain = _as_chain(chain)
    key = (chain, split_rational)
    if use_cache:
        cached = _cache.get(key)
        if cached is not None:
            logger.debug(f"Decomposition cache hit for {chain}")
            return cached

    branches = []
    stack = [(0, ZeroDimChain.empty(chain.order), ())]
    while stack:
        level, simple, array = stack.pop()
        if level == chain.rank:
            branches.append(SimpleBranch(simple, array))
            continue
        for branch in psqf(chain[level], simple, level, split_rational=split_rational):
            for component in branch.components:
                extended = compact_chain(branch.chain.extend(component.P))
                stack.append((level + 1, extended, array + (component.a,)))

    branches.sort(key=lambda b: (b.chain.sort_key(), b.array))
    decomposition = Decomposition(tuple(branches), chain)
    if not decomposition.satisfies_dimension_identity():
        raise InvariantViolation(
            f"weighted dimension {decomposition.weighted_dimension()} of the decomposition differs "
            f"from the chain dimension {chain_dimension(chain)}"
        )
    logger.info(f"Decomposed {chain} into {len(branches)} simple branches")
    return _cache.put(key, decomposition) if use_cache else decomposition


def _as_point(point: Union[Sequence, Mapping[int, Any]], size: int) -> Dict[int, GaussianRational]:
    if isinstance(point, Mapping):
        values = dict(point)
    else:
        values = dict(enumerate(point))
    if sorted(values) != list(range(size)):
        raise DomainError(f"point must give exactly {size} coordinates")
    return {v: GaussianRational.coerce(a) for v, a in values.items()}


def reg_mult_detail(chain: Union[ZeroDimChain, TriangularSet], point, split_rational: bool = True,
                    use_cache: bool = True) -> SimpleBranch:
    """
    The simple branch vanishing at a zero of the chain.

    Raises:
        PointNotZeroError: If the point is not a zero of the chain
        InvariantViolation: If no branch or more than one branch vanishes there
    """
    chain = _as_chain(chain)
    values = _as_point(point, chain.rank)
    for index, poly in enumerate(chain.polys):
        if not poly.evaluate(values).is_zero():
            raise PointNotZeroError(
                f"point is not a zero: polynomial {index + 1} evaluates to {poly.evaluate(values)}",
                index=index,
            )

    decomposition = reg2sim(chain, split_rational=split_rational, use_cache=use_cache)
    matches = [b for b in decomposition.branches if b.vanishes_at(values)]
    if len(matches) != 1:
        raise InvariantViolation(f"{len(matches)} branches vanish at a zero of {chain}, expected exactly one")
    return matches[0]


def reg_mult(chain: Union[ZeroDimChain, TriangularSet], point, split_rational: bool = True,
             use_cache: bool = True) -> int:
    """Local multiplicity of a Gaussian-rational zero of a regular chain."""
    return reg_mult_detail(chain, point, split_rational, use_cache).product
