"""Exact index sets for the exponent semigroup.

Two kinds are supported:

* :class:`OrdinaryIndexSet` -- the multiplicative semigroup ``{1, ..., N}``
  (ordinary Dirichlet series, exponents ``log n``).  Indices are plain ints
  and never go through floating point.
* :class:`GeneratedSemigroup` -- ``{sum k_i a_i <= T}`` for positive rational
  generators ``a_i`` and rational horizon ``T``.  Internally every element is
  an integer multiple of ``1/L`` where ``L`` is the lcm of all denominators,
  so element identity is decided exactly.

Both expose the same interface: ``elements`` (sorted, deduplicated), the
``unit``, ``position(idx)``, ``decompositions(idx)`` and the flat pair table
used by convolution.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache

import numpy as np

from .errors import ExplosionError

DEFAULT_MAX_ELEMENTS = 100_000


def parse_rational(value) -> Fraction:
    """Exact rational from an int, Fraction, or string such as ``"3/2"``."""
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"not a rational: {value!r}") from exc
    raise TypeError(f"expected an exact rational (int, Fraction or 'num/den'), got {type(value).__name__}")


def format_rational(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


class IndexSet:
    """Behaviour shared by both index-set kinds.

    Subclasses provide ``elements``, ``unit``, ``position`` and the raw pair
    arrays ``_pairs`` (output, left, right positions sorted by output and then
    by decomposition order).
    """

    kind: str

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, idx):
        try:
            self.position(idx)
        except (KeyError, TypeError, ValueError):
            return False
        return True

    @property
    def unit_position(self) -> int:
        return 0

    @cached_property
    def pair_table(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """``(out, left, right)`` position arrays; one row per decomposition."""
        out, left, right = self._pairs()
        for arr in (out, left, right):
            arr.setflags(write=False)
        return out, left, right

    @cached_property
    def pair_starts(self) -> np.ndarray:
        """Start offset in :attr:`pair_table` of each output position (plus end)."""
        out = self.pair_table[0]
        return np.searchsorted(out, np.arange(len(self) + 1))

    def pairs_at(self, pos: int) -> tuple[np.ndarray, np.ndarray]:
        lo, hi = self.pair_starts[pos], self.pair_starts[pos + 1]
        _, left, right = self.pair_table
        return left[lo:hi], right[lo:hi]

    def decompositions(self, idx) -> list[tuple]:
        """All ordered pairs ``(a, b)`` of elements combining to ``idx``."""
        left, right = self.pairs_at(self.position(idx))
        els = self.elements
        return [(els[i], els[j]) for i, j in zip(left, right)]

    @cached_property
    def exponents(self) -> np.ndarray:
        """Real exponents ``lambda`` of the elements (``log n`` in the ordinary case)."""
        return np.array([self.exponent(e) for e in self.elements], dtype=float)


@dataclass(frozen=True)
class OrdinaryIndexSet(IndexSet):
    """Indices ``1..N`` under multiplication; ``n`` decomposes as ``k * l = n``."""

    N: int
    kind = "ordinary"

    def __post_init__(self):
        if isinstance(self.N, bool) or int(self.N) != self.N or self.N < 1:
            raise ValueError(f"truncation bound must be a positive integer, got {self.N!r}")
        object.__setattr__(self, "N", int(self.N))

    @property
    def elements(self) -> range:
        return range(1, self.N + 1)

    @property
    def unit(self) -> int:
        return 1

    def position(self, idx) -> int:
        if isinstance(idx, bool) or not isinstance(idx, (int, np.integer)):
            if isinstance(idx, Fraction) and idx.denominator == 1:
                idx = idx.numerator
            else:
                raise TypeError(f"ordinary index must be an integer, got {idx!r}")
        if not 1 <= idx <= self.N:
            raise KeyError(f"index {idx} outside window 1..{self.N}")
        return int(idx) - 1

    def coerce(self, idx) -> int:
        return self.position(idx) + 1

    def exponent(self, idx) -> float:
        return math.log(idx)

    def with_window(self, N: int) -> "OrdinaryIndexSet":
        return OrdinaryIndexSet(N)

    def _pairs(self):
        return _ordinary_pairs(self.N)

    def to_json(self) -> dict:
        return {"type": "ordinary", "N": self.N}


@lru_cache(maxsize=64)
def _ordinary_pairs(N: int):
    ks, ls = [], []
    for k in range(1, N + 1):
        m = np.arange(1, N // k + 1)
        ks.append(np.full(m.shape, k))
        ls.append(m)
    k = np.concatenate(ks)
    l = np.concatenate(ls)
    n = k * l
    order = np.lexsort((k, n))
    return (n[order] - 1).astype(np.intp), (k[order] - 1).astype(np.intp), (l[order] - 1).astype(np.intp)


@dataclass(frozen=True)
class GeneratedSemigroup(IndexSet):
    """``{sum k_i * generator_i : k_i >= 0} ∩ [0, horizon]`` with exact rationals."""

    generators: tuple[Fraction, ...]
    horizon: Fraction
    max_elements: int = field(default=DEFAULT_MAX_ELEMENTS, compare=False, repr=False)
    kind = "generated"

    def __post_init__(self):
        gens = tuple(sorted({parse_rational(g) for g in self.generators}))
        if not gens:
            raise ValueError("at least one generator is required")
        if gens[0] <= 0:
            raise ValueError("generators must be positive")
        horizon = parse_rational(self.horizon)
        if horizon <= 0:
            raise ValueError("horizon must be positive")
        object.__setattr__(self, "generators", gens)
        object.__setattr__(self, "horizon", horizon)
        # enumerate eagerly so an oversized request fails at construction
        _ = self._table

    @cached_property
    def _table(self):
        return _generated_table(self.generators, self.horizon, self.max_elements)

    @property
    def scale(self) -> int:
        """Common denominator ``L``; elements are stored as ``L * lambda``."""
        return self._table[0]

    @cached_property
    def elements(self) -> tuple[Fraction, ...]:
        L, ints = self._table[:2]
        return tuple(Fraction(int(v), L) for v in ints)

    @property
    def unit(self) -> Fraction:
        return Fraction(0)

    def position(self, idx) -> int:
        q = parse_rational(idx) if not isinstance(idx, (np.integer,)) else Fraction(int(idx))
        scaled = q * self.scale
        if scaled.denominator != 1:
            raise KeyError(f"{q} is not an element")
        pos = self._table[2].get(int(scaled))
        if pos is None:
            raise KeyError(f"{q} is not an element of the semigroup within the horizon")
        return pos

    def coerce(self, idx) -> Fraction:
        return self.elements[self.position(idx)]

    def exponent(self, idx) -> float:
        return float(Fraction(idx))

    def with_horizon(self, horizon) -> "GeneratedSemigroup":
        return GeneratedSemigroup(self.generators, horizon, self.max_elements)

    def _pairs(self):
        L, ints = self._table[:2]
        T = int(self.horizon * L)
        outs, lefts, rights = [], [], []
        for i, a in enumerate(ints):
            hi = np.searchsorted(ints, T - a, side="right")
            if hi == 0:
                break
            js = np.arange(hi)
            outs.append(np.searchsorted(ints, a + ints[:hi]))
            lefts.append(np.full(hi, i))
            rights.append(js)
        out = np.concatenate(outs)
        left = np.concatenate(lefts)
        right = np.concatenate(rights)
        order = np.lexsort((left, out))
        return out[order].astype(np.intp), left[order].astype(np.intp), right[order].astype(np.intp)

    def to_json(self) -> dict:
        return {
            "type": "generated",
            "generators": [format_rational(g) for g in self.generators],
            "horizon": format_rational(self.horizon),
        }


@lru_cache(maxsize=64)
def _generated_table(gens: tuple[Fraction, ...], horizon: Fraction, cap: int):
    L = math.lcm(horizon.denominator, *(g.denominator for g in gens))
    steps = sorted({int(g * L) for g in gens})
    T = int(horizon * L)
    seen = {0}
    frontier = [0]
    while frontier:
        nxt = []
        for v in frontier:
            for g in steps:
                w = v + g
                if w > T:
                    break
                if w not in seen:
                    seen.add(w)
                    if len(seen) > cap:
                        raise ExplosionError(
                            f"semigroup has more than {cap} elements below horizon {horizon}"
                        )
                    nxt.append(w)
        frontier = nxt
    ints = np.array(sorted(seen), dtype=np.int64)
    ints.setflags(write=False)
    lookup = {int(v): k for k, v in enumerate(ints)}
    return L, ints, lookup


def enumerate_elements(generators, horizon, max_elements: int = DEFAULT_MAX_ELEMENTS) -> GeneratedSemigroup:
    """Materialise ``Λ ∩ [0, horizon]``; raises ExplosionError past ``max_elements``."""
    return GeneratedSemigroup(tuple(generators), horizon, max_elements)


def decompositions(index_set: IndexSet, idx) -> list[tuple]:
    return index_set.decompositions(idx)
