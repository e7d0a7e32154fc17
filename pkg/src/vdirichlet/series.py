"""Truncated generalized Dirichlet series with coefficients in an :class:`Algebra`.

A :class:`DirichletSeries` stores one coefficient per element of its index set
(dense, zero meaning absent).  All arithmetic happens in the quotient by the
indices beyond the window, which is exact: a decomposition of an in-window
index never involves an out-of-window one.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from numbers import Number

import numpy as np

from .algebra import Algebra, Coefficient, ScalarKind
from .errors import DescriptorMismatch
from .semigroup import GeneratedSemigroup, IndexSet, OrdinaryIndexSet
from .weights import Weight


@dataclass(frozen=True)
class HalfPlanePoint:
    """``s = j + i t`` with ``j >= 0``."""

    j: float
    t: float

    def __post_init__(self):
        if not self.j >= 0:
            raise ValueError(f"half-plane points need j >= 0, got {self.j}")

    @property
    def s(self) -> complex:
        return complex(self.j, self.t)


@lru_cache(maxsize=256)
def _weight_values(weight: Weight, index_set: IndexSet) -> np.ndarray:
    vals = weight.values(index_set)
    vals.setflags(write=False)
    return vals


class DirichletSeries:
    """Finitely supported coefficient map ``index -> Coefficient`` over a window.

    Instances are immutable.  ``f * g`` is Dirichlet convolution, ``f + g``
    and ``f - g`` are pointwise.  ``z * f`` scales each coefficient on the
    left and ``f * z`` on the right (only quaternions tell them apart).
    """

    __slots__ = ("index_set", "algebra", "coeffs")

    def __init__(self, index_set: IndexSet, algebra: Algebra, coeffs=None, *, _trusted=False):
        if coeffs is None:
            arr = algebra.zeros((len(index_set),))
        elif _trusted:
            arr = coeffs
        else:
            arr = np.array(coeffs, dtype=complex)
            expected = (len(index_set),) + algebra.shape
            if arr.shape != expected:
                raise ValueError(f"coefficient array has shape {arr.shape}, expected {expected}")
            if not np.all(np.isfinite(arr)):
                raise ValueError("coefficients must be finite")
        arr.setflags(write=False)
        object.__setattr__(self, "index_set", index_set)
        object.__setattr__(self, "algebra", algebra)
        object.__setattr__(self, "coeffs", arr)

    def __setattr__(self, name, value):
        raise AttributeError("DirichletSeries is immutable")

    # -- constructors ------------------------------------------------------------

    @classmethod
    def zeros(cls, index_set: IndexSet, algebra: Algebra) -> "DirichletSeries":
        return cls(index_set, algebra)

    @classmethod
    def delta(cls, index_set: IndexSet, algebra: Algebra) -> "DirichletSeries":
        """The unit: ``1`` at the unit index, zero elsewhere."""
        arr = algebra.zeros((len(index_set),))
        arr[index_set.unit_position] = algebra.identity()
        return cls(index_set, algebra, arr, _trusted=True)

    @classmethod
    def from_dict(cls, index_set: IndexSet, algebra: Algebra, mapping) -> "DirichletSeries":
        """From ``{index: value}``; values are Coefficients, or numbers for scalar C."""
        arr = algebra.zeros((len(index_set),))
        for idx, value in dict(mapping).items():
            if isinstance(value, Coefficient):
                if value.algebra != algebra:
                    raise DescriptorMismatch(f"coefficient in {value.algebra}, series in {algebra}")
                value = value.data
            elif isinstance(value, Number):
                value = algebra.embed_scalar(value)
            arr[index_set.position(idx)] = value
        return cls(index_set, algebra, arr)

    @classmethod
    def from_components(cls, first: "DirichletSeries", second: "DirichletSeries", scalar) -> "DirichletSeries":
        """Join two complex(-matrix) series into a bicomplex or quaternion series."""
        first._check(second)
        scalar = ScalarKind(scalar)
        if first.algebra.scalar is not ScalarKind.COMPLEX or scalar is ScalarKind.COMPLEX:
            raise DescriptorMismatch("components must be complex and target kind split")
        alg = Algebra(scalar, first.algebra.dim)
        return cls(first.index_set, alg, np.stack([first.coeffs, second.coeffs], axis=1), _trusted=True)

    @classmethod
    def from_entries(cls, rows) -> "DirichletSeries":
        """Assemble a matrix series from a square grid of scalar series."""
        rows = [list(r) for r in rows]
        d = len(rows)
        first = rows[0][0]
        for r in rows:
            if len(r) != d:
                raise ValueError("entry grid must be square")
            for e in r:
                first._check(e)
        if first.algebra.is_matrix:
            raise DescriptorMismatch("entries must be scalar series")
        grid = np.stack([np.stack([e.coeffs for e in r], axis=-1) for r in rows], axis=-2)
        # grid: (n, *scalar_shape, d, d)
        return cls(first.index_set, Algebra(first.algebra.scalar, d), grid, _trusted=True)

    # -- access ----------------------------------------------------------------

    def __getitem__(self, idx) -> Coefficient:
        return Coefficient(self.algebra, self.coeffs[self.index_set.position(idx)])

    def __len__(self):
        return len(self.index_set)

    @property
    def constant_term(self) -> Coefficient:
        return Coefficient(self.algebra, self.coeffs[self.index_set.unit_position])

    def support(self) -> list:
        flat = self.coeffs.reshape(len(self.index_set), -1)
        nz = np.flatnonzero(np.any(flat != 0, axis=1))
        els = self.index_set.elements
        return [els[k] for k in nz]

    def items(self):
        for idx in self.support():
            yield idx, self[idx]

    def to_dict(self) -> dict:
        return dict(self.items())

    def component(self, k: int) -> "DirichletSeries":
        """Idempotent (bicomplex) or slice (quaternion) component ``k`` as a complex series."""
        if not self.algebra.split:
            raise TypeError(f"{self.algebra} has no split components")
        return DirichletSeries(
            self.index_set, self.algebra.component_algebra(), np.ascontiguousarray(self.coeffs[:, k]), _trusted=True
        )

    def entry(self, r: int, c: int) -> "DirichletSeries":
        """Entry ``(r, c)`` of a matrix series as a scalar series."""
        if not self.algebra.is_matrix:
            raise TypeError("entry() needs a matrix series")
        return DirichletSeries(
            self.index_set,
            Algebra(self.algebra.scalar),
            np.ascontiguousarray(self.coeffs[..., r, c]),
            _trusted=True,
        )

    # -- arithmetic ------------------------------------------------------------

    def _check(self, other: "DirichletSeries"):
        if not isinstance(other, DirichletSeries):
            raise TypeError(f"expected a DirichletSeries, got {type(other).__name__}")
        if other.algebra != self.algebra:
            raise DescriptorMismatch(f"algebras differ: {self.algebra} vs {other.algebra}")
        if other.index_set != self.index_set:
            raise DescriptorMismatch("index sets differ")

    def _new(self, arr) -> "DirichletSeries":
        return DirichletSeries(self.index_set, self.algebra, arr, _trusted=True)

    def __add__(self, other):
        self._check(other)
        return self._new(self.coeffs + other.coeffs)

    def __sub__(self, other):
        self._check(other)
        return self._new(self.coeffs - other.coeffs)

    def __neg__(self):
        return self._new(-self.coeffs)

    def convolve(self, other: "DirichletSeries") -> "DirichletSeries":
        """``(f*g)(x) = sum over decompositions a.b = x of f(a) g(b)`` on the window.

        Pairs are summed per output index in decomposition-list order, so the
        result is bit-reproducible.
        """
        self._check(other)
        out, left, right = self.index_set.pair_table
        prod = self.algebra.mul(self.coeffs[left], other.coeffs[right])
        return self._new(np.add.reduceat(prod, self.index_set.pair_starts[:-1], axis=0))

    def __mul__(self, other):
        if isinstance(other, DirichletSeries):
            return self.convolve(other)
        if isinstance(other, Number):
            return self.scale(other, side="right")
        if isinstance(other, Coefficient):
            return self.rmul(other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, Number):
            return self.scale(other)
        if isinstance(other, Coefficient):
            return self.lmul(other)
        return NotImplemented

    def scale(self, z, side: str = "left") -> "DirichletSeries":
        """Multiply every coefficient by the complex number ``z``."""
        c = self.algebra.embed_scalar(z)
        if side == "left":
            return self._new(self.algebra.mul(c, self.coeffs))
        return self._new(self.algebra.mul(self.coeffs, c))

    def lmul(self, c: Coefficient) -> "DirichletSeries":
        """``c * f_x`` for every coefficient (i.e. ``(c delta) * f``)."""
        if c.algebra != self.algebra:
            raise DescriptorMismatch("constant lives in a different algebra")
        return self._new(self.algebra.mul(c.data, self.coeffs))

    def rmul(self, c: Coefficient) -> "DirichletSeries":
        if c.algebra != self.algebra:
            raise DescriptorMismatch("constant lives in a different algebra")
        return self._new(self.algebra.mul(self.coeffs, c.data))

    def conjugate(self) -> "DirichletSeries":
        """Apply the coefficient involution to every coefficient."""
        return self._new(self.algebra.involution(self.coeffs))

    # -- analysis --------------------------------------------------------------

    def evaluate(self, s) -> Coefficient:
        """``f(s) = sum f_x e^{-lambda s}`` (``n^{-s}`` in the ordinary case).

        The complex scalar acts on the right of each coefficient, which only
        matters for quaternions.
        """
        if isinstance(s, HalfPlanePoint):
            s = s.s
        s = complex(s)
        if s.real < 0:
            raise ValueError("evaluation needs Re(s) >= 0")
        return Coefficient(self.algebra, self.evaluate_many(np.array([s]))[0])

    def evaluate_many(self, points: np.ndarray) -> np.ndarray:
        """Batched evaluation at an array of complex ``s``; returns ``(S, *shape)``."""
        points = np.asarray(points, dtype=complex).reshape(-1)
        support = np.flatnonzero(np.any(self.coeffs.reshape(len(self), -1) != 0, axis=1))
        if support.size == 0:
            return self.algebra.zeros((points.size,))
        lam = self.index_set.exponents[support]
        weights = np.exp(-np.outer(points, lam))
        return self.algebra.combine_right(weights, self.coeffs[support])

    def coefficient_norms(self, kind: str = "default") -> np.ndarray:
        return self.algebra.norm(self.coeffs, kind)

    def weighted_norm(self, weight: Weight | None = None) -> float:
        """``sum ||f_x|| w(x)`` with the default coefficient norm (entrywise for matrices)."""
        norms = self.coefficient_norms()
        if weight is None:
            return float(np.sum(norms))
        return float(np.sum(norms * _weight_values(weight, self.index_set)))

    def max_difference(self, other: "DirichletSeries") -> float:
        """Largest coefficient-norm of ``self - other``."""
        self._check(other)
        return float(np.max(self.algebra.norm(self.coeffs - other.coeffs), initial=0.0))

    def restrict(self, index_set: IndexSet) -> "DirichletSeries":
        """Re-window onto another index set of the same semigroup (truncate or zero-pad)."""
        if type(index_set) is not type(self.index_set):
            raise DescriptorMismatch("cannot move a series between index-set kinds")
        if isinstance(index_set, GeneratedSemigroup) and index_set.generators != self.index_set.generators:
            raise DescriptorMismatch("generators differ")
        arr = self.algebra.zeros((len(index_set),))
        for k, e in enumerate(self.index_set.elements):
            if e in index_set:
                arr[index_set.position(e)] = self.coeffs[k]
        return DirichletSeries(index_set, self.algebra, arr, _trusted=True)

    def with_window(self, N: int) -> "DirichletSeries":
        if not isinstance(self.index_set, OrdinaryIndexSet):
            raise TypeError("with_window applies to ordinary series; use with_horizon")
        return self.restrict(OrdinaryIndexSet(N))

    def with_horizon(self, horizon) -> "DirichletSeries":
        if not isinstance(self.index_set, GeneratedSemigroup):
            raise TypeError("with_horizon applies to generated series; use with_window")
        return self.restrict(self.index_set.with_horizon(horizon))

    def __eq__(self, other):
        if not isinstance(other, DirichletSeries):
            return NotImplemented
        return (
            self.algebra == other.algebra
            and self.index_set == other.index_set
            and np.array_equal(self.coeffs, other.coeffs)
        )

    __hash__ = None

    def __repr__(self):
        terms = ", ".join(f"{idx}: {c!r}" for idx, c in list(self.items())[:6])
        more = ", ..." if len(self.support()) > 6 else ""
        return f"DirichletSeries<{self.algebra}, {self.index_set!r}>({{{terms}{more}}})"


# -- functional aliases --------------------------------------------------------


def delta(index_set: IndexSet, algebra: Algebra) -> DirichletSeries:
    return DirichletSeries.delta(index_set, algebra)


def convolve(f: DirichletSeries, g: DirichletSeries) -> DirichletSeries:
    return f.convolve(g)


def evaluate(f: DirichletSeries, s) -> Coefficient:
    return f.evaluate(s)


def weighted_norm(f: DirichletSeries, weight: Weight | None = None) -> float:
    return f.weighted_norm(weight)


def coefficient_conjugate(f: DirichletSeries) -> DirichletSeries:
    return f.conjugate()


def add(f: DirichletSeries, g: DirichletSeries) -> DirichletSeries:
    return f + g


def scale(f: DirichletSeries, z) -> DirichletSeries:
    return f.scale(z)

