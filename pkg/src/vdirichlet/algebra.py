"""Coefficient algebras: C, bicomplex numbers, quaternions, and d x d matrices over each.

Every value is stored as a complex ``numpy`` array whose trailing axes form the
*element shape* of its :class:`Algebra`:

=============  ===========  =====================================================
scalar kind    scalar       d x d matrix
=============  ===========  =====================================================
complex        ``()``       ``(d, d)``
bicomplex      ``(2,)``     ``(2, d, d)``  idempotent components ``(l1, l2)``
quaternion     ``(2,)``     ``(2, d, d)``  slice components ``(A, B)``, ``A + B*l``
=============  ===========  =====================================================

Bicomplex values live in idempotent coordinates ``Z = l1*e1 + l2*e2`` so that
multiplication is componentwise.  Quaternions use the distinguished pair
``i := e1`` and ``l := e2``; a quaternion ``x0 + x1 e1 + x2 e2 + x3 e3`` is
stored as ``A = x0 + x1 i`` and ``B = x2 + x3 i`` with ``p = A + B l``.  The
rule ``l c = conj(c) l`` for complex ``c`` gives the slice product

    (A + B l)(C + D l) = (A C - B conj(D)) + (A D + B conj(C)) l

which holds verbatim for matrices ``Z + W l``.

All :class:`Algebra` methods are vectorised: leading axes of an input array
are batch axes.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from numbers import Number

import numpy as np

from .errors import DescriptorMismatch, NotInvertible, StructureViolation

INVERTIBILITY_TOL = 1e-12
OPNORM_TOL = 1e-10
OPNORM_MAX_ITER = 10_000


class ScalarKind(str, enum.Enum):
    COMPLEX = "complex"
    BICOMPLEX = "bicomplex"
    QUATERNION = "quaternion"


@dataclass(frozen=True)
class Algebra:
    """Descriptor of a coefficient algebra: scalar kind plus optional matrix size.

    ``dim=None`` is the scalar algebra itself; ``dim=d`` (d >= 1) is ``M_d``.
    """

    scalar: ScalarKind
    dim: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "scalar", ScalarKind(self.scalar))
        if self.dim is not None:
            if int(self.dim) != self.dim or self.dim < 1:
                raise ValueError(f"matrix dimension must be a positive integer, got {self.dim!r}")
            object.__setattr__(self, "dim", int(self.dim))

    def __str__(self):
        name = {"complex": "C", "bicomplex": "BC", "quaternion": "H"}[self.scalar.value]
        return name if self.dim is None else f"M_{self.dim}({name})"

    @property
    def is_matrix(self) -> bool:
        return self.dim is not None

    @property
    def split(self) -> bool:
        """True when the first element axis holds two complex components."""
        return self.scalar is not ScalarKind.COMPLEX

    @property
    def shape(self) -> tuple[int, ...]:
        head = (2,) if self.split else ()
        tail = (self.dim, self.dim) if self.is_matrix else ()
        return head + tail

    @property
    def is_commutative(self) -> bool:
        return self.scalar is not ScalarKind.QUATERNION and (self.dim is None or self.dim == 1)

    def component_algebra(self) -> "Algebra":
        """The complex algebra holding each split component (C or M_d(C))."""
        return Algebra(ScalarKind.COMPLEX, self.dim)

    # -- constants ---------------------------------------------------------

    def zeros(self, batch: tuple[int, ...] = ()) -> np.ndarray:
        return np.zeros(tuple(batch) + self.shape, dtype=complex)

    def identity(self) -> np.ndarray:
        return self.embed_scalar(1.0)

    def embed_scalar(self, z) -> np.ndarray:
        """Complex scalar(s) ``z`` times the unit, batched over ``z``'s shape."""
        z = np.asarray(z, dtype=complex)
        if self.is_matrix:
            base = z[..., None, None] * np.eye(self.dim)
        else:
            base = z
        if self.scalar is ScalarKind.BICOMPLEX:
            return np.stack([base, base], axis=z.ndim)
        if self.scalar is ScalarKind.QUATERNION:
            return np.stack([base, np.zeros_like(base)], axis=z.ndim)
        return base

    # -- ring operations ---------------------------------------------------

    def mul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        if self.scalar is ScalarKind.QUATERNION:
            prod = np.matmul if self.is_matrix else np.multiply
            if self.is_matrix:
                A, B = a[..., 0, :, :], a[..., 1, :, :]
                C, D = b[..., 0, :, :], b[..., 1, :, :]
            else:
                A, B = a[..., 0], a[..., 1]
                C, D = b[..., 0], b[..., 1]
            first = prod(A, C) - prod(B, np.conj(D))
            second = prod(A, D) + prod(B, np.conj(C))
            return np.stack([first, second], axis=-3 if self.is_matrix else -1)
        if self.is_matrix:
            return np.matmul(a, b)
        return a * b

    def combine_right(self, weights: np.ndarray, coeffs: np.ndarray) -> np.ndarray:
        """``out[s] = sum_k coeffs[k] * weights[s, k]`` with complex scalars acting on the right.

        ``weights`` has shape ``(S, n)``, ``coeffs`` shape ``(n, *shape)``.  For
        quaternions ``(A + B l) z = A z + B conj(z) l``; for every other kind the
        scalar is central.
        """
        weights = np.asarray(weights, dtype=complex)
        flat = coeffs.reshape(coeffs.shape[0], -1)
        if self.scalar is ScalarKind.QUATERNION:
            half = flat.shape[1] // 2
            out = np.empty((weights.shape[0], flat.shape[1]), dtype=complex)
            out[:, :half] = weights @ flat[:, :half]
            out[:, half:] = np.conj(weights) @ flat[:, half:]
        else:
            out = weights @ flat
        return out.reshape((weights.shape[0],) + self.shape)

    def involution(self, a: np.ndarray) -> np.ndarray:
        """Complex conjugation; entrywise for matrices (no transpose).

        Bicomplex: conjugate each idempotent component.  Quaternion: the usual
        conjugate ``x0 - x1 e1 - x2 e2 - x3 e3``, i.e. ``(conj A, -B)``.
        """
        if self.scalar is ScalarKind.QUATERNION:
            out = np.conj(a)
            if self.is_matrix:
                out[..., 1, :, :] = -a[..., 1, :, :]
            else:
                out[..., 1] = -a[..., 1]
            return out
        return np.conj(a)

    # -- norms and the invertibility indicator -----------------------------

    def norm(self, a: np.ndarray, kind: str = "default") -> np.ndarray:
        """Batched norm.

        ``"default"``/``"one"``: modulus, dual Lie norm ``|l1| + |l2|``,
        Euclidean quaternion norm; for matrices the entrywise sum of those.
        ``"op"``: operator norm (matrices) -- complex by power iteration,
        bicomplex ``op(M1) + op(M2)``, quaternion via the adjoint embedding.
        """
        a = np.asarray(a)
        if kind not in ("default", "one", "op"):
            raise ValueError(f"unknown norm kind {kind!r}")
        if kind == "op" and self.is_matrix:
            return self._op_norm(a)
        if self.scalar is ScalarKind.QUATERNION:
            axis = -3 if self.is_matrix else -1
            mod = np.sqrt(np.sum(np.abs(a) ** 2, axis=axis))
        elif self.scalar is ScalarKind.BICOMPLEX:
            axis = -3 if self.is_matrix else -1
            mod = np.sum(np.abs(a), axis=axis)
        else:
            mod = np.abs(a)
        if self.is_matrix:
            return np.sum(mod, axis=(-2, -1))
        return mod

    def _op_norm(self, a: np.ndarray) -> np.ndarray:
        batch = a.shape[: a.ndim - len(self.shape)]
        flat = a.reshape((-1,) + self.shape)
        out = np.empty(flat.shape[0])
        for k, m in enumerate(flat):
            if self.scalar is ScalarKind.COMPLEX:
                out[k] = operator_norm(m)
            elif self.scalar is ScalarKind.BICOMPLEX:
                out[k] = operator_norm(m[0]) + operator_norm(m[1])
            else:
                out[k] = operator_norm(_embed(m))
        return out.reshape(batch)

    def indicator(self, a: np.ndarray) -> np.ndarray:
        """Smallest-singular-value style invertibility indicator (batched).

        C: ``|v|``; BC: ``min(|l1|, |l2|)``; H: ``|v|``; M_d(C): sigma_min;
        M_d(BC): min of the two components' sigma_min; M_d(H): sigma_min of the
        complex adjoint embedding.
        """
        a = np.asarray(a)
        if not self.is_matrix:
            if self.scalar is ScalarKind.COMPLEX:
                return np.abs(a)
            if self.scalar is ScalarKind.BICOMPLEX:
                return np.minimum(np.abs(a[..., 0]), np.abs(a[..., 1]))
            return np.sqrt(np.abs(a[..., 0]) ** 2 + np.abs(a[..., 1]) ** 2)
        if self.scalar is ScalarKind.COMPLEX:
            return np.linalg.svd(a, compute_uv=False)[..., -1]
        if self.scalar is ScalarKind.BICOMPLEX:
            sv = np.linalg.svd(a, compute_uv=False)[..., -1]
            return np.min(sv, axis=-1)
        return np.linalg.svd(_embed(a), compute_uv=False)[..., -1]

    def is_invertible(self, a: np.ndarray) -> bool:
        scale = float(self.norm(a))
        if scale == 0.0:
            return False
        return float(self.indicator(a)) >= INVERTIBILITY_TOL * scale

    def inverse(self, a: np.ndarray) -> np.ndarray:
        """Inverse of a single element; raises :class:`NotInvertible`."""
        a = np.asarray(a, dtype=complex)
        if not self.is_invertible(a):
            raise NotInvertible(f"value is not invertible in {self}")
        if self.scalar is ScalarKind.QUATERNION:
            if self.is_matrix:
                return _quaternion_matrix_inverse(a)
            n2 = abs(a[0]) ** 2 + abs(a[1]) ** 2
            return np.array([np.conj(a[0]) / n2, -a[1] / n2])
        if self.is_matrix:
            # LAPACK getrf/getri: LU with row pivoting
            return np.linalg.inv(a)
        return 1.0 / a


def operator_norm(m: np.ndarray, tol: float = OPNORM_TOL, max_iter: int = OPNORM_MAX_ITER) -> float:
    """Largest singular value by power iteration on the Gram matrix ``m^H m``."""
    m = np.asarray(m, dtype=complex)
    gram = m.conj().T @ m
    if not np.any(gram):
        return 0.0
    v = np.random.default_rng(0).standard_normal(gram.shape[0]) + 0j
    v /= np.linalg.norm(v)
    est = 0.0
    for _ in range(max_iter):
        w = gram @ v
        new = np.linalg.norm(w)
        if new == 0.0:
            # start vector hit the kernel; restart along a coordinate axis
            v = np.zeros_like(v)
            v[np.argmax(np.abs(np.diag(gram)))] = 1.0
            continue
        v = w / new
        if abs(new - est) <= tol * new:
            est = new
            break
        est = new
    return float(np.sqrt(est))


# -- quaternion helpers ----------------------------------------------------


def _embed(a: np.ndarray) -> np.ndarray:
    """Batched adjoint embedding of quaternion matrices stored as ``(..., 2, d, d)``."""
    Z, W = a[..., 0, :, :], a[..., 1, :, :]
    top = np.concatenate([Z, W], axis=-1)
    bottom = np.concatenate([-np.conj(W), np.conj(Z)], axis=-1)
    return np.concatenate([top, bottom], axis=-2)


def _unembed(m: np.ndarray, tol: float | None = None) -> np.ndarray:
    d = m.shape[-1] // 2
    Z, W = m[..., :d, :d], m[..., :d, d:]
    if tol is not None:
        err = max(
            np.max(np.abs(m[..., d:, d:] - np.conj(Z)), initial=0.0),
            np.max(np.abs(m[..., d:, :d] + np.conj(W)), initial=0.0),
        )
        if err > tol:
            raise StructureViolation(
                f"matrix is not in the adjoint-embedding image (block defect {err:.3g})"
            )
    return np.stack([Z, W], axis=-3)


def _qmul(p, q):
    return (p[0] * q[0] - p[1] * np.conj(q[1]), p[0] * q[1] + p[1] * np.conj(q[0]))


def _qinv(p):
    n2 = abs(p[0]) ** 2 + abs(p[1]) ** 2
    return (np.conj(p[0]) / n2, -p[1] / n2)


def _quaternion_matrix_inverse(a: np.ndarray) -> np.ndarray:
    """Gauss-Jordan over H, pivoting on the largest quaternion modulus.

    Row operations multiply on the left, so the accumulated transform applied
    to the identity is the (left = right) inverse.
    """
    d = a.shape[-1]
    zero, one = (0j, 0j), (1 + 0j, 0j)
    rows = [
        [(a[0, r, c], a[1, r, c]) for c in range(d)] + [one if r == c else zero for c in range(d)]
        for r in range(d)
    ]
    for col in range(d):
        mods = [abs(rows[r][col][0]) ** 2 + abs(rows[r][col][1]) ** 2 for r in range(col, d)]
        piv = col + int(np.argmax(mods))
        if mods[piv - col] == 0.0:
            raise NotInvertible("singular quaternion matrix")
        rows[col], rows[piv] = rows[piv], rows[col]
        pinv = _qinv(rows[col][col])
        rows[col] = [_qmul(pinv, x) for x in rows[col]]
        for r in range(d):
            if r == col:
                continue
            factor = rows[r][col]
            if factor[0] == 0 and factor[1] == 0:
                continue
            rows[r] = [
                (x[0] - fy[0], x[1] - fy[1])
                for x, fy in zip(rows[r], (_qmul(factor, y) for y in rows[col]))
            ]
    out = np.empty((2, d, d), dtype=complex)
    for r in range(d):
        for c in range(d):
            out[0, r, c], out[1, r, c] = rows[r][d + c]
    return out


# -- user-facing values ------------------------------------------------------


class Coefficient:
    """An immutable value in one coefficient algebra.

    Build values with the classmethods (:meth:`complex`, :meth:`bicomplex`,
    :meth:`quaternion`, :meth:`matrix`, ...).  ``*`` is the ring product; a
    plain number on either side acts as a complex scalar on that side.
    """

    __slots__ = ("algebra", "data")

    def __init__(self, algebra: Algebra, data):
        arr = np.array(data, dtype=complex)
        if arr.shape != algebra.shape:
            raise ValueError(f"shape {arr.shape} does not match {algebra} (expected {algebra.shape})")
        if not np.all(np.isfinite(arr)):
            raise ValueError("coefficient values must be finite")
        arr.setflags(write=False)
        object.__setattr__(self, "algebra", algebra)
        object.__setattr__(self, "data", arr)

    def __setattr__(self, name, value):
        raise AttributeError("Coefficient is immutable")

    # -- constructors ------------------------------------------------------

    @classmethod
    def complex(cls, z) -> "Coefficient":
        return cls(Algebra(ScalarKind.COMPLEX), complex(z))

    @classmethod
    def bicomplex(cls, l1, l2) -> "Coefficient":
        """From idempotent components: ``l1*e1 + l2*e2``."""
        return cls(Algebra(ScalarKind.BICOMPLEX), [complex(l1), complex(l2)])

    @classmethod
    def bicomplex_cartesian(cls, z1, z2) -> "Coefficient":
        """From ``z1 + j z2``: ``l1 = z1 - i z2``, ``l2 = z1 + i z2``."""
        z1, z2 = complex(z1), complex(z2)
        return cls.bicomplex(z1 - 1j * z2, z1 + 1j * z2)

    @classmethod
    def quaternion(cls, x0, x1=0.0, x2=0.0, x3=0.0) -> "Coefficient":
        return cls(Algebra(ScalarKind.QUATERNION), [complex(x0, x1), complex(x2, x3)])

    @classmethod
    def one(cls, algebra: Algebra) -> "Coefficient":
        return cls(algebra, algebra.identity())

    @classmethod
    def zero(cls, algebra: Algebra) -> "Coefficient":
        return cls(algebra, algebra.zeros())

    @classmethod
    def matrix(cls, rows) -> "Coefficient":
        """Square matrix from rows of scalar :class:`Coefficient` values or plain numbers."""
        rows = [list(r) for r in rows]
        d = len(rows)
        if d == 0 or any(len(r) != d for r in rows):
            raise ValueError("matrix must be square and non-empty")
        entries = [
            [e if isinstance(e, Coefficient) else Coefficient.complex(e) for e in r] for r in rows
        ]
        kinds = {e.algebra for r in entries for e in r}
        if len(kinds) != 1:
            raise DescriptorMismatch("matrix entries must share one scalar kind")
        (scalar_alg,) = kinds
        if scalar_alg.is_matrix:
            raise ValueError("matrix entries must be scalars")
        alg = Algebra(scalar_alg.scalar, d)
        grid = np.array([[e.data for e in r] for r in entries])  # (d, d, *scalar_shape)
        if alg.split:
            grid = np.moveaxis(grid, -1, 0)
        return cls(alg, grid)

    # -- views -------------------------------------------------------------

    @property
    def l1(self) -> complex:
        self._require(ScalarKind.BICOMPLEX, matrix=False)
        return complex(self.data[0])

    @property
    def l2(self) -> complex:
        self._require(ScalarKind.BICOMPLEX, matrix=False)
        return complex(self.data[1])

    @property
    def cartesian(self) -> tuple[complex, complex]:
        """Bicomplex ``(z1, z2)`` with ``Z = z1 + j z2``."""
        self._require(ScalarKind.BICOMPLEX, matrix=False)
        l1, l2 = self.data
        return complex((l1 + l2) / 2), complex(1j * (l1 - l2) / 2)

    @property
    def components(self) -> tuple[float, float, float, float]:
        """Quaternion ``(x0, x1, x2, x3)``."""
        self._require(ScalarKind.QUATERNION, matrix=False)
        A, B = self.data
        return (float(A.real), float(A.imag), float(B.real), float(B.imag))

    def entry(self, r: int, c: int) -> "Coefficient":
        if not self.algebra.is_matrix:
            raise TypeError("entry() needs a matrix value")
        scalar = Algebra(self.algebra.scalar)
        if self.algebra.split:
            return Coefficient(scalar, self.data[:, r, c])
        return Coefficient(scalar, self.data[r, c])

    def _require(self, kind, matrix):
        if self.algebra.scalar is not kind or self.algebra.is_matrix != matrix:
            raise TypeError(f"not available for {self.algebra}")

    # -- arithmetic ----------------------------------------------------------

    def _check(self, other: "Coefficient"):
        if not isinstance(other, Coefficient):
            return NotImplemented
        if other.algebra != self.algebra:
            raise DescriptorMismatch(f"{self.algebra} vs {other.algebra}")
        return None

    def __add__(self, other):
        if self._check(other) is NotImplemented:
            return NotImplemented
        return Coefficient(self.algebra, self.data + other.data)

    def __sub__(self, other):
        if self._check(other) is NotImplemented:
            return NotImplemented
        return Coefficient(self.algebra, self.data - other.data)

    def __neg__(self):
        return Coefficient(self.algebra, -self.data)

    def __mul__(self, other):
        if isinstance(other, Number):
            return Coefficient(self.algebra, self.algebra.mul(self.data, self.algebra.embed_scalar(other)))
        if self._check(other) is NotImplemented:
            return NotImplemented
        return Coefficient(self.algebra, self.algebra.mul(self.data, other.data))

    def __rmul__(self, other):
        if isinstance(other, Number):
            return Coefficient(self.algebra, self.algebra.mul(self.algebra.embed_scalar(other), self.data))
        return NotImplemented

    def __eq__(self, other):
        if not isinstance(other, Coefficient):
            return NotImplemented
        return self.algebra == other.algebra and np.array_equal(self.data, other.data)

    def __hash__(self):
        return hash((self.algebra, self.data.tobytes()))

    def __repr__(self):
        alg = self.algebra
        if not alg.is_matrix:
            if alg.scalar is ScalarKind.COMPLEX:
                return f"Coefficient.complex({complex(self.data)!r})"
            if alg.scalar is ScalarKind.BICOMPLEX:
                return f"Coefficient.bicomplex({self.l1!r}, {self.l2!r})"
            return "Coefficient.quaternion(%r, %r, %r, %r)" % self.components
        return f"Coefficient<{alg}>({self.data.tolist()!r})"

    def inverse(self) -> "Coefficient":
        return Coefficient(self.algebra, self.algebra.inverse(self.data))

    def norm(self, kind: str = "default") -> float:
        return float(self.algebra.norm(self.data, kind))

    def indicator(self) -> float:
        return float(self.algebra.indicator(self.data))

    def conjugate(self) -> "Coefficient":
        return Coefficient(self.algebra, self.algebra.involution(self.data))

    def is_zero(self) -> bool:
        return not np.any(self.data)


# -- module-level operations -------------------------------------------------


def mul(a: Coefficient, b: Coefficient) -> Coefficient:
    return a * b


def try_inverse(a: Coefficient) -> Coefficient:
    """Inverse of ``a``; raises :class:`NotInvertible` when the indicator is below tolerance."""
    return a.inverse()


def norm(a: Coefficient, kind: str = "default") -> float:
    return a.norm(kind)


def involution(a: Coefficient) -> Coefficient:
    return a.conjugate()


def indicator(a: Coefficient) -> float:
    return a.indicator()


def slice_split(a: Coefficient) -> tuple[Coefficient, Coefficient]:
    """``a = A + B l`` over H (or M_d(H)) -> the complex pair ``(A, B)``."""
    if a.algebra.scalar is not ScalarKind.QUATERNION:
        raise TypeError("slice_split needs a quaternion value")
    comp = a.algebra.component_algebra()
    return Coefficient(comp, a.data[0]), Coefficient(comp, a.data[1])


def slice_join(A: Coefficient, B: Coefficient) -> Coefficient:
    if A.algebra != B.algebra or A.algebra.scalar is not ScalarKind.COMPLEX:
        raise DescriptorMismatch("slice_join needs two values of the same complex algebra")
    return Coefficient(Algebra(ScalarKind.QUATERNION, A.algebra.dim), np.stack([A.data, B.data]))


def adjoint_embed(a: Coefficient) -> Coefficient:
    """``Z + W l`` -> the 2d x 2d complex matrix ``[[Z, W], [-conj W, conj Z]]``.

    Accepts a quaternion scalar too (treated as d = 1).
    """
    if a.algebra.scalar is not ScalarKind.QUATERNION:
        raise TypeError("adjoint_embed needs a quaternion value")
    data = a.data if a.algebra.is_matrix else a.data[:, None, None]
    m = _embed(data)
    return Coefficient(Algebra(ScalarKind.COMPLEX, m.shape[-1]), m)


def adjoint_unembed(m: Coefficient, tol: float = 1e-9) -> Coefficient:
    """Inverse of :func:`adjoint_embed`; raises StructureViolation off the image."""
    if m.algebra.scalar is not ScalarKind.COMPLEX or not m.algebra.is_matrix or m.algebra.dim % 2:
        raise TypeError("adjoint_unembed needs an even-sized complex matrix")
    data = _unembed(m.data, tol)
    return Coefficient(Algebra(ScalarKind.QUATERNION, m.algebra.dim // 2), data)


# handy algebra constants
C = Algebra(ScalarKind.COMPLEX)
BC = Algebra(ScalarKind.BICOMPLEX)
H = Algebra(ScalarKind.QUATERNION)


def matrices(scalar, d: int) -> Algebra:
    return Algebra(ScalarKind(scalar), d)
