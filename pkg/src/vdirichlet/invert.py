"""Inversion strategies for truncated series and the inverse verifier.

Every strategy returns the exact inverse in the truncated quotient (up to
floating point).  Because ``delta - f(unit)^{-1} f`` has no unit-index
coefficient it is nilpotent in the quotient, so a one-sided inverse is
automatically two-sided; :func:`verify_inverse` still checks both sides.

Strategies
----------
recursion   coefficientwise solve of ``f * g = delta`` in index order
neumann     ``g = sum_k h^k * f(unit)^{-1}`` with a certified weighted bound
adjugate    ``adj(f) * det(f)^{-1}`` over the commutative ring of C-series
split       bicomplex: invert the two idempotent components separately
slice       quaternion: ``g = conj(A)/D - B/D l`` with ``D = A conj(A) + B conj(B)``
embed       quaternion matrices through the complex adjoint embedding
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .algebra import Algebra, Coefficient, ScalarKind, _embed, _unembed
from .errors import (
    DimensionTooLarge,
    NeumannNotContractive,
    NotInvertible,
    NotInvertibleConstantTerm,
)
from .semigroup import GeneratedSemigroup, OrdinaryIndexSet
from .series import DirichletSeries
from .weights import Weight

VERIFY_TOL = 1e-9
STRUCTURE_TOL = 1e-9
NEUMANN_TERM_TOL = 1e-14
MAX_ADJUGATE_DIM = 5

METHODS = ("auto", "recursion", "recursion-right", "neumann", "adjugate", "split", "slice", "embed")


@dataclass
class InversionCertificate:
    """What a strategy (or the verifier) can say about a computed inverse."""

    method: str
    residual_left: float
    residual_right: float
    tol: float = VERIFY_TOL
    ratio: float | None = None
    norm_bound: float | None = None

    @property
    def passed(self) -> bool:
        return self.residual_left <= self.tol and self.residual_right <= self.tol

    def to_json(self) -> dict:
        doc = {
            "method": self.method,
            "residualLeft": self.residual_left,
            "residualRight": self.residual_right,
            "tol": self.tol,
            "passed": self.passed,
        }
        if self.ratio is not None:
            doc["ratio"] = self.ratio
            doc["normBound"] = self.norm_bound
        return doc


def _constant_inverse(f: DirichletSeries, component=None) -> np.ndarray:
    try:
        return f.algebra.inverse(f.coeffs[f.index_set.unit_position])
    except NotInvertible:
        where = f" (idempotent component {component})" if component else ""
        raise NotInvertibleConstantTerm(
            f"constant term of the series is not invertible in {f.algebra}{where}", component
        ) from None


# -- direct recursion -----------------------------------------------------------


def invert_recursive(f: DirichletSeries, side: str = "left") -> DirichletSeries:
    """Solve ``f * g = delta`` (``side="left"``) or ``g * f = delta`` index by index.

    Left-anchored: ``g(x) = -f(1)^{-1} sum_{a.b = x, a != 1} f(a) g(b)``.
    Right-anchored: ``g(x) = -(sum_{a.b = x, b != 1} g(a) f(b)) f(1)^{-1}``.
    """
    if side not in ("left", "right"):
        raise ValueError("side must be 'left' or 'right'")
    alg, iset = f.algebra, f.index_set
    a0inv = _constant_inverse(f)
    unit = iset.unit_position
    g = alg.zeros((len(iset),))
    g[unit] = a0inv
    fc = f.coeffs
    for pos in range(len(iset)):
        if pos == unit:
            continue
        left, right = iset.pairs_at(pos)
        if side == "left":
            keep = left != unit
            acc = alg.mul(fc[left[keep]], g[right[keep]]).sum(axis=0)
            g[pos] = -alg.mul(a0inv, acc)
        else:
            keep = right != unit
            acc = alg.mul(g[left[keep]], fc[right[keep]]).sum(axis=0)
            g[pos] = -alg.mul(acc, a0inv)
    return DirichletSeries(iset, alg, g, _trusted=True)


def invert_ordinary(f: DirichletSeries, N: int | None = None, side: str = "left") -> DirichletSeries:
    """Inverse of an ordinary series on the window ``1..N`` (default: its own)."""
    if not isinstance(f.index_set, OrdinaryIndexSet):
        raise TypeError("invert_ordinary needs an ordinary series")
    if N is not None and N != f.index_set.N:
        f = f.with_window(N)
    return invert_recursive(f, side)


def invert_generated(f: DirichletSeries, horizon=None, side: str = "left") -> DirichletSeries:
    """Inverse of a series over a generated semigroup, up to ``horizon`` (default: its own)."""
    if not isinstance(f.index_set, GeneratedSemigroup):
        raise TypeError("invert_generated needs a generated-semigroup series")
    if horizon is not None:
        f = f.with_horizon(horizon)
    return invert_recursive(f, side)


# -- Neumann series ---------------------------------------------------------------


def invert_neumann(
    f: DirichletSeries, weight: Weight | None = None, kmax: int = 1000
) -> tuple[DirichletSeries, InversionCertificate]:
    """Neumann series around the constant term with an a-priori weighted bound.

    ``h = delta - f(1)^{-1} f`` and ``r = ||h||_w``.  For ``r < 1`` the result
    satisfies ``||g||_w <= ||f(1)^{-1}|| / (1 - r)``.  ``r >= 1`` raises
    :class:`NeumannNotContractive`, which says nothing about invertibility.
    """
    alg, iset = f.algebra, f.index_set
    c_inv = Coefficient(alg, _constant_inverse(f))
    one = DirichletSeries.delta(iset, alg)
    h = one - f.lmul(c_inv)
    r = h.weighted_norm(weight)
    if r >= 1:
        raise NeumannNotContractive(r)
    total, term = one, one
    for _ in range(kmax):
        term = term.convolve(h)
        if term.weighted_norm(weight) < NEUMANN_TERM_TOL:
            break
        total = total + term
    g = total.rmul(c_inv)
    cert = verify_inverse(f, g)
    cert.method = "neumann"
    cert.ratio = r
    cert.norm_bound = c_inv.norm() / (1 - r)
    return g, cert


# -- adjugate / determinant ----------------------------------------------------------


def _permutation_sign(perm) -> int:
    sign = 1
    seen = list(perm)
    for i in range(len(seen)):
        while seen[i] != i:
            j = seen[i]
            seen[i], seen[j] = seen[j], seen[i]
            sign = -sign
    return sign


def series_determinant(entries, one: DirichletSeries) -> DirichletSeries:
    """Leibniz determinant of a square grid of commuting scalar series."""
    d = len(entries)
    if d == 0:
        return one
    total = None
    for perm in itertools.permutations(range(d)):
        term = entries[0][perm[0]]
        for r in range(1, d):
            term = term.convolve(entries[r][perm[r]])
        if _permutation_sign(perm) < 0:
            term = -term
        total = term if total is None else total + term
    return total


def invert_matrix_adjugate(f: DirichletSeries) -> DirichletSeries:
    """``g = adj(f) * det(f)^{-1}`` with determinant and cofactors as C-series."""
    alg = f.algebra
    if alg.scalar is not ScalarKind.COMPLEX or not alg.is_matrix:
        raise TypeError("adjugate inversion needs a series over M_d(C)")
    d = alg.dim
    if d > MAX_ADJUGATE_DIM:
        raise DimensionTooLarge(f"adjugate inversion is capped at d <= {MAX_ADJUGATE_DIM} (got {d})")
    entries = [[f.entry(r, c) for c in range(d)] for r in range(d)]
    one = DirichletSeries.delta(f.index_set, Algebra(ScalarKind.COMPLEX))
    det = series_determinant(entries, one)
    try:
        det_inv = invert_recursive(det)
    except NotInvertibleConstantTerm:
        raise NotInvertibleConstantTerm("determinant series has a non-invertible constant term") from None

    def minor(r, c):
        return [[entries[i][j] for j in range(d) if j != c] for i in range(d) if i != r]

    adj = [[None] * d for _ in range(d)]
    for r in range(d):
        for c in range(d):
            cof = series_determinant(minor(r, c), one)
            if (r + c) % 2:
                cof = -cof
            adj[c][r] = cof.convolve(det_inv)
    return DirichletSeries.from_entries(adj)


def _invert_complex(f: DirichletSeries) -> DirichletSeries:
    """Preferred strategy for a C or M_d(C) series."""
    if f.algebra.is_matrix and f.algebra.dim <= MAX_ADJUGATE_DIM:
        return invert_matrix_adjugate(f)
    return invert_recursive(f)


# -- bicomplex ---------------------------------------------------------------------


def invert_bicomplex_split(f: DirichletSeries) -> DirichletSeries:
    """Invert the two idempotent components as complex series and recombine."""
    if f.algebra.scalar is not ScalarKind.BICOMPLEX:
        raise TypeError("split inversion needs a bicomplex series")
    parts = []
    for k, name in enumerate(("e1", "e2")):
        comp = f.component(k)
        _constant_inverse(comp, component=name)
        parts.append(_invert_complex(comp))
    return DirichletSeries.from_components(parts[0], parts[1], ScalarKind.BICOMPLEX)


# -- quaternions ---------------------------------------------------------------------


def invert_quaternion_slice(f: DirichletSeries) -> DirichletSeries:
    """Slice inversion over H.

    With ``f = A + B l`` (A, B complex series) and the self-conjugate series
    ``D = A * conj(A) + B * conj(B)``, the inverse is
    ``g = conj(A) * D^{-1} - (B * D^{-1}) l``.
    """
    if f.algebra != Algebra(ScalarKind.QUATERNION):
        raise TypeError("slice inversion needs a quaternion-valued series")
    _constant_inverse(f)
    A, B = f.component(0), f.component(1)
    D = A.convolve(A.conjugate()) + B.convolve(B.conjugate())
    D_inv = invert_recursive(D)
    g_first = A.conjugate().convolve(D_inv)
    g_second = -B.convolve(D_inv)
    return DirichletSeries.from_components(g_first, g_second, ScalarKind.QUATERNION)


def invert_quaternion_matrix(f: DirichletSeries) -> DirichletSeries:
    """Invert over M_d(H) through the complex adjoint embedding.

    A scalar quaternion series is handled as d = 1.  The embedded inverse must
    keep the ``[[Z, W], [-conj W, conj Z]]`` block shape; a defect above
    ``STRUCTURE_TOL`` (relative to the result's size) raises StructureViolation.
    """
    alg = f.algebra
    if alg.scalar is not ScalarKind.QUATERNION:
        raise TypeError("embed inversion needs a quaternion(-matrix) series")
    _constant_inverse(f)
    data = f.coeffs if alg.is_matrix else f.coeffs[:, :, None, None]
    embedded = DirichletSeries(
        f.index_set, Algebra(ScalarKind.COMPLEX, 2 * (alg.dim or 1)), _embed(data), _trusted=True
    )
    inv = _invert_complex(embedded)
    scale = max(1.0, float(np.max(np.abs(inv.coeffs))))
    back = _unembed(inv.coeffs, STRUCTURE_TOL * scale)
    if not alg.is_matrix:
        back = back[:, :, 0, 0]
    return DirichletSeries(f.index_set, alg, np.ascontiguousarray(back), _trusted=True)


# -- verification and dispatch -------------------------------------------------------------


def verify_inverse(f: DirichletSeries, g: DirichletSeries, tol: float = VERIFY_TOL) -> InversionCertificate:
    """Max coefficient norm of ``f*g - delta`` and ``g*f - delta``."""
    one = DirichletSeries.delta(f.index_set, f.algebra)
    left = f.convolve(g).max_difference(one)
    right = g.convolve(f).max_difference(one)
    return InversionCertificate("verify", left, right, tol)


def auto_method(algebra: Algebra) -> str:
    if algebra.scalar is ScalarKind.COMPLEX:
        return "adjugate" if algebra.is_matrix and algebra.dim <= MAX_ADJUGATE_DIM else "recursion"
    if algebra.scalar is ScalarKind.BICOMPLEX:
        return "split"
    return "embed" if algebra.is_matrix else "slice"


def invert(
    f: DirichletSeries, method: str = "auto", weight: Weight | None = None, tol: float = VERIFY_TOL
) -> tuple[DirichletSeries, InversionCertificate]:
    """Invert with the named strategy and return ``(inverse, certificate)``."""
    if method not in METHODS:
        raise ValueError(f"unknown method {method!r}; choose from {', '.join(METHODS)}")
    if method == "auto":
        method = auto_method(f.algebra)
    if method == "neumann":
        g, cert = invert_neumann(f, weight)
        cert.tol = tol
        return g, cert
    strategies = {
        "recursion": invert_recursive,
        "recursion-right": lambda s: invert_recursive(s, side="right"),
        "adjugate": invert_matrix_adjugate,
        "split": invert_bicomplex_split,
        "slice": invert_quaternion_slice,
        "embed": invert_quaternion_matrix,
    }
    g = strategies[method](f)
    cert = verify_inverse(f, g, tol)
    cert.method = method
    return g, cert
