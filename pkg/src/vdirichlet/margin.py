"""Numerical invertibility margins: sampled infima of the invertibility indicator.

Two search spaces are supported:

* the closed right half-plane ``Re s >= 0`` (values ``f(s)``), plus the
  asymptotic point ``Re s -> inf`` where ``f(s) -> f(unit)``;
* for ordinary series, the polydisc of semicharacters ``chi(n) = prod_p z_p^{v_p(n)}``
  with one ``z_p`` in the closed unit disc per prime dividing the support.

Sampling followed by deterministic coordinate descent can only ever find a
value the indicator actually attains, so every reported minimum is an UPPER
bound on the true infimum.  It is evidence, not a certificate.
"""

from __future__ import annotations

import itertools
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy.ndimage import minimum_filter
from scipy.stats import qmc

from .algebra import ScalarKind
from .errors import UnsupportedIndexSet
from .semigroup import OrdinaryIndexSet
from .series import DirichletSeries, HalfPlanePoint

DEFAULT_J_MAX = 10.0
DEFAULT_T_MAX = 20.0
DEFAULT_GRID = (201, 401)
DEFAULT_REFINE_ITERS = 60
DEFAULT_CANDIDATES = 8
DEFAULT_BUDGET = 20_000
SHRINK = 0.5
# values closer than this are numerically indistinguishable from each other
TIE_TOL = 1e-12
CHUNK = 4096
MAX_SWEEPS = 50


def worker_count() -> int:
    env = os.environ.get("DIRICHLET_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return os.cpu_count() or 1


@dataclass
class MarginReport:
    """Best (smallest) indicator value found.  ``min_value`` is an upper bound on the infimum.

    ``argmin`` is a :class:`HalfPlanePoint` (``j = inf`` for the asymptotic
    point) or, in polydisc mode, a tuple of disc values aligned with ``primes``.
    """

    mode: str
    min_value: float
    argmin: object
    samples: int
    refined: bool
    primes: tuple = ()
    det_at_argmin: float | None = None
    extra: dict = field(default_factory=dict)

    upper_bound_only = True

    def to_json(self) -> dict:
        if self.mode == "halfplane":
            if math.isinf(self.argmin.j):
                arg = {"asymptotic": True}
            else:
                arg = {"j": self.argmin.j, "t": self.argmin.t}
        else:
            arg = {"primes": list(self.primes), "z": [[z.real, z.imag] for z in self.argmin]}
        doc = {
            "mode": self.mode,
            "min": self.min_value,
            "argmin": arg,
            "samples": self.samples,
            "refined": self.refined,
            "upperBoundOnly": True,
        }
        if self.det_at_argmin is not None:
            doc["absDetAtArgmin"] = self.det_at_argmin
        return doc


def indicator(value) -> float:
    """Invertibility indicator of a single Coefficient (see ``Algebra.indicator``)."""
    return value.indicator()


def _abs_det(f: DirichletSeries, values: np.ndarray) -> float | None:
    if f.algebra.scalar is ScalarKind.COMPLEX and f.algebra.is_matrix:
        return float(abs(np.linalg.det(values)))
    return None


# -- half-plane ---------------------------------------------------------------------


def halfplane_indicator(f: DirichletSeries, points) -> np.ndarray:
    """Indicator of ``f(s)`` for an array of complex ``s`` (``Re s = inf`` allowed)."""
    pts = np.asarray(points, dtype=complex).reshape(-1)
    out = np.empty(pts.shape[0])
    inf = np.isinf(pts.real)
    if inf.any():
        out[inf] = f.algebra.indicator(f.coeffs[f.index_set.unit_position])
    finite = ~inf
    if finite.any():
        out[finite] = f.algebra.indicator(f.evaluate_many(pts[finite]))
    return out


def _chunked(fn, points: np.ndarray, workers: int) -> np.ndarray:
    chunks = [points[k : k + CHUNK] for k in range(0, len(points), CHUNK)]
    if workers > 1 and len(chunks) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(fn, chunks))
    else:
        parts = [fn(c) for c in chunks]
    return np.concatenate(parts) if parts else np.empty(0)


def _descend(objective, x0: np.ndarray, steps: np.ndarray, iters: int, rng, project):
    """Coordinate descent with shrinking steps; only strict improvements are accepted.

    Each iteration sweeps the coordinates (seeded order) at the current step
    size until a sweep stops improving, then shrinks the steps.
    """
    x = project(np.array(x0, dtype=float))
    best = objective(x)
    steps = np.array(steps, dtype=float)
    for _ in range(iters):
        for _sweep in range(MAX_SWEEPS):
            improved = False
            for axis in rng.permutation(len(x)):
                for sign in (1.0, -1.0):
                    trial = x.copy()
                    trial[axis] += sign * steps[axis]
                    trial = project(trial)
                    val = objective(trial)
                    if val < best:
                        x, best, improved = trial, val, True
                        break
            if not improved:
                break
        steps *= SHRINK
    return x, best


def halfplane_margin(
    f: DirichletSeries,
    j_max: float = DEFAULT_J_MAX,
    t_max: float = DEFAULT_T_MAX,
    grid=DEFAULT_GRID,
    refine_iters: int = DEFAULT_REFINE_ITERS,
    seed: int = 0,
    candidates: int = DEFAULT_CANDIDATES,
    workers: int | None = None,
) -> MarginReport:
    """Sampled infimum of the indicator of ``f(s)`` over ``[0, j_max] x [-t_max, t_max]``.

    The best ``candidates`` grid local minima are refined by coordinate
    descent.  Among results within ``TIE_TOL`` of the best value the point
    nearest the real axis wins (smallest ``j``, then ``|t|``, then ``t >= 0``).
    """
    nj, nt = (grid, grid) if isinstance(grid, int) else grid
    if nj < 2 or nt < 2:
        raise ValueError("grid needs at least 2 steps per axis")
    workers = worker_count() if workers is None else workers
    js = np.linspace(0.0, j_max, nj)
    ts = np.linspace(-t_max, t_max, nt)
    J, T = np.meshgrid(js, ts, indexing="ij")
    pts = (J + 1j * T).reshape(-1)
    vals = _chunked(lambda c: halfplane_indicator(f, c), pts, workers).reshape(nj, nt)
    samples = vals.size + 1

    local = np.argwhere(minimum_filter(vals, size=3, mode="nearest") == vals)
    order = sorted(local.tolist(), key=lambda ij: (vals[ij[0], ij[1]], js[ij[0]], ts[ij[1]]))
    starts = order[: max(1, candidates)]

    def objective(x):
        return float(halfplane_indicator(f, [complex(x[0], x[1])])[0])

    def project(x):
        x[0] = max(x[0], 0.0)
        return x

    steps = np.array([js[1] - js[0], ts[1] - ts[0]])
    results = []
    for a, b in starts:
        start = np.array([js[a], ts[b]])
        if refine_iters > 0:
            rng = np.random.default_rng(seed)
            x, v = _descend(objective, start, steps, refine_iters, rng, project)
        else:
            x, v = start, float(vals[a, b])
        results.append((v, float(x[0]), float(x[1])))

    best_v = min(r[0] for r in results)
    tied = [r for r in results if r[0] <= best_v + TIE_TOL]
    v, j, t = min(tied, key=lambda r: (r[1], abs(r[2]), -r[2]))
    point = HalfPlanePoint(j, t)

    asym = float(f.algebra.indicator(f.coeffs[f.index_set.unit_position]))
    if asym < v - TIE_TOL:
        v, point = asym, HalfPlanePoint(math.inf, 0.0)
        at = f.coeffs[f.index_set.unit_position]
    else:
        at = f.evaluate_many(np.array([point.s]))[0]
    return MarginReport(
        "halfplane", v, point, samples, refine_iters > 0, det_at_argmin=_abs_det(f, at)
    )


# -- polydisc of semicharacters ----------------------------------------------------------


def _prime_factors(n: int) -> dict[int, int]:
    out = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


class _Semicharacters:
    """Evaluates ``sum_n a_n chi(n)`` for batches of polydisc points."""

    def __init__(self, f: DirichletSeries):
        if not isinstance(f.index_set, OrdinaryIndexSet):
            raise UnsupportedIndexSet("semicharacter polydisc is only defined for ordinary series")
        self.f = f
        self.support = [n for n in f.support()]
        factored = {n: _prime_factors(n) for n in self.support}
        self.primes = tuple(sorted({p for fac in factored.values() for p in fac}))
        self.valuations = np.array(
            [[factored[n].get(p, 0) for p in self.primes] for n in self.support], dtype=int
        ).reshape(len(self.support), len(self.primes))
        self.coeffs = f.coeffs[[f.index_set.position(n) for n in self.support]] if self.support else None

    def values(self, z: np.ndarray) -> np.ndarray:
        z = np.asarray(z, dtype=complex)
        if z.ndim != 2:
            z = z.reshape(-1, len(self.primes)) if self.primes else z.reshape(1, 0)
        if not self.support:
            return self.f.algebra.zeros((z.shape[0],))
        chi = np.ones((z.shape[0], len(self.support)), dtype=complex)
        for k in range(len(self.primes)):
            chi *= z[:, k : k + 1] ** self.valuations[:, k]
        return self.f.algebra.combine_right(chi, self.coeffs)

    def indicator(self, z: np.ndarray) -> np.ndarray:
        return self.f.algebra.indicator(self.values(z))


def polydisc_indicator(f: DirichletSeries, z) -> float:
    """Indicator of ``sum a_n chi(n)`` at ``z`` (dict prime -> value, or sequence aligned with the support primes)."""
    sc = _Semicharacters(f)
    if isinstance(z, dict):
        z = [z.get(p, 0.0) for p in sc.primes]
    return float(sc.indicator(np.array(z, dtype=complex).reshape(1, len(sc.primes)))[0])


def _corners(P: int, limit: int) -> np.ndarray:
    """Points with every ``z_p`` in ``{1, -1, i, -i}``; the real ones first."""
    out = []
    for combo in itertools.product((1.0, -1.0), repeat=P):
        if len(out) >= limit:
            return np.array(out, dtype=complex).reshape(-1, P)
        out.append(combo)
    for combo in itertools.product((1.0, -1.0, 1j, -1j), repeat=P):
        if len(out) >= limit:
            break
        if all(c.imag == 0 for c in map(complex, combo)):
            continue
        out.append(combo)
    return np.array(out, dtype=complex).reshape(-1, P)


def polydisc_margin(
    f: DirichletSeries,
    sample_budget: int = DEFAULT_BUDGET,
    refine_iters: int = DEFAULT_REFINE_ITERS,
    seed: int = 0,
    candidates: int = DEFAULT_CANDIDATES,
    workers: int | None = None,
) -> MarginReport:
    """Sampled infimum of the indicator of ``sum a_n chi(n)`` over semicharacters.

    Samples: the origin, corner points (``z_p in {+-1, +-i}``) and scrambled
    Halton points of the polydisc, ``sample_budget`` in total; the best
    ``candidates`` samples are refined by coordinate descent on
    ``(Re z_p, Im z_p)`` with projection onto the closed disc.
    """
    sc = _Semicharacters(f)
    P = len(sc.primes)
    workers = worker_count() if workers is None else workers
    if P == 0:
        v = float(sc.indicator(np.zeros((1, 0)))[0])
        return MarginReport("polydisc", v, (), 1, False, ())

    budget = max(2, int(sample_budget))
    corners = _corners(P, budget - 1)
    rest = budget - 1 - len(corners)
    parts = [np.zeros((1, P), dtype=complex), corners]
    if rest > 0:
        u = qmc.Halton(d=2 * P, scramble=True, seed=seed).random(rest)
        parts.append(np.sqrt(u[:, :P]) * np.exp(2j * np.pi * u[:, P:]))
    pts = np.concatenate(parts)
    vals = _chunked(lambda c: sc.indicator(c), pts, workers)

    order = np.argsort(vals, kind="stable")[: max(1, candidates)]

    def to_real(z):
        return np.concatenate([z.real, z.imag])

    def to_complex(x):
        return x[:P] + 1j * x[P:]

    def project(x):
        z = to_complex(x)
        mod = np.abs(z)
        z = np.where(mod > 1.0, z / np.where(mod > 0, mod, 1.0), z)
        return to_real(z)

    def objective(x):
        return float(sc.indicator(to_complex(x).reshape(1, P))[0])

    best_v, best_z = math.inf, None
    for k in order:
        start = to_real(pts[k])
        if refine_iters > 0:
            rng = np.random.default_rng(seed)
            x, v = _descend(objective, start, np.full(2 * P, 0.25), refine_iters, rng, project)
        else:
            x, v = start, float(vals[k])
        if v < best_v:
            best_v, best_z = v, to_complex(x)
    return MarginReport(
        "polydisc",
        best_v,
        tuple(complex(z) for z in best_z),
        len(pts),
        refine_iters > 0,
        sc.primes,
        det_at_argmin=_abs_det(f, sc.values(best_z.reshape(1, P))[0]),
    )
