"""Random values and series shared by the test modules."""

from fractions import Fraction

import numpy as np

from vdirichlet import BC, C, H, Algebra, DirichletSeries, GeneratedSemigroup, OrdinaryIndexSet, ScalarKind

FAMILIES = {
    "C": C,
    "BC": BC,
    "H": H,
    "M2(C)": Algebra(ScalarKind.COMPLEX, 2),
    "M2(BC)": Algebra(ScalarKind.BICOMPLEX, 2),
    "M2(H)": Algebra(ScalarKind.QUATERNION, 2),
}

GENERATED_WINDOWS = [
    (("1",), "10"),
    (("1", "3/2"), "10"),
    (("1/2", "1/3"), "8"),
    (("2/3", "1"), "10"),
    (("3/4", "5/4"), "9"),
]


def random_data(algebra: Algebra, rng, batch=()) -> np.ndarray:
    shape = tuple(batch) + algebra.shape
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def random_index_set(rng, kind=None):
    if kind is None:
        kind = "ordinary" if rng.random() < 0.5 else "generated"
    if kind == "ordinary":
        return OrdinaryIndexSet(int(rng.integers(2, 65)))
    gens, horizon = GENERATED_WINDOWS[int(rng.integers(len(GENERATED_WINDOWS)))]
    return GeneratedSemigroup(tuple(Fraction(g) for g in gens), Fraction(horizon))


def random_series(index_set, algebra: Algebra, rng, mass=1.5, density=1.0) -> DirichletSeries:
    """Unit coefficient ``1 + small noise``; the rest carries total norm about ``mass``.

    Invertible in the truncated quotient but, for ``mass >= 1``, usually outside
    the Neumann contraction regime.
    """
    n = len(index_set)
    arr = random_data(algebra, rng, (n,))
    norms = algebra.norm(arr).reshape((n,) + (1,) * len(algebra.shape))
    arr = arr / norms * rng.uniform(0.2, 1.0, (n,) + (1,) * len(algebra.shape))
    if density < 1.0:
        arr[rng.random(n) > density] = 0
    arr *= mass / max(n - 1, 1)
    u = index_set.unit_position
    noise = random_data(algebra, rng)
    arr[u] = algebra.identity() + 0.3 * noise / max(float(algebra.norm(noise)), 1.0)
    return DirichletSeries(index_set, algebra, arr)


def contraction_series(index_set, algebra: Algebra, rng, r: float, unit_scale=1.0) -> DirichletSeries:
    """``c (delta - h)`` with ``||h|| = r`` under the trivial weight, ``c`` a random unit."""
    n = len(index_set)
    h = random_data(algebra, rng, (n,))
    h[index_set.unit_position] = 0
    h = h / algebra.norm(h).sum() * r
    hs = DirichletSeries(index_set, algebra, h)
    one = DirichletSeries.delta(index_set, algebra)
    return (one - hs).scale(unit_scale)


def mobius_sieve(n: int) -> list[int]:
    """Moebius function 1..n from trial factorisation, independent of the package."""
    out = []
    for m in range(1, n + 1):
        k, sign, p = m, 1, 2
        while p * p <= k:
            if k % p == 0:
                k //= p
                if k % p == 0:
                    sign = 0
                    break
                sign = -sign
            p += 1
        if sign != 0 and k > 1:
            sign = -sign
        out.append(sign)
    return out


def divisor_counts(n: int) -> np.ndarray:
    d = np.zeros(n + 1, dtype=int)
    for k in range(1, n + 1):
        d[k::k] += 1
    return d
