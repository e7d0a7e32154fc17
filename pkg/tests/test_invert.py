import math
from fractions import Fraction as F

import numpy as np
import pytest

from vdirichlet import (
    BC,
    C,
    H,
    Algebra,
    Coefficient,
    DimensionTooLarge,
    DirichletSeries,
    GeneratedSemigroup,
    NeumannNotContractive,
    NotInvertibleConstantTerm,
    OrdinaryIndexSet,
    ScalarKind,
    Weight,
    invert,
    invert_generated,
    invert_neumann,
    invert_ordinary,
    verify_inverse,
)
from vdirichlet.invert import (
    auto_method,
    invert_bicomplex_split,
    invert_matrix_adjugate,
    invert_quaternion_matrix,
    invert_quaternion_slice,
    invert_recursive,
    series_determinant,
)

from .helpers import FAMILIES, contraction_series, mobius_sieve, random_index_set, random_series

M2C = Algebra(ScalarKind.COMPLEX, 2)
M2H = Algebra(ScalarKind.QUATERNION, 2)


def values(series):
    return [complex(series.coeffs[k]) for k in range(len(series))]


class TestDirect:
    def test_delta(self):
        d = DirichletSeries.delta(OrdinaryIndexSet(10), C)
        assert invert_ordinary(d) == d

    def test_geometric(self):
        f = DirichletSeries.from_dict(OrdinaryIndexSet(8), C, {1: 1, 2: -0.5})
        g = invert_ordinary(f)
        assert values(g) == [1, 0.5, 0, 0.25, 0, 0, 0, 0.125]
        assert verify_inverse(f, g).residual_left == 0

    def test_mobius_twelve(self):
        ones = DirichletSeries(OrdinaryIndexSet(12), C, np.ones(12))
        assert values(invert_ordinary(ones)) == mobius_sieve(12)

    def test_window_argument(self):
        ones = DirichletSeries(OrdinaryIndexSet(12), C, np.ones(12))
        g = invert_ordinary(ones, N=30)
        assert len(g) == 30
        assert values(g.with_window(12)) == mobius_sieve(12)

    def test_scaled_delta(self):
        c = Coefficient.quaternion(1, 2, -1, 0.5)
        s = GeneratedSemigroup(("1",), 4)
        g = invert_generated(DirichletSeries.from_dict(s, H, {0: c}))
        assert np.allclose(g[0].data, c.inverse().data) and g.support() == [0]

    def test_generated_example(self):
        s = GeneratedSemigroup(("1", "3/2"), 3)
        f = DirichletSeries.from_dict(s, C, {0: 1, 1: -1, "3/2": -1})
        g = invert_generated(f)
        assert values(g) == [1, 1, 1, 1, 2, 2]
        one = DirichletSeries.delta(s, C)
        assert f * g == one == g * f

    def test_generated_horizon_argument(self):
        s = GeneratedSemigroup(("1", "3/2"), 3)
        f = DirichletSeries.from_dict(s, C, {0: 1, 1: -1, "3/2": -1})
        g = invert_generated(f, horizon=6)
        assert g.with_horizon(3) == invert_generated(f)

    def test_zero_constant_term(self):
        f = DirichletSeries.from_dict(OrdinaryIndexSet(6), C, {2: 1})
        with pytest.raises(NotInvertibleConstantTerm):
            invert_ordinary(f)

    @pytest.mark.parametrize("name", ["H", "M2(C)", "M2(BC)", "M2(H)"])
    def test_left_and_right_recursions_agree(self, name):
        rng = np.random.default_rng(0)
        alg = FAMILIES[name]
        for _ in range(10):
            f = random_series(random_index_set(rng), alg, rng)
            gl, gr = invert_recursive(f, "left"), invert_recursive(f, "right")
            assert gl.max_difference(gr) <= 1e-9 * max(1.0, float(np.max(np.abs(gl.coeffs))))

    def test_monotone_truncation(self):
        rng = np.random.default_rng(1)
        for alg in FAMILIES.values():
            f = random_series(OrdinaryIndexSet(40), alg, rng)
            small = invert_ordinary(f)
            big = invert_ordinary(f, N=80)
            assert np.array_equal(big.with_window(40).coeffs, small.coeffs)


class TestNeumann:
    def test_delta(self):
        d = DirichletSeries.delta(OrdinaryIndexSet(8), C)
        g, cert = invert_neumann(d)
        assert g == d and cert.ratio == 0 and cert.norm_bound == 1

    def test_half(self):
        f = DirichletSeries.from_dict(OrdinaryIndexSet(64), C, {1: 1, 2: -0.5})
        g, cert = invert_neumann(f)
        assert cert.ratio == 0.5 and cert.norm_bound == 2
        partial = sum(2.0**-k for k in range(7))
        assert g.weighted_norm() == pytest.approx(partial, abs=1e-15)
        assert g.weighted_norm() <= 2

    def test_not_contractive(self):
        f = DirichletSeries.from_dict(OrdinaryIndexSet(8), C, {1: 1, 2: -1})
        with pytest.raises(NeumannNotContractive) as info:
            invert_neumann(f)
        assert info.value.ratio == 1
        assert "inconclusive" in str(info.value)
        # still invertible in the quotient
        assert verify_inverse(f, invert_ordinary(f)).passed

    def test_weighted_ratio(self):
        f = DirichletSeries.from_dict(OrdinaryIndexSet(8), C, {1: 1, 2: -0.5})
        w = Weight.polynomial(1, "multiplicative")
        _, cert = invert_neumann(f, w)
        assert cert.ratio == pytest.approx(0.5 * (1 + math.log(2)))

    @pytest.mark.parametrize("name", list(FAMILIES))
    def test_soundness_random(self, name):
        rng = np.random.default_rng(2)
        alg = FAMILIES[name]
        for _ in range(5):
            s = random_index_set(rng)
            f = contraction_series(s, alg, rng, r=rng.uniform(0.1, 0.9), unit_scale=rng.uniform(0.5, 2))
            g, cert = invert_neumann(f)
            assert cert.passed
            assert g.weighted_norm() <= cert.norm_bound + 1e-9
            assert g.max_difference(invert_recursive(f)) <= 1e-8


class TestAdjugate:
    def test_identity(self):
        f = DirichletSeries.delta(OrdinaryIndexSet(8), M2C)
        assert invert_matrix_adjugate(f) == f

    def test_unipotent(self):
        s = OrdinaryIndexSet(8)
        f = DirichletSeries.from_dict(
            s, M2C, {1: Coefficient.matrix([[1, 0], [0, 1]]), 2: Coefficient.matrix([[0, 1], [0, 0]])}
        )
        g = invert_matrix_adjugate(f)
        expected = DirichletSeries.from_dict(
            s, M2C, {1: Coefficient.matrix([[1, 0], [0, 1]]), 2: Coefficient.matrix([[0, -1], [0, 0]])}
        )
        assert g == expected

    def test_matches_recursion(self):
        rng = np.random.default_rng(3)
        for d in (2, 3):
            alg = Algebra(ScalarKind.COMPLEX, d)
            for _ in range(10):
                f = random_series(OrdinaryIndexSet(8), alg, rng)
                assert invert_matrix_adjugate(f).max_difference(invert_ordinary(f)) <= 1e-8

    def test_determinant_of_scalars(self):
        s = OrdinaryIndexSet(6)
        a = DirichletSeries.from_dict(s, C, {1: 2, 2: 1})
        b = DirichletSeries.from_dict(s, C, {1: 1, 3: 1})
        one = DirichletSeries.delta(s, C)
        det = series_determinant([[a, b], [b, a]], one)
        assert det == a * a - b * b

    def test_dimension_cap(self):
        f = DirichletSeries.delta(OrdinaryIndexSet(2), Algebra(ScalarKind.COMPLEX, 6))
        with pytest.raises(DimensionTooLarge):
            invert_matrix_adjugate(f)

    def test_singular_determinant(self):
        f = DirichletSeries.from_dict(OrdinaryIndexSet(4), M2C, {1: Coefficient.matrix([[1, 1], [1, 1]])})
        with pytest.raises(NotInvertibleConstantTerm):
            invert_matrix_adjugate(f)


class TestBicomplexSplit:
    def test_delta(self):
        d = DirichletSeries.delta(GeneratedSemigroup(("1",), 5), BC)
        assert invert_bicomplex_split(d) == d

    def test_hyperbolic_geometric(self):
        s = GeneratedSemigroup(("1",), 6)
        k = Coefficient.bicomplex(1, -1)
        f = DirichletSeries.from_dict(s, BC, {0: Coefficient.one(BC), 1: k})
        g = invert_bicomplex_split(f)
        for m in range(7):
            assert g[m].l1 == (-1) ** m and g[m].l2 == 1
            z1, z2 = ((-1) ** m + 1) / 2, ((-1) ** m - 1) / 2
            # z1 + z2 k in idempotent form
            assert g[m] == Coefficient.bicomplex(z1 + z2, z1 - z2)
        assert f * g == DirichletSeries.delta(s, BC)

    def test_zero_divisor_constant_term(self):
        f = DirichletSeries.from_dict(OrdinaryIndexSet(4), BC, {1: Coefficient.bicomplex(1, 0), 2: Coefficient.one(BC)})
        with pytest.raises(NotInvertibleConstantTerm) as info:
            invert_bicomplex_split(f)
        assert info.value.component == "e2"
        assert "e2" in str(info.value)

    def test_matrix_components(self):
        rng = np.random.default_rng(4)
        alg = FAMILIES["M2(BC)"]
        f = random_series(OrdinaryIndexSet(16), alg, rng)
        assert invert_bicomplex_split(f).max_difference(invert_recursive(f)) <= 1e-8


class TestQuaternion:
    def test_delta(self):
        d = DirichletSeries.delta(GeneratedSemigroup(("1",), 4), H)
        assert invert_quaternion_slice(d) == d
        assert invert_quaternion_matrix(d) == d

    def test_e2_cycle(self):
        s = GeneratedSemigroup(("1",), 7)
        e2 = Coefficient.quaternion(0, 0, 1)
        f = DirichletSeries.from_dict(s, H, {0: Coefficient.one(H), 1: e2})
        cycle = [(1, 0, 0, 0), (0, 0, -1, 0), (-1, 0, 0, 0), (0, 0, 1, 0)]
        for g in (invert_quaternion_slice(f), invert_quaternion_matrix(f), invert_generated(f)):
            assert [g[m].components for m in range(8)] == [cycle[m % 4] for m in range(8)]
        A, B = f.component(0), f.component(1)
        D = A * A.conjugate() + B * B.conjugate()
        assert values(D) == [1, 0, 1, 0, 0, 0, 0, 0]

    def test_slice_matches_direct(self):
        rng = np.random.default_rng(5)
        for _ in range(20):
            f = random_series(GeneratedSemigroup(("1", "3/2"), 8), H, rng)
            assert invert_quaternion_slice(f).max_difference(invert_generated(f)) <= 1e-8

    def test_embed_d1_matches_slice(self):
        rng = np.random.default_rng(6)
        for _ in range(10):
            f = random_series(OrdinaryIndexSet(30), H, rng)
            assert invert_quaternion_matrix(f).max_difference(invert_quaternion_slice(f)) <= 1e-8

    def test_embed_matches_direct(self):
        rng = np.random.default_rng(7)
        for _ in range(10):
            f = random_series(GeneratedSemigroup(("1",), 4), M2H, rng)
            assert invert_quaternion_matrix(f).max_difference(invert_generated(f)) <= 1e-8

    def test_slice_rejects_matrices(self):
        with pytest.raises(TypeError):
            invert_quaternion_slice(DirichletSeries.delta(OrdinaryIndexSet(2), M2H))

    def test_zero_constant(self):
        f = DirichletSeries.from_dict(OrdinaryIndexSet(4), H, {2: Coefficient.one(H)})
        with pytest.raises(NotInvertibleConstantTerm):
            invert_quaternion_slice(f)


class TestVerify:
    def test_delta(self):
        d = DirichletSeries.delta(OrdinaryIndexSet(5), H)
        cert = verify_inverse(d, d)
        assert cert.residual_left == cert.residual_right == 0

    def test_wrong_inverse(self):
        s = OrdinaryIndexSet(6)
        f = DirichletSeries.from_dict(s, C, {1: 1, 2: 3 - 4j, 3: 0.5})
        d = DirichletSeries.delta(s, C)
        cert = verify_inverse(f, d)
        assert cert.residual_left == cert.residual_right == 5
        assert not cert.passed


class TestDispatch:
    @pytest.mark.parametrize(
        "alg,method",
        [
            (C, "recursion"),
            (M2C, "adjugate"),
            (Algebra(ScalarKind.COMPLEX, 6), "recursion"),
            (BC, "split"),
            (FAMILIES["M2(BC)"], "split"),
            (H, "slice"),
            (M2H, "embed"),
        ],
    )
    def test_auto(self, alg, method):
        assert auto_method(alg) == method

    @pytest.mark.parametrize("name", list(FAMILIES))
    def test_invert_certificate(self, name):
        rng = np.random.default_rng(8)
        f = random_series(OrdinaryIndexSet(24), FAMILIES[name], rng)
        g, cert = invert(f)
        assert cert.passed and cert.method == auto_method(f.algebra)

    def test_unknown_method(self):
        with pytest.raises(ValueError):
            invert(DirichletSeries.delta(OrdinaryIndexSet(2), C), "magic")
