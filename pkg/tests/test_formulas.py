import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from pizza.coxeter import build_type, reflect
from pizza.errors import PreconditionError
from pizza.formulas import (
    ball_value,
    classify_f,
    decay_probe,
    even_polynomial,
    even_power_residual,
    f_H,
    pizza_ball_coxeter,
    r_independence_check,
    slice_ball_coefficient,
)
from pizza.geometry import region_ball
from pizza.integrate import pizza_exact_2d, pizza_mc
from pizza.verify import seven_plane_arrangement

# f(a) = SEVEN_PLANE_C * a1 a2 a3 for the seven-plane arrangement with
# alpha = 0.7, beta = 1.3; Monte Carlo on B(a, 1) confirms it (see below)
SEVEN_PLANE_C = -1.376682657869387
A2_DISC_VALUE = 0.02688636071773176

coords = st.floats(-1, 1, allow_nan=False)


class TestEvenPolynomial:
    @pytest.mark.parametrize("n", [1, 2, 3, 4])
    def test_axes_product(self, n):
        spec = "x".join(["A1"] * n)
        a = np.linspace(0.2, 0.5, n)
        assert f_H(build_type(spec), a) == pytest.approx(2**n * np.prod(a), abs=1e-15)

    @given(st.tuples(coords, coords, coords))
    def test_axes_product_property(self, a):
        assert f_H(build_type("A1xA1xA1"), a) == pytest.approx(8 * np.prod(a), abs=1e-14)

    @pytest.mark.parametrize("spec", ["B2", "B3", "H3", "I2(6)", "B2xA1", "D4"])
    def test_vanishes_beyond_axes(self, spec):
        CA = build_type(spec)
        a = np.random.default_rng(1).standard_normal(CA.dim)
        assert abs(f_H(CA, a)) <= 1e-12

    @pytest.mark.parametrize("spec", ["A1xA1", "A1xA1xA1", "B2", "B3", "I2(6)", "B2xA1", "H3"])
    def test_both_paths_agree(self, spec):
        CA = build_type(spec)
        a = np.random.default_rng(2).standard_normal(CA.dim)
        cox = even_polynomial(CA, path="coxeter")(a)
        gen = even_polynomial(CA, path="general")(a)
        assert cox == pytest.approx(gen, abs=1e-12)

    def test_not_even(self):
        with pytest.raises(PreconditionError):
            even_polynomial(build_type("A2"))

    def test_general_arrangement_needs_general_path(self):
        with pytest.raises(PreconditionError):
            even_polynomial(seven_plane_arrangement(), path="coxeter")

    @given(st.tuples(coords, coords, coords), st.sampled_from([2.0, 3.0, -1.0]))
    def test_homogeneous(self, a, lam):
        f = even_polynomial(seven_plane_arrangement())
        a = np.array(a)
        assert f(lam * a) == pytest.approx(lam**3 * f(a), rel=1e-9, abs=1e-14)

    @given(st.tuples(coords, coords, coords))
    def test_reflection_flips_sign(self, a):
        CA = build_type("A1xA1xA1")
        f = even_polynomial(CA)
        for s in CA.simple_roots:
            assert f(reflect(a, s)) == pytest.approx(-f(a), abs=1e-14)


class TestSevenPlanes:
    def test_monomial_shape(self):
        f = even_polynomial(seven_plane_arrangement())
        r = np.random.default_rng(3)
        for _ in range(5):
            a = r.uniform(-1, 1, 3)
            assert f(a) == pytest.approx(SEVEN_PLANE_C * np.prod(a), rel=1e-10)

    def test_against_monte_carlo(self):
        a = np.array([0.3, 0.25, 0.2])
        est = pizza_mc(seven_plane_arrangement(), region_ball(a, 1.0), 2_000_000, seed=11)
        assert est.zscore(SEVEN_PLANE_C * np.prod(a)) <= 4


class TestBallFormula:
    def test_slice_coefficient(self):
        assert slice_ball_coefficient(0) == 1.0
        assert slice_ball_coefficient(2) == pytest.approx(math.pi)
        assert slice_ball_coefficient(3) == pytest.approx(4 * math.pi / 3)

    def test_b2_vanishes(self):
        CA = build_type("B2")
        assert abs(pizza_ball_coxeter(CA, (0.3, 0.1), 1.0)) <= 1e-8
        assert abs(pizza_exact_2d(CA.base, (0.3, 0.1), 1.0)) <= 1e-8

    def test_a2_against_exact(self):
        assert pizza_ball_coxeter(build_type("A2"), (0.4, 0.1), 1.0) == pytest.approx(A2_DISC_VALUE, abs=1e-6)

    def test_zero_centre(self):
        assert pizza_ball_coxeter(build_type("B3"), (0, 0, 0), 1.0) == 0.0

    def test_centre_outside(self):
        with pytest.raises(PreconditionError):
            pizza_ball_coxeter(build_type("B2"), (1.0, 1.0), 1.0)

    @given(st.sampled_from(["A2", "I2(5)", "I2(7)", "B2", "I2(6)"]), st.integers(0, 10_000))
    def test_matches_exact_2d(self, spec, seed):
        CA = build_type(spec)
        r = np.random.default_rng(seed)
        a = r.uniform(-0.5, 0.5, 2)
        R = float(np.linalg.norm(a)) * r.uniform(1.0, 3.0) + 1e-3
        assert pizza_ball_coxeter(CA, a, R) == pytest.approx(pizza_exact_2d(CA.base, a, R), abs=1e-9)

    @pytest.mark.parametrize("spec,seed", [("B3", 1), ("A1xA1xA1", 2), ("A3", 3), ("H3", 4)])
    def test_matches_monte_carlo(self, spec, seed):
        CA = build_type(spec)
        r = np.random.default_rng(seed)
        a = r.uniform(-0.4, 0.4, 3)
        R = float(np.linalg.norm(a)) * r.uniform(1.0, 2.0)
        est = pizza_mc(CA.base, region_ball(a, R), 1_000_000, seed=seed)
        assert est.zscore(pizza_ball_coxeter(CA, a, R)) <= 4

    def test_even_powers_only(self):
        for spec, a in (("B2", (0.3, 0.1)), ("A2xA1xE1", (0.1, 0.2, 0.1, 0.3))):
            assert even_power_residual(build_type(spec), a, np.linspace(1, 2, 7)) <= 1e-7

    def test_odd_powers_detected(self):
        # A2 violates the parity condition, so odd powers of R appear
        assert even_power_residual(build_type("A2"), (0.3, 0.1), np.linspace(1, 2, 7)) > 1e-3


class TestClassify:
    def test_examples(self):
        assert classify_f(build_type("B3")) == ("Zero",)
        assert classify_f(build_type("A1xA1xA1")) == ("Monomial", (0, 1, 2))
        assert classify_f(build_type("A2")) == ("NotEven",)

    def test_general_arrangement(self):
        A = seven_plane_arrangement()
        assert classify_f(A, coxeter_sub=[0, 3, 6]) == ("Monomial", (0, 3, 6))
        with pytest.raises(PreconditionError):
            classify_f(A)


class TestSweeps:
    def test_ball_value_engines(self):
        CA = build_type("B2")
        assert ball_value(CA, (0.3, 0.1), 1.0, "exact2d")[1] == 0.0
        with pytest.raises(PreconditionError):
            ball_value(CA, (0.3, 0.1), 1.0, "nope")

    def test_r_independence_formula(self):
        rep = r_independence_check(build_type("A2xE1"), (0.2, 0.1, 0.3), [0.4, 1, 2, 5], "formula")
        assert rep["max_deviation"] <= 1e-10
        assert rep["fit_residual"] <= 1e-10

    def test_r_independence_radius_check(self):
        with pytest.raises(PreconditionError):
            r_independence_check(build_type("A2xE1"), (0.2, 0.1, 0.3), [0.1, 1], "formula")

    def test_decay(self):
        rep = decay_probe(build_type("A2"), (0.4, 0.1), np.geomspace(1, 64, 13))
        assert rep["monotone_tail"] and rep["below_threshold"]
        assert abs(rep["rows"][-1][1]) < abs(rep["rows"][0][1])

    def test_decay_refuses_parity(self):
        with pytest.raises(PreconditionError):
            decay_probe(build_type("B2"), (0.4, 0.1), [1, 2, 4])
