import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from pizza.errors import GeometryError
from pizza.geometry import (
    TOL_ORTHO,
    TOL_UNIT,
    QuadForm,
    ball_volume,
    gamma_half,
    inner,
    normalize,
    region_ball,
    region_box,
    region_cube,
    region_ellipsoid,
    region_shifted,
    region_transformed,
    sample_ball,
    sample_box,
    sample_ellipsoid,
    sample_sphere,
    slice_region,
    sphere_area,
    subspace_basis,
)

finite = st.floats(-10, 10, allow_nan=False, allow_infinity=False)
vectors = st.integers(1, 6).flatmap(lambda n: arrays(float, n, elements=finite))


class TestInnerAndNormalize:
    def test_inner_examples(self):
        assert inner((1, 0), (0, 1)) == 0
        assert inner((1, 2), (3, 4)) == 11

    def test_inner_dimension_mismatch(self):
        with pytest.raises(GeometryError):
            inner((1, 0), (1, 0, 0))

    def test_normalize_example(self):
        np.testing.assert_allclose(normalize((3, 4)), (0.6, 0.8), atol=1e-15)

    def test_normalize_zero(self):
        with pytest.raises(GeometryError):
            normalize((0, 0))

    def test_normalize_fixed_point(self):
        e = np.array([1, 1, 0]) / math.sqrt(2)
        np.testing.assert_allclose(normalize(e), e, atol=TOL_UNIT)

    @given(vectors)
    def test_normalize_idempotent_and_unit(self, v):
        if np.linalg.norm(v) <= 1e-6:
            return
        e = normalize(v)
        assert abs(inner(e, e) - 1) <= TOL_UNIT
        assert np.max(np.abs(normalize(e) - e)) <= TOL_UNIT


class TestGammaAndVolumes:
    @pytest.mark.parametrize("x", [0.5, 1, 1.5, 2, 3.5, 6, 10.5])
    def test_gamma_half_matches_math(self, x):
        assert gamma_half(x) == pytest.approx(math.gamma(x), rel=1e-14)

    def test_gamma_half_rejects_other_arguments(self):
        with pytest.raises(GeometryError):
            gamma_half(0.3)

    def test_ball_volumes(self):
        assert ball_volume(2, 1) == pytest.approx(math.pi)
        assert ball_volume(3, 2) == pytest.approx(4 / 3 * math.pi * 8)
        assert ball_volume(0, 5) == 1.0
        assert sphere_area(3, 1) == pytest.approx(4 * math.pi)


class TestSubspaceBasis:
    def test_one_normal_in_plane(self):
        B = subspace_basis([(1, 0)])
        assert B.dim == 1
        assert abs(abs(B.vectors[0] @ (0, 1)) - 1) < 1e-15

    def test_two_normals_in_space(self):
        B = subspace_basis([(1, 0, 0), (0, 1, 0)])
        assert B.dim == 1
        assert abs(abs(B.vectors[0][2]) - 1) < 1e-15

    def test_full_rank_gives_point(self):
        B = subspace_basis(np.eye(3))
        assert B.dim == 0

    def test_dependent_normals_rejected(self):
        with pytest.raises(GeometryError):
            subspace_basis([(1, 0, 0), (2, 0, 0)])

    @given(st.integers(2, 5), st.integers(0, 10_000))
    def test_orthogonal_to_normals(self, n, seed):
        r = np.random.default_rng(seed)
        k = int(r.integers(1, n))
        N = r.standard_normal((k, n))
        B = subspace_basis(N)
        assert B.dim == n - k
        G = B.vectors @ B.vectors.T
        assert np.max(np.abs(G - np.eye(B.dim))) <= TOL_ORTHO
        Nn = N / np.linalg.norm(N, axis=1)[:, None]
        assert np.max(np.abs(B.vectors @ Nn.T), initial=0) <= TOL_ORTHO

    def test_coords_embed_roundtrip(self):
        B = subspace_basis([(1, 1, 1)])
        y = np.array([0.3, -0.7])
        np.testing.assert_allclose(B.coords(B.embed(y)), y, atol=1e-14)


class TestQuadForm:
    def test_rejects_asymmetric(self):
        with pytest.raises(GeometryError):
            QuadForm(np.array([[1.0, 0.5], [0.0, 1.0]]))

    def test_rejects_indefinite(self):
        with pytest.raises(GeometryError):
            QuadForm(np.diag([1.0, -1.0]))

    def test_value_and_det(self):
        q = QuadForm(np.diag([1.0, 4.0]))
        assert q(np.array([1.0, 1.0])) == pytest.approx(5.0)
        assert q.det() == pytest.approx(4.0)


class TestSamplers:
    def test_sphere_points_on_sphere(self, rng):
        X = sample_sphere((0, 0), 1, rng, 1000)
        assert np.max(np.abs(np.linalg.norm(X, axis=1) - 1)) <= 1e-12

    def test_ball_area_scaling(self, rng):
        n = 100_000
        X = sample_ball((0, 0), 1, rng, n)
        frac = np.mean(np.linalg.norm(X, axis=1) <= 2**-0.5)
        sigma = math.sqrt(0.25 / n)
        assert abs(frac - 0.5) <= 4 * sigma

    def test_ellipsoid_membership(self, rng):
        q = QuadForm(np.diag([1.0, 4.0]))
        X = sample_ellipsoid(q, (0, 0), 1, rng, 10_000)
        assert np.all(q(X) <= 1 + 1e-12)

    def test_box_inside(self, rng):
        X = sample_box((-1, 0), (1, 2), rng, 1000)
        assert np.all((X >= (-1, 0)) & (X <= (1, 2)))

    def test_single_point_shape(self, rng):
        assert sample_ball((0, 0, 0), 1, rng).shape == (3,)

    def test_bad_radius(self, rng):
        with pytest.raises(GeometryError):
            sample_ball((0, 0), -1, rng)

    def test_bit_deterministic(self):
        a = sample_ball((0.1, 0.2), 2, np.random.default_rng(5), 50)
        b = sample_ball((0.1, 0.2), 2, np.random.default_rng(5), 50)
        assert np.array_equal(a, b)


class TestRegions:
    def test_ball_volume_hint(self):
        assert region_ball((0, 0), 1).volume_hint == pytest.approx(math.pi)

    def test_shifted_box_membership(self):
        K = region_shifted(region_box((-1, -1), (1, 1)), (1, 1))
        assert K.membership((0.5, 0.5))
        assert not K.membership((-0.5, 0.5))

    def test_ellipsoid_volume_hint_against_mc(self, rng):
        # oracle: box-rejection Monte Carlo volume
        K = region_ellipsoid(QuadForm(np.diag([1.0, 4.0])), (0, 0), 1)
        assert K.volume_hint == pytest.approx(math.pi / 2)
        n = 1_000_000
        X = sample_box(K.lo, K.hi, rng, n)
        p = np.mean(K.contains(X))
        est = p * K.box_volume()
        se = K.box_volume() * math.sqrt(p * (1 - p) / n)
        assert abs(est - math.pi / 2) <= 4 * se

    def test_mc_volume_unit_ball_3d(self, rng):
        K = region_ball((0, 0, 0), 1)
        n = 1_000_000
        p = np.mean(K.contains(sample_box(K.lo, K.hi, rng, n)))
        se = 8 * math.sqrt(p * (1 - p) / n)
        assert abs(8 * p - 4 * math.pi / 3) <= 4 * se

    @pytest.mark.parametrize("make", [
        lambda: region_ball((0.2, -0.1, 0.4), 0.7),
        lambda: region_box((-1, 0, 0.5), (0, 2, 1)),
        lambda: region_ellipsoid(QuadForm(np.diag([1.0, 2.0, 9.0])), (0.1, 0, 0), 1.5),
    ])
    def test_samples_inside_body_and_box(self, make, rng):
        K = make()
        X = K.sampler(rng, 5000)
        assert np.all(K.contains(X))
        assert np.all((X >= K.lo - 1e-12) & (X <= K.hi + 1e-12))

    def test_transformed_ball(self):
        th = 0.4
        U = np.array([[math.cos(th), -math.sin(th)], [math.sin(th), math.cos(th)]])
        K = region_transformed(region_ball((1, 0), 0.5), U)
        assert K.membership(U @ np.array([1.4, 0.0]))
        assert not K.membership((1.4, 0.0))

    def test_slice_of_ball_is_disc(self):
        B = subspace_basis([(0, 0, 1)])
        L = slice_region(region_ball((0, 0, 0), 1), B, shift=(0, 0, 0.6))
        # (K + b) ∩ {z = 0}: a disc of radius 0.8
        got = L.contains(np.array([[0.79, 0.0], [0.0, 0.81]]))
        assert got.tolist() == [True, False]

    def test_cube(self):
        K = region_cube(3, 0.5)
        assert K.volume_hint == pytest.approx(1.0)
