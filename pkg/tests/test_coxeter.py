import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from pizza.coxeter import (
    build_type,
    make_dominant,
    max_orthogonal_rank,
    minus_id_in_group,
    orthogonal_sequences,
    parse_spec,
    reflect,
    region_is_stable,
)
from pizza.errors import GeometryError
from pizza.geometry import region_ball, region_cube, region_shifted

# number of reflections of each irreducible type
ROOT_COUNTS = {
    "A1": 1, "A2": 3, "A3": 6, "A4": 10, "B2": 4, "B3": 9, "B4": 16, "D4": 12, "D5": 20,
    "E6": 36, "E7": 63, "E8": 120, "F4": 24, "H3": 15, "H4": 60, "I2(5)": 5, "I2(6)": 6,
    "I2(7)": 7,
}


def _key(g):
    # adding 0.0 turns -0.0 into 0.0 so equal matrices hash equally
    return (np.round(g, 8) + 0.0).tobytes()


def group_elements(CA, cap=20_000):
    """Brute-force closure of the simple reflections as matrices."""
    n = CA.dim
    gens = [np.eye(n) - 2 * np.outer(s, s) for s in CA.simple_roots]
    seen = {_key(np.eye(n)): np.eye(n)}
    frontier = [np.eye(n)]
    while frontier:
        nxt = []
        for g in frontier:
            for s in gens:
                h = s @ g
                key = _key(h)
                if key not in seen:
                    seen[key] = h
                    nxt.append(h)
        frontier = nxt
        assert len(seen) <= cap
    return list(seen.values())


class TestParse:
    @pytest.mark.parametrize("text,rank", [("A3", 3), ("I2(6)", 2), ("B2xA1", 3), ("A2xE1", 3)])
    def test_valid(self, text, rank):
        spec = parse_spec(text)
        assert spec.rank == rank
        assert str(spec) == text

    @pytest.mark.parametrize("text", ["", "Z3", "D3", "E9", "F3", "H5", "I2(2)", "B1", "A2x", "a2"])
    def test_invalid(self, text):
        with pytest.raises(GeometryError):
            parse_spec(text)


class TestRootSystems:
    @pytest.mark.parametrize("spec,count", sorted(ROOT_COUNTS.items()))
    def test_counts(self, spec, count):
        CA = build_type(spec)
        assert len(CA) == count
        assert np.allclose(np.linalg.norm(CA.normals, axis=1), 1, atol=1e-12)

    @pytest.mark.parametrize("spec", sorted(ROOT_COUNTS))
    def test_closed_under_reflections(self, spec):
        N = build_type(spec).normals
        for e in N:
            img = N - 2 * np.outer(N @ e, e)
            # each image is +-some normal
            G = np.abs(img @ N.T)
            assert np.all(np.max(G, axis=1) >= 1 - 1e-9)

    @pytest.mark.parametrize("spec", sorted(ROOT_COUNTS))
    def test_simple_roots_generate_positive_cone(self, spec):
        CA = build_type(spec)
        S = CA.simple_roots
        coef = np.linalg.lstsq(S.T, CA.normals.T, rcond=None)[0]
        assert np.all(coef >= -1e-9)
        assert np.allclose(S.T @ coef, CA.normals.T, atol=1e-9)

    def test_a2_angles(self):
        N = build_type("A2").normals
        G = N @ N.T
        off = G[~np.eye(3, dtype=bool)]
        assert np.allclose(np.abs(off), 0.5)

    def test_product_dimensions(self):
        CA = build_type("A2xE1")
        assert (CA.dim, len(CA)) == (3, 3)


class TestGroupQueries:
    def test_reflect(self):
        np.testing.assert_allclose(reflect((1, 0), (1, 0)), (-1, 0))
        np.testing.assert_allclose(reflect((0, 3), (1, 0)), (0, 3))

    def test_dominant_fixed_point(self):
        CA = build_type("B3")
        x = CA.base.witness
        y, parity = make_dominant(CA, x)
        np.testing.assert_allclose(y, x)
        assert parity == 1

    def test_dominant_a1(self):
        CA = build_type("A1")
        y, parity = make_dominant(CA, [-2.0])
        np.testing.assert_allclose(y, [2.0])
        assert parity == -1

    @given(st.sampled_from(["A3", "B3", "H3", "D4", "F4"]), st.integers(0, 10_000))
    def test_dominance_independent_of_scan_order(self, spec, seed):
        CA = build_type(spec)
        r = np.random.default_rng(seed)
        x = r.standard_normal(CA.dim)
        order = r.permutation(CA.dim)
        y1, p1 = make_dominant(CA, x)
        y2, p2 = make_dominant(CA, x, order)
        np.testing.assert_allclose(y1, y2, atol=1e-9)
        assert p1 == p2

    @pytest.mark.parametrize("spec", ["A1", "A2", "A3", "B2", "B3", "H3", "I2(5)", "I2(6)", "D4"])
    def test_minus_id_matches_group_enumeration(self, spec):
        CA = build_type(spec)
        els = group_elements(CA)
        brute = any(np.allclose(g, -np.eye(CA.dim), atol=1e-8) for g in els)
        assert minus_id_in_group(CA) == brute

    def test_minus_id_not_essential(self):
        assert not minus_id_in_group(build_type("A2xE1"))


class TestOrthogonalSequences:
    def test_a2_none(self):
        assert orthogonal_sequences(build_type("A2"), 2) == []

    def test_axes(self):
        assert sorted(orthogonal_sequences(build_type("A1xA1"), 2)) == [(0, 1), (1, 0)]

    def test_b2_count_against_brute_force(self):
        CA = build_type("B2")
        N = CA.normals
        brute = [(i, j) for i, j in itertools.permutations(range(4), 2) if abs(N[i] @ N[j]) < 1e-10]
        assert sorted(orthogonal_sequences(CA, 2)) == sorted(brute)
        assert len(brute) == 4

    @pytest.mark.parametrize("spec", ["B3", "H3", "D4", "A1xA1xA1"])
    def test_closed_under_permutation(self, spec):
        seqs = set(orthogonal_sequences(build_type(spec), 3))
        for t in seqs:
            assert all(p in seqs for p in itertools.permutations(t))

    @pytest.mark.parametrize("spec,r", [
        ("A2", 1), ("A3", 2), ("A4", 2), ("I2(5)", 1), ("B2", 2), ("B3", 3), ("B4", 4),
        ("D4", 4), ("D5", 4), ("F4", 4), ("H3", 3), ("H4", 4), ("E6", 4), ("E7", 7), ("E8", 8),
    ])
    def test_max_orthogonal_rank(self, spec, r):
        assert max_orthogonal_rank(build_type(spec)) == r


class TestStability:
    def test_centred_ball(self, rng):
        for spec in ("A2", "B3", "H3"):
            CA = build_type(spec)
            assert region_is_stable(CA, region_ball(np.zeros(CA.dim), 1.0), 500, rng)

    def test_square_under_b2(self, rng):
        assert region_is_stable(build_type("B2"), region_cube(2), 500, rng)

    def test_shifted_ball_is_not_stable(self, rng):
        K = region_shifted(region_ball((0, 0), 1.0), (1, 0))
        assert not region_is_stable(build_type("A1xA1"), K, 500, rng)
