import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from pizza import arrangement as arr
from pizza.coxeter import build_type
from pizza.errors import ArrangementError, OnHyperplaneError

AXES = arr.build([(1, 0), (0, 1)])


def random_arrangement(seed, n=None, m=None):
    r = np.random.default_rng(seed)
    n = n or int(r.integers(2, 5))
    m = m or int(r.integers(1, 7))
    return arr.build(r.standard_normal((m, n)), auto_orient=True)


class TestBuild:
    def test_axes_witness(self):
        assert np.all(AXES.normals @ AXES.witness > 0)
        assert AXES.margin() > 0.5

    def test_explicit_witness(self):
        A = arr.build([(1, 0), (0, 1)], witness=(1, 1))
        np.testing.assert_allclose(A.witness, (1, 1))

    def test_parallel_pair(self):
        with pytest.raises(ArrangementError, match="parallel"):
            arr.build([(1, 0), (-1, 0)])

    def test_zero_normal(self):
        with pytest.raises(ArrangementError):
            arr.build([(0, 0), (1, 0)])

    def test_no_common_chamber(self):
        # the three normals sum to zero direction-wise: no point is positive on all
        with pytest.raises(ArrangementError, match="no all-positive chamber"):
            arr.build([(1, 0), (0, 1), (-1 / math.sqrt(2), -1 / math.sqrt(2))])

    def test_b2_positive_roots_are_valid(self):
        s = 1 / math.sqrt(2)
        A = arr.build([(1, 0), (0, 1), (s, s), (-s, s)])
        assert A.margin() > 0

    def test_auto_orient_records_flips(self):
        A = arr.build([(1, 0), (-1, 1)], auto_orient=True)
        assert A.flipped == (1,)
        assert A.margin() > 0

    def test_auto_orient_repairs_bad_orientation(self):
        A = arr.build([(1, 0), (0, 1), (-1, -1)], auto_orient=True)
        assert A.flipped == (2,)

    def test_empty(self):
        A = arr.empty(3)
        assert len(A) == 0
        assert arr.chamber_sign(A, (1, -2, 3)) == 1


class TestSigns:
    def test_sign_vector_examples(self):
        assert arr.sign_vector(AXES, (1, 1)).tolist() == [1, 1]
        assert arr.sign_vector(AXES, (1, 0)).tolist() == [1, 0]
        assert arr.sign_vector(AXES, (-2, 3)).tolist() == [-1, 1]

    def test_chamber_sign_examples(self):
        assert arr.chamber_sign(AXES, (1, 1)) == 1
        assert arr.chamber_sign(AXES, (-1, 1)) == -1
        assert arr.chamber_sign(AXES, (-1, -1)) == 1

    def test_on_hyperplane(self):
        with pytest.raises(OnHyperplaneError):
            arr.chamber_sign(AXES, (0, 2))

    def test_vectorised_matches_pointwise(self, rng):
        A = build_type("B3").base
        X = rng.standard_normal((200, 3))
        got = arr.chamber_signs(A, X)
        want = [arr.chamber_sign(A, x) for x in X]
        assert got.tolist() == want

    def test_vectorised_marks_wall_hits(self):
        assert arr.chamber_signs(AXES, [(0, 1), (1, 1)]).tolist() == [0, 1]

    @given(st.integers(0, 10_000))
    def test_witness_is_positive(self, seed):
        A = random_arrangement(seed)
        assert arr.chamber_sign(A, A.witness) == 1

    @given(st.integers(0, 10_000))
    def test_sign_depends_only_on_sign_vector(self, seed):
        A = random_arrangement(seed)
        r = np.random.default_rng(seed + 1)
        x = r.standard_normal(A.dim)
        y = x * r.uniform(0.1, 10)  # same open chamber (cone)
        assert arr.chamber_sign(A, x) == arr.chamber_sign(A, y)

    @given(st.integers(0, 10_000))
    def test_antipodal_rule_under_parity(self, seed):
        A = random_arrangement(seed)
        x = np.random.default_rng(seed + 2).standard_normal(A.dim)
        if arr.parity_condition(A):
            assert arr.chamber_sign(A, -x) == (-1) ** A.dim * arr.chamber_sign(A, x)


class TestStructure:
    def test_product_axes(self):
        a1 = arr.build([(1,)])
        P = arr.product(a1, a1)
        np.testing.assert_array_equal(P.normals, np.eye(2))
        assert P.margin() > 0

    def test_product_with_empty_line(self):
        P = arr.product(build_type("A2").base, arr.empty(1))
        assert (P.dim, len(P)) == (3, 3)

    def test_isometry_identity(self):
        A = build_type("B2").base
        B = arr.apply_isometry(A, np.eye(2))
        np.testing.assert_array_equal(A.normals, B.normals)

    def test_isometry_rotation_permutes_lines(self):
        U = np.array([[0.0, -1.0], [1.0, 0.0]])
        B = arr.apply_isometry(AXES, U)
        lines = {tuple(np.round(np.abs(e), 12)) for e in B.normals}
        assert lines == {(1.0, 0.0), (0.0, 1.0)}

    def test_parity_condition(self):
        assert arr.parity_condition(build_type("B3").base)
        assert not arr.parity_condition(build_type("A2").base)
        assert arr.parity_condition(build_type("A2xE1").base)

    def test_components(self):
        assert arr.irreducible_components(AXES) == [[0], [1]]
        assert len(arr.irreducible_components(build_type("B2").base)) == 1
        sizes = sorted(len(c) for c in arr.irreducible_components(build_type("B2xA1").base))
        assert sizes == [1, 4]

    @given(st.integers(0, 1000), st.integers(0, 1000))
    def test_components_add_under_product(self, s1, s2):
        A, B = random_arrangement(s1), random_arrangement(s2)
        P = arr.product(A, B)
        assert len(arr.irreducible_components(P)) == (
            len(arr.irreducible_components(A)) + len(arr.irreducible_components(B))
        )

    def test_essential(self):
        assert arr.is_essential(build_type("A3").base)
        assert not arr.is_essential(build_type("A2xE1").base)


class TestTextFormat:
    def test_roundtrip(self, tmp_path):
        A = build_type("H3").base
        path = tmp_path / "h3.txt"
        arr.write(A, path, comments=["H3"])
        B = arr.read(path)
        np.testing.assert_array_equal(A.normals, B.normals)
        np.testing.assert_array_equal(A.witness, B.witness)
        assert A.labels == B.labels

    def test_without_witness(self):
        A = arr.loads("dim 2\n1 0\n0 1\n")
        assert A.margin() > 0

    @pytest.mark.parametrize("text", [
        "1 0\n",
        "dim 2\n1 0 0\n",
        "dim 2\n1 x\n",
        "dim 2\n1 0\nwitness 1 1\n0 1\n",
    ])
    def test_malformed(self, text):
        with pytest.raises(ArrangementError):
            arr.loads(text)
