import math

import numpy as np
import pytest

from banachgeo import operators as ops
from banachgeo import orthogonality as orth
from banachgeo import sampling, spaces
from banachgeo.errors import (
    DimensionMismatch,
    HypothesisUnmet,
    OutOfRange,
    TooFewFunctionals,
    UnsupportedSpace,
    ZeroOperator,
    ZeroVector,
)

S2 = math.sqrt(2.0)


def rotation(theta, scale=1.0):
    c, s = math.cos(theta), math.sin(theta)
    return scale * np.array([[c, -s], [s, c]])


class TestPreservesAt:
    def test_identity_everywhere(self, octagon, rng):
        T = ops.Operator(np.eye(2), octagon, octagon)
        for _ in range(10):
            x = sampling.random_sphere_point(octagon, rng)
            v = ops.preserves_eps_at(T, x, 0.3)
            assert v.holds and v.method == "exact"

    def test_octagon_example_fails_below_threshold_at_u2(self):
        T = ops.counterexample_operator("octagon_to_linf2")
        u2 = np.array([1 / S2, 1 / S2])
        v = ops.preserves_eps_at(T, u2, 0.40)
        assert not v.holds
        assert v.witness is not None
        x, y, margin = v.witness
        assert margin < -1e-8
        assert orth.is_bj_orthogonal(T.domain, x, y)
        assert not orth.is_eps_orthogonal(
            T.codomain, T(x), T(y), orth.OrthoConfig(epsilon=0.40)
        )

    def test_octagon_example_holds_above_threshold_at_u2(self):
        T = ops.counterexample_operator("octagon_to_linf2")
        u2 = np.array([1 / S2, 1 / S2])
        v = ops.preserves_eps_at(T, u2, 0.45)
        assert v.holds and v.method == "exact"

    def test_threshold_bisection_at_u2(self):
        T = ops.counterexample_operator("octagon_to_linf2")
        u2 = np.array([1 / S2, 1 / S2])
        eps_star = ops.min_preserving_eps_at(T, u2, atol=1e-8)
        assert eps_star == pytest.approx(S2 - 1.0, abs=1e-6)

    def test_smooth_3d_point_is_exact(self, prism):
        T = ops.Operator(np.diag([1.0, 1.0, 0.7]), prism, prism)
        rep = prism.representative(0)
        v = ops.preserves_eps_at(T, rep, 0.5)
        assert v.method == "exact"

    def test_published_linf3_map_fails_at_corner(self):
        # the published component (eps*x, x-y, y-z) leaves room for
        # y = (1, 1/2, 0): orthogonal to (1,1,1) via the third kernel but
        # its image concentrates on the first coordinate
        T = ops.counterexample_operator("linf3_local", eps=0.5)
        u = np.array([1.0, 1.0, 1.0])
        y = np.array([1.0, 0.5, 0.0])
        assert orth.is_bj_orthogonal(T.domain, u, y)
        assert not orth.is_eps_orthogonal(
            T.codomain, T(u), T(y), orth.OrthoConfig(epsilon=0.5)
        )
        v = ops.preserves_eps_at(T, u, 0.5)
        assert not v.holds
        assert v.witness is not None

    def test_anchored_linf3_variant_holds_at_corner(self, cube):
        for eps in (0.25, 0.5, 0.9):
            M = np.array([[eps, 0, 0], [1.0, -1.0, 0.0], [1.0, 0.0, -1.0]])
            T = ops.Operator(M, cube, cube)
            v = ops.preserves_eps_at(T, (1.0, 1.0, 1.0), eps)
            assert v.holds

    def test_support_count_drop_at_corner(self):
        T = ops.counterexample_operator("linf3_local", eps=0.5)
        u = (1.0, 1.0, 1.0)
        assert len(spaces.support_set(T.domain, u)) == 3
        assert len(spaces.support_set(T.codomain, T(u))) == 1

    def test_zero_operator_rejected(self, octagon):
        with pytest.raises(ZeroOperator):
            ops.preserves_eps_at(
                ops.Operator(np.zeros((2, 2)), octagon, octagon), (1, 0), 0.5
            )

    def test_zero_point_rejected(self, octagon):
        T = ops.Operator(np.eye(2), octagon, octagon)
        with pytest.raises(ZeroVector):
            ops.preserves_eps_at(T, (0.0, 0.0), 0.5)

    def test_singular_image_passes_vacuously(self, octagon):
        T = ops.Operator(np.array([[1.0, 0.0], [0.0, 0.0]]), octagon, octagon)
        v = ops.preserves_eps_at(T, (0.0, 1.0), 0.5)  # Tx = 0
        assert v.holds


class TestPreservesGlobal:
    def test_octagon_example_holds_at_half(self):
        T = ops.counterexample_operator("octagon_to_linf2")
        v = ops.preserves_eps_global(T, 0.5)
        assert v.holds and v.method == "exact"
        assert v.margin == pytest.approx(0.5 - (S2 - 1.0), abs=1e-9)

    def test_octagon_example_fails_at_040(self):
        T = ops.counterexample_operator("octagon_to_linf2")
        v = ops.preserves_eps_global(T, 0.40)
        assert not v.holds
        assert v.witness is not None
        x, y, margin = v.witness
        assert orth.is_bj_orthogonal(T.domain, x, y)
        assert margin < -1e-8

    def test_scalar_isometries_preserve_everything(self, octagon, cube, rng):
        for eps in (0.0, 0.3, 0.7):
            Tocta = sampling.dihedral_element(octagon, 3, reflect=True, scale=2.0)
            assert ops.preserves_eps_global(Tocta, eps).holds
            M = sampling.random_scaled_signed_permutation(3, rng)
            Tcube = ops.Operator(M, cube, cube)
            assert ops.preserves_eps_global(
                Tcube, eps, ops.OpConfig(samples=40)
            ).holds

    def test_full_rank_whenever_preserving(self, octagon, cube, rng):
        # injectivity necessity, checked on every operator that passes
        candidates = [
            sampling.dihedral_element(octagon, 1, scale=1.5),
            ops.Operator(rotation(0.3), octagon, octagon),
            ops.Operator(sampling.random_scaled_signed_permutation(3, rng), cube, cube),
        ]
        for T in candidates:
            v = ops.preserves_eps_global(T, 0.5, ops.OpConfig(samples=40))
            if v.holds:
                n = T.domain.dim
                assert np.linalg.matrix_rank(T.matrix, tol=1e-9) == n


class TestWitnessSearch:
    def test_isometry_yields_none(self, octagon):
        T = sampling.dihedral_element(octagon, 2, scale=3.0)
        assert ops.witness_search_nonpreservation(T, 0.5, budget=4000, seed=1) is None

    def test_hexagon_shrink_found(self, hexagon):
        T = ops.Operator(np.diag([1.0, 0.7]), hexagon, hexagon)
        pair = ops.witness_search_nonpreservation(T, 0.2, budget=100_000, seed=0)
        assert pair is not None
        ok, margin = ops.verify_witness(T, pair[0], pair[1], 0.2, 1e-9)
        assert ok and margin < -1e-8

    def test_random_cube_operators_all_caught(self, cube, rng):
        for k in range(20):
            T = sampling.random_operator(cube, cube, rng)
            if ops.is_scalar_isometry(T) is not None:
                continue
            pair = ops.witness_search_nonpreservation(T, 0.9, budget=100_000, seed=k)
            assert pair is not None
            ok, _ = ops.verify_witness(T, pair[0], pair[1], 0.9, 1e-9)
            assert ok


class TestScalarIsometry:
    def test_scaled_rotation(self, octagon):
        T = ops.Operator(rotation(math.pi / 4, scale=3.0), octagon, octagon)
        assert ops.is_scalar_isometry(T) == pytest.approx(3.0, abs=1e-9)

    def test_generic_rotation_is_not(self, octagon):
        T = ops.Operator(rotation(0.4), octagon, octagon)
        assert ops.is_scalar_isometry(T) is None

    def test_lp_counterexample_not_isometry(self):
        T = ops.counterexample_operator("lp", n=5, p=3, eps=0.5)
        assert ops.is_scalar_isometry(T) is None

    def test_lp_signed_permutation(self, rng):
        sp = spaces.preset_space("lp", 4, 3)
        M = sampling.random_scaled_signed_permutation(4, rng)
        k = abs(M).max()
        T = ops.Operator(M, sp, sp)
        assert ops.is_scalar_isometry(T) == pytest.approx(k, abs=1e-9)

    def test_l2_orthogonal_matrix(self, rng):
        sp = spaces.preset_space("lp", 3, 2)
        Q, _ = np.linalg.qr(rng.normal(size=(3, 3)))
        T = ops.Operator(2.5 * Q, sp, sp)
        assert ops.is_scalar_isometry(T) == pytest.approx(2.5, abs=1e-9)
        T2 = ops.Operator(Q @ np.diag([1.0, 1.0, 0.5]), sp, sp)
        assert ops.is_scalar_isometry(T2) is None

    def test_dimension_guard(self, octagon, cube):
        T = ops.Operator(np.zeros((3, 2)), octagon, cube)
        with pytest.raises(DimensionMismatch):
            ops.is_scalar_isometry(T)

    def test_smoothness_order_invariance_under_isometry(self, octagon, rng):
        T = sampling.dihedral_element(octagon, 5, reflect=True, scale=1.7)
        for _ in range(30):
            x = sampling.random_sphere_point(octagon, rng)
            assert spaces.smoothness_order(octagon, x) == spaces.smoothness_order(
                octagon, T(x)
            )


class TestFacetImageMap:
    def test_octagon_into_linf2_two_to_one(self):
        T = ops.counterexample_operator("octagon_to_linf2")
        report = ops.facet_image_map(T, 0.5, ops.OpConfig(seed=3))
        assert all(e.consistent for e in report.entries.values())
        assert report.surjective
        assert not report.injective
        hits = {}
        for e in report.entries.values():
            hits[e.image_label] = hits.get(e.image_label, 0) + 1
        assert sorted(hits.values()) == [2, 2, 2, 2]

    def test_rotation_permutes_octagon_facets(self, octagon):
        T = sampling.dihedral_element(octagon, 1)
        report = ops.facet_image_map(T, 0.2, ops.OpConfig(seed=3))
        assert report.surjective and report.injective

    def test_local_example_flagged_inconsistent(self):
        T = ops.counterexample_operator("linf3_local", eps=0.5)
        report = ops.facet_image_map(T, 0.5, ops.OpConfig(seed=3))
        assert not all(e.consistent for e in report.entries.values())


class TestCardinalityChecks:
    def test_rotation_passes(self, octagon):
        T = sampling.dihedral_element(octagon, 1, scale=1.3)
        report = ops.cardinality_checks(T, 0.1, ops.OpConfig(samples=60))
        assert report.passed
        assert report.order_hypothesis_holds

    def test_scaled_identity_on_cube(self, cube):
        T = ops.Operator(2.0 * np.eye(3), cube, cube)
        report = ops.cardinality_checks(T, 0.3, ops.OpConfig(samples=60))
        assert report.passed

    def test_facet_count_mismatch_raises(self, octagon):
        sq = spaces.preset_space("linf", 2)
        T = ops.counterexample_operator("octagon_to_linf2")
        assert len(octagon.dual_vertices) != len(sq.dual_vertices)
        with pytest.raises(HypothesisUnmet):
            ops.cardinality_checks(T, 0.1)

    def test_nonpreserving_raises_unless_skipped(self):
        T = ops.counterexample_operator("linf3_local", eps=0.5)
        with pytest.raises(HypothesisUnmet):
            ops.cardinality_checks(T, 0.5)
        report = ops.cardinality_checks(T, 0.5, skip_hypothesis_check=True)
        assert report.count_violations  # the corner (1,1,1) drops 3 -> 1


class TestThreeFunctionalIndependence:
    def test_cube_corner(self, cube):
        assert ops.three_functional_independence(cube, (1, 1, 1))

    def test_linf4_corner_all_triples(self):
        sp = spaces.preset_space("linf", 4)
        assert ops.three_functional_independence(sp, (1, 1, 1, 1))
        assert ops.first_dependent_triple(sp, (1, 1, 1, 1)) is None

    def test_planar_bound(self, octagon):
        with pytest.raises(TooFewFunctionals):
            ops.three_functional_independence(octagon, (1.0, 0.0))


class TestConsecutiveVertex:
    def test_rotation(self, hexagon):
        T = sampling.dihedral_element(hexagon, 2)
        report = ops.consecutive_vertex_check(hexagon, T, 0.2)
        assert report.passed
        assert report.max_scalar_spread <= 1e-9

    def test_scaled_reflection(self, hexagon):
        T = sampling.dihedral_element(hexagon, 1, reflect=True, scale=2.0)
        report = ops.consecutive_vertex_check(hexagon, T, 0.2)
        assert report.passed
        scalars = [s for _, _, s in report.vertex_images]
        assert max(scalars) == pytest.approx(2.0, abs=1e-9)

    def test_shrink_flags_hypothesis(self, hexagon):
        T = ops.Operator(np.diag([1.0, 0.7]), hexagon, hexagon)
        report = ops.consecutive_vertex_check(hexagon, T, 0.2)
        assert not report.hypothesis_met

    def test_non_polygon_rejected(self, cube):
        T = ops.Operator(np.eye(3), cube, cube)
        with pytest.raises(UnsupportedSpace):
            ops.consecutive_vertex_check(cube, T, 0.2)


class TestCounterexampleFamilies:
    def test_lp_matrix(self):
        T = ops.counterexample_operator("lp", n=5, p=3, eps=0.5)
        np.testing.assert_allclose(
            np.diag(T.matrix), [1 - 0.5 / 3, 1, 1, 1, 1]
        )
        assert T.domain.p == 3

    def test_l1_matrix(self):
        T = ops.counterexample_operator("l1", n=4, eps=0.25)
        np.testing.assert_allclose(np.diag(T.matrix), [0.75, 1, 1, 1])
        assert T.domain.p == 1.0

    def test_octagon_map(self):
        T = ops.counterexample_operator("octagon_to_linf2")
        np.testing.assert_allclose(T.matrix, [[1, -1], [1, 1]])
        np.testing.assert_allclose(T(np.array([1.0, 0.0])), [1.0, 1.0])
        np.testing.assert_allclose(T(np.array([0.0, 1.0])), [-1.0, 1.0])

    def test_out_of_range(self):
        with pytest.raises(OutOfRange):
            ops.counterexample_operator("lp", n=5, p=3, eps=1.5)
        with pytest.raises(OutOfRange):
            ops.counterexample_operator("nope")

    @pytest.mark.parametrize("p,family", [(1.5, "lp"), (3.0, "lp"), (1.0, "l1")])
    def test_orthogonal_pairs_stay_approximately_orthogonal(self, p, family, rng):
        sp = spaces.preset_space("lp", 5, p)
        for eps in (0.25, 0.75):
            if family == "l1":
                T = ops.counterexample_operator("l1", n=5, eps=eps)
            else:
                T = ops.counterexample_operator("lp", n=5, p=p, eps=eps)
            cfg = orth.OrthoConfig(epsilon=eps)
            for _ in range(100):
                x, y = sampling.random_bj_orthogonal_pair(sp, rng)
                m = orth.eps_orthogonal_margin(sp, T(x), T(y), cfg)
                assert m >= -1e-9
