import numpy as np
import pytest

from banachgeo import cones, sampling, spaces
from banachgeo.errors import UnsupportedSpace, ZeroVector


class TestLabels:
    def test_facet_midpoint_is_smooth(self, octagon):
        mid = octagon.V[list(octagon.incidence[0])].mean(axis=0)
        assert len(cones.extreme_support_labels(octagon, mid)) == 1

    def test_polygon_vertex_has_two_labels(self, octagon):
        labels = cones.extreme_support_labels(octagon, octagon.V[1])
        assert len(labels) == 2

    def test_cube_corner_three_labels(self, cube):
        labels = cones.extreme_support_labels(cube, (1, 1, 1))
        assert sorted(labels) == [0, 1, 2]

    def test_zero_vector(self, cube):
        with pytest.raises(ZeroVector):
            cones.extreme_support_labels(cube, (0, 0, 0))

    def test_lp_space_rejected(self):
        sp = spaces.preset_space("lp", 3, 2)
        with pytest.raises(UnsupportedSpace):
            cones.extreme_support_labels(sp, (1, 0, 0))

    def test_label_count_equals_support_count(self, prism, rng):
        for _ in range(200):
            x = rng.normal(size=3)
            if spaces.norm(prism, x) < 1e-9:
                continue
            labels = cones.extreme_support_labels(prism, x)
            assert labels
            assert len(labels) == len(spaces.support_set(prism, x))

    def test_random_points_are_generically_smooth(self, prism, rng):
        smooth = 0
        for _ in range(100):
            x = rng.normal(size=3)
            if spaces.norm(prism, x) < 1e-9:
                continue
            smooth += len(cones.extreme_support_labels(prism, x)) == 1
        assert smooth >= 95


class TestConicalHull:
    def test_scaled_facet_midpoint(self, octagon):
        mid = octagon.V[list(octagon.incidence[0])].mean(axis=0)
        assert cones.conical_hull_membership(octagon, 0, 3.0 * mid)

    def test_facet_vertex_excluded(self, octagon):
        v = octagon.V[octagon.incidence[0][0]]
        assert not cones.conical_hull_membership(octagon, 0, v)

    def test_antipodal_excluded(self, octagon):
        mid = octagon.V[list(octagon.incidence[0])].mean(axis=0)
        assert not cones.conical_hull_membership(octagon, 0, -mid)

    def test_agrees_with_singleton_label(self, cube, rng):
        for _ in range(300):
            x = rng.normal(size=3)
            if spaces.norm(cube, x) < 1e-9:
                continue
            labels = cones.extreme_support_labels(cube, x)
            for j in range(len(cube.dual_vertices)):
                assert cones.conical_hull_membership(cube, j, x) == (labels == [j])


class TestNeighbors:
    def test_polygon_facets_have_two_neighbors(self, octagon, hexagon):
        for sp in (octagon, hexagon):
            for j in range(len(sp.dual_vertices)):
                assert len(cones.neighbors(sp, j)) == 2

    def test_cube_facet_neighbors(self, cube):
        for j in range(6):
            nb = cones.neighbors(cube, j)
            assert len(nb) == 4
            assert cube.opposite_dual(j) not in nb

    def test_prism_side_and_cap(self, prism):
        sides = [j for j, inc in enumerate(prism.incidence) if len(inc) == 4]
        caps = [j for j, inc in enumerate(prism.incidence) if len(inc) == 8]
        for j in sides:
            assert len(cones.neighbors(prism, j)) == 4
        for j in caps:
            assert len(cones.neighbors(prism, j)) == 8

    def test_central_symmetry_of_counts(self, prism, octagon, cross3):
        for sp in (prism, octagon, cross3):
            for j in range(len(sp.dual_vertices)):
                opp = sp.opposite_dual(j)
                assert len(cones.neighbors(sp, j)) == len(cones.neighbors(sp, opp))


class TestRegionProperties:
    @pytest.mark.parametrize(
        "preset,arg",
        [("regular_2n_gon", 4), ("linf", 3), ("l1", 3), ("octagonal_prism", None)],
    )
    def test_all_five_checks_pass(self, preset, arg):
        sp = (
            spaces.preset_space(preset, arg)
            if arg is not None
            else spaces.preset_space(preset)
        )
        for j in range(len(sp.dual_vertices)):
            report = cones.region_properties_check(sp, j, samples=150, seed=11)
            assert report.passed, (j, [c for c in report.checks if not c.passed])
            names = [c.name for c in report.checks]
            assert names == [
                "nonempty", "open", "cone", "covering", "antipodal_disjoint",
            ]
            assert all(c.margin > 0 for c in report.checks)

    def test_cube_positive_combination_keeps_label(self, cube):
        a = np.array([1.0, 0.2, 0.3])
        b = np.array([2.0, 0.1, -0.4])
        assert cones.extreme_support_labels(cube, a + b) == [0]

    def test_openness_radius_from_inradius(self, octagon):
        import math

        assert cones.facet_inradius(octagon, 0) == pytest.approx(
            math.sin(math.pi / 8), abs=1e-12
        )

    def test_random_space_regions(self, rng):
        sp = sampling.random_polyhedral_space(3, 5, rng)
        for j in range(len(sp.dual_vertices)):
            report = cones.region_properties_check(sp, j, samples=80, seed=3)
            assert report.passed


def test_representative_is_smooth_with_own_label(prism):
    for j in range(len(prism.dual_vertices)):
        rep = prism.representative(j)
        assert cones.extreme_support_labels(prism, rep) == [j]
