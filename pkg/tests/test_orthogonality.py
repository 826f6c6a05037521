import math

import numpy as np
import pytest

from banachgeo import orthogonality as orth
from banachgeo import sampling, spaces
from banachgeo.errors import (
    BadEpsilon,
    DependentFunctionals,
    UnsupportedDimension,
    ZeroVector,
)
from conftest import grid_definitional_ok, grid_min_norm_on_line, sphere_grid_max_functional

S2 = math.sqrt(2.0)
PRISM_X = (0.5 + 0.5 / S2, 0.5 / S2, 0.0)
PRISM_Y = (0.5 / S2, 0.5 + 0.5 / S2, 0.0)


def cfg(eps=0.0, **kw):
    return orth.OrthoConfig(epsilon=eps, **kw)


class TestSupportRange:
    def test_cube_corner_range(self, cube):
        lo, hi = orth.support_range(cube, (1, 1, 1), (1, -1, 0))
        assert (lo, hi) == (-1.0, 1.0)

    def test_prism_example_value(self, prism):
        u8 = (math.cos(7 * math.pi / 4), math.sin(7 * math.pi / 4), 1.0)
        lo, hi = orth.support_range(prism, PRISM_X, u8)
        assert lo == pytest.approx(S2 - 1.0, abs=1e-12)
        assert hi == pytest.approx(S2 - 1.0, abs=1e-12)

    def test_euclidean_orthonormal_pair(self):
        sp = spaces.preset_space("lp", 3, 2)
        lo, hi = orth.support_range(sp, (1, 0, 0), (0, 1, 0))
        assert lo == pytest.approx(0.0, abs=1e-15)
        assert hi == pytest.approx(0.0, abs=1e-15)

    def test_zero_vector(self, cube):
        with pytest.raises(ZeroVector):
            orth.support_range(cube, (0, 0, 0), (1, 0, 0))

    def test_l1_interval_matches_enumerated_extremes(self):
        sp = spaces.preset_space("lp", 4, 1.0)
        x = np.array([1.0, 0.0, -2.0, 0.0])
        y = np.array([0.5, 1.0, 0.25, -2.0])
        lo, hi = orth.support_range(sp, x, y)
        ss = spaces.support_set(sp, x)
        vals = [f(y) for f in ss.extremes]
        assert lo == pytest.approx(min(vals), abs=1e-12)
        assert hi == pytest.approx(max(vals), abs=1e-12)


class TestBJOrthogonality:
    def test_zero_y_is_orthogonal(self, cube):
        assert orth.is_bj_orthogonal(cube, (1, 0.5, 0), (0, 0, 0))

    def test_linf2_grid_oracle_case(self):
        sq = spaces.preset_space("linf", 2)
        x, y = (1.0, 0.3), (0.0, 1.0)
        assert grid_min_norm_on_line(sq, x, y) >= spaces.norm(sq, x) - 1e-9
        assert orth.is_bj_orthogonal(sq, x, y)

    def test_lp5_constructed_pair(self):
        sp = spaces.preset_space("lp", 5, 3)
        x = np.ones(5)
        y = np.array([4.0, -1.0, -1.0, -1.0, -1.0])
        assert orth.is_bj_orthogonal(sp, x, y)
        assert grid_min_norm_on_line(sp, x, y) >= spaces.norm(sp, x) - 1e-9

    def test_not_orthogonal_to_itself(self, octagon):
        assert not orth.is_bj_orthogonal(octagon, (1.0, 0.2), (1.0, 0.2))

    def test_existence_constructive(self, rng, octagon, cube, prism):
        for sp in (octagon, cube, prism):
            for _ in range(25):
                x = sampling.random_sphere_point(sp, rng)
                y = orth.bj_orthogonal_direction(sp, x)
                assert spaces.norm(sp, y) > 1e-9
                assert orth.is_bj_orthogonal(sp, x, y)

    def test_exact_mode(self):
        cube2 = spaces.preset_space("linf", 2, mode="exact")
        assert orth.is_bj_orthogonal(cube2, ("1", "1/3"), ("0", "1"))
        assert not orth.is_bj_orthogonal(cube2, ("1", "1/3"), ("1", "1"))


class TestEpsOrthogonality:
    def test_exact_orthogonality_dominates(self, octagon, rng):
        for _ in range(20):
            x = sampling.random_sphere_point(octagon, rng)
            y = orth.bj_orthogonal_direction(octagon, x)
            for eps in (0.0, 0.3, 0.9):
                assert orth.is_eps_orthogonal(octagon, x, y, cfg(eps))

    def test_self_pair_fails_below_one(self, cube, rng):
        for _ in range(10):
            x = sampling.random_sphere_point(cube, rng)
            assert not orth.is_eps_orthogonal(cube, x, x, cfg(0.9))

    def test_prism_threshold_equality(self, prism):
        u8 = np.array([math.cos(7 * math.pi / 4), math.sin(7 * math.pi / 4), 1.0])
        v8 = np.array([u8[0], u8[1], -1.0])
        for t in (0.0, 0.25, 0.5, 1.0):
            u = (1 - t) * u8 + t * v8
            m = orth.eps_orthogonal_margin(prism, PRISM_X, u, cfg(S2 - 1.0))
            assert m >= -1e-12
        # at the segment ends the bound is met with equality
        m_end = orth.eps_orthogonal_margin(prism, PRISM_X, u8, cfg(S2 - 1.0))
        assert m_end == pytest.approx(0.0, abs=1e-12)

    def test_bad_epsilon(self):
        with pytest.raises(BadEpsilon):
            cfg(1.0)
        with pytest.raises(BadEpsilon):
            cfg(-0.1)

    def test_homogeneity(self, octagon, cube, rng):
        for sp in (octagon, cube):
            for _ in range(40):
                x = sampling.random_sphere_point(sp, rng)
                y = sampling.random_sphere_point(sp, rng)
                eps = float(rng.choice([0.1, 0.4, 0.8]))
                base = orth.is_eps_orthogonal(sp, x, y, cfg(eps))
                a, b = rng.uniform(0.2, 5.0, size=2) * rng.choice([-1, 1], size=2)
                scaled = orth.is_eps_orthogonal(sp, a * x, b * y, cfg(eps))
                m = abs(orth.eps_orthogonal_margin(sp, x, y, cfg(eps)))
                if m > 1e-7:
                    assert base == scaled

    def test_monotone_in_eps(self, prism, rng):
        for _ in range(40):
            x = sampling.random_sphere_point(prism, rng)
            y = sampling.random_sphere_point(prism, rng)
            prev = False
            for eps in (0.0, 0.2, 0.4, 0.6, 0.8):
                now = orth.is_eps_orthogonal(prism, x, y, cfg(eps))
                assert now or not prev
                prev = prev or now

    def test_eps0_is_bj(self, octagon, rng):
        for _ in range(60):
            x = sampling.random_sphere_point(octagon, rng)
            y = sampling.random_sphere_point(octagon, rng)
            m = orth.eps_orthogonal_margin(octagon, x, y, cfg(0.0))
            if abs(m) < 1e-8:
                continue
            assert orth.is_eps_orthogonal(octagon, x, y, cfg(0.0)) == \
                orth.is_bj_orthogonal(octagon, x, y, cfg(0.0))


class TestDefinitional:
    def test_linf2_example_thresholds(self):
        sq = spaces.preset_space("linf", 2)
        x, y = (1.0, 0.3), (0.2, 1.0)
        # oracle: dense lambda grid on the deficit
        assert grid_definitional_ok(sq, x, y, 0.19) < -1e-4
        assert grid_definitional_ok(sq, x, y, 0.21) >= -1e-9
        assert not orth.is_eps_orthogonal_definitional(sq, x, y, cfg(0.19))
        assert orth.is_eps_orthogonal_definitional(sq, x, y, cfg(0.21))

    def test_exactly_orthogonal_passes_every_eps(self, octagon, rng):
        x = sampling.random_sphere_point(octagon, rng)
        y = orth.bj_orthogonal_direction(octagon, x)
        for eps in (0.0, 0.5, 0.9):
            assert orth.is_eps_orthogonal_definitional(octagon, x, y, cfg(eps))

    def test_self_pair_fails(self, octagon):
        x = (1.0, 0.0)
        assert not orth.is_eps_orthogonal_definitional(octagon, x, x, cfg(0.5))

    def test_eps_star_matches_support_route(self, prism, rng):
        for _ in range(25):
            x = sampling.random_sphere_point(prism, rng)
            y = sampling.random_sphere_point(prism, rng)
            star = orth.definitional_eps_star(prism, x, y)
            ms = float(orth.min_support_value(prism, x, y)) / spaces.norm(prism, y)
            assert star == pytest.approx(ms, abs=5e-7)

    def test_deficit_sign(self, cube, rng):
        for _ in range(25):
            x = sampling.random_sphere_point(cube, rng)
            y = sampling.random_sphere_point(cube, rng)
            d = orth.definitional_deficit(cube, x, y, cfg(0.7))
            assert d <= 1e-12
            if orth.eps_orthogonal_margin(cube, x, y, cfg(0.7)) > 1e-4:
                assert d >= -1e-9


class TestProcedureEquivalence:
    def test_agreement_across_space_kinds(self, rng):
        fams = [
            spaces.preset_space("regular_2n_gon", 4),
            sampling.random_polyhedral_space(2, 5, rng),
            sampling.random_polyhedral_space(3, 5, rng),
            spaces.preset_space("lp", 4, 1.5),
            spaces.preset_space("lp", 4, 3.0),
        ]
        tol = 1e-9
        for sp in fams:
            disagreements = []
            for _ in range(60):
                x = sampling.random_sphere_point(sp, rng)
                y = sampling.random_sphere_point(sp, rng)
                eps = float(rng.integers(0, 10)) / 10.0
                m1 = orth.eps_orthogonal_margin(sp, x, y, cfg(eps))
                m2 = orth.definitional_margin(sp, x, y, cfg(eps))
                if abs(m1) < 10 * tol or abs(m2) < 10 * tol:
                    continue
                if (m1 >= 0) != (m2 >= 0):
                    disagreements.append((x, y, eps, m1, m2))
            assert not disagreements


class TestHyperspaceThreshold:
    def test_linf2_unit_constants(self):
        sq = spaces.preset_space("linf", 2)
        th = orth.hyperspace_threshold(sq, (1.0, 0.0), (0.0, 1.0))
        assert (th.k1, th.k2, th.eps_pair) == (1.0, 1.0, 0.5)
        # oracle: dense sampling of the kernel slice
        assert sphere_grid_max_functional(sq, (1, 0), (0, 1)) == pytest.approx(
            1.0, abs=1e-6
        )

    def test_linf3_pair(self, cube):
        th = orth.hyperspace_threshold(cube, (1, 0, 0), (0, 1, 0))
        assert th.k1 == pytest.approx(1.0, abs=1e-12)
        assert th.k2 == pytest.approx(1.0, abs=1e-12)

    def test_dependent_functionals_rejected(self, cube):
        with pytest.raises(DependentFunctionals):
            orth.hyperspace_threshold(cube, (1, 0, 0), (-1, 0, 0))

    def test_constants_in_unit_interval(self, octagon, prism, rng):
        for sp in (octagon, prism):
            D = sp.D
            for _ in range(15):
                i, j = rng.integers(0, len(D), size=2)
                if j == i or j == sp.opposite_dual(int(i)):
                    continue
                th = orth.hyperspace_threshold(sp, D[int(i)], D[int(j)])
                assert 0.0 < th.k1 <= 1.0 + 1e-12
                assert 0.0 < th.k2 <= 1.0 + 1e-12
                assert th.eps_pair <= 0.5 + 1e-12

    def test_polyhedral_slice_matches_sampling_oracle(self, prism, rng):
        D = prism.D
        th = orth.hyperspace_threshold(prism, D[0], D[2])
        oracle = sphere_grid_max_functional(prism, D[0], D[2], count=400_000)
        assert th.k1 >= oracle - 1e-6
        assert th.k1 == pytest.approx(oracle, abs=5e-3)

    def test_lp_numeric_maximization(self):
        sp = spaces.preset_space("lp", 3, 2)
        th = orth.hyperspace_threshold(sp, (1.0, 0.0, 0.0), (0.0, 1.0, 0.0))
        # Euclidean case: f restricted to ker g still attains 1
        assert th.k1 == pytest.approx(1.0, abs=1e-6)
        assert th.k2 == pytest.approx(1.0, abs=1e-6)


class TestEpsilonX:
    def test_linf3_override(self, cube):
        d = orth.epsilon_x_detail(cube)
        assert d.value == 1.0
        assert d.overridden
        assert d.formula_value == pytest.approx(0.5, abs=1e-12)

    def test_l1_override(self, cross3):
        d = orth.epsilon_x_detail(cross3)
        assert d.value == 1.0
        assert d.overridden

    def test_octagon_value_positive_below_one(self, octagon):
        v = orth.epsilon_x(octagon)
        assert 0.0 < v <= 1.0
        # frozen from the pairwise slice sweep, cross-checked by the
        # sampling oracle in test_octagon_epsx_oracle
        assert v == pytest.approx(0.3535533905932733, abs=1e-12)

    def test_octagon_epsx_oracle(self, octagon):
        D = octagon.D
        best = math.inf
        for i in range(len(D)):
            for j in range(i + 1, len(D)):
                if j == octagon.opposite_dual(i):
                    continue
                k1 = sphere_grid_max_functional(octagon, D[i], D[j], count=150_000)
                k2 = sphere_grid_max_functional(octagon, D[j], D[i], count=150_000)
                best = min(best, 0.5 * min(k1, k2))
        assert orth.epsilon_x(octagon) == pytest.approx(best, abs=1e-3)

    def test_hexagon_value(self, hexagon):
        assert orth.epsilon_x(hexagon) == pytest.approx(0.5, abs=1e-9)


class TestHyperspaceSearch:
    def test_prism_paper_example(self, prism):
        res = orth.hyperspace_search(
            prism, PRISM_X, PRISM_Y, cfg(S2 - 1.0 + 1e-9)
        )
        cert = res.certificate
        assert cert is not None
        u8 = np.array([math.cos(7 * math.pi / 4), math.sin(7 * math.pi / 4), 1.0])
        v8 = np.array([u8[0], u8[1], -1.0])
        for b in cert.basis:
            assert min(
                min(np.abs(b - t).max(), np.abs(b + t).max()) for t in (u8, v8)
            ) <= 1e-9
        assert max(e[1] for e in cert.checked_extremes) == pytest.approx(
            S2 - 1.0, abs=1e-9
        )
        assert max(e[2] for e in cert.checked_extremes) == pytest.approx(
            S2 - 1.0, abs=1e-9
        )

    def test_cube_smooth_pair_definitive_none(self, cube):
        res = orth.hyperspace_search(cube, (1, 0.2, 0.3), (0.2, 1, 0.3), cfg(0.9))
        assert res.certificate is None
        assert res.definitive
        assert res.obstruction_margin > 1e-9

    def test_shared_functional_gives_kernel_certificate(self, cube):
        res = orth.hyperspace_search(cube, (1, 0.2, 0.3), (1, 0.1, -0.2), cfg(0.0))
        assert res.certificate is not None
        assert res.candidates_tried == 1

    def test_dimension_guard(self, octagon):
        with pytest.raises(UnsupportedDimension):
            orth.hyperspace_search(octagon, (1, 0), (0, 1), cfg(0.5))

    def test_below_threshold_certificate_rejected(self, prism):
        res = orth.hyperspace_search(
            prism, PRISM_X, PRISM_Y,
            cfg(0.25, search_normals=500),
        )
        assert res.certificate is None
        assert not res.definitive


def test_dual_norm(cube, octagon):
    assert orth.dual_norm(cube, (1, 0, 0)) == pytest.approx(1.0)
    assert orth.dual_norm(cube, (1, 1, 1)) == pytest.approx(3.0)
    # octagon dual vertices have dual norm 1
    for f in octagon.D:
        assert orth.dual_norm(octagon, f) == pytest.approx(1.0, abs=1e-12)
