import itertools
import json
import math

import numpy as np
import pytest

from hipm_lab import hipm as hipm_mod
from hipm_lab.errors import NumericalError, ParameterError, ShapeMismatchError
from hipm_lab.hipm import (AscentConfig, LipschitzProfile, evaluate_profile, gradient_G,
                           gradient_Ghat, hipm_lip_distance, mean_lower_bound, objective_G,
                           profile_values, projected_gradient_ascent, scalarize)
from hipm_lab.measures import DiscreteMeasure, EmpiricalLaw, Grid, GriddedLaw, project_law
from hipm_lab.wow import wow_distance


def random_gridded(rng, n, M, grid=None, sparsity=0.5):
    grid = grid or Grid(0.0, 1.0, M)
    w = rng.dirichlet(np.ones(M), size=n)
    w[rng.random((n, M)) < sparsity] = 0.0
    w[np.arange(n), rng.integers(0, M, n)] += 0.1
    return GriddedLaw(grid, w / w.sum(axis=1, keepdims=True))


def random_law(rng, n, k_max=6):
    members = []
    for _ in range(n):
        k = int(rng.integers(1, k_max + 1))
        members.append(DiscreteMeasure(rng.uniform(0, 1, k), rng.dirichlet(np.ones(k)), (0, 1)))
    return EmpiricalLaw(tuple(members), (0, 1))


def brute_G(q1, q2, f):
    s1, s2 = q1.weights @ f, q2.weights @ f
    n = q1.n
    return min(math.fsum(abs(s1[i] - s2[p[i]]) for i in range(n)) / n
               for p in itertools.permutations(range(n)))


def dense_A(M, dx):
    A = np.zeros((M, M - 1))
    for q in range(M):
        A[q, :q] = dx
    return A


class TestScalarize:
    def test_zero(self, rng):
        law = random_gridded(rng, 4, 6)
        np.testing.assert_array_equal(scalarize(law, np.zeros(6)), 0.0)

    def test_column(self, rng):
        law = random_gridded(rng, 4, 6)
        np.testing.assert_array_equal(scalarize(law, np.eye(6)[2]), law.weights[:, 2])

    def test_two_point_mean(self):
        law = GriddedLaw(Grid(0, 1, 2), [[0.5, 0.5]])
        assert scalarize(law, [0.0, 1.0])[0] == 0.5

    def test_mismatch(self, rng):
        with pytest.raises(ShapeMismatchError):
            scalarize(random_gridded(rng, 2, 5), np.zeros(4))


class TestObjective:
    def test_identical(self, rng):
        q = random_gridded(rng, 5, 8)
        value, perm = objective_G(q, q, rng.normal(size=8))
        assert value == 0.0

    def test_constant_f(self, rng):
        q1, q2 = random_gridded(rng, 5, 8), random_gridded(rng, 5, 8)
        assert objective_G(q1, q2, np.full(8, 3.7))[0] == pytest.approx(0.0, abs=1e-14)

    def test_brute_force_three(self, rng):
        for _ in range(50):
            q1, q2 = random_gridded(rng, 3, 7), random_gridded(rng, 3, 7)
            f = profile_values(rng.uniform(-1, 1, 6), q1.grid.dx)
            assert objective_G(q1, q2, f)[0] == pytest.approx(brute_G(q1, q2, f), abs=1e-15)

    def test_offset_and_sign(self, rng):
        for _ in range(50):
            q1, q2 = random_gridded(rng, 6, 9), random_gridded(rng, 6, 9)
            f = profile_values(rng.uniform(-1, 1, 8), q1.grid.dx)
            g = objective_G(q1, q2, f)[0]
            assert abs(g - objective_G(q1, q2, f + rng.normal())[0]) <= 1e-12
            assert objective_G(q1, q2, -f)[0] == pytest.approx(g, abs=1e-15)

    def test_grid_mismatch(self, rng):
        with pytest.raises(ShapeMismatchError):
            objective_G(random_gridded(rng, 3, 5), random_gridded(rng, 3, 6), np.zeros(5))
        with pytest.raises(ShapeMismatchError):
            objective_G(random_gridded(rng, 3, 5), random_gridded(rng, 4, 5), np.zeros(5))


def _facet(q1, q2, f):
    s1, s2 = q1.weights @ f, q2.weights @ f
    o1, o2 = np.argsort(s1, kind="stable"), np.argsort(s2, kind="stable")
    return o1.tolist(), o2.tolist(), np.sign(s1[o1] - s2[o2]).tolist()


def stable_point(q1, q2, f, h, direction):
    """True when ordering and signs are unchanged and strict across the stencil."""
    s1, s2 = q1.weights @ f, q2.weights @ f
    if np.any(np.diff(np.sort(s1)) == 0) or np.any(np.diff(np.sort(s2)) == 0):
        return False
    centre = _facet(q1, q2, f)
    if 0.0 in centre[2]:
        return False
    return _facet(q1, q2, f + h * direction) == centre == _facet(q1, q2, f - h * direction)


def fd_agreement(q1, q2, rng, points=100, h=1e-6):
    M = q1.grid.M
    good = stable = 0
    for _ in range(points):
        f = profile_values(rng.uniform(-1, 1, M - 1), q1.grid.dx)
        delta = rng.normal(size=M)
        if not stable_point(q1, q2, f, h, delta):
            continue
        stable += 1
        fd = (objective_G(q1, q2, f + h * delta)[0] - objective_G(q1, q2, f - h * delta)[0]) / (2 * h)
        an = float(gradient_G(q1, q2, f) @ delta)
        if abs(fd - an) <= 1e-5 * max(1.0, abs(an)):
            good += 1
    return good, stable


class TestGradient:
    def test_identical_laws(self, rng):
        q = random_gridded(rng, 4, 7)
        np.testing.assert_array_equal(gradient_G(q, q, rng.normal(size=7)), 0.0)

    def test_single_member(self, rng):
        q1, q2 = random_gridded(rng, 1, 7), random_gridded(rng, 1, 7)
        f = rng.normal(size=7)
        diff = q1.weights[0] - q2.weights[0]
        np.testing.assert_allclose(gradient_G(q1, q2, f), diff * np.sign(diff @ f), atol=1e-15)

    @pytest.mark.parametrize("n, M", [(3, 5), (10, 16), (40, 32)])
    def test_finite_differences(self, rng, n, M):
        q1, q2 = random_gridded(rng, n, M, sparsity=0.0), random_gridded(rng, n, M, sparsity=0.0)
        good, stable = fd_agreement(q1, q2, rng)
        assert stable >= 90
        assert good == stable

    def test_chain_zero(self, rng, monkeypatch):
        q = random_gridded(rng, 3, 6)
        prof = LipschitzProfile(q.grid, rng.uniform(-1, 1, 5))
        np.testing.assert_array_equal(gradient_Ghat(q, q, prof), 0.0)

    def test_chain_last_unit_vector(self):
        dx = 0.25
        grad = np.zeros(5)
        grad[-1] = 1.0
        np.testing.assert_allclose(hipm_mod._chain(grad, dx), np.full(4, dx))

    def test_chain_dense_oracle(self, rng):
        for M in (2, 3, 9, 40):
            dx = 1.0 / (M - 1)
            grad = rng.normal(size=M)
            np.testing.assert_allclose(hipm_mod._chain(grad, dx), dense_A(M, dx).T @ grad, atol=1e-13)
            g = rng.uniform(-1, 1, M - 1)
            np.testing.assert_allclose(profile_values(g, dx), dense_A(M, dx) @ g, atol=1e-13)

    def test_ghat_matches_dense(self, rng):
        q1, q2 = random_gridded(rng, 6, 10), random_gridded(rng, 6, 10)
        prof = LipschitzProfile(q1.grid, rng.uniform(-1, 1, 9))
        expected = dense_A(10, q1.grid.dx).T @ gradient_G(q1, q2, prof.f)
        np.testing.assert_allclose(gradient_Ghat(q1, q2, prof), expected, atol=1e-14)


class TestProfile:
    def test_box(self):
        with pytest.raises(ParameterError):
            LipschitzProfile(Grid(0, 1, 3), [1.5, 0.0])

    def test_lipschitz(self, rng):
        grid = Grid(-2, 3, 41)
        prof = LipschitzProfile(grid, rng.uniform(-1, 1, 40))
        assert prof.f[0] == 0.0
        assert np.all(np.abs(np.diff(prof.f)) <= grid.dx * (1 + 1e-12))

    def test_identity(self):
        grid = Grid(-1, 1, 11)
        np.testing.assert_allclose(LipschitzProfile.identity(grid).f, grid.points + 1, atol=1e-14)


class TestAscent:
    def test_identical_laws(self, rng):
        q = random_gridded(rng, 6, 12)
        assert projected_gradient_ascent(q, q, AscentConfig(n_init=3)).value == 0.0

    def test_beats_identity_and_initializations(self, rng):
        for _ in range(10):
            q1, q2 = random_gridded(rng, 8, 20), random_gridded(rng, 8, 20)
            res = projected_gradient_ascent(q1, q2, AscentConfig(n_init=4, seed=3))
            assert res.value >= mean_lower_bound(q1.to_law(), q2.to_law()) - 1e-12
            starts = [v for (r, it, v, t) in res.trace if it == 0]
            assert res.value >= max(starts)

    def test_monotone_and_feasible(self, rng):
        q1, q2 = random_gridded(rng, 12, 25), random_gridded(rng, 12, 25)
        res = projected_gradient_ascent(q1, q2, AscentConfig(n_init=5, seed=1))
        for r in range(5):
            values = [v for (rr, it, v, t) in res.trace if rr == r]
            assert all(b >= a for a, b in zip(values, values[1:]))
        for prof in res.restart_profiles:
            assert np.all(np.abs(prof.g) <= 1.0)

    def test_unpacks_and_is_deterministic(self, rng):
        q1, q2 = random_gridded(rng, 7, 15), random_gridded(rng, 7, 15)
        value, profile = projected_gradient_ascent(q1, q2, AscentConfig(n_init=3, seed=9))
        again = projected_gradient_ascent(q1, q2, AscentConfig(n_init=3, seed=9))
        assert value == again.value
        np.testing.assert_array_equal(profile.g, again.profile.g)
        assert objective_G(q1, q2, profile.f)[0] == pytest.approx(value, abs=1e-15)

    def test_raw_armijo_rule(self, rng):
        q1, q2 = random_gridded(rng, 7, 15), random_gridded(rng, 7, 15)
        res = projected_gradient_ascent(q1, q2, AscentConfig(n_init=3, armijo="raw"))
        assert res.value >= mean_lower_bound(q1.to_law(), q2.to_law()) - 1e-12

    def test_non_finite_objective_raises(self, rng, monkeypatch):
        q1, q2 = random_gridded(rng, 3, 5), random_gridded(rng, 3, 5)
        monkeypatch.setattr(hipm_mod._Problem, "value_and_perm",
                            lambda self, g: (math.nan, np.zeros(3), np.zeros(3), np.arange(3)))
        with pytest.raises(NumericalError) as info:
            projected_gradient_ascent(q1, q2, AscentConfig(n_init=1))
        assert info.value.diagnostics["restart"] == 0

    def test_trace_csv(self, rng, tmp_path):
        q1, q2 = random_gridded(rng, 4, 9), random_gridded(rng, 4, 9)
        res = projected_gradient_ascent(q1, q2, AscentConfig(n_init=2))
        path = tmp_path / "trace.csv"
        res.write_trace_csv(path)
        lines = path.read_text().splitlines()
        assert lines[0] == "restart,iteration,value,step"
        assert len(lines) == len(res.trace) + 1


class TestConfig:
    def test_json_roundtrip(self):
        cfg = AscentConfig(n_init=3, n_step=10, epsilon=1e-5, seed=4)
        assert AscentConfig.from_json(cfg.to_json()) == cfg
        assert json.loads(cfg.to_json())["n_init"] == 3

    @pytest.mark.parametrize("kwargs", [dict(n_init=0), dict(n_step=0), dict(epsilon=-1.0),
                                        dict(armijo="wolfe")])
    def test_invalid(self, kwargs):
        with pytest.raises(ParameterError):
            AscentConfig(**kwargs)


class TestDistances:
    def test_identical(self, backend, rng):
        q = random_law(rng, 6)
        assert hipm_lip_distance(q, q, Grid(0, 1, 16)) == 0.0

    def test_dirac_on_grid(self):
        grid = Grid(0, 1, 11)
        q1 = EmpiricalLaw((DiscreteMeasure.dirac(0.2, (0, 1)),))
        q2 = EmpiricalLaw((DiscreteMeasure.dirac(0.7, (0, 1)),))
        assert hipm_lip_distance(q1, q2, grid) == pytest.approx(0.5, abs=1e-12)
        assert hipm_lip_distance(q1, q2, grid, evaluate="grid") == pytest.approx(0.5, abs=1e-12)

    def test_sandwich(self, backend, rng):
        for _ in range(25):
            q1, q2 = random_law(rng, 5), random_law(rng, 5)
            grid = Grid(0, 1, 21)
            cfg = AscentConfig(n_init=3)
            lb, w = mean_lower_bound(q1, q2), wow_distance(q1, q2)
            for mode in ("original", "grid"):
                h = hipm_lip_distance(q1, q2, grid, cfg, evaluate=mode)
                assert h <= w + grid.dx + 1e-9
            assert lb <= hipm_lip_distance(q1, q2, grid, cfg)

    def test_evaluate_profile_identity_is_mean_bound(self, rng):
        q1, q2 = random_law(rng, 7), random_law(rng, 7)
        prof = LipschitzProfile.identity(Grid(0, 1, 9))
        assert evaluate_profile(q1, q2, prof) == pytest.approx(mean_lower_bound(q1, q2), abs=1e-14)

    def test_unknown_mode(self, rng):
        q = random_law(rng, 2)
        with pytest.raises(ParameterError):
            hipm_lip_distance(q, q, evaluate="exact")

    def test_mismatch(self, rng):
        with pytest.raises(ShapeMismatchError):
            hipm_lip_distance(random_law(rng, 2), random_law(rng, 3))


class TestMeanLowerBound:
    def test_identical(self, rng):
        q = random_law(rng, 5)
        assert mean_lower_bound(q, q) == 0.0

    def test_diracs(self):
        q1 = EmpiricalLaw(tuple(DiscreteMeasure.dirac(x) for x in (0.1, 0.8, 0.4)))
        q2 = EmpiricalLaw(tuple(DiscreteMeasure.dirac(x) for x in (0.5, 0.0, 0.9)))
        # sorted matching 0.1-0.0, 0.4-0.5, 0.8-0.9
        assert mean_lower_bound(q1, q2) == pytest.approx(0.1, abs=1e-15)
