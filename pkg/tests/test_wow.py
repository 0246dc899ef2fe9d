import numpy as np
import pytest

from hipm_lab.errors import ShapeMismatchError
from hipm_lab.measures import DiscreteMeasure, DPParams, EmpiricalLaw, Uniform, empirical_hierarchical_estimator
from hipm_lab.oracles import Cdf, wasserstein1_from_cdfs
from hipm_lab.ot1d import wasserstein1_1d
from hipm_lab.wow import pairwise_wasserstein_matrix, wow_distance


def random_law(rng, n, k_max=8, lo=0.0, hi=1.0):
    members = []
    for _ in range(n):
        k = int(rng.integers(1, k_max + 1))
        members.append(DiscreteMeasure(rng.uniform(lo, hi, k), rng.dirichlet(np.ones(k)), (lo, hi)))
    return EmpiricalLaw(tuple(members), (lo, hi))


def dirac_law(xs):
    return EmpiricalLaw(tuple(DiscreteMeasure.dirac(x) for x in xs))


class TestPairwiseMatrix:
    def test_zero_diagonal(self, backend, rng):
        q = random_law(rng, 5)
        C = pairwise_wasserstein_matrix(q, q).entries
        np.testing.assert_array_equal(np.diag(C), 0.0)
        assert np.all(C[~np.eye(5, dtype=bool)] > 0)

    def test_diracs(self, backend):
        xs, ys = [0.1, 0.5, 0.9], [0.0, 0.7, 0.2]
        C = pairwise_wasserstein_matrix(dirac_law(xs), dirac_law(ys)).entries
        np.testing.assert_allclose(C, np.abs(np.subtract.outer(xs, ys)), atol=1e-15)

    def test_against_cdf_quadrature(self, backend, rng):
        q1, q2 = random_law(rng, 3), random_law(rng, 3)
        C = pairwise_wasserstein_matrix(q1, q2).entries
        for i in range(3):
            for j in range(3):
                p, q = q1.members[i], q2.members[j]
                expected = wasserstein1_from_cdfs(Cdf(p.cdf, 0, 1), Cdf(q.cdf, 0, 1), 1_000_000)
                assert C[i, j] == pytest.approx(expected, abs=1e-5)

    def test_matches_single_pair_routine(self, backend, rng):
        q1, q2 = random_law(rng, 6, 20), random_law(rng, 6, 3)
        C = pairwise_wasserstein_matrix(q1, q2).entries
        for i in range(6):
            for j in range(6):
                assert C[i, j] == pytest.approx(wasserstein1_1d(q1.members[i], q2.members[j]), abs=1e-12)

    def test_mismatch(self, rng):
        with pytest.raises(ShapeMismatchError):
            pairwise_wasserstein_matrix(random_law(rng, 2), random_law(rng, 3))


class TestWowDistance:
    def test_identity(self, backend, rng):
        q = random_law(rng, 7)
        assert wow_distance(q, q) == 0.0

    def test_single_member(self, backend, rng):
        q1, q2 = random_law(rng, 1), random_law(rng, 1)
        assert wow_distance(q1, q2) == pytest.approx(wasserstein1_1d(q1.members[0], q2.members[0]), abs=1e-15)

    def test_diracs_sorted_matching(self, backend):
        xs, ys = [0.9, 0.1, 0.5], [0.2, 0.6, 1.0]
        assert wow_distance(dirac_law(xs), dirac_law(ys)) == pytest.approx((0.1 + 0.1 + 0.1) / 3)

    def test_symmetry_exact(self, backend, rng):
        for _ in range(20):
            q1, q2 = random_law(rng, 6), random_law(rng, 6)
            assert wow_distance(q1, q2) == wow_distance(q2, q1)

    def test_triangle(self, backend, rng):
        for _ in range(30):
            a, b, c = (random_law(rng, 5) for _ in range(3))
            assert wow_distance(a, c) <= wow_distance(a, b) + wow_distance(b, c) + 1e-10

    def test_member_permutation_invariance(self, backend, rng):
        q1, q2 = random_law(rng, 8), random_law(rng, 8)
        shuffled = EmpiricalLaw(tuple(q1.members[i] for i in rng.permutation(8)), q1.domain)
        assert wow_distance(shuffled, q2) == pytest.approx(wow_distance(q1, q2), rel=1e-14)

    def test_backends_agree_on_dp_draws(self):
        from hipm_lab import _backend
        if _backend.compiled is None:
            pytest.skip("extension not built")
        p = DPParams(1.0, Uniform(0, 1))
        q1 = empirical_hierarchical_estimator(p, 20, 300, 1)
        q2 = empirical_hierarchical_estimator(p, 20, 300, 2)
        x1, w1 = q1.packed
        x2, w2 = q2.packed
        np.testing.assert_allclose(_backend.compiled.pairwise_w1(x1, w1, x2, w2),
                                   _backend.fallback.pairwise_w1(x1, w1, x2, w2), atol=1e-12)
