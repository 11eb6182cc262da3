import numpy as np
import pytest

from hadabound.errors import DimensionError, DomainError
from hadabound.kernels import (
    cosine_gram,
    cosine_rank_two_split,
    entrywise_power_preserver_check,
    gaussian_gram,
    gaussian_novak_matrix,
    is_real_correlation,
    novak_matrix,
    product_kernel_lower_bound,
)
from hadabound.matcore import hadamard, numerical_rank, psd_certificate

from conftest import EPS, correlation, eig_scale, min_eig

E2 = np.ones((2, 2))


def certified(M):
    assert min_eig(M) >= -1e-8 * eig_scale(M)
    return psd_certificate(M).accepted


class TestCosine:
    def test_single(self):
        np.testing.assert_array_equal(cosine_gram([0.0]), [[1]])

    def test_quarter_turn(self):
        np.testing.assert_allclose(cosine_gram([0, np.pi / 2]), np.eye(2), atol=10 * EPS)

    def test_rank_two_identity(self, rng):
        for _ in range(50):
            x = rng.uniform(-10, 10, int(rng.integers(1, 13)))
            u, v = cosine_rank_two_split(x)
            G = cosine_gram(x)
            assert np.max(np.abs(G - np.outer(u, u) - np.outer(v, v))) <= 1e3 * EPS
            assert numerical_rank(G) <= 2

    def test_empty(self):
        with pytest.raises(DimensionError):
            cosine_gram([])


class TestNovak:
    def test_single_point(self):
        for k in (1, 3):
            np.testing.assert_array_equal(novak_matrix(np.zeros((k, 1))), [[0]])

    def test_hand_example(self):
        N = novak_matrix([[0, np.pi / 2]])
        np.testing.assert_allclose(N, [[0.5, -0.5], [-0.5, 0.5]], atol=10 * EPS)
        np.testing.assert_allclose(np.linalg.eigvalsh(N), [0, 1], atol=10 * EPS)

    def test_k1_matches_hadamard(self, rng):
        x = rng.uniform(-3, 3, 5)
        G = cosine_gram(x)
        np.testing.assert_array_equal(novak_matrix([x]), hadamard(G, G).real - 1 / 5)

    def test_random(self, rng):
        for _ in range(200):
            k, n = int(rng.integers(1, 5)), int(rng.integers(1, 13))
            assert certified(novak_matrix(rng.uniform(-np.pi, np.pi, (k, n))))


class TestGaussian:
    def test_single(self):
        np.testing.assert_array_equal(gaussian_gram([[1.0, 2.0]]), [[1]])

    @pytest.mark.parametrize("D, lam", [(0.5, 1.0), (1.0, 0.7), (2.0, 0.1)])
    def test_two_points(self, D, lam):
        G = gaussian_gram([[0.0], [D]], lam)
        off = np.exp(-lam * D ** 2)
        assert 0 < G[0, 1] < 1 and G[0, 1] == pytest.approx(off)
        np.testing.assert_allclose(np.linalg.eigvalsh(G), [1 - off, 1 + off])

    def test_random_cloud(self, rng):
        G = gaussian_gram(rng.standard_normal((10, 3)), 0.7)
        np.testing.assert_array_equal(np.diagonal(G), 1)
        assert certified(G)

    def test_invariances(self, rng):
        P = rng.standard_normal((8, 3))
        Q, _ = np.linalg.qr(rng.standard_normal((3, 3)))
        G = gaussian_gram(P)
        assert np.max(np.abs(gaussian_gram(P + rng.standard_normal(3)) - G)) <= 100 * EPS
        assert np.max(np.abs(gaussian_gram(P @ Q.T) - G)) <= 100 * EPS

    def test_bad_lambda(self):
        with pytest.raises(DomainError):
            gaussian_gram([[0.0]], 0.0)

    def test_non_finite(self):
        with pytest.raises(DomainError):
            gaussian_gram([[np.inf]])


class TestGaussianNovak:
    def test_single(self):
        np.testing.assert_array_equal(gaussian_novak_matrix([[[0.0, 1.0]]]), [[0]])

    def test_coincident(self):
        np.testing.assert_array_equal(gaussian_novak_matrix([[[1.0], [1.0]]]), E2 / 2)

    def test_random(self, rng):
        for _ in range(200):
            k, n = int(rng.integers(1, 5)), int(rng.integers(1, 13))
            sets = [rng.standard_normal((n, int(rng.integers(1, 4)))) for _ in range(k)]
            assert certified(gaussian_novak_matrix(sets))

    def test_size_mismatch(self):
        with pytest.raises(DimensionError):
            gaussian_novak_matrix([np.zeros((2, 1)), np.zeros((3, 1))])


class TestProductKernel:
    def test_all_ones(self):
        rep = product_kernel_lower_bound([E2])
        np.testing.assert_allclose(rep.bound_matrix, E2 / 2)
        assert rep.accepted

    def test_cosine_recovers_novak(self, rng):
        x = rng.uniform(-3, 3, 6)
        rep = product_kernel_lower_bound([cosine_gram(x)])
        diff = rep.lhs - rep.bound_matrix
        np.testing.assert_allclose(diff.real, novak_matrix([x]), atol=10 * EPS)
        assert rep.accepted

    def test_gaussian_pair(self, rng):
        grams = [gaussian_gram(rng.standard_normal((5, 2)), 0.5) for _ in range(2)]
        assert product_kernel_lower_bound(grams).accepted

    def test_scaled_diagonal(self, rng):
        # ell below one: the coefficient must be prod ell^2
        grams = [0.5 * cosine_gram(rng.uniform(-3, 3, 4)), 3.0 * gaussian_gram(rng.standard_normal((4, 2)))]
        rep = product_kernel_lower_bound(grams, ells=[0.5, 3.0])
        assert rep.extra["ells"] == [0.5, 3.0]
        np.testing.assert_allclose(np.diagonal(rep.bound_matrix).real, (0.5 * 3.0) ** 2 / 4)
        assert rep.accepted

    def test_random(self, rng):
        for _ in range(200):
            k, n = int(rng.integers(1, 4)), int(rng.integers(1, 9))
            grams = []
            for _ in range(k):
                if rng.integers(2):
                    grams.append(rng.uniform(0.2, 3) * cosine_gram(rng.uniform(-4, 4, n)))
                else:
                    grams.append(rng.uniform(0.2, 3) * gaussian_gram(rng.standard_normal((n, 2))))
            rep = product_kernel_lower_bound(grams)
            assert certified(rep.lhs - rep.bound_matrix)

    def test_non_constant_diagonal(self):
        with pytest.raises(DomainError):
            product_kernel_lower_bound([np.diag([1.0, 2.0])])

    def test_ells_disagree(self):
        with pytest.raises(DomainError):
            product_kernel_lower_bound([E2], ells=[2.0])


class TestPowerPreserver:
    def test_identity(self):
        rep = entrywise_power_preserver_check(np.eye(2), 1)
        assert abs(rep.certificate.lambda_min) <= 10 * EPS and rep.accepted

    @pytest.mark.parametrize("k", [1, 2, 3])
    def test_all_ones(self, k):
        rep = entrywise_power_preserver_check(np.ones((3, 3)), k)
        np.testing.assert_allclose(rep.lhs - rep.bound_matrix, 2 / 3 * np.ones((3, 3)), atol=10 * EPS)
        assert rep.accepted

    def test_random(self, rng):
        for _ in range(200):
            n, k = int(rng.integers(1, 7)), int(rng.integers(1, 4))
            rep = entrywise_power_preserver_check(correlation(rng, n, int(rng.integers(1, n + 1))), k)
            assert certified(rep.lhs - rep.bound_matrix)

    def test_not_correlation(self):
        assert not is_real_correlation(2 * np.eye(2))
        with pytest.raises(DomainError):
            entrywise_power_preserver_check(2 * np.eye(2), 1)
        with pytest.raises(DomainError):
            entrywise_power_preserver_check(np.eye(2), 0)
