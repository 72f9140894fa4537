"""Unit tests for the small dense linear-algebra layer."""

import numpy as np
import pytest

from tangle_response.linalg import (
    SIGMA_X, SIGMA_Y, SIGMA_Z, haar_isometry, herm_eig, is_hermitian, kron,
    kron_all, make_rng, orthonormalize, partial_trace, sqrt_psd, takagi,
    trace_norm,
)

from tests.utils import assert_close


@pytest.mark.unit
class TestKron:
    """Tensor products and qubit ordering."""

    def test_dimensions_multiply(self):
        assert kron(np.eye(2), np.eye(4)).shape == (8, 8)
        assert kron_all(SIGMA_X, SIGMA_Y, SIGMA_Z).shape == (8, 8)

    def test_qubit_one_is_leftmost(self):
        # sigma_x on qubit 1 maps |000> (index 0) to |100> (index 4)
        op = kron_all(SIGMA_X, np.eye(2), np.eye(2))
        assert op[4, 0] == 1

    def test_rejects_non_matrix(self):
        with pytest.raises(ValueError):
            kron(np.ones(3), np.eye(2))


@pytest.mark.unit
class TestPartialTrace:
    """Partial trace over 1-based qubit indices."""

    def test_product_state(self, random_density):
        a, b, c = random_density(2), random_density(2), random_density(2)
        rho = kron_all(a, b, c)
        assert_close(partial_trace(rho, 3, [2, 3]), a, 1e-12, "rho_1")
        assert_close(partial_trace(rho, 3, [1, 3]), b, 1e-12, "rho_2")
        assert_close(partial_trace(rho, 3, [1]), kron(b, c), 1e-12, "rho_23")

    def test_trace_preserved(self, random_density):
        rho = random_density(8)
        assert abs(np.trace(partial_trace(rho, 3, [2])) - 1) < 1e-12

    def test_bell_state_reduces_to_identity(self):
        psi = np.array([1, 0, 0, 1]) / np.sqrt(2)
        assert_close(partial_trace(np.outer(psi, psi), 2, [2]), np.eye(2) / 2, 1e-15)

    def test_invalid_index(self):
        with pytest.raises(ValueError):
            partial_trace(np.eye(4) / 4, 2, [3])

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            partial_trace(np.eye(4) / 4, 3, [1])


@pytest.mark.unit
class TestHermitian:
    """Spectra and square roots of Hermitian matrices."""

    def test_herm_eig_reconstructs(self, random_density):
        h = random_density(8)
        w, v = herm_eig(h)
        assert np.all(np.diff(w) >= 0)
        assert_close((v * w) @ v.conj().T, h, 1e-12, "spectral reconstruction")

    def test_herm_eig_phase_convention(self, random_density):
        _, v = herm_eig(random_density(4))
        for j in range(4):
            lead = v[np.flatnonzero(np.abs(v[:, j]) > 1e-12)[0], j]
            assert abs(lead.imag) < 1e-12 and lead.real > 0

    def test_herm_eig_rejects_non_hermitian(self):
        with pytest.raises(ValueError):
            herm_eig(np.array([[0, 1], [0, 0]]))

    def test_sqrt_psd_squares_back(self, random_density):
        h = random_density(8)
        r = sqrt_psd(h)
        assert is_hermitian(r)
        assert_close(r @ r, h, 1e-12, "sqrt squared")

    def test_sqrt_psd_rejects_negative(self):
        with pytest.raises(ValueError):
            sqrt_psd(np.diag([1.0, -0.1]))

    def test_trace_norm(self):
        assert trace_norm(np.diag([1.0, -2.0, 0.5])) == pytest.approx(3.5)


@pytest.mark.unit
class TestTakagi:
    """Takagi factorization s = u^T diag(omega) u."""

    def _check(self, s):
        u, omega = takagi(s)
        n = s.shape[0]
        assert_close(u @ u.conj().T, np.eye(n), 1e-10, "unitarity")
        assert_close(u.T @ np.diag(omega) @ u, s, 1e-10, "factorization")
        assert np.all(np.abs(omega.imag) < 1e-15)
        assert np.all(np.diff(omega.real) <= 1e-12)
        return omega

    def test_random_symmetric(self, rng):
        g = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
        omega = self._check((g + g.T) / 2)
        assert_close(np.sort(omega.real), np.sort(np.linalg.svd((g + g.T) / 2, compute_uv=False)), 1e-10)

    def test_many_random_symmetric(self, rng):
        for n in (2, 3, 4) * 33 + (4,):
            g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
            self._check((g + g.T) / 2)

    def test_fully_degenerate(self):
        omega = self._check(np.array([[0, 1], [1, 0]], dtype=complex))
        assert_close(omega.real, [1, 1], 1e-12)

    def test_degenerate_blocks(self, rng):
        # two doubly degenerate singular values
        o = np.array([[0, 2], [2, 0]], dtype=complex)
        z = np.zeros((2, 2))
        s = np.block([[o, z], [z, 1j * np.eye(2)]])
        v = np.linalg.qr(rng.standard_normal((4, 4)))[0]
        self._check(v.T @ s @ v)

    def test_rank_deficient(self):
        s = np.zeros((3, 3), dtype=complex)
        s[0, 0] = 2j
        omega = self._check(s)
        assert_close(omega.real, [2, 0, 0], 1e-12)

    def test_rejects_non_symmetric(self):
        with pytest.raises(ValueError):
            takagi(np.array([[0, 1], [2, 0]], dtype=complex))


@pytest.mark.unit
class TestRandom:
    """Seeded generators and Haar isometries."""

    def test_streams_are_reproducible(self):
        a = make_rng(7, 3).random(5)
        b = make_rng(7, 3).random(5)
        c = make_rng(7, 4).random(5)
        assert np.array_equal(a, b)
        assert not np.array_equal(a, c)

    @pytest.mark.parametrize("m,r", [(1, 1), (4, 2), (7, 5), (16, 8)])
    def test_haar_isometry_columns_orthonormal(self, m, r):
        v = haar_isometry(m, r, 11)
        assert v.shape == (m, r)
        assert_close(v.conj().T @ v, np.eye(r), 1e-12, "isometry")

    def test_haar_isometry_deterministic(self):
        assert np.array_equal(haar_isometry(5, 3, 2), haar_isometry(5, 3, 2))

    def test_haar_isometry_too_many_columns(self):
        with pytest.raises(ValueError):
            haar_isometry(2, 3, 0)

    def test_orthonormalize(self, rng):
        z = rng.standard_normal((6, 3)) + 1j * rng.standard_normal((6, 3))
        q = orthonormalize(z)
        assert_close(q.conj().T @ q, np.eye(3), 1e-12)
        # same column span
        assert_close(q @ q.conj().T @ z, z, 1e-10)
