"""
Tests for the dense linear-algebra kernels.
"""

import numpy as np
from django.test import SimpleTestCase
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from seminorms.linalg import (
    EXP,
    LOG,
    SQRT,
    SQUARE,
    NotHermitianError,
    NotPSDError,
    ShapeError,
    SpectrumDomainError,
    abs_matrix,
    apply_scalar_function,
    hermitian_eigen,
    loewner_leq,
    matrix_from_payload,
    matrix_payload,
    operator_norm,
    psd_power,
    spectral_radius,
)


NILPOTENT = np.array([[0, 2], [0, 0]], dtype=complex)


def random_hermitian(seed: int, dim: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    X = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    return (X + X.conj().T) / 2


def random_psd(seed: int, dim: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    X = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    return X @ X.conj().T


class HermitianEigenTests(SimpleTestCase):

    def test_known_spectra(self):
        np.testing.assert_allclose(hermitian_eigen(np.diag([3.0, 1.0])).values, [1, 3], atol=1e-14)
        np.testing.assert_allclose(hermitian_eigen([[0, 1], [1, 0]]).values, [-1, 1], atol=1e-14)
        np.testing.assert_allclose(hermitian_eigen([[2, 1j], [-1j, 2]]).values, [1, 3], atol=1e-12)

    def test_rejects_non_square(self):
        with self.assertRaises(ShapeError):
            hermitian_eigen(np.zeros((2, 3)))

    def test_rejects_non_hermitian(self):
        with self.assertRaises(NotHermitianError):
            hermitian_eigen(NILPOTENT)

    @settings(deadline=None, derandomize=True, max_examples=30)
    @given(seed=st.integers(min_value=0, max_value=2 ** 32 - 1), dim=st.integers(min_value=1, max_value=6))
    def test_residual_and_orthonormality(self, seed, dim):
        H = random_hermitian(seed, dim)
        eigen = hermitian_eigen(H)
        V = eigen.vectors
        scale = max(1.0, np.linalg.norm(H))
        self.assertLessEqual(np.linalg.norm(H @ V - V * eigen.values), 1e-10 * scale)
        self.assertLessEqual(np.linalg.norm(V.conj().T @ V - np.eye(dim)), 1e-10)
        self.assertTrue(np.all(np.diff(eigen.values) >= 0))

    def test_matches_numpy(self):
        H = random_hermitian(3, 5)
        np.testing.assert_allclose(hermitian_eigen(H).values, np.linalg.eigvalsh(H), atol=1e-10)


class NormTests(SimpleTestCase):

    def test_operator_norm(self):
        self.assertAlmostEqual(operator_norm(NILPOTENT), 2.0, places=10)
        self.assertAlmostEqual(operator_norm(np.eye(4)), 1.0, places=12)
        self.assertAlmostEqual(operator_norm(np.diag([1, -3j])), 3.0, places=12)

    def test_abs_matrix(self):
        np.testing.assert_allclose(abs_matrix(NILPOTENT), np.diag([0, 2]), atol=1e-12)
        H = random_psd(5, 3)
        np.testing.assert_allclose(abs_matrix(H), H, atol=1e-10 * np.linalg.norm(H))
        Q, _ = np.linalg.qr(random_hermitian(8, 3) + 1j * np.eye(3))
        np.testing.assert_allclose(abs_matrix(Q), np.eye(3), atol=1e-10)

    def test_spectral_radius(self):
        self.assertAlmostEqual(spectral_radius(np.diag([1.0, 3.0])), 3.0, places=8)
        self.assertEqual(spectral_radius(NILPOTENT), 0.0)
        self.assertAlmostEqual(spectral_radius([[1, 1], [0, 1]]), 1.0, delta=1e-6)


class AdjointInvariantTests(SimpleTestCase):

    def random_matrix(self, seed: int, dim: int) -> np.ndarray:
        rng = np.random.default_rng(seed)
        return rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))

    def test_norm_and_abs_spectrum_shared_with_adjoint(self):
        for seed in range(5):
            A = self.random_matrix(seed, 4)
            with self.subTest(seed=seed):
                norm = operator_norm(A)
                self.assertAlmostEqual(operator_norm(A.conj().T), norm, delta=1e-10 * norm)
                np.testing.assert_allclose(
                    hermitian_eigen(abs_matrix(A)).values,
                    hermitian_eigen(abs_matrix(A.conj().T)).values,
                    atol=1e-8,
                )
                self.assertLessEqual(spectral_radius(A), norm + 1e-8)

    def test_power_round_trip(self):
        for seed in range(5):
            H = random_psd(seed + 20, 4)
            for p in (0.5, 2):
                with self.subTest(seed=seed, p=p):
                    restored = psd_power(psd_power(H, p), 1 / p)
                    self.assertLessEqual(np.linalg.norm(restored - H), 1e-8 * max(1.0, np.linalg.norm(H)))


class SpectralCalculusTests(SimpleTestCase):

    def test_psd_power(self):
        np.testing.assert_allclose(psd_power(np.diag([4.0, 9.0]), 0.5), np.diag([2, 3]), atol=1e-12)
        np.testing.assert_allclose(psd_power(np.diag([4.0, 9.0]), 0), np.eye(2), atol=1e-12)
        H = random_psd(11, 4)
        np.testing.assert_allclose(psd_power(H, 2), H @ H, rtol=1e-9, atol=1e-9 * np.linalg.norm(H) ** 2)

    @settings(deadline=None, derandomize=True, max_examples=40)
    @given(blocks=arrays(np.float64, (2, 4, 4), elements=st.floats(min_value=-10, max_value=10)))
    def test_square_root_squares_back(self, blocks):
        X = blocks[0] + 1j * blocks[1]
        H = X @ X.conj().T
        root = psd_power(H, 0.5)
        self.assertLessEqual(np.linalg.norm(root @ root - H), 1e-8 * max(1.0, np.linalg.norm(H)))
        self.assertTrue(loewner_leq(np.zeros_like(H), root))

    def test_recomposed_matrices_are_exactly_hermitian(self):
        H = random_psd(13, 4)
        results = (
            psd_power(H, 0.25),
            abs_matrix(random_hermitian(13, 4) + 1j * np.eye(4)),
            hermitian_eigen(H).recompose(),
        )
        for result in results:
            np.testing.assert_array_equal(result, result.conj().T)

    def test_psd_power_rejects_indefinite(self):
        with self.assertRaises(NotPSDError):
            psd_power(np.diag([1.0, -1.0]), 0.5)
        with self.assertRaises(SpectrumDomainError):
            psd_power(np.eye(2), -1)

    def test_scalar_functions(self):
        np.testing.assert_allclose(apply_scalar_function(np.diag([1.0, 4.0]), SQRT), np.diag([1, 2]), atol=1e-12)
        np.testing.assert_allclose(apply_scalar_function(np.diag([0.0, 1.0]), EXP), np.diag([1, np.e]), atol=1e-12)
        H = random_hermitian(2, 4)
        np.testing.assert_allclose(apply_scalar_function(H, SQUARE), H @ H, atol=1e-9 * np.linalg.norm(H) ** 2)

    def test_log_needs_positive_spectrum(self):
        with self.assertRaises(SpectrumDomainError):
            apply_scalar_function(np.diag([0.0, 1.0]), LOG)
        np.testing.assert_allclose(apply_scalar_function(np.diag([1.0, np.e]), LOG), np.diag([0, 1]), atol=1e-12)


class LoewnerTests(SimpleTestCase):

    def test_comparisons(self):
        result = loewner_leq(np.eye(2), np.diag([2.0, 3.0]))
        self.assertTrue(result.holds)
        self.assertAlmostEqual(result.witness, 1.0, places=12)

        result = loewner_leq(np.diag([2.0, 0.0]), np.diag([0.0, 2.0]))
        self.assertFalse(result)
        self.assertAlmostEqual(result.witness, -2.0, places=12)

        H = random_hermitian(4, 3)
        result = loewner_leq(H, H)
        self.assertTrue(result.holds)
        self.assertAlmostEqual(result.witness, 0.0, places=12)

    def test_shape_mismatch(self):
        with self.assertRaises(ShapeError):
            loewner_leq(np.eye(2), np.eye(3))

    def test_nearly_cancelling_powers_of_normal_matrix(self):
        rng = np.random.default_rng(7)
        for trial in range(12):
            U, _ = np.linalg.qr(rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3)))
            A = (U * (rng.standard_normal(3) + 1j * rng.standard_normal(3))) @ U.conj().T
            left, right = A @ A.conj().T, A.conj().T @ A
            for p in (0.25, 0.5, 1.0):
                with self.subTest(trial=trial, p=p):
                    result = loewner_leq(psd_power(left, p), psd_power(right, p))
                    self.assertTrue(result.holds)
                    self.assertLessEqual(abs(result.witness), 1e-9 * max(1.0, operator_norm(A)))


class MatrixPayloadTests(SimpleTestCase):

    def test_payload_layout_is_row_major(self):
        payload = matrix_payload([[1, 2j], [3, 4]])
        self.assertEqual(payload["n"], 2)
        self.assertEqual(payload["entries"], [[1.0, 0.0], [0.0, 2.0], [3.0, 0.0], [4.0, 0.0]])
        np.testing.assert_array_equal(matrix_from_payload(payload), [[1, 2j], [3, 4]])

    def test_wrong_entry_count(self):
        with self.assertRaises(ShapeError):
            matrix_from_payload({"n": 2, "entries": [[1, 0]] * 3})
