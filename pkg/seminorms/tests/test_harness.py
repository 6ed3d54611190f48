"""
Tests for operator-class detection and the seeded instance generators.
"""

import numpy as np
from django.test import SimpleTestCase
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from seminorms.harness import GeneratorError, classify, generate, haar_unitary, optimal_alpha_beta
from seminorms.linalg import abs_matrix, adjoint, gram, loewner_leq, operator_norm, spectral_radius


NILPOTENT = np.array([[0, 2], [0, 0]], dtype=complex)

seeds = st.integers(min_value=0, max_value=2 ** 32 - 1)
dims = st.integers(min_value=2, max_value=5)


class ClassifyTests(SimpleTestCase):

    def test_normal_diagonal(self):
        report = classify(np.diag([1, 1j]))
        self.assertTrue(report.normal)
        self.assertTrue(report.hyponormal)
        self.assertTrue(report.semi_hyponormal)
        self.assertTrue(report.consistent)
        alpha, beta = report.alpha_beta
        self.assertAlmostEqual(alpha, 1.0, delta=1e-9)
        self.assertAlmostEqual(beta, 1.0, delta=1e-9)

    def test_nilpotent(self):
        report = classify(NILPOTENT)
        self.assertTrue(report.nilpotent2)
        self.assertFalse(report.normal)
        self.assertFalse(report.hyponormal)
        self.assertIsNone(report.alpha_beta)
        self.assertIsNone(report.as_dict()["alpha_beta"])

    @settings(deadline=None, derandomize=True, max_examples=25)
    @given(seed=seeds, dim=dims)
    def test_hyponormal_iff_normal(self, seed, dim):
        report = classify(generate("ginibre", dim, seed))
        self.assertTrue(report.consistent)
        self.assertEqual(report.hyponormal, report.normal)
        self.assertFalse(report.normal)

    @settings(deadline=None, derandomize=True, max_examples=25)
    @given(seed=seeds, dim=dims)
    def test_alpha_beta_is_valid(self, seed, dim):
        A = generate("ginibre", dim, seed)
        assume(np.linalg.cond(A) < 1e3)
        alpha, beta = optimal_alpha_beta(A)
        right = gram(A)
        left = A @ adjoint(A)
        # trace identity tr|a*|^2 = tr|a|^2 behind the clamp alpha <= 1 <= beta
        self.assertAlmostEqual(np.trace(left).real, np.trace(right).real, delta=1e-9 * np.trace(right).real)
        self.assertLessEqual(alpha, 1.0)
        self.assertGreaterEqual(beta, 1.0)
        self.assertTrue(loewner_leq(alpha ** 2 * right, left, tol=1e-7))
        self.assertTrue(loewner_leq(left, beta ** 2 * right, tol=1e-7))


class GenerateTests(SimpleTestCase):

    def test_normal_instances_are_normal(self):
        self.assertTrue(classify(generate("normal", 3, 5)).normal)
        rng = np.random.default_rng(2024)
        for trial in range(60):
            dim = 2 + trial % 3
            report = classify(generate("normal", dim, rng))
            with self.subTest(trial=trial, dim=dim):
                self.assertTrue(report.normal)
                self.assertTrue(report.hyponormal)
                self.assertTrue(report.semi_hyponormal)
                self.assertTrue(all(report.p_hyponormal.values()))
                self.assertTrue(report.consistent)

    def test_nilpotent_instances_square_to_zero(self):
        A = generate("nilpotent2", 4, 5)
        self.assertLessEqual(operator_norm(A @ A), 1e-12 * operator_norm(A) ** 2)
        self.assertTrue(classify(A).nilpotent2)

    def test_product_pair_commutes_with_modulus(self):
        a, b = generate("lemma32_pair", 3, 5)
        modulus = abs_matrix(a)
        self.assertLessEqual(np.linalg.norm(modulus @ b - adjoint(b) @ modulus), 1e-10)
        self.assertLessEqual(spectral_radius(b), 1.0 + 1e-12)

    def test_psd_and_contraction(self):
        H = generate("psd", 4, 3)
        self.assertGreaterEqual(np.linalg.eigvalsh(H)[0], -1e-10)
        C = generate("contraction", 4, 3)
        self.assertLessEqual(operator_norm(C), 1.0 + 1e-12)
        self.assertGreaterEqual(operator_norm(C), 0.5 - 1e-12)

    def test_haar_unitary(self):
        U = haar_unitary(np.random.default_rng(0), 4)
        np.testing.assert_allclose(U.conj().T @ U, np.eye(4), atol=1e-12)

    def test_deterministic_per_seed(self):
        for kind in ("ginibre", "normal", "nilpotent2", "psd", "contraction"):
            with self.subTest(kind=kind):
                np.testing.assert_array_equal(generate(kind, 3, 42), generate(kind, 3, 42))

    def test_unknown_kind(self):
        with self.assertRaises(GeneratorError):
            generate("hermitian", 3, 1)
        with self.assertRaises(GeneratorError):
            generate("ginibre", 0, 1)
