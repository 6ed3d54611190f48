"""
Tests for the semi-norm engine: closed forms, the 2x2 oracle, endpoint
identities and the pure/mixed state-class contract.
"""

import math
from unittest import mock

import numpy as np
from django.test import SimpleTestCase

from seminorms.engine import (
    EngineError,
    Maximization,
    OptimizerConfig,
    SeminormQuery,
    StateClass,
    crawford,
    mu_sweep,
    numerical_radius,
    objective,
    oracle_2x2,
    seminorm,
    seminorm_upper_envelope,
    state_class_gap,
)
from seminorms.harness import generate
from seminorms.linalg import operator_norm
from seminorms.meanlib import MeanKind
from seminorms.states import MixedState, PureState, random_state


NILPOTENT = np.array([[0, 2], [0, 0]], dtype=complex)
FAST = OptimizerConfig(starts=8, max_iterations=300)
MEANS = tuple(MeanKind)
MUS = (0.0, 0.25, 0.5, 0.75, 1.0)


def value(A, mean, mu, state_class=StateClass.PURE, config=FAST) -> float:
    return seminorm(SeminormQuery(A, mean, mu, state_class, config)).value


class ObjectiveTests(SimpleTestCase):

    def test_hand_evaluations(self):
        e2 = PureState(np.array([0, 1]))
        self.assertAlmostEqual(objective(NILPOTENT, "arithmetic", 0.5, e2), 2.0, places=14)

        diagonal = PureState.from_vector([1, 1])
        # u = |<Ax, x>|^2 = 1, w = ||Ax||^2 = 2
        self.assertAlmostEqual(objective(NILPOTENT, "geometric", 0.5, diagonal), math.sqrt(2), places=14)

    def test_identity_is_one(self):
        for mean in MEANS:
            for s in (random_state(3, "pure", seed=1), random_state(3, "mixed", seed=1)):
                self.assertAlmostEqual(objective(np.eye(3), mean, 0.3, s), 1.0, delta=1e-12)


class ClosedFormTests(SimpleTestCase):
    """||[[0,2],[0,0]]||_{sigma_1/2} maximizes a one-variable function of t = |x_2|^2."""

    def test_arithmetic(self):
        for state_class in StateClass:
            with self.subTest(state_class=state_class):
                self.assertAlmostEqual(value(NILPOTENT, "arithmetic", 0.5, state_class), math.sqrt(2), delta=1e-6)

    def test_geometric(self):
        expected = math.sqrt(8 / (3 * math.sqrt(3)))
        self.assertAlmostEqual(value(NILPOTENT, "geometric", 0.5), expected, delta=1e-5)
        self.assertAlmostEqual(expected, 1.24081, delta=1e-5)

    def test_harmonic(self):
        expected = math.sqrt(24 - 16 * math.sqrt(2))
        self.assertAlmostEqual(value(NILPOTENT, "harmonic", 0.5), expected, delta=1e-5)
        self.assertAlmostEqual(expected, 1.17157, delta=1e-5)

    def test_published_value_violates_lower_bound(self):
        computed = value(NILPOTENT, "arithmetic", 0.5)
        self.assertGreaterEqual(computed, operator_norm(NILPOTENT) / math.sqrt(2) - 1e-9)
        self.assertGreater(computed - math.sqrt(1.5), 0.1)

    def test_normal_matrices_collapse_to_operator_norm(self):
        A = generate("normal", 3, 17)
        norm = operator_norm(A)
        for mean in MEANS:
            for mu in (0.25, 0.5):
                with self.subTest(mean=mean, mu=mu):
                    self.assertAlmostEqual(value(A, mean, mu), norm, delta=1e-6 * max(1.0, norm))

    def test_identity_and_diagonal(self):
        self.assertAlmostEqual(value(np.eye(3), "geometric", 0.3), 1.0, delta=1e-6)
        self.assertAlmostEqual(value(np.diag([0.0, 1.0]), "arithmetic", 0.0), 1.0, delta=1e-4)

    def test_zero_matrix(self):
        result = seminorm(SeminormQuery(np.zeros((3, 3)), "harmonic", 0.5, StateClass.MIXED, FAST))
        self.assertEqual(result.value, 0.0)
        self.assertTrue(result.converged)
        self.assertIsInstance(result.witness, MixedState)

    def test_witness_attains_value(self):
        A = generate("ginibre", 3, 4)
        result = seminorm(SeminormQuery(A, "geometric", 0.5, StateClass.MIXED, FAST))
        self.assertAlmostEqual(
            math.sqrt(objective(A, "geometric", 0.5, result.witness)), result.value, delta=1e-9,
        )

    def test_query_validation(self):
        with self.assertRaises(EngineError):
            SeminormQuery(NILPOTENT, "arithmetic", 1.5)
        with self.assertRaises(EngineError):
            OptimizerConfig(starts=0)

    def test_deterministic_per_seed(self):
        A = generate("ginibre", 4, 2)
        first = seminorm(SeminormQuery(A, "harmonic", 0.25, StateClass.MIXED, FAST))
        second = seminorm(SeminormQuery(A, "harmonic", 0.25, StateClass.MIXED, FAST))
        self.assertEqual(first.value, second.value)

    def test_parallel_starts_match_serial(self):
        A = generate("ginibre", 3, 6)
        serial = value(A, "arithmetic", 0.5, config=FAST)
        threaded = value(A, "arithmetic", 0.5, config=OptimizerConfig(starts=8, max_iterations=300, workers=4))
        self.assertEqual(serial, threaded)


class NonConvergenceTests(SimpleTestCase):

    def run_with_start_values(self, values):
        outcome = Maximization(
            value=values[0],
            witness=PureState(np.array([0, 1], dtype=complex)),
            converged=False,
            starts_agreeing=1,
            iterations_total=10,
            start_values=list(values),
        )
        with mock.patch("seminorms.engine.maximize_over_states", return_value=outcome):
            return seminorm(SeminormQuery(NILPOTENT, "arithmetic", 0.5, StateClass.PURE, FAST))

    def test_negligible_disagreement_is_not_a_warning(self):
        with self.assertNoLogs("seminorms.engine", level="WARNING"):
            result = self.run_with_start_values([4.0, 4.0 - 1e-11])
        self.assertFalse(result.converged)
        self.assertEqual(result.value, 2.0)

    def test_material_disagreement_warns(self):
        with self.assertLogs("seminorms.engine", level="WARNING") as logs:
            result = self.run_with_start_values([4.0, 3.9])
        self.assertFalse(result.converged)
        self.assertIn("did not converge", logs.output[0])


class NumericalRadiusTests(SimpleTestCase):

    def test_nilpotent(self):
        radius = numerical_radius(NILPOTENT)
        self.assertAlmostEqual(radius.value, 1.0, delta=1e-8)
        self.assertAlmostEqual(operator_norm(NILPOTENT), 2.0, delta=1e-10)

    def test_normal_and_hermitian(self):
        self.assertAlmostEqual(numerical_radius(np.diag([1, 1j])).value, 1.0, delta=1e-9)
        H = np.array([[-3.0, 1.0], [1.0, 1.0]])
        eigenvalues = np.linalg.eigvalsh(H)
        self.assertAlmostEqual(numerical_radius(H).value, max(abs(eigenvalues)), delta=1e-9)

    def test_witness_attains_radius(self):
        A = generate("ginibre", 4, 12)
        radius = numerical_radius(A)
        x = radius.witness.x
        self.assertAlmostEqual(abs(np.vdot(x, A @ x)), radius.value, delta=1e-8)

    def test_crawford(self):
        self.assertAlmostEqual(crawford(np.diag([1.0, 2.0])), 1.0, delta=1e-9)
        self.assertAlmostEqual(crawford(NILPOTENT), 0.0, delta=1e-9)
        self.assertAlmostEqual(crawford(np.eye(3)), 1.0, delta=1e-9)


class OracleTests(SimpleTestCase):

    def test_closed_forms(self):
        self.assertAlmostEqual(oracle_2x2(NILPOTENT, "arithmetic", 0.5), math.sqrt(2), delta=1e-6)
        self.assertAlmostEqual(
            oracle_2x2(NILPOTENT, "geometric", 0.5, grid=2048), math.sqrt(8 / (3 * math.sqrt(3))), delta=1e-4,
        )

    def test_rejects_other_dimensions(self):
        with self.assertRaises(EngineError):
            oracle_2x2(np.eye(3), "arithmetic", 0.5)

    def test_engine_matches_oracle(self):
        rng = np.random.default_rng(2024)
        for trial in range(6):
            A = generate("ginibre", 2, rng)
            for mean in MEANS:
                for mu in MUS:
                    expected = oracle_2x2(A, mean, mu, grid=512)
                    with self.subTest(trial=trial, mean=mean, mu=mu):
                        self.assertAlmostEqual(value(A, mean, mu), expected, delta=1e-3 * max(1.0, expected))


class EndpointTests(SimpleTestCase):

    def test_endpoints_match_closed_forms(self):
        rng = np.random.default_rng(5)
        for dim in (2, 3, 4):
            A = generate("ginibre", dim, rng)
            radius = numerical_radius(A).value
            norm = operator_norm(A)
            scale = max(1.0, norm)
            for mean in MEANS:
                with self.subTest(dim=dim, mean=mean):
                    self.assertAlmostEqual(value(A, mean, 0.0), radius, delta=1e-6 * scale)
                    self.assertAlmostEqual(value(A, mean, 1.0), norm, delta=1e-6 * scale)

    def test_mu_sweep(self):
        points = mu_sweep(NILPOTENT, "arithmetic", [0, 0.5, 1], StateClass.PURE, FAST)
        np.testing.assert_allclose([p.value for p in points], [1, math.sqrt(2), 2], atol=1e-5)
        self.assertAlmostEqual(points[0].reference, 1.0, delta=1e-8)
        self.assertIsNone(points[1].reference)
        self.assertLessEqual(points[2].deviation, 1e-6)

    def test_mu_sweep_is_constant_for_normal(self):
        A = generate("normal", 3, 21)
        points = mu_sweep(A, "geometric", [0.1, 0.6, 0.9], StateClass.PURE, FAST)
        norm = operator_norm(A)
        for point in points:
            self.assertAlmostEqual(point.value, norm, delta=1e-6 * max(1.0, norm))


class EnvelopeTests(SimpleTestCase):

    def test_values(self):
        self.assertAlmostEqual(seminorm_upper_envelope(NILPOTENT, "arithmetic", 0.5), math.sqrt(2.5), delta=1e-8)
        self.assertAlmostEqual(seminorm_upper_envelope(np.eye(2), "harmonic", 0.7), 1.0, delta=1e-9)
        A = generate("ginibre", 3, 8)
        self.assertAlmostEqual(seminorm_upper_envelope(A, "geometric", 0.0), numerical_radius(A).value, delta=1e-12)


class StateClassTests(SimpleTestCase):

    def test_mixed_dominates_pure(self):
        rng = np.random.default_rng(31)
        for trial in range(3):
            A = generate("ginibre", 3, rng)
            scale = max(1.0, operator_norm(A))
            for mean in MEANS:
                with self.subTest(trial=trial, mean=mean):
                    self.assertGreaterEqual(state_class_gap(A, mean, 0.5, FAST), -1e-7 * scale)

    def test_arithmetic_pure_equals_mixed(self):
        rng = np.random.default_rng(32)
        for trial in range(3):
            A = generate("ginibre", 3, rng)
            scale = max(1.0, operator_norm(A))
            for mu in (0.25, 0.75):
                with self.subTest(trial=trial, mu=mu):
                    self.assertLessEqual(abs(state_class_gap(A, "arithmetic", mu, FAST)), 1e-6 * scale)
