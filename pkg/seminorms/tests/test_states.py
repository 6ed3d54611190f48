"""
Tests for pure and mixed states.
"""

import numpy as np
from django.test import SimpleTestCase

from seminorms.states import (
    MixedState,
    PureState,
    StateError,
    pure_to_mixed,
    random_state,
    state_eval,
    state_from_payload,
    state_payload,
)


NILPOTENT = np.array([[0, 2], [0, 0]], dtype=complex)


class StateEvalTests(SimpleTestCase):

    def test_pure_examples(self):
        self.assertEqual(state_eval(PureState(np.array([0, 1])), NILPOTENT), 0)
        diagonal = PureState.from_vector([1, 1])
        self.assertAlmostEqual(state_eval(diagonal, NILPOTENT), 1.0, places=14)

    def test_mixed_example(self):
        self.assertAlmostEqual(state_eval(MixedState(np.eye(2) / 2), np.diag([0, 4])), 2.0, places=14)

    def test_identity_evaluates_to_one(self):
        for kind in ("pure", "mixed"):
            s = random_state(4, kind, seed=3)
            self.assertAlmostEqual(state_eval(s, np.eye(4)).real, 1.0, delta=1e-12)

    def test_dimension_mismatch(self):
        with self.assertRaises(StateError):
            state_eval(PureState(np.array([1, 0])), np.eye(3))


class StateConstructionTests(SimpleTestCase):

    def test_pure_needs_unit_norm(self):
        with self.assertRaises(StateError):
            PureState(np.array([1.0, 1.0]))
        with self.assertRaises(StateError):
            PureState.from_vector([0, 0])

    def test_mixed_needs_density_matrix(self):
        with self.assertRaises(StateError):
            MixedState(np.eye(2))
        with self.assertRaises(StateError):
            MixedState(np.diag([1.5, -0.5]))

    def test_pure_to_mixed(self):
        np.testing.assert_allclose(pure_to_mixed(PureState(np.array([1, 0]))).rho, np.diag([1, 0]))
        np.testing.assert_allclose(pure_to_mixed(PureState(np.array([0, 1]))).rho, np.diag([0, 1]))
        np.testing.assert_allclose(
            pure_to_mixed(PureState.from_vector([1, 1])).rho,
            [[0.5, 0.5], [0.5, 0.5]],
            atol=1e-15,
        )


class RandomStateTests(SimpleTestCase):

    def test_deterministic(self):
        first = random_state(2, "pure", seed=7)
        second = random_state(2, "pure", seed=7)
        np.testing.assert_array_equal(first.x, second.x)

    def test_mixed_has_unit_trace(self):
        s = random_state(3, "mixed", 3, seed=7)
        self.assertAlmostEqual(np.trace(s.rho).real, 1.0, delta=1e-12)

    def test_rank_one_factor(self):
        s = random_state(3, "mixed", 1, seed=7)
        self.assertEqual(int(np.sum(np.linalg.eigvalsh(s.rho) > 1e-10)), 1)

    def test_rank_bounds(self):
        with self.assertRaises(StateError):
            random_state(3, "mixed", 4, seed=1)

    def test_payload_reconstructs_state(self):
        for kind in ("pure", "mixed"):
            s = random_state(3, kind, seed=9)
            restored = state_from_payload(state_payload(s))
            A = np.arange(9).reshape(3, 3) + 1j
            self.assertAlmostEqual(state_eval(restored, A), state_eval(s, A), places=12)
