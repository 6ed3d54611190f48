"""
Acceptance-scale runs: oracle agreement on 50 seeded 2x2 matrices, the
operator-class checks on 100 normal instances and the full verify run.

Tagged "acceptance"; ``python manage.py test --exclude-tag acceptance`` skips them.
"""

from contextlib import redirect_stderr, redirect_stdout
from io import StringIO

import numpy as np
from django.test import SimpleTestCase, tag

from seminorms.cli import EXIT_OK, run_command
from seminorms.engine import OptimizerConfig, SeminormQuery, StateClass, oracle_2x2, seminorm
from seminorms.harness import generate
from seminorms.meanlib import MeanKind
from seminorms.suite import TrialConfig, run_suite, variants_for


MUS = (0.0, 0.25, 0.5, 0.75, 1.0)


@tag("acceptance")
class OracleAgreementTests(SimpleTestCase):

    def test_fifty_random_matrices(self):
        rng = np.random.default_rng(50)
        config = OptimizerConfig(starts=8, max_iterations=300)
        for trial in range(50):
            A = generate("ginibre", 2, rng)
            for mean in MeanKind:
                for mu in MUS:
                    expected = oracle_2x2(A, mean, mu, grid=512)
                    value = seminorm(SeminormQuery(A, mean, mu, StateClass.PURE, config)).value
                    with self.subTest(trial=trial, mean=mean, mu=mu):
                        self.assertAlmostEqual(value, expected, delta=1e-3 * max(1.0, expected))


@tag("acceptance")
class OperatorClassAcceptanceTests(SimpleTestCase):

    def assertAllPass(self, config: TrialConfig):
        report = run_suite(config)
        expected = config.trials * sum(len(variants_for(d, config)) for d in config.definitions())
        self.assertEqual(report.counts.get("pass", 0), expected, report.counterexamples[:3])
        self.assertEqual(report.counts.get("skipped", 0), 0)

    def test_normal_collapse_on_hundred_instances(self):
        self.assertAllPass(TrialConfig(dims=(2, 3, 4, 5, 6), trials=100, seed=42, checks=("normal_collapse",)))

    def test_class_bounds_on_fifty_instances(self):
        self.assertAllPass(TrialConfig(
            dims=(2, 3, 4),
            trials=50,
            seed=42,
            mus=(0.0, 0.5, 1.0),
            checks=("semi_hypo_abs", "hypo_adjoint", "alpha_beta_sandwich"),
        ))


@tag("acceptance")
class VerifyAcceptanceTests(SimpleTestCase):

    def run_verify(self) -> tuple[int, str]:
        stdout, stderr = StringIO(), StringIO()
        with redirect_stdout(stdout), redirect_stderr(stderr):
            code = run_command(["verify", "--dims", "2,3,4", "--trials", "50", "--seed", "42"])
        return code, stdout.getvalue()

    def test_full_registry_is_byte_identical(self):
        first = self.run_verify()
        second = self.run_verify()
        self.assertEqual(first[0], EXIT_OK)
        self.assertEqual(first, second)
