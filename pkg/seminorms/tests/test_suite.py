"""
Tests for the verification suite and the findings hunt.
"""

from django.test import SimpleTestCase

from seminorms.checks import CheckStatus, get_check
from seminorms.engine import OptimizerConfig
from seminorms.meanlib import MeanKind
from seminorms.reports import Report, serialize_report
from seminorms.suite import SuiteError, TrialConfig, fuzz, run_suite, trial_seed, variants_for


FAST = OptimizerConfig(starts=6, max_iterations=200)
CHECKS = ("sandwich", "sqrt2_nabla", "mixed_schwarz", "nilpotent_example", "triangle_nabla")


def small_config(**overrides) -> TrialConfig:
    options = {
        "dims": (2, 3),
        "trials": 1,
        "seed": 42,
        "mus": (0.0, 0.5, 1.0),
        "checks": CHECKS,
        "optimizer": FAST,
    }
    options.update(overrides)
    return TrialConfig(**options)


class TrialConfigTests(SimpleTestCase):

    def test_validation(self):
        with self.assertRaises(SuiteError):
            small_config(trials=0)
        with self.assertRaises(SuiteError):
            small_config(dims=(1,))
        with self.assertRaises(SuiteError):
            small_config(mus=(1.5,))
        with self.assertRaises(ValueError):
            small_config(checks=("no_such_check",))

    def test_means_are_parsed(self):
        config = small_config(means=("geometric",))
        self.assertEqual(config.means, (MeanKind.GEOMETRIC,))

    def test_variants(self):
        config = small_config()
        self.assertEqual(len(variants_for(get_check("sandwich"), config)), 3 * 3)
        self.assertEqual(len(variants_for(get_check("sqrt2_nabla"), config)), 1)
        self.assertEqual(len(variants_for(get_check("mixed_schwarz"), config)), 3)
        self.assertEqual(len(variants_for(get_check("triangle_nabla"), config)), 3)

    def test_trial_seeds_differ_by_family_and_trial(self):
        seeds = {trial_seed(42, family, trial) for family in ("ginibre", "pair") for trial in range(3)}
        self.assertEqual(len(seeds), 6)
        self.assertEqual(trial_seed(42, "ginibre", 0), trial_seed(42, "ginibre", 0))


class RunSuiteTests(SimpleTestCase):

    def test_one_record_per_variant(self):
        config = small_config()
        report = run_suite(config)
        expected = sum(len(variants_for(d, config)) for d in config.definitions())
        self.assertEqual(len(report.records), expected)
        self.assertEqual(sum(report.counts.values()), expected)
        self.assertEqual(report.failed, 0)
        self.assertEqual(report.counterexamples, [])

    def test_erratum_is_reported_once(self):
        report = run_suite(small_config(trials=2))
        errata = [f for f in report.findings if f["kind"] == "erratum"]
        self.assertEqual(len(errata), 1)
        self.assertEqual(errata[0]["name"], "nilpotent_example")

    def test_byte_identical_reports(self):
        first = serialize_report(Report(command={}, results=run_suite(small_config()).as_dict()))
        second = serialize_report(Report(command={}, results=run_suite(small_config()).as_dict()))
        self.assertEqual(first, second)

    def test_parallel_trials_match_serial(self):
        serial = run_suite(small_config(trials=2, checks=("sandwich",)))
        threaded = run_suite(small_config(trials=2, checks=("sandwich",), workers=2))
        self.assertEqual(serial.as_dict(), threaded.as_dict())

    def test_hypothesis_classes(self):
        report = run_suite(small_config(checks=("normal_collapse", "nilpotent_sigma_zero", "lemma32_product")))
        self.assertEqual(report.failed, 0)
        self.assertEqual(report.counts.get("skipped", 0), 0)

    def test_operator_class_checks_on_normal_instances(self):
        config = small_config(
            dims=(2, 3, 4),
            trials=3,
            mus=(0.5,),
            checks=("normal_collapse", "semi_hypo_abs", "hypo_adjoint", "alpha_beta_sandwich"),
        )
        report = run_suite(config)
        expected = config.trials * sum(len(variants_for(d, config)) for d in config.definitions())
        self.assertEqual(report.counts.get("pass", 0), expected)
        self.assertEqual(report.counts.get("skipped", 0), 0)

    def test_mixed_state_class(self):
        report = run_suite(small_config(state_class="mixed", checks=("sandwich", "triangle_nabla", "nilpotent_example")))
        self.assertEqual(report.failed, 0)
        self.assertEqual({record["inputs"]["state_class"] for record in report.records}, {"mixed"})


class FuzzTests(SimpleTestCase):

    def test_geometric_triangle_never_fails(self):
        report = fuzz("triangle_sigma", "geometric", 0.5, trials=3, seed=7, dims=(2, 3), optimizer=FAST)
        self.assertEqual(report.failed, 0)
        self.assertEqual(set(report.counts), {CheckStatus.REPORT_ONLY.value})
        for finding in report.findings:
            self.assertEqual(finding["kind"], "violation")
            self.assertLess(finding["slack"], 0)
            self.assertTrue(finding["counterexample"]["matrices"])

    def test_assert_checks_run_report_only(self):
        report = fuzz("sandwich", "harmonic", 0.25, trials=1, seed=3, dims=(2,), optimizer=FAST)
        self.assertEqual(report.failed, 0)
        self.assertTrue(report.config.report_only)
        self.assertEqual(report.config.mus, (0.25,))
