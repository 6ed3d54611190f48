"""
verify: run the verification suite and emit the SuiteReport.

Exits 1 when an assert-mode check fails; report_only findings never do.
"""

from seminorms.cli import ReportCommand, optimizer_from_settings, seminorm_settings, worker_count
from seminorms.reports import Report
from seminorms.serializers import STATE_CHOICES, VerifyParamsSerializer
from seminorms.suite import DEFAULT_MUS, TrialConfig, run_suite


class Command(ReportCommand):
    help = "Verify every registered inequality on seeded random instances"
    verb = "verify"
    params_serializer = VerifyParamsSerializer

    def add_arguments(self, parser):
        config = seminorm_settings()
        parser.add_argument("--dims", default="2,3,4", help="Comma-separated dimensions")
        parser.add_argument("--trials", type=int, default=1)
        parser.add_argument("--seed", type=int, default=0)
        parser.add_argument("--checks", help="Comma-separated check names (default: all)")
        parser.add_argument("--means", help="Comma-separated means (default: all)")
        parser.add_argument("--mus", help="Comma-separated mu values (default: 0,0.25,0.5,0.75,1)")
        parser.add_argument("--states", choices=STATE_CHOICES, default=config["SUITE_STATE_CLASS"])

    def run(self, params):
        options = {}
        if "means" in params:
            options["means"] = tuple(params["means"])
        config = TrialConfig(
            dims=tuple(params["dims"]),
            trials=params["trials"],
            seed=params["seed"],
            mus=tuple(params.get("mus", DEFAULT_MUS)),
            relative_tolerance=seminorm_settings()["RELATIVE_TOLERANCE"],
            state_class=params["states"],
            checks=tuple(params["checks"]) if "checks" in params else None,
            optimizer=optimizer_from_settings("SUITE_OPTIMIZER", workers=1),
            workers=worker_count(),
            **options,
        )
        suite = run_suite(config)
        report = Report(
            command=self.echo(params),
            results=suite.as_dict(),
            findings=suite.findings,
            timing=dict(suite.counters),
        )
        return report, suite.failed > 0
