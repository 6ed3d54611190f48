"""
fuzz: report_only findings hunt for one property at one (mean, mu).
"""

from seminorms.cli import ReportCommand, optimizer_from_settings, seminorm_settings, worker_count
from seminorms.reports import Report
from seminorms.serializers import FuzzParamsSerializer, MEAN_CHOICES, STATE_CHOICES
from seminorms.suite import fuzz


class Command(ReportCommand):
    help = "Hunt for violations of one property (e.g. triangle_sigma for the geometric path)"
    verb = "fuzz"
    params_serializer = FuzzParamsSerializer

    def add_arguments(self, parser):
        config = seminorm_settings()
        parser.add_argument("--property", required=True, help="Registered check name")
        parser.add_argument("--mean", required=True, choices=MEAN_CHOICES)
        parser.add_argument("--mu", type=float, default=0.5)
        parser.add_argument("--trials", type=int, required=True)
        parser.add_argument("--seed", type=int, required=True)
        parser.add_argument("--dims", default="2,3,4", help="Comma-separated dimensions")
        parser.add_argument("--states", choices=STATE_CHOICES, default=config["SUITE_STATE_CLASS"])

    def run(self, params):
        suite = fuzz(
            params["property"],
            params["mean"],
            params["mu"],
            trials=params["trials"],
            seed=params["seed"],
            dims=params["dims"],
            state_class=params["states"],
            optimizer=optimizer_from_settings("SUITE_OPTIMIZER", workers=1),
            workers=worker_count(),
        )
        report = Report(
            command=self.echo(params),
            results=suite.as_dict(),
            findings=suite.findings,
            timing=dict(suite.counters),
        )
        return report, False
