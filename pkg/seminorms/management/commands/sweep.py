"""
sweep: semi-norm values at K+1 evenly spaced mu in [0, 1] (plot-ready data).
"""

from seminorms.cli import ReportCommand, optimizer_from_settings, seminorm_settings
from seminorms.engine import ENDPOINT_TOLERANCE, mu_sweep
from seminorms.linalg import matrix_payload
from seminorms.reports import Report, sweep_payload
from seminorms.serializers import MEAN_CHOICES, STATE_CHOICES, SweepParamsSerializer, load_matrix


class Command(ReportCommand):
    help = "Sweep the path parameter mu over [0, 1] for one matrix and mean"
    verb = "sweep"
    params_serializer = SweepParamsSerializer

    def add_arguments(self, parser):
        config = seminorm_settings()
        parser.add_argument("--matrix", required=True, help="Matrix JSON file")
        parser.add_argument("--mean", required=True, choices=MEAN_CHOICES)
        parser.add_argument("--steps", required=True, type=int, help="Number of mu intervals K")
        parser.add_argument("--states", choices=STATE_CHOICES, default=config["DEFAULT_STATE_CLASS"])
        parser.add_argument("--seed", type=int, default=0)
        parser.add_argument("--starts", type=int, default=config["OPTIMIZER"]["STARTS"])

    def run(self, params):
        A = load_matrix(params["matrix"])
        config = optimizer_from_settings(starts=params["starts"], seed=params["seed"])
        steps = params["steps"]
        mus = [k / steps for k in range(steps + 1)]
        points = mu_sweep(A, params["mean"], mus, params["states"], config)

        findings = [
            {
                "kind": "endpoint_deviation",
                "mu": point.mu,
                "value": point.value,
                "reference": point.reference,
                "deviation": point.deviation,
            }
            for point in points
            if point.reference is not None
            and point.deviation > ENDPOINT_TOLERANCE * max(1.0, point.reference)
        ]
        results = {
            "matrix": matrix_payload(A),
            "mean": params["mean"],
            "state_class": params["states"],
            "points": sweep_payload(points),
        }
        timing = {
            "points": len(points),
            "optimizer_starts": len(points) * config.starts,
        }
        report = Report(command=self.echo(params), results=results, findings=findings, timing=timing)
        return report, False
