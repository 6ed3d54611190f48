"""
oracle: brute-force pure-state value of ||A||_{sigma_mu} for a 2x2 matrix.
"""

from seminorms.cli import ReportCommand, seminorm_settings
from seminorms.engine import ORACLE_REFINEMENT, oracle_2x2
from seminorms.linalg import matrix_payload
from seminorms.reports import Report
from seminorms.serializers import MEAN_CHOICES, OracleParamsSerializer, load_matrix


class Command(ReportCommand):
    help = "Exhaustive grid evaluation of the pure-state semi-norm of a 2x2 matrix"
    verb = "oracle"
    params_serializer = OracleParamsSerializer

    def add_arguments(self, parser):
        parser.add_argument("--matrix", required=True, help="Matrix JSON file (n = 2)")
        parser.add_argument("--mean", required=True, choices=MEAN_CHOICES)
        parser.add_argument("--mu", required=True, type=float)
        parser.add_argument("--grid", type=int, default=seminorm_settings()["ORACLE_GRID"])

    def run(self, params):
        A = load_matrix(params["matrix"])
        value = oracle_2x2(A, params["mean"], params["mu"], params["grid"])
        results = {
            "matrix": matrix_payload(A),
            "mean": params["mean"],
            "mu": params["mu"],
            "value": value,
        }
        timing = {
            "grid_points": params["grid"] ** 2,
            "refinement_points": (2 * ORACLE_REFINEMENT + 1) ** 2,
        }
        return Report(command=self.echo(params), results=results, timing=timing), False
