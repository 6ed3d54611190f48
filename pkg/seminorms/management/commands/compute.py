"""
compute: ||A||_{sigma_mu} with witness, plus v(A), ||A||, m(A), r(A).
"""

import numpy as np

from seminorms.checks import NILPOTENT_EXAMPLE, PUBLISHED_NILPOTENT_VALUE
from seminorms.cli import ReportCommand, optimizer_from_settings, seminorm_settings
from seminorms.engine import (
    SeminormQuery,
    crawford,
    numerical_radius,
    seminorm,
    seminorm_upper_envelope,
)
from seminorms.linalg import matrix_payload, operator_norm, spectral_radius
from seminorms.meanlib import MeanKind
from seminorms.reports import Report, radius_payload, seminorm_payload
from seminorms.serializers import ComputeParamsSerializer, MEAN_CHOICES, STATE_CHOICES, load_matrix


class Command(ReportCommand):
    help = "Compute the mean-interpolated semi-norm of a matrix and its companion quantities"
    verb = "compute"
    params_serializer = ComputeParamsSerializer

    def add_arguments(self, parser):
        config = seminorm_settings()
        parser.add_argument("--matrix", required=True, help="Matrix JSON file")
        parser.add_argument("--mean", required=True, choices=MEAN_CHOICES)
        parser.add_argument("--mu", required=True, type=float)
        parser.add_argument("--states", choices=STATE_CHOICES, default=config["DEFAULT_STATE_CLASS"])
        parser.add_argument("--seed", type=int, default=0)
        parser.add_argument("--starts", type=int, default=config["OPTIMIZER"]["STARTS"])

    def run(self, params):
        A = load_matrix(params["matrix"])
        config = optimizer_from_settings(starts=params["starts"], seed=params["seed"])
        result = seminorm(SeminormQuery(A, params["mean"], params["mu"], params["states"], config))

        findings = []
        if not result.converged:
            findings.append({
                "kind": "non_convergence",
                "note": f"best two of {config.starts} starts disagree; {result.starts_agreeing} within tolerance",
            })
        if (
            A.shape == NILPOTENT_EXAMPLE.shape
            and np.array_equal(A, NILPOTENT_EXAMPLE)
            and params["mean"] == MeanKind.ARITHMETIC.value
            and params["mu"] == 0.5
        ):
            findings.append({
                "kind": "erratum",
                "published": PUBLISHED_NILPOTENT_VALUE,
                "computed": result.value,
                "note": "published value sqrt(3/2) contradicts the lower bound ||a||/sqrt(2) = sqrt(2)",
            })

        results = {
            "matrix": matrix_payload(A),
            "mean": params["mean"],
            "mu": params["mu"],
            "state_class": params["states"],
            "seminorm": seminorm_payload(result),
            "numerical_radius": radius_payload(numerical_radius(A)),
            "operator_norm": operator_norm(A),
            "crawford": crawford(A),
            "spectral_radius": spectral_radius(A),
            "envelope": seminorm_upper_envelope(A, params["mean"], params["mu"]),
        }
        timing = {
            "optimizer_starts": config.starts,
            "optimizer_iterations": result.iterations_total,
        }
        report = Report(command=self.echo(params), results=results, findings=findings, timing=timing)
        return report, False
