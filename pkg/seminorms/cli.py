"""
Command-line surface

The verbs (compute, sweep, verify, fuzz, oracle) are management commands
built on ReportCommand: validate flags with a DRF serializer, run, write one
canonical JSON report to standard output, and map failures to exit codes:
0 success, 1 assert-mode property failure, 2 usage or input error.
"""

import logging
import os
import sys
import time
from typing import Optional, Sequence

from django.conf import settings
from django.core.management import BaseCommand, CommandError, ManagementUtility

from .checks import CheckError
from .engine import OptimizerConfig
from .linalg import LinalgError
from .reports import Report, serialize_report


logger = logging.getLogger(__name__)


EXIT_OK = 0
EXIT_PROPERTY_FAILURE = 1
EXIT_USAGE = 2

VERBS = ("compute", "sweep", "verify", "fuzz", "oracle")


def seminorm_settings() -> dict:
    return settings.SEMINORMS


def worker_count() -> Optional[int]:
    threads = seminorm_settings()["THREADS"]
    return threads if threads > 0 else None


def optimizer_from_settings(section: str = "OPTIMIZER", **overrides) -> OptimizerConfig:
    """OptimizerConfig from settings.SEMINORMS[section], flags taking precedence."""
    base = seminorm_settings()["OPTIMIZER"]
    values = {**base, **seminorm_settings().get(section, {})}
    options = {
        "starts": values["STARTS"],
        "max_iterations": values["MAX_ITERATIONS"],
        "gradient_tolerance": values["GRADIENT_TOLERANCE"],
        "objective_tolerance": values["OBJECTIVE_TOLERANCE"],
        "finite_difference_step": values["FD_STEP"],
        "workers": worker_count(),
    }
    options.update({key: value for key, value in overrides.items() if value is not None})
    return OptimizerConfig(**options)


class ReportCommand(BaseCommand):
    """Base for commands that emit a canonical JSON report."""

    verb = ""
    params_serializer = None
    requires_system_checks = []

    def validate(self, options: dict) -> dict:
        data = {key: value for key, value in options.items() if value is not None}
        serializer = self.params_serializer(data=data)
        if not serializer.is_valid():
            fields = ", ".join(f"{name}: {' '.join(map(str, errors))}" for name, errors in serializer.errors.items())
            raise CommandError(f"Invalid parameters ({fields})", returncode=EXIT_USAGE)
        return dict(serializer.validated_data)

    def run(self, params: dict) -> tuple[Report, bool]:
        """Returns the report and whether an assert-mode property failed."""
        raise NotImplementedError

    def handle(self, *args, **options):
        params = self.validate(self.collect(options))
        started = time.perf_counter()
        try:
            report, failed = self.run(params)
        except (ValueError, LinalgError, CheckError) as exc:
            raise CommandError(str(exc), returncode=EXIT_USAGE) from exc
        logger.info("%s finished in %.3fs", self.verb, time.perf_counter() - started)

        self.stdout.write(serialize_report(report).decode("utf-8"), ending="")
        if failed:
            raise CommandError("Assert-mode property failure (see counterexamples)", returncode=EXIT_PROPERTY_FAILURE)

    def collect(self, options: dict) -> dict:
        """The command's own flags out of Django's option dict."""
        names = self.params_serializer().fields.keys()
        return {name: options.get(name) for name in names}

    def echo(self, params: dict) -> dict:
        return {"verb": self.verb, "params": params}


def run_command(argv: Sequence[str]) -> int:
    """
    Run one verb in-process, e.g. run_command(["compute", "--matrix", "a.json", ...]).

    Returns:
        The exit code (0, 1 or 2)
    """
    if not argv or argv[0] not in VERBS:
        verb = argv[0] if argv else ""
        sys.stderr.write(f"Unknown command: {verb!r}. Available: {', '.join(VERBS)}\n")
        return EXIT_USAGE
    os.environ.setdefault("DJANGO_SETTINGS_MODULE", "server.settings")
    utility = ManagementUtility(["manage.py", *argv])
    try:
        utility.execute()
    except SystemExit as exc:
        if exc.code is None:
            return EXIT_OK
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    return EXIT_OK
