"""
Verification Suite

Runs every registered check over seeded instances drawn from the check's
hypothesis class, across the configured dims, means and mu values, and
aggregates pass/fail/report_only counts, worst slack per variant, all
counterexamples and report_only findings. Deterministic per seed: each
trial derives its instances and optimizer seed from
SeedSequence([seed, family, trial]), and results are reduced by trial index.
"""

import logging
import time
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from itertools import product
from typing import Optional, Sequence, Union

import numpy as np

from .checks import (
    NILPOTENT_EXAMPLE,
    REGISTRY,
    CheckContext,
    CheckDefinition,
    CheckMode,
    CheckStatus,
    HypothesisViolation,
    PropertyCheck,
    check_inequality,
    get_check,
)
from .engine import OptimizerConfig, StateClass
from .harness import GeneratorKind, generate
from .meanlib import MeanKind, parse_mean_kind


logger = logging.getLogger(__name__)


DEFAULT_MUS = (0.0, 0.25, 0.5, 0.75, 1.0)
DEFAULT_RELATIVE_TOLERANCE = 1e-7
SUITE_STARTS = 8
SUITE_MAX_ITERATIONS = 300

# Stable per-family codes for seed derivation
FAMILY_CODES = {
    GeneratorKind.GINIBRE.value: 1,
    GeneratorKind.NORMAL.value: 2,
    GeneratorKind.NILPOTENT2.value: 3,
    GeneratorKind.PSD.value: 4,
    GeneratorKind.LEMMA32_PAIR.value: 5,
    GeneratorKind.CONTRACTION.value: 6,
    "pair": 7,
    "fixed": 8,
}


class SuiteError(ValueError):
    """Invalid trial configuration."""


@dataclass(frozen=True)
class TrialConfig:
    """What the suite runs: instances, paths and checks."""
    dims: tuple[int, ...] = (2, 3, 4)
    trials: int = 1
    seed: int = 0
    means: tuple[MeanKind, ...] = tuple(MeanKind)
    mus: tuple[float, ...] = DEFAULT_MUS
    relative_tolerance: float = DEFAULT_RELATIVE_TOLERANCE
    state_class: StateClass = StateClass.PURE
    checks: Optional[tuple[str, ...]] = None  # None runs every registered check
    optimizer: OptimizerConfig = field(
        default_factory=lambda: OptimizerConfig(starts=SUITE_STARTS, max_iterations=SUITE_MAX_ITERATIONS)
    )
    workers: Optional[int] = None
    report_only: bool = False  # fuzzing: violations become findings, never failures

    def __post_init__(self):
        if self.trials < 1:
            raise SuiteError(f"trials must be >= 1, got {self.trials}")
        if not self.dims or any(dim < 2 for dim in self.dims):
            raise SuiteError(f"dims must be >= 2, got {list(self.dims)}")
        if not self.means or not self.mus:
            raise SuiteError("means and mus must be non-empty")
        if any(not 0 <= mu <= 1 for mu in self.mus):
            raise SuiteError(f"mus must lie in [0, 1], got {list(self.mus)}")
        if self.relative_tolerance <= 0:
            raise SuiteError("relative_tolerance must be > 0")
        object.__setattr__(self, "means", tuple(parse_mean_kind(m) for m in self.means))
        object.__setattr__(self, "state_class", StateClass(self.state_class))
        if self.checks is not None:
            for name in self.checks:
                get_check(name)

    def definitions(self) -> list[CheckDefinition]:
        names = self.checks if self.checks is not None else tuple(REGISTRY)
        return [get_check(name) for name in names]

    def as_dict(self) -> dict:
        return {
            "dims": list(self.dims),
            "trials": self.trials,
            "seed": self.seed,
            "means": [m.value for m in self.means],
            "mus": list(self.mus),
            "relative_tolerance": self.relative_tolerance,
            "state_class": self.state_class.value,
            "checks": list(self.checks) if self.checks is not None else None,
            "optimizer": {
                "starts": self.optimizer.starts,
                "max_iterations": self.optimizer.max_iterations,
            },
            "report_only": self.report_only,
        }


@dataclass(frozen=True)
class Variant:
    """One (check, mean, mu, parameter) combination."""
    name: str
    mean: MeanKind
    mu: float
    params: tuple[tuple[str, object], ...] = ()

    @property
    def key(self) -> tuple:
        return (self.name, self.mean.value, self.mu, self.params)


@dataclass
class VariantSummary:
    name: str
    mean: str
    mu: float
    params: dict
    counts: Counter = field(default_factory=Counter)
    worst_slack: Optional[float] = None
    worst_relative_slack: Optional[float] = None

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "mean": self.mean,
            "mu": self.mu,
            "params": self.params,
            "counts": {status.value: self.counts.get(status.value, 0) for status in CheckStatus}
            | {"skipped": self.counts.get("skipped", 0)},
            "worst_slack": self.worst_slack,
            "worst_relative_slack": self.worst_relative_slack,
        }


@dataclass
class SuiteReport:
    """Aggregated outcome of run_suite or fuzz."""
    config: TrialConfig
    counts: Counter = field(default_factory=Counter)
    variants: list[VariantSummary] = field(default_factory=list)
    records: list[dict] = field(default_factory=list)
    counterexamples: list[dict] = field(default_factory=list)
    findings: list[dict] = field(default_factory=list)
    counters: Counter = field(default_factory=Counter)

    @property
    def failed(self) -> int:
        return self.counts.get(CheckStatus.FAIL.value, 0)

    def as_dict(self) -> dict:
        return {
            "config": self.config.as_dict(),
            "counts": {status.value: self.counts.get(status.value, 0) for status in CheckStatus}
            | {"skipped": self.counts.get("skipped", 0)},
            "variants": [summary.as_dict() for summary in self.variants],
            "records": self.records,
            "counterexamples": self.counterexamples,
        }


def variants_for(definition: CheckDefinition, config: TrialConfig) -> list[Variant]:
    """Every (mean, mu, parameter) combination a check runs at under config."""
    means = config.means if definition.varies_mean else (MeanKind.ARITHMETIC,)
    mus = config.mus if definition.varies_mu else (0.5,)
    parameters = definition.parameter_values or (None,)

    variants = []
    for mean, mu, value in product(means, mus, parameters):
        params = ((definition.parameter, value),) if definition.parameter else ()
        variants.append(Variant(definition.name, mean, float(mu), params))
    return variants


def trial_seed(seed: int, family: str, trial: int) -> int:
    sequence = np.random.SeedSequence([seed, FAMILY_CODES[family], trial])
    return int(sequence.generate_state(1)[0])


def instance_for(family: str, dim: int, seed: int) -> tuple[np.ndarray, ...]:
    """The matrices a family contributes to one trial."""
    rng = np.random.default_rng(seed)
    if family == "fixed":
        return (NILPOTENT_EXAMPLE.copy(),)
    if family == "pair":
        return (generate(GeneratorKind.GINIBRE, dim, rng), generate(GeneratorKind.GINIBRE, dim, rng))
    instance = generate(family, dim, rng)
    return tuple(instance) if isinstance(instance, tuple) else (instance,)


def _run_trial(
    config: TrialConfig,
    plan: list[tuple[CheckDefinition, list[Variant]]],
    trial: int,
) -> tuple[list[tuple[Variant, Optional[PropertyCheck], int]], Counter]:
    dim = config.dims[trial % len(config.dims)]
    instances = {}
    outcomes = []
    context = CheckContext(config=config.optimizer, state_class=config.state_class)

    for definition, variants in plan:
        seed = trial_seed(config.seed, definition.family, trial)
        if definition.family not in instances:
            instances[definition.family] = instance_for(definition.family, dim, seed)
        context.config = replace(config.optimizer, seed=seed, workers=None)

        for variant in variants:
            try:
                check = check_inequality(
                    variant.name,
                    instances[definition.family],
                    mean=variant.mean,
                    mu=variant.mu,
                    tol=config.relative_tolerance,
                    params=dict(variant.params),
                    seed=seed,
                    context=context,
                )
            except HypothesisViolation as exc:
                logger.warning("Trial %d skipped %s: %s", trial, variant.name, exc)
                outcomes.append((variant, None, seed))
                continue
            if config.report_only and check.status == CheckStatus.FAIL:
                check.status = CheckStatus.REPORT_ONLY
            outcomes.append((variant, check, seed))

    return outcomes, context.counters


def _parallel_trials(config: TrialConfig, plan) -> list:
    trials = range(config.trials)
    if config.workers and config.workers > 1 and config.trials > 1:
        with ThreadPoolExecutor(max_workers=config.workers) as pool:
            return list(pool.map(lambda t: _run_trial(config, plan, t), trials))
    return [_run_trial(config, plan, t) for t in trials]


def run_suite(config: TrialConfig) -> SuiteReport:
    """
    Execute every selected check over generated instances.

    Failing properties are data in the report, never exceptions.
    """
    plan = [(definition, variants_for(definition, config)) for definition in config.definitions()]
    started = time.perf_counter()
    logger.info(
        "Suite: %d checks, %d variants, %d trials, dims %s",
        len(plan), sum(len(v) for _, v in plan), config.trials, list(config.dims),
    )

    results = _parallel_trials(config, plan)

    report = SuiteReport(config=config)
    summaries: dict[tuple, VariantSummary] = {}
    notes = set()

    for trial, (outcomes, counters) in enumerate(results):
        report.counters.update(counters)
        for variant, check, seed in outcomes:
            summary = summaries.get(variant.key)
            if summary is None:
                summary = VariantSummary(variant.name, variant.mean.value, variant.mu, dict(variant.params))
                summaries[variant.key] = summary

            if check is None:
                summary.counts["skipped"] += 1
                report.counts["skipped"] += 1
                continue

            summary.counts[check.status.value] += 1
            report.counts[check.status.value] += 1
            relative = check.slack / check.scale
            if summary.worst_relative_slack is None or relative < summary.worst_relative_slack:
                summary.worst_relative_slack = relative
                summary.worst_slack = check.slack

            record = {
                "name": check.name,
                "statement": check.statement,
                "status": check.status.value,
                "slack": check.slack,
                "trial": trial,
                "trial_seed": seed,
                "inputs": check.inputs,
                "counterexample": check.counterexample,
            }
            report.records.append(record)

            if check.status == CheckStatus.FAIL:
                report.counterexamples.append(record | {"values": check.values})
            elif check.status == CheckStatus.REPORT_ONLY and not check.holds:
                report.findings.append({"kind": "violation", **record, "values": check.values})
                logger.info("Finding: %s violated in trial %d (slack %.6g)", check.name, trial, check.slack)
            if check.note and check.name not in notes:
                notes.add(check.name)
                report.findings.append({"kind": "erratum", "name": check.name, "note": check.note})
                logger.info("Finding: %s", check.note)

    report.variants = list(summaries.values())
    report.counters["trials"] = config.trials
    logger.info(
        "Suite finished in %.2fs: %s",
        time.perf_counter() - started, dict(report.counts),
    )
    return report


def fuzz(
    prop: str,
    mean: Union[str, MeanKind],
    mu: float,
    trials: int,
    seed: int,
    dims: Sequence[int] = (2, 3, 4),
    state_class: Union[str, StateClass] = StateClass.PURE,
    optimizer: Optional[OptimizerConfig] = None,
    workers: Optional[int] = None,
) -> SuiteReport:
    """
    Findings hunt: run one check at one (mean, mu) in report_only mode.

    Violations (e.g. the triangle inequality for the geometric path) are
    collected as findings; the report never contains failures.
    """
    definition = get_check(prop)
    config = TrialConfig(
        dims=tuple(dims),
        trials=trials,
        seed=seed,
        means=(parse_mean_kind(mean),),
        mus=(float(mu),),
        state_class=state_class,
        checks=(definition.name,),
        optimizer=optimizer or TrialConfig().optimizer,
        workers=workers,
        report_only=True,
    )
    if definition.mode == CheckMode.ASSERT:
        logger.info("Fuzzing assert-mode check %s in report_only mode", prop)
    return run_suite(config)
