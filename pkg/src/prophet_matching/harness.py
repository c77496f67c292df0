"""Monte Carlo experiment runner: competitive-ratio estimation and persistence.

Each trial derives its own seed from the master seed and the trial index, so
results are reproducible bit-for-bit and independent of execution order.  The
reported ratio is the ratio of means (expected optimum over expected online
weight); the mean of per-trial ratios is kept only as a diagnostic.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .adversary import OrderStrategy, make_controller, static_order
from .core import CapabilityError, InputError
from .distributions import InstanceSpec, draw_realization
from .edge_arrival import run_online_edge
from .oracle import max_weight_matching
from .truthful import run_truthful
from .vertex_arrival import run_offline_vertex, run_online_vertex

MODELS = ("edge", "vertex", "truthful")


@dataclass(frozen=True)
class ExperimentConfig:
    """One experiment: an instance, a model, an order strategy, and trials."""

    instance: InstanceSpec
    model: str
    strategy: OrderStrategy
    trials: int
    master_seed: int = 0
    out_path: str | None = None
    out_format: str = "csv"

    def __post_init__(self):
        if self.model not in MODELS:
            raise InputError(f"unknown model {self.model!r}")
        if self.trials < 1:
            raise InputError("trials must be at least 1")
        if self.out_format not in ("csv", "json"):
            raise InputError(f"unknown output format {self.out_format!r}")
        if self.model in ("vertex", "truthful") and self.instance.graph.kind != "bipartite":
            raise CapabilityError(f"model {self.model!r} requires a bipartite instance")


@dataclass(frozen=True)
class TrialRow:
    """Per-trial measurements; optional columns stay None where not applicable."""

    trial: int
    seed: int
    matching_weight: float
    opt_weight: float
    sample_matching_weight: float
    feasible_weight: float
    safe_matching_weight: float | None = None


@dataclass(frozen=True)
class RatioEstimate:
    """Summary of an estimate_ratio run.

    ``ratio`` is mean_opt / mean_alg; when the algorithm mean is zero but the
    optimum is not, the ratio is reported as infinity and flagged.
    """

    mean_alg: float
    mean_opt: float
    ratio: float
    se_alg: float
    se_opt: float
    trials: int
    ratio_infinite: bool = False
    mean_of_ratios: float | None = None
    rows: tuple[TrialRow, ...] = field(default=(), repr=False)


def trial_seed(master_seed: int, trial: int) -> int:
    """Per-trial realization seed derived from the master seed."""
    return int(np.random.SeedSequence([master_seed, trial]).generate_state(1, np.uint64)[0])


def resolve_order(
    strategy: OrderStrategy,
    model: str,
    spec: InstanceSpec,
    real,
    seed: int = 0,
) -> list[int]:
    """Materialize any strategy into the concrete arrival order for one run.

    Non-adaptive strategies are computed directly.  Adaptive strategies are
    resolved by driving the model's online algorithm with the policy and
    recording the arrivals it chose; the policy reacts only to observable
    state, so replaying the recorded order reproduces the run exactly.
    """
    if strategy.kind != "adaptive":
        return static_order(strategy, spec.graph, real, model, seed)
    controller = make_controller(strategy, spec.graph, real, model, seed)
    if model == "edge":
        run_online_edge(spec, real, controller)
    elif model == "vertex":
        run_online_vertex(spec, real, controller)
    else:
        run_truthful(spec, real, controller)
    return list(controller.history)


def _mean_se(xs: np.ndarray) -> tuple[float, float]:
    mean = float(xs.mean()) if len(xs) else 0.0
    if len(xs) < 2:
        return mean, 0.0
    return mean, float(xs.std(ddof=1) / math.sqrt(len(xs)))


def summarize(rows: list[TrialRow]) -> RatioEstimate:
    alg = np.array([r.matching_weight for r in rows])
    opt = np.array([r.opt_weight for r in rows])
    mean_alg, se_alg = _mean_se(alg)
    mean_opt, se_opt = _mean_se(opt)
    infinite = mean_alg == 0.0 and mean_opt > 0.0
    if infinite:
        ratio = math.inf
    elif mean_alg == 0.0:
        ratio = math.nan
    else:
        ratio = mean_opt / mean_alg
    positive = alg > 0
    mean_of_ratios = float((opt[positive] / alg[positive]).mean()) if positive.any() else None
    return RatioEstimate(
        mean_alg=mean_alg,
        mean_opt=mean_opt,
        ratio=ratio,
        se_alg=se_alg,
        se_opt=se_opt,
        trials=len(rows),
        ratio_infinite=infinite,
        mean_of_ratios=mean_of_ratios,
        rows=tuple(rows),
    )


def run_trial(config: ExperimentConfig, trial: int) -> TrialRow:
    """Run one seeded trial of the configured model and measure it."""
    spec = config.instance
    seed = trial_seed(config.master_seed, trial)
    real = draw_realization(spec, seed)
    order = resolve_order(config.strategy, config.model, spec, real, seed=seed)
    safe_weight = None
    if config.model == "edge":
        record = run_online_edge(spec, real, order)
    elif config.model == "vertex":
        record = run_online_vertex(spec, real, order)
        safe_weight = run_offline_vertex(spec, real, order).safe_matching.weight
    else:
        record = run_truthful(spec, real, order).record
    opt = max_weight_matching(spec.graph, real.reals)
    return TrialRow(
        trial=trial,
        seed=seed,
        matching_weight=record.matching.weight,
        opt_weight=opt.weight,
        sample_matching_weight=record.sample_matching.weight,
        feasible_weight=record.feasible_weight,
        safe_matching_weight=safe_weight,
    )


def estimate_ratio(config: ExperimentConfig) -> RatioEstimate:
    """Estimate the competitive ratio over seeded independent trials.

    Deterministic given the config; trials are aggregated in index order so
    the output does not depend on how they were scheduled.
    """
    rows = [run_trial(config, t) for t in range(config.trials)]
    return summarize(rows)


# ---------------------------------------------------------------------------
# persistence

_CSV_COLUMNS = (
    "trial",
    "seed",
    "matching_weight",
    "opt_weight",
    "sample_matching_weight",
    "feasible_weight",
    "safe_matching_weight",
)


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, float):
        return repr(x)
    return str(x)


def estimate_to_csv(estimate: RatioEstimate) -> str:
    """Render per-trial rows as CSV; byte-identical for identical configs."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(_CSV_COLUMNS)
    for r in estimate.rows:
        writer.writerow(
            [
                r.trial,
                r.seed,
                _fmt(r.matching_weight),
                _fmt(r.opt_weight),
                _fmt(r.sample_matching_weight),
                _fmt(r.feasible_weight),
                _fmt(r.safe_matching_weight),
            ]
        )
    return buf.getvalue()


def estimate_to_json(estimate: RatioEstimate) -> str:
    data = {
        "trials": estimate.trials,
        "mean_alg": estimate.mean_alg,
        "se_alg": estimate.se_alg,
        "mean_opt": estimate.mean_opt,
        "se_opt": estimate.se_opt,
        "ratio": "inf" if estimate.ratio_infinite else estimate.ratio,
        "ratio_infinite": estimate.ratio_infinite,
        "mean_of_ratios": estimate.mean_of_ratios,
    }
    if isinstance(data["ratio"], float) and math.isnan(data["ratio"]):
        data["ratio"] = None
    return json.dumps(data, indent=2, sort_keys=True) + "\n"


def save_results(result, path: str | Path, fmt: str = "csv"):
    """Write a RatioEstimate or an invariant-suite report to disk."""
    from .invariants import SuiteReport, report_to_csv, report_to_json

    if isinstance(result, RatioEstimate):
        text = estimate_to_csv(result) if fmt == "csv" else estimate_to_json(result)
    elif isinstance(result, SuiteReport):
        text = report_to_csv(result) if fmt == "csv" else report_to_json(result)
    else:
        raise InputError(f"cannot save object of type {type(result).__name__}")
    Path(path).write_text(text)
