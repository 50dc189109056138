"""Monte Carlo driver: paired trials, parameter sweeps, and result files."""
from __future__ import annotations

import csv
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .detection import detection_matrix, sample_observations
from .matching import Matching, is_stable, run_algorithm1, run_deferred_acceptance, run_random_allocation
from .metrics import TrialMetrics, matched_sum_and_min, random_allocation_rates
from .preferences import UTILITIES, ProposalTable, build_preferences
from .scenario import NetworkInstance, ScenarioConfig, rate_matrix, sample_instance

ALGORITHMS = ("proposed", "deferred_acceptance", "random")
METRICS = ("sum_rate", "min_rate", "proposal_count", "rounds", "num_matched")
CSV_HEADER = ("m", "n", "algorithm", "metric", "mean", "stderr", "trials")


class StabilityViolation(AssertionError):
    pass


@dataclass(frozen=True)
class SweepConfig:
    scenario: ScenarioConfig = field(default_factory=ScenarioConfig)
    m_values: Tuple[int, ...] = tuple(range(2, 11))
    n_values: Tuple[int, ...] = (3, 4)
    trials: int = 100_000
    algorithms: Tuple[str, ...] = ALGORITHMS
    base_seed: Optional[int] = None  # None -> scenario.rng_seed
    utility: str = "exp"
    order_by: str = "delta"
    verify_stability: bool = False
    output_path: Optional[str] = None

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if not self.m_values or not self.n_values:
            raise ValueError("m_values and n_values must be nonempty")
        unknown = set(self.algorithms) - set(ALGORITHMS)
        if unknown:
            raise ValueError(f"unknown algorithms: {sorted(unknown)}")
        if self.utility not in UTILITIES:
            raise ValueError(f"unknown utility {self.utility!r}")

    @property
    def seed(self) -> int:
        return self.scenario.rng_seed if self.base_seed is None else self.base_seed


def trial_seeds(base_seed: int, trial_index: int) -> List[np.random.SeedSequence]:
    """Independent (geometry, noise, random-baseline) streams for one trial."""
    root = np.random.SeedSequence(base_seed, spawn_key=(trial_index,))
    return root.spawn(3)


@dataclass
class TrialRecord:
    """Everything computed in one trial; used for tracing and debugging."""

    instance: NetworkInstance
    observations: np.ndarray
    delta: np.ndarray
    eta: np.ndarray
    table: ProposalTable
    full_table: ProposalTable
    matchings: Dict[str, Matching] = field(default_factory=dict)
    choices: Optional[np.ndarray] = None
    metrics: Dict[str, TrialMetrics] = field(default_factory=dict)
    trace: Optional[list] = None


def simulate_trial(
    scenario: ScenarioConfig,
    trial_index: int,
    *,
    base_seed: Optional[int] = None,
    algorithms: Sequence[str] = ALGORITHMS,
    utility: str = "exp",
    order_by: str = "delta",
    verify_stability: bool = False,
    trace: bool = False,
) -> TrialRecord:
    seed = scenario.rng_seed if base_seed is None else base_seed
    geo_seed, noise_seed, rand_seed = trial_seeds(seed, trial_index)
    u_fn = UTILITIES[utility]

    inst = sample_instance(scenario, geo_seed)
    x = sample_observations(scenario, inst, noise_seed)
    delta = detection_matrix(scenario, inst, x)
    eta = rate_matrix(scenario, inst)
    alpha = scenario.alpha_vector()
    table = build_preferences(delta, eta, alpha, order_by=order_by)
    full = build_preferences(delta, eta, alpha, filter_nonpositive=False, order_by=order_by)
    rec = TrialRecord(inst, x, delta, eta, table, full, trace=[] if trace else None)

    for alg in algorithms:
        if alg == "random":
            rec.choices = run_random_allocation(scenario, inst, rand_seed)
            s, lo = random_allocation_rates(scenario, inst, rec.choices)
            rec.metrics[alg] = TrialMetrics(alg, s, lo, inst.num_sus)
            continue
        if alg == "proposed":
            mt = run_algorithm1(table, u_fn, inst.pu_active, trace=rec.trace)
            if verify_stability:
                report = is_stable(mt, table, u_fn, inst.pu_active)
                if not report.stable:
                    raise StabilityViolation(f"trial {trial_index}: blocking pairs {report.blocking_pairs}")
        else:
            mt = run_deferred_acceptance(full, u_fn, inst.pu_active)
        rec.matchings[alg] = mt
        s, lo, k = matched_sum_and_min(mt, eta)
        rec.metrics[alg] = TrialMetrics(alg, s, lo, k, mt.proposal_count, mt.rounds)
    return rec


def run_trial(scenario: ScenarioConfig, trial_index: int, **kwargs) -> Dict[str, TrialMetrics]:
    """Metrics of every requested algorithm on one shared instance."""
    return simulate_trial(scenario, trial_index, **kwargs).metrics


@dataclass(frozen=True)
class MetricStats:
    mean: float
    stderr: float
    trials: int


# (m, n, algorithm) -> metric -> stats
SweepSummary = Dict[Tuple[int, int, str], Dict[str, MetricStats]]


def summarize(values: Sequence[float]) -> MetricStats:
    """Mean and standard error with exactly rounded sums (order independent)."""
    n = len(values)
    mean = math.fsum(values) / n
    if n < 2:
        return MetricStats(mean, 0.0, n)
    var = math.fsum((x - mean) ** 2 for x in values) / (n - 1)
    return MetricStats(mean, math.sqrt(var / n), n)


def _run_chunk(args):
    scenario, indices, kw = args
    out = []
    for t in indices:
        out.append({alg: tm.as_dict() for alg, tm in run_trial(scenario, t, **kw).items()})
    return out


def run_cell(sweep: SweepConfig, m: int, n: int, workers: int = 1) -> Dict[str, Dict[str, MetricStats]]:
    scenario = replace(sweep.scenario, num_sus=m, num_pus=n)
    kw = dict(
        base_seed=sweep.seed,
        algorithms=sweep.algorithms,
        utility=sweep.utility,
        order_by=sweep.order_by,
        verify_stability=sweep.verify_stability,
    )
    indices = list(range(sweep.trials))
    if workers <= 1:
        rows = _run_chunk((scenario, indices, kw))
    else:
        size = max(1, math.ceil(len(indices) / (4 * workers)))
        chunks = [(scenario, indices[i : i + size], kw) for i in range(0, len(indices), size)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = [r for part in pool.map(_run_chunk, chunks) for r in part]

    cell = {}
    for alg in sweep.algorithms:
        cell[alg] = {}
        for metric in METRICS:
            vals = [r[alg][metric] for r in rows if metric in r[alg]]
            if vals:
                cell[alg][metric] = summarize(vals)
    return cell


def run_sweep(sweep: SweepConfig, workers: int = 1) -> SweepSummary:
    summary: SweepSummary = {}
    for n in sweep.n_values:
        for m in sweep.m_values:
            for alg, stats in run_cell(sweep, m, n, workers).items():
                summary[(m, n, alg)] = stats
    return summary


def _fmt(x) -> str:
    return format(x, ".12g")


def summary_rows(summary: SweepSummary) -> List[Tuple[str, ...]]:
    rows = []
    for (m, n, alg), stats in summary.items():
        for metric in METRICS:
            if metric in stats:
                st = stats[metric]
                rows.append((str(m), str(n), alg, metric, _fmt(st.mean), _fmt(st.stderr), str(st.trials)))
    return rows


def write_results(summary: SweepSummary, path, fmt: str = "csv") -> None:
    """Write one row per (M, N, algorithm, metric) as CSV or JSON."""
    rows = summary_rows(summary)
    if fmt == "csv":
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(CSV_HEADER)
            w.writerows(rows)
    elif fmt == "json":
        records = [
            {"m": int(r[0]), "n": int(r[1]), "algorithm": r[2], "metric": r[3],
             "mean": float(r[4]), "stderr": float(r[5]), "trials": int(r[6])}
            for r in rows
        ]
        with open(path, "w") as fh:
            json.dump(records, fh, indent=1)
            fh.write("\n")
    else:
        raise ValueError(f"unknown format {fmt!r}")


def read_results(path) -> SweepSummary:
    """Parse a CSV written by :func:`write_results`."""
    summary: SweepSummary = {}
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if tuple(header) != CSV_HEADER:
            raise ValueError(f"unexpected header {header}")
        for m, n, alg, metric, mean, stderr, trials in reader:
            key = (int(m), int(n), alg)
            summary.setdefault(key, {})[metric] = MetricStats(float(mean), float(stderr), int(trials))
    return summary
