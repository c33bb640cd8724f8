"""
ifmlab/montecarlo.py

Reproducible trial-by-trial sampling of an exact OutcomeDistribution.

Per-trial randomness is counter based: trial i of a run with master seed s
draws the uniform

    z = splitmix64_mix(s + (i + 1) * 0x9E3779B97F4A7C15)     (mod 2^64)
    u = (z >> 11) * 2^-53                                     in [0, 1)

where splitmix64_mix is the SplitMix64 output finalizer
(xor-shift 30, * 0xBF58476D1CE4E5B9, xor-shift 27, * 0x94D049BB133111EB, xor-shift 31).
A trial therefore depends only on (s, i): any split of the trial range,
sequential or across workers, yields the same ledger.

The outcome is chosen by inverse CDF over the labels in lexicographic order.
Changing either the mixing or the label order changes every ledger.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Dict, Mapping

import numpy as np
from scipy import stats

from .core import OutcomeDistribution
from .errors import DomainError

MASK64 = (1 << 64) - 1
GOLDEN_GAMMA = 0x9E3779B97F4A7C15
CHUNK = 1 << 20

# Upper 0.1% points of the chi-square distribution, dof 1..30
# (NIST/SEMATECH e-Handbook of Statistical Methods, table 1.3.6.7.4).
CHI2_CRITICAL_999 = {
    1: 10.828, 2: 13.816, 3: 16.266, 4: 18.467, 5: 20.515,
    6: 22.458, 7: 24.322, 8: 26.124, 9: 27.877, 10: 29.588,
    11: 31.264, 12: 32.909, 13: 34.528, 14: 36.123, 15: 37.697,
    16: 39.252, 17: 40.790, 18: 42.312, 19: 43.820, 20: 45.315,
    21: 46.797, 22: 48.268, 23: 49.728, 24: 51.179, 25: 52.620,
    26: 54.052, 27: 55.476, 28: 56.892, 29: 58.301, 30: 59.703,
}
MIN_EXPECTED = 5.0


@dataclass(frozen=True)
class TrialLedger:
    master_seed: int
    trials: int
    counts: Mapping[str, int]

    def __post_init__(self):
        counts = {label: int(self.counts[label]) for label in sorted(self.counts)}
        if any(c < 0 for c in counts.values()):
            raise DomainError("counts must be >= 0")
        if sum(counts.values()) != self.trials:
            raise DomainError("counts sum to %d, not trials=%d" % (sum(counts.values()), self.trials))
        object.__setattr__(self, "counts", counts)

    def frequencies(self) -> Dict[str, float]:
        if self.trials == 0:
            return {label: 0.0 for label in self.counts}
        return {label: c / self.trials for label, c in self.counts.items()}

    def merge(self, other: "TrialLedger") -> "TrialLedger":
        if other.master_seed != self.master_seed:
            raise DomainError("cannot merge ledgers of different master seeds")
        counts = dict(self.counts)
        for label, c in other.counts.items():
            counts[label] = counts.get(label, 0) + c
        return TrialLedger(self.master_seed, self.trials + other.trials, counts)

    def to_dict(self) -> Dict:
        return {"master_seed": self.master_seed, "trials": self.trials, "counts": dict(self.counts)}


@dataclass(frozen=True)
class ChiSquareResult:
    statistic: float
    dof: int
    passed: bool


def trial_uniforms(master_seed: int, first_trial: int, count: int) -> np.ndarray:
    """Uniforms in [0, 1) for trials first_trial .. first_trial + count - 1."""
    idx = np.arange(first_trial, first_trial + count, dtype=np.uint64)
    with np.errstate(over="ignore"):
        z = np.uint64(master_seed & MASK64) + (idx + np.uint64(1)) * np.uint64(GOLDEN_GAMMA)
        z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
        z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
        z = z ^ (z >> np.uint64(31))
    return (z >> np.uint64(11)).astype(np.float64) * (1.0 / (1 << 53))


def _check_trials(trials: int) -> None:
    if isinstance(trials, bool) or not isinstance(trials, (int, np.integer)) or trials < 0:
        raise DomainError("trials must be an integer >= 0, got %r" % (trials,))


def sample(dist: OutcomeDistribution, trials: int, master_seed: int, first_trial: int = 0) -> TrialLedger:
    """Draw `trials` outcomes, trial indices starting at `first_trial`."""
    _check_trials(trials)
    labels = dist.labels
    cdf = np.minimum(np.cumsum([dist[label] for label in labels]), 1.0)
    cdf[-1] = 1.0
    counts = np.zeros(len(labels), dtype=np.int64)
    for start in range(0, trials, CHUNK):
        n = min(CHUNK, trials - start)
        u = trial_uniforms(master_seed, first_trial + start, n)
        counts += np.bincount(np.searchsorted(cdf, u, side="right"), minlength=len(labels))
    return TrialLedger(master_seed, trials, {label: int(c) for label, c in zip(labels, counts)})


def sample_parallel(dist: OutcomeDistribution, trials: int, master_seed: int, workers: int = 4) -> TrialLedger:
    """`sample` split into contiguous trial ranges over a thread pool; same ledger."""
    _check_trials(trials)
    if workers < 1:
        raise DomainError("workers must be >= 1, got %r" % workers)
    bounds = [trials * k // workers for k in range(workers + 1)]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        parts = list(pool.map(
            lambda k: sample(dist, bounds[k + 1] - bounds[k], master_seed, first_trial=bounds[k]),
            range(workers),
        ))
    ledger = parts[0]
    for part in parts[1:]:
        ledger = ledger.merge(part)
    return ledger


def chi2_critical_999(dof: int) -> float:
    if dof < 1:
        raise DomainError("dof must be >= 1, got %r" % dof)
    if dof in CHI2_CRITICAL_999:
        return CHI2_CRITICAL_999[dof]
    return float(stats.chi2.ppf(0.999, dof))


def chi_square_check(ledger: TrialLedger, dist: OutcomeDistribution) -> ChiSquareResult:
    """Pearson goodness of fit of `ledger` against `dist` at the 99.9% level.

    Outcomes with expected count < 5 are pooled into one bucket; a pool that
    still expects < 5 is folded into the regular bucket with the smallest
    expectation. Any count on an outcome of probability 0 fails outright.
    dof = buckets - 1; with a single bucket the check passes trivially.
    """
    n = ledger.trials
    if n == 0:
        return ChiSquareResult(0.0, 0, True)
    labels = sorted(set(dist.labels) | set(ledger.counts))
    observed = {label: ledger.counts.get(label, 0) for label in labels}
    expected = {label: n * dist[label] for label in labels}

    if any(observed[label] > 0 and dist[label] == 0 for label in labels):
        return ChiSquareResult(math.inf, max(len(labels) - 1, 0), False)

    buckets = [[observed[l], expected[l]] for l in labels if expected[l] >= MIN_EXPECTED]
    pool = [sum(observed[l] for l in labels if expected[l] < MIN_EXPECTED),
            sum(expected[l] for l in labels if expected[l] < MIN_EXPECTED)]
    if pool[1] >= MIN_EXPECTED or (pool[1] > 0 and not buckets):
        buckets.append(pool)
    elif pool[1] > 0 or pool[0] > 0:
        smallest = min(buckets, key=lambda b: b[1])
        smallest[0] += pool[0]
        smallest[1] += pool[1]

    dof = len(buckets) - 1
    if dof < 1:
        return ChiSquareResult(0.0, 0, True)
    statistic = sum((o - e) ** 2 / e for o, e in buckets)
    return ChiSquareResult(statistic, dof, statistic < chi2_critical_999(dof))


def binomial_bound(p: float, trials: int, sigmas: float = 4.0) -> float:
    if not trials:
        return 0.0
    p = min(max(p, 0.0), 1.0)
    return sigmas * math.sqrt(max(0.0, p * (1.0 - p)) / trials)


def within_binomial_bound(ledger: TrialLedger, dist: OutcomeDistribution, sigmas: float = 4.0) -> bool:
    """Every empirical frequency within `sigmas` binomial standard errors of its probability."""
    freqs = ledger.frequencies()
    return all(
        abs(freqs.get(label, 0.0) - dist[label]) <= binomial_bound(dist[label], ledger.trials, sigmas)
        for label in set(dist.labels) | set(freqs)
    )
