"""Failure probability of sampling-based availability checks.

The adversary erases a stopping set of a chosen weight; the sampler
queries some variable nodes and detects the attack iff a query lands in
the erased set.  This module gives the closed form for uniform random
sampling, exact results for fixed sample sets against an adversary
drawing uniformly from a catalog, a brute-force optimal fixed set for
small instances, and a vectorized Monte-Carlo simulator.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from itertools import combinations
from collections.abc import Iterable, Sequence
from pathlib import Path

import numpy as np

from ecpeg.sampling import SampleSetFamily, greedy_sample_set
from ecpeg.stopsets import StoppingSetCatalog, fraction_touched

__all__ = [
    "ENSEMBLE_STOPPING_RATIO",
    "ENSEMBLE_MIN_STOPPING_WEIGHT",
    "ENSEMBLE_MAX_CN_DEGREE",
    "McResult",
    "FailurePoint",
    "failure_prob_random",
    "failure_prob_fixed",
    "best_fixed_sample",
    "monte_carlo_failure",
    "failure_curve_points",
    "ensemble_reference_points",
    "write_failure_csv",
]

# Published reference values for the regular rate-1/2 ensemble with
# variable degree 8 and check degree 16, used only as comparison
# overlays: the asymptotic stopping ratio, and the smallest stopping set
# and largest check degree realized by a concrete construction of it.
ENSEMBLE_STOPPING_RATIO = 0.064353
ENSEMBLE_MIN_STOPPING_WEIGHT = 9
ENSEMBLE_MAX_CN_DEGREE = 11

_MC_CHUNK = 1 << 14


def failure_prob_random(n: int, weight: int, s: int) -> float:
    """Miss probability of s uniform queries (with replacement).

    Each query independently lands outside a fixed erased set of
    `weight` nodes with probability 1 - weight/n.
    """
    if n < 1:
        raise ValueError(f"need n >= 1, got {n}")
    if not 0 <= weight <= n:
        raise ValueError(f"weight must be in 0..{n}, got {weight}")
    if s < 0:
        raise ValueError(f"sample count must be >= 0, got {s}")
    return (1.0 - weight / n) ** s


def failure_prob_fixed(
    catalog: StoppingSetCatalog, sample_vns: Iterable[int], weight: int
) -> float:
    """Miss probability of a fixed sample set, adversary uniform over the
    catalog's weight-`weight` sets.  One minus the fraction touched."""
    return 1.0 - fraction_touched(catalog, sample_vns, weight)


def best_fixed_sample(
    catalog: StoppingSetCatalog, s: int, weight: int, max_subsets: int = 5_000_000
) -> tuple[frozenset[int], float]:
    """Optimal fixed s-node sample set against the uniform adversary.

    Scans every s-subset of nodes and returns one that touches the most
    weight-`weight` sets, together with its miss probability (the
    smallest achievable by any fixed set).  Cost is n choose s; the
    guard rejects instances beyond `max_subsets` before starting.
    """
    n = catalog.n
    if not 0 <= s <= n:
        raise ValueError(f"sample budget must be in 0..{n}, got {s}")
    from math import comb

    if comb(n, s) > max_subsets:
        raise ValueError(
            f"{n} choose {s} = {comb(n, s)} subsets exceeds the scan guard {max_subsets}"
        )
    sets = catalog.sets(weight)
    if not sets:
        return frozenset(range(1, s + 1)), 1.0 - fraction_touched(catalog, (), weight)
    member = np.zeros((len(sets), n + 1), dtype=bool)
    for i, stop in enumerate(sets):
        member[i, list(stop)] = True
    best_hit = -1
    best: tuple[int, ...] = ()
    for cand in combinations(range(1, n + 1), s):
        hit = int(member[:, cand].any(axis=1).sum())
        if hit > best_hit:
            best_hit = hit
            best = cand
    return frozenset(best), 1.0 - best_hit / len(sets)


@dataclass(frozen=True)
class McResult:
    """Monte-Carlo estimate with its binomial standard error."""

    p_failure: float
    stderr: float
    failures: int
    trials: int


def monte_carlo_failure(
    catalog: StoppingSetCatalog,
    weight: int,
    s: int,
    trials: int,
    seed: int,
    strategy: str = "random",
    sample_set: Iterable[int] | None = None,
) -> McResult:
    """Simulate the detection game against a uniform catalog adversary.

    strategy "random" draws s fresh uniform nodes (with replacement)
    per trial; "fixed" always queries `sample_set`.  Trials run in
    fixed-size chunks, each with its own generator spawned from
    (seed, chunk index), so results are bit-reproducible for a given
    (trials, seed) no matter how the work is scheduled.
    """
    if trials < 1:
        raise ValueError(f"need at least one trial, got {trials}")
    if s < 0:
        raise ValueError(f"sample count must be >= 0, got {s}")
    sets = catalog.sets(weight)
    if not sets:
        raise ValueError(f"catalog has no sets of weight {weight} to attack with")
    n = catalog.n
    member = np.zeros((len(sets), n + 1), dtype=bool)
    for i, stop in enumerate(sets):
        member[i, list(stop)] = True

    if strategy == "fixed":
        if sample_set is None:
            raise ValueError("strategy 'fixed' needs a sample_set")
        fixed = sorted(set(sample_set))
        for v in fixed:
            if not 1 <= v <= n:
                raise ValueError(f"variable node {v} out of range 1..{n}")
        hit_by_set = (
            member[:, fixed].any(axis=1) if fixed else np.zeros(len(sets), dtype=bool)
        )
    elif strategy == "random":
        if sample_set is not None:
            raise ValueError("strategy 'random' draws its own samples")
    else:
        raise ValueError(f"unknown strategy {strategy!r}")

    failures = 0
    nchunks = (trials + _MC_CHUNK - 1) // _MC_CHUNK
    for chunk in range(nchunks):
        count = min(_MC_CHUNK, trials - chunk * _MC_CHUNK)
        rng = np.random.default_rng(np.random.SeedSequence([seed, chunk]))
        attacked = rng.integers(len(sets), size=count)
        if strategy == "random":
            draws = rng.integers(1, n + 1, size=(count, s))
            hits = member[attacked[:, None], draws].any(axis=1) if s else np.zeros(count, dtype=bool)
        else:
            hits = hit_by_set[attacked]
        failures += int(count - hits.sum())
    p = failures / trials
    return McResult(
        p_failure=p,
        stderr=float(np.sqrt(p * (1.0 - p) / trials)),
        failures=failures,
        trials=trials,
    )


@dataclass(frozen=True)
class FailurePoint:
    """One point of a failure curve; weight None marks an overlay row
    that does not correspond to a concrete erasure weight."""

    strategy: str
    n: int
    weight: int | None
    s: int
    p_failure: float
    stderr: float


def failure_curve_points(
    catalog: StoppingSetCatalog,
    family: SampleSetFamily,
    weights: Sequence[int],
    s_values: Sequence[int],
    mc_trials: int = 0,
    seed: int = 0,
) -> list[FailurePoint]:
    """Exact failure curves for random and greedy sampling, optionally
    cross-checked by Monte Carlo when mc_trials > 0.

    Weights with no catalog entry get no rows (there is no adversary
    move); the caller can inspect catalog.weights() to see what exists.
    """
    if catalog.n != family.n:
        raise ValueError(f"catalog n={catalog.n} but family n={family.n}")
    points: list[FailurePoint] = []
    n = catalog.n
    for weight in weights:
        if not catalog.sets(weight):
            continue
        for s in s_values:
            points.append(
                FailurePoint("random", n, weight, s, failure_prob_random(n, weight, s), 0.0)
            )
        for s in s_values:
            sample = greedy_sample_set(family, s)
            points.append(
                FailurePoint(
                    "greedy", n, weight, s, failure_prob_fixed(catalog, sample, weight), 0.0
                )
            )
        if mc_trials > 0:
            for s in s_values:
                est = monte_carlo_failure(catalog, weight, s, mc_trials, seed)
                points.append(
                    FailurePoint("mc_random", n, weight, s, est.p_failure, est.stderr)
                )
            for s in s_values:
                sample = greedy_sample_set(family, s)
                est = monte_carlo_failure(
                    catalog, weight, s, mc_trials, seed, strategy="fixed", sample_set=sample
                )
                points.append(
                    FailurePoint("mc_greedy", n, weight, s, est.p_failure, est.stderr)
                )
    return points


def ensemble_reference_points(n: int, s_values: Sequence[int]) -> list[FailurePoint]:
    """Overlay rows from the published ensemble stopping ratio.

    Uses (1 - ENSEMBLE_STOPPING_RATIO)**s: random sampling against an
    erasure of the asymptotic worst-case relative size.  These rows
    carry no weight column because the ratio is not tied to any erasure
    weight of the graph under study.
    """
    return [
        FailurePoint(
            "published_ensemble",
            n,
            None,
            s,
            (1.0 - ENSEMBLE_STOPPING_RATIO) ** s,
            0.0,
        )
        for s in s_values
    ]


def write_failure_csv(points: Iterable[FailurePoint], path: str | Path) -> None:
    """Rows of strategy,n,mu,s,p_f,stderr; overlay rows leave mu empty."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["strategy", "n", "mu", "s", "p_f", "stderr"])
        for p in points:
            writer.writerow(
                [
                    p.strategy,
                    p.n,
                    "" if p.weight is None else p.weight,
                    p.s,
                    f"{p.p_failure:.12g}",
                    f"{p.stderr:.12g}",
                ]
            )
