"""Ball-size enumeration for any group with an equality oracle, plus
descriptive growth indicators.

Deduplication keeps one canonical representative per group element: new
candidates are bucketed by a cheap invariant (when the group provides one)
and confirmed against bucket members with the exact equality oracle.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass

from .errors import BudgetExceeded
from .words import concat


@dataclass
class GrowthTable:
    name: str
    ngens: int
    gamma: list  # gamma[n] = ball size at radius n
    elapsed_ms: list

    def to_csv(self) -> str:
        lines = ["n,gamma,elapsed_ms"]
        for n, (g, ms) in enumerate(zip(self.gamma, self.elapsed_ms)):
            lines.append(f"{n},{g},{ms:.3f}")
        return "\n".join(lines) + "\n"


def ball_sizes(
    equal,
    ngens: int,
    n_max: int,
    name: str = "",
    invariant=None,
    max_elements: int = 200_000,
) -> GrowthTable:
    """Exact ball sizes gamma(0..n_max) for the group generated by `ngens`
    symmetric generators, deduplicating with the `equal` oracle.

    `invariant(word)` may supply a hashable prehash (equal elements must get
    equal keys); without one every candidate is confirmed against all known
    representatives.
    """
    letters = [i for i in range(1, ngens + 1)] + [-i for i in range(1, ngens + 1)]
    classes = {}  # invariant key -> list of representative words
    reps = [()]
    key0 = invariant(()) if invariant else ()
    classes[key0] = [()]
    gamma = [1]
    elapsed = [0.0]
    frontier = [()]
    total = 1
    for _ in range(n_max):
        t0 = time.perf_counter()
        new_reps = []
        for w in frontier:
            for s in letters:
                cand = concat(w, (s,))
                key = invariant(cand) if invariant else ()
                bucket = classes.setdefault(key, [])
                if any(equal(cand, known) for known in bucket):
                    continue
                bucket.append(cand)
                new_reps.append(cand)
                total += 1
                if total > max_elements:
                    raise BudgetExceeded(f"ball exceeds {max_elements} elements")
        frontier = new_reps
        gamma.append(total)
        elapsed.append((time.perf_counter() - t0) * 1000)
    return GrowthTable(name, ngens, gamma, elapsed)


@dataclass
class GrowthProbe:
    """Descriptive fit indicators; finite data cannot settle the trichotomy,
    so these are explicitly non-conclusive."""

    polynomial_degree: float  # slope of log gamma against log n
    exponential_rate: float  # slope of log gamma against n
    note: str = (
        "indicators from finite data; not a growth-type classification"
    )


def growth_probe(table: GrowthTable) -> GrowthProbe:
    n_max = len(table.gamma) - 1
    if n_max < 2:
        raise ValueError("need at least radius 2 to fit anything")
    # fit on the upper half of the range, where the asymptotics dominate
    ns = range(max(1, n_max // 2), n_max + 1)
    logg = [math.log(table.gamma[n]) for n in ns]
    degree = _slope([math.log(n) for n in ns], logg)
    rate = _slope(list(ns), logg)
    return GrowthProbe(degree, rate)


def _slope(xs, ys):
    n = len(xs)
    mx, my = sum(xs) / n, sum(ys) / n
    num = sum((x - mx) * (y - my) for x, y in zip(xs, ys))
    den = sum((x - mx) ** 2 for x in xs)
    return num / den if den else 0.0
