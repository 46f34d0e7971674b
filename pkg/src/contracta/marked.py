"""The space of marked groups: free-group balls, kernel-ball valuations, the
exp(-v) ultrametric, and convergence reports for kernel chains.

A marked group is a rank plus a decidable kernel-membership oracle on the
free group of that rank.  The valuation v(A, B) is the largest radius whose
kernel balls agree; full agreement through the examined radius is reported as
">= radius" and never as a certified infinite distance.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

from .errors import BudgetExceeded
from .words import Word

DEFAULT_BALL_CAP = 5_000_000


@dataclass
class MarkedGroup:
    rank: int
    oracle: object  # callable Word -> bool (kernel membership)
    name: str = ""
    # optional sound congruence key: equal keys must imply equal membership
    norm_key: object = None
    _cache: dict = field(default_factory=dict, repr=False)

    def contains(self, word) -> bool:
        if self.norm_key is None:
            return self.oracle(word)
        key = self.norm_key(word)
        if key not in self._cache:
            self._cache[key] = self.oracle(word)
        return self._cache[key]


def free_ball(k: int, n: int, cap: int = DEFAULT_BALL_CAP):
    """All freely reduced words of length <= n in rank k, BFS order."""
    if k < 1 or n < 0:
        raise ValueError("need rank >= 1 and radius >= 0")
    size = ball_size(k, n)
    if size > cap:
        raise BudgetExceeded(f"free ball has {size} words, cap is {cap}")
    out = [()]
    frontier = [()]
    letters = [i for i in range(1, k + 1)] + [-i for i in range(1, k + 1)]
    for _ in range(n):
        nxt = []
        for w in frontier:
            for s in letters:
                if w and w[-1] == -s:
                    continue
                nxt.append(w + (s,))
        out.extend(nxt)
        frontier = nxt
    return out


def ball_size(k: int, n: int) -> int:
    return 1 + sum(2 * k * (2 * k - 1) ** (i - 1) for i in range(1, n + 1))


def _sphere(k: int, n: int):
    """Freely reduced words of length exactly n, generated lazily."""
    letters = [i for i in range(1, k + 1)] + [-i for i in range(1, k + 1)]

    def extend(w, depth):
        if depth == 0:
            yield w
            return
        for s in letters:
            if w and w[-1] == -s:
                continue
            yield from extend(w + (s,), depth - 1)

    yield from extend((), n)


@dataclass(frozen=True)
class Valuation:
    """Largest agreement radius; `at_least` means agreement held through the
    whole examined radius, so the true valuation is >= value."""

    value: int
    at_least: bool
    radius: int

    @property
    def distance(self) -> float:
        return 0.0 if self.at_least else math.exp(-self.value)

    def __str__(self):
        v = f">= {self.value}" if self.at_least else str(self.value)
        return f"v = {v}, d = {self.distance:.6g}"


def valuation(a: MarkedGroup, b: MarkedGroup, radius: int, congruence=None) -> Valuation:
    """Scan balls outward; the first radius with a membership disagreement
    ends the scan.  With a shared `congruence` (objects exposing
    `normal_form`, length-nonincreasing and sound for both kernels, and
    `ball(radius)` enumerating its irreducible words), the scan runs over
    congruence representatives instead of the full free ball."""
    if a.rank != b.rank:
        raise ValueError("marked groups must have equal ranks")
    if radius < 0:
        raise ValueError("radius must be >= 0")
    if congruence is not None:
        disagreements = [
            len(w)
            for w in congruence.ball(radius)
            if w and a.contains(w) != b.contains(w)
        ]
        if disagreements:
            return Valuation(min(disagreements) - 1, False, radius)
        return Valuation(radius, True, radius)
    for r in range(1, radius + 1):
        for w in _sphere(a.rank, r):
            if a.contains(w) != b.contains(w):
                return Valuation(r - 1, False, radius)
    return Valuation(radius, True, radius)


@dataclass
class ConvergenceRow:
    n: int
    valuation: Valuation


@dataclass
class ConvergenceReport:
    rows: list
    radius: int
    limit_name: str

    @property
    def values(self):
        return [row.valuation.value for row in self.rows]

    @property
    def non_decreasing(self) -> bool:
        vs = self.values
        return all(x <= y for x, y in zip(vs, vs[1:]))

    @property
    def strictly_increases(self) -> bool:
        vs = self.values
        return any(x < y for x, y in zip(vs, vs[1:]))

    def to_text(self) -> str:
        lines = [f"convergence to {self.limit_name} (radius {self.radius})"]
        lines.append(f"{'n':>4}  {'v':>6}  {'d':>12}")
        for row in self.rows:
            v = row.valuation
            shown = f">={v.value}" if v.at_least else str(v.value)
            lines.append(f"{row.n:>4}  {shown:>6}  {v.distance:>12.6g}")
        flag = "non-decreasing" if self.non_decreasing else "NOT monotone"
        return "\n".join(lines + [f"valuations {flag}"]) + "\n"

    def to_json_dict(self):
        return {
            "limit": self.limit_name,
            "radius": self.radius,
            "rows": [
                {
                    "n": row.n,
                    "v": row.valuation.value,
                    "at_least": row.valuation.at_least,
                    "d": row.valuation.distance,
                    "radius": row.valuation.radius,
                }
                for row in self.rows
            ],
            "non_decreasing": self.non_decreasing,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True, indent=2)


def converge_report(
    groups, limit: MarkedGroup, radius: int, congruence=None
) -> ConvergenceReport:
    """Valuation of each chain member against the limit, one row per member.

    `groups` is an iterable of (n, MarkedGroup) pairs.
    """
    rows = [
        ConvergenceRow(n, valuation(g, limit, radius, congruence))
        for n, g in groups
    ]
    return ConvergenceReport(rows, radius, limit.name or "limit")
