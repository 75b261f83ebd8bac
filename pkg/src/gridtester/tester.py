"""One-sided, non-adaptive pair testers.

The tester draws pairs uniformly from the power-of-2-gap pair set and
rejects as soon as one of them violates the property.  All draws are made
before any value is read, so the query sequence depends on the seed and the
grid shape only.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from decimal import Decimal, localcontext
from fractions import Fraction

import numpy as np

from .errors import UsageError
from .grid import GridPair, Hypergrid, PairFamilyId, enumerate_H, families, family_of_pair, size_of_H
from .properties import PropertyParams, pair_check
from .table import FunctionTable


class Verdict(str, enum.Enum):
    ACCEPT = "accept"
    REJECT = "reject"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class TesterConfig:
    __test__ = False  # keep pytest from collecting it

    epsilon: Fraction
    seed: int = 0
    query_override: int | None = None

    def __post_init__(self):
        eps = Fraction(self.epsilon)
        if not 0 < eps < 1:
            raise UsageError(f"epsilon must lie in (0, 1), got {eps}")
        object.__setattr__(self, "epsilon", eps)
        if self.query_override is not None and self.query_override < 1:
            raise UsageError("query override must be a positive integer")


@dataclass(frozen=True)
class TesterReport:
    verdict: Verdict
    queries_used: int
    budget: int
    witness: GridPair | None = None

    @property
    def rejected(self) -> bool:
        return self.verdict is Verdict.REJECT


def _ln3_times(x: Fraction) -> int:
    """ceil(ln 3 * x), exact for any rational x of desk-scale size."""
    with localcontext() as ctx:
        ctx.prec = 60
        y = Decimal(3).ln() * Decimal(x.numerator) / Decimal(x.denominator)
        return int(y.to_integral_value(rounding="ROUND_CEILING"))


def single_trial_bound(n: int, k: int, epsilon, hypercube_mode: bool = False) -> Fraction:
    """Lower bound on the chance that one uniform pair is a violation."""
    eps = Fraction(epsilon)
    if hypercube_mode:
        return eps / (2 * n)
    ell = (k - 1).bit_length()
    return eps / (4 * n * (ell + 1))


def query_budget(n: int, k: int, epsilon, hypercube_mode: bool = False) -> int:
    """Smallest q with (1 - p)^q <= 1/3 guaranteed, via q = ceil(ln 3 / p)."""
    eps = Fraction(epsilon)
    if not 0 < eps < 1:
        raise UsageError(f"epsilon must lie in (0, 1), got {eps}")
    if n < 1 or k < 1:
        raise UsageError("need n >= 1 and k >= 1")
    if hypercube_mode and k != 2:
        raise UsageError("hypercube mode needs k = 2")
    return _ln3_times(1 / single_trial_bound(n, k, eps, hypercube_mode))


def make_rng(seed: int) -> np.random.Generator:
    """Counter-based generator used everywhere a seed is accepted."""
    return np.random.Generator(np.random.Philox(seed))


def decode_pair(grid: Hypergrid, index: int) -> GridPair:
    """The ``index``-th pair in the enumeration order of :func:`enumerate_H`."""
    if not 0 <= index < size_of_H(grid):
        raise UsageError(f"pair index {index} out of range")
    k, n = grid.k, grid.n
    for a in range(1, n + 1):
        for b in range(grid.ell + 1):
            gap = 1 << b
            if gap >= k:
                continue
            block = (k - gap) * k ** (n - 1)
            if index >= block:
                index -= block
                continue
            coords = []
            for c in range(n, 0, -1):
                radix = k - gap if c == a else k
                index, digit = divmod(index, radix)
                coords.append(digit + 1)
            lo = tuple(reversed(coords))
            hi = lo[: a - 1] + (lo[a - 1] + gap,) + lo[a:]
            return GridPair(lo, hi)
    raise AssertionError("unreachable")


def sample_pair(grid: Hypergrid, rng: np.random.Generator) -> GridPair:
    total = size_of_H(grid)
    if total == 0:
        raise UsageError("the pair set is empty when k = 1")
    return decode_pair(grid, int(rng.integers(0, total)))


def query_plan(grid: Hypergrid, seed: int, budget: int) -> list[GridPair]:
    """The full list of queried pairs, fixed before any function value is read."""
    total = size_of_H(grid)
    if total == 0:
        raise UsageError("the pair set is empty when k = 1")
    draws = make_rng(seed).integers(0, total, size=budget)
    return [decode_pair(grid, int(i)) for i in draws]


def run_tester(f: FunctionTable, params: PropertyParams, config: TesterConfig) -> TesterReport:
    grid = f.grid
    hypercube = grid.k == 2
    budget = config.query_override or query_budget(grid.n, grid.k, config.epsilon, hypercube)
    plan = query_plan(grid, config.seed, budget)
    for t, pair in enumerate(plan, start=1):
        if not pair_check(f, params, pair):
            return TesterReport(Verdict.REJECT, t, budget, pair)
    return TesterReport(Verdict.ACCEPT, budget, budget)


def count_violated_pairs(f: FunctionTable, params: PropertyParams) -> tuple[dict[PairFamilyId, int], int]:
    """Exact number of violated pairs per family and in total."""
    counts = {fid: 0 for fid in families(f.grid)}
    for pair in enumerate_H(f.grid):
        if not pair_check(f, params, pair):
            counts[family_of_pair(pair)] += 1
    return counts, sum(counts.values())


def violated_fraction(f: FunctionTable, params: PropertyParams) -> Fraction:
    total = size_of_H(f.grid)
    if total == 0:
        return Fraction(0)
    return Fraction(count_violated_pairs(f, params)[1], total)
