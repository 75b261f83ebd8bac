"""Seeded function generators for tests and experiments."""
from __future__ import annotations

import logging
from fractions import Fraction
from typing import Callable

import numpy as np

from .errors import InvariantViolation, UsageError
from .grid import Hypergrid, Point
from .properties import PropertyParams
from .table import FunctionTable
from .tester import make_rng
from .values import INF, NEG_INF, is_infinite, normalize

log = logging.getLogger(__name__)

LATTICE_STEPS = 4


def increment_lattice(params: PropertyParams, steps: int = LATTICE_STEPS) -> list:
    """Finitely many admissible unit increments inside [alpha, beta]."""
    a, b = params.alpha, params.beta
    if not is_infinite(a) and not is_infinite(b):
        width = Fraction(b - a) / steps
        return [normalize(a + t * width) for t in range(steps + 1)]
    if not is_infinite(a):
        return [a + t for t in range(steps + 1)]
    if not is_infinite(b):
        return [b - t for t in range(steps + 1)]
    return list(range(-steps // 2, steps // 2 + 1))


def _predecessors(x: Point) -> list[Point]:
    return [x[:a] + (x[a] - 1,) + x[a + 1 :] for a in range(len(x)) if x[a] > 1]


def satisfying(grid: Hypergrid, rng: np.random.Generator, params: PropertyParams, max_restarts: int = 10) -> FunctionTable:
    """Assign values in index order from random lattice increments.

    Each draw is clamped into the intersection of the windows
    ``[f(p) + alpha, f(p) + beta]`` over all unit predecessors p, so every
    unit step lands in [alpha, beta].
    """
    lattice = increment_lattice(params)
    if not lattice:
        raise UsageError("empty increment lattice")
    for attempt in range(max_restarts + 1):
        values: dict[Point, object] = {}
        ok = True
        for x in grid.points:
            preds = _predecessors(x)
            if not preds:
                values[x] = 0
                continue
            lo = max(values[p] + params.alpha for p in preds) if not is_infinite(params.alpha) else NEG_INF
            hi = min(values[p] + params.beta for p in preds) if not is_infinite(params.beta) else INF
            if lo > hi:
                ok = False
                break
            base = values[preds[int(rng.integers(len(preds)))]]
            v = base + lattice[int(rng.integers(len(lattice)))]
            values[x] = normalize(Fraction(min(max(v, lo), hi)))
        if ok:
            return FunctionTable(grid, tuple(values[x] for x in grid.points))
        log.info("satisfying generator: empty window, restart %d", attempt + 1)
    raise InvariantViolation("satisfying generator failed after restarts")


def uniform_random(grid: Hypergrid, rng: np.random.Generator, alphabet: int = 5) -> FunctionTable:
    if alphabet < 1:
        raise UsageError("alphabet must be positive")
    return FunctionTable(grid, tuple(int(v) for v in rng.integers(0, alphabet, size=grid.size)))


def corrupted(
    grid: Hypergrid, rng: np.random.Generator, params: PropertyParams, rho=Fraction(1, 10)
) -> FunctionTable:
    """A satisfying table with a rho-fraction of points rewritten uniformly."""
    rho = Fraction(rho)
    if not 0 <= rho <= 1:
        raise UsageError("rho must lie in [0, 1]")
    base = satisfying(grid, rng, params)
    count = round(rho * grid.size)
    if count == 0:
        return base
    lo = int(np.floor(float(min(base.values))))
    hi = int(np.ceil(float(max(base.values))))
    chosen = rng.choice(grid.size, size=count, replace=False)
    vals = list(base.values)
    for i in chosen:
        vals[int(i)] = int(rng.integers(lo, hi + 1))
    return FunctionTable(grid, tuple(vals))


def anti_monotone(grid: Hypergrid) -> FunctionTable:
    return FunctionTable.from_function(grid, lambda x: -sum(x))


def lipschitz_spikes(
    grid: Hypergrid, rng: np.random.Generator, params: PropertyParams, c=1, scale=2, spikes: int | None = None
) -> FunctionTable:
    """A satisfying table plus +-c*scale bumps at randomly chosen points."""
    base = satisfying(grid, rng, params)
    count = max(1, grid.size // 8) if spikes is None else spikes
    count = min(count, grid.size)
    bump = normalize(Fraction(c) * Fraction(scale))
    chosen = rng.choice(grid.size, size=count, replace=False)
    vals = list(base.values)
    for i in chosen:
        sign = 1 if rng.integers(2) else -1
        vals[int(i)] = vals[int(i)] + sign * bump
    return FunctionTable(grid, tuple(vals))


KINDS = ("satisfying", "uniform-random", "corrupted-monotone", "anti-monotone", "lipschitz-spikes")


def generate(kind: str, n: int, k: int, seed: int, params: PropertyParams | None = None, **knobs) -> FunctionTable:
    """Dispatch on ``kind``; ``knobs`` are the kind-specific keyword options."""
    grid = Hypergrid(n, k)
    params = params or PropertyParams.monotone()
    rng = make_rng(seed)
    makers: dict[str, Callable[[], FunctionTable]] = {
        "satisfying": lambda: satisfying(grid, rng, params),
        "uniform-random": lambda: uniform_random(grid, rng, **knobs),
        "corrupted-monotone": lambda: corrupted(grid, rng, params, **knobs),
        "anti-monotone": lambda: anti_monotone(grid),
        "lipschitz-spikes": lambda: lipschitz_spikes(grid, rng, params, **knobs),
    }
    if kind not in makers:
        raise UsageError(f"unknown generator {kind!r}; choose from {', '.join(KINDS)}")
    if kind in ("satisfying", "anti-monotone") and knobs:
        raise UsageError(f"generator {kind!r} takes no options")
    try:
        return makers[kind]()
    except TypeError as exc:
        raise UsageError(f"bad option for {kind!r}: {exc}") from None
