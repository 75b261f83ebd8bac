"""Batch tester runs written to CSV.

Trial ``t`` of an experiment with master seed ``s`` uses the function seed
``SeedSequence([s, t])`` and the tester seed ``SeedSequence([s, t, 1])``, so
rows are reproducible individually and independent of worker scheduling.
"""
from __future__ import annotations

import csv
import io
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import numpy as np

from .distance import ExactCaps, epsilon_f
from .errors import InstanceTooLarge, UsageError
from .generators import KINDS, generate
from .properties import PropertyParams
from .tester import TesterConfig, run_tester

COLUMNS = ("seed", "generator", "n", "k", "epsilon", "eps_f", "budget", "verdict", "queries_used")


@dataclass(frozen=True)
class ExperimentSpec:
    generator: str
    n: int
    k: int
    params: PropertyParams
    epsilons: tuple[Fraction, ...]
    trials: int
    master_seed: int = 0
    knobs: dict = field(default_factory=dict)
    output: Path | None = None

    def __post_init__(self):
        if self.generator not in KINDS:
            raise UsageError(f"unknown generator {self.generator!r}; choose from {', '.join(KINDS)}")
        if self.trials < 1:
            raise UsageError("trials must be at least 1")
        if not self.epsilons:
            raise UsageError("need at least one epsilon")
        eps = tuple(Fraction(e) for e in self.epsilons)
        if not all(0 < e < 1 for e in eps):
            raise UsageError("every epsilon must lie in (0, 1)")
        object.__setattr__(self, "epsilons", eps)
        if self.master_seed < 0:
            raise UsageError("seed must be non-negative")


def _seed(*words: int) -> int:
    return int(np.random.SeedSequence(list(words)).generate_state(1, dtype=np.uint64)[0])


def trial_seed(master: int, trial: int) -> int:
    return _seed(master, trial)


def _run_trial(spec: ExperimentSpec, trial: int, caps: ExactCaps) -> list[dict]:
    seed = trial_seed(spec.master_seed, trial)
    f = generate(spec.generator, spec.n, spec.k, seed, spec.params, **spec.knobs)
    try:
        eps_f = str(epsilon_f(f, spec.params, caps))
    except InstanceTooLarge:
        eps_f = "NA"
    tester_seed = _seed(spec.master_seed, trial, 1)
    rows = []
    for eps in spec.epsilons:
        report = run_tester(f, spec.params, TesterConfig(eps, tester_seed))
        rows.append(
            {
                "seed": seed,
                "generator": spec.generator,
                "n": spec.n,
                "k": spec.k,
                "epsilon": str(eps),
                "eps_f": eps_f,
                "budget": report.budget,
                "verdict": str(report.verdict),
                "queries_used": report.queries_used,
            }
        )
    return rows


def run_experiment(spec: ExperimentSpec, workers: int = 1, caps: ExactCaps | None = None) -> list[dict]:
    """All rows, ordered by trial index and then by epsilon."""
    caps = caps or ExactCaps.from_env()
    trials = range(spec.trials)
    if workers <= 1:
        chunks = [_run_trial(spec, t, caps) for t in trials]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            # map() yields in submission order, whatever the completion order.
            chunks = list(pool.map(_run_trial, [spec] * spec.trials, trials, [caps] * spec.trials))
    return [row for chunk in chunks for row in chunk]


def rows_to_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=COLUMNS, lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    return buf.getvalue()


def write_csv(rows: list[dict], path: str | Path) -> None:
    Path(path).write_text(rows_to_csv(rows), encoding="utf-8", newline="")
