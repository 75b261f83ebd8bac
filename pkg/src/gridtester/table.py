"""Dense function tables over a hypergrid, plus the ±inf padding transform."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Mapping, Sequence

from .errors import UsageError
from .grid import Hypergrid, Point, pad_offset, padded_side
from .values import INF, NEG_INF, is_infinite


@dataclass(frozen=True)
class FunctionTable:
    grid: Hypergrid
    values: tuple

    def __post_init__(self):
        if len(self.values) != self.grid.size:
            raise UsageError(f"table has {len(self.values)} values, grid needs {self.grid.size}")

    @classmethod
    def from_function(cls, grid: Hypergrid, fn: Callable[[Point], object]) -> "FunctionTable":
        return cls(grid, tuple(fn(x) for x in grid.points))

    @classmethod
    def from_values(cls, n: int, k: int, values: Sequence) -> "FunctionTable":
        return cls(Hypergrid(n, k), tuple(values))

    def __getitem__(self, x: Point):
        return self.values[self.grid.index(x)]

    def at(self, i: int):
        return self.values[i]

    def items(self):
        return zip(self.grid.points, self.values)

    def with_values(self, updates: Mapping[Point, object]) -> "FunctionTable":
        vals = list(self.values)
        for x, v in updates.items():
            vals[self.grid.index(x)] = v
        return FunctionTable(self.grid, tuple(vals))

    def differing_points(self, other: "FunctionTable") -> list[Point]:
        if other.grid != self.grid:
            raise UsageError("tables live on different grids")
        return [x for x, a, b in zip(self.grid.points, self.values, other.values) if a != b]

    @property
    def is_finite(self) -> bool:
        return not any(is_infinite(v) for v in self.values)


def pad(f: FunctionTable) -> FunctionTable:
    """Embed ``f`` into [K]^n, K the smallest power of 2 above 4k.

    The original block is ``[K/4 + 1, K/4 + k]`` in every coordinate.  Points
    with some coordinate at or below ``K/4`` get -inf, all remaining outside
    points get +inf, so a monotone ``f`` stays monotone and every violation
    stays inside the block.
    """
    if not f.is_finite:
        raise UsageError("pad expects a finite-valued table")
    n, k = f.grid.n, f.grid.k
    big = Hypergrid(n, padded_side(k))
    q = pad_offset(k)

    def value(x: Point):
        if any(c <= q for c in x):
            return NEG_INF
        if all(c <= q + k for c in x):
            return f[tuple(c - q for c in x)]
        return INF

    return FunctionTable.from_function(big, value)


def embed_point(x: Point, k: int) -> Point:
    q = pad_offset(k)
    return tuple(c + q for c in x)
