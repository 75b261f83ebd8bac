"""Hypergrid domains [k]^n, the power-of-2 pair set and its matchings.

Coordinates are 1-based (``1..k``) so that the modified residue
``p mod* m`` (``m`` instead of ``0`` when ``m | p``) can be used verbatim to
split every scale into two matchings.  Points are plain tuples of ints and
are indexed lexicographically with the last coordinate varying fastest.
"""
from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, NamedTuple

from .errors import UsageError

Point = tuple[int, ...]


@dataclass(frozen=True)
class Hypergrid:
    n: int
    k: int

    def __post_init__(self):
        if self.n < 1 or self.k < 1:
            raise UsageError(f"need n >= 1 and k >= 1, got n={self.n}, k={self.k}")

    @property
    def ell(self) -> int:
        """ceil(log2 k)."""
        return (self.k - 1).bit_length()

    @property
    def size(self) -> int:
        return self.k**self.n

    @cached_property
    def points(self) -> tuple[Point, ...]:
        return tuple(itertools.product(range(1, self.k + 1), repeat=self.n))

    @cached_property
    def _index(self) -> dict[Point, int]:
        return {p: i for i, p in enumerate(self.points)}

    def index(self, x: Point) -> int:
        try:
            return self._index[x]
        except KeyError:
            raise UsageError(f"{x} is not a point of [{self.k}]^{self.n}") from None

    def point(self, i: int) -> Point:
        return self.points[i]

    def contains(self, x: Point) -> bool:
        return len(x) == self.n and all(1 <= c <= self.k for c in x)

    def check(self, *xs: Point) -> None:
        for x in xs:
            if len(x) != self.n:
                raise UsageError(f"point {x} has dimension {len(x)}, grid has {self.n}")
            if not all(1 <= c <= self.k for c in x):
                raise UsageError(f"point {x} outside [1,{self.k}]^{self.n}")


class Ordering(enum.Enum):
    LESS = "less"
    GREATER = "greater"
    EQUAL = "equal"
    INCOMPARABLE = "incomparable"


def format_point(x: Point) -> str:
    return "(" + ",".join(map(str, x)) + ")"


def comparable(x: Point, y: Point) -> Ordering:
    if len(x) != len(y):
        raise UsageError(f"dimension mismatch: {len(x)} vs {len(y)}")
    le = all(a <= b for a, b in zip(x, y))
    ge = all(a >= b for a, b in zip(x, y))
    if le and ge:
        return Ordering.EQUAL
    if le:
        return Ordering.LESS
    if ge:
        return Ordering.GREATER
    return Ordering.INCOMPARABLE


def precedes(x: Point, y: Point) -> bool:
    """Strict coordinate-wise order x < y."""
    return x != y and all(a <= b for a, b in zip(x, y))


def l1(x: Point, y: Point) -> int:
    return sum(abs(a - b) for a, b in zip(x, y))


def msd(m: int, ell: int) -> int:
    """Exponent of the largest power of 2 dividing ``m``; ``ell + 1`` for 0."""
    if m < 0:
        raise UsageError("msd is defined for non-negative integers")
    if m == 0:
        return ell + 1
    return (m & -m).bit_length() - 1


def pair_phi(x: Point, y: Point, ell: int) -> int:
    return sum(msd(abs(a - b), ell) for a, b in zip(x, y))


def phi_of_matching(pairs: Iterable[tuple[Point, Point]], grid: Hypergrid) -> int:
    """Potential of a matching: sum of msd over pairs and coordinates."""
    seen: set[Point] = set()
    total = 0
    for x, y in pairs:
        for p in (x, y):
            if p in seen:
                raise UsageError(f"not a matching: {p} appears twice")
            seen.add(p)
        total += pair_phi(x, y, grid.ell)
    return total


def mod_star(p: int, m: int) -> int:
    r = p % m
    return m if r == 0 else r


class PairFamilyId(NamedTuple):
    axis: int  # 1-based
    scale: int  # gap is 2**scale
    parity: int  # 0 or 1

    def __str__(self) -> str:
        return f"H^{self.parity}_{{{self.axis},{self.scale}}}"


class GridPair(NamedTuple):
    lo: Point
    hi: Point


class Side(enum.Enum):
    LOWER = "lower"
    UPPER = "upper"
    NOT_IN_FAMILY = "not-in-family"


def families(grid: Hypergrid, include_empty: bool = True) -> list[PairFamilyId]:
    out = []
    for a in range(1, grid.n + 1):
        for b in range(grid.ell + 1):
            for r in (0, 1):
                fid = PairFamilyId(a, b, r)
                if include_empty or family_size(grid, fid) > 0:
                    out.append(fid)
    return out


def _shift(x: Point, axis: int, delta: int) -> Point:
    return x[: axis - 1] + (x[axis - 1] + delta,) + x[axis:]


def enumerate_H(grid: Hypergrid) -> Iterator[GridPair]:
    """Every axis-aligned pair whose gap is a power of 2, once each.

    Order: axis, then scale, then the lower endpoint lexicographically.
    """
    for a in range(1, grid.n + 1):
        for b in range(grid.ell + 1):
            gap = 1 << b
            if gap >= grid.k:
                continue
            for lo in grid.points:
                if lo[a - 1] + gap <= grid.k:
                    yield GridPair(lo, _shift(lo, a, gap))


def size_of_H(grid: Hypergrid) -> int:
    per_axis = sum(grid.k - (1 << b) for b in range(grid.ell + 1) if (1 << b) < grid.k)
    return grid.n * per_axis * grid.k ** (grid.n - 1)


def family_of_pair(pair: GridPair) -> PairFamilyId:
    lo, hi = pair
    if len(lo) != len(hi):
        raise UsageError("dimension mismatch")
    diff = [i for i, (a, b) in enumerate(zip(lo, hi)) if a != b]
    if len(diff) != 1:
        raise UsageError(f"{pair} does not differ in exactly one coordinate")
    a = diff[0] + 1
    gap = hi[a - 1] - lo[a - 1]
    if gap <= 0 or gap & (gap - 1):
        raise UsageError(f"{pair}: gap {gap} is not a positive power of 2")
    b = gap.bit_length() - 1
    r = 0 if mod_star(hi[a - 1], 2 * gap) > gap else 1
    return PairFamilyId(a, b, r)


def lower_class(fid: PairFamilyId, x: Point) -> bool:
    """Residue-class side of ``x``: True for the L side, False for U.

    Defined for every point, whether or not it is matched in the family.
    """
    gap = 1 << fid.scale
    low = mod_star(x[fid.axis - 1], 2 * gap) <= gap
    return low if fid.parity == 0 else not low


def partner(grid: Hypergrid, fid: PairFamilyId, x: Point) -> Point | None:
    gap = 1 << fid.scale
    c = x[fid.axis - 1] + (gap if lower_class(fid, x) else -gap)
    if 1 <= c <= grid.k:
        return _shift(x, fid.axis, c - x[fid.axis - 1])
    return None


def side(grid: Hypergrid, fid: PairFamilyId, x: Point) -> Side:
    if partner(grid, fid, x) is None:
        return Side.NOT_IN_FAMILY
    return Side.LOWER if lower_class(fid, x) else Side.UPPER


def family_pairs(grid: Hypergrid, fid: PairFamilyId) -> list[GridPair]:
    out = []
    for x in grid.points:
        y = partner(grid, fid, x)
        if y is not None and lower_class(fid, x):
            out.append(GridPair(x, y))
    return out


def family_size(grid: Hypergrid, fid: PairFamilyId) -> int:
    gap = 1 << fid.scale
    count = 0
    for c in range(1, grid.k + 1):
        x = (c,)
        if lower_class(PairFamilyId(1, fid.scale, fid.parity), x) and c + gap <= grid.k:
            count += 1
    return count * grid.k ** (grid.n - 1)


def is_adequate(grid: Hypergrid, fid: PairFamilyId, violations: Iterable[tuple[Point, Point]]) -> bool:
    """True iff every endpoint of every violation is matched by ``fid``."""
    return all(partner(grid, fid, p) is not None for pair in violations for p in pair)


def padded_side(k: int) -> int:
    """Smallest power of 2 strictly larger than 4k."""
    return 1 << (4 * k).bit_length()


def pad_offset(k: int) -> int:
    return padded_side(k) // 4
