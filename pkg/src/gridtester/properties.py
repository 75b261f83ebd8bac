"""The (alpha, beta)-bounded-derivative property over hypergrids.

A function satisfies the property when every unit increment along any axis
changes its value by an amount in ``[alpha, beta]``.  Monotonicity is
``(0, +inf)`` and c-Lipschitz is ``(-c, c)``.

Everything here is exact: values are ints, Fractions, the two infinities, or
(after :func:`perturb`) :class:`~gridtester.values.DualValue`.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import InvariantViolation, UsageError
from .grid import GridPair, Hypergrid, Point, l1
from .table import FunctionTable
from .values import (
    INF,
    NEG_INF,
    DualValue,
    ExtValue,
    Infinity,
    format_value,
    is_infinite,
    normalize,
    parse_number,
    real_part,
)


@dataclass(frozen=True)
class PropertyParams:
    alpha: ExtValue
    beta: ExtValue

    def __post_init__(self):
        if self.alpha is INF or self.beta is NEG_INF or not self.alpha < self.beta:
            raise UsageError(f"need alpha < beta, got ({self.alpha}, {self.beta})")

    @classmethod
    def monotone(cls) -> "PropertyParams":
        return cls(0, INF)

    @classmethod
    def lipschitz(cls, c=1) -> "PropertyParams":
        c = normalize(Fraction(c))
        if c <= 0:
            raise UsageError("Lipschitz constant must be positive")
        return cls(-c, c)

    @classmethod
    def parse(cls, text: str) -> "PropertyParams":
        """``monotone`` or ``lipschitz:c``."""
        text = text.strip()
        if text == "monotone":
            return cls.monotone()
        if text.startswith("lipschitz:"):
            c = parse_number(text.split(":", 1)[1])
            if is_infinite(c):
                raise UsageError("Lipschitz constant must be finite")
            return cls.lipschitz(c)
        if text == "lipschitz":
            return cls.lipschitz(1)
        raise UsageError(f"unknown property {text!r} (use monotone or lipschitz:c)")

    @property
    def is_monotone(self) -> bool:
        return self.alpha == 0 and self.beta is INF

    @property
    def is_finite(self) -> bool:
        return not (is_infinite(self.alpha) or is_infinite(self.beta))

    def __str__(self) -> str:
        return f"({format_value(self.alpha)}, {format_value(self.beta)})"


def hcd(x: Point, y: Point) -> Point:
    if len(x) != len(y):
        raise UsageError("dimension mismatch")
    return tuple(min(a, b) for a, b in zip(x, y))


def _closed_form(params: PropertyParams, down: int, up: int) -> ExtValue:
    # Infinity * 0 == 0, so a zero step count never produces inf - inf.
    return params.beta * down - params.alpha * up


def pseudo_distance(params: PropertyParams, x: Point, y: Point) -> ExtValue:
    """beta * |x - hcd(x,y)|_1 - alpha * |y - hcd(x,y)|_1.

    Asymmetric and possibly negative.  For monotone params this is 0 when
    x <= y and +inf otherwise; for c-Lipschitz it is c * |x - y|_1.
    """
    z = hcd(x, y)
    return _closed_form(params, l1(x, z), l1(y, z))


@lru_cache(maxsize=64)
def distance_table(grid: Hypergrid, params: PropertyParams) -> tuple[tuple, ...]:
    """``table[i][j] == pseudo_distance(params, point i, point j)``."""
    pts = grid.points
    memo: dict[tuple[int, int], ExtValue] = {}
    rows = []
    for x in pts:
        row = []
        for y in pts:
            down = up = 0
            for a, b in zip(x, y):
                if a > b:
                    down += a - b
                else:
                    up += b - a
            key = (down, up)
            d = memo.get(key)
            if d is None:
                d = memo[key] = _closed_form(params, down, up)
            row.append(d)
        rows.append(tuple(row))
    return tuple(rows)


def shortest_path_distance(params: PropertyParams, grid: Hypergrid, x: Point, y: Point) -> ExtValue:
    """Reference oracle: Bellman-Ford over the unit-step digraph of the grid.

    An up-step (one coordinate +1) costs ``-alpha`` and a down-step costs
    ``beta``.  Finite parameters only.
    """
    if not params.is_finite:
        raise UsageError("shortest_path_distance needs finite alpha and beta")
    grid.check(x, y)
    up_cost, down_cost = -params.alpha, params.beta
    arcs = []
    for i, u in enumerate(grid.points):
        for a in range(grid.n):
            if u[a] < grid.k:
                v = u[:a] + (u[a] + 1,) + u[a + 1 :]
                j = grid.index(v)
                arcs.append((i, j, up_cost))
                arcs.append((j, i, down_cost))
    dist: list = [None] * grid.size
    dist[grid.index(x)] = 0
    for _ in range(grid.size):
        changed = False
        for i, j, c in arcs:
            if dist[i] is not None and (dist[j] is None or dist[i] + c < dist[j]):
                dist[j] = dist[i] + c
                changed = True
        if not changed:
            break
    else:
        raise InvariantViolation("negative cycle in the unit-step digraph")
    return normalize(Fraction(dist[grid.index(y)]))


def slack(fu, fv, duv) -> ExtValue | DualValue:
    """``f(u) - f(v) - d(u, v)`` with the conventions for infinite operands.

    A +inf distance is a vacuous constraint (-inf slack), and two infinite
    values of the same sign never violate each other (-inf slack).
    """
    if duv is INF:
        return NEG_INF
    ru, rv = real_part(fu), real_part(fv)
    inf_u, inf_v = isinstance(ru, Infinity), isinstance(rv, Infinity)
    if inf_u or inf_v:
        if inf_u and inf_v:
            return NEG_INF if ru is rv else ru
        return INF if (ru is INF or rv is NEG_INF) else NEG_INF
    return fu - fv - duv


def _weight(fu, fv, duv, dvu):
    a = slack(fu, fv, duv)
    b = slack(fv, fu, dvu)
    if a > 0 and b > 0:
        raise InvariantViolation("both orientations of a pair are violated")
    return a if a >= b else b


def weight(f: FunctionTable, params: PropertyParams, x: Point, y: Point):
    """Symmetric violation weight max(f(x)-f(y)-d(x,y), f(y)-f(x)-d(y,x))."""
    return _weight(f[x], f[y], pseudo_distance(params, x, y), pseudo_distance(params, y, x))


def weight_by_index(f: FunctionTable, dt, i: int, j: int):
    v = f.values
    return _weight(v[i], v[j], dt[i][j], dt[j][i])


def is_violation(f: FunctionTable, params: PropertyParams, x: Point, y: Point) -> bool:
    return weight(f, params, x, y) > 0


def check_property(f: FunctionTable, params: PropertyParams) -> tuple[Point, Point] | None:
    """All-pairs check; returns the first (x, y) with f(x) - f(y) > d(x, y)."""
    dt = distance_table(f.grid, params)
    vals = f.values
    pts = f.grid.points
    for i in range(len(pts)):
        fi, row = vals[i], dt[i]
        for j in range(len(pts)):
            if i != j and slack(fi, vals[j], row[j]) > 0:
                return pts[i], pts[j]
    return None


def check_property_unit_step(f: FunctionTable, params: PropertyParams) -> tuple[Point, Point] | None:
    """Fast path: only unit increments are inspected."""
    grid = f.grid
    for x in grid.points:
        for a in range(grid.n):
            if x[a] == grid.k:
                continue
            y = x[:a] + (x[a] + 1,) + x[a + 1 :]
            fx, fy = f[x], f[y]
            if slack(fx, fy, -params.alpha) > 0:
                return x, y
            if slack(fy, fx, params.beta) > 0:
                return y, x
    return None


def pair_check(f: FunctionTable, params: PropertyParams, pair: GridPair) -> bool:
    """True when the axis-aligned pair satisfies alpha*g <= f(hi)-f(lo) <= beta*g."""
    lo, hi = pair
    g = l1(lo, hi)
    flo, fhi = f[lo], f[hi]
    # f(hi) - f(lo) >= alpha*g  <=>  f(lo) - f(hi) - (-alpha*g) <= 0
    if slack(flo, fhi, -(params.alpha * g)) > 0:
        return False
    return not slack(fhi, flo, params.beta * g) > 0


def perturb(f: FunctionTable, params: PropertyParams) -> FunctionTable:
    """Break every zero-slack tie with infinitesimal decrements.

    Builds the digraph with an arc v -> u whenever f(u) - f(v) = d(u, v),
    then repeatedly takes a sink and lowers its value by a fresh
    infinitesimal.  Later decrements are strictly smaller than earlier ones,
    which keeps every previously fixed slack negative.  The violated pairs
    are unchanged and afterwards no pair has zero weight.
    """
    if any(isinstance(v, DualValue) for v in f.values):
        raise UsageError("table is already perturbed")
    dt = distance_table(f.grid, params)
    vals = f.values
    size = len(vals)
    out_arcs: list[set[int]] = [set() for _ in range(size)]
    in_arcs: list[set[int]] = [set() for _ in range(size)]
    for u in range(size):
        for v in range(size):
            if u != v and slack(vals[u], vals[v], dt[u][v]) == 0:
                out_arcs[v].add(u)
                in_arcs[u].add(v)

    touched = [u for u in range(size) if out_arcs[u] or in_arcs[u]]
    remaining = set(touched)
    order = []
    while remaining:
        sinks = [u for u in remaining if not out_arcs[u]]
        if not sinks:
            raise InvariantViolation("zero-slack digraph has a cycle")
        s = min(sinks)
        order.append(s)
        remaining.discard(s)
        for v in in_arcs[s]:
            out_arcs[v].discard(s)

    eps = [0] * size
    m = len(order)
    for t, s in enumerate(order):
        eps[s] = -(m - t)
    return FunctionTable(f.grid, tuple(DualValue(v, e) for v, e in zip(vals, eps)))


def zero_slack_pairs(f: FunctionTable, params: PropertyParams) -> list[tuple[Point, Point]]:
    dt = distance_table(f.grid, params)
    pts, vals = f.grid.points, f.values
    return [
        (pts[u], pts[v])
        for u in range(len(pts))
        for v in range(len(pts))
        if u != v and slack(vals[u], vals[v], dt[u][v]) == 0
    ]
