"""Exact distance to the property through the violation graph.

The violation graph joins every pair of positive weight.  A minimum vertex
cover of it, divided by the domain size, is the distance to the property, and
refilling the cover one point at a time yields a nearest satisfying function.

All solvers here are exact and capped; beyond the cap they raise
:class:`~gridtester.errors.InstanceTooLarge` instead of approximating.
"""
from __future__ import annotations

import itertools
import math
import os
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

import networkx as nx

from .errors import InstanceTooLarge, InvariantViolation, UsageError
from .grid import Hypergrid, Point, pair_phi
from .properties import (
    PropertyParams,
    check_property,
    distance_table,
    pseudo_distance,
    slack,
    weight_by_index,
)
from .table import FunctionTable
from .values import INF, NEG_INF, DualValue, Infinity, normalize, real_part

Pair = tuple[Point, Point]


@dataclass(frozen=True)
class ExactCaps:
    vertex_cover: int = 24
    brute_force: int = 14
    matching_edges: int = 20

    @classmethod
    def from_env(cls) -> "ExactCaps":
        """Read ``GRIDTESTER_EXACT_CAPS="vc,brute,edges"`` if set."""
        raw = os.environ.get("GRIDTESTER_EXACT_CAPS", "").strip()
        if not raw:
            return cls()
        try:
            parts = [int(p) for p in raw.split(",")]
        except ValueError:
            raise UsageError(f"GRIDTESTER_EXACT_CAPS must be integers, got {raw!r}") from None
        if len(parts) != 3 or min(parts) < 0:
            raise UsageError("GRIDTESTER_EXACT_CAPS needs three non-negative integers: vc,brute,edges")
        return cls(*parts)


def _caps(caps: ExactCaps | None) -> ExactCaps:
    return caps if caps is not None else ExactCaps.from_env()


@dataclass(frozen=True)
class ViolationGraph:
    grid: Hypergrid
    edges: tuple[tuple[int, int], ...]  # index pairs, i < j, ascending
    weights: dict
    # For each edge, the index u with f(u) - f(v) - d(u, v) > 0.
    sources: dict

    @cached_property
    def adjacency(self) -> list[int]:
        """Neighbour bitmask per vertex index."""
        adj = [0] * self.grid.size
        for i, j in self.edges:
            adj[i] |= 1 << j
            adj[j] |= 1 << i
        return adj

    @property
    def points(self) -> tuple[Point, ...]:
        return self.grid.points

    def pairs(self) -> list[Pair]:
        pts = self.grid.points
        return [(pts[i], pts[j]) for i, j in self.edges]

    def weight(self, x: Point, y: Point):
        i, j = sorted((self.grid.index(x), self.grid.index(y)))
        return self.weights[(i, j)]

    def orient(self, x: Point, y: Point) -> Pair:
        """(u, v) with f(u) - f(v) > d(u, v)."""
        i, j = sorted((self.grid.index(x), self.grid.index(y)))
        if self.sources[(i, j)] == i:
            return self.grid.point(i), self.grid.point(j)
        return self.grid.point(j), self.grid.point(i)

    def __len__(self) -> int:
        return len(self.edges)


def build_violation_graph(f: FunctionTable, params: PropertyParams) -> ViolationGraph:
    dt = distance_table(f.grid, params)
    size = f.grid.size
    vals = f.values
    edges = []
    weights = {}
    sources = {}
    for i in range(size):
        for j in range(i + 1, size):
            w = weight_by_index(f, dt, i, j)
            if w > 0:
                edges.append((i, j))
                weights[(i, j)] = w
                sources[(i, j)] = i if slack(vals[i], vals[j], dt[i][j]) > 0 else j
    return ViolationGraph(f.grid, tuple(edges), weights, sources)


# ---------------------------------------------------------------- vertex cover


def _popcount(m: int) -> int:
    return bin(m).count("1")


def _bits(m: int) -> Iterable[int]:
    while m:
        low = m & -m
        yield low.bit_length() - 1
        m ^= low


def _clique_bound(adj: Sequence[int], active: int) -> int:
    """Greedy clique partition; every clique C forces |C| - 1 cover vertices."""
    cliques: list[list[int]] = []  # [common neighbourhood, size]
    order = sorted(_bits(active), key=lambda v: -_popcount(adj[v] & active))
    for v in order:
        for c in cliques:
            if c[0] >> v & 1:
                c[0] &= adj[v]
                c[1] += 1
                break
        else:
            cliques.append([adj[v] & active, 1])
    return sum(size - 1 for _, size in cliques)


def _greedy_cover(adj: Sequence[int], active: int) -> int:
    # Ties go to the higher index, like the branching rule below.
    cover = 0
    while True:
        best, best_deg = -1, 0
        for v in _bits(active):
            d = _popcount(adj[v] & active)
            if d and d >= best_deg:
                best, best_deg = v, d
        if best < 0:
            return cover
        cover |= 1 << best
        active &= ~(1 << best)


def _components(adj: Sequence[int], active: int) -> list[int]:
    comps = []
    remaining = active
    while remaining:
        seed = remaining & -remaining
        comp = frontier = seed
        while frontier:
            nxt = 0
            for v in _bits(frontier):
                nxt |= adj[v]
            nxt &= remaining & ~comp
            comp |= nxt
            frontier = nxt
        comps.append(comp)
        remaining &= ~comp
    return comps


def _solve_cover(adj: Sequence[int], active: int) -> int:
    """Minimum vertex cover (as a bitmask) of the subgraph induced by ``active``."""
    best = [_greedy_cover(adj, active)]
    best_size = [_popcount(best[0])]

    def search(active: int, cover: int) -> None:
        # Reductions: drop isolated vertices, take the neighbour of a leaf.
        changed = True
        while changed:
            changed = False
            for v in _bits(active):
                nb = adj[v] & active
                if nb == 0:
                    active &= ~(1 << v)
                    changed = True
                elif nb & (nb - 1) == 0:
                    cover |= nb
                    active &= ~(nb | 1 << v)
                    changed = True
                    break
        size = _popcount(cover)
        if size >= best_size[0]:
            return
        if not active:
            best[0], best_size[0] = cover, size
            return
        if size + _clique_bound(adj, active) >= best_size[0]:
            return
        v = max(_bits(active), key=lambda u: (_popcount(adj[u] & active), u))
        nb = adj[v] & active
        search(active & ~(1 << v), cover | 1 << v)
        search(active & ~(nb | 1 << v), cover | nb)

    search(active, 0)
    return best[0]


def min_vertex_cover(vg: ViolationGraph, caps: ExactCaps | None = None) -> list[Point]:
    """Exact minimum vertex cover by branch and bound, points in index order."""
    cap = _caps(caps).vertex_cover
    if vg.grid.size > cap:
        raise InstanceTooLarge(f"domain has {vg.grid.size} points, vertex-cover cap is {cap} (raise it with GRIDTESTER_EXACT_CAPS=vc,brute,edges)")
    adj = vg.adjacency
    active = 0
    for v, nb in enumerate(adj):
        if nb:
            active |= 1 << v
    cover = 0
    for comp in _components(adj, active):
        cover |= _solve_cover(adj, comp)
    pts = vg.grid.points
    return [pts[v] for v in _bits(cover)]


def epsilon_f(f: FunctionTable, params: PropertyParams, caps: ExactCaps | None = None) -> Fraction:
    cover = min_vertex_cover(build_violation_graph(f, params), caps)
    return Fraction(len(cover), f.grid.size)


def brute_force_distance(f: FunctionTable, params: PropertyParams, caps: ExactCaps | None = None) -> Fraction:
    """Smallest fraction of points whose removal leaves a pairwise-consistent function.

    Independent of the violation graph and the branch and bound: subsets are
    tried by increasing size and the kept values are checked pair by pair
    against ``f(x) - f(y) <= d(x, y)``.
    """
    cap = _caps(caps).brute_force
    size = f.grid.size
    if size > cap:
        raise InstanceTooLarge(f"domain has {size} points, brute-force cap is {cap} (raise it with GRIDTESTER_EXACT_CAPS=vc,brute,edges)")
    dt = distance_table(f.grid, params)
    vals = f.values
    bad = [
        (i, j)
        for i in range(size)
        for j in range(size)
        if i != j and slack(vals[i], vals[j], dt[i][j]) > 0
    ]
    for r in range(size + 1):
        for removed in itertools.combinations(range(size), r):
            gone = set(removed)
            if all(i in gone or j in gone for i, j in bad):
                return Fraction(r, size)
    raise InvariantViolation("removing every point must be feasible")


# ------------------------------------------------------------------- matchings


@dataclass(frozen=True)
class MatchingSet:
    """Disjoint violated pairs, each written (u, v) with f(u) - f(v) > d(u, v)."""

    pairs: tuple[Pair, ...]
    total_weight: object
    phi: int

    def __post_init__(self):
        seen: set[Point] = set()
        for x, y in self.pairs:
            if x in seen or y in seen or x == y:
                raise UsageError("matching pairs must have disjoint endpoints")
            seen.update((x, y))

    def __len__(self) -> int:
        return len(self.pairs)

    @cached_property
    def mate(self) -> dict[Point, Point]:
        out = {}
        for x, y in self.pairs:
            out[x] = y
            out[y] = x
        return out

    def contains(self, x: Point, y: Point) -> bool:
        return self.mate.get(x) == y


def _sum(values):
    total = 0
    for v in values:
        total = total + v
    return total


def matching_from_pairs(vg: ViolationGraph, pairs: Iterable[Pair]) -> MatchingSet:
    grid = vg.grid
    canon = []
    for x, y in pairs:
        i, j = grid.index(x), grid.index(y)
        if (min(i, j), max(i, j)) not in vg.weights:
            raise UsageError(f"({x}, {y}) is not an edge of the violation graph")
        canon.append(vg.orient(x, y))
    canon.sort(key=lambda p: sorted((grid.index(p[0]), grid.index(p[1]))))
    total = _sum(vg.weight(x, y) for x, y in canon)
    phi = sum(pair_phi(x, y, grid.ell) for x, y in canon)
    return MatchingSet(tuple(canon), total, phi)


def maximal_matching(vg: ViolationGraph, order: Sequence[Pair] | None = None) -> MatchingSet:
    """Greedy maximal matching, scanning edges in ``order`` (default: index order)."""
    edges = vg.pairs() if order is None else list(order)
    used: set[Point] = set()
    chosen = []
    for x, y in edges:
        if x not in used and y not in used:
            chosen.append((x, y))
            used.update((x, y))
    result = matching_from_pairs(vg, chosen)
    # Maximality check: every edge touches a matched vertex.
    for x, y in vg.pairs():
        if x not in used and y not in used:
            raise UsageError("order does not list every edge; matching is not maximal")
    return result


def _edge_keys(vg: ViolationGraph) -> dict[tuple[int, int], int]:
    """Encode (weight, phi) of every edge as one integer, order-preserving under sums.

    A weight contributes (number of +inf terms, real part, infinitesimal
    part); the components are scaled by a common denominator and packed with
    bases wide enough that no carry can cross component boundaries.
    """
    grid = vg.grid
    parts = {}
    denom = 1
    for e, w in vg.weights.items():
        real, eps = (w.real, w.eps) if isinstance(w, DualValue) else (w, 0)
        inf = 1 if real is INF else 0
        if isinstance(real, Infinity) and not inf:
            raise InvariantViolation("an edge of the violation graph has -inf weight")
        real = 0 if inf else Fraction(real)
        eps = Fraction(eps)
        denom = math.lcm(denom, real.denominator, eps.denominator)
        i, j = e
        parts[e] = (inf, real, eps, pair_phi(grid.point(i), grid.point(j), grid.ell))
    if not parts:
        return {}
    phi_span = sum(p[3] for p in parts.values()) + 1
    eps_span = int(sum(abs(p[2]) * denom for p in parts.values())) + 1
    base_eps = phi_span
    base_real = 2 * eps_span * base_eps + 1
    real_span = int(sum(abs(p[1]) * denom for p in parts.values())) + 1
    base_inf = 2 * real_span * base_real + 1
    keys = {}
    for e, (inf, real, eps, phi) in parts.items():
        r = int(real * denom)
        s = int(eps * denom)
        keys[e] = inf * base_inf + r * base_real + s * base_eps + phi
    return keys


def max_weight_phi_matching(vg: ViolationGraph, caps: ExactCaps | None = None) -> MatchingSet:
    """Maximum total weight, then maximum potential, then canonical order.

    Blossom algorithm on exact integer edge keys.  Each key is the packed
    (weight, potential) value shifted left by |E| bits plus a distinct bit
    that is larger for edges earlier in index order.  The bits sum to less
    than one unit of the packed value, so they only split ties, and among
    tied matchings the one whose sorted pair list is lexicographically
    smallest gets the largest bonus.  The optimum is therefore unique.
    """
    cap = _caps(caps).matching_edges
    if len(vg.edges) > cap:
        raise InstanceTooLarge(
            f"violation graph has {len(vg.edges)} edges, matching cap is {cap} "
            "(raise it with GRIDTESTER_EXACT_CAPS=vc,brute,edges)"
        )
    keys = _edge_keys(vg)
    m = len(vg.edges)
    g = nx.Graph()
    for rank, e in enumerate(vg.edges):
        g.add_edge(*e, weight=(keys[e] << m) | (1 << (m - 1 - rank)))
    chosen = nx.max_weight_matching(g, maxcardinality=False)
    pts = vg.grid.points
    return matching_from_pairs(vg, [(pts[i], pts[j]) for i, j in chosen])


def matching_key(vg: ViolationGraph, m: MatchingSet) -> tuple:
    """(total weight, phi) for lexicographic comparison."""
    return (m.total_weight, m.phi)


# ---------------------------------------------------------------------- repair


def fill_interval(known: dict[Point, object], u: Point, params: PropertyParams):
    """Bounds [m, M] any value at ``u`` must lie in, given the ``known`` values.

    A +inf distance is no constraint in either direction.
    """
    lo, hi = NEG_INF, INF
    for p, v in known.items():
        d_pu = pseudo_distance(params, p, u)
        if d_pu is not INF and not (real_part(v) is NEG_INF):
            cand = v - d_pu
            if cand > lo:
                lo = cand
        d_up = pseudo_distance(params, u, p)
        if d_up is not INF and not (real_part(v) is INF):
            cand = v + d_up
            if cand < hi:
                hi = cand
    return lo, hi


def repair(f: FunctionTable, params: PropertyParams, caps: ExactCaps | None = None) -> FunctionTable:
    """Nearest satisfying function: refill a minimum vertex cover in index order.

    Each cover point gets the largest lower bound ``m`` implied by the values
    fixed so far; when that bound is -inf the smallest upper bound is used,
    and 0 when both are unbounded.
    """
    cover = min_vertex_cover(build_violation_graph(f, params), caps)
    in_cover = set(cover)
    known = {x: v for x, v in f.items() if x not in in_cover}
    for u in cover:
        lo, hi = fill_interval(known, u, params)
        if lo > hi:
            raise InvariantViolation(f"empty fill-in interval at {u}: [{lo}, {hi}]")
        if lo is not NEG_INF:
            value = normalize(lo)
        elif hi is not INF:
            value = normalize(hi)
        else:
            value = 0
        known[u] = value
    g = FunctionTable(f.grid, tuple(known[x] for x in f.grid.points))
    witness = check_property(g, params)
    if witness is not None:
        raise InvariantViolation(f"repaired table still violates at {witness}")
    return g
