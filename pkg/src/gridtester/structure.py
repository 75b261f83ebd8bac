"""Executable checks of the alternating-path structure behind the testers.

For a fixed pair family H and the maximum-weight, potential-maximal matching
M of the violation graph, every matching pair is straight, cross or skew
relative to H.  Starting from the lower endpoint x of a violated cross pair,
the alternating path S_x follows an H-edge, then a straight M-pair, then an
H-edge again, until it reaches a point that is not matched by a straight
pair.  The claims verified here are:

* every such path contains a violated H-pair;
* per adequate family, violated H-pairs >= |cross(M, H)| / 2;
* every M-pair is cross for some family;
* globally, violated pairs >= |M| / 2 when the relevant families are adequate.

Intermediate implications (ordering, matchedness, distinctness, the terminal
gap) are asserted path by path.  A failed assertion becomes a
:class:`Failure` in the report instead of an exception.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from .distance import (
    ExactCaps,
    MatchingSet,
    build_violation_graph,
    epsilon_f,
    max_weight_phi_matching,
)
from .errors import InstanceTooLarge, InvariantViolation, UsageError
from .grid import (
    Hypergrid,
    Ordering,
    PairFamilyId,
    Point,
    comparable,
    families,
    is_adequate,
    lower_class,
    msd,
    pair_phi,
    partner,
    precedes,
)
from .properties import PropertyParams, perturb, pseudo_distance, slack, weight
from .table import FunctionTable, pad
from .tester import count_violated_pairs, violated_fraction
from .values import INF, format_value, is_infinite

Pair = tuple[Point, Point]


class PairClass(enum.Enum):
    STRAIGHT = "straight"
    CROSS = "cross"
    SKEW = "skew"


def axis_order(fid: PairFamilyId, pair: Pair) -> Pair:
    """The pair with the endpoint of smaller ``axis`` coordinate first."""
    x, y = pair
    a = fid.axis - 1
    return (x, y) if x[a] <= y[a] else (y, x)


def classify_pair(fid: PairFamilyId, pair: Pair) -> PairClass:
    """Straight if both ends share a side of H.

    Cross if, in addition to opposite sides and a gap of 2-adic order
    ``scale``, the end with the smaller axis coordinate lies on the lower
    side, so that its H-partner sits between the two ends.  Otherwise skew.
    """
    x, y = axis_order(fid, pair)
    lx, ly = lower_class(fid, x), lower_class(fid, y)
    if lx == ly:
        return PairClass.STRAIGHT
    if lx and _gap_order(fid, x, y) == fid.scale:
        return PairClass.CROSS
    return PairClass.SKEW


def _gap_order(fid: PairFamilyId, x: Point, y: Point) -> int:
    # Opposite residue classes force a nonzero gap, so msd never sees 0 here.
    return msd(abs(x[fid.axis - 1] - y[fid.axis - 1]), 0)


def is_split_cross(fid: PairFamilyId, pair: Pair) -> bool:
    """Cross without the orientation condition: opposite sides, gap order ``scale``."""
    x, y = pair
    return lower_class(fid, x) != lower_class(fid, y) and _gap_order(fid, x, y) == fid.scale


def classify_pairs(matching: MatchingSet, fid: PairFamilyId) -> dict[Pair, PairClass]:
    return {p: classify_pair(fid, p) for p in matching.pairs}


def in_family(grid: Hypergrid, fid: PairFamilyId, pair: Pair) -> bool:
    x, y = axis_order(fid, pair)
    return partner(grid, fid, x) == y


def build_X(
    grid: Hypergrid, matching: MatchingSet, fid: PairFamilyId, f: FunctionTable, params: PropertyParams
) -> set[Point]:
    """Lower endpoints x of cross pairs (x, y) outside H with f(x) - f(y) > d(x, y)."""
    out = set()
    for pair in matching.pairs:
        if classify_pair(fid, pair) is not PairClass.CROSS or in_family(grid, fid, pair):
            continue
        x, y = axis_order(fid, pair)
        if slack(f[x], f[y], pseudo_distance(params, x, y)) > 0:
            out.add(x)
    return out


@dataclass(frozen=True)
class AlternatingPath:
    family: PairFamilyId
    x: Point
    s_minus1: Point
    terms: tuple[Point, ...]
    last_mate: Point | None  # M(s_j), when it exists

    @property
    def j(self) -> int:
        return len(self.terms) - 1

    def has(self, t: int) -> bool:
        if t == self.j + 1:
            return self.last_mate is not None
        return -1 <= t <= self.j

    def s(self, t: int) -> Point:
        """s_t for -1 <= t <= j, and s_{j+1} = M(s_j) when it exists."""
        if t == -1:
            return self.s_minus1
        if 0 <= t <= self.j:
            return self.terms[t]
        if t == self.j + 1 and self.last_mate is not None:
            return self.last_mate
        raise UsageError(f"path has no term s_{t}")


def alternating_path(grid: Hypergrid, x: Point, matching: MatchingSet, fid: PairFamilyId) -> AlternatingPath:
    """Alternate H-edges and straight M-pairs from ``x`` until the path stops."""
    mate = matching.mate
    if x not in mate:
        raise UsageError(f"{x} is not matched")
    terms = [x]
    seen = {x}
    while True:
        nxt = partner(grid, fid, terms[-1])
        if nxt is None:
            raise UsageError(f"family {fid} is not adequate: {terms[-1]} has no partner (pad the function first)")
        if nxt in seen:
            raise InvariantViolation(f"alternating path from {x} revisits {nxt}")
        terms.append(nxt)
        seen.add(nxt)
        q = mate.get(nxt)
        if q is None or classify_pair(fid, (nxt, q)) is not PairClass.STRAIGHT:
            break
        if q in seen:
            raise InvariantViolation(f"alternating path from {x} revisits {q}")
        terms.append(q)
        seen.add(q)
    return AlternatingPath(fid, x, mate[x], tuple(terms), mate.get(terms[-1]))


def e_minus(path: AlternatingPath, i: int) -> list[Pair]:
    """Matching pairs of the path up to s_i: (s_t, s_{t+1}) for odd -1 <= t < i."""
    if i % 2 or i < 0 or not path.has(i):
        raise UsageError(f"E_-({i}) needs an even index with s_{i} present")
    return [(path.s(t), path.s(t + 1)) for t in range(-1, i, 2)]


def e_plus(path: AlternatingPath, i: int) -> list[Pair]:
    """(s_-1, s_1) plus (s_t, s_{t+3}) for even 0 <= t <= i - 2."""
    if i % 2 or i < 0 or not path.has(i + 1) or i + 1 > path.j:
        raise UsageError(f"E_+({i}) needs an even index with s_{i + 1} on the path")
    return [(path.s(-1), path.s(1))] + [(path.s(t), path.s(t + 3)) for t in range(0, i - 1, 2)]


def build_rewiring_sets(path: AlternatingPath, i: int) -> tuple[list[Pair], list[Pair]]:
    return e_minus(path, i), e_plus(path, i)


@dataclass
class Failure:
    assertion: str
    detail: str
    family: PairFamilyId | None = None
    path: AlternatingPath | None = None


@dataclass
class PathDiagnostics:
    path: AlternatingPath
    hits: list[int] = field(default_factory=list)
    circ: dict[int, bool] = field(default_factory=dict)
    dcirc: dict[int, bool] = field(default_factory=dict)
    triangle_ok: bool | None = None
    failures: list[Failure] = field(default_factory=list)

    @property
    def hit(self) -> bool:
        return bool(self.hits)


def _valid_matching(pairs: list[Pair]) -> bool:
    seen: set[Point] = set()
    for u, v in pairs:
        if u == v or u in seen or v in seen:
            return False
        seen.update((u, v))
    return True


def _key(pairs: list[Pair], f: FunctionTable, params: PropertyParams, ell: int) -> tuple:
    total = 0
    for u, v in pairs:
        total = total + weight(f, params, u, v)
    return total, sum(pair_phi(u, v, ell) for u, v in pairs)


def _rewire(
    matching: MatchingSet, removed: list[Pair], added: list[Pair], f: FunctionTable, params: PropertyParams
) -> list[Pair] | None:
    """M - removed + (positive-weight part of added), or None if not a matching."""
    gone = {frozenset(p) for p in removed}
    kept = [p for p in matching.pairs if frozenset(p) not in gone]
    if len(kept) != len(matching.pairs) - len(gone):
        return None
    new = [p for p in added if p[0] != p[1] and weight(f, params, *p) > 0]
    candidate = kept + new
    return candidate if _valid_matching(candidate) else None


def verify_path(
    path: AlternatingPath,
    f: FunctionTable,
    params: PropertyParams,
    matching: MatchingSet,
) -> PathDiagnostics:
    """Record conditions along ``path`` and assert the implications they carry.

    ``f`` must already be perturbed so that no pair has zero weight.
    """
    fid = path.family
    grid = f.grid
    gap = 1 << fid.scale
    diag = PathDiagnostics(path)
    j = path.j
    s = path.s

    def fail(name: str, detail: str) -> None:
        diag.failures.append(Failure(name, detail, fid, path))

    def sl(u: Point, v: Point):
        return slack(f[u], f[v], pseudo_distance(params, u, v))

    def d(u: Point, v: Point):
        return pseudo_distance(params, u, v)

    for t in range(j + 1):
        if lower_class(fid, s(t)) != (t % 4 in (0, 3)):
            fail("side-alternation", f"s_{t} = {s(t)} is on the wrong side")
    evens = range(0, j, 2)
    for i in evens:
        lo, hi = (s(i), s(i + 1)) if i % 4 == 0 else (s(i + 1), s(i))
        if not precedes(lo, hi):
            fail("comparability-alternation", f"expected {lo} < {hi} at index {i}")

    for i in evens:
        violated = sl(s(i), s(i + 1)) > 0 or sl(s(i + 1), s(i)) > 0
        if violated:
            diag.hits.append(i)
        diag.circ[i] = sl(s(i), s(i + 1)) < 0 if i % 4 == 0 else sl(s(i + 1), s(i)) < 0
        if not violated and not diag.circ[i]:
            fail("circ-from-order", f"pair at index {i} is not violated yet the increment bound fails")
    for i in range(0, j + 2, 2):
        if not path.has(i):
            break
        diag.dcirc[i] = sl(s(i), s(i - 1)) > 0 if i % 4 == 0 else sl(s(i - 1), s(i)) > 0
    if not diag.dcirc.get(0, False):
        fail("start-in-X", f"{path.x} does not dominate its partner")

    for t in range(0, j - 2, 2):
        if d(s(t), s(t + 3)) != d(s(t + 1), s(t + 2)) or d(s(t + 3), s(t)) != d(s(t + 2), s(t + 1)):
            fail("distance-projection", f"distances around index {t} differ")

    d0, d1 = d(s(0), s(-1)), d(s(1), s(-1))
    if is_infinite(d0) or is_infinite(d1):
        diag.triangle_ok = None
    else:
        diag.triangle_ok = d0 - d1 == -(params.alpha * gap)

    def held(i: int) -> bool:
        return all(diag.circ.get(t, False) and diag.dcirc.get(t, False) for t in range(0, i + 1, 2))

    for i in evens:
        if not held(i):
            break
        if not path.has(i + 2):
            fail("matched-after-conditions", f"s_{i + 1} = {s(i + 1)} is unmatched although conditions held to {i}")
        elif not diag.dcirc.get(i + 2, False):
            fail("order-propagates", f"ordering condition fails at index {i + 2}")
        if params.is_monotone:
            for u, v in e_minus(path, i) + e_plus(path, i):
                if comparable(u, v) is Ordering.INCOMPARABLE:
                    fail("rewiring-comparable", f"{u} and {v} are incomparable (index {i})")

    if held(j - 1):
        terms = [s(t) for t in range(-1, j + 1)]
        if path.last_mate is not None:
            terms.append(path.last_mate)
        if len(set(terms)) != len(terms):
            fail("distinct-terms", "path terms repeat although conditions held")

    if not diag.hits:
        fail("path-hits-family", f"no violated pair on the path from {path.x}")
        if not all(diag.dcirc.get(i, False) for i in range(0, j + 2, 2)):
            fail("order-without-hits", "ordering condition fails on a path with no violated pair")
        if path.last_mate is None:
            fail("terminal-matched", f"last term {s(j)} is unmatched on a path with no violated pair")
        else:
            gap_j = abs(s(j)[fid.axis - 1] - path.last_mate[fid.axis - 1])
            if msd(gap_j, grid.ell) <= fid.scale:
                fail("terminal-gap", f"last pair gap {gap_j} has 2-adic order <= {fid.scale}")

    # No rewiring of M along the path may beat it on (weight, potential).
    base = _key(list(matching.pairs), f, params, grid.ell)
    rewirings = [(e_minus(path, i), e_plus(path, i), i) for i in evens]
    if path.last_mate is not None and j >= 1:
        rewirings.append((e_minus(path, j + 1), e_plus(path, j - 1) + [(s(j - 1), s(j + 1))], j + 1))
    for removed, added, i in rewirings:
        candidate = _rewire(matching, removed, added, f, params)
        if candidate is not None and _key(candidate, f, params, grid.ell) > base:
            fail("rewiring-improves", f"rewiring at index {i} beats the chosen matching")
    return diag


def path_has_violation(path: AlternatingPath, f: FunctionTable, params: PropertyParams) -> bool:
    for i in range(0, path.j, 2):
        u, v = path.s(i), path.s(i + 1)
        if weight(f, params, u, v) > 0:
            return True
    return False


@dataclass
class FamilyReport:
    family: PairFamilyId
    adequate: bool
    straight: int
    cross: int
    skew: int
    cross_in_family: int
    violated: int
    x_size: int = 0
    paths: int = 0
    paths_hit: int = 0
    bound_ok: bool | None = None
    # Unoriented cross count and whether every path from its endpoints hits;
    # informational, finite parameters only.
    split_cross: int | None = None
    all_endpoint_paths_hit: bool | None = None
    triangle_mismatches: int = 0


@dataclass
class VerifierReport:
    grid: Hypergrid
    params: PropertyParams
    padded: bool
    matching: MatchingSet
    families: list[FamilyReport]
    total_violated: int
    coverage_ok: bool
    global_bound_checked: bool
    global_bound_ok: bool | None
    raw_epsilon: Fraction | None = None
    raw_fraction_ok: bool | None = None
    failures: list[Failure] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    @property
    def paths_checked(self) -> int:
        return sum(r.paths for r in self.families)

    @property
    def paths_hit(self) -> int:
        return sum(r.paths_hit for r in self.families)

    def summary(self) -> str:
        lines = [
            f"grid: [{self.grid.k}]^{self.grid.n}{' (padded)' if self.padded else ''}",
            f"params: {self.params}",
            f"|M| = {len(self.matching)}  weight = {self.matching.total_weight}  phi = {self.matching.phi}",
            f"violated pairs = {self.total_violated}",
            f"paths checked = {self.paths_checked}  paths with a violated pair = {self.paths_hit}",
            f"coverage: {'ok' if self.coverage_ok else 'FAILED'}",
        ]
        if self.global_bound_checked:
            lines.append(f"global bound 2*violated >= |M|: {'ok' if self.global_bound_ok else 'FAILED'}")
        else:
            lines.append("global bound: not checked (some required family is not adequate)")
        if self.raw_epsilon is not None:
            lines.append(f"eps_f = {self.raw_epsilon}  fraction bound: {'ok' if self.raw_fraction_ok else 'FAILED'}")
        for r in self.families:
            if not (r.cross or r.violated):
                continue
            state = "ok" if r.bound_ok else ("skipped" if r.bound_ok is None else "FAILED")
            lines.append(
                f"  {r.family}: st={r.straight} cross={r.cross} skew={r.skew} "
                f"violated={r.violated} |X|={r.x_size} hits={r.paths_hit}/{r.paths} bound {state}"
            )
        for fail in self.failures:
            where = f" [{fail.family}]" if fail.family is not None else ""
            lines.append(f"FAILED {fail.assertion}{where}: {fail.detail}")
        return "\n".join(lines)


def _is_power_of_two(k: int) -> bool:
    return k & (k - 1) == 0


def verify_counts(
    f: FunctionTable,
    params: PropertyParams,
    pad_first: bool = False,
    caps: ExactCaps | None = None,
) -> VerifierReport:
    """Run every path and counting check on ``f`` (padded first if requested)."""
    raw = f
    if pad_first:
        if params.beta is not INF:
            raise UsageError("padding with -inf/+inf only preserves properties with beta = +inf")
        f = pad(f)
    elif not _is_power_of_two(f.grid.k):
        raise UsageError(f"k = {f.grid.k} is not a power of 2; pad the function first")
    grid = f.grid
    fp = perturb(f, params)
    vg = build_violation_graph(fp, params)
    matching = max_weight_phi_matching(vg, caps)
    violations = vg.pairs()
    counts, total = count_violated_pairs(f, params)

    failures: list[Failure] = []
    reports = []
    covered: set[frozenset] = set()
    for fid in families(grid, include_empty=False):
        classes = classify_pairs(matching, fid)
        cross = [p for p, c in classes.items() if c is PairClass.CROSS]
        covered.update(frozenset(p) for p in cross)
        cross_h = [p for p in cross if in_family(grid, fid, p)]
        report = FamilyReport(
            family=fid,
            adequate=is_adequate(grid, fid, violations),
            straight=sum(c is PairClass.STRAIGHT for c in classes.values()),
            cross=len(cross),
            skew=sum(c is PairClass.SKEW for c in classes.values()),
            cross_in_family=len(cross_h),
            violated=counts[fid],
        )
        reports.append(report)
        if not report.adequate:
            continue
        xs = sorted(build_X(grid, matching, fid, fp, params))
        report.x_size = len(xs)
        for x in xs:
            diag = verify_path(alternating_path(grid, x, matching, fid), fp, params, matching)
            report.paths += 1
            report.paths_hit += diag.hit
            report.triangle_mismatches += diag.triangle_ok is False
            failures.extend(diag.failures)
        report.bound_ok = 2 * report.violated >= report.cross
        if not report.bound_ok:
            failures.append(
                Failure("family-bound", f"{report.violated} violated pairs < |cross|/2 = {report.cross}/2", fid)
            )
        if params.is_finite:
            split = [p for p in matching.pairs if is_split_cross(fid, p)]
            report.split_cross = len(split)
            ends = [e for p in split if not in_family(grid, fid, p) for e in p]
            report.all_endpoint_paths_hit = all(
                path_has_violation(alternating_path(grid, e, matching, fid), fp, params) for e in ends
            )

    coverage_ok = all(frozenset(p) in covered for p in matching.pairs)
    if not coverage_ok:
        failures.append(Failure("coverage", "some matching pair is cross for no family"))

    spread = max((max(abs(a - b) for a, b in zip(x, y)) for x, y in violations), default=0)
    c = (spread - 1).bit_length() if spread else 0
    needed = [r for r in reports if r.family.scale <= c]
    global_checked = all(r.adequate for r in needed)
    global_ok = None
    if global_checked:
        global_ok = 2 * total >= len(matching)
        if not global_ok:
            failures.append(Failure("global-bound", f"{total} violated pairs < |M|/2 = {len(matching)}/2"))

    report = VerifierReport(
        grid=grid,
        params=params,
        padded=pad_first,
        matching=matching,
        families=reports,
        total_violated=total,
        coverage_ok=coverage_ok,
        global_bound_checked=global_checked,
        global_bound_ok=global_ok,
        failures=failures,
    )
    try:
        eps = epsilon_f(raw, params, caps)
    except InstanceTooLarge:
        eps = None
    if eps is not None and raw.grid.k > 1:
        report.raw_epsilon = eps
        ell = raw.grid.ell
        report.raw_fraction_ok = violated_fraction(raw, params) >= eps / (4 * raw.grid.n * (ell + 1))
        if not report.raw_fraction_ok:
            failures.append(Failure("fraction-bound", f"violated fraction below eps_f/(4n(l+1)) with eps_f = {eps}"))
    return report


def dump_counterexample(report: VerifierReport, f: FunctionTable, prefix: str | Path) -> tuple[Path, Path]:
    """Write ``prefix.fn`` (the input function) and ``prefix.txt`` (context)."""
    from .fileio import write_function

    prefix = Path(prefix)
    fn_path = prefix.with_suffix(".fn")
    txt_path = prefix.with_suffix(".txt")
    write_function(f, fn_path)
    lines = [
        f"alpha = {format_value(report.params.alpha)}",
        f"beta = {format_value(report.params.beta)}",
        f"padded = {str(report.padded).lower()}",
        f"matching ({len(report.matching)} pairs):",
    ]
    lines += [f"  {x} {y}" for x, y in report.matching.pairs]
    lines.append("failures:")
    for fail in report.failures:
        fam = str(fail.family) if fail.family is not None else "-"
        lines.append(f"  {fail.assertion} family={fam} {fail.detail}")
        if fail.path is not None:
            p = fail.path
            terms = " ".join(str(p.s(t)) for t in range(-1, p.j + 1))
            lines.append(f"    path: {terms}")
    txt_path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return fn_path, txt_path
