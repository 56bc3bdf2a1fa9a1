"""Exhaustive search for colorings of [1..N] avoiding monochromatic instances.

An *instance* is a finite set of integers produced by one pattern generator
(e.g. {a, b, a*b} for the star-triple family).  A coloring avoids the family
when no instance is monochromatic, so the search is a not-all-equal
hypergraph coloring problem:

* elements are colored in increasing order, colors tried in ascending order;
* when all but one element of an instance share color c, c is removed from
  the last element, and an element with one remaining color is assigned;
* a new color may only be used once all smaller ones appear earlier
  (color names are interchangeable), which also forces color(first) = 1;
* conflicts carry the set of decision levels they depend on, and the search
  jumps back to the deepest such level instead of the previous one.

Backjumping only skips subtrees that contain no solution, so the first
solution found is still the lexicographically least avoiding coloring.
"""

from __future__ import annotations

import bisect
import enum
import itertools
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Optional, Sequence

from .errors import ArityMismatch, DomainIncompatible, MalformedCertificate, UndefinedForKind
from .lk_algebra import Kind, LKParams, iterated_star, star, transform
from .patterns import Combiner, enumerate_ordered_blocks
from .polyring import Polynomial, format_polynomial

SPLIT_DEPTH = 4


class Generator(enum.Enum):
    STAR_TRIPLE = "startriple"
    BRAUER_CHAIN = "brauer"
    SYMMETRIC_DEPTH = "symmetric"
    DEUBER_SHAPE = "deuber"
    MILLIKEN_TAYLOR = "mt"


@dataclass(frozen=True)
class PatternFamilySpec:
    """Which instances to avoid.

    ``lks`` holds one parameter pair, except for Milliken-Taylor families
    which take one per block.  Unused size fields are ignored.
    """

    generator: Generator
    lks: tuple[LKParams, ...]
    L: int = 2
    depth: int = 2
    m: int = 2
    f: Optional[Polynomial | Combiner] = None
    index_bound: int = 2
    max_block_size: int = 2
    require_distinct: bool = True
    signed: bool = False

    @property
    def p(self) -> LKParams:
        return self.lks[0]

    def to_json(self) -> dict[str, Any]:
        g = self.generator
        out: dict[str, Any] = {"generator": g.value}
        if g is Generator.MILLIKEN_TAYLOR:
            out["lks"] = [[str(p.ell), str(p.k)] for p in self.lks]
            f = self.f
            out["f"] = format_polynomial(f) if isinstance(f, Polynomial) else getattr(f, "label", None)
            out["index_bound"] = str(self.index_bound)
            out["max_block_size"] = str(self.max_block_size)
        else:
            out["lk"] = [str(self.p.ell), str(self.p.k)]
        if g is Generator.BRAUER_CHAIN or g is Generator.DEUBER_SHAPE:
            out["L"] = str(self.L)
        if g is Generator.SYMMETRIC_DEPTH:
            out["depth"] = str(self.depth)
        if g is Generator.DEUBER_SHAPE:
            out["m"] = str(self.m)
        out["require_distinct"] = self.require_distinct
        out["domain"] = "signed" if self.signed else "positive"
        return out


def star_triple(p: LKParams, require_distinct: bool = True, signed: bool = False) -> PatternFamilySpec:
    return PatternFamilySpec(Generator.STAR_TRIPLE, (p,), require_distinct=require_distinct, signed=signed)


def domain_bounds(spec: PatternFamilySpec, N: int) -> tuple[int, int]:
    return (-N, N) if spec.signed else (1, N)


# ---------------------------------------------------------------- instances


def _check_domain(spec: PatternFamilySpec) -> None:
    if spec.signed:
        return
    for p in spec.lks:
        if p.ell < 0:
            raise DomainIncompatible(
                f"{p} has negative ell; only the signed domain [-N..N] is supported for it"
            )


def _grows(p: LKParams, a: int, b: int) -> bool:
    """True when star(p, a, b') is nondecreasing in b' for all b' >= b."""
    if p.kind is Kind.SUM:
        return True
    return p.ell > 0 and transform(p, a) > 0 and transform(p, b) > 0


def _star_triples(spec, lo, hi):
    p = spec.p
    out = []
    for a in range(lo, hi + 1):
        for b in range(a + 1 if spec.require_distinct else a, hi + 1):
            c = star(p, a, b)
            if lo <= c <= hi:
                if spec.require_distinct:
                    if c != a and c != b:
                        out.append((a, b, c))
                else:
                    out.append((a, b, c))
            elif c > hi and _grows(p, a, b):
                break
    return out


def _brauer_chains(spec, lo, hi):
    p, L = spec.p, spec.L
    out = []
    for a in range(lo, hi + 1):
        for b in range(lo, hi + 1):
            if spec.require_distinct and a == b:
                continue
            vals = [a, b]
            c = a
            ok = True
            for _ in range(L):
                c = star(p, c, b)
                if not lo <= c <= hi:
                    ok = False
                    break
                vals.append(c)
            if not ok:
                if star(p, a, b) > hi and _grows(p, a, b):
                    break
                continue
            out.append(vals)
    return out


def _symmetric_sets(spec, lo, hi):
    p, d = spec.p, spec.depth
    out = []

    def extend(chosen, values, start):
        if len(chosen) == d:
            out.append(values)
            return
        for x in range(start, hi + 1):
            new = [x] + [star(p, v, x) for v in values]
            if all(lo <= v <= hi for v in new):
                extend(chosen + [x], values + new, x + 1)
            elif any(v > hi and _grows(p, u, x) for u, v in zip(values, new[1:])):
                break

    extend([], [], lo)
    return out


def _deuber_shapes(spec, lo, hi):
    p, m, L = spec.p, spec.m, spec.L
    out = []
    dom = range(lo, hi + 1)
    ok_elems = [a for a in dom if transform(p, a) not in (0, 1, -1)]
    for a in itertools.product(ok_elems, repeat=m + 1):
        images = [transform(p, x) for x in a]
        vals = [a[0]]
        good = True
        for j in range(1, m + 1):
            for nu in itertools.product(range(L + 1), repeat=j):
                prod = images[j]
                for s, e in enumerate(nu):
                    if e:
                        prod *= images[s] ** e
                v = (prod - p.k) // p.ell
                if not lo <= v <= hi:
                    good = False
                    break
                vals.append(v)
            if not good:
                break
        if good:
            out.append(vals)
    return out


def _mt_families(spec, lo, hi):
    ps = spec.lks
    comb = spec.f if isinstance(spec.f, Combiner) else Combiner.from_polynomial(spec.f)
    n = spec.index_bound
    blocks = enumerate_ordered_blocks(n, len(ps), spec.max_block_size)
    groups: list[LKParams] = []
    for p in ps:
        if p not in groups:
            groups.append(p)
    which = [groups.index(p) for p in ps]
    dom = range(lo, hi + 1)
    seqs = list(itertools.permutations(dom, n))
    out = []
    for choice in itertools.product(seqs, repeat=len(groups)):
        vals = []
        good = True
        for blk in blocks:
            args = [iterated_star(p, [choice[g][i - 1] for i in b]) for p, g, b in zip(ps, which, blk)]
            try:
                v = comb(*args)
            except ZeroDivisionError:
                good = False
                break
            if v.denominator != 1 or not lo <= v <= hi:
                good = False
                break
            vals.append(int(v))
        if good:
            out.append(vals)
    return out


_ENUMERATORS = {
    Generator.STAR_TRIPLE: _star_triples,
    Generator.BRAUER_CHAIN: _brauer_chains,
    Generator.SYMMETRIC_DEPTH: _symmetric_sets,
    Generator.DEUBER_SHAPE: _deuber_shapes,
    Generator.MILLIKEN_TAYLOR: _mt_families,
}


def _validate_spec(spec: PatternFamilySpec) -> None:
    g = spec.generator
    if g is Generator.MILLIKEN_TAYLOR:
        if spec.f is None:
            raise ValueError("Milliken-Taylor families need a combining function")
        arity = spec.f.arity
        if arity != len(spec.lks):
            raise ArityMismatch(f"combiner arity {arity} for {len(spec.lks)} blocks")
    elif len(spec.lks) != 1:
        raise ValueError(f"{g.value} takes exactly one parameter pair")
    if g in (Generator.BRAUER_CHAIN, Generator.DEUBER_SHAPE) and not spec.p.has_transform:
        raise UndefinedForKind(f"{g.value} needs ell != 0")
    if g is Generator.SYMMETRIC_DEPTH and spec.depth < 2:
        raise ValueError("symmetric depth must be at least 2")
    if g is Generator.BRAUER_CHAIN and spec.L < 1:
        raise ValueError("L must be positive")
    if g is Generator.DEUBER_SHAPE and (spec.m < 1 or spec.L < 1):
        raise ValueError("m and L must be positive")
    _check_domain(spec)


def enumerate_instances(spec: PatternFamilySpec, N: int) -> list[tuple[int, ...]]:
    """All instances inside the domain at size N, as sorted tuples.

    With ``require_distinct`` an instance whose generator outputs collide is
    dropped (as is any instance with fewer than two elements); otherwise
    repeated outputs are merged.  The result is sorted and duplicate-free.
    """
    if N < 1:
        raise ValueError("N must be positive")
    _validate_spec(spec)
    lo, hi = domain_bounds(spec, N)
    seen = set()
    for raw in _ENUMERATORS[spec.generator](spec, lo, hi):
        s = set(raw)
        if spec.require_distinct and (len(s) != len(raw) or len(s) < 2):
            continue
        seen.add(tuple(sorted(s)))
    return sorted(seen)


# -------------------------------------------------------------- certificates


@dataclass(frozen=True)
class ColoringCertificate:
    N: int
    r: int
    colors: tuple[int, ...]
    signed: bool = False

    def color_of(self, x: int) -> int:
        return self.colors[x + self.N] if self.signed else self.colors[x - 1]

    def to_json(self) -> dict[str, Any]:
        return {
            "N": str(self.N),
            "r": str(self.r),
            "domain": "signed" if self.signed else "positive",
            "colors": [str(c) for c in self.colors],
        }

    @classmethod
    def from_json(cls, data: dict[str, Any]) -> "ColoringCertificate":
        try:
            N = int(data["N"])
            r = int(data["r"])
            colors = tuple(int(c) for c in data["colors"])
            domain = data.get("domain", "positive")
        except (KeyError, TypeError, ValueError) as exc:
            raise MalformedCertificate(f"bad certificate record: {exc}") from exc
        if domain not in ("positive", "signed"):
            raise MalformedCertificate(f"unknown domain {domain!r}")
        return cls(N, r, colors, domain == "signed")


def verify_certificate(spec: PatternFamilySpec, cert: ColoringCertificate) -> bool:
    """True iff no instance is monochromatic under ``cert``.

    Instances are enumerated afresh from the pattern family; nothing from a
    previous search is reused.
    """
    if cert.N < 1 or cert.r < 1:
        raise MalformedCertificate("N and r must be positive")
    if cert.signed != spec.signed:
        raise MalformedCertificate("certificate domain does not match the pattern family")
    expected = 2 * cert.N + 1 if cert.signed else cert.N
    if len(cert.colors) != expected:
        raise MalformedCertificate(f"expected {expected} colors, got {len(cert.colors)}")
    if any(not 1 <= c <= cert.r for c in cert.colors):
        raise MalformedCertificate(f"colors must lie in 1..{cert.r}")
    for inst in enumerate_instances(spec, cert.N):
        if len({cert.color_of(x) for x in inst}) == 1:
            return False
    return True


# -------------------------------------------------------------------- solver


class BudgetExceeded(Exception):
    pass


class _Level:
    __slots__ = ("var", "color", "acc", "trail_len", "prune_len")

    def __init__(self, var, trail_len, prune_len):
        self.var = var
        self.color = 0
        self.acc = 0
        self.trail_len = trail_len
        self.prune_len = prune_len


class _Solver:
    """Not-all-equal r-coloring of variables 0..n-1 by DPLL with backjumping.

    Masks are ints whose bit d stands for the decision made at level d; level
    0 is root propagation and its bit is always cleared.
    """

    def __init__(self, n: int, edges: Sequence[Sequence[int]], r: int):
        self.n = n
        self.r = r
        self.edges = [tuple(e) for e in edges]
        self.var_edges: list[list[int]] = [[] for _ in range(n)]
        for i, e in enumerate(self.edges):
            for v in e:
                self.var_edges[v].append(i)
        self.nodes = 0

    def solve(self, prefix: Sequence[int] = (), node_limit: Optional[int] = None, deadline=None):
        """Return the lex-least coloring (list of colors 1..r) or None.

        ``prefix`` pins the colors of variables 0..len(prefix)-1.
        """
        n, r, edges = self.n, self.r, self.edges
        K = len(prefix)
        if K > n:
            raise ValueError("prefix longer than the variable list")
        if any(len(e) < 2 for e in edges) or (r == 1 and edges):
            return None
        var_edges = self.var_edges
        size = [len(e) for e in edges]
        ncol = [0] * len(edges)
        cnt = [[0] * (r + 1) for _ in edges]
        color = [0] * n
        dmask = [0] * n
        removed: list[list[Optional[int]]] = [[None] * (r + 1) for _ in range(n)]
        ndom = [r] * n
        trail: list[int] = []
        prunes: list[tuple[int, int]] = []
        levels = [_Level(-1, 0, 0)]
        queue: list[int] = []
        qpos = 0

        def assign(v, c, mask):
            color[v] = c
            dmask[v] = mask
            trail.append(v)
            for e in var_edges[v]:
                ncol[e] += 1
                cnt[e][c] += 1
            queue.append(v)

        def propagate():
            nonlocal qpos
            while qpos < len(queue):
                v = queue[qpos]
                qpos += 1
                c = color[v]
                for e in var_edges[v]:
                    k = ncol[e]
                    if cnt[e][c] != k:
                        continue
                    s = size[e]
                    if k == s:
                        m = 0
                        for u in edges[e]:
                            m |= dmask[u]
                        return m
                    if k != s - 1:
                        continue
                    m = 0
                    last = -1
                    for u in edges[e]:
                        if color[u]:
                            m |= dmask[u]
                        else:
                            last = u
                    ru = removed[last]
                    if ru[c] is not None:
                        continue
                    ru[c] = m
                    ndom[last] -= 1
                    prunes.append((last, c))
                    if ndom[last] <= 1:
                        m = 0
                        keep = 0
                        for cc in range(1, r + 1):
                            if ru[cc] is None:
                                keep = cc
                            else:
                                m |= ru[cc]
                        if keep == 0 or (last < K and keep != prefix[last]):
                            return m
                        assign(last, keep, m)
            return None

        def backtrack_into(d):
            # undo everything done at levels >= d, keeping level d's record
            nonlocal qpos
            rec = levels[d]
            while len(trail) > rec.trail_len:
                v = trail.pop()
                c = color[v]
                for e in var_edges[v]:
                    ncol[e] -= 1
                    cnt[e][c] -= 1
                color[v] = 0
                dmask[v] = 0
            while len(prunes) > rec.prune_len:
                v, c = prunes.pop()
                removed[v][c] = None
                ndom[v] += 1
            del levels[d + 1:]
            del queue[:]
            qpos = 0

        def color_limit(x):
            # first-appearance rule: colors above max(color[0..x-1]) + 1 are symmetric copies
            top = 0
            for i in range(x):
                if color[i] > top:
                    top = color[i]
                    if top >= r - 1:
                        return r
            return top + 1

        def try_colors(d, start):
            """Give level d's variable its next admissible color >= start.

            Returns None on success, else the mask of decisions that refute
            every remaining color (level d's own bit excluded).
            """
            rec = levels[d]
            x = rec.var
            limit = color_limit(x)
            if x < K:
                allowed = [prefix[x]] if start <= prefix[x] <= limit else []
            else:
                allowed = range(start, limit + 1)
            rx = removed[x]
            for c in allowed:
                if rx[c] is None:
                    rec.color = c
                    assign(x, c, 1 << d)
                    return None
            m = rec.acc
            for c in range(1, r + 1):
                if rx[c] is not None:
                    m |= rx[c]
            if limit < r or x < K:
                # excluded by symmetry or by the pin: depends on all earlier decisions
                m |= (1 << d) - 2
            return m

        next_var = 0
        conflict = propagate()
        while True:
            while conflict is not None:
                conflict &= ~1
                if conflict == 0:
                    return None
                d = conflict.bit_length() - 1
                backtrack_into(d)
                rec = levels[d]
                rec.acc |= conflict & ~(1 << d)
                next_var = rec.var
                m = try_colors(d, rec.color + 1)
                if m is None:
                    conflict = propagate()
                else:
                    del levels[d:]
                    conflict = m
            while next_var < n and color[next_var]:
                next_var += 1
            if next_var == n:
                return list(color)
            self.nodes += 1
            if node_limit is not None and self.nodes > node_limit:
                raise BudgetExceeded
            if deadline is not None and self.nodes % 256 == 0 and time.monotonic() > deadline:
                raise BudgetExceeded
            d = len(levels)
            levels.append(_Level(next_var, len(trail), len(prunes)))
            m = try_colors(d, 1)
            if m is None:
                conflict = propagate()
            else:
                del levels[d:]
                conflict = m


# ------------------------------------------------------------- search driver


def _prefixes(depth: int, r: int) -> list[tuple[int, ...]]:
    """Color vectors of the given length obeying the first-appearance rule, lex order."""
    out = [()]
    for _ in range(depth):
        out = [pre + (c,) for pre in out for c in range(1, min(r, max(pre, default=0) + 1) + 1)]
    return out


@dataclass
class _Problem:
    """The hypergraph of one (spec, N): constrained elements only."""

    elements: list[int]  # the whole domain, increasing
    var_of: dict[int, int]  # constrained element -> variable index
    edges: list[tuple[int, ...]]  # in variable indices

    @classmethod
    def build(cls, elements: Sequence[int], instances: Sequence[Sequence[int]]) -> "_Problem":
        used = sorted({x for inst in instances for x in inst})
        var_of = {x: i for i, x in enumerate(used)}
        edges = [tuple(var_of[x] for x in inst) for inst in instances]
        return cls(list(elements), var_of, edges)

    def coloring(self, var_colors: Sequence[int]) -> tuple[int, ...]:
        # unconstrained elements take color 1, the lex-least choice
        return tuple(var_colors[self.var_of[x]] if x in self.var_of else 1 for x in self.elements)


def _solve_sub(args):
    n, edges, r, prefix, node_limit, deadline = args
    solver = _Solver(n, edges, r)
    try:
        sol = solver.solve(prefix, node_limit=node_limit, deadline=deadline)
    except BudgetExceeded:
        return "budget", solver.nodes
    return sol, solver.nodes


@dataclass
class SolveOutcome:
    coloring: Optional[tuple[int, ...]]
    nodes: int
    exhausted: bool = False


def _solve_problem(problem: _Problem, r: int, node_limit=None, deadline=None, pool=None) -> SolveOutcome:
    n = len(problem.var_of)
    edges = problem.edges
    if any(len(e) < 2 for e in edges) or (r == 1 and edges):
        return SolveOutcome(None, 0)
    if n == 0:
        return SolveOutcome(problem.coloring([]), 0)
    prefixes = _prefixes(min(SPLIT_DEPTH, n), r)
    budget = node_limit
    used = 0
    if pool is None:
        for pre in prefixes:
            cap = None if budget is None else budget - used
            sol, nodes = _solve_sub((n, edges, r, pre, cap, deadline))
            if sol == "budget":
                return SolveOutcome(None, budget if budget is not None else used + nodes, True)
            used += nodes
            if sol is not None:
                return SolveOutcome(problem.coloring(sol), used)
        return SolveOutcome(None, used)
    # every subproblem runs with the full cap; results are consumed in prefix
    # order so the outcome matches the sequential loop exactly
    futures = [pool.submit(_solve_sub, (n, edges, r, pre, budget, deadline)) for pre in prefixes]
    try:
        for fut in futures:
            sol, nodes = fut.result()
            if sol == "budget" or (budget is not None and used + nodes > budget):
                return SolveOutcome(None, budget if budget is not None else used + nodes, True)
            used += nodes
            if sol is not None:
                return SolveOutcome(problem.coloring(sol), used)
        return SolveOutcome(None, used)
    finally:
        for fut in futures:
            fut.cancel()


def _elements(spec: PatternFamilySpec, N: int) -> range:
    lo, hi = domain_bounds(spec, N)
    return range(lo, hi + 1)


def find_avoiding_coloring(
    spec: PatternFamilySpec,
    N: int,
    r: int,
    workers: int = 1,
    node_limit: Optional[int] = None,
    time_limit: Optional[float] = None,
) -> Optional[ColoringCertificate]:
    """The lexicographically least r-coloring of the domain avoiding every
    instance, or None when exhaustive search proves there is none.

    Raises :class:`BudgetExceeded` if a node or time limit runs out first.
    """
    if r < 1:
        raise ValueError("r must be positive")
    problem = _Problem.build(_elements(spec, N), enumerate_instances(spec, N))
    deadline = None if time_limit is None else time.monotonic() + time_limit
    if workers > 1:
        with ProcessPoolExecutor(workers) as pool:
            out = _solve_problem(problem, r, node_limit, deadline, pool)
    else:
        out = _solve_problem(problem, r, node_limit, deadline)
    if out.exhausted:
        raise BudgetExceeded
    if out.coloring is None:
        return None
    return ColoringCertificate(N, r, out.coloring, spec.signed)


class ResultKind(enum.Enum):
    THRESHOLD = "Threshold"
    NO_THRESHOLD_UP_TO = "NoThresholdUpTo"
    BUDGET_EXHAUSTED = "BudgetExhausted"


@dataclass
class SearchReport:
    spec: PatternFamilySpec
    r: int
    result: ResultKind
    N: int  # N_min, N_max, or the largest N known to admit an avoiding coloring
    certificate: Optional[ColoringCertificate]
    nodes: int = 0
    instances: int = 0
    wall_time: float = field(default=0.0, compare=False)

    @property
    def threshold(self) -> Optional[int]:
        return self.N if self.result is ResultKind.THRESHOLD else None

    def to_json(self, include_timing: bool = False) -> dict[str, Any]:
        key = {
            ResultKind.THRESHOLD: "N_min",
            ResultKind.NO_THRESHOLD_UP_TO: "N_max",
            ResultKind.BUDGET_EXHAUSTED: "avoided_up_to",
        }[self.result]
        stats: dict[str, Any] = {"nodes": str(self.nodes), "instances": str(self.instances)}
        if include_timing:
            stats["wall_time_s"] = f"{self.wall_time:.3f}"
        return {
            "spec": self.spec.to_json(),
            "r": str(self.r),
            "result": {"kind": self.result.value, key: str(self.N)},
            "certificate": None if self.certificate is None else self.certificate.to_json(),
            "stats": stats,
        }


def _extend(spec, prev: ColoringCertificate, N: int, new_instances, r: int):
    """Try the colorings of the elements new at size N on top of ``prev``."""
    lo, hi = domain_bounds(spec, N)
    fresh = [lo, hi] if spec.signed else [hi]
    base = {x: prev.color_of(x) for x in _elements(spec, N - 1)}
    for combo in itertools.product(range(1, r + 1), repeat=len(fresh)):
        col = dict(base)
        col.update(zip(fresh, combo))
        if all(len({col[x] for x in inst}) > 1 for inst in new_instances):
            return ColoringCertificate(N, r, tuple(col[x] for x in _elements(spec, N)), spec.signed)
    return None


def min_ramsey_threshold(
    spec: PatternFamilySpec,
    r: int,
    N_max: int,
    workers: int = 1,
    node_limit: Optional[int] = None,
    time_limit: Optional[float] = None,
) -> SearchReport:
    """Least N whose every r-coloring has a monochromatic instance.

    Instances at N are those at N+1 that fit in the smaller domain, so
    avoidability is monotone and an upward scan finds the threshold.  A size
    is settled cheaply when the previous avoiding coloring extends to the new
    elements; otherwise by full search.  The reported certificate is the
    lex-least avoiding coloring at N_min - 1 (or at N_max).
    """
    if N_max < 1:
        raise ValueError("N_max must be positive")
    if r < 1:
        raise ValueError("r must be positive")
    start = time.monotonic()
    deadline = None if time_limit is None else start + time_limit
    nodes = 0
    pool = ProcessPoolExecutor(workers) if workers > 1 else None

    # enumerate at geometrically growing sizes and slice by largest |element|
    cache_N = 0
    cache: list[tuple[int, ...]] = []
    cache_keys: list[int] = []

    def instances_at(N):
        nonlocal cache_N, cache, cache_keys
        if N > cache_N:
            cache_N = min(N_max, max(16, 2 * N))
            cache = sorted(enumerate_instances(spec, cache_N), key=lambda t: max(abs(x) for x in t))
            cache_keys = [max(abs(x) for x in t) for t in cache]
        return cache[: bisect.bisect_right(cache_keys, N)], bisect.bisect_left(cache_keys, N)

    def solve(N):
        nonlocal nodes
        insts, _ = instances_at(N)
        problem = _Problem.build(_elements(spec, N), sorted(insts))
        cap = None if node_limit is None else node_limit - nodes
        out = _solve_problem(problem, r, cap, deadline, pool)
        nodes += out.nodes
        return out, len(insts)

    def canonical(N, fallback):
        # re-solve for the lex-least certificate; keep the known one if the budget runs out
        out, _ = solve(N)
        if out.exhausted or out.coloring is None:
            return fallback
        return ColoringCertificate(N, r, out.coloring, spec.signed)

    def report(kind, N, cert, n_inst):
        return SearchReport(spec, r, kind, N, cert, nodes, n_inst, time.monotonic() - start)

    try:
        prev: Optional[ColoringCertificate] = None
        n_inst = 0
        for N in range(1, N_max + 1):
            if deadline is not None and time.monotonic() > deadline:
                return report(ResultKind.BUDGET_EXHAUSTED, N - 1, prev, n_inst)
            insts, first_new = instances_at(N)
            n_inst = len(insts)
            cert = None
            if prev is not None:
                cert = _extend(spec, prev, N, insts[first_new:], r)
            if cert is None:
                out, _ = solve(N)
                if out.exhausted:
                    return report(ResultKind.BUDGET_EXHAUSTED, N - 1, prev, n_inst)
                if out.coloring is None:
                    if N == 1:
                        return report(ResultKind.THRESHOLD, 1, None, n_inst)
                    return report(ResultKind.THRESHOLD, N, canonical(N - 1, prev), n_inst)
                cert = ColoringCertificate(N, r, out.coloring, spec.signed)
            prev = cert
        return report(ResultKind.NO_THRESHOLD_UP_TO, N_max, canonical(N_max, prev), n_inst)
    finally:
        if pool is not None:
            pool.shutdown(cancel_futures=True)
