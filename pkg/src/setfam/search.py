"""Exact maximisation of w(F) under two r-wise k-intersection constraints.

Three engines, all working on 2^n-bit integers whose bit ``m`` stands for the
subset with mask ``m``:

* ``raw``: include/exclude over every subset (n <= 4); the plain oracle.
* ``family``: include/exclude over a linear extension of the order in which
  up-set (and, when restricted, left-compressed) closure is taken, so every
  leaf is a distinct feasible up-set.
* ``generators``: include/exclude over candidate generators in (size, mask)
  order, building left-compressed generating antichains and scoring them
  with sum 2^-max(E).

Feasibility is checked only against the current members/generators: a
superset never shrinks an intersection, and the constraints are hereditary.
"""
from __future__ import annotations

import os
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterator, Sequence

from setfam.errors import DomainError, SearchLimitError
from setfam.exactnum import DyadicRational, weight_Fn
from setfam.setcore import (
    Family,
    elements,
    format_family,
    max_element,
    popcount,
    set_key,
)

EXHAUSTIVE = "exhaustive"
BRANCH_AND_BOUND = "branch-and-bound"
MODES = (EXHAUSTIVE, BRANCH_AND_BOUND)
RAW_MAX_N = 4

# largest n each (mode, restrict_lc) combination will attempt
SIZE_LIMITS = {
    (EXHAUSTIVE, True): 7,
    (EXHAUSTIVE, False): 6,
    (BRANCH_AND_BOUND, True): 9,
    (BRANCH_AND_BOUND, False): 7,
}


@dataclass(frozen=True)
class SearchProblem:
    n: int
    r1: int = 3
    k1: int = 1
    r2: int = 2
    k2: int = 3
    mode: str = BRANCH_AND_BOUND
    restrict_lc: bool = True
    node_budget: int | None = None
    all_optima: bool = True

    def __post_init__(self) -> None:
        if self.r1 < 2 or self.r2 < 2:
            raise DomainError("r1 and r2 must be at least 2")
        if self.k1 < 0 or self.k2 < 0:
            raise DomainError("k1 and k2 must be non-negative")
        if self.mode not in MODES:
            raise DomainError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.n < 1:
            raise DomainError("n must be positive")

    @property
    def constraints(self) -> tuple[tuple[int, int], ...]:
        return ((self.r1, self.k1), (self.r2, self.k2))

    def check_limits(self) -> None:
        limit = SIZE_LIMITS[(self.mode, self.restrict_lc)]
        if self.n > limit:
            kind = "left-compressed" if self.restrict_lc else "unrestricted"
            raise SearchLimitError(
                f"refusing {kind} {self.mode} search at n={self.n}: limit is n <= {limit}"
            )


@dataclass
class SearchReport:
    problem: SearchProblem
    optimum: DyadicRational
    optimal_families: list[Family]
    nodes_explored: int
    wall_time: float
    proof_of_optimality: bool
    engine: str = ""

    def to_json(self, timing: bool = True) -> dict:
        return {
            "optimum": self.optimum.to_json(),
            "families": [f.sorted() for f in self.optimal_families],
            "nodes": self.nodes_explored,
            "millis": round(self.wall_time * 1000) if timing else 0,
            "proven": self.proof_of_optimality,
        }

    def summary(self) -> str:
        status = "proven" if self.proof_of_optimality else "NOT proven (node budget)"
        return (
            f"n={self.problem.n} optimum {self.optimum.render()} "
            f"[{len(self.optimal_families)} maximizer(s), {self.nodes_explored} nodes, {status}]"
        )


# --- precomputed tables ----------------------------------------------------


def _lower_neighbours(x: int, n: int, lc: bool) -> list[int]:
    out = [x ^ (1 << e) for e in range(n) if (x >> e) & 1]
    if lc:
        for e in range(n - 1):
            if (x >> e) & 1 and not (x >> (e + 1)) & 1:
                out.append(x ^ (0b11 << e))
    return out


def _upper_neighbours(x: int, n: int, lc: bool) -> list[int]:
    out = [x | (1 << e) for e in range(n) if not (x >> e) & 1]
    if lc:
        for e in range(1, n):
            if (x >> e) & 1 and not (x >> (e - 1)) & 1:
                out.append(x ^ (0b11 << (e - 1)))
    return out


def _elem_sum(x: int) -> int:
    return sum(elements(x))


@dataclass(frozen=True)
class _Tables:
    n: int
    lc: bool
    order: tuple[int, ...]  # strongest first: a set precedes everything it forces
    up: tuple[int, ...]  # up[x]: sets that must already be present before x
    down: tuple[int, ...]  # down[x]: sets that cannot be present if x is absent
    supersets: tuple[int, ...]
    left_shifts: tuple[int, ...]
    by_max: tuple[int, ...]


@lru_cache(maxsize=None)
def _tables(n: int, lc: bool) -> _Tables:
    size = 1 << n
    if lc:
        order = sorted(range(size), key=lambda x: (-popcount(x), _elem_sum(x), x))
    else:
        order = sorted(range(size), key=lambda x: (-popcount(x), x))
    up = [0] * size
    down = [0] * size
    for x in range(size):
        for y in _upper_neighbours(x, n, lc):
            up[x] |= 1 << y
    for x in reversed(order):
        acc = 1 << x
        for z in _lower_neighbours(x, n, lc):
            acc |= down[z]
        down[x] = acc
    sup = [0] * size
    full = size - 1
    for x in range(size):
        free = full & ~x
        sub = free
        acc = 0
        while True:
            acc |= 1 << (x | sub)
            if sub == 0:
                break
            sub = (sub - 1) & free
        sup[x] = acc
    lsh = [0] * size
    for x in range(size):
        for e in range(1, n):
            if (x >> e) & 1 and not (x >> (e - 1)) & 1:
                lsh[x] |= 1 << (x ^ (0b11 << (e - 1)))
    by_max = [0] * (n + 1)
    for x in range(size):
        by_max[max_element(x)] |= 1 << x
    return _Tables(n, lc, tuple(order), tuple(up), tuple(down), tuple(sup), tuple(lsh), tuple(by_max))


@lru_cache(maxsize=None)
def _meets(n: int, k: int) -> tuple[int, ...]:
    """meets[x]: masks y with |x & y| >= k."""
    size = 1 << n
    out = []
    for x in range(size):
        acc = 0
        for y in range(size):
            if popcount(x & y) >= k:
                acc |= 1 << y
        out.append(acc)
    return tuple(out)


def _iter_bits(v: int) -> Iterator[int]:
    while v:
        low = v & -v
        yield low.bit_length() - 1
        v ^= low


def bits_to_family(n: int, v: int) -> Family:
    return Family(n, frozenset(_iter_bits(v)))


class _Feasibility:
    """Incremental r-wise test. ``levels[d-1]`` holds (as a 2^n-bit set) every
    intersection of at most d chosen sets."""

    def __init__(self, n: int, constraints: Sequence[tuple[int, int]]):
        self.n = n
        self.size = 1 << n
        self.full = (1 << self.size) - 1
        self.constraints = [(r, k) for r, k in constraints if k > 0]
        self.depth = max((r for r, _ in self.constraints), default=1) - 1
        self.min_size = max((k for _, k in self.constraints), default=0)
        self.meets = {k: _meets(n, k) for _, k in self.constraints}
        self.pair_k = self.min_size
        self.pair = _meets(n, self.pair_k) if self.pair_k > 0 else None

    def initial(self) -> tuple[int, ...]:
        return (0,) * self.depth

    def ok(self, x: int, levels: tuple[int, ...]) -> bool:
        if popcount(x) < self.min_size:
            return False
        for r, k in self.constraints:
            if r >= 2 and levels[r - 2] & ~self.meets[k][x]:
                return False
        return True

    def add(self, x: int, levels: tuple[int, ...]) -> tuple[int, ...]:
        if not levels:
            return levels
        xb = 1 << x
        new = [levels[0] | xb]
        for d in range(1, len(levels)):
            acc = levels[d] | xb
            for m in _iter_bits(levels[d - 1]):
                acc |= 1 << (x & m)
            new.append(acc)
        return tuple(new)

    def compatible(self, x: int) -> int:
        return self.pair[x] if self.pair is not None else self.full


class _BudgetExhausted(Exception):
    pass


class _Engine:
    def __init__(self, problem: SearchProblem, worker: int = 0, workers: int = 1, split_depth: int = 0):
        self.p = problem
        self.n = problem.n
        self.feas = _Feasibility(self.n, problem.constraints)
        self.nodes = 0
        self.best = -1
        self.maxima: list[int] = []
        self.budget = problem.node_budget
        self.worker = worker
        self.workers = workers
        self.split_depth = split_depth if workers > 1 else None
        self.branch_counter = 0

    def _tick(self) -> None:
        self.nodes += 1
        if self.budget is not None and self.nodes > self.budget:
            raise _BudgetExhausted

    def _mine(self, depth: int) -> bool:
        """At the split depth, hand subtrees round-robin to workers."""
        if self.split_depth is None or depth != self.split_depth:
            return True
        idx = self.branch_counter
        self.branch_counter += 1
        return idx % self.workers == self.worker

    def _pruned(self, bound: int) -> bool:
        if self.p.mode == EXHAUSTIVE:
            return False
        return bound < self.best or (bound == self.best and not self.p.all_optima)

    def _record(self, count: int, item) -> None:
        if count > self.best:
            self.best = count
            self.maxima = [item]
        elif count == self.best and self.p.all_optima:
            self.maxima.append(item)

    def run(self) -> bool:
        try:
            self._start()
        except _BudgetExhausted:
            return False
        return True


class _FamilyEngine(_Engine):
    name = "family"

    def _start(self) -> None:
        self.t = _tables(self.n, self.p.restrict_lc)
        cand = 0
        for x in range(1 << self.n):
            if popcount(x) >= self.feas.min_size:
                cand |= 1 << x
        self._dfs(0, 0, cand, 0, self.feas.initial(), 0)

    def _dfs(self, i: int, fam: int, cand: int, count: int, levels, depth: int) -> None:
        self._tick()
        order, up, down, feas = self.t.order, self.t.up, self.t.down, self.feas
        while True:
            if cand == 0:
                self._record(count, fam)
                return
            if self._pruned(count + popcount(cand)):
                return
            x = order[i]
            xb = 1 << x
            if cand & xb and fam & up[x] == up[x] and feas.ok(x, levels):
                break
            cand &= ~down[x]
            i += 1
        if not self._mine(depth):
            return
        self._dfs(
            i + 1, fam | xb, cand & feas.compatible(x) & ~xb, count + 1, feas.add(x, levels), depth + 1
        )
        self._dfs(i + 1, fam, cand & ~down[x], count, levels, depth + 1)


class _GeneratorEngine(_Engine):
    name = "generators"

    def _start(self) -> None:
        if not self.p.restrict_lc:
            raise DomainError("generator search covers left-compressed families only")
        self.t = _tables(self.n, True)
        self.gorder = sorted(range(1 << self.n), key=lambda x: (popcount(x), x))
        self.gweight = [1 << (self.n - max_element(x)) for x in range(1 << self.n)]
        cand = 0
        for x in range(1 << self.n):
            if popcount(x) >= self.feas.min_size:
                cand |= 1 << x
        self._dfs(0, 0, cand, 0, (), self.feas.initial(), 0)

    def _bound(self, cand: int) -> int:
        total = 0
        n = self.n
        for m, mask in enumerate(self.t.by_max):
            c = popcount(cand & mask)
            if c:
                total += c << (n - m)
        return total

    def _dfs(self, i, upset, cand, wsum, gens, levels, depth) -> None:
        self._tick()
        t, feas, gorder = self.t, self.feas, self.gorder
        while True:
            if cand == 0:
                self._record(wsum, gens)
                return
            if self._pruned(wsum + self._bound(cand)):
                return
            e = gorder[i]
            eb = 1 << e
            if cand & eb and upset & t.left_shifts[e] == t.left_shifts[e] and feas.ok(e, levels):
                break
            if not upset & eb:
                cand &= ~t.down[e]
            cand &= ~eb
            i += 1
        if not self._mine(depth):
            return
        sup = t.supersets[e]
        self._dfs(
            i + 1,
            upset | sup,
            cand & feas.compatible(e) & ~sup,
            wsum + self.gweight[e],
            gens + (e,),
            feas.add(e, levels),
            depth + 1,
        )
        self._dfs(i + 1, upset, cand & ~t.down[e], wsum, gens, levels, depth + 1)

    def family_of(self, gens: tuple[int, ...]) -> int:
        v = 0
        for g in gens:
            v |= self.t.supersets[g]
        return v


class _RawEngine(_Engine):
    """Every family of subsets of [n], pruned only by infeasibility."""

    name = "raw"

    def _start(self) -> None:
        if self.n > RAW_MAX_N:
            raise SearchLimitError(f"raw enumeration is limited to n <= {RAW_MAX_N}")
        from setfam.setcore import is_left_compressed

        self._is_lc = is_left_compressed
        self.size = 1 << self.n
        self._dfs(0, 0, 0, self.feas.initial(), 0)

    def _dfs(self, x, fam, count, levels, depth) -> None:
        self._tick()
        if x == self.size:
            if count >= self.best and (
                not self.p.restrict_lc or self._is_lc(bits_to_family(self.n, fam))
            ):
                self._record(count, fam)
            return
        if self._pruned(count + self.size - x):
            return
        if not self._mine(depth):
            return
        if self.feas.ok(x, levels):
            self._dfs(x + 1, fam | (1 << x), count + 1, self.feas.add(x, levels), depth + 1)
        self._dfs(x + 1, fam, count, levels, depth + 1)


def _families_of(engine: _Engine) -> list[int]:
    if isinstance(engine, _GeneratorEngine):
        return [engine.family_of(g) for g in engine.maxima]
    return list(engine.maxima)


def _run_worker(args) -> tuple[int, list[int], int, bool]:
    cls, problem, worker, workers, split_depth = args
    engine = cls(problem, worker, workers, split_depth)
    complete = engine.run()
    return engine.best, _families_of(engine), engine.nodes, complete


def _execute(cls, problem: SearchProblem, threads: int) -> SearchReport:
    problem.check_limits()
    t0 = time.perf_counter()
    if threads <= 1:
        results = [_run_worker((cls, problem, 0, 1, 0))]
    else:
        split = max(1, (4 * threads).bit_length())
        jobs = [(cls, problem, w, threads, split) for w in range(threads)]
        with ProcessPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(_run_worker, jobs))
    best = max(r[0] for r in results)
    fams: set[int] = set()
    nodes = 0
    complete = True
    for b, found, nd, ok in results:
        nodes += nd
        complete &= ok
        if b == best:
            fams.update(found)
    families = sorted(
        (bits_to_family(problem.n, v) for v in fams),
        key=lambda f: [set_key(m) for m in f.sorted()],
    )
    if not problem.all_optima:
        families = families[:1]
    return SearchReport(
        problem=problem,
        optimum=DyadicRational(max(best, 0), problem.n),
        optimal_families=families,
        nodes_explored=nodes,
        wall_time=time.perf_counter() - t0,
        proof_of_optimality=complete,
        engine=cls.name,
    )


def solve(problem: SearchProblem, threads: int = 1) -> SearchReport:
    """Maximum weight over families meeting both constraints.

    Exhaustive mode at n <= 4 enumerates every family directly; otherwise the
    up-set engine runs (with weight pruning in branch-and-bound mode).
    """
    if problem.mode == EXHAUSTIVE and problem.n <= RAW_MAX_N:
        return _execute(_RawEngine, problem, threads)
    return _execute(_FamilyEngine, problem, threads)


def solve_via_generators(problem: SearchProblem, threads: int = 1) -> SearchReport:
    if not problem.restrict_lc:
        raise DomainError("solve_via_generators requires restrict_lc")
    return _execute(_GeneratorEngine, problem, threads)


def default_node_budget() -> int | None:
    raw = os.environ.get("SETFAM_NODE_BUDGET")
    return int(raw) if raw else None


# --- corpora over feasible up-sets -----------------------------------------


def enumerate_upsets(
    n: int, constraints: Sequence[tuple[int, int]], restrict_lc: bool = True
) -> Iterator[Family]:
    """Every feasible up-set (left-compressed ones if ``restrict_lc``)."""
    t = _tables(n, restrict_lc)
    feas = _Feasibility(n, constraints)
    order, up, down = t.order, t.up, t.down
    cand0 = 0
    for x in range(1 << n):
        if popcount(x) >= feas.min_size:
            cand0 |= 1 << x
    stack = [(0, 0, cand0, feas.initial())]
    while stack:
        i, fam, cand, levels = stack.pop()
        while cand:
            x = order[i]
            xb = 1 << x
            if cand & xb and fam & up[x] == up[x] and feas.ok(x, levels):
                break
            cand &= ~down[x]
            i += 1
        if not cand:
            yield bits_to_family(n, fam)
            continue
        stack.append((i + 1, fam, cand & ~down[x], levels))
        stack.append((i + 1, fam | xb, cand & feas.compatible(x) & ~xb, feas.add(x, levels)))


def random_upset(
    rng: random.Random,
    n: int,
    constraints: Sequence[tuple[int, int]],
    restrict_lc: bool = True,
    p_include: float | None = None,
) -> Family:
    """One random descent of the up-set tree: each free set is taken with
    probability ``p_include`` (drawn uniformly from [0.2, 0.95] if omitted)."""
    t = _tables(n, restrict_lc)
    feas = _Feasibility(n, constraints)
    p = rng.uniform(0.2, 0.95) if p_include is None else p_include
    fam = 0
    levels = feas.initial()
    cand = 0
    for x in range(1 << n):
        if popcount(x) >= feas.min_size:
            cand |= 1 << x
    for x in t.order:
        if not cand:
            break
        xb = 1 << x
        if cand & xb and fam & t.up[x] == t.up[x] and feas.ok(x, levels) and rng.random() < p:
            fam |= xb
            cand &= feas.compatible(x) & ~xb
            levels = feas.add(x, levels)
        else:
            cand &= ~t.down[x]
    return bits_to_family(n, fam)


# --- theorem table ---------------------------------------------------------


@dataclass
class TheoremRow:
    n: int
    predicted: DyadicRational
    source: str
    searched: DyadicRational | None = None
    maximizers: int | None = None
    proven: bool | None = None

    @property
    def confirmed(self) -> bool | None:
        if self.searched is None:
            return None
        return self.searched == self.predicted and bool(self.proven)


@dataclass
class TheoremTable:
    rows: list[TheoremRow] = field(default_factory=list)

    @property
    def monotone(self) -> bool:
        return all(a.predicted <= b.predicted for a, b in zip(self.rows, self.rows[1:]))

    @property
    def at_most_quarter(self) -> bool:
        quarter = DyadicRational(1, 2)
        return all(r.predicted <= quarter for r in self.rows)

    @property
    def ok(self) -> bool:
        searched = [r.confirmed for r in self.rows if r.searched is not None]
        return self.monotone and self.at_most_quarter and all(searched)


def predicted_W(n: int) -> tuple[DyadicRational, str]:
    """The value of W(n) = W_{1,3}(n) claimed for n >= 7."""
    if n < 7:
        raise DomainError("the closed form covers n >= 7")
    if n <= 72:
        return weight_Fn(7), "w(F_7)"
    if n % 2:
        return weight_Fn(n), f"w(F_{n})"
    return weight_Fn(n - 1), f"w(F_{n - 1})"


def verify_theorem_table(n_max: int, search_max: int = 8, threads: int = 1) -> TheoremTable:
    table = TheoremTable()
    for n in range(7, n_max + 1):
        value, source = predicted_W(n)
        row = TheoremRow(n, value, source)
        if n <= search_max:
            rep = solve(SearchProblem(n=n), threads=threads)
            row.searched = rep.optimum
            row.maximizers = len(rep.optimal_families)
            row.proven = rep.proof_of_optimality
        table.rows.append(row)
    return table


def describe_family(f: Family) -> str:
    return format_family(f)
