"""Check bundles reproducing the computationally checkable claims.

Each ``check_*`` function returns a :class:`Check`; a bundle is a list of
such functions. A contradiction of a proven lemma raises
:class:`CounterexampleError` instead of returning a failed check.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Callable

from setfam import corpus
from setfam.constructions import (
    construct_Fn,
    extend,
    fn_cardinality,
    katona_2intersect_bound,
    katona_family,
)
from setfam.errors import CounterexampleError
from setfam.exactnum import DyadicRational, weight_Fn
from setfam.search import (
    EXHAUSTIVE,
    SearchProblem,
    default_node_budget,
    enumerate_upsets,
    random_upset,
    solve,
    solve_via_generators,
    verify_theorem_table,
)
from setfam.setcore import (
    compress_family,
    elements,
    generating_set,
    is_lc_genset,
    is_left_compressed,
    is_r_wise_k_intersecting,
    weight,
    weight_via_generators,
)
from setfam.transforms import (
    find_sharp_pairs,
    find_sharp_triples,
    is_almost_trivial,
    lemma1_transform,
    n_minus_one_pairs,
    project_cylinder,
    shorten,
    shorten_delta,
    split_generators,
)

W_CONSTRAINTS = corpus.W_CONSTRAINTS
SMALL_N_VALUES = {3: DyadicRational(1, 3), 4: DyadicRational(1, 3), 5: DyadicRational(3, 4), 6: DyadicRational(3, 4)}


@dataclass
class Check:
    name: str
    passed: bool
    detail: str
    witness: object = None
    seconds: float = 0.0
    rows: list[str] = field(default_factory=list)


def _feasible(f) -> bool:
    return all(is_r_wise_k_intersecting(f, r, k) for r, k in W_CONSTRAINTS)


def check_small_n(seed: int = 0) -> Check:
    rows = []
    ok = True
    for n, expected in SMALL_N_VALUES.items():
        for lc in (False, True):
            rep = solve(SearchProblem(n=n, mode=EXHAUSTIVE, restrict_lc=lc))
            good = rep.optimum == expected and rep.proof_of_optimality and all(
                _feasible(f) for f in rep.optimal_families
            )
            ok &= good
            kind = "left-compressed up-sets" if lc else ("all families" if rep.engine == "raw" else "all up-sets")
            rows.append(
                f"W({n}) = {rep.optimum} over {kind}, expected {expected}, "
                f"{len(rep.optimal_families)} maximizer(s), proven={rep.proof_of_optimality}"
            )
    detail = "W(3..6) = " + ", ".join(str(v) for v in SMALL_N_VALUES.values())
    return Check("small-n table W(3..6)", ok, detail, rows=rows)


def check_n7(seed: int = 0) -> Check:
    f7 = construct_Fn(7)
    target = DyadicRational(29, 7)
    rows = [
        f"F_7: {len(f7)} sets, weight {weight(f7)}, formula {weight_Fn(7)}",
        f"F_7 2-wise 3-intersecting: {is_r_wise_k_intersecting(f7, 2, 3)}, "
        f"3-wise 1-intersecting: {is_r_wise_k_intersecting(f7, 3, 1)}",
    ]
    ok = weight(f7) == target == weight_Fn(7) and _feasible(f7)
    for engine in (solve, solve_via_generators):
        rep = engine(SearchProblem(n=7, node_budget=default_node_budget()))
        if rep.proof_of_optimality:
            good = rep.optimum == target and rep.optimal_families == [f7]
        else:
            good = rep.optimum <= target
        rows.append(
            f"{engine.__name__}: optimum {rep.optimum}, maximizers {len(rep.optimal_families)}, "
            f"proven={rep.proof_of_optimality}"
        )
        ok &= good
    return Check("n=7 extremality of F_7", ok, "W(7) = 29/2^7 attained uniquely by F_7", rows=rows)


def check_crossover(seed: int = 0) -> Check:
    t0 = time.perf_counter()
    quarter = DyadicRational(1, 2)
    w = {n: weight_Fn(n) for n in range(7, 202, 2)}
    failures = []
    failures += [f"w(F_{n}) >= 1/4" for n in w if not w[n] < quarter]
    failures += [f"w(F_{n + 2}) <= w(F_{n})" for n in range(11, 200, 2) if not w[n + 2] > w[n]]
    if not w[7] > w[9] > w[11]:
        failures.append("w(F_7) > w(F_9) > w(F_11) fails")
    failures += [f"w(F_7) <= w(F_{n})" for n in range(9, 72, 2) if not w[7] > w[n]]
    if not w[73] > w[7]:
        failures.append("w(F_73) <= w(F_7)")
    failures += [f"|F_{n}| count disagrees with formula" for n in w if DyadicRational(fn_cardinality(n), n) != w[n]]
    elapsed = time.perf_counter() - t0
    ok = not failures and elapsed < 10
    rows = [
        f"w(F_71) = {w[71]}",
        f"w(F_7)  = {w[7]}",
        f"w(F_73) = {w[73]}",
        f"w(F_73) - w(F_7) = {w[73] - w[7]}",
        f"elapsed {elapsed:.3f}s",
    ]
    return Check("crossover and monotonicity of w(F_n)", ok, "; ".join(failures) or "all exact comparisons hold", rows=rows)


def check_theorem_table(seed: int = 0) -> Check:
    table = verify_theorem_table(201, search_max=8)
    rows = []
    for r in table.rows:
        if r.n in (7, 8, 71, 72, 73, 74, 201):
            extra = f", search {r.searched} ({r.maximizers} maximizer)" if r.searched is not None else ""
            rows.append(f"W({r.n}) = {r.source} = {r.predicted}{extra}")
    detail = f"monotone={table.monotone}, <=1/4={table.at_most_quarter}"
    return Check("W(n) table for 7 <= n <= 201", table.ok, detail, rows=rows)


def check_weight_identity(seed: int = 0, count: int = 1000) -> Check:
    rng = corpus.rng_for(seed, "weight-identity")
    for idx in range(count):
        n = rng.randint(1, 10)
        f = corpus.random_lc_upset(rng, n)
        g = generating_set(f)
        if weight_via_generators(g) != weight(f):
            return Check("generator weight identity", False, f"instance {idx} differs", witness=f)
    return Check("generator weight identity", True, f"{count} left-compressed up-sets, n <= 10")


def _compression_ok(f) -> tuple[bool, object]:
    holds = [(r, k) for r, k in W_CONSTRAINTS if is_r_wise_k_intersecting(f, r, k)]
    for i in range(1, f.n + 1):
        for j in range(i + 1, f.n + 1):
            c = compress_family(f, i, j)
            if len(c) != len(f):
                return False, (f, i, j, "cardinality")
            for r, k in holds:
                if not is_r_wise_k_intersecting(c, r, k):
                    return False, (f, i, j, (r, k))
    return True, None


def check_compression(seed: int = 0, count: int = 1000) -> Check:
    exhaustive = 0
    for n in range(1, 5):
        for f in corpus.all_families(n):
            exhaustive += 1
            ok, wit = _compression_ok(f)
            if not ok:
                return Check("compression suite", False, "exhaustive corpus", witness=wit)
    rng = corpus.rng_for(seed, "compression")
    for idx in range(count):
        n = rng.randint(1, 8)
        if idx % 2:
            f = corpus.random_family(rng, n)
        else:
            f = corpus.random_feasible_family(rng, n)
        ok, wit = _compression_ok(f)
        if not ok:
            return Check("compression suite", False, f"random instance {idx}", witness=wit)
    return Check("compression suite", True, f"{exhaustive} exhaustive (n <= 4) + {count} random (n <= 8) families")


def check_shortening_delta(seed: int = 0, count: int = 500) -> Check:
    rng = corpus.rng_for(seed, "shortening")
    lc_after = 0
    for g, a in corpus.shortening_instances(rng, count):
        delta = shorten_delta(g, a)
        if delta != DyadicRational(1, g.n):
            return Check("shortening delta", False, f"delta {delta} at n={g.n}", witness=(g, a))
        after = shorten(g, a)
        # the generator sum only equals the weight for left-compressed generating sets
        if is_lc_genset(after):
            lc_after += 1
            if weight_via_generators(after) - weight_via_generators(g) != delta:
                return Check("shortening delta", False, "generator sums disagree", witness=(g, a))
    return Check(
        "shortening delta", True, f"{count} instances, delta exactly 2^-n ({lc_after} also via generator sums)"
    )


def check_dichotomy(seed: int = 0, n_max: int = 7) -> Check:
    """Shortening breaks 3-intersection only inside a sharp pair, breaks
    3-wise intersection only inside a sharp triple, and every member of
    either is blocked."""
    families = generators = 0
    for n in range(1, n_max + 1):
        for f in enumerate_upsets(n, W_CONSTRAINTS):
            families += 1
            g = generating_set(f)
            in_pair = {m for p in find_sharp_pairs(g) for m in (p.a, p.b)}
            in_triple = {m for t in find_sharp_triples(g) for m in t.members}
            for a in split_generators(g).g0:
                generators += 1
                gens = shorten(g, a).generators
                breaks_k = not is_r_wise_k_intersecting(gens, 2, 3)
                breaks_r = not is_r_wise_k_intersecting(gens, 3, 1)
                if (
                    (breaks_k and a not in in_pair)
                    or (breaks_r and a not in in_triple)
                    or (breaks_k or breaks_r) != (a in in_pair | in_triple)
                ):
                    return Check("shortening dichotomy", False, f"n={n}", witness=(f, elements(a)))
    return Check(
        "shortening dichotomy",
        True,
        f"{families} families, {generators} generators containing n (n <= {n_max})",
    )


def lemma_corpus(seed: int, count: int):
    """Exhaustive feasible left-compressed up-sets for n <= 7, then random
    ones for 4 <= n <= 8 until ``count`` of them avoid (i, n-1)-sharp pairs."""
    for n in range(1, 8):
        yield from enumerate_upsets(n, W_CONSTRAINTS)
    rng = corpus.rng_for(seed, "lemmas")
    eligible = 0
    while eligible < count:
        f = random_upset(rng, rng.randint(4, 8), W_CONSTRAINTS)
        if not n_minus_one_pairs(generating_set(f)):
            eligible += 1
        yield f


def check_lemmas(seed: int = 0, count: int = 500) -> list[Check]:
    l1 = l2 = ties = 0
    for f in lemma_corpus(seed, count):
        g = generating_set(f)
        if n_minus_one_pairs(g):
            l2 += 1
            if not is_almost_trivial(f):
                raise CounterexampleError("sharp (i,n-1) pair in a family that is not almost-trivial", f)
            continue
        l1 += 1
        out = lemma1_transform(f)
        gout = generating_set(out)
        good = (
            weight(out) >= weight(f)
            and _feasible(out)
            and not split_generators(gout).g0
            and len(project_cylinder(out)) * 2 == len(out)
        )
        split = split_generators(g)
        if split.g0 and len(split.gplus) == len(split.gminus):
            ties += 1
            good &= is_left_compressed(out)
        if not good:
            return [Check("reduction to n-1", False, "postcondition failed", witness=f)]
    return [
        Check("reduction to n-1", True, f"{l1} eligible instances ({ties} ties, all left-compressed after)"),
        Check("(i,n-1)-sharp pair forces almost-trivial", True, f"{l2} instances with such a pair"),
    ]


def check_katona(seed: int = 0) -> Check:
    rows = []
    ok = True
    for n in range(1, 7):
        for k in range(1, n + 1):
            fam = katona_family(n, k)
            rep = solve(SearchProblem(n=n, r1=2, k1=k, r2=2, k2=k, restrict_lc=False, all_optima=False))
            good = rep.proof_of_optimality and weight(fam) == rep.optimum and is_r_wise_k_intersecting(fam, 2, k)
            ok &= good
            if not good:
                rows.append(f"n={n} k={k}: katona {len(fam)} vs search {rep.optimum}")
    for m in range(4, 8):
        rep = solve(SearchProblem(n=m, r1=2, k1=2, r2=2, k2=2, restrict_lc=False, all_optima=False))
        bound = katona_2intersect_bound(m)
        good = rep.proof_of_optimality and DyadicRational(bound, m) == rep.optimum
        ok &= good
        rows.append(f"m={m}: bound {bound}, search {rep.optimum.numerator << (m - rep.optimum.exponent)}")
    return Check("Katona cross-check", ok, "k-intersecting maxima n <= 6; 2-intersecting bound m <= 7", rows=rows)


def check_uniqueness_n8(seed: int = 0) -> Check:
    expected = extend(construct_Fn(7), 1)
    rows = []
    ok = True
    for engine in (solve, solve_via_generators):
        rep = engine(SearchProblem(n=8))
        good = rep.proof_of_optimality and rep.optimal_families == [expected] and rep.optimum == weight(expected)
        ok &= good
        rows.append(f"{engine.__name__}: {len(rep.optimal_families)} maximizer(s), optimum {rep.optimum}")
    return Check("uniqueness at n=8", ok, "only F_7 x {0,1}", rows=rows)


BUNDLES: dict[str, list[Callable]] = {
    "smalln": [check_small_n, check_n7, check_katona, check_uniqueness_n8],
    "crossover": [check_crossover, check_theorem_table],
    "lemmas": [
        check_weight_identity,
        check_compression,
        check_shortening_delta,
        check_dichotomy,
        check_lemmas,
    ],
}
BUNDLES["all"] = BUNDLES["smalln"] + BUNDLES["crossover"] + BUNDLES["lemmas"]


def run_bundle(scope: str, seed: int = 0) -> list[Check]:
    out = []
    for fn in BUNDLES[scope]:
        t0 = time.perf_counter()
        res = fn(seed=seed)
        for c in res if isinstance(res, list) else [res]:
            c.seconds = time.perf_counter() - t0
            out.append(c)
    return out
