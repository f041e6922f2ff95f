"""Acceptance gate: one test and one PASS/FAIL line per criterion.

Values marked exact are compared as dyadic rationals or Fractions; there is
no floating point anywhere in these checks.
"""
import random
import time
from fractions import Fraction
from math import comb

import oracles
from setfam import corpus
from setfam.constructions import (
    construct_Fn,
    extend,
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
)
from setfam.setcore import (
    Family,
    compress_family,
    generating_set,
    is_left_compressed,
    is_r_wise_k_intersecting,
    is_up_set,
    up_closure,
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
    split_generators,
)

SEED = 20240601
W_CONSTRAINTS = ((3, 1), (2, 3))


def feasible(f):
    return all(is_r_wise_k_intersecting(f, r, k) for r, k in W_CONSTRAINTS)


def feasible_oracle(sets):
    return oracles.r_wise(sets, 3, 1) and oracles.r_wise(sets, 2, 3)


def test_criterion_01_small_n_table(criterion):
    t0 = time.perf_counter()
    expected = {3: Fraction(1, 8), 4: Fraction(1, 8), 5: Fraction(3, 16), 6: Fraction(3, 16)}
    got, ok = {}, True
    for n, want in expected.items():
        for lc in (False, True):
            rep = solve(SearchProblem(n=n, mode=EXHAUSTIVE, restrict_lc=lc))
            got[n, lc] = rep.optimum
            ok &= rep.optimum.to_fraction() == want and rep.proof_of_optimality
            ok &= all(feasible_oracle(oracles.to_sets(f)) for f in rep.optimal_families)
        if n <= 4:
            ok &= oracles.max_weight_two_constraints(n, (3, 1), (2, 3))[0] == want
    elapsed = time.perf_counter() - t0
    ok &= elapsed < 300
    values = ", ".join(f"W({n})={got[n, True]}" for n in expected)
    assert criterion(1, ok, f"{values}, proven, {elapsed:.2f}s")


def test_criterion_02_n7_extremality(criterion):
    f7 = construct_Fn(7)
    sets = oracles.to_sets(f7)
    ok = feasible_oracle(sets) and Fraction(len(sets), 128) == Fraction(29, 128)
    ok &= weight(f7) == DyadicRational(29, 7) == weight_Fn(7)
    rep = solve(SearchProblem(n=7, restrict_lc=True, node_budget=default_node_budget()))
    if rep.proof_of_optimality:
        ok &= rep.optimum == DyadicRational(29, 7) and rep.optimal_families == [f7]
        how = "proven optimal, F_7 the unique left-compressed maximizer"
    else:
        ok &= rep.optimum <= weight(f7)
        how = "node budget hit; nothing found beats 29/2^7 and F_7 attains it"
    assert criterion(2, ok, f"w(F_7) = {weight(f7)}, {how}")


def test_criterion_03_crossover(criterion):
    t0 = time.perf_counter()
    w = {n: weight_Fn(n) for n in range(7, 202, 2)}
    quarter = DyadicRational(1, 2)
    ok = all(w[n] < quarter for n in w)
    ok &= all(w[n + 2] > w[n] for n in range(11, 200, 2))
    ok &= w[7] > w[9] > w[11]
    ok &= all(w[7] > w[n] for n in range(9, 72, 2))
    ok &= w[73] > w[7]
    # second route: count F_n with math.comb and compare as Fractions
    for n in w:
        count = sum(comb(n - 1, s - 1) for s in range((n + 3) // 2, n + 1)) + n
        ok &= w[n].to_fraction() == Fraction(count, 2**n)
    elapsed = time.perf_counter() - t0
    ok &= elapsed < 10
    assert criterion(3, ok, f"w(F_73) - w(F_7) = {w[73] - w[7]} > 0, all 98 odd n to 201, {elapsed:.3f}s")


def test_criterion_04_weight_identity(criterion):
    rng = corpus.rng_for(SEED, "acceptance-weight")
    failures = 0
    for _ in range(1000):
        f = corpus.random_lc_upset(rng, rng.randint(1, 10))
        assert is_up_set(f)
        if weight_via_generators(generating_set(f)) != weight(f):
            failures += 1
    assert criterion(4, failures == 0, f"1000 random left-compressed up-sets (n <= 10), {failures} failures")


def _compression_failures(f):
    holds = [(r, k) for r, k in W_CONSTRAINTS if is_r_wise_k_intersecting(f, r, k)]
    bad = 0
    for i in range(1, f.n + 1):
        for j in range(i + 1, f.n + 1):
            c = compress_family(f, i, j)
            bad += len(c) != len(f)
            bad += sum(not is_r_wise_k_intersecting(c, r, k) for r, k in holds)
    return bad


def test_criterion_05_compression(criterion):
    failures = exhaustive = 0
    for n in range(1, 5):
        for f in corpus.all_families(n):
            exhaustive += 1
            failures += _compression_failures(f)
    rng = corpus.rng_for(SEED, "acceptance-compression")
    for idx in range(1000):
        n = rng.randint(1, 8)
        f = corpus.random_family(rng, n) if idx % 2 else corpus.random_feasible_family(rng, n)
        failures += _compression_failures(f)
    assert criterion(5, failures == 0, f"{exhaustive} exhaustive + 1000 random families, {failures} failures")


def test_criterion_06_shortening_delta(criterion):
    rng = corpus.rng_for(SEED, "acceptance-shortening")
    failures = 0
    for g, a in corpus.shortening_instances(rng, 500):
        before, after = up_closure(g), up_closure(shorten(g, a))
        delta = Fraction(len(after) - len(before), 2**g.n)
        failures += delta != Fraction(1, 2**g.n) or weight(after) - weight(before) != DyadicRational(1, g.n)
    assert criterion(6, failures == 0, f"500 instances, delta exactly 2^-n, {failures} failures")


def test_criterion_07_dichotomy(criterion):
    failures = families = gens = 0
    for n in range(1, 6):
        lc = set(enumerate_upsets(n, W_CONSTRAINTS))
        # the corpus is complete: filter every feasible up-set by compression
        failures += lc != {f for f in enumerate_upsets(n, W_CONSTRAINTS, restrict_lc=False) if is_left_compressed(f)}
        for f in lc:
            families += 1
            g = generating_set(f)
            sharp = {m for p in find_sharp_pairs(g) for m in (p.a, p.b)}
            sharp |= {m for t in find_sharp_triples(g) for m in t.members}
            for a in split_generators(g).g0:
                gens += 1
                breaks = not feasible_oracle(oracles.to_sets(up_closure(shorten(g, a))))
                failures += breaks != (a in sharp)
    assert criterion(7, failures == 0, f"{families} families, {gens} generators containing n, {failures} failures")


def _lemma_corpus():
    # exhaustive n <= 7 (required: n <= 6), then random n <= 8
    for n in range(1, 8):
        yield from enumerate_upsets(n, W_CONSTRAINTS)
    rng = corpus.rng_for(SEED, "acceptance-lemmas")
    eligible = 0
    while eligible < 500:
        f = random_upset(rng, rng.randint(4, 8), W_CONSTRAINTS)
        eligible += not n_minus_one_pairs(generating_set(f))
        yield f


LEMMA_CORPUS = list(_lemma_corpus())


def test_criterion_08_lemma1(criterion):
    failures = eligible = 0
    for f in LEMMA_CORPUS:
        if n_minus_one_pairs(generating_set(f)):
            continue
        eligible += 1
        out = lemma1_transform(f)
        good = weight(out) >= weight(f) and feasible(out)
        good &= not split_generators(generating_set(out)).g0
        good &= extend(project_cylinder(out), 1) == out
        failures += not good
    assert criterion(8, failures == 0, f"{eligible} eligible instances, {failures} failures")


def test_criterion_09_lemma2(criterion):
    with_pair = 0
    for f in LEMMA_CORPUS:
        if n_minus_one_pairs(generating_set(f)):
            with_pair += 1
            if not is_almost_trivial(f):
                criterion(9, False, f"counterexample {f.as_sets()}")
                raise CounterexampleError("(i,n-1)-sharp pair without almost-triviality", f)
    assert criterion(9, True, f"{with_pair} instances with an (i,n-1)-sharp pair, all almost-trivial")


def test_criterion_10_katona(criterion):
    ok = True
    for n in range(1, 7):
        for k in range(1, n + 1):
            ok &= len(katona_family(n, k)) == oracles.max_k_intersecting(n, k)
    bounds = {m: katona_2intersect_bound(m) for m in range(4, 8)}
    ok &= all(bounds[m] == oracles.max_k_intersecting(m, 2) for m in bounds)
    assert criterion(10, ok, f"Katona sizes n <= 6 exact; 2-intersecting bounds {bounds}")


def test_criterion_11_uniqueness_n8(criterion):
    expected = extend(construct_Fn(7), 1)
    rep = solve(SearchProblem(n=8, restrict_lc=True))
    ok = rep.proof_of_optimality and rep.optimal_families == [expected]
    ok &= solve_via_generators(SearchProblem(n=8)).optimal_families == [expected]
    assert criterion(11, ok, f"{len(rep.optimal_families)} maximizer at n=8, equal to F_7 x {{0,1}}, weight {rep.optimum}")
