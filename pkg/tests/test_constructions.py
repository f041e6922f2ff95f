from fractions import Fraction

import pytest

import oracles
from setfam.constructions import (
    construct_Fn,
    extend,
    fn_cardinality,
    fn_contains,
    from_label,
    katona_2intersect_bound,
    katona_family,
)
from setfam.errors import DomainError, FormatError
from setfam.exactnum import DyadicRational, binomial, weight_Fn
from setfam.search import SearchProblem, solve
from setfam.setcore import (
    Family,
    format_family,
    is_left_compressed,
    is_r_wise_k_intersecting,
    is_up_set,
    mask_of,
    weight,
)


def test_fn_membership_examples():
    assert fn_contains(7, mask_of([1, 2, 3, 4, 5]))
    assert fn_contains(7, mask_of([2, 3, 4, 5, 6]))
    assert not fn_contains(7, mask_of([2, 3, 4, 5]))
    assert not fn_contains(7, mask_of([1, 2, 3, 4]))
    f7 = construct_Fn(7)
    assert mask_of([1, 2, 3, 4, 5]) in f7.members
    assert mask_of([2, 3, 4, 5]) not in f7.members


def test_fn7_size_and_weight():
    f7 = construct_Fn(7)
    # 22 sets through 1 (size >= 5), 7 without (size >= 5 inside [2,7])
    assert sum(binomial(6, s - 1) for s in range(5, 8)) == 22
    assert len(f7) == 29 == fn_cardinality(7)
    assert weight(f7) == DyadicRational(29, 7) == weight_Fn(7)


@pytest.mark.parametrize("n", [6, 8, 5, 3])
def test_fn_domain(n):
    with pytest.raises(DomainError):
        construct_Fn(n)
    with pytest.raises(DomainError):
        fn_cardinality(n)


@pytest.mark.parametrize("n", [7, 9, 11, 13])
def test_fn_matches_definition(n):
    want = {
        s
        for s in oracles.all_subsets(n)
        if (1 in s and len(s) >= (n + 3) // 2) or (1 not in s and len(s) >= n - 2)
    }
    assert oracles.to_sets(construct_Fn(n)) == want
    assert fn_cardinality(n) == len(want)


@pytest.mark.parametrize("n", [7, 9, 11, 13, 15])
def test_fn_predicates(n):
    f = construct_Fn(n)
    assert is_r_wise_k_intersecting(f, 2, 3)
    assert is_r_wise_k_intersecting(f, 3, 1)
    assert is_left_compressed(f)
    assert is_up_set(f)


def test_fn7_predicates_by_bruteforce():
    sets = oracles.to_sets(construct_Fn(7))
    assert oracles.r_wise(sets, 2, 3)
    assert oracles.r_wise(sets, 3, 1)
    assert not oracles.r_wise(sets, 2, 4)


def test_fn_cardinality_large_n():
    for n in (21, 51, 73, 201):
        assert DyadicRational(fn_cardinality(n), n) == weight_Fn(n)


def test_extend_examples():
    f = Family.of(3, [(1, 2, 3)])
    e = extend(f, 1)
    assert e == Family.of(4, [(1, 2, 3), (1, 2, 3, 4)])
    assert weight(f) == weight(e) == DyadicRational(1, 3)
    assert extend(extend(f, 1), 1) == extend(f, 2)
    with pytest.raises(DomainError):
        extend(f, 0)


def test_extend_preserves_predicates():
    f7 = construct_Fn(7)
    e = extend(f7, 2)
    assert weight(e) == weight(f7)
    assert is_r_wise_k_intersecting(e, 2, 3) and is_r_wise_k_intersecting(e, 3, 1)
    assert all((a & 0b1111111) in f7.members for a in e.members)


def test_katona_examples():
    assert katona_family(5, 3) == Family(5, frozenset(m for m in range(32) if bin(m).count("1") >= 4))
    assert weight(katona_family(5, 3)) == DyadicRational(3, 4)
    k6 = katona_family(6, 3)
    assert k6.members == frozenset(m for m in range(64) if bin(m & 0b11111).count("1") >= 4)
    assert weight(k6) == DyadicRational(12, 6) == DyadicRational(3, 4)
    assert katona_family(4, 3) == Family.of(4, [(1, 2, 3), (1, 2, 3, 4)])


@pytest.mark.parametrize("n", range(1, 11))
def test_katona_is_k_intersecting(n):
    for k in range(1, n + 1):
        assert is_r_wise_k_intersecting(katona_family(n, k), 2, k)


@pytest.mark.parametrize("n", range(1, 7))
def test_katona_is_maximum(n):
    for k in range(1, n + 1):
        assert len(katona_family(n, k)) == oracles.max_k_intersecting(n, k)


def test_katona_bound_examples():
    assert katona_2intersect_bound(6) == 22
    assert katona_2intersect_bound(8) == 93
    assert katona_2intersect_bound(7) == 44
    # equality case for m = 6: all sets of size >= 4 in a 6-set
    assert sum(binomial(6, s) for s in range(4, 7)) == 22
    with pytest.raises(DomainError):
        katona_2intersect_bound(3)


@pytest.mark.parametrize("m", [4, 5, 6, 7])
def test_katona_bound_matches_bruteforce(m):
    assert katona_2intersect_bound(m) == oracles.max_k_intersecting(m, 2)


def test_katona_bound_m8_by_search():
    # m + 2 even: all sets of size >= 5
    assert katona_2intersect_bound(8) == sum(binomial(8, s) for s in range(5, 9)) == 93
    assert len(katona_family(8, 2)) == 93
    rep = solve(SearchProblem(n=8, r1=2, k1=2, r2=2, k2=2, all_optima=False))
    assert rep.proof_of_optimality
    assert rep.optimum == DyadicRational(93, 8)


def test_from_label():
    assert from_label("Fn:7", verify=True).family == construct_Fn(7)
    assert len(from_label("katona:5:3", verify=True).family) == 6
    assert from_label("extend:Fn:7:1").family == extend(construct_Fn(7), 1)
    for bad in ("Fx:7", "katona:5", "Fn:x", "extend:Fn:7"):
        with pytest.raises(FormatError):
            from_label(bad)
    with pytest.raises(DomainError):
        from_label("Fn:8")


def test_from_label_extend_file(tmp_path):
    p = tmp_path / "f.txt"
    p.write_text(format_family(Family.of(3, [(1, 2, 3)])))
    assert from_label(f"extend:{p}:1").family == Family.of(4, [(1, 2, 3), (1, 2, 3, 4)])
    assert weight(from_label(f"extend:{p}:2").family).to_fraction() == Fraction(1, 8)
