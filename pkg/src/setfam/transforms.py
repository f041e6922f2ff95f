"""Generator-level moves on left-compressed up-sets: splitting off the
generators that contain n, shortening, sharp pairs and triples, and the
reduction of a family on [n] to one on [n-1]."""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, combinations_with_replacement

from setfam.errors import DomainError, SharpPairError
from setfam.exactnum import DyadicRational, weight_Fn
from setfam.setcore import (
    Family,
    GeneratingSet,
    elements,
    full_mask,
    generating_set,
    is_left_compressed,
    is_r_wise_k_intersecting,
    is_up_set,
    minimal_members,
    popcount,
    set_key,
    up_closure,
    weight,
)


@dataclass(frozen=True)
class GenSplit:
    g0: frozenset[int]
    g1: frozenset[int]
    gplus: frozenset[int]
    gminus: frozenset[int]


@dataclass(frozen=True)
class SharpPair:
    a: int
    b: int
    i: int
    j: int

    def to_json(self) -> dict:
        return {"kind": "pair", "members": [elements(self.a), elements(self.b)], "i": self.i, "j": self.j}


@dataclass(frozen=True)
class SharpTriple:
    a: int
    b: int
    c: int

    @property
    def members(self) -> tuple[int, int, int]:
        return (self.a, self.b, self.c)

    def to_json(self) -> dict:
        return {"kind": "triple", "members": [elements(m) for m in self.members], "i": None, "j": None}


def _top(n: int) -> int:
    return 1 << (n - 1)


def split_generators(g: GeneratingSet) -> GenSplit:
    n = g.n
    top = _top(n) if n >= 1 else 0
    below = _top(n - 1) if n >= 2 else 0
    g0 = frozenset(a for a in g.generators if a & top)
    g1 = g.generators - g0
    gplus = frozenset(a for a in g0 if a & below)
    return GenSplit(g0, g1, gplus, g0 - gplus)


def shorten(g: GeneratingSet, a: int) -> GeneratingSet:
    """Replace generator ``a`` (which contains n) by ``a - {n}`` and drop the
    generators that become redundant."""
    if a not in g.generators:
        raise DomainError(f"{elements(a)} is not a generator")
    top = _top(g.n)
    if not a & top:
        raise DomainError(f"{elements(a)} does not contain n={g.n}")
    short = a ^ top
    kept = {b for b in g.generators if b != a and b & short != short}
    kept.add(short)
    return GeneratingSet(g.n, frozenset(kept))


def _sorted_masks(*ms: int) -> list[int]:
    return sorted(ms, key=set_key)


def find_sharp_pairs(g: GeneratingSet) -> list[SharpPair]:
    """Pairs (A, B) from G0 with A | B == [n] and |A & B| == 3.

    A pair may repeat a generator: ([3], [3]) at n = 3 is the one case where
    that happens, and it is exactly as obstructive as a genuine pair.
    """
    n = g.n
    full = full_mask(n)
    g0 = _sorted_masks(*split_generators(g).g0)
    out = []
    for a, b in combinations_with_replacement(g0, 2):
        common = a & b
        if a | b == full and popcount(common) == 3:
            i, j, _ = elements(common)
            out.append(SharpPair(a, b, i, j))
    return out


def find_sharp_triples(g: GeneratingSet) -> list[SharpTriple]:
    n = g.n
    top = _top(n)
    rest = full_mask(n) ^ top
    g0 = _sorted_masks(*split_generators(g).g0)
    out = []
    for a, b, c in combinations(g0, 3):
        if a & b & c != top:
            continue
        # every element of [n-1] in exactly two of the three
        if (a & b) | (a & c) | (b & c) == full_mask(n) and (a ^ b ^ c) & rest == 0:
            out.append(SharpTriple(a, b, c))
    return out


def _direct_shorten_ok(g: GeneratingSet, a: int, k1: int, k2: int) -> bool:
    gens = shorten(g, a).generators
    return is_r_wise_k_intersecting(gens, 3, k1) and is_r_wise_k_intersecting(gens, 2, k2)


def can_shorten(g: GeneratingSet, a: int, k1: int = 1, k2: int = 3) -> bool:
    """Whether shortening ``a`` keeps the family 3-wise k1- and k2-intersecting.

    For (k1, k2) == (1, 3) on a left-compressed generating set this is decided
    by sharp pair/triple membership; other parameters use the direct check.
    """
    if (k1, k2) != (1, 3):
        return _direct_shorten_ok(g, a, k1, k2)
    if a not in split_generators(g).g0:
        raise DomainError(f"{elements(a)} is not a generator containing n")
    for p in find_sharp_pairs(g):
        if a in (p.a, p.b):
            return False
    for t in find_sharp_triples(g):
        if a in t.members:
            return False
    return True


def n_minus_one_pairs(g: GeneratingSet) -> list[SharpPair]:
    """Sharp pairs whose intersection is {i, n-1, n}."""
    return [p for p in find_sharp_pairs(g) if p.j == g.n - 1]


def _check_eligible(f: Family) -> GeneratingSet:
    if not is_up_set(f):
        raise DomainError("family is not an up-set")
    if not is_left_compressed(f):
        raise DomainError("family is not left-compressed")
    if not (is_r_wise_k_intersecting(f, 3, 1) and is_r_wise_k_intersecting(f, 2, 3)):
        raise DomainError("family is not 3-wise intersecting and 3-intersecting")
    return generating_set(f)


def lemma1_transform(f: Family, witness: list | None = None) -> Family:
    """Remove n from every generator: shorten the larger of G+ / G- (G- on a
    tie) and delete the other. Requires that no (i, n-1)-sharp pair exists.

    Each step is appended to ``witness`` when given.
    """
    g = _check_eligible(f)
    blocking = n_minus_one_pairs(g)
    if blocking:
        p = blocking[0]
        raise SharpPairError(
            f"({p.i},{p.j})-sharp pair {elements(p.a)}, {elements(p.b)} blocks the reduction", p
        )
    split = split_generators(g)
    if not split.g0:
        return f
    if len(split.gplus) > len(split.gminus):
        shortened, removed = split.gplus, split.gminus
    else:
        shortened, removed = split.gminus, split.gplus
    top = _top(f.n)
    new_gens = set(split.g1) | {a ^ top for a in shortened}
    kept = minimal_members(new_gens)
    if witness is not None:
        for a in _sorted_masks(*shortened):
            short = a ^ top
            dropped = [elements(b) for b in _sorted_masks(*(new_gens - kept)) if b & short == short]
            witness.append({"op": "shorten", "set": elements(a), "result": elements(short), "dropped": dropped})
        for a in _sorted_masks(*removed):
            witness.append({"op": "remove", "set": elements(a)})
    return up_closure(GeneratingSet(f.n, frozenset(kept)))


def project_cylinder(f: Family) -> Family:
    """The family F'' on [n-1] with f == F'' x {0,1}; raises if there is none."""
    top = _top(f.n)
    base = frozenset(a for a in f.members if not a & top)
    if any((a | top) not in f.members for a in base) or len(base) * 2 != len(f):
        raise DomainError("family is not a cylinder over [n-1]")
    return Family(f.n - 1, base)


def is_trivial(f: Family) -> bool:
    return all(a & 1 for a in f.members)


def is_almost_trivial(f: Family) -> bool:
    return all(a & 1 for a in f.members if popcount(a) <= f.n - 3)


def almost_trivial_bound(n: int) -> tuple[DyadicRational, bool]:
    """Upper bound on w(F) for almost-trivial F on [n]; the flag is True when
    the bound is strict."""
    if n < 7:
        raise DomainError("the almost-trivial bound is stated for n >= 7")
    if n % 2:
        return weight_Fn(n), False
    return weight_Fn(n - 1) - DyadicRational(n - 2, n), True


def shorten_delta(g: GeneratingSet, a: int) -> DyadicRational:
    """Weight gained by shortening ``a``, counted on the materialized up-sets."""
    return weight(up_closure(shorten(g, a))) - weight(up_closure(g))
