"""Subsets of [n] as bitmasks, families, compression and up-set calculus.

Element ``i`` of the ground set ``[n] = {1, ..., n}`` is stored at bit ``i - 1``.
Masks are plain ``int`` values; the ground size travels with the family.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Iterator

from setfam.errors import DomainError, FormatError
from setfam.exactnum import DyadicRational

MAX_N = 63
MAX_MATERIALIZE_N = 24


def popcount(mask: int) -> int:
    return mask.bit_count()


def mask_of(elements: Iterable[int]) -> int:
    m = 0
    for e in elements:
        if e < 1:
            raise DomainError(f"element {e} is not a positive integer")
        m |= 1 << (e - 1)
    return m


def elements(mask: int) -> list[int]:
    """Elements of ``mask`` in ascending order."""
    out = []
    i = 1
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


def full_mask(n: int) -> int:
    return (1 << n) - 1


def max_element(mask: int) -> int:
    """Largest element of the set, 0 for the empty set."""
    return mask.bit_length()


def _check_n(n: int) -> None:
    if not 0 <= n <= MAX_N:
        raise DomainError(f"ground size must be in [0, {MAX_N}], got {n}")


def set_key(mask: int) -> tuple[int, tuple[int, ...]]:
    """Canonical sort key: by size, then lexicographically by elements."""
    return (popcount(mask), tuple(elements(mask)))


@dataclass(frozen=True)
class Family:
    """An immutable family of subsets of [n]."""

    n: int
    members: frozenset[int]

    def __post_init__(self) -> None:
        _check_n(self.n)
        limit = 1 << self.n
        for m in self.members:
            if m < 0 or m >= limit:
                raise DomainError(f"mask {m:#x} not a subset of [{self.n}]")

    @classmethod
    def of(cls, n: int, sets: Iterable[Iterable[int]]) -> "Family":
        return cls(n, frozenset(mask_of(s) for s in sets))

    @classmethod
    def from_masks(cls, n: int, masks: Iterable[int]) -> "Family":
        return cls(n, frozenset(masks))

    @classmethod
    def power_set(cls, n: int) -> "Family":
        _materializable(n)
        return cls(n, frozenset(range(1 << n)))

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self) -> Iterator[int]:
        return iter(self.sorted())

    def __contains__(self, mask: int) -> bool:
        return mask in self.members

    def sorted(self) -> list[int]:
        return sorted(self.members, key=set_key)

    @property
    def bits(self) -> int:
        """Characteristic vector: bit ``m`` is set iff mask ``m`` is a member."""
        _materializable(self.n)
        v = 0
        for m in self.members:
            v |= 1 << m
        return v

    def as_sets(self) -> list[list[int]]:
        return [elements(m) for m in self.sorted()]

    def __repr__(self) -> str:
        body = ", ".join("{" + ",".join(map(str, s)) + "}" for s in self.as_sets())
        return f"Family(n={self.n}, [{body}])"


@dataclass(frozen=True)
class GeneratingSet:
    """Antichain of minimal elements generating an up-set."""

    n: int
    generators: frozenset[int]

    def __post_init__(self) -> None:
        _check_n(self.n)
        gens = sorted(self.generators, key=popcount)
        for idx, a in enumerate(gens):
            if a >> self.n:
                raise DomainError(f"mask {a:#x} not a subset of [{self.n}]")
            for b in gens[idx + 1:]:
                if a & b == a:
                    raise DomainError(
                        f"not an antichain: {elements(a)} is contained in {elements(b)}"
                    )

    @classmethod
    def of(cls, n: int, sets: Iterable[Iterable[int]]) -> "GeneratingSet":
        return cls(n, frozenset(mask_of(s) for s in sets))

    def __len__(self) -> int:
        return len(self.generators)

    def __iter__(self) -> Iterator[int]:
        return iter(sorted(self.generators, key=set_key))

    def __contains__(self, mask: int) -> bool:
        return mask in self.generators

    def as_sets(self) -> list[list[int]]:
        return [elements(m) for m in self]


def _materializable(n: int) -> None:
    if n > MAX_MATERIALIZE_N:
        raise DomainError(
            f"n={n} exceeds {MAX_MATERIALIZE_N}; whole-cube families are not materialized"
        )


# --- domination order and compression -------------------------------------


def prec(a: int, b: int) -> bool:
    """True iff ``a`` precedes ``b``: same size, distinct, and the i-th
    smallest element of ``a`` never exceeds the i-th smallest of ``b``."""
    if popcount(a) != popcount(b):
        raise DomainError("prec is only defined for sets of equal size")
    if a == b:
        return False
    return all(x <= y for x, y in zip(elements(a), elements(b)))


def _check_pair(i: int, j: int) -> None:
    if not 1 <= i < j:
        raise DomainError(f"compression needs 1 <= i < j, got i={i}, j={j}")


def compress_set(a: int, i: int, j: int) -> int:
    _check_pair(i, j)
    bi, bj = 1 << (i - 1), 1 << (j - 1)
    if a & bj and not a & bi:
        return (a ^ bj) | bi
    return a


def compress_family(f: Family, i: int, j: int) -> Family:
    _check_pair(i, j)
    if j > f.n:
        return f
    bi, bj = 1 << (i - 1), 1 << (j - 1)
    members = f.members
    out = set()
    for a in members:
        if a & bj and not a & bi:
            img = (a ^ bj) | bi
            out.add(a if img in members else img)
        else:
            out.add(a)
    return Family(f.n, frozenset(out))


def left_compress(f: Family) -> Family:
    """Apply C_ij over all pairs i < j (lexicographic sweeps) until fixpoint."""
    pairs = list(combinations(range(1, f.n + 1), 2))
    while True:
        start = f
        for i, j in pairs:
            f = compress_family(f, i, j)
        if f == start:
            return f


def is_left_compressed(f: Family) -> bool:
    return all(
        compress_family(f, i, j) == f for i, j in combinations(range(1, f.n + 1), 2)
    )


# --- up-sets and generating sets -------------------------------------------


def supersets(mask: int, n: int) -> Iterator[int]:
    """All supersets of ``mask`` inside [n]."""
    free = full_mask(n) & ~mask
    sub = free
    while True:
        yield mask | sub
        if sub == 0:
            return
        sub = (sub - 1) & free


def up_closure(g: Family | GeneratingSet) -> Family:
    n = g.n
    gens = g.generators if isinstance(g, GeneratingSet) else g.members
    _materializable(n)
    out: set[int] = set()
    for b in minimal_members(gens):
        out.update(supersets(b, n))
    return Family(n, frozenset(out))


def minimal_members(masks: Iterable[int]) -> set[int]:
    """Inclusion-minimal elements of a collection of masks."""
    ordered = sorted(set(masks), key=popcount)
    kept: list[int] = []
    for a in ordered:
        if not any(b & a == b for b in kept):
            kept.append(a)
    return set(kept)


def is_up_set(f: Family) -> bool:
    members = f.members
    for a in members:
        for e in range(f.n):
            if not (a >> e) & 1 and (a | (1 << e)) not in members:
                return False
    return True


def generating_set(f: Family) -> GeneratingSet:
    if not is_up_set(f):
        raise DomainError("generating_set requires an up-set")
    members = f.members
    gens = frozenset(
        a
        for a in members
        if not any((a >> e) & 1 and (a ^ (1 << e)) in members for e in range(f.n))
    )
    return GeneratingSet(f.n, gens)


def is_lc_genset(g: GeneratingSet) -> bool:
    """Left-compressed generating set test, by enumerating every A preceding
    each generator."""
    gens = list(g.generators)
    for b in gens:
        size = popcount(b)
        bel = elements(b)
        for combo in combinations(range(1, g.n + 1), size):
            if combo == tuple(bel) or not all(x <= y for x, y in zip(combo, bel)):
                continue
            a = mask_of(combo)
            if not any(c & a == c for c in gens):
                return False
    return True


def d_block(e: int, n: int) -> Family:
    """All A in [n] with A ∩ [max(e)] == e."""
    if e == 0:
        raise DomainError("d_block needs a nonempty set")
    top = max_element(e)
    if top > n:
        raise DomainError(f"{elements(e)} is not a subset of [{n}]")
    _materializable(n)
    tail = range(1 << (n - top))
    return Family(n, frozenset(e | (t << top) for t in tail))


# --- intersection predicates and weights -----------------------------------


def is_r_wise_k_intersecting(f: Family | Iterable[int], r: int, k: int) -> bool:
    """Every r members (repetition allowed) meet in at least k elements.

    Equivalent to: every nonempty subfamily of at most r members has an
    intersection of size >= k.
    """
    if r < 1:
        raise DomainError("r must be positive")
    members = list(f.members if isinstance(f, Family) else f)
    if k <= 0 or not members:
        return True
    for a in members:
        if popcount(a) < k:
            return False
    level = set(members)
    for _ in range(r - 1):
        nxt = set()
        for m in level:
            for a in members:
                x = m & a
                if x in nxt:
                    continue
                if popcount(x) < k:
                    return False
                nxt.add(x)
        if nxt == level:
            break
        level = nxt
    return True


def weight(f: Family) -> DyadicRational:
    return DyadicRational(len(f.members), f.n)


def weight_via_generators(g: GeneratingSet) -> DyadicRational:
    """Sum of 2^-max(E) over generators; equals the up-set weight when the
    generating set is left-compressed. The empty generator contributes 1."""
    total = DyadicRational(0, 0)
    for e in g.generators:
        total = total + DyadicRational(1, max_element(e))
    return total


# --- text format -----------------------------------------------------------


def format_family(f: Family) -> str:
    lines = [f"n={f.n}"]
    for m in f.sorted():
        lines.append(",".join(map(str, elements(m))) if m else "-")
    return "\n".join(lines) + "\n"


def parse_family(text: str) -> Family:
    lines = text.splitlines()
    if not lines or not lines[0].startswith("n="):
        raise FormatError("first line must be 'n=<int>'")
    try:
        n = int(lines[0][2:])
    except ValueError:
        raise FormatError(f"bad header {lines[0]!r}") from None
    if not 0 <= n <= MAX_N:
        raise FormatError(f"ground size {n} out of range")
    seen: set[int] = set()
    for lineno, raw in enumerate(lines[1:], start=2):
        line = raw.strip()
        if not line:
            continue
        if line == "-":
            m = 0
        else:
            try:
                elems = [int(tok) for tok in line.split(",")]
            except ValueError:
                raise FormatError(f"line {lineno}: not a comma-separated list") from None
            if any(b <= a for a, b in zip(elems, elems[1:])):
                raise FormatError(f"line {lineno}: elements must be strictly ascending")
            if elems[0] < 1 or elems[-1] > n:
                raise FormatError(f"line {lineno}: element outside [1, {n}]")
            m = mask_of(elems)
        if m in seen:
            raise FormatError(f"line {lineno}: duplicate set")
        seen.add(m)
    return Family(n, frozenset(seen))
