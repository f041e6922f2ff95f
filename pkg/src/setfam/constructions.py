"""Named families: F_n, Katona families, cylinder extensions."""
from __future__ import annotations

import os
from dataclasses import dataclass
from itertools import combinations

from setfam.errors import DomainError, FormatError
from setfam.exactnum import binomial
from setfam.setcore import (
    MAX_MATERIALIZE_N,
    Family,
    is_r_wise_k_intersecting,
    mask_of,
    parse_family,
    popcount,
)


def _check_fn(n: int) -> None:
    if n < 7 or n % 2 == 0:
        raise DomainError(f"F_n is defined for odd n >= 7, got {n}")


def fn_contains(n: int, mask: int) -> bool:
    """Membership in F_n without materializing it (any odd n >= 7)."""
    _check_fn(n)
    size = popcount(mask)
    if mask & 1:
        return size >= (n + 3) // 2
    return size >= n - 2


def fn_cardinality(n: int) -> int:
    """|F_n| by counting sets with and without element 1."""
    _check_fn(n)
    with_one = sum(binomial(n - 1, s - 1) for s in range((n + 3) // 2, n + 1))
    without_one = sum(binomial(n - 1, s) for s in range(n - 2, n))
    return with_one + without_one


def _sets_of_size_at_least(pool: list[int], least: int) -> list[int]:
    out = []
    for s in range(max(least, 0), len(pool) + 1):
        for combo in combinations(pool, s):
            out.append(mask_of(combo))
    return out


def construct_Fn(n: int) -> Family:
    _check_fn(n)
    if n > MAX_MATERIALIZE_N:
        raise DomainError(f"F_{n} is too large to materialize; use fn_contains")
    rest = list(range(2, n + 1))
    members = [1 | m for m in _sets_of_size_at_least(rest, (n + 3) // 2 - 1)]
    members += _sets_of_size_at_least(rest, n - 2)
    return Family(n, frozenset(members))


def extend(f: Family, k: int) -> Family:
    """The cylinder F x {0,1}^k over [n + k]."""
    if k < 1:
        raise DomainError("extension needs k >= 1")
    n = f.n + k
    if n > MAX_MATERIALIZE_N:
        raise DomainError(f"extension to n={n} is too large to materialize")
    shift = f.n
    out = set()
    for a in f.members:
        for t in range(1 << k):
            out.add(a | (t << shift))
    return Family(n, frozenset(out))


def katona_family(n: int, k: int) -> Family:
    """Maximum k-intersecting family on [n] (element n dropped when n + k is odd)."""
    if k < 1 or n < k:
        raise DomainError(f"katona_family needs 1 <= k <= n, got n={n}, k={k}")
    if n > MAX_MATERIALIZE_N:
        raise DomainError(f"n={n} is too large to materialize")
    if (n + k) % 2 == 0:
        members = _sets_of_size_at_least(list(range(1, n + 1)), (n + k) // 2)
    else:
        core = _sets_of_size_at_least(list(range(1, n)), (n + k - 1) // 2)
        top = 1 << (n - 1)
        members = core + [m | top for m in core]
    return Family(n, frozenset(members))


def katona_2intersect_bound(m: int) -> int:
    """Largest 2-intersecting family on m points, in the parity form used for
    the almost-trivial bound with n = m + 1."""
    n = m + 1
    if n < 5:
        raise DomainError(f"bound is stated for n = m + 1 >= 5, got m={m}")
    if n % 2 == 1:
        l = (n - 1) // 2
        return (1 << (n - 2)) - binomial(n - 1, l) // 2
    l = (n - 2) // 2
    return (1 << (n - 2)) - binomial(n - 2, l)


@dataclass(frozen=True)
class NamedFamily:
    family: Family
    label: str
    properties: tuple[tuple[int, int], ...] = ()

    def check(self) -> None:
        for r, k in self.properties:
            if not is_r_wise_k_intersecting(self.family, r, k):
                raise AssertionError(f"{self.label} is not {r}-wise {k}-intersecting")


def _int(tok: str, label: str) -> int:
    try:
        return int(tok)
    except ValueError:
        raise FormatError(f"bad integer {tok!r} in label {label!r}") from None


def from_label(label: str, verify: bool = False) -> NamedFamily:
    """Build a family from ``Fn:<n>``, ``katona:<n>:<k>`` or
    ``extend:<path|label>:<k>``."""
    kind, _, rest = label.partition(":")
    if kind == "Fn":
        n = _int(rest, label)
        named = NamedFamily(construct_Fn(n), label, ((2, 3), (3, 1)))
    elif kind == "katona":
        parts = rest.split(":")
        if len(parts) != 2:
            raise FormatError(f"expected katona:<n>:<k>, got {label!r}")
        n, k = (_int(p, label) for p in parts)
        named = NamedFamily(katona_family(n, k), label, ((2, k),))
    elif kind == "extend":
        base, sep, k = rest.rpartition(":")
        if not sep or not base:
            raise FormatError(f"expected extend:<base>:<k>, got {label!r}")
        if os.path.isfile(base):
            with open(base) as fh:
                inner = NamedFamily(parse_family(fh.read()), base)
        else:
            inner = from_label(base)
        named = NamedFamily(extend(inner.family, _int(k, label)), label, inner.properties)
    else:
        raise FormatError(f"unknown construction {label!r}")
    if verify:
        named.check()
    return named
