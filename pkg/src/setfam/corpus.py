"""Seeded random instance generators.

All randomness goes through ``random.Random`` (Mersenne Twister) seeded from
a string ``"<seed>:<stream>"``, so every corpus is replayable from the seed.
"""
from __future__ import annotations

import random
from typing import Iterator

from setfam.search import random_upset
from setfam.setcore import (
    Family,
    GeneratingSet,
    generating_set,
    left_compress,
    up_closure,
)

W_CONSTRAINTS = ((3, 1), (2, 3))


def rng_for(seed: int, stream: str) -> random.Random:
    return random.Random(f"{seed}:{stream}")


def random_family(rng: random.Random, n: int, density: float | None = None) -> Family:
    p = rng.random() if density is None else density
    return Family(n, frozenset(m for m in range(1 << n) if rng.random() < p))


def random_feasible_family(rng: random.Random, n: int, constraints=W_CONSTRAINTS) -> Family:
    """A random subfamily of a random feasible up-set (still feasible, usually
    neither an up-set nor left-compressed)."""
    base = random_upset(rng, n, constraints, restrict_lc=False)
    keep = rng.uniform(0.3, 1.0)
    return Family(n, frozenset(m for m in base.members if rng.random() < keep))


def random_lc_upset(rng: random.Random, n: int) -> Family:
    """Left-compression of the up-set generated by a few random sets."""
    seeds = []
    for _ in range(rng.randint(1, 5)):
        size = rng.randint(1, n)
        seeds.append(sum(1 << e for e in rng.sample(range(n), size)))
    return left_compress(up_closure(Family(n, frozenset(seeds))))


def all_families(n: int) -> Iterator[Family]:
    """All 2^(2^n) families on [n]."""
    size = 1 << n
    for v in range(1 << size):
        yield Family(n, frozenset(m for m in range(size) if (v >> m) & 1))


def shortening_instances(rng: random.Random, count: int, n_range=(3, 8)) -> Iterator[tuple[GeneratingSet, int]]:
    """Pairs (left-compressed generating set, generator containing n)."""
    made = 0
    while made < count:
        n = rng.randint(*n_range)
        g = generating_set(random_lc_upset(rng, n))
        top = 1 << (n - 1)
        g0 = sorted(a for a in g.generators if a & top)
        if not g0:
            continue
        made += 1
        yield g, rng.choice(g0)
