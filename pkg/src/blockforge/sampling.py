"""Seeded random elements; all probe randomness goes through here."""

from __future__ import annotations

import random
from fractions import Fraction

from blockforge.algebra import BasisKey, Element, SuperElement, Window

RNG_ALGORITHM = "python-random-mt19937-v1"
COEFFS = (Fraction(1), Fraction(-1), Fraction(2), Fraction(-2), Fraction(1, 2), Fraction(-1, 2))


def make_rng(seed: int) -> random.Random:
    return random.Random(seed)


def random_key(rng: random.Random, cfg, window: Window) -> BasisKey:
    alpha = tuple(rng.randint(-window.A, window.A) for _ in range(cfg.rank))
    idx = [0] * cfg.n
    budget = rng.randint(0, window.K) if window.K else 0
    full = [p for p in range(cfg.n) if cfg.full(p + 1)]
    for _ in range(budget):
        if not full:
            break
        idx[rng.choice(full)] += 1
    return BasisKey(alpha, tuple(idx))


def random_element(rng: random.Random, cfg, window: Window, max_support: int = 4) -> Element:
    """Nonzero element with support <= max_support and coefficients in {+-1, +-2, +-1/2}."""
    while True:
        size = rng.randint(1, max_support)
        terms = {}
        for _ in range(size):
            terms[random_key(rng, cfg, window)] = rng.choice(COEFFS)
        e = Element(terms)
        if e:
            return e


def random_super(rng: random.Random, cfg, window: Window, parity: int | None = None) -> SuperElement:
    if parity is None:
        parity = rng.randint(0, 1)
    e = random_element(rng, cfg, window)
    return SuperElement.of_even(e) if parity == 0 else SuperElement.of_odd(e)


def random_seed_from_pool(rng: random.Random, pool: list, max_support: int = 4) -> dict:
    """Random combination of columns drawn from ``pool``."""
    size = rng.randint(1, min(max_support, len(pool)))
    cols = rng.sample(pool, size)
    return {c: rng.choice(COEFFS) for c in cols}
