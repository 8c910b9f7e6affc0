"""Shared independent oracles and generators for the test suite.

The oracles here deliberately avoid the library's own derivations: coverage
expectations come from a covered-count Markov chain, covering-family counts
from brute-force subset enumeration, and random codes are built as exact
rational grid points so comparisons need no tolerances.
"""
from __future__ import annotations

import math
from fractions import Fraction
from itertools import combinations

import numpy as np
import pytest

from cdna import CompositeCode, CompositeSymbol


def dp_expected_coverage(ell: int, omega: int, tol: float = 1e-13) -> float:
    """Coverage expectation from the covered-count Markov chain.

    Tracks the distribution of how many distinct symbols one index has shown
    after m reads (transition c -> c+1 with probability 1 - c/omega), raises it
    to the ell-th power for the maximum over indices, and tail-sums.  No
    inclusion-exclusion anywhere.
    """
    probs = [1.0] + [0.0] * omega
    total = 0.0
    m = 0
    while True:
        tail = 1.0 - probs[omega] ** ell
        total += tail
        if tail < tol and m > omega:
            return total
        nxt = [0.0] * (omega + 1)
        for c, p in enumerate(probs):
            if p:
                nxt[c] += p * (c / omega)
                if c < omega:
                    nxt[c + 1] += p * (1.0 - c / omega)
        probs = nxt
        m += 1


def brute_covering_count(m: int, r: int, j: int) -> int:
    """Count j-element sets of r-subsets of {0..m-1} covering everything, by enumeration."""
    subsets = list(combinations(range(m), r))
    count = 0
    for family in combinations(subsets, j):
        union = set()
        for s in family:
            union.update(s)
        if len(union) == m:
            count += 1
    return count


def brute_miss_probability(w: int, m: int) -> Fraction:
    """Probability that m uniform draws from w symbols miss one, by full enumeration."""
    missed = 0
    for word in range(w**m):
        seen = set()
        x = word
        for _ in range(m):
            seen.add(x % w)
            x //= w
        if len(seen) < w:
            missed += 1
    return Fraction(missed, w**m)


def random_exact_symbol(rng: np.random.Generator, q: int, denom: int) -> CompositeSymbol:
    """A uniformly random grid distribution with the given denominator, as exact rationals."""
    cuts = sorted(rng.integers(0, denom + 1, size=q - 1).tolist()) if q > 1 else []
    counts = []
    prev = 0
    for c in cuts:
        counts.append(c - prev)
        prev = c
    counts.append(denom - prev)
    return CompositeSymbol(Fraction(k, denom) for k in counts)


def random_exact_code(rng: np.random.Generator, m: int, q: int, denom: int = 12) -> CompositeCode:
    """A random code of m distinct exact grid symbols."""
    symbols = set()
    while len(symbols) < m:
        symbols.add(random_exact_symbol(rng, q, denom))
    return CompositeCode(symbols)


def random_float_binary_code(rng: np.random.Generator, m: int) -> CompositeCode:
    """A random binary code with generic float values (no exact likelihood ties)."""
    values = set()
    while len(values) < m:
        values.add(float(rng.uniform(0.02, 0.98)))
    return CompositeCode.binary(sorted(values))


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240817)
