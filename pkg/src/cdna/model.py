"""Core types for the composite channel: alphabets, symbols, sequences, observations.

A composite symbol is a probability distribution over a base alphabet
``{1, ..., q}``.  Reading a composite position many times yields an empirical
distribution on a grid with denominator ``n``; those grids are what decoders
operate on.  Everything here is immutable and safe to share across threads.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Iterator, Optional, Sequence, Union

Prob = Union[int, float, Fraction]

#: Constructors accept float distributions whose entries sum to 1 within this
#: tolerance (and renormalize); anything further off is rejected as a caller bug.
SUM_TOLERANCE = 1e-12


class UnsupportedRangeError(ValueError):
    """A request exceeds a documented feasibility cap (not a usage mistake)."""


def _is_exact(value: Prob) -> bool:
    return isinstance(value, Rational)


def multinomial_coefficient(counts: Sequence[int]) -> int:
    """Exact multinomial coefficient n! / (k_1! ... k_q!) for n = sum(counts)."""
    total = 0
    out = 1
    for k in counts:
        total += k
        out *= math.comb(total, k)
    return out


@dataclass(frozen=True)
class BaseAlphabet:
    """The base alphabet {1, ..., q}."""

    q: int

    def __post_init__(self) -> None:
        if not isinstance(self.q, int) or self.q < 1:
            raise ValueError(f"invalid alphabet size q={self.q!r}; need an integer >= 1")

    def symbols(self) -> range:
        return range(1, self.q + 1)

    def label(self, i: int) -> str:
        """Display name of symbol i (nucleotide letters when q == 4)."""
        if not 1 <= i <= self.q:
            raise IndexError(f"symbol index {i} outside 1..{self.q}")
        if self.q == 4:
            return "ACGT"[i - 1]
        return str(i)


@dataclass(frozen=True, order=True)
class CompositeSymbol:
    """A probability distribution over the base alphabet.

    Entries may be floats or exact rationals (``int`` / ``Fraction``).  Exact
    entries must sum to exactly 1; float entries are renormalized when the sum
    deviates from 1 by at most ``SUM_TOLERANCE`` and rejected otherwise.

    Ordering and equality are lexicographic on the probability vector, which is
    the canonical tie-break order used by the decoder.
    """

    probs: tuple

    def __init__(self, probs: Iterable[Prob]):
        probs = tuple(probs)
        if len(probs) < 1:
            raise ValueError("a composite symbol needs at least one entry")
        for p in probs:
            if not (_is_exact(p) or isinstance(p, float)):
                raise TypeError(f"probability entries must be numbers, got {p!r}")
            if isinstance(p, float) and not math.isfinite(p):
                raise ValueError(f"non-finite probability entry {p!r}")
            if p < 0:
                raise ValueError(f"negative probability entry {p!r}")
        total = sum(probs)
        if all(_is_exact(p) for p in probs):
            if total != 1:
                raise ValueError(f"exact probabilities must sum to 1, got {total!r}")
            probs = tuple(Fraction(p) for p in probs)
        else:
            total = float(total)
            if abs(total - 1.0) > SUM_TOLERANCE:
                raise ValueError(f"probabilities sum to {total!r}, outside tolerance {SUM_TOLERANCE}")
            if total != 1.0:
                probs = tuple(float(p) / total for p in probs)
            else:
                probs = tuple(float(p) for p in probs)
        object.__setattr__(self, "probs", probs)

    @property
    def q(self) -> int:
        return len(self.probs)

    @property
    def is_exact(self) -> bool:
        """True when every entry is an exact rational."""
        return all(_is_exact(p) for p in self.probs)

    @property
    def support(self) -> tuple[int, ...]:
        """Sorted 1-based indices with positive probability."""
        return tuple(i + 1 for i, p in enumerate(self.probs) if p > 0)

    def as_float(self) -> "CompositeSymbol":
        return CompositeSymbol(float(p) for p in self.probs)

    def __repr__(self) -> str:
        inner = ", ".join(str(p) for p in self.probs)
        return f"CompositeSymbol(({inner}))"


@dataclass(frozen=True)
class SubsetSymbol:
    """A composite symbol identified with a subset of the alphabet.

    The induced distribution is uniform over ``support``; the support size is
    the symbol's combinatorial factor (``omega``).
    """

    support: tuple[int, ...]
    q: int

    def __init__(self, support: Iterable[int], q: int):
        support = tuple(sorted(support))
        if not isinstance(q, int) or q < 1:
            raise ValueError(f"invalid alphabet size q={q!r}")
        if len(support) < 1:
            raise ValueError("support must be nonempty")
        if len(set(support)) != len(support):
            raise ValueError(f"support has repeated indices: {support}")
        if support[0] < 1 or support[-1] > q:
            raise ValueError(f"support {support} not inside 1..{q}")
        object.__setattr__(self, "support", support)
        object.__setattr__(self, "q", q)

    @property
    def omega(self) -> int:
        return len(self.support)

    def to_composite(self, exact: bool = False) -> CompositeSymbol:
        w = self.omega
        members = set(self.support)
        inside: Prob = Fraction(1, w) if exact else 1.0 / w
        outside: Prob = Fraction(0) if exact else 0.0
        return CompositeSymbol(inside if (i + 1) in members else outside for i in range(self.q))


@dataclass(frozen=True)
class SubsetSequence:
    """A sequence of subset symbols sharing one alphabet and one support size."""

    entries: tuple[SubsetSymbol, ...]

    def __init__(self, entries: Iterable[SubsetSymbol]):
        entries = tuple(entries)
        if not entries:
            raise ValueError("sequence must have at least one entry")
        q = entries[0].q
        omega = entries[0].omega
        for e in entries:
            if e.q != q:
                raise ValueError("all entries must share one alphabet")
            if e.omega != omega:
                raise ValueError("all entries must share one support size (mixed sizes unsupported)")
        object.__setattr__(self, "entries", entries)

    @property
    def ell(self) -> int:
        return len(self.entries)

    @property
    def omega(self) -> int:
        return self.entries[0].omega

    @property
    def q(self) -> int:
        return self.entries[0].q

    @classmethod
    def uniform(cls, ell: int, omega: int, q: Optional[int] = None) -> "SubsetSequence":
        """Canonical sequence: every index carries the support {1, ..., omega}.

        The alphabet size is irrelevant to coverage questions as long as
        q >= omega, so it defaults to omega itself.
        """
        if q is None:
            q = omega
        sym = SubsetSymbol(range(1, omega + 1), q)
        return cls((sym,) * ell)


@dataclass(frozen=True, order=True)
class ObservedDistribution:
    """Empirical distribution of n reads: per-symbol counts with denominator n.

    Ordering is lexicographic on the count vector, the canonical iteration and
    tie-break order.
    """

    counts: tuple[int, ...]
    n: int

    def __init__(self, counts: Iterable[int], n: Optional[int] = None):
        counts = tuple(counts)
        if not counts:
            raise ValueError("counts must be nonempty")
        for k in counts:
            if not isinstance(k, int) or k < 0:
                raise ValueError(f"counts must be nonnegative integers, got {k!r}")
        total = sum(counts)
        if n is None:
            n = total
        if total != n:
            raise ValueError(f"counts sum to {total}, expected n={n}")
        if n < 1:
            raise ValueError("n must be >= 1")
        object.__setattr__(self, "counts", counts)
        object.__setattr__(self, "n", n)

    @property
    def q(self) -> int:
        return len(self.counts)

    @property
    def distribution(self) -> tuple[float, ...]:
        return tuple(k / self.n for k in self.counts)

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(i + 1 for i, k in enumerate(self.counts) if k > 0)

    def as_symbol(self, exact: bool = True) -> CompositeSymbol:
        """The grid point counts/n as a composite symbol (exact by default)."""
        if exact:
            return CompositeSymbol(Fraction(k, self.n) for k in self.counts)
        return CompositeSymbol(k / self.n for k in self.counts)


@dataclass(frozen=True)
class TransmissionLog:
    """A record of single transmissions: one length-ell symbol vector per read.

    ``labels`` tags each read with the 1-based index of the sequence it came
    from in a multi-sequence (random access) setup.
    """

    reads: tuple[tuple[int, ...], ...]
    labels: Optional[tuple[int, ...]] = None

    def __post_init__(self) -> None:
        if not self.reads:
            raise ValueError("log must contain at least one read")
        ell = len(self.reads[0])
        for read in self.reads:
            if len(read) != ell:
                raise ValueError("all reads must have the same length")
            for s in read:
                if not isinstance(s, int) or s < 1:
                    raise ValueError(f"symbols are 1-based positive integers, got {s!r}")
        if self.labels is not None and len(self.labels) != len(self.reads):
            raise ValueError("labels must align with reads")

    @property
    def ell(self) -> int:
        return len(self.reads[0])

    def observed_sets(self, label: Optional[int] = None) -> tuple[frozenset, ...]:
        """Per-index set of symbols seen so far (restricted to one label if given)."""
        reads = self.reads
        if label is not None:
            if self.labels is None:
                raise ValueError("log carries no labels")
            reads = tuple(r for r, l in zip(self.reads, self.labels) if l == label)
        out = []
        for i in range(self.ell):
            out.append(frozenset(r[i] for r in reads))
        return tuple(out)

    def recovers(self, seq: SubsetSequence, label: Optional[int] = None) -> bool:
        """True when every index has shown its full support."""
        if seq.ell != self.ell:
            raise ValueError("sequence length does not match log")
        observed = self.observed_sets(label)
        return all(obs == frozenset(sym.support) for obs, sym in zip(observed, seq.entries))


def uniform_symbol(q: int, exact: bool = False) -> CompositeSymbol:
    """The uniform composite symbol (1/q, ..., 1/q)."""
    if not isinstance(q, int) or q < 1:
        raise ValueError(f"invalid alphabet size q={q!r}; need an integer >= 1")
    if exact:
        return CompositeSymbol(Fraction(1, q) for _ in range(q))
    return CompositeSymbol(1.0 / q for _ in range(q))


def base_symbol(q: int, i: int) -> CompositeSymbol:
    """The indicator symbol with all mass on base symbol i (1-based)."""
    if not isinstance(q, int) or q < 1:
        raise ValueError(f"invalid alphabet size q={q!r}; need an integer >= 1")
    if not 1 <= i <= q:
        raise IndexError(f"symbol index {i} outside 1..{q}")
    return CompositeSymbol(Fraction(1 if j == i else 0) for j in range(1, q + 1))


def observed_grid_size(n: int, q: int) -> int:
    """Number of empirical distributions with denominator n: C(n+q-1, q-1)."""
    if n < 1 or q < 1:
        raise ValueError("need n >= 1 and q >= 1")
    return math.comb(n + q - 1, q - 1)


def _compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    """All nonnegative integer vectors of the given length summing to total, lex order."""
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def enumerate_observed(n: int, q: int, max_size: Optional[int] = None) -> list[ObservedDistribution]:
    """All observed distributions of n reads over q symbols, in lexicographic count order.

    The result has exactly C(n+q-1, q-1) elements.  ``max_size`` (when given)
    rejects enumerations larger than the caller is prepared to handle.
    """
    size = observed_grid_size(n, q)
    if max_size is not None and size > max_size:
        raise UnsupportedRangeError(
            f"|grid(n={n}, q={q})| = {size} exceeds the cap {max_size}; lower n or q"
        )
    return [ObservedDistribution(counts, n) for counts in _compositions(n, q)]
