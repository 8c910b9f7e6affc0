"""Seeded Monte Carlo simulation of the transmission process.

This module is the empirical oracle for the closed-form coverage results: it
simulates actual uniform draws from each index's support, tracks observed sets,
and reports when recovery happens.  Nothing here reuses the analytic formulas.

Determinism contract: trial ``t`` of a run with master seed ``s`` consumes a
private stream from a counter-based generator (Philox) keyed by ``(s, t)``.
Results therefore do not depend on execution order, and a parallel driver that
writes each trial's count into slot ``t`` reproduces the serial run bit for bit.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .coverage import CoverageParams
from .model import SubsetSequence, TransmissionLog

DEFAULT_MAX_TRANSMISSIONS = 10**6

_MASK64 = (1 << 64) - 1
_FIRST_BLOCK = 32
_MAX_BLOCK = 8192
_UONE = np.uint64(1)
#: normal 97.5% quantile, for two-sided 95% confidence intervals
_Z95 = 1.959963984540054

#: simulations below this many trials report no confidence interval; the
#: normal approximation is not trustworthy there.
MIN_TRIALS_FOR_CI = 30


class TrialTruncatedError(RuntimeError):
    """A trial hit its transmission cap before the stopping condition."""


def trial_rng(seed: int, trial: int) -> np.random.Generator:
    """Deterministic generator for one trial: Philox keyed by (seed, trial)."""
    key = np.array([seed & _MASK64, trial & _MASK64], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


class _TrialStreams:
    """Reusable equivalent of :func:`trial_rng` that avoids per-trial object churn."""

    def __init__(self, seed: int):
        self._bg = np.random.Philox(key=np.zeros(2, dtype=np.uint64))
        self._rng = np.random.Generator(self._bg)
        self._state = self._bg.state
        self._state["state"]["key"][0] = np.uint64(seed & _MASK64)

    def trial(self, index: int) -> np.random.Generator:
        st = self._state
        st["state"]["key"][1] = np.uint64(index & _MASK64)
        st["state"]["counter"][:] = 0
        st["buffer_pos"] = 4
        st["has_uint32"] = 0
        self._bg.state = st
        return self._rng


def _check_sequence(seq: SubsetSequence) -> None:
    if seq.omega > 64:
        raise ValueError("observed-set bitmasks support omega <= 64")


def _draw_block(rng: np.random.Generator, rows: int, ell: int, omega: int) -> np.ndarray:
    """Cumulative observed-set masks for ``rows`` fresh reads (one row per read)."""
    draws = rng.integers(0, omega, size=(rows, ell), dtype=np.uint64)
    return np.bitwise_or.accumulate(np.left_shift(_UONE, draws), axis=0)


def simulate_recovery(
    seq: SubsetSequence,
    rng: np.random.Generator,
    max_transmissions: int = DEFAULT_MAX_TRANSMISSIONS,
) -> int:
    """Number of single transmissions until every index has shown its full support.

    Each transmission draws one symbol per index, uniformly from that index's
    support.  Raises :class:`TrialTruncatedError` when the cap is reached.
    """
    _check_sequence(seq)
    ell, omega = seq.ell, seq.omega
    full = np.uint64((1 << omega) - 1)
    masks = np.zeros(ell, dtype=np.uint64)
    taken = 0
    block = _FIRST_BLOCK
    while taken < max_transmissions:
        rows = min(block, max_transmissions - taken)
        acc = _draw_block(rng, rows, ell, omega)
        np.bitwise_or(acc, masks, out=acc)
        done = np.flatnonzero((acc == full).all(axis=1))
        if done.size:
            return taken + int(done[0]) + 1
        masks = acc[-1]
        taken += rows
        block = min(block * 2, _MAX_BLOCK)
    raise TrialTruncatedError(max_transmissions)


def simulate_partial(
    seq: SubsetSequence,
    r: int,
    rng: np.random.Generator,
    max_transmissions: int = DEFAULT_MAX_TRANSMISSIONS,
) -> int:
    """First transmission count at which at least ``r`` indices are fully recovered."""
    _check_sequence(seq)
    ell, omega = seq.ell, seq.omega
    if not 1 <= r <= ell:
        raise ValueError(f"r must satisfy 1 <= r <= ell, got r={r}, ell={ell}")
    full = np.uint64((1 << omega) - 1)
    masks = np.zeros(ell, dtype=np.uint64)
    finish = np.zeros(ell, dtype=np.int64)  # 0 while unrecovered
    taken = 0
    block = _FIRST_BLOCK
    while taken < max_transmissions:
        rows = min(block, max_transmissions - taken)
        acc = _draw_block(rng, rows, ell, omega)
        np.bitwise_or(acc, masks, out=acc)
        covered = acc == full
        newly = (finish == 0) & covered[-1]
        if newly.any():
            first_row = covered[:, newly].argmax(axis=0)
            finish[newly] = taken + first_row + 1
            done = finish[finish > 0]
            if done.size >= r:
                return int(np.partition(done, r - 1)[r - 1])
        masks = acc[-1]
        taken += rows
        block = min(block * 2, _MAX_BLOCK)
    raise TrialTruncatedError(max_transmissions)


def simulate_random_access(
    seqs: Sequence[SubsetSequence],
    target: int,
    rng: np.random.Generator,
    max_transmissions: int = DEFAULT_MAX_TRANSMISSIONS,
) -> int:
    """Transmissions until the target sequence (1-based) of a labeled pool is recovered.

    Every step picks one of the ``len(seqs)`` sequences uniformly at random and
    transmits it with its label; only reads labeled with the target advance its
    observed sets.
    """
    k = len(seqs)
    if k < 1:
        raise ValueError("need at least one sequence")
    if not 1 <= target <= k:
        raise ValueError(f"target must satisfy 1 <= target <= {k}, got {target}")
    seq = seqs[target - 1]
    _check_sequence(seq)
    ell, omega = seq.ell, seq.omega
    full = np.uint64((1 << omega) - 1)
    masks = np.zeros(ell, dtype=np.uint64)
    taken = 0
    block = _FIRST_BLOCK
    while taken < max_transmissions:
        rows = min(block, max_transmissions - taken)
        labels = rng.integers(0, k, size=rows)
        hits = np.flatnonzero(labels == target - 1)
        if hits.size:
            acc = _draw_block(rng, int(hits.size), ell, omega)
            np.bitwise_or(acc, masks, out=acc)
            done = np.flatnonzero((acc == full).all(axis=1))
            if done.size:
                return taken + int(hits[done[0]]) + 1
            masks = acc[-1]
        taken += rows
        block = min(block * 2, _MAX_BLOCK)
    raise TrialTruncatedError(max_transmissions)


def transmit(seq: SubsetSequence, n: int, rng: np.random.Generator) -> TransmissionLog:
    """Record ``n`` single transmissions of ``seq`` as actual alphabet symbols."""
    if n < 1:
        raise ValueError("need n >= 1 transmissions")
    supports = [sym.support for sym in seq.entries]
    reads = tuple(
        tuple(sup[int(rng.integers(0, len(sup)))] for sup in supports) for _ in range(n)
    )
    return TransmissionLog(reads)


@dataclass(frozen=True)
class SimConfig:
    """One simulation request: estimator parameters, trial count, and seeding."""

    params: CoverageParams
    trials: int
    seed: int
    max_transmissions: int = DEFAULT_MAX_TRANSMISSIONS
    mode: str = "recovery"

    def __post_init__(self) -> None:
        if self.trials < 1:
            raise ValueError(f"trials must be >= 1, got {self.trials}")
        if self.max_transmissions < 1:
            raise ValueError(f"max_transmissions must be >= 1, got {self.max_transmissions}")
        if self.mode not in ("recovery", "partial", "ra"):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.mode == "partial" and self.params.r is None:
            raise ValueError("partial mode needs params.r")
        if self.mode == "ra" and self.params.k is None:
            raise ValueError("ra mode needs params.k")


@dataclass(frozen=True)
class SimReport:
    """Monte Carlo estimate with its uncertainty and reproduction metadata.

    ``std_error`` and ``ci95`` are ``None`` when the trial count is too small
    to estimate them (fewer than 2 and ``MIN_TRIALS_FOR_CI`` respectively).
    Truncated trials contribute their cap value to the mean, which therefore
    underestimates the truth whenever ``truncated_trials > 0``.
    """

    mean: float
    std_error: Optional[float]
    ci95: Optional[tuple[float, float]]
    trials: int
    truncated_trials: int
    seed: int

    def __post_init__(self) -> None:
        if self.truncated_trials > self.trials:
            raise ValueError("truncated_trials cannot exceed trials")
        if self.ci95 is not None and not self.ci95[0] <= self.mean <= self.ci95[1]:
            raise ValueError("confidence interval must contain the mean")


def run_simulation(config: SimConfig) -> SimReport:
    """Run the configured estimator over independent, individually seeded trials.

    The random-access mode uses ``params.k`` copies of the canonical sequence
    and targets the first one; by symmetry the target choice is immaterial.
    """
    params = config.params
    seq = SubsetSequence.uniform(params.ell, params.omega)
    streams = _TrialStreams(config.seed)
    counts = np.empty(config.trials, dtype=np.float64)
    truncated = 0
    for t in range(config.trials):
        rng = streams.trial(t)
        try:
            if config.mode == "recovery":
                value = simulate_recovery(seq, rng, config.max_transmissions)
            elif config.mode == "partial":
                value = simulate_partial(seq, params.r, rng, config.max_transmissions)
            else:
                value = simulate_random_access(
                    (seq,) * params.k, 1, rng, config.max_transmissions
                )
        except TrialTruncatedError:
            value = config.max_transmissions
            truncated += 1
        counts[t] = value
    mean = float(counts.mean())
    std_error = None
    ci95 = None
    if config.trials >= 2:
        std_error = float(counts.std(ddof=1) / math.sqrt(config.trials))
    if config.trials >= MIN_TRIALS_FOR_CI and std_error is not None:
        ci95 = (mean - _Z95 * std_error, mean + _Z95 * std_error)
    return SimReport(
        mean=mean,
        std_error=std_error,
        ci95=ci95,
        trials=config.trials,
        truncated_trials=truncated,
        seed=config.seed,
    )
