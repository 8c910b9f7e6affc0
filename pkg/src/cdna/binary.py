"""Binary-alphabet results: likelihood thresholds and the optimal size-4 code.

Binary codewords are written in scalar shorthand: the symbol (x, 1-x) is just
``x``.  A sorted binary code places its codewords on [0, 1], and any observed
fraction decodes to one of its two neighbors on that line.
"""
from __future__ import annotations

import math
from fractions import Fraction
from math import comb
from typing import Union

from .codes import DEFAULT_MAX_ENUM, CompositeCode, evaluate_code
from .model import UnsupportedRangeError, observed_grid_size

Number = Union[int, float, Fraction]


def binary_threshold(x: Number, y: Number) -> float:
    """Observed fraction at which binary symbols x < y are equally likely.

    For 0 < x < y < 1, reads of x are more likely than reads of y exactly for
    observed fractions below

        log((1-y)/(1-x)) / log(x(1-y) / ((1-x)y)),

    obtained by equating per-read log-likelihoods
    t log x + (1-t) log(1-x) = t log y + (1-t) log(1-y) and solving for t.
    """
    x, y = float(x), float(y)
    if not (0.0 < x < 1.0 and 0.0 < y < 1.0):
        raise ValueError(f"need x, y strictly inside (0, 1), got x={x}, y={y}")
    if not x < y:
        raise ValueError(f"need x < y, got x={x}, y={y}")
    return math.log((1 - y) / (1 - x)) / math.log(x * (1 - y) / ((1 - x) * y))


def _int_root(value: Fraction, k: int) -> float:
    """float(value) ** (1/k) via big-integer logarithms, safe for huge values."""
    if k == 1:
        return float(value)
    return math.exp((math.log(value.numerator) - math.log(value.denominator)) / k)


def binary4_beta(n: int) -> float:
    """The odds ratio (1-x)/x at the optimal inner value of {0, x, 1-x, 1}.

    At read count n, the worst codeword of the symmetric code {0, x, 1-x, 1}
    under maximum-likelihood decoding is one of the inner pair; maximizing its
    success probability gives a unique stationary odds ratio:

    * odd n = 2m+1: the inner symbol's success is P[1 <= Bin(n, x) <= m], and
      stationarity gives beta^m = (m+1) C(2m+1, m) / (2m+1);

    * even n = 2m with m >= 2: the observed fraction 1/2 ties and goes to the
      lexicographically smaller inner symbol, so the worst symbol's success is
      P[1 <= Bin(n, x) <= m-1]; stationarity gives beta^(m-1) = C(2m-1, m-1).

    n = 2 is refused: a 4-symbol binary code sees only 3 observed distributions
    there, so every choice of x has minimum success probability 0 and no
    optimal inner value exists.

    beta -> 4 as n grows, so the optimal code converges to {0, 1/5, 4/5, 1}.
    """
    if n < 2:
        raise ValueError(f"need n >= 2, got {n}")
    if n == 2:
        raise ValueError(
            "n=2 is degenerate: only 3 observed distributions exist, so every "
            "4-symbol binary code has minimum success probability 0"
        )
    if n % 2:
        m = (n - 1) // 2
        return _int_root(Fraction(m + 1, 2 * m + 1) * comb(2 * m + 1, m), m)
    m = n // 2
    return _int_root(Fraction(comb(2 * m - 1, m - 1)), m - 1)


def binary4_alpha(n: int) -> float:
    """Optimal inner value of the size-4 symmetric binary code: 1 / (1 + beta_n)."""
    return 1.0 / (1.0 + binary4_beta(n))


def construct_binary4(n: int) -> CompositeCode:
    """The minimum-success-optimal 4-symbol binary code {0, alpha, 1-alpha, 1} at read count n."""
    alpha = binary4_alpha(n)
    return CompositeCode.binary([0.0, alpha, 1.0 - alpha, 1.0])


def optimize_binary4_grid(
    n: int,
    grid_step: float,
    max_enum: int = DEFAULT_MAX_ENUM,
) -> tuple[float, Union[float, Fraction]]:
    """Grid-search oracle for the size-4 optimum: exhaustive argmax of f_min.

    Evaluates the minimum success probability of {0, x, 1-x, 1} under
    maximum-likelihood decoding for every grid point x in (0, 0.5) and returns
    the first maximizer together with its objective value.  This is the
    independent check for :func:`construct_binary4`; it makes no use of the
    closed forms.
    """
    if not 0.0 < grid_step <= 1e-3:
        raise ValueError(f"grid_step must lie in (0, 1e-3], got {grid_step}")
    if n < 1:
        raise ValueError(f"need n >= 1, got {n}")
    if observed_grid_size(n, 2) > max_enum:
        raise UnsupportedRangeError(f"grid of n={n} exceeds the enumeration cap {max_enum}")
    best_x = None
    best_f = None
    i = 1
    while True:
        x = i * grid_step
        if x >= 0.5:
            break
        code = CompositeCode.binary([0.0, x, 1.0 - x, 1.0])
        f_min = evaluate_code(code, n, max_enum=max_enum).f_min
        if best_f is None or f_min > best_f:
            best_x, best_f = x, f_min
        i += 1
    return best_x, best_f


def symmetric_reflect(code: CompositeCode) -> CompositeCode:
    """The binary code with every value x replaced by 1-x, re-sorted.

    A code equal to its reflection is symmetric.  Reflection mirrors decoding
    regions and per-symbol success probabilities exactly, except at observation
    points where two codewords are precisely tied (the lexicographic tie-break
    favors the smaller codeword on both sides); generic codes have no such
    points.
    """
    if code.q != 2:
        raise ValueError("reflection is defined for binary codes only")
    return CompositeCode(tuple(reversed(s.probs)) for s in code.symbols)
