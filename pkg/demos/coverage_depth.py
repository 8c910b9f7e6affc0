#!/usr/bin/env python3
"""How many reads does it take to recover subset-coded positions?

Walks through the expected coverage depth E(ell, omega): exact values from the
series, the closed form for omega = 2, the analytic bounds, and the striking
fact that E(ell, 2) tracks log2(ell) + 2.333 almost exactly.
"""
import math

from cdna import (
    coverage_bounds,
    expected_coverage,
    expected_coverage_closed_pairs,
    expected_coverage_exact,
)

print("A single position holding omega symbols needs every one of them observed.")
print("One read per transmission, uniform over the support:\n")
for omega in (1, 2, 3, 4):
    print(f"  E(ell=1, omega={omega}) = {expected_coverage(1, omega):.6f}"
          f"   (coupon collecting {omega} symbols)")

print("\nWhole sequences: every index must be covered, so the expectation grows")
print("with the sequence length ell:\n")
print("  ell   E(ell,2) series   closed form      exact rational")
for ell in (1, 2, 3, 4, 8):
    series = expected_coverage(ell, 2)
    closed = expected_coverage_closed_pairs(ell)
    exact = expected_coverage_exact(ell, 2)
    print(f"  {ell:3d}   {series:14.10f}   {closed:14.10f}   {exact}")

print("\nFor omega = 2 the dependence on ell is logarithmic plus a constant:")
print("\n  ell      E(ell,2)    E - log2(ell)")
for exp in range(6, 13):
    ell = 2**exp
    value = expected_coverage(ell, 2)
    print(f"  {ell:5d}   {value:9.5f}    {value - math.log2(ell):.5f}")
print("\nThe offset hugs 2.333 (= 2 1/3) across two orders of magnitude.")

print("\nAnalytic bounds bracket the truth at every length and support size:\n")
print("  omega   ell    lower      E(ell,omega)   upper")
for omega in (2, 3, 4):
    for ell in (4, 64, 1024):
        pair = coverage_bounds(ell, omega)
        value = expected_coverage(ell, omega)
        print(f"  {omega:5d}  {ell:4d}   {pair.lower:8.4f}   {value:12.4f}   {pair.upper:8.4f}")
