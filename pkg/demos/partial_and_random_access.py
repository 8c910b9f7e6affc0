#!/usr/bin/env python3
"""Partial recovery and random access: two practical relaxations.

An outer erasure code may only need r of the ell indices; and reads sampled
from a pool of k labeled sequences still recover any one target, just k times
slower in expectation.
"""
from cdna import (
    expected_coverage,
    expected_coverage_partial,
    random_access_expectation,
)

print("Needing only r of ell indices lowers the expected read count.")
print("Two useful sanity checks: r = ell recovers the full problem, and")
print("recovering r indices of ell is never harder than a length-r sequence.\n")
print("  ell  omega   r   E(ell,omega;r)   E(r,omega)")
for ell, omega in ((4, 2), (5, 3)):
    for r in range(1, ell + 1):
        value = expected_coverage_partial(ell, omega, r)
        bound = expected_coverage(r, omega)
        print(f"  {ell:3d}  {omega:5d}  {r:2d}   {value:14.6f}   {bound:10.6f}")
    print()

print("The simplest nontrivial case by hand: ell=2, omega=2, r=1.")
print("Each index finishes at 1 + Geometric(1/2) reads; the first of the two")
print("finishes at 1 + Geometric(3/4), so the mean is 1 + 4/3 = 7/3:")
print(f"  E(2,2;1) = {expected_coverage_partial(2, 2, 1):.10f}  (7/3 = {7 / 3:.10f})\n")

print("Random access to one of k labeled sequences multiplies the single-")
print("sequence expectation by exactly k:\n")
print("  ell  omega   k    RA(ell,omega,k)   k * E(ell,omega)")
for k in (1, 2, 3, 8):
    ra = random_access_expectation(2, 2, k)
    print(f"    2      2   {k:2d}   {ra:15.6f}   {k * expected_coverage(2, 2):15.6f}")
