#!/usr/bin/env python3
"""The Monte Carlo engine as an independent referee for the formulas.

The simulator draws actual symbols, tracks observed sets, and stops when the
recovery condition is met; it shares no code with the analytic series.  With a
fixed seed every run is bit-for-bit reproducible.
"""
from cdna import (
    CoverageParams,
    SimConfig,
    expected_coverage,
    expected_coverage_partial,
    random_access_expectation,
    run_simulation,
)

TRIALS = 50_000
SEED = 20240817

print(f"{TRIALS} trials per configuration, master seed {SEED}.\n")
print("  setup                    formula      simulated    std err   |z|")

rows = [
    ("recovery ell=1 omega=2", SimConfig(CoverageParams(1, 2), TRIALS, SEED),
     expected_coverage(1, 2)),
    ("recovery ell=4 omega=3", SimConfig(CoverageParams(4, 3), TRIALS, SEED),
     expected_coverage(4, 3)),
    ("partial  ell=3 r=2     ", SimConfig(CoverageParams(3, 2, r=2), TRIALS, SEED, mode="partial"),
     expected_coverage_partial(3, 2, 2)),
    ("random   ell=2 k=3     ", SimConfig(CoverageParams(2, 2, k=3), TRIALS, SEED, mode="ra"),
     random_access_expectation(2, 2, 3)),
]
for label, config, truth in rows:
    report = run_simulation(config)
    z = abs(report.mean - truth) / report.std_error
    print(f"  {label}   {truth:9.5f}   {report.mean:9.5f}   {report.std_error:.5f}   {z:4.2f}")

print("\nDeterminism: rerunning the first configuration reproduces the report")
again = run_simulation(rows[0][1])
print(f"  identical: {again == run_simulation(rows[0][1])}")
print(f"  mean {again.mean}, 95% CI {again.ci95}")
