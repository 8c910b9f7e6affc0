#!/usr/bin/env python3
"""The best four-symbol binary alphabet at every read count.

The optimal code is symmetric, {0, alpha, 1-alpha, 1}.  A closed form gives
alpha(n); an exhaustive grid search over the inner value confirms it; and as
reads grow the alphabet converges to {0, 1/5, 4/5, 1}.
"""
from cdna import binary4_alpha, construct_binary4, evaluate_code, optimize_binary4_grid

print("Closed-form inner value versus the exhaustive grid oracle (step 1e-4):\n")
print("   n    alpha(n)    grid x*     |diff|     f_min at optimum")
for n in (3, 4, 5, 6, 8, 10):
    alpha = binary4_alpha(n)
    x_star, f_star = optimize_binary4_grid(n, 1e-4)
    print(f"  {n:2d}   {alpha:.6f}   {x_star:.6f}   {abs(alpha - x_star):.2e}   {f_star:.6f}")

print("\nWhy n=2 is excluded: with 4 codewords and only the observations")
print("{0, 1/2, 1}, some codeword always gets an empty decoding region, so the")
print("minimum success probability is 0 for every inner value:")
x_star, f_star = optimize_binary4_grid(2, 1e-3)
print(f"  grid at n=2: flat objective, best value {f_star}")

print("\nConvergence of alpha(n) toward 1/5:")
for n in (5, 10, 20, 50, 100, 200):
    print(f"  alpha({n:3d}) = {binary4_alpha(n):.6f}")

print("\nThe resulting code at n = 10 and its full evaluation:")
code = construct_binary4(10)
result = evaluate_code(code, 10)
for symbol in code.symbols:
    print(f"  {symbol.probs[0]:.6f}: success {result.per_symbol_success[symbol]:.6f}")
print(f"  f_min = {result.f_min:.6f}")
