"""Cross-check the three engines on a batch of geometries.

For each case: solve with the closed form and with the sparse linear system,
report the largest disagreement, then send a modest Monte Carlo run against
the closed form and report the largest standardized deviation.  The two
deterministic engines share nothing but the lattice definition, so their
agreement (typically ~1e-15) is the strongest internal evidence either one
is right.

Run:  python3 demos/engine_crosscheck.py
"""

import time

from triwalk import (
    LatticeSpec,
    SourceSpec,
    WalkConfig,
    absorption_map,
    simulate,
    solve_exact,
    solve_oracle,
    zscores,
)

CASES = [
    (3, 3, 2, 2),
    (5, 4, 2, 3),
    (7, 7, 4, 4),
    (7, 7, 3, 5),   # odd source column: exercises the regularized central mode
    (9, 6, 5, 2),
    (11, 10, 3, 7),
    (15, 12, 8, 5),
]

WALKS = 200_000

print(f"{'geometry':>16s} {'field dev':>11s} {'absorb dev':>11s} {'mc max|z|':>10s} {'limit':>6s}")
for (m, n, a, b) in CASES:
    spec, src = LatticeSpec(m, n), SourceSpec(a, b)
    ex = solve_exact(spec, src)
    orc = solve_oracle(spec, src)
    dfield = max(abs(ex.values[s] - orc.values[s]) for s in ex.values)
    ea, oa = absorption_map(ex), absorption_map(orc)
    dabs = max(abs(ea.probs[s] - oa.probs[s]) for s in ea.probs)
    est = simulate(spec, src, WalkConfig(walks=WALKS, seed=2024))
    zmax = max(abs(v) for v in zscores(est, ea).values())
    tag = "yes" if ex.limit_evaluated else "-"
    print(f"({m:2d},{n:2d}) src({a:2d},{b:2d}) {dfield:11.2e} {dabs:11.2e} {zmax:10.2f} {tag:>6s}")

# scaling sanity: the linear oracle switches to an iterative solver above
# ten thousand unknowns; time both regimes
for (m, n) in [(99, 100), (101, 100)]:
    spec, src = LatticeSpec(m, n), SourceSpec(m // 2 + 1, n // 2)
    t0 = time.perf_counter()
    sol = solve_oracle(spec, src)
    dt = time.perf_counter() - t0
    regime = "direct" if m * n <= 10_000 else "iterative"
    print(f"\noracle on {m*n} unknowns ({regime}): {dt:.2f}s, "
          f"sum of absorption = {absorption_map(sol).total:.12f}")
