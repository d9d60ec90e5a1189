"""Seeded Monte Carlo walker: empirical visit counts and absorption frequencies.

Walks start at the source (the arrival there counts as a visit), move to one
of the six neighbors chosen uniformly — indexing the same fixed neighbor
order the rest of the package uses — and stop on the first boundary site.

Reproducibility contract: the random draw consumed by walk ``i`` at step
``t`` is a pure function of ``(seed, i, t)``, built from two rounds of the
SplitMix64 finalizer over a Weyl sequence (one round hashes the walk index
into a per-walk stream base, the second hashes the step counter).  Results
are therefore bit-identical for a fixed ``(seed, walks)`` regardless of how
the walk population is chunked or parallelized, and tallies are integers, so
accumulation order cannot perturb them.

The step index is taken as ``((u >> 11) * 6) >> 53`` — the top 53 bits of the
hash mapped to ``{0..5}``.  Two of the six buckets are larger than the others
by one part in 2^52, which is far below anything resolvable at realistic walk
counts.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .closed_form import AbsorptionMap
from .lattice import (
    EVEN_P_STEPS,
    ODD_P_STEPS,
    LatticeSpec,
    Site,
    SourceSpec,
    boundary_sites,
    require_interior_source,
)

__all__ = ["WalkConfig", "McEstimate", "WalkOverflow", "SpecMismatch", "simulate", "zscores"]

_GOLDEN_INT = 0x9E3779B97F4A7C15
_GOLDEN = np.uint64(_GOLDEN_INT)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)
_MASK64 = (1 << 64) - 1

_EVEN_DP = np.array([s[0] for s in EVEN_P_STEPS], dtype=np.int64)
_EVEN_DQ = np.array([s[1] for s in EVEN_P_STEPS], dtype=np.int64)
_ODD_DP = np.array([s[0] for s in ODD_P_STEPS], dtype=np.int64)
_ODD_DQ = np.array([s[1] for s in ODD_P_STEPS], dtype=np.int64)


class WalkOverflow(RuntimeError):
    """A walk exceeded the per-walk step cap (indicates a geometry bug)."""


class SpecMismatch(ValueError):
    """Estimate and reference describe different lattices."""


@dataclass(frozen=True)
class WalkConfig:
    """Simulation parameters: walk count, 64-bit seed, per-walk step cap."""

    walks: int
    seed: int
    max_steps: int = 10**9

    def __post_init__(self) -> None:
        if self.walks < 1:
            raise ValueError(f"walks must be >= 1, got {self.walks}")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must fit in an unsigned 64-bit integer")
        if self.max_steps < 1:
            raise ValueError(f"max_steps must be >= 1, got {self.max_steps}")


@dataclass(frozen=True)
class McEstimate:
    """Empirical tallies from one simulation run.

    ``visit_mean`` is visits per walk at each interior site (every arrival
    counts, including the initial placement at the source); ``absorb_freq``
    is the fraction of walks absorbed at each boundary site with
    ``absorb_stderr`` its binomial standard error.  The integer count maps
    are retained so exact identities (counts summing to ``walks``) survive
    the float division.
    """

    spec: LatticeSpec
    source: SourceSpec
    walks: int
    visit_mean: dict[Site, float]
    absorb_freq: dict[Site, float]
    absorb_stderr: dict[Site, float]
    visit_counts: dict[Site, int] = field(repr=False, default_factory=dict)
    absorb_counts: dict[Site, int] = field(repr=False, default_factory=dict)

    @property
    def total_absorb_freq(self) -> float:
        """Sum of absorption frequencies, computed as (sum of counts)/walks.

        Exactly 1.0 for any completed run: every walk absorbs exactly once.
        """
        return sum(self.absorb_counts.values()) / self.walks


def _mix64(z: np.ndarray) -> np.ndarray:
    z = (z ^ (z >> np.uint64(30))) * _MIX1
    z = (z ^ (z >> np.uint64(27))) * _MIX2
    return z ^ (z >> np.uint64(31))


def simulate(
    spec: LatticeSpec,
    src: SourceSpec,
    cfg: WalkConfig,
    chunk_size: int = 1 << 16,
) -> McEstimate:
    """Run ``cfg.walks`` independent walks and tally the outcomes.

    Deterministic for fixed ``(spec, src, cfg)``: per-walk draw streams are
    derived from ``(seed, walk index, step)`` alone, and ``chunk_size`` only
    controls how many walks advance per vectorized pass.
    """
    require_interior_source(spec, src)
    m, n = spec.m, spec.n
    a, b = src.a, src.b
    width = n + 2
    grid_len = (m + 2) * width

    visit_flat = np.zeros(grid_len, dtype=np.int64)
    absorb_flat = np.zeros(grid_len, dtype=np.int64)
    # The placement at the source counts as one visit for every walk.
    visit_flat[a * width + b] += cfg.walks

    seed = np.uint64(cfg.seed)
    for start in range(0, cfg.walks, chunk_size):
        count = min(chunk_size, cfg.walks - start)
        idx = np.arange(start, start + count, dtype=np.uint64)
        base = _mix64(seed + (idx + np.uint64(1)) * _GOLDEN)
        p = np.full(count, a, dtype=np.int64)
        q = np.full(count, b, dtype=np.int64)
        t = 0
        while p.size:
            if t >= cfg.max_steps:
                raise WalkOverflow(
                    f"{p.size} walk(s) still active after {t} steps "
                    f"(max_steps={cfg.max_steps})"
                )
            # Wrapping 64-bit Weyl increment; masked Python-int product keeps
            # the scalar path free of numpy overflow warnings.
            draw = _mix64(base + np.uint64(((t + 1) * _GOLDEN_INT) & _MASK64))
            step = ((draw >> np.uint64(11)) * np.uint64(6)) >> np.uint64(53)
            si = step.astype(np.intp)
            even = (p & 1) == 0
            p = p + np.where(even, _EVEN_DP[si], _ODD_DP[si])
            q = q + np.where(even, _EVEN_DQ[si], _ODD_DQ[si])
            # Arrivals from an interior site are interior or boundary, never
            # outside the (m+2) x (n+2) rectangle, so flat indexing is safe.
            interior = (p >= 1) & (p <= m) & (q >= 1) & (q <= n)
            flat = p * width + q
            visit_flat += np.bincount(flat[interior], minlength=grid_len)
            absorbed = ~interior
            if absorbed.any():
                absorb_flat += np.bincount(flat[absorbed], minlength=grid_len)
                p, q, base = p[interior], q[interior], base[interior]
            t += 1

    visit_grid = visit_flat.reshape(m + 2, width)
    absorb_grid = absorb_flat.reshape(m + 2, width)
    walks = cfg.walks

    visit_counts: dict[Site, int] = {}
    visit_mean: dict[Site, float] = {}
    for pp in range(1, m + 1):
        for qq in range(1, n + 1):
            c = int(visit_grid[pp, qq])
            s = Site(pp, qq)
            visit_counts[s] = c
            visit_mean[s] = c / walks

    absorb_counts: dict[Site, int] = {}
    absorb_freq: dict[Site, float] = {}
    absorb_stderr: dict[Site, float] = {}
    for s in boundary_sites(spec):
        c = int(absorb_grid[s.p, s.q])
        absorb_counts[s] = c
        f = c / walks
        absorb_freq[s] = f
        absorb_stderr[s] = math.sqrt(f * (1.0 - f) / walks)

    return McEstimate(
        spec=spec,
        source=src,
        walks=walks,
        visit_mean=visit_mean,
        absorb_freq=absorb_freq,
        absorb_stderr=absorb_stderr,
        visit_counts=visit_counts,
        absorb_counts=absorb_counts,
    )


def zscores(est: McEstimate, exact: AbsorptionMap) -> dict[Site, float]:
    """Standardized deviation of each empirical absorption frequency.

    ``z = (freq - exact) / stderr``; where the standard error is zero the
    score is 0 when the frequency matches exactly and signed infinity when it
    does not.  Raises :class:`SpecMismatch` when the two maps cover different
    boundary sets.
    """
    if set(est.absorb_freq) != set(exact.probs):
        raise SpecMismatch("estimate and reference cover different boundary sites")
    out: dict[Site, float] = {}
    for s, f in est.absorb_freq.items():
        target = exact.probs[s]
        se = est.absorb_stderr[s]
        if se == 0.0:
            out[s] = 0.0 if f == target else math.copysign(math.inf, f - target)
        else:
            out[s] = (f - target) / se
    return out
