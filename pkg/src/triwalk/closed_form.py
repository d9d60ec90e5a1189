"""Exact closed-form solution of the lattice visit-expectation field.

The field of visit expectations on the interior of the zig-zag lattice
satisfies coupled six-neighbor difference equations, one family per row
parity, with a unit source injected at ``(a, b)`` and zero values on the
absorbing edges.  This module evaluates the separable solution:

* The row dependence separates into ``m`` sine modes ``sin(theta_j * p)``
  with ``theta_j = pi*j/(m+1)``; each mode carries a pair of decay rates
  ``alpha >= beta >= 0`` obtained from the characteristic relation of the
  column recurrence (:func:`mode_constants`).
* Per mode, the column dependence is a combination of exponential basis
  functions built from ``gamma_fn``; one family satisfies the ``q = 0``
  absorbing edge (:func:`basis_region1`, used for ``q <= b``), the other
  the ``q = n+1`` edge (:func:`basis_region2`, used for ``q >= b``).
* The two families are matched across the source column by the ratios from
  :func:`matching_gammas` (folded into :func:`star_basis`), and the source
  row fixes the two remaining amplitudes per mode (:func:`mode_amplitudes`)
  through the four bracket coefficients of :func:`t_coefficients`.

Even-p rows take the plain basis functions; odd-p rows take the companion
(hatted) functions with an extra ``cos(theta_j)`` factor.

The central mode ``j = (m+1)/2`` is degenerate: its basis functions vanish
identically and its amplitudes are formally 0/0.  When the source projection
``sin(theta_j * a)`` is zero the mode drops exactly; otherwise its
contribution is evaluated as a numerical limit: all mode quantities are
recomputed at ``lk = eps`` and ``eps/2`` (holding the row factors at the true
mode index), Richardson-extrapolated, and accepted only if the two estimates
agree to a relative tolerance (see :data:`EPS_DEGENERATE_LK`,
:data:`DEGENERATE_GUARD_REL`).

Intended for desk-scale lattices (per-mode column profiles are rescaled by
``exp(-alpha*(n+1))`` so exponential growth never materializes; region-II
terms are evaluated from combined exponents).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple

import numpy as np

from .lattice import (
    LatticeSpec,
    Site,
    SourceSpec,
    boundary_sites,
    neighbors,
    require_interior_source,
)

__all__ = [
    "ModeData",
    "BasisPair",
    "ModeAmplitudes",
    "FieldSolution",
    "AbsorptionMap",
    "UnsupportedGeometry",
    "DegenerateMode",
    "SingularMatching",
    "DegenerateModeUnresolved",
    "mode_constants",
    "gamma_fn",
    "basis_region1",
    "basis_region2",
    "matching_gammas",
    "star_basis",
    "t_coefficients",
    "mode_amplitudes",
    "solve_exact",
    "delta_identity_check",
    "absorption_map",
]

#: lk value at which the degenerate central mode is regularized.
EPS_DEGENERATE_LK = 1e-6

#: Accepted relative disagreement (max-norm over the mode's column profile)
#: between the two regularized evaluations at ``eps`` and ``eps/2``.
DEGENERATE_GUARD_REL = 1e-6

#: Relative residual bound the assembled field must satisfy before a solution
#: is returned (triggering the extended-precision amplitude retry if not).
_RESIDUAL_REL = 1e-9


class UnsupportedGeometry(ValueError):
    """The closed form covers odd ``m >= 3`` only; other shapes use the oracle."""


class DegenerateMode(ValueError):
    """Basis functions were requested for the degenerate central mode."""


class SingularMatching(ArithmeticError):
    """A matching or amplitude denominator vanished (or underflowed to zero)."""


class DegenerateModeUnresolved(ArithmeticError):
    """The regularized limit of the central mode failed its convergence check."""


@dataclass(frozen=True)
class ModeData:
    """Analytic constants of row mode ``j``.

    ``lk = 4*cos(theta)**2`` drives the characteristic relation whose two
    cosh-roots are ``cosh_a = 3 + lk/4 + d/4`` and ``cosh_b = 3 + lk/4 - d/4``
    with ``d = sqrt(lk**2 + 32*lk)``; ``alpha``/``beta`` are the non-negative
    arccosh values.  Both roots equal 3 exactly when the mode is degenerate.
    """

    j: int
    theta: float
    lk: float
    cosh_a: float
    cosh_b: float
    alpha: float
    beta: float
    degenerate: bool


class BasisPair(NamedTuple):
    """Values of a column basis function pair at one ``q``.

    ``a_even`` is the plain (even-row) function, ``a_odd`` the companion
    (odd-row) function of the same exponential family.
    """

    a_even: float
    a_odd: float


@dataclass(frozen=True)
class ModeAmplitudes:
    """Per-mode source amplitudes ``(A, B)``.

    ``limit_lk`` is ``None`` for regular modes; for the degenerate central
    mode it records the regularization parameter at which ``A`` and ``B``
    were evaluated (the assembled field uses the extrapolated limit).
    """

    A: float
    B: float
    limit_lk: float | None = None


@dataclass(frozen=True)
class FieldSolution:
    """Interior visit-expectation field, tagged with the producing method.

    ``values`` maps every interior site to its expectation; boundary sites
    are implicitly zero.  ``limit_evaluated`` is set when the degenerate
    central mode contributed through the regularized limit.
    """

    spec: LatticeSpec
    source: SourceSpec
    values: dict[Site, float]
    method: str
    limit_evaluated: bool = False


@dataclass(frozen=True)
class AbsorptionMap:
    """Boundary absorption probabilities and their recorded total."""

    probs: dict[Site, float]
    total: float


def _require_exact_geometry(spec: LatticeSpec) -> None:
    if spec.m % 2 == 0 or spec.m < 3:
        raise UnsupportedGeometry(
            f"closed form requires odd m >= 3 (got m={spec.m}); "
            "use the linear oracle for even m or m=1"
        )


def mode_constants(j: int, m: int) -> ModeData:
    """Constants of mode ``j`` on a lattice with ``m`` interior rows."""
    if m % 2 == 0 or m < 3:
        raise UnsupportedGeometry(f"mode constants require odd m >= 3, got m={m}")
    if not 1 <= j <= m:
        raise ValueError(f"mode index must satisfy 1 <= j <= m, got j={j}")
    theta = math.pi * j / (m + 1)
    degenerate = 2 * j == m + 1
    lk = 0.0 if degenerate else 4.0 * math.cos(theta) ** 2
    return _mode_from_lk(j, theta, lk, degenerate)


def _mode_from_lk(j: int, theta: float, lk: float, degenerate: bool) -> ModeData:
    disc = math.sqrt(lk * lk + 32.0 * lk)
    cosh_a = 3.0 + lk / 4.0 + disc / 4.0
    cosh_b = 3.0 + lk / 4.0 - disc / 4.0
    alpha = math.acosh(cosh_a)
    beta = math.acosh(max(cosh_b, 1.0))
    return ModeData(j, theta, lk, cosh_a, cosh_b, alpha, beta, degenerate)


def gamma_fn(alpha_signed: float, beta_signed: float) -> float:
    """The sign-sensitive coupling combination of two decay rates.

    Note the equal-argument value is *not* zero:
    ``gamma_fn(x, x) = -2*(3 - cosh x)*sinh x``.
    """
    ca = math.cosh(alpha_signed)
    cb = math.cosh(beta_signed)
    return (
        4.0 * ca
        - 4.0 * cb
        - (3.0 - cb) * math.sinh(alpha_signed)
        - (3.0 - ca) * math.sinh(beta_signed)
    )


def _require_regular(mode: ModeData) -> None:
    if mode.degenerate:
        raise DegenerateMode(
            f"mode j={mode.j} is degenerate (lk=0); its contribution is "
            "evaluated as a regularized limit upstream"
        )


def basis_region1(q: int, mode: ModeData, sign: int) -> BasisPair:
    """Column basis pair of the family vanishing at ``q = 0``.

    ``sign`` selects the ``+alpha`` or ``-alpha`` member of the family.
    Both members (and their odd-row companions) satisfy the ``q = 0``
    absorbing condition identically.
    """
    _require_regular(mode)
    sa = sign * mode.alpha
    beta = mode.beta
    s3a = 3.0 - mode.cosh_a
    s3b = 3.0 - mode.cosh_b
    shb = math.sinh(beta)
    g_mm = gamma_fn(-sa, -beta)
    g_mp = gamma_fn(-sa, beta)
    eaq = math.exp(sa * q)
    ebq = math.exp(beta * q)
    embq = math.exp(-beta * q)
    a_even = s3a * s3b * 2.0 * shb * eaq - s3b * g_mm * ebq + s3b * g_mp * embq
    a_odd = (
        2.0 * eaq * (math.exp(sa) + 1.0) * s3b * shb
        - g_mm * (math.exp(beta) + 1.0) * ebq
        + g_mp * (math.exp(-beta) + 1.0) * embq
    )
    return BasisPair(a_even, a_odd)


def basis_region2(q: int, mode: ModeData, sign: int, n: int) -> BasisPair:
    """Column basis pair of the family vanishing at ``q = n+1``.

    The whole per-mode family (both signs, both parities) carries a shared
    normalization ``exp(-alpha*(n+1))``; each term is evaluated from its
    combined exponent, so the unscaled growth factors never materialize.
    Downstream matched combinations are invariant under this family-wide
    rescaling.
    """
    _require_regular(mode)
    sa = sign * mode.alpha
    alpha = mode.alpha
    beta = mode.beta
    s3a = 3.0 - mode.cosh_a
    s3b = 3.0 - mode.cosh_b
    shb = math.sinh(beta)
    g_mm = gamma_fn(-sa, -beta)
    g_mp = gamma_fn(-sa, beta)
    span = n + 1
    e1 = math.exp(sa * q - alpha * span)
    e2 = math.exp((sa - beta) * span + beta * q - alpha * span)
    e3 = math.exp((sa + beta) * span - beta * q - alpha * span)
    a_even = s3a * s3b * 2.0 * shb * e1 - g_mm * s3b * e2 + g_mp * s3b * e3
    a_odd = (
        (math.exp(sa) + 1.0) * s3b * 2.0 * shb * e1
        - g_mm * (math.exp(beta) + 1.0) * e2
        + g_mp * (math.exp(-beta) + 1.0) * e3
    )
    return BasisPair(a_even, a_odd)


def _matching_gammas_signed(mode: ModeData, b: int, n: int, sign: int) -> tuple[float, float]:
    """Matching ratios with ``sign*alpha`` taking the leading role."""
    aI, ahI = basis_region1(b, mode, sign)
    aII_s, ahII_s = basis_region2(b, mode, sign, n)
    aII_m, ahII_m = basis_region2(b, mode, -sign, n)
    num1 = ahII_m * aI - aII_m * ahI
    den1 = aII_s * ahII_m - ahII_s * aII_m
    num2 = ahII_s * aI - aII_s * ahI
    den2 = aII_m * ahII_s - aII_s * ahII_m
    if abs(den1) < 1e-300 or abs(den2) < 1e-300:
        raise SingularMatching(
            f"matching denominator vanished for mode j={mode.j} at b={b} "
            f"(den1={den1!r}, den2={den2!r})"
        )
    return num1 / den1, num2 / den2


def matching_gammas(mode: ModeData, b: int, n: int) -> tuple[float, float]:
    """Ratios matching the two column families across the source column.

    The two denominators are each other's negation by construction; both are
    checked against underflow.
    """
    return _matching_gammas_signed(mode, b, n, +1)


def star_basis(q: int, mode: ModeData, sign: int, b: int, n: int) -> BasisPair:
    """Region-II basis pair matched to region I across the source column.

    For ``sign = -1`` the matching ratios themselves are recomputed with the
    roles of ``+alpha`` and ``-alpha`` exchanged, so the matched identity
    (star value at ``q = b`` equals the region-I value) holds for either sign.
    """
    g1, g2 = _matching_gammas_signed(mode, b, n, sign)
    pair_s = basis_region2(q, mode, sign, n)
    pair_m = basis_region2(q, mode, -sign, n)
    return BasisPair(
        pair_s.a_even * g1 + pair_m.a_even * g2,
        pair_s.a_odd * g1 + pair_m.a_odd * g2,
    )


def t_coefficients(mode: ModeData, b: int, n: int, m: int) -> tuple[float, float, float, float]:
    """The four source-row bracket coefficients of one mode.

    ``T1``/``T4`` use the ``-alpha`` family where ``T2``/``T3`` use
    ``+alpha``; ``T1 = -(T2 with alpha -> -alpha)`` and likewise for
    ``T4``/``T3``.  The ``cos**2`` factors come from ``lk/4``.
    """
    if not 1 <= b <= n:
        raise ValueError(f"source column must satisfy 1 <= b <= n, got b={b}, n={n}")
    c2 = mode.lk / 4.0

    aI_b_m, ahI_b_m = basis_region1(b, mode, -1)
    aI_b_p, ahI_b_p = basis_region1(b, mode, +1)
    aI_b1_m, ahI_b1_m = basis_region1(b - 1, mode, -1)
    aI_b1_p, ahI_b1_p = basis_region1(b - 1, mode, +1)
    aS_m, ahS_m = star_basis(b + 1, mode, -1, b, n)
    aS_p, ahS_p = star_basis(b + 1, mode, +1, b, n)

    t1 = 2.0 * aI_b_m + 2.0 * aS_m + ahI_b1_m + ahS_m - 6.0 * ahI_b_m
    t2 = 6.0 * ahI_b_p - 2.0 * aI_b_p - 2.0 * aS_p - ahI_b1_p - ahS_p
    t3 = 6.0 * aI_b_p - 2.0 * c2 * ahI_b1_p - 2.0 * c2 * ahI_b_p - aI_b1_p - aS_p
    t4 = 2.0 * c2 * ahI_b1_m + 2.0 * c2 * ahI_b_m + aI_b1_m + aS_m - 6.0 * aI_b_m
    return t1, t2, t3, t4


def _amplitudes_from_ts(
    ts: tuple[float, float, float, float],
    cos_theta: float,
    sin_proj: float,
    m: int,
    a: int,
    careful: bool = False,
) -> tuple[float, float]:
    """Solve the per-mode source-row 2x2 system for ``(A, B)``.

    Even-``a`` sources load the even-row equation; odd-``a`` sources load the
    odd-row equation, whose projection carries an extra ``cos(theta)`` that
    must be divided out of both amplitudes.  Shared-denominator form avoids
    spurious division by an individually vanishing bracket.

    ``careful=True`` re-evaluates the products and the denominator in
    extended precision (cancellation fallback; see :func:`solve_exact`).
    """
    t1, t2, t3, t4 = ts
    pref = 12.0 / (m + 1) * sin_proj
    if careful:
        ld = np.longdouble
        if a % 2 == 0:
            den = ld(t1) * ld(t3) - ld(t4) * ld(t2)
            num_a, num_b = ld(t1), ld(t2)
        else:
            den = ld(cos_theta) * (ld(t2) * ld(t4) - ld(t1) * ld(t3))
            num_a, num_b = ld(t4), ld(t3)
        if den == 0:
            raise SingularMatching("amplitude denominator vanished")
        return float(ld(pref) * num_a / den), float(ld(pref) * num_b / den)
    if a % 2 == 0:
        den = t1 * t3 - t4 * t2
        num_a, num_b = t1, t2
    else:
        den = cos_theta * (t2 * t4 - t1 * t3)
        num_a, num_b = t4, t3
    if den == 0.0:
        raise SingularMatching("amplitude denominator vanished")
    return pref * num_a / den, pref * num_b / den


@dataclass(frozen=True)
class _ModeProfiles:
    """Per-mode column profiles, amplitudes folded in.

    Region-I lists cover ``q = 0..b`` (index ``q``); region-II lists cover
    ``q = b..n+1`` (index ``q - b``).  Odd profiles include the extra
    ``cos(theta)`` row factor.
    """

    j: int
    b: int
    even_I: tuple[float, ...]
    odd_I: tuple[float, ...]
    even_II: tuple[float, ...]
    odd_II: tuple[float, ...]


def _profiles_for_mode(
    mode: ModeData,
    cos_theta: float,
    amps: tuple[float, float],
    b: int,
    n: int,
) -> _ModeProfiles:
    A, B = amps
    g1p, g2p = _matching_gammas_signed(mode, b, n, +1)
    g1m, g2m = _matching_gammas_signed(mode, b, n, -1)

    even_I: list[float] = []
    odd_I: list[float] = []
    for q in range(0, b + 1):
        pp = basis_region1(q, mode, +1)
        pm = basis_region1(q, mode, -1)
        even_I.append(pp.a_even * A + pm.a_even * B)
        odd_I.append(cos_theta * (pp.a_odd * A + pm.a_odd * B))

    even_II: list[float] = []
    odd_II: list[float] = []
    for q in range(b, n + 2):
        rp = basis_region2(q, mode, +1, n)
        rm = basis_region2(q, mode, -1, n)
        star_p = BasisPair(rp.a_even * g1p + rm.a_even * g2p, rp.a_odd * g1p + rm.a_odd * g2p)
        star_m = BasisPair(rm.a_even * g1m + rp.a_even * g2m, rm.a_odd * g1m + rp.a_odd * g2m)
        even_II.append(star_p.a_even * A + star_m.a_even * B)
        odd_II.append(cos_theta * (star_p.a_odd * A + star_m.a_odd * B))

    return _ModeProfiles(mode.j, b, tuple(even_I), tuple(odd_I), tuple(even_II), tuple(odd_II))


@dataclass(frozen=True)
class _DegenerateLimit:
    profiles: _ModeProfiles
    amps_eps: tuple[float, float]
    guard: float


@lru_cache(maxsize=128)
def _degenerate_limit(m: int, n: int, a: int, b: int, careful: bool = False) -> _DegenerateLimit:
    """Regularized contribution of the central mode for an odd-``a`` source.

    Evaluates the full per-mode pipeline at ``lk = eps`` and ``eps/2`` with
    the effective ``cos(theta) = sqrt(lk)/2`` (the row sine factors are
    applied later at the true mode index), Richardson-extrapolates the two
    column profiles, and rejects the result if they disagree beyond
    :data:`DEGENERATE_GUARD_REL` in relative max-norm.

    Only odd-row profiles are produced: the true row factor
    ``sin(p*pi/2)`` vanishes on every even row, so the even profile can
    never enter the field.
    """
    j = (m + 1) // 2
    theta = math.pi * j / (m + 1)
    sin_proj = math.sin(theta * a)

    def one(lk: float) -> tuple[_ModeProfiles, tuple[float, float]]:
        mode = _mode_from_lk(j, theta, lk, degenerate=False)
        cos_eff = math.sqrt(lk) / 2.0
        ts = t_coefficients(mode, b, n, m)
        amps = _amplitudes_from_ts(ts, cos_eff, sin_proj, m, a, careful=careful)
        return _profiles_for_mode(mode, cos_eff, amps, b, n), amps

    prof1, amps1 = one(EPS_DEGENERATE_LK)
    prof2, _ = one(EPS_DEGENERATE_LK / 2.0)

    def richardson(x1: tuple[float, ...], x2: tuple[float, ...]) -> tuple[float, ...]:
        return tuple(2.0 * v2 - v1 for v1, v2 in zip(x1, x2))

    odd_I = richardson(prof1.odd_I, prof2.odd_I)
    odd_II = richardson(prof1.odd_II, prof2.odd_II)

    merged_extrap = odd_I + odd_II
    merged_diff = tuple(
        v1 - v2 for v1, v2 in zip(prof1.odd_I + prof1.odd_II, prof2.odd_I + prof2.odd_II)
    )
    scale = max((abs(v) for v in merged_extrap), default=0.0)
    diff = max((abs(v) for v in merged_diff), default=0.0)
    guard = diff / scale if scale > 0.0 else 0.0
    if guard > DEGENERATE_GUARD_REL:
        raise DegenerateModeUnresolved(
            f"central-mode limit failed to converge: relative change {guard:.3e} "
            f"between lk={EPS_DEGENERATE_LK} and lk={EPS_DEGENERATE_LK / 2} "
            f"exceeds {DEGENERATE_GUARD_REL}"
        )

    zeros_I = tuple(0.0 for _ in odd_I)
    zeros_II = tuple(0.0 for _ in odd_II)
    profiles = _ModeProfiles(j, b, zeros_I, odd_I, zeros_II, odd_II)
    return _DegenerateLimit(profiles, amps1, guard)


def mode_amplitudes(j: int, spec: LatticeSpec, src: SourceSpec) -> ModeAmplitudes:
    """Source amplitudes ``(A, B)`` of mode ``j``.

    Modes whose source projection ``sin(theta_j * a)`` vanishes (an exact
    integer condition on ``j*a mod (m+1)``) carry zero amplitudes.  The
    degenerate central mode otherwise returns its regularized-limit
    amplitudes, marked via ``limit_lk``.
    """
    _require_exact_geometry(spec)
    require_interior_source(spec, src)
    m, n, a, b = spec.m, spec.n, src.a, src.b
    if not 1 <= j <= m:
        raise ValueError(f"mode index must satisfy 1 <= j <= m, got j={j}")
    if (j * a) % (m + 1) == 0:
        return ModeAmplitudes(0.0, 0.0)
    mode = mode_constants(j, m)
    if mode.degenerate:
        data = _degenerate_limit(m, n, a, b)
        return ModeAmplitudes(data.amps_eps[0], data.amps_eps[1], limit_lk=EPS_DEGENERATE_LK)
    ts = t_coefficients(mode, b, n, m)
    sin_proj = math.sin(mode.theta * a)
    A, B = _amplitudes_from_ts(ts, math.cos(mode.theta), sin_proj, m, a)
    return ModeAmplitudes(A, B)


def _all_mode_profiles(
    spec: LatticeSpec, src: SourceSpec, careful: bool = False
) -> tuple[list[_ModeProfiles | None], bool]:
    """Column profiles for every mode (``None`` where the mode drops)."""
    m, n, a, b = spec.m, spec.n, src.a, src.b
    out: list[_ModeProfiles | None] = []
    limit_used = False
    for j in range(1, m + 1):
        if (j * a) % (m + 1) == 0:
            out.append(None)
            continue
        mode = mode_constants(j, m)
        if mode.degenerate:
            data = _degenerate_limit(m, n, a, b, careful=careful)
            out.append(data.profiles)
            limit_used = True
            continue
        ts = t_coefficients(mode, b, n, m)
        sin_proj = math.sin(mode.theta * a)
        amps = _amplitudes_from_ts(ts, math.cos(mode.theta), sin_proj, m, a, careful=careful)
        out.append(_profiles_for_mode(mode, math.cos(mode.theta), amps, b, n))
    return out, limit_used


def _assemble(spec: LatticeSpec, src: SourceSpec, careful: bool = False) -> tuple[dict[Site, float], bool]:
    m, n, b = spec.m, spec.n, src.b
    profiles, limit_used = _all_mode_profiles(spec, src, careful=careful)

    # Per-mode merged interior profile rows (q = 1..n), one matrix per parity.
    prof_even = np.zeros((m, n))
    prof_odd = np.zeros((m, n))
    for j, prof in enumerate(profiles, start=1):
        if prof is None:
            continue
        row_e = [prof.even_I[q] if q <= b else prof.even_II[q - b] for q in range(1, n + 1)]
        row_o = [prof.odd_I[q] if q <= b else prof.odd_II[q - b] for q in range(1, n + 1)]
        prof_even[j - 1] = row_e
        prof_odd[j - 1] = row_o

    values: dict[Site, float] = {}
    for p in range(1, m + 1):
        prof = prof_even if p % 2 == 0 else prof_odd
        # Compensated (Kahan) accumulation over modes, ascending j.
        total = np.zeros(n)
        comp = np.zeros(n)
        for j in range(1, m + 1):
            term = math.sin(math.pi * j * p / (m + 1)) * prof[j - 1]
            y = term - comp
            t = total + y
            comp = (t - total) - y
            total = t
        for q in range(1, n + 1):
            values[Site(p, q)] = float(total[q - 1])
    return values, limit_used


def _field_residual(spec: LatticeSpec, src: SourceSpec, values: dict[Site, float]) -> float:
    """Max-abs residual of the six-neighbor equations (source term included)."""
    worst = 0.0
    for p in range(1, spec.m + 1):
        for q in range(1, spec.n + 1):
            s = Site(p, q)
            nb_sum = sum(values.get(t, 0.0) for t in neighbors(s))
            rhs = 6.0 if (p, q) == (src.a, src.b) else 0.0
            worst = max(worst, abs(6.0 * values[s] - nb_sum - rhs))
    return worst


def solve_exact(spec: LatticeSpec, src: SourceSpec) -> FieldSolution:
    """Assemble the closed-form visit-expectation field on the interior.

    Validates the assembled field against the defining difference equations;
    if the residual exceeds ``1e-9 * max|F|`` the per-mode amplitude products
    are re-evaluated in extended precision before giving up.
    """
    _require_exact_geometry(spec)
    require_interior_source(spec, src)

    values, limit_used = _assemble(spec, src)
    scale = max((abs(v) for v in values.values()), default=0.0)
    if scale > 0.0 and _field_residual(spec, src, values) > _RESIDUAL_REL * scale:
        values, limit_used = _assemble(spec, src, careful=True)
        resid = _field_residual(spec, src, values)
        if resid > _RESIDUAL_REL * max(abs(v) for v in values.values()):
            raise ArithmeticError(
                f"assembled field residual {resid:.3e} exceeds tolerance even "
                "after extended-precision amplitude evaluation"
            )
    return FieldSolution(spec, src, values, method="exact", limit_evaluated=limit_used)


def delta_identity_check(m: int, a: int) -> float:
    """Max deviation of the mode-sum reconstruction of a unit row impulse.

    Evaluates ``(2/(m+1)) * sum_j sin(theta_j a) sin(theta_j p)`` for every
    row ``p`` and returns the worst absolute deviation from the Kronecker
    delta at ``p = a``.
    """
    if not 1 <= a <= m:
        raise ValueError(f"need 1 <= a <= m, got a={a}, m={m}")
    worst = 0.0
    for p in range(1, m + 1):
        total = math.fsum(
            math.sin(math.pi * j * a / (m + 1)) * math.sin(math.pi * j * p / (m + 1))
            for j in range(1, m + 1)
        ) * 2.0 / (m + 1)
        expect = 1.0 if p == a else 0.0
        worst = max(worst, abs(total - expect))
    return worst


def absorption_map(sol: FieldSolution) -> AbsorptionMap:
    """Absorption probability at every boundary site.

    Each boundary site absorbs with probability one sixth of the summed
    visit expectations of its neighbors, counting non-interior neighbors
    as zero.  The recorded total equals 1 (to rounding) for any field that
    satisfies the defining equations exactly.
    """
    if sol.method not in ("exact", "oracle"):
        raise ValueError(f"absorption_map expects an exact or oracle field, got {sol.method!r}")
    probs: dict[Site, float] = {}
    for s in boundary_sites(sol.spec):
        probs[s] = math.fsum(sol.values.get(t, 0.0) for t in neighbors(s)) / 6.0
    total = math.fsum(probs.values())
    return AbsorptionMap(probs, total)
