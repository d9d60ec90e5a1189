"""Zig-zag lattice coordinates, six-neighbor adjacency, and site classification.

Sites of the triangular lattice are labeled by integer pairs ``(p, q)`` with
rows ``p = 0..m+1`` and zig-zag columns ``q = 0..n+1``.  The ``m * n`` interior
sites (``1 <= p <= m``, ``1 <= q <= n``) support the walk; the four edge lines
``p in {0, m+1}`` and ``q in {0, n+1}`` absorb it.  Integer pairs beyond that
rectangle form a third class, Outside: they can show up in the neighbor lists
of boundary sites (corners in particular) and are treated as zero-field and
never visited.

Adjacency depends on the parity of ``p``.  The six neighbors are listed in a
fixed order shared by every engine in the package; the Monte Carlo sampler
indexes this order directly, which is what makes seeded runs reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import NamedTuple


class Site(NamedTuple):
    """A lattice vertex.  Even-p rows and odd-p rows form the two sublattices."""

    p: int
    q: int


class SiteClass(Enum):
    INTERIOR = "interior"
    BOUNDARY = "boundary"
    OUTSIDE = "outside"


class InvalidSource(ValueError):
    """The requested source site is not an interior site of the lattice."""


@dataclass(frozen=True)
class LatticeSpec:
    """Lattice dimensions: interior rows ``p = 1..m``, columns ``q = 1..n``."""

    m: int
    n: int

    def __post_init__(self) -> None:
        if self.m < 1 or self.n < 1:
            raise ValueError(f"lattice dimensions must be >= 1, got m={self.m}, n={self.n}")

    @property
    def interior_count(self) -> int:
        return self.m * self.n

    @property
    def boundary_count(self) -> int:
        return 2 * (self.n + 2) + 2 * self.m


@dataclass(frozen=True)
class SourceSpec:
    """Source coordinates ``(a, b)``; must classify as Interior on the lattice used."""

    a: int
    b: int


# Neighbor displacement tables, one per row parity, in the fixed order used
# throughout the package (and by the Monte Carlo step sampler).
EVEN_P_STEPS: tuple[tuple[int, int], ...] = (
    (-1, -1), (0, -1), (1, -1), (1, 0), (0, 1), (-1, 0),
)
ODD_P_STEPS: tuple[tuple[int, int], ...] = (
    (-1, 0), (0, -1), (1, 0), (1, 1), (0, 1), (-1, 1),
)


def neighbors(s: Site) -> tuple[Site, ...]:
    """Return the six neighbors of ``s`` in fixed order (parity-dependent)."""
    p, q = s
    steps = EVEN_P_STEPS if p % 2 == 0 else ODD_P_STEPS
    return tuple(Site(p + dp, q + dq) for dp, dq in steps)


def classify(spec: LatticeSpec, s: Site) -> SiteClass:
    """Classify ``s`` as Interior, Boundary, or Outside.

    Every integer pair lands in exactly one class: the interior rectangle,
    the four absorbing edge lines bounding it, or Outside.
    """
    p, q = s
    if 1 <= p <= spec.m and 1 <= q <= spec.n:
        return SiteClass.INTERIOR
    if p in (0, spec.m + 1) and 0 <= q <= spec.n + 1:
        return SiteClass.BOUNDARY
    if q in (0, spec.n + 1) and 1 <= p <= spec.m:
        return SiteClass.BOUNDARY
    return SiteClass.OUTSIDE


def boundary_sites(spec: LatticeSpec) -> list[Site]:
    """All boundary sites, each once, in deterministic order.

    Order: the ``p = 0`` column, then ``p = m+1``, then the ``q = 0`` row,
    then ``q = n+1``, each ascending in the running coordinate.
    """
    out: list[Site] = []
    for q in range(0, spec.n + 2):
        out.append(Site(0, q))
    for q in range(0, spec.n + 2):
        out.append(Site(spec.m + 1, q))
    for p in range(1, spec.m + 1):
        out.append(Site(p, 0))
    for p in range(1, spec.m + 1):
        out.append(Site(p, spec.n + 1))
    return out


def mirror_p(spec: LatticeSpec, s: Site) -> Site:
    """Reflect ``s`` across the central column: ``(p, q) -> (m+1-p, q)``.

    Requires odd ``m`` so that ``m+1`` is even and the reflection preserves
    row parity (and hence adjacency).
    """
    if spec.m % 2 == 0:
        raise ValueError("mirror_p requires odd m (parity-preserving reflection)")
    return Site(spec.m + 1 - s.p, s.q)


def require_interior_source(spec: LatticeSpec, src: SourceSpec) -> None:
    """Raise :class:`InvalidSource` unless ``src`` is an interior site."""
    if classify(spec, Site(src.a, src.b)) is not SiteClass.INTERIOR:
        raise InvalidSource(
            f"source ({src.a}, {src.b}) is not interior on the "
            f"{spec.m}x{spec.n} lattice (need 1 <= a <= m, 1 <= b <= n)"
        )
