"""Sparse linear-system ground truth for the visit-expectation field.

Writing the six-neighbor difference equations for all interior sites, with
boundary values fixed at zero and the source feeding a constant 6 into its
own row, gives a symmetric, irreducibly diagonally dominant system — one row
per interior site, diagonal 6, and -1 for every interior neighbor.  Solving
it is an engine-independent check on the closed form and works for any
lattice shape, including even ``m`` and ``m = 1`` where the closed form does
not apply.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .lattice import (
    LatticeSpec,
    Site,
    SourceSpec,
    neighbors,
    require_interior_source,
)
from .closed_form import FieldSolution

__all__ = ["LinearSystem", "IterationDivergence", "assemble", "solve_oracle", "row_index"]

# Direct sparse factorization up to this many unknowns; conjugate gradients above.
_DIRECT_LIMIT = 10_000
_RESIDUAL_MAX = 1e-12
_CG_MAXITER = 1_000_000


class IterationDivergence(ArithmeticError):
    """The iterative solve failed to reach the residual target."""


@dataclass(frozen=True)
class LinearSystem:
    """Assembled system: ``matrix @ x = rhs`` over interior sites."""

    dimension: int
    matrix: sp.csr_matrix
    rhs: np.ndarray


def row_index(spec: LatticeSpec, s: Site) -> int:
    """Fixed interior-site ordering: ``(q-1)*m + (p-1)``."""
    return (s.q - 1) * spec.m + (s.p - 1)


def assemble(spec: LatticeSpec, src: SourceSpec) -> LinearSystem:
    """Build the sparse system for the given lattice and source."""
    require_interior_source(spec, src)
    m, n = spec.m, spec.n
    dim = m * n
    rows: list[int] = []
    cols: list[int] = []
    vals: list[float] = []
    for q in range(1, n + 1):
        for p in range(1, m + 1):
            i = (q - 1) * m + (p - 1)
            rows.append(i)
            cols.append(i)
            vals.append(6.0)
            for t in neighbors(Site(p, q)):
                if 1 <= t.p <= m and 1 <= t.q <= n:
                    rows.append(i)
                    cols.append(row_index(spec, t))
                    vals.append(-1.0)
    matrix = sp.coo_matrix((vals, (rows, cols)), shape=(dim, dim)).tocsr()
    rhs = np.zeros(dim)
    rhs[row_index(spec, Site(src.a, src.b))] = 6.0
    return LinearSystem(dim, matrix, rhs)


def solve_oracle(spec: LatticeSpec, src: SourceSpec) -> FieldSolution:
    """Solve the assembled system and return the field tagged ``oracle``.

    Uses a direct sparse factorization up to 10^4 unknowns and conjugate
    gradients beyond; either way the result must satisfy the equations to a
    1e-12 max-norm residual or :class:`IterationDivergence` is raised.
    """
    system = assemble(spec, src)
    if system.dimension <= _DIRECT_LIMIT:
        x = spla.spsolve(system.matrix, system.rhs)
    else:
        x, info = spla.cg(
            system.matrix,
            system.rhs,
            rtol=1e-14,
            atol=1e-14,
            maxiter=_CG_MAXITER,
        )
        if info != 0:
            raise IterationDivergence(
                f"conjugate-gradient solve did not converge (info={info})"
            )
    residual = float(np.max(np.abs(system.matrix @ x - system.rhs)))
    if residual > _RESIDUAL_MAX:
        raise IterationDivergence(
            f"solution residual {residual:.3e} exceeds {_RESIDUAL_MAX:.0e}"
        )
    values = {
        Site(p, q): float(x[(q - 1) * spec.m + (p - 1)])
        for q in range(1, spec.n + 1)
        for p in range(1, spec.m + 1)
    }
    return FieldSolution(spec, src, values, method="oracle")
