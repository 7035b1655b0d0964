"""Ground-truth computations: dense direct solve and the Boolean product.

The dense solve is the reference every iterative result is compared against,
so it goes through LAPACK's partial-pivoting LU (plus one step of iterative
refinement) rather than any iterative scheme of our own.
"""

from __future__ import annotations

import numpy as np

from .errors import DimensionMismatch, SingularSystem, SizeGuard
from .graph import WeightedGraph, induced_flow, laplacian_dense, validate_instance

SIZE_GUARD_N = 2000
RESIDUAL_TOL = 1e-9


def dense_solve(graph: WeightedGraph, b, root: int = 0) -> np.ndarray:
    """Solve Lp = b exactly (to rounding), gauge-fixed to p(root) = 0.

    The root row/column is deleted to remove the all-ones null space; the
    reduced system is positive definite for a connected graph.  The residual
    ||Lp - b||_inf must come out below 1e-9 * ||b||_inf, otherwise
    SingularSystem is raised (which normally signals a disconnection bug).
    """
    if graph.n > SIZE_GUARD_N:
        raise SizeGuard(f"dense oracle limited to n <= {SIZE_GUARD_N}, got {graph.n}")
    graph, b = validate_instance(graph, b)
    n = graph.n
    if n == 1:
        return np.zeros(1, dtype=np.float64)
    L = laplacian_dense(graph)
    keep = np.arange(n) != root
    Lr = L[np.ix_(keep, keep)]
    br = b[keep]
    try:
        x = np.linalg.solve(Lr, br)
        x += np.linalg.solve(Lr, br - Lr @ x)   # one refinement step
    except np.linalg.LinAlgError as exc:
        raise SingularSystem(str(exc)) from exc
    p = np.zeros(n, dtype=np.float64)
    p[keep] = x
    resid = float(np.abs(L @ p - b).max())
    scale = float(np.abs(b).max())
    if resid > RESIDUAL_TOL * scale:
        raise SingularSystem(
            f"residual {resid:g} exceeds {RESIDUAL_TOL:g} * ||b||_inf = {RESIDUAL_TOL * scale:g}")
    return p


def electrical_flow(graph: WeightedGraph, b, root: int = 0) -> np.ndarray:
    """The energy-minimizing b-flow, via the exact potentials."""
    return induced_flow(graph, dense_solve(graph, b, root))


def boolean_vmv(M, u, v) -> int:
    """u^T M v over the Boolean semiring (OR-of-ANDs); returns 0 or 1."""
    M = np.asarray(M).astype(bool)
    u = np.asarray(u).astype(bool)
    v = np.asarray(v).astype(bool)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise DimensionMismatch(f"matrix must be square, got shape {M.shape}")
    n = M.shape[0]
    if u.shape != (n,) or v.shape != (n,):
        raise DimensionMismatch(
            f"vector shapes {u.shape}, {v.shape} do not match matrix size {n}")
    return int(np.any(M[np.ix_(u, v)]))
