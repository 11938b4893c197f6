"""Drive third-party MILP engines from an exported MPS file.

Two independent back ends are wired up: scipy's HiGHS interface and, when
cvxpy is installed, GLPK's integer solver.  Both consume only the bytes of
the MPS file (via the in-repo parser), so a solve cross-checks the export
path as well as the optimizer.
"""

from __future__ import annotations

import numpy as np
import scipy.sparse as sp

from .mps import ParsedMps, parse_mps

ENGINES = ("scipy", "glpk")


class ExternalSolveError(RuntimeError):
    pass


def _solve_scipy(p: ParsedMps) -> np.ndarray:
    from scipy.optimize import Bounds, LinearConstraint, milp

    lb = np.full(p.A.shape[0], -np.inf)
    ub = np.full(p.A.shape[0], np.inf)
    for k, s in enumerate(p.senses):
        if s in ("<=", "="):
            ub[k] = p.rhs[k]
        if s in (">=", "="):
            lb[k] = p.rhs[k]
    res = milp(
        c=p.c_min,
        constraints=[LinearConstraint(p.A, lb, ub)] if p.A.shape[0] else [],
        integrality=p.integrality.astype(int),
        bounds=Bounds(p.lo, p.hi),
        options={"mip_rel_gap": 0.0},
    )
    if res.status == 2:
        raise ExternalSolveError("scipy/HiGHS: infeasible")
    if res.status != 0 or res.x is None:
        raise ExternalSolveError(f"scipy/HiGHS failed: {res.message}")
    return res.x


def _solve_glpk(p: ParsedMps) -> np.ndarray:
    try:
        import cvxpy as cp
    except ImportError as exc:  # pragma: no cover - optional dependency
        raise ExternalSolveError("cvxpy is not installed; cannot use the glpk engine") from exc

    n = p.A.shape[1]
    int_idx = np.nonzero(p.integrality)[0]
    cont_idx = np.nonzero(~p.integrality)[0]
    parts = []
    cols = []
    if len(int_idx):
        xi = cp.Variable(len(int_idx), integer=True)
        parts.append((int_idx, xi))
    if len(cont_idx):
        xc = cp.Variable(len(cont_idx))
        parts.append((cont_idx, xc))
    exprs = 0
    for idx, var in parts:
        sel = sp.csr_matrix(
            (np.ones(len(idx)), (idx, np.arange(len(idx)))), shape=(n, len(idx))
        )
        exprs = exprs + sel @ var
    x = exprs
    cons = []
    for idx, var in parts:
        cons.append(var >= p.lo[idx])
        fin = np.isfinite(p.hi[idx])
        if fin.any():
            cons.append(var[np.nonzero(fin)[0]] <= p.hi[idx][fin])
    if p.A.shape[0]:
        Ax = p.A @ x
        le = [k for k, s in enumerate(p.senses) if s == "<="]
        ge = [k for k, s in enumerate(p.senses) if s == ">="]
        eq = [k for k, s in enumerate(p.senses) if s == "="]
        if le:
            cons.append(Ax[le] <= p.rhs[le])
        if ge:
            cons.append(Ax[ge] >= p.rhs[ge])
        if eq:
            cons.append(Ax[eq] == p.rhs[eq])
    prob = cp.Problem(cp.Minimize(p.c_min @ x), cons)
    prob.solve(solver=cp.GLPK_MI)
    if prob.status not in ("optimal", "optimal_inaccurate"):
        raise ExternalSolveError(f"GLPK_MI status: {prob.status}")
    xv = np.zeros(n)
    for idx, var in parts:
        xv[idx] = np.asarray(var.value).reshape(-1)
    return xv


def solve_mps(path, engine: str = "scipy") -> tuple[dict[str, float], float]:
    """Solve an MPS file; returns ({name: value}, minimization objective)."""
    if engine not in ENGINES:
        raise ValueError(f"unknown engine {engine!r}; pick one of {ENGINES}")
    p = parse_mps(path)
    x = _solve_scipy(p) if engine == "scipy" else _solve_glpk(p)
    x = np.asarray(x, dtype=float)
    xi = x.copy()
    xi[p.integrality] = np.round(xi[p.integrality])
    values = {name: float(v) for name, v in zip(p.col_names, xi)}
    return values, float(p.c_min @ xi)
