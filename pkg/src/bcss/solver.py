"""Exact solver: LP relaxations plus best-bound branch and bound.

The model is flattened into a canonical column/row form once; branch and
bound then works purely on bound vectors.  Relaxations go through either the
in-repo bounded simplex (small instances) or scipy's HiGHS backend (large
ones); both are deterministic, so repeated runs of the same instance visit
identical trees.
"""

from __future__ import annotations

import heapq
import math
import time
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp
from scipy.optimize import linprog

from . import lp as _lp
from .model import LinearConstraint, MilpModel
from .solution import Solution

OPTIMAL = "Optimal"
FEASIBLE = "Feasible"
INFEASIBLE = "Infeasible"
TIME_LIMIT = "TimeLimit"

# above this many dense-tableau cells the scipy backend takes over in 'auto' mode
_AUTO_CELL_LIMIT = 1_000_000


class SolverError(RuntimeError):
    pass


class UnboundedModelError(SolverError):
    """All model variables are boxed, so an unbounded ray means a build bug."""


@dataclass
class SolveOptions:
    time_limit: float = 300.0
    gap_tolerance: float = 0.0
    integrality_tolerance: float = 1e-6
    feasibility_tolerance: float = 1e-7
    branching_rule: str = "most-fractional"  # or "pseudo-cost"
    node_order: str = "best-bound"           # or "depth-first"
    seed: int = 0
    lp_engine: str = "auto"                  # 'auto' | 'simplex' | 'scipy'
    max_nodes: int | None = None

    def __post_init__(self):
        if self.gap_tolerance < 0:
            raise ValueError("gap_tolerance must be >= 0")
        if self.integrality_tolerance <= 0 or self.feasibility_tolerance <= 0:
            raise ValueError("tolerances must be positive")
        if self.branching_rule not in ("most-fractional", "pseudo-cost"):
            raise ValueError(f"unknown branching_rule {self.branching_rule!r}")
        if self.node_order not in ("best-bound", "depth-first"):
            raise ValueError(f"unknown node_order {self.node_order!r}")
        if self.lp_engine not in ("auto", "simplex", "scipy"):
            raise ValueError(f"unknown lp_engine {self.lp_engine!r}")


@dataclass
class CanonicalLp:
    names: list[str]
    lo: np.ndarray
    hi: np.ndarray
    objective: np.ndarray           # maximize
    integrality: np.ndarray         # bool mask
    A: sp.csr_matrix
    senses: list[str]
    rhs: np.ndarray
    row_names: list[str]
    row_tags: list[str]

    @property
    def n(self) -> int:
        return len(self.names)

    @property
    def m(self) -> int:
        return len(self.rhs)


def canonicalize(model: MilpModel, extra_rows: list[LinearConstraint] | None = None) -> CanonicalLp:
    """Flatten a model (plus optional extra rows) into array form."""
    n = model.n_vars
    lo = np.array([v.lo for v in model.variables])
    hi = np.array([v.hi for v in model.variables])
    integrality = np.array([v.kind != "continuous" for v in model.variables])
    # integer boxes are tightened to their integer hull once, up front
    lo[integrality] = np.ceil(lo[integrality] - 1e-9)
    hi[integrality] = np.floor(hi[integrality] + 1e-9)
    c = np.zeros(n)
    for i, coef in model.objective.items():
        c[i] = coef
    rows = list(model.constraints) + list(extra_rows or [])
    data, ri, ci = [], [], []
    seen = set()
    for k, row in enumerate(rows):
        for i, coef in row.coeffs.items():
            if (k, i) in seen:
                raise SolverError(f"duplicate entry in row {row.name}")
            seen.add((k, i))
            ri.append(k)
            ci.append(i)
            data.append(coef)
    A = sp.csr_matrix((data, (ri, ci)), shape=(len(rows), n))
    return CanonicalLp(
        names=[v.name for v in model.variables],
        lo=lo,
        hi=hi,
        objective=c,
        integrality=integrality,
        A=A,
        senses=[r.sense for r in rows],
        rhs=np.array([r.rhs for r in rows]),
        row_names=[r.name for r in rows],
        row_tags=[r.tag for r in rows],
    )


@dataclass
class LpRelaxResult:
    status: str                      # 'optimal' | 'infeasible' | 'unbounded'
    x: np.ndarray | None = None
    objective: float | None = None
    duals: np.ndarray | None = None  # row multipliers at the optimum
    infeasible_rows: list[str] = field(default_factory=list)


def _pick_engine(canon: CanonicalLp, engine: str) -> str:
    if engine != "auto":
        return engine
    cells = canon.m * (canon.n + 2 * canon.m)  # dense two-phase tableau size
    return "simplex" if cells <= _AUTO_CELL_LIMIT else "scipy"


def solve_lp_relaxation(
    canon: CanonicalLp,
    lo: np.ndarray | None = None,
    hi: np.ndarray | None = None,
    engine: str = "auto",
    feas_tol: float = 1e-7,
) -> LpRelaxResult:
    """Maximize the relaxation under (possibly branched) bounds."""
    lo = canon.lo if lo is None else lo
    hi = canon.hi if hi is None else hi
    if np.any(lo > hi):
        return LpRelaxResult("infeasible")
    engine = _pick_engine(canon, engine)
    if engine == "simplex":
        res = _lp.solve_lp(
            canon.A.toarray(), canon.senses, canon.rhs, canon.objective, lo, hi,
            feas_tol=feas_tol,
        )
        if res.status == _lp.OPTIMAL:
            return LpRelaxResult("optimal", res.x, res.objective, duals=res.duals)
        if res.status == _lp.INFEASIBLE:
            return LpRelaxResult(
                "infeasible",
                infeasible_rows=[canon.row_names[k] for k in res.infeasible_rows],
            )
        if res.status == _lp.UNBOUNDED:
            raise UnboundedModelError(
                f"LP relaxation unbounded along column {canon.names[res.ray_var]}; "
                "model variables should all be boxed"
            )
        raise SolverError("simplex iteration limit reached")
    # scipy backend minimizes, and wants <= / = split
    le = [k for k, s in enumerate(canon.senses) if s == "<="]
    ge = [k for k, s in enumerate(canon.senses) if s == ">="]
    eq = [k for k, s in enumerate(canon.senses) if s == "="]
    A_ub = sp.vstack([canon.A[le], -canon.A[ge]]) if le or ge else None
    b_ub = np.concatenate([canon.rhs[le], -canon.rhs[ge]]) if le or ge else None
    A_eq = canon.A[eq] if eq else None
    b_eq = canon.rhs[eq] if eq else None
    res = linprog(
        -canon.objective,
        A_ub=A_ub,
        b_ub=b_ub,
        A_eq=A_eq,
        b_eq=b_eq,
        bounds=np.column_stack([lo, hi]),
        method="highs",
    )
    if res.status == 0:
        duals = np.zeros(canon.m)
        if res.ineqlin is not None and len(le) + len(ge) > 0:
            marg = np.asarray(res.ineqlin.marginals)
            for pos, k in enumerate(le):
                duals[k] = -marg[pos]
            for pos, k in enumerate(ge):
                duals[k] = marg[len(le) + pos]
        if res.eqlin is not None and eq:
            marg = np.asarray(res.eqlin.marginals)
            for pos, k in enumerate(eq):
                duals[k] = -marg[pos]
        return LpRelaxResult("optimal", res.x, float(-res.fun), duals=duals)
    if res.status == 2:
        return LpRelaxResult("infeasible", infeasible_rows=_elastic_rows(canon, lo, hi))
    if res.status == 3:  # pragma: no cover - boxed models cannot be unbounded
        raise UnboundedModelError("LP relaxation reported unbounded by scipy")
    raise SolverError(f"scipy linprog failed: {res.message}")


def _elastic_rows(canon: CanonicalLp, lo, hi) -> list[str]:
    """Rows that stay violated when total violation is minimized."""
    m, n = canon.m, canon.n
    eye = sp.eye(m, format="csr")
    A = sp.hstack([canon.A, eye, -eye], format="csr")
    c = np.concatenate([np.zeros(n), np.ones(2 * m)])
    lo2 = np.concatenate([lo, np.zeros(2 * m)])
    hi2 = np.concatenate([hi, np.full(2 * m, np.inf)])
    le = [k for k, s in enumerate(canon.senses) if s == "<="]
    ge = [k for k, s in enumerate(canon.senses) if s == ">="]
    eq = [k for k, s in enumerate(canon.senses) if s == "="]
    # surplus column relaxes <=, deficit relaxes >=: forbid the useless one
    for k in le:
        hi2[n + m + k] = 0.0
    for k in ge:
        hi2[n + k] = 0.0
    A_ub = sp.vstack([A[le], -A[ge]]) if le or ge else None
    b_ub = np.concatenate([canon.rhs[le], -canon.rhs[ge]]) if le or ge else None
    res = linprog(
        c,
        A_ub=A_ub,
        b_ub=b_ub,
        A_eq=A[eq] if eq else None,
        b_eq=canon.rhs[eq] if eq else None,
        bounds=np.column_stack([lo2, hi2]),
        method="highs",
    )
    if res.status != 0:
        return []
    z = res.x[n:]
    viol = z[:m] + z[m:]
    return [canon.row_names[k] for k in np.nonzero(viol > 1e-6)[0]]


@dataclass
class MilpSolution:
    status: str
    values: dict[str, float]
    objective: float | None
    bound: float
    node_count: int
    wall_time: float
    gap: float = math.inf
    infeasible_rows: list[str] = field(default_factory=list)

    def to_solution(self, model: MilpModel) -> Solution:
        sol = Solution.zeros(model.scenario, model.tsn.arcs)
        for name, val in self.values.items():
            sol.set_value(name, val)
        return sol


def _gap(objective: float | None, bound: float) -> float:
    if objective is None:
        return math.inf
    return abs(bound - objective) / max(1.0, abs(objective))


def _fractional(x, integrality, tol):
    frac = np.where(integrality, np.abs(x - np.round(x)), 0.0)
    frac[frac <= tol] = 0.0
    return frac


def solve_bnb(
    model: MilpModel,
    options: SolveOptions | None = None,
    canon: CanonicalLp | None = None,
    incumbent: tuple[np.ndarray, float] | None = None,
) -> MilpSolution:
    """Branch and bound to the requested gap; deterministic for fixed options.

    `incumbent` is an optional warm-start (values vector, objective) coming
    from the greedy scheduler; it prunes but is never assumed optimal.
    """
    opts = options or SolveOptions()
    canon = canon or canonicalize(model)
    t0 = time.monotonic()
    best_x = None
    best_obj = -math.inf
    if incumbent is not None:
        best_x = np.asarray(incumbent[0], dtype=float).copy()
        best_obj = float(incumbent[1])

    root = solve_lp_relaxation(
        canon, engine=opts.lp_engine, feas_tol=opts.feasibility_tolerance
    )
    node_count = 1
    if root.status == "infeasible":
        return MilpSolution(
            INFEASIBLE, {}, None, -math.inf, node_count,
            time.monotonic() - t0, infeasible_rows=root.infeasible_rows,
        )

    # pseudo-cost state (per variable, up/down); seeded with |objective| coefs
    pc_sum = np.abs(np.tile(canon.objective, (2, 1))) + 1e-6
    pc_cnt = np.ones((2, canon.n))

    def pick_branch_var(x):
        frac = _fractional(x, canon.integrality, opts.integrality_tolerance)
        if opts.branching_rule == "most-fractional":
            dist = np.minimum(x - np.floor(x), np.ceil(x) - x)
            dist[frac == 0.0] = -1.0
            return int(np.argmax(dist))
        score = (pc_sum[0] / pc_cnt[0]) * (x - np.floor(x)) + (
            pc_sum[1] / pc_cnt[1]
        ) * (np.ceil(x) - x)
        score = np.where(frac > 0, score, -1.0)
        return int(np.argmax(score))

    # heap entries: (-bound, seq, depth, lo, hi)
    seq = 0
    heap: list = []
    depth_stack: list = []

    def push(bound, depth, lo, hi):
        nonlocal seq
        seq += 1
        item = (-bound, seq, depth, lo, hi)
        if opts.node_order == "best-bound":
            heapq.heappush(heap, item)
        else:
            depth_stack.append(item)

    def pop():
        if opts.node_order == "best-bound":
            return heapq.heappop(heap)
        return depth_stack.pop()

    def open_bound():
        if best_obj > -math.inf and not heap and not depth_stack:
            return best_obj
        if opts.node_order == "best-bound":
            return -heap[0][0] if heap else -math.inf
        return max((-it[0] for it in depth_stack), default=-math.inf)

    push(root.objective, 0, canon.lo.copy(), canon.hi.copy())
    node_lp = {seq: root}
    status = OPTIMAL
    pruned_bound = -math.inf  # strongest bound discarded under the gap slack

    while heap or depth_stack:
        if time.monotonic() - t0 > opts.time_limit:
            status = TIME_LIMIT
            break
        if opts.max_nodes is not None and node_count >= opts.max_nodes:
            status = FEASIBLE
            break
        neg_bound, node_seq, depth, lo, hi = pop()
        bound = -neg_bound
        res = node_lp.pop(node_seq, None)
        if bound <= best_obj + opts.gap_tolerance * max(1.0, abs(best_obj)):
            pruned_bound = max(pruned_bound, bound)
            continue
        if res is None:
            res = solve_lp_relaxation(
                canon, lo, hi, engine=opts.lp_engine, feas_tol=opts.feasibility_tolerance
            )
            node_count += 1
            if res.status == "infeasible":
                continue
            bound = min(bound, res.objective)
            if bound <= best_obj + opts.gap_tolerance * max(1.0, abs(best_obj)):
                pruned_bound = max(pruned_bound, bound)
                continue
        x = res.x
        frac = _fractional(x, canon.integrality, opts.integrality_tolerance)
        if not np.any(frac > 0):
            xi = x.copy()
            xi[canon.integrality] = np.round(xi[canon.integrality])
            obj = float(canon.objective @ xi)
            if obj > best_obj:
                best_obj = obj
                best_x = xi
            continue
        j = pick_branch_var(x)
        fl = math.floor(x[j] + opts.integrality_tolerance)
        # down child
        for child, (clo, chi) in (
            ("down", (lo.copy(), hi.copy())),
            ("up", (lo.copy(), hi.copy())),
        ):
            if child == "down":
                chi[j] = fl
            else:
                clo[j] = fl + 1
            if clo[j] > chi[j]:
                continue
            cres = solve_lp_relaxation(
                canon, clo, chi, engine=opts.lp_engine, feas_tol=opts.feasibility_tolerance
            )
            node_count += 1
            if cres.status == "infeasible":
                continue
            drop = max(0.0, res.objective - cres.objective)
            side = 0 if child == "down" else 1
            step = (x[j] - fl) if child == "down" else (fl + 1 - x[j])
            if step > opts.integrality_tolerance:
                pc_sum[side, j] += drop / step
                pc_cnt[side, j] += 1
            if cres.objective <= best_obj + opts.gap_tolerance * max(1.0, abs(best_obj)):
                pruned_bound = max(pruned_bound, cres.objective)
                continue
            push(cres.objective, depth + 1, clo, chi)
            node_lp[seq] = cres
        # opportunistic gap check
        if best_obj > -math.inf:
            if _gap(best_obj, max(open_bound(), best_obj)) <= opts.gap_tolerance:
                break

    final_bound = max(open_bound(), pruned_bound)
    if best_obj > -math.inf:
        final_bound = max(final_bound, best_obj)
    wall = time.monotonic() - t0
    if best_x is None:
        if status in (TIME_LIMIT, FEASIBLE):
            return MilpSolution(status, {}, None, final_bound, node_count, wall)
        return MilpSolution(INFEASIBLE, {}, None, -math.inf, node_count, wall)
    gap = _gap(best_obj, final_bound)
    if status == OPTIMAL and gap > opts.gap_tolerance + 1e-12:
        status = FEASIBLE
    values = {
        name: (round(v) if canon.integrality[i] else float(v))
        for i, (name, v) in enumerate(zip(canon.names, best_x))
    }
    return MilpSolution(status, values, best_obj, final_bound, node_count, wall, gap)
