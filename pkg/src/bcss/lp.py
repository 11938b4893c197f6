"""Bounded-variable primal simplex for dense linear programs.

Small-instance engine used for relaxations inside branch and bound and for
cross-checking the scipy backend.  Two phases: artificial variables drive the
initial basis to feasibility, then the real objective is optimized.  Dantzig
pricing with a Bland's-rule fallback guards against cycling; all ties break
on the lowest column index so runs are reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"
ITERATION_LIMIT = "iteration_limit"

_INF = float("inf")


@dataclass
class LpResult:
    status: str
    x: np.ndarray | None = None
    objective: float | None = None
    duals: np.ndarray | None = None
    infeasible_rows: list[int] = field(default_factory=list)
    ray_var: int | None = None  # entering column certifying unboundedness
    iterations: int = 0


class _Simplex:
    def __init__(self, A, senses, rhs, c, lo, hi, feas_tol, max_iter):
        self.m, self.n = A.shape
        self.feas_tol = feas_tol
        self.max_iter = max_iter
        m, n = self.m, self.n
        # columns: structurals | slacks | artificials
        self.A = np.zeros((m, n + 2 * m))
        self.A[:, :n] = A
        self.lo = np.concatenate([lo, np.zeros(m), np.zeros(m)])
        self.hi = np.concatenate([hi, np.zeros(m), np.full(m, _INF)])
        for k, sense in enumerate(senses):
            self.A[k, n + k] = 1.0
            if sense == "<=":
                self.hi[n + k] = _INF
            elif sense == ">=":
                self.lo[n + k] = -_INF
            elif sense != "=":
                raise ValueError(f"bad sense {sense!r}")
        self.rhs = np.asarray(rhs, dtype=float)
        # nonbasic start: every non-artificial at a finite bound
        self.val = np.zeros(n + 2 * m)
        for j in range(n + m):
            self.val[j] = self.lo[j] if self.lo[j] > -_INF else self.hi[j]
        resid = self.rhs - self.A[:, : n + m] @ self.val[: n + m]
        signs = np.where(resid >= 0, 1.0, -1.0)
        for k in range(m):
            self.A[k, n + m + k] = signs[k]
        self.basis = list(range(n + m, n + 2 * m))
        self.in_basis = np.zeros(n + 2 * m, dtype=bool)
        self.in_basis[self.basis] = True
        self.B_inv = np.diag(signs)  # inverse of the signed artificial basis
        self.xB = np.abs(resid)
        self.iterations = 0

    def _refresh(self):
        m = self.m
        B = self.A[:, self.basis]
        self.B_inv = np.linalg.inv(B)
        nb = ~self.in_basis
        self.xB = self.B_inv @ (self.rhs - self.A[:, nb] @ self.val[nb])

    def run_phase(self, c_full, allow_cols) -> tuple[str, int | None]:
        """Optimize c_full over eligible columns; returns (status, ray column)."""
        m = self.m
        tol = self.feas_tol
        degenerate_run = 0
        bland = False
        while True:
            if self.iterations >= self.max_iter:
                return ITERATION_LIMIT, None
            self.iterations += 1
            if self.iterations % 512 == 0:
                self._refresh()
            y = c_full[self.basis] @ self.B_inv
            d = c_full - y @ self.A
            cand = None
            cand_score = 0.0
            for j in range(self.A.shape[1]):
                if self.in_basis[j] or not allow_cols[j]:
                    continue
                if self.hi[j] - self.lo[j] <= tol and self.lo[j] > -_INF:
                    continue  # fixed variable can never improve
                at_lo = self.val[j] <= self.lo[j] + tol
                if at_lo and d[j] > 1e-9:
                    score = d[j]
                elif not at_lo and d[j] < -1e-9:
                    score = -d[j]
                else:
                    continue
                if bland:
                    cand = j
                    break
                if score > cand_score + 1e-12:
                    cand, cand_score = j, score
            if cand is None:
                return OPTIMAL, None
            j = cand
            sigma = 1.0 if self.val[j] <= self.lo[j] + tol else -1.0
            w = self.B_inv @ self.A[:, j]
            theta = self.hi[j] - self.lo[j]  # bound flip distance
            leave = -1
            leave_to = 0.0
            for i in range(m):
                wi = sigma * w[i]
                bi = self.basis[i]
                if wi > tol:
                    if self.lo[bi] <= -_INF:
                        continue
                    ti = (self.xB[i] - self.lo[bi]) / wi
                    target = self.lo[bi]
                elif wi < -tol:
                    if self.hi[bi] >= _INF:
                        continue
                    ti = (self.xB[i] - self.hi[bi]) / wi
                    target = self.hi[bi]
                else:
                    continue
                ti = max(ti, 0.0)
                if ti < theta - 1e-12 or (
                    ti < theta + 1e-12 and leave >= 0 and abs(wi) > abs(sigma * w[leave]) + 1e-12
                ):
                    theta = ti
                    leave = i
                    leave_to = target
            if theta >= _INF:
                return UNBOUNDED, j
            if theta <= tol:
                degenerate_run += 1
                if degenerate_run > 16 * (m + 1):
                    bland = True
            else:
                degenerate_run = 0
                bland = False
            self.xB = self.xB - sigma * theta * w
            if leave < 0:
                # bound flip; basis unchanged
                self.val[j] = self.hi[j] if sigma > 0 else self.lo[j]
                continue
            out = self.basis[leave]
            self.val[out] = leave_to
            self.in_basis[out] = False
            self.val[j] = self.val[j] + sigma * theta
            self.basis[leave] = j
            self.in_basis[j] = True
            self.xB[leave] = self.val[j]
            # elementary update of B_inv
            piv = w[leave]
            row = self.B_inv[leave] / piv
            self.B_inv -= np.outer(w, row)
            self.B_inv[leave] = row

    def solve(self, c) -> LpResult:
        m, n = self.m, self.n
        ncols = n + 2 * m
        allow = np.ones(ncols, dtype=bool)
        # phase 1: drive artificials to zero
        c1 = np.zeros(ncols)
        c1[n + m:] = -1.0
        status, _ = self.run_phase(c1, allow)
        if status == ITERATION_LIMIT:
            return LpResult(ITERATION_LIMIT, iterations=self.iterations)
        self._refresh()
        art_sum = 0.0
        bad_rows = []
        for i, bi in enumerate(self.basis):
            if bi >= n + m and self.xB[i] > self.feas_tol * 10:
                art_sum += self.xB[i]
                bad_rows.append(bi - n - m)
        for j in range(n + m, ncols):
            if not self.in_basis[j] and self.val[j] > self.feas_tol * 10:
                art_sum += self.val[j]
                bad_rows.append(j - n - m)
        if art_sum > self.feas_tol * 100 * max(1.0, float(np.abs(self.rhs).max(initial=1.0))):
            return LpResult(
                INFEASIBLE, infeasible_rows=sorted(set(bad_rows)), iterations=self.iterations
            )
        # pin artificials at zero for phase 2
        self.hi[n + m:] = 0.0
        c2 = np.zeros(ncols)
        c2[:n] = c
        status, ray_var = self.run_phase(c2, allow)
        if status == ITERATION_LIMIT:
            return LpResult(ITERATION_LIMIT, iterations=self.iterations)
        self._refresh()
        x_full = self.val.copy()
        for i, bi in enumerate(self.basis):
            x_full[bi] = self.xB[i]
        x = x_full[:n]
        if status == UNBOUNDED:
            return LpResult(UNBOUNDED, ray_var=ray_var, iterations=self.iterations)
        y = c2[self.basis] @ self.B_inv
        return LpResult(
            OPTIMAL,
            x=x,
            objective=float(c @ x),
            duals=y,
            iterations=self.iterations,
        )


def solve_lp(A, senses, rhs, c, lo, hi, feas_tol=1e-7, max_iter=200000) -> LpResult:
    """Maximize c @ x subject to A x (sense) rhs and lo <= x <= hi."""
    A = np.atleast_2d(np.asarray(A, dtype=float))
    c = np.asarray(c, dtype=float)
    lo = np.asarray(lo, dtype=float)
    hi = np.asarray(hi, dtype=float)
    if A.size == 0 or A.shape[0] == 0:
        # pure box problem: pick the best bound per coefficient sign
        x = np.where(c > 0, hi, lo)
        x = np.where(np.isfinite(x), x, np.where(c > 0, lo, hi))
        if np.any(~np.isfinite(x) & (c != 0)):
            return LpResult(UNBOUNDED, ray_var=int(np.argmax(~np.isfinite(x))))
        x = np.where(np.isfinite(x), x, 0.0)
        return LpResult(OPTIMAL, x=x, objective=float(c @ x), duals=np.zeros(0))
    return _Simplex(A, list(senses), rhs, c, lo, hi, feas_tol, max_iter).solve(c)
