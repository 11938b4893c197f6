"""Independent solution checking and exhaustive optimization of tiny instances.

Nothing here touches the model assembly: every relation is re-evaluated by
direct arithmetic on scenario data, with inventories replayed step by step.
`brute_force_optimum` enumerates all truck moves and transfer quantities via
dynamic programming over complete system states, which makes it a trustworthy
oracle for the branch-and-bound solver on desk-size instances.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .model import objective_components
from .network import build_tsn
from .scenario import Scenario
from .solution import Solution

FEAS_TOL = 1e-7
INT_TOL = 1e-6


@dataclass(frozen=True)
class Violation:
    tag: str
    where: str
    lhs: float
    rhs: float
    slack: float

    def describe(self) -> str:
        return f"{self.tag} at {self.where}: lhs={self.lhs:.9g} rhs={self.rhs:.9g} slack={self.slack:.3g}"


@dataclass
class ValidationReport:
    violations: list[Violation]
    components: tuple[float, float, float, float]
    verdict: bool = field(init=False)

    def __post_init__(self):
        self.verdict = not self.violations

    def by_tag(self) -> dict[str, list[Violation]]:
        out: dict[str, list[Violation]] = {}
        for v in self.violations:
            out.setdefault(v.tag, []).append(v)
        return out

    def to_json(self) -> str:
        return json.dumps(
            {
                "verdict": "pass" if self.verdict else "fail",
                "components": {
                    "logistics": self.components[0],
                    "swaps": self.components[1],
                    "depot": self.components[2],
                    "total": self.components[3],
                },
                "violations": [
                    {"tag": v.tag, "where": v.where, "lhs": v.lhs, "rhs": v.rhs, "slack": v.slack}
                    for v in self.violations
                ],
            },
            indent=1,
        )

    def to_table(self) -> str:
        lines = [
            f"verdict: {'pass' if self.verdict else 'fail'}",
            "components: logistics={:.6g} swaps={:.6g} depot={:.6g} total={:.6g}".format(
                *self.components
            ),
        ]
        for v in self.violations[:200]:
            lines.append("  " + v.describe())
        if len(self.violations) > 200:
            lines.append(f"  ... {len(self.violations) - 200} more")
        return "\n".join(lines)


class _Checker:
    def __init__(self, scenario: Scenario, sol: Solution, feas_tol=FEAS_TOL, int_tol=INT_TOL):
        self.s = scenario
        self.sol = sol
        self.feas_tol = feas_tol
        self.int_tol = int_tol
        self.violations: list[Violation] = []

    def bad(self, tag, where, lhs, rhs, slack):
        self.violations.append(Violation(tag, where, float(lhs), float(rhs), float(slack)))

    def le(self, tag, where, lhs, rhs):
        if lhs > rhs + self.feas_tol:
            self.bad(tag, where, lhs, rhs, lhs - rhs)

    def eq(self, tag, where, lhs, rhs):
        if abs(lhs - rhs) > self.feas_tol:
            self.bad(tag, where, lhs, rhs, abs(lhs - rhs))

    def integral(self, where, value):
        if abs(value - round(value)) > self.int_tol:
            self.bad("integrality", where, value, round(value), abs(value - round(value)))


def check_solution(scenario: Scenario, sol: Solution) -> ValidationReport:
    """Re-evaluate every constraint group against a candidate solution."""
    s = scenario
    T = s.horizon
    tsn = build_tsn(s.expanded, T)
    ck = _Checker(s, sol)
    arcs = sol.arcs or tsn.arcs
    K = len(arcs)
    travel = np.array([i != j for (i, j) in arcs])

    for w, tr in enumerate(s.trucks):
        C = tr.capacity
        label = f"truck {tr.id}"
        for k in range(K):
            for t in range(T):
                ck.integral(f"{label} arc{arcs[k]} t={t + 1}", sol.arc_choice[w, t, k])
        for t in range(T):
            step = f"{label} t={t + 1}"
            ck.eq("eq1", step, sol.arc_choice[w, t, :].sum(), 1.0)
            ck.eq("eq4", step, sol.moving[w, t], sol.arc_choice[w, t, travel].sum())
        out_init = sum(
            sol.arc_choice[w, 0, k] for k, (i, j) in enumerate(arcs) if i == tr.initial_node
        )
        ck.eq("eq2", label, out_init, 1.0)
        for node in [n.id for n in s.expanded.nodes]:
            into = [k for k, (i, j) in enumerate(arcs) if j == node]
            outof = [k for k, (i, j) in enumerate(arcs) if i == node]
            for t in range(T - 1):
                ck.eq(
                    "eq3",
                    f"{label} node {node} t={t + 1}",
                    sol.arc_choice[w, t, into].sum(),
                    sol.arc_choice[w, t + 1, outof].sum(),
                )
        # carry replay, recursions evaluated step by step
        db = wb = 0.0
        for t in range(T):
            step = f"{label} t={t + 1}"
            db = db + sol.load_db_bss[w, :, t].sum() - sol.unload_db_bcs[w, :, t].sum()
            wb = wb + sol.load_wb_bcs[w, :, t].sum() - sol.unload_wb_bss[w, :, t].sum()
            ck.eq("eq5", step, sol.truck_db[w, t], db)
            ck.eq("eq6", step, sol.truck_wb[w, t], wb)
            ck.le("eq7", step, sol.truck_db[w, t] + sol.truck_wb[w, t], C)
            ck.le("eq8", step + " db", sol.truck_db[w, t], C)
            ck.le("eq8", step + " db>=0", -sol.truck_db[w, t], 0.0)
            ck.le("eq8", step + " wb", sol.truck_wb[w, t], C)
            ck.le("eq8", step + " wb>=0", -sol.truck_wb[w, t], 0.0)
            ck.integral(step + " db", sol.truck_db[w, t])
            ck.integral(step + " wb", sol.truck_wb[w, t])
        ck.le("eq9", label + " db", sol.truck_db[w, T - 1], math.floor(C / 3))
        ck.le("eq9", label + " wb", sol.truck_wb[w, T - 1], math.floor(C / 3))
        for n, bss in enumerate(s.bss):
            park = arcs.index((bss.node, bss.node))
            for t in range(T):
                where = f"{label} station {bss.node} t={t + 1}"
                parked = sol.arc_choice[w, t, park]
                ck.le("eq10", where, sol.load_db_bss[w, n, t], C * parked)
                ck.le("eq10", where + " >=0", -sol.load_db_bss[w, n, t], 0.0)
                ck.le("eq11", where, sol.unload_wb_bss[w, n, t], C * parked)
                ck.le("eq11", where + " >=0", -sol.unload_wb_bss[w, n, t], 0.0)
                if t == 0:
                    ck.eq("eq12", where, sol.unload_wb_bss[w, n, t], 0.0)
                else:
                    ck.le("eq12", where, sol.unload_wb_bss[w, n, t], sol.truck_wb[w, t - 1])
                ck.integral(where + " ldb", sol.load_db_bss[w, n, t])
                ck.integral(where + " uwb", sol.unload_wb_bss[w, n, t])
        for m, bcs in enumerate(s.bcs):
            park = arcs.index((bcs.node, bcs.node))
            for t in range(T):
                where = f"{label} depot {bcs.node} t={t + 1}"
                parked = sol.arc_choice[w, t, park]
                ck.le("eq13", where, sol.load_wb_bcs[w, m, t], C * parked)
                ck.le("eq13", where + " >=0", -sol.load_wb_bcs[w, m, t], 0.0)
                ck.le("eq14", where, sol.unload_db_bcs[w, m, t], C * parked)
                ck.le("eq14", where + " >=0", -sol.unload_db_bcs[w, m, t], 0.0)
                if t == 0:
                    ck.eq("eq15", where, sol.unload_db_bcs[w, m, t], 0.0)
                else:
                    ck.le("eq15", where, sol.unload_db_bcs[w, m, t], sol.truck_db[w, t - 1])
                ck.integral(where + " lwb", sol.load_wb_bcs[w, m, t])
                ck.integral(where + " udb", sol.unload_db_bcs[w, m, t])

    for n, bss in enumerate(s.bss):
        label = f"station {bss.node}"
        db = float(bss.init_db)
        wb = float(bss.init_wb)
        prev_d = 0.0
        for t in range(T):
            where = f"{label} t={t + 1}"
            d = sol.swaps[n, t]
            ck.le("eq17", where + " lo", bss.min_departure[t], d)
            ck.le("eq17", where + " hi", d, bss.arrival[t])
            ck.le("eq18", where, prev_d, d)
            ck.eq("eq19", where, sol.bss_db_supplied[n, t], sol.load_db_bss[:, n, t].sum())
            ck.eq("eq20", where, sol.bss_wb_received[n, t], sol.unload_wb_bss[:, n, t].sum())
            db = db + (d - prev_d) - sol.bss_db_supplied[n, t]
            wb = wb - (d - prev_d) + sol.bss_wb_received[n, t]
            ck.eq("eq21", where, sol.bss_db_stock[n, t], db)
            ck.eq("eq22", where, sol.bss_wb_stock[n, t], wb)
            fleet_cap = sum(tr.capacity for tr in s.trucks)
            ck.le("eq23", where + " supd", sol.bss_db_supplied[n, t], fleet_cap)
            ck.le("eq23", where + " supd>=0", -sol.bss_db_supplied[n, t], 0.0)
            ck.le("eq23", where + " recw", sol.bss_wb_received[n, t], fleet_cap)
            ck.le("eq23", where + " recw>=0", -sol.bss_wb_received[n, t], 0.0)
            ck.le("eq23", where + " sdb", sol.bss_db_stock[n, t], bss.cap)
            ck.le("eq23", where + " sdb>=0", -sol.bss_db_stock[n, t], 0.0)
            ck.le("eq23", where + " swb", sol.bss_wb_stock[n, t], bss.cap)
            ck.le("eq23", where + " swb>=0", -sol.bss_wb_stock[n, t], 0.0)
            for name, arr in (
                ("dsw", sol.swaps), ("supd", sol.bss_db_supplied),
                ("recw", sol.bss_wb_received), ("sdb", sol.bss_db_stock),
                ("swb", sol.bss_wb_stock),
            ):
                ck.integral(f"{where} {name}", arr[n, t])
            prev_d = d
        eps = s.costs.terminal_band_packs
        ck.le("eq24", label + " hi", sol.bss_db_stock[n, T - 1], bss.init_db + eps)
        ck.le("eq24", label + " lo", bss.init_db - eps, sol.bss_db_stock[n, T - 1])
        ck.le("eq25", label + " hi", sol.bss_wb_stock[n, T - 1], bss.init_wb + eps)
        ck.le("eq25", label + " lo", bss.init_wb - eps, sol.bss_wb_stock[n, T - 1])

    c = s.costs
    for m, bcs in enumerate(s.bcs):
        label = f"depot {bcs.node}"
        busy = db = wb = 0.0
        cum_bin: list[float] = []
        cum_bout = 0.0
        energy = 0.0
        for t in range(T):
            where = f"{label} t={t + 1}"
            ck.eq("eq27", where, sol.bcs_db_received[m, t], sol.unload_db_bcs[:, m, t].sum())
            ck.eq("eq28", where, sol.bcs_wb_supplied[m, t], sol.load_wb_bcs[:, m, t].sum())
            bin_t = sol.piles_in[m, t]
            bout_t = sol.piles_out[m, t]
            back_t = sol.backup[m, t]
            prev_busy, prev_wb = busy, wb
            busy = busy + bin_t - bout_t
            db = db + back_t + sol.bcs_db_received[m, t] - bin_t
            wb = wb + bout_t - sol.bcs_wb_supplied[m, t]
            ck.eq("eq29", where, sol.piles_busy[m, t], busy)
            ck.eq("eq30", where, sol.bcs_db_stock[m, t], db)
            ck.eq("eq31", where, sol.bcs_wb_stock[m, t], wb)
            cum_bin.append((cum_bin[-1] if cum_bin else 0.0) + bin_t)
            cum_bout += bout_t
            lag = t + 1 - (bcs.t_c - 1)  # 1-indexed upper step of the entry window
            allowed = cum_bin[lag - 1] if lag >= 1 else 0.0
            ck.le("eq32", where, cum_bout, allowed)
            if t == 0:
                ck.eq("eq34", where, bout_t, 0.0)
                ck.eq("eq35", where, sol.bcs_wb_supplied[m, t], 0.0)
            else:
                ck.le("eq34", where, bout_t, prev_busy)
                ck.le("eq35", where, sol.bcs_wb_supplied[m, t], prev_wb)
            fleet_cap = sum(tr.capacity for tr in s.trucks)
            ck.le("eq33", where + " bin", bin_t, bcs.chargers)
            ck.le("eq33", where + " bin>=0", -bin_t, 0.0)
            ck.le("eq33", where + " bout", bout_t, bcs.chargers)
            ck.le("eq33", where + " bout>=0", -bout_t, 0.0)
            ck.le("eq33", where + " back", back_t, bcs.backup_cap)
            ck.le("eq33", where + " back>=0", -back_t, 0.0)
            ck.le("eq33", where + " recd", sol.bcs_db_received[m, t], fleet_cap)
            ck.le("eq33", where + " supw", sol.bcs_wb_supplied[m, t], fleet_cap)
            ck.le("eq33", where + " inch", sol.piles_busy[m, t], bcs.chargers)
            ck.le("eq33", where + " inch>=0", -sol.piles_busy[m, t], 0.0)
            ck.le("eq33", where + " cdb", sol.bcs_db_stock[m, t], bcs.db_cap)
            ck.le("eq33", where + " cdb>=0", -sol.bcs_db_stock[m, t], 0.0)
            ck.le("eq33", where + " cwb", sol.bcs_wb_stock[m, t], bcs.wb_cap)
            ck.le("eq33", where + " cwb>=0", -sol.bcs_wb_stock[m, t], 0.0)
            energy += sol.charge_power[m, t] * c.charge_efficiency * c.step_hours
            ck.eq("eq36", where, energy, c.battery_kwh * cum_bout)
            pmax = c.max_pile_kw * bcs.chargers * bcs.charge_enabled[t]
            ck.le("eq37", where, sol.charge_power[m, t], pmax)
            ck.le("eq37", where + " >=0", -sol.charge_power[m, t], 0.0)
            for name, arr in (
                ("recd", sol.bcs_db_received), ("supw", sol.bcs_wb_supplied),
                ("bin", sol.piles_in), ("bout", sol.piles_out), ("back", sol.backup),
                ("inch", sol.piles_busy), ("cdb", sol.bcs_db_stock), ("cwb", sol.bcs_wb_stock),
            ):
                ck.integral(f"{where} {name}", arr[m, t])

    comps = objective_components(s, sol)
    return ValidationReport(ck.violations, comps)


class SearchSpaceExceeded(RuntimeError):
    """The instance is too large for exhaustive enumeration."""


def brute_force_optimum(
    scenario: Scenario, state_cap: int = 10_000_000
) -> tuple[float | None, Solution | None]:
    """Exact optimum of a tiny instance by dynamic programming over full states.

    Returns (None, None) when the instance is infeasible.  Raises
    SearchSpaceExceeded rather than approximating once the number of explored
    transitions passes `state_cap`.
    """
    s = scenario
    T = s.horizon
    c = s.costs
    tsn = build_tsn(s.expanded, T)
    arcs = tsn.arcs
    out_by_node = {n.id: [arcs[k] for k in tsn.out_arcs[n.id]] for n in s.expanded.nodes}
    bss_idx = {b.node: k for k, b in enumerate(s.bss)}
    bcs_idx = {b.node: k for k, b in enumerate(s.bcs)}
    n_bss, n_bcs = len(s.bss), len(s.bcs)
    caps = [tr.capacity for tr in s.trucks]
    eps = c.terminal_band_packs
    work = 0

    def bump(k=1):
        nonlocal work
        work += k
        if work > state_cap:
            raise SearchSpaceExceeded(
                f"exhaustive search passed {state_cap} transitions; refusing to continue"
            )

    # state: (positions, tdb, twb, bss (db, wb, D), bcs (busy, db, wb, recent bins))
    init_state = (
        tuple(tr.initial_node for tr in s.trucks),
        tuple(0 for _ in s.trucks),
        tuple(0 for _ in s.trucks),
        tuple((b.init_db, b.init_wb, 0) for b in s.bss),
        tuple((0, 0, 0, (0,) * max(0, b.t_c - 2)) for b in s.bcs),
    )
    layer = {init_state: (0.0, None, None)}  # state -> (value, prev_state, decision)
    parents = [layer]

    for t in range(1, T + 1):
        nxt: dict = {}
        for state, (value, _, _) in layer.items():
            positions, tdb, twb, bss_state, bcs_state = state

            # enumerate per-truck (arc, load/unload) options
            def truck_options(w):
                pos = positions[w]
                C = caps[w]
                opts = []
                for (i, j) in out_by_node[pos]:
                    moving = i != j
                    if moving:
                        opts.append(((i, j), None, 0, 0, tdb[w], twb[w]))
                        continue
                    if i in bss_idx:
                        n = bss_idx[i]
                        max_u = 0 if t == 1 else min(twb[w], C)
                        for u in range(int(max_u) + 1):
                            wb_after = twb[w] - u
                            for l in range(C - tdb[w] - wb_after + 1):
                                opts.append(((i, j), ("bss", n), l, u, tdb[w] + l, wb_after))
                    elif i in bcs_idx:
                        m = bcs_idx[i]
                        max_u = 0 if t == 1 else min(tdb[w], C)
                        for u in range(int(max_u) + 1):
                            db_after = tdb[w] - u
                            for l in range(C - db_after - twb[w] + 1):
                                opts.append(((i, j), ("bcs", m), u, l, db_after, twb[w] + l))
                    else:  # parked at a plain real node
                        opts.append(((i, j), None, 0, 0, tdb[w], twb[w]))
                return opts

            per_truck = [truck_options(w) for w in range(len(s.trucks))]

            def rec_truck(w, acc, cost_acc):
                bump()
                if w == len(s.trucks):
                    expand_stations(acc, cost_acc)
                    return
                for opt in per_truck[w]:
                    (i, j), at, q1, q2, ndb, nwb = opt
                    cost = 0.0
                    if i != j:
                        cost -= c.travel_cost_per_step
                    cost -= c.labor_cost_per_pack * (q1 + q2)
                    rec_truck(w + 1, acc + [opt], cost_acc + cost)

            def expand_stations(truck_dec, cost_acc):
                # aggregate station flows from the chosen truck actions
                supd = [0] * n_bss
                recw = [0] * n_bss
                recd = [0] * n_bcs
                supw = [0] * n_bcs
                for (arc, at, q1, q2, _, _) in truck_dec:
                    if at is None:
                        continue
                    kind, idx = at
                    if kind == "bss":
                        supd[idx] += q1
                        recw[idx] += q2
                    else:
                        recd[idx] += q1
                        supw[idx] += q2

                # swap-station transitions: pick each station's served increment
                def rec_bss(n, bstates, cost2):
                    bump()
                    if n == n_bss:
                        rec_bcs(0, [], bstates, cost2)
                        return
                    bspec = s.bss[n]
                    db0, wb0, d0 = bss_state[n]
                    a_t = bspec.arrival[t - 1]
                    dmin_t = bspec.min_departure[t - 1]
                    for d_new in range(max(dmin_t, d0), a_t + 1):
                        inc = d_new - d0
                        db1 = db0 + inc - supd[n]
                        wb1 = wb0 - inc + recw[n]
                        if db1 < 0 or wb1 < 0 or db1 > bspec.cap or wb1 > bspec.cap:
                            continue
                        if t == T and (abs(db1 - bspec.init_db) > eps or abs(wb1 - bspec.init_wb) > eps):
                            continue
                        gain = c.swap_revenue_per_pack * inc
                        rec_bss(n + 1, bstates + [(db1, wb1, d_new)], cost2 + gain)

                # depot transitions: backup, pile entries/exits
                def rec_bcs(m, dstates, bstates, cost3):
                    bump()
                    if m == n_bcs:
                        commit(bstates, dstates, cost3)
                        return
                    dspec = s.bcs[m]
                    busy0, db0, wb0, recent = bcs_state[m]
                    if supw[m] > (wb0 if t > 1 else 0):
                        return  # depot cannot supply more than last step's stock
                    flag = dspec.charge_enabled[t - 1]
                    power_cap = (
                        c.max_pile_kw * dspec.chargers * flag * c.charge_efficiency * c.step_hours
                    )
                    bout_cap = min(
                        dspec.chargers,
                        busy0 if t > 1 else 0,
                        int(power_cap / c.battery_kwh + 1e-9) if c.battery_kwh > 0 else dspec.chargers,
                    )
                    # entries older than t_c-1 steps; recent window holds the rest
                    matured = busy0 - sum(recent)
                    for bout in range(int(max(0, min(bout_cap, matured))) + 1):
                        wb1 = wb0 + bout - supw[m]
                        if wb1 < 0 or wb1 > dspec.wb_cap:
                            continue
                        e_cost = (
                            (dspec.price[t - 1] + c.degradation_cost_per_kwh)
                            * c.battery_kwh
                            * bout
                            / c.charge_efficiency
                        )
                        for back in range(int(dspec.backup_cap) + 1):
                            db_avail = db0 + back + recd[m]
                            bin_cap = min(dspec.chargers - (busy0 - bout), db_avail)
                            if db_avail - bin_cap > dspec.db_cap:
                                continue  # even max entries overflow the store
                            for bin_t in range(int(max(0, bin_cap)) + 1):
                                db1 = db_avail - bin_t
                                if db1 > dspec.db_cap:
                                    continue
                                busy1 = busy0 + bin_t - bout
                                # slide the (t_c - 2)-wide window of recent entries
                                recent1 = (recent + (bin_t,))[1:]
                                cost = -e_cost - c.backup_cost_per_pack * back
                                rec_bcs(
                                    m + 1,
                                    dstates + [(busy1, db1, wb1, recent1, bout, back, bin_t)],
                                    bstates,
                                    cost3 + cost,
                                )

                def commit(bstates, dstates, total_cost):
                    bump()
                    new_positions = tuple(dec[0][1] for dec in truck_dec)
                    new_tdb = tuple(dec[4] for dec in truck_dec)
                    new_twb = tuple(dec[5] for dec in truck_dec)
                    if t == T:
                        for w, C in enumerate(caps):
                            if new_tdb[w] > C // 3 or new_twb[w] > C // 3:
                                return
                    ns = (
                        new_positions,
                        new_tdb,
                        new_twb,
                        tuple(bstates),
                        tuple((b[0], b[1], b[2], b[3]) for b in dstates),
                    )
                    val = value + cost_acc + total_cost
                    cur = nxt.get(ns)
                    if cur is None or val > cur[0]:
                        decision = (
                            tuple(truck_dec),
                            tuple(bstates),
                            tuple((b[4], b[5], b[6]) for b in dstates),
                        )
                        nxt[ns] = (val, state, decision)

                rec_bss(0, [], 0.0)

            rec_truck(0, [], 0.0)
        if not nxt:
            return None, None
        layer = nxt
        parents.append(layer)

    best_state, (best_val, _, _) = max(
        layer.items(), key=lambda kv: (kv[1][0], kv[0])
    )
    # walk parents back to reconstruct the decision sequence
    decisions = []
    state = best_state
    for t in range(T, 0, -1):
        val, prev, dec = parents[t][state]
        decisions.append(dec)
        state = prev
    decisions.reverse()

    sol = Solution.zeros(s, arcs)
    for t0, (truck_dec, bstates, dflows) in enumerate(decisions):
        for w, ((i, j), at, q1, q2, ndb, nwb) in enumerate(truck_dec):
            sol.arc_choice[w, t0, arcs.index((i, j))] = 1
            sol.moving[w, t0] = 1.0 if i != j else 0.0
            sol.truck_db[w, t0] = ndb
            sol.truck_wb[w, t0] = nwb
            if at is not None:
                kind, idx = at
                if kind == "bss":
                    sol.load_db_bss[w, idx, t0] = q1
                    sol.unload_wb_bss[w, idx, t0] = q2
                else:
                    sol.unload_db_bcs[w, idx, t0] = q1
                    sol.load_wb_bcs[w, idx, t0] = q2
        for n in range(n_bss):
            db1, wb1, d_new = bstates[n]
            sol.swaps[n, t0] = d_new
            sol.bss_db_stock[n, t0] = db1
            sol.bss_wb_stock[n, t0] = wb1
            sol.bss_db_supplied[n, t0] = sol.load_db_bss[:, n, t0].sum()
            sol.bss_wb_received[n, t0] = sol.unload_wb_bss[:, n, t0].sum()
        for m in range(n_bcs):
            bout, back, bin_t = dflows[m]
            sol.piles_out[m, t0] = bout
            sol.backup[m, t0] = back
            sol.piles_in[m, t0] = bin_t
            sol.bcs_db_received[m, t0] = sol.unload_db_bcs[:, m, t0].sum()
            sol.bcs_wb_supplied[m, t0] = sol.load_wb_bcs[:, m, t0].sum()
            prev_busy = sol.piles_busy[m, t0 - 1] if t0 else 0.0
            prev_db = sol.bcs_db_stock[m, t0 - 1] if t0 else 0.0
            prev_wb = sol.bcs_wb_stock[m, t0 - 1] if t0 else 0.0
            sol.piles_busy[m, t0] = prev_busy + bin_t - bout
            sol.bcs_db_stock[m, t0] = prev_db + back + sol.bcs_db_received[m, t0] - bin_t
            sol.bcs_wb_stock[m, t0] = prev_wb + bout - sol.bcs_wb_supplied[m, t0]
            sol.charge_power[m, t0] = (
                c.battery_kwh * bout / (c.charge_efficiency * c.step_hours)
            )
    return best_val, sol
