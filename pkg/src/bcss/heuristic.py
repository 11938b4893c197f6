"""Greedy construction of a feasible schedule to warm-start the exact solver.

Strategy: serve every arriving swap (that is where the revenue is), deliver
to each station as many charged packs as it will consume, and haul the same
number of depleted packs back so terminal stocks land on their initial
values.  Trucks run depot -> station -> depot cycles chosen by earliest unmet
deadline; pile exits are placed on cheap steps and then shifted by a local
improvement pass whenever waiting for returned packs beats leasing backup
ones.  The result is validated before it is returned; a failed validation
degrades to an infeasible guess, never to a bogus incumbent.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass

import numpy as np

from .network import build_tsn
from .scenario import Scenario
from .solution import Solution
from .validator import check_solution

FEASIBLE = "feasible"
INFEASIBLE_GUESS = "infeasible-guess"


@dataclass
class HeuristicTrace:
    status: str
    notes: list[str]
    solution: Solution | None
    objective: float | None


def _paths_from(scenario: Scenario, src: int) -> dict[int, list[int]]:
    """Shortest unit-step path (node list, src first) to every reachable node."""
    net = scenario.expanded
    adj: dict[int, list[int]] = {n.id: [] for n in net.nodes}
    for e in net.edges:
        adj[e.a].append(e.b)
        adj[e.b].append(e.a)
    for k in adj:
        adj[k].sort()
    prev: dict[int, int | None] = {src: None}
    order = [src]
    head = 0
    while head < len(order):
        u = order[head]
        head += 1
        for v in adj[u]:
            if v not in prev:
                prev[v] = u
                order.append(v)
    paths = {}
    for node in prev:
        seq = [node]
        while prev[seq[-1]] is not None:
            seq.append(prev[seq[-1]])
        paths[node] = list(reversed(seq))
    return paths


class _DepotPlan:
    """Pile entry/exit bookkeeping for one depot under a fixed exit plan."""

    def __init__(self, scenario, depot, returns, supplies):
        self.s = scenario
        self.depot = depot
        self.returns = returns    # packs dumped at the depot, per step (1-based)
        self.supplies = supplies  # packs loaded onto trucks, per step (1-based)
        self.T = scenario.horizon
        c = scenario.costs
        # entries must precede exits by this many steps
        self.lag = max(depot.t_c - 1, 1)
        self.energy_price = [
            (depot.price[t - 1] + c.degradation_cost_per_kwh)
            * c.battery_kwh
            / c.charge_efficiency
            for t in range(1, self.T + 1)
        ]

    def simulate(self, bout):
        """Feed piles greedily; returns (violation units, per-step state arrays)."""
        d = self.depot
        T = self.T
        total = int(bout[1:].sum())
        cum_bout = np.cumsum(bout)
        busy = db = wb = 0.0
        cum_bin = 0
        backs = np.zeros(T + 1, dtype=int)
        bins = np.zeros(T + 1, dtype=int)
        busy_arr = np.zeros(T + 1)
        db_arr = np.zeros(T + 1)
        wb_arr = np.zeros(T + 1)
        violation = 0.0
        for t in range(1, T + 1):
            db += self.returns[t]
            horizon_t = min(T, t + self.lag)
            must_now = max(0, int(cum_bout[horizon_t]) - cum_bin)
            space = min(d.chargers, d.chargers - (busy - bout[t]))
            bin_free = int(max(0, min(space, db, total - cum_bin)))
            back = 0
            if bin_free < must_now:
                back = int(min(d.backup_cap, must_now - bin_free))
            bin_t = int(max(0, min(space, db + back, total - cum_bin)))
            if bin_t < must_now:
                violation += must_now - bin_t
            cum_bin += bin_t
            busy = busy + bin_t - bout[t]
            db = db + back - bin_t
            wb = wb + bout[t] - self.supplies[t]
            violation += max(0.0, db - d.db_cap) + max(0.0, wb - d.wb_cap) + max(0.0, -wb)
            backs[t] = back
            bins[t] = bin_t
            busy_arr[t] = busy
            db_arr[t] = db
            wb_arr[t] = wb
        return violation, backs, bins, busy_arr, db_arr, wb_arr

    def cost(self, bout):
        """Energy plus backup cost, with hard violations heavily penalized."""
        violation, backs, *_ = self.simulate(bout)
        energy = sum(bout[t] * self.energy_price[t - 1] for t in range(1, self.T + 1))
        return (
            energy
            + self.s.costs.backup_cost_per_pack * int(backs.sum())
            + 1e6 * violation
        )


def _plan_exits(plan: _DepotPlan, cum_load, step_cap):
    """Exit plan meeting every loading deadline, then cost-improved locally."""
    T = plan.T
    bout = np.zeros(T + 1, dtype=int)
    cap_left = list(step_cap)
    heap: list[tuple[float, int]] = []
    for t in range(1, T + 1):
        if cap_left[t] > 0:
            heapq.heappush(heap, (plan.energy_price[t - 1], t))
        deficit = int(cum_load[t + 1]) - int(bout[1 : t + 1].sum())
        while deficit > 0 and heap:
            price, h = heapq.heappop(heap)
            take = min(deficit, cap_left[h])
            bout[h] += take
            cap_left[h] -= take
            deficit -= take
            if cap_left[h] > 0:
                heapq.heappush(heap, (price, h))
        if deficit > 0:
            return None
    # local improvement: move single exits when cheaper overall (backup included)
    best_cost = plan.cost(bout)
    for _ in range(400):
        move = None
        cum = np.cumsum(bout)
        for h_from in range(1, T + 1):
            if bout[h_from] == 0:
                continue
            for h_to in range(1, T + 1):
                if h_to == h_from or cap_left[h_to] <= 0:
                    continue
                if h_to > h_from:
                    # exits move later; every deadline in between must keep slack
                    window = range(h_from, h_to)
                    if any(cum[t] - 1 < cum_load[t + 1] for t in window):
                        continue
                trial = bout.copy()
                trial[h_from] -= 1
                trial[h_to] += 1
                cost = plan.cost(trial)
                if cost < best_cost - 1e-9 and (move is None or cost < move[0] - 1e-12):
                    move = (cost, h_from, h_to)
        if move is None:
            break
        _, h_from, h_to = move
        bout[h_from] -= 1
        bout[h_to] += 1
        cap_left[h_from] += 1
        cap_left[h_to] -= 1
        best_cost = plan.cost(bout)
    return bout


def _schedule_once(s: Scenario, extra_pickup: list[int]):
    """One full planning + simulation pass; returns (solution, notes, reasons)."""
    T = s.horizon
    c = s.costs
    notes: list[str] = []
    tsn = build_tsn(s.expanded, T)
    arcs = tsn.arcs
    sol = Solution.zeros(s, arcs)

    depot = s.bcs[0]
    depot_m = 0
    if len(s.bcs) > 1:
        notes.append(f"multiple depots; routing everything through node {depot.node}")
    paths = _paths_from(s, depot.node)
    dist = {n: len(p) - 1 for n, p in paths.items()}
    eps = c.terminal_band_packs

    need = []
    for b in s.bss:
        a_total = b.arrival[-1]
        need.append(0 if a_total <= min(eps, b.init_wb) else a_total)
    # deliver only down to the terminal band's low edge; the initial stock
    # absorbs the rest, so fewer packs get charged and hauled
    deliver_target = [
        max(0, need[n] - min(eps, s.bss[n].init_wb)) if need[n] else 0
        for n in range(len(s.bss))
    ]
    deliver_left = list(deliver_target)
    pickup_plan_left = [
        max(0, need[n] - eps) + extra_pickup[n] for n in range(len(s.bss))
    ]
    picked_planned = [0] * len(s.bss)
    need_by = [
        [max(0, b.min_departure[t] - b.init_wb) for t in range(T)] for b in s.bss
    ]

    def power_units(t):
        if c.battery_kwh <= 0:
            return depot.chargers
        return int(
            c.max_pile_kw
            * depot.chargers
            * depot.charge_enabled[t - 1]
            * c.charge_efficiency
            * c.step_hours
            / c.battery_kwh
            + 1e-9
        )

    first_bout = max(2, depot.t_c)
    step_cap = [0] * (T + 1)
    for t in range(1, T + 1):
        step_cap[t] = min(depot.chargers, power_units(t)) if t >= first_bout else 0
    opt_cum_bout = np.cumsum(step_cap)

    W = len(s.trucks)
    itinerary: list[list[tuple[int, int] | None]] = [[None] * T for _ in range(W)]
    busy_until = [0] * W
    committed_loads = 0
    load_events: list[tuple[int, int]] = []
    exchange_plan: dict[tuple[int, int], tuple[int, int, int]] = {}
    dump_steps: dict[int, set[int]] = {w: set() for w in range(W)}

    def route(w, frm, to, start):
        seq = paths[to] if frm == depot.node else list(reversed(paths[frm]))
        for k in range(len(seq) - 1):
            itinerary[w][start + k - 1] = (seq[k], seq[k + 1])
        return start + len(seq) - 2

    for t in range(1, T + 1):
        min_load_by = T + 1
        for n, b in enumerate(s.bss):
            if deliver_left[n] <= 0 or b.node not in dist:
                continue
            done = deliver_target[n] - deliver_left[n]
            for tt in range(T):
                if need_by[n][tt] > done:
                    min_load_by = min(min_load_by, tt + 1 - dist[b.node] - 1)
                    break
        held = False
        for w, tr in enumerate(s.trucks):
            if busy_until[w] >= t or s.trucks[w].initial_node != depot.node:
                continue
            cand = []
            for n, b in enumerate(s.bss):
                if deliver_left[n] <= 0 or b.node not in dist:
                    continue
                d = dist[b.node]
                if t + d + 1 > T:
                    continue
                q_full = min(tr.capacity, deliver_left[n])
                q = min(q_full, int(opt_cum_bout[t - 1]) - committed_loads)
                if q <= 0:
                    continue
                urgency = T + 1
                done = deliver_target[n] - deliver_left[n]
                for tt in range(T):
                    if need_by[n][tt] > done:
                        urgency = tt + 1
                        break
                if q < q_full and urgency > t + d + 2:
                    continue  # wait for more charged stock unless a deadline looms
                cand.append((urgency, d, b.node, n, q))
            if cand:
                cand.sort()
                urgency, d, node, n, q = cand[0]
                round_trip = t + 2 * d + 2 <= T
                itinerary[w][t - 1] = (depot.node, depot.node)
                sol.load_wb_bcs[w, depot_m, t - 1] = q
                committed_loads += q
                load_events.append((t, q))
                deliver_left[n] -= q
                last = route(w, depot.node, node, t + 1)
                exch = last + 1
                itinerary[w][exch - 1] = (node, node)
                exchange_plan[(w, exch)] = (n, q, tr.capacity if round_trip else 0)
                if round_trip:
                    back_last = route(w, node, depot.node, exch + 1)
                    dump = back_last + 1
                    itinerary[w][dump - 1] = (depot.node, depot.node)
                    dump_steps[w].add(dump)
                    busy_until[w] = dump - 1
                    stock_est = (
                        s.bss[n].init_db
                        + s.bss[n].arrival[min(exch, T) - 1]
                        - picked_planned[n]
                    )
                    est = max(0, min(tr.capacity, pickup_plan_left[n], stock_est))
                    picked_planned[n] += est
                    pickup_plan_left[n] -= est
                    notes.append(
                        f"t={t} truck {tr.id}: load {q} charged packs for station {node}"
                        f" (deadline {urgency if urgency <= T else 'none'}), return with depleted packs"
                    )
                else:
                    busy_until[w] = T
                    notes.append(f"t={t} truck {tr.id}: one-way delivery of {q} packs to station {node}")
                continue
            # collection run; a dump step keeps the truck parked one more step
            start = t + 1 if t in dump_steps[w] else t
            if sum(pickup_plan_left) > 0:
                best = None
                for n, b in enumerate(s.bss):
                    if pickup_plan_left[n] <= 0 or b.node not in dist:
                        continue
                    d = dist[b.node]
                    exch_est = start + d
                    if exch_est + d + 1 > T:
                        continue
                    stock_est = (
                        b.init_db
                        + b.arrival[min(exch_est, T) - 1]
                        - picked_planned[n]
                    )
                    est = min(tr.capacity, pickup_plan_left[n], stock_est)
                    if est <= 0:
                        continue
                    key = (-est, d, b.node)
                    if best is None or key < best[0]:
                        best = (key, n, d)
                if best is not None:
                    (negest, _, _), n, d = best
                    if start + 2 * d + 1 > min_load_by and not held:
                        held = True  # stay parked so an urgent load is not missed
                        continue
                    node = s.bss[n].node
                    last = route(w, depot.node, node, start)
                    exch = last + 1
                    itinerary[w][exch - 1] = (node, node)
                    exchange_plan[(w, exch)] = (n, 0, tr.capacity)
                    back_last = route(w, node, depot.node, exch + 1)
                    dump = back_last + 1
                    itinerary[w][dump - 1] = (depot.node, depot.node)
                    dump_steps[w].add(dump)
                    busy_until[w] = dump - 1
                    est = -negest
                    picked_planned[n] += est
                    pickup_plan_left[n] = max(0, pickup_plan_left[n] - est)
                    notes.append(f"t={t} truck {tr.id}: collection run to station {node}")

    for w in range(W):
        last_node = s.trucks[w].initial_node
        for t in range(T):
            if itinerary[w][t] is None:
                itinerary[w][t] = (last_node, last_node)
            last_node = itinerary[w][t][1]

    # station simulation: serve the maximum allowed, supply pickups after swaps.
    # Pickup totals aim at the low edge of the terminal band so backup packs do
    # not crowd returned ones out of the depot store.  Part of each station's
    # pickup total is reserved for the trucks' final visits: whatever a truck
    # hauls home last can legally stay on board, sparing a dump handling.
    infeasible_reasons: list[str] = []
    sup_remaining = [
        min(need[n], max(0, need[n] - eps) + extra_pickup[n]) for n in range(len(s.bss))
    ]
    last_exch: dict[int, int] = {}
    for (w, t) in exchange_plan:
        last_exch[w] = max(last_exch.get(w, 0), t)
    reserved = [0] * len(s.bss)
    for w, t in last_exch.items():
        n = exchange_plan[(w, t)][0]
        if exchange_plan[(w, t)][2] > 0 and any(d > t for d in dump_steps[w]):
            reserved[n] += s.trucks[w].capacity // 3
    for t in range(1, T + 1):
        for n, b in enumerate(s.bss):
            received = 0
            for w in range(W):
                plan = exchange_plan.get((w, t))
                if plan and plan[0] == n and plan[1] > 0:
                    received += plan[1]
                    sol.unload_wb_bss[w, n, t - 1] = plan[1]
            db_prev = sol.bss_db_stock[n, t - 2] if t >= 2 else float(b.init_db)
            wb_prev = sol.bss_wb_stock[n, t - 2] if t >= 2 else float(b.init_wb)
            d_prev = sol.swaps[n, t - 2] if t >= 2 else 0.0
            d_new = min(
                float(b.arrival[t - 1]),
                d_prev + wb_prev + received,
                d_prev + b.cap - db_prev,
            )
            if d_new < b.min_departure[t - 1]:
                infeasible_reasons.append(
                    f"station {b.node} t={t}: can serve {d_new:.0f} "
                    f"< required {b.min_departure[t - 1]}"
                )
                d_new = float(b.min_departure[t - 1])
            inc = d_new - d_prev
            supplied = 0
            for w in range(W):
                plan = exchange_plan.get((w, t))
                if plan and plan[0] == n and plan[2] > 0:
                    stock_now = db_prev + inc - supplied
                    cap = sup_remaining[n]
                    if last_exch.get(w) == t:
                        reserved[n] = max(0, reserved[n] - s.trucks[w].capacity // 3)
                    cap = max(0, cap - reserved[n])
                    q = int(max(0, min(plan[2], stock_now, cap)))
                    sol.load_db_bss[w, n, t - 1] = q
                    supplied += q
                    sup_remaining[n] -= q
            sol.swaps[n, t - 1] = d_new
            sol.bss_wb_received[n, t - 1] = received
            sol.bss_db_supplied[n, t - 1] = supplied
            sol.bss_db_stock[n, t - 1] = db_prev + inc - supplied
            sol.bss_wb_stock[n, t - 1] = wb_prev - inc + received

    # truck carry replay and depot receipts.  At its last visit a truck keeps
    # up to a third of its capacity on board instead of paying handling twice.
    for w in range(W):
        db = wb = 0.0
        last_dump = max(dump_steps[w], default=0)
        # only the final visit may keep packs; a later load would need the room
        keep_ok = bool(last_dump) and not (
            sol.load_wb_bcs[w, :, last_dump - 1 :].any()
            or sol.load_db_bss[w, :, last_dump - 1 :].any()
        )
        for t in range(1, T + 1):
            arc = itinerary[w][t - 1]
            sol.arc_choice[w, t - 1, arcs.index(arc)] = 1
            sol.moving[w, t - 1] = 1.0 if arc[0] != arc[1] else 0.0
            if arc == (depot.node, depot.node) and db > 0 and t in dump_steps[w]:
                keep = s.trucks[w].capacity // 3 if (keep_ok and t == last_dump) else 0
                sol.unload_db_bcs[w, depot_m, t - 1] = max(0.0, db - keep)
            db += sol.load_db_bss[w, :, t - 1].sum() - sol.unload_db_bcs[w, :, t - 1].sum()
            wb += sol.load_wb_bcs[w, :, t - 1].sum() - sol.unload_wb_bss[w, :, t - 1].sum()
            sol.truck_db[w, t - 1] = db
            sol.truck_wb[w, t - 1] = wb
    for t in range(1, T + 1):
        sol.bcs_db_received[depot_m, t - 1] = sol.unload_db_bcs[:, depot_m, t - 1].sum()
        sol.bcs_wb_supplied[depot_m, t - 1] = sol.load_wb_bcs[:, depot_m, t - 1].sum()

    # charging plan
    cum_load = np.zeros(T + 2, dtype=int)
    for step, qty in load_events:
        cum_load[step:] += qty
    returns = np.zeros(T + 1)
    returns[1:] = sol.bcs_db_received[depot_m, :]
    supplies = np.zeros(T + 1)
    supplies[1:] = sol.bcs_wb_supplied[depot_m, :]
    plan = _DepotPlan(s, depot, returns, supplies)
    bout = _plan_exits(plan, cum_load, step_cap)
    if bout is None:
        infeasible_reasons.append("depot cannot charge enough packs for the planned loads")
    else:
        violation, backs, bins, busy_arr, db_arr, wb_arr = plan.simulate(bout)
        if violation > 0:
            infeasible_reasons.append("depot pile plan falls short (entries or stock caps)")
        for t in range(1, T + 1):
            if backs[t]:
                notes.append(f"t={t} depot: lease {backs[t]} backup packs to keep piles fed")
            sol.piles_in[depot_m, t - 1] = bins[t]
            sol.piles_out[depot_m, t - 1] = bout[t]
            sol.backup[depot_m, t - 1] = backs[t]
            sol.piles_busy[depot_m, t - 1] = busy_arr[t]
            sol.bcs_db_stock[depot_m, t - 1] = db_arr[t]
            sol.bcs_wb_stock[depot_m, t - 1] = wb_arr[t]
            sol.charge_power[depot_m, t - 1] = (
                c.battery_kwh * bout[t] / (c.charge_efficiency * c.step_hours)
            )

    return sol, notes, infeasible_reasons, need


def greedy_schedule(scenario: Scenario) -> HeuristicTrace:
    s = scenario
    extra_pickup = [0] * len(s.bss)
    eps = s.costs.terminal_band_packs
    notes: list[str] = []
    for attempt in range(3):
        sol, notes, reasons, need = _schedule_once(s, extra_pickup)
        report = check_solution(s, sol)
        if not reasons and report.verdict:
            if sum(need) == 0:
                notes.append("all demand servable from initial station stock; no truck trips")
            return HeuristicTrace(FEASIBLE, notes, sol, report.components[3])
        # repair: surplus terminal stock means pickups missed late swaps
        surplus = [
            max(0, int(sol.bss_db_stock[n, -1]) - s.bss[n].init_db - eps)
            for n in range(len(s.bss))
        ]
        if not reasons and any(surplus) and attempt < 2:
            for n, extra in enumerate(surplus):
                if extra:
                    extra_pickup[n] += extra + eps
                    notes.append(
                        f"retry: station {s.bss[n].node} ended {extra} packs over its "
                        "terminal band; scheduling another collection run"
                    )
            continue
        for v in report.violations[:5]:
            reasons.append(v.describe())
        return HeuristicTrace(INFEASIBLE_GUESS, notes + reasons, sol, None)
    report = check_solution(s, sol)
    if report.verdict:
        return HeuristicTrace(FEASIBLE, notes, sol, report.components[3])
    return HeuristicTrace(
        INFEASIBLE_GUESS,
        notes + [v.describe() for v in report.violations[:5]],
        sol,
        None,
    )
