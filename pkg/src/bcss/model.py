"""Mixed-integer linear model of the charging/swapping logistics system.

The model maximizes total operating profit: swap revenue minus truck travel,
pack handling, electricity purchase (with degradation compensation) and
backup-pack leasing.  Constraints fall into tagged groups:

====== ==========================================================
tag    meaning
====== ==========================================================
eq1    each truck occupies exactly one arc per step
eq2    step-1 departure fixed to the truck's initial node
eq3    per-node truck flow continuity across step boundaries
eq4    traveling indicator = sum of occupied travel arcs
eq5    depleted-pack carry recursion per truck
eq6    charged-pack carry recursion per truck
eq7    joint carry capacity per truck
eq8    carry box bounds (variable bounds)
eq9    end-of-horizon carry <= floor(capacity / 3)
eq10   depleted-pack loading gated by parking at the swap station
eq11   charged-pack unloading gated by parking at the swap station
eq12   no charged-pack unloading at step 1; bounded by prior carry
eq13   charged-pack loading gated by parking at the depot
eq14   depleted-pack unloading gated by parking at the depot
eq15   no depleted-pack unloading at step 1; bounded by prior carry
eq17   served swaps between the minimum and arrival curves (bounds)
eq18   served-swap curve nondecreasing
eq19   station depleted-pack outflow aggregates truck loads
eq20   station charged-pack inflow aggregates truck unloads
eq21   station depleted-stock balance
eq22   station charged-stock balance
eq23   station flow/stock box bounds (variable bounds)
eq24   terminal depleted stock within band of initial
eq25   terminal charged stock within band of initial
eq27   depot depleted-pack inflow aggregates truck unloads
eq28   depot charged-pack outflow aggregates truck loads
eq29   pile occupancy = cumulative in - cumulative out
eq30   depot depleted-stock balance (with backup inflow)
eq31   depot charged-stock balance
eq32   pile exits lag pile entries by the minimum charge time
eq33   depot flow/stock box bounds (variable bounds)
eq34   no pile exit at step 1; bounded by prior occupancy
eq35   no depot supply at step 1; bounded by prior charged stock
eq36   cumulative energy purchased matches packs charged
eq37   power bounded by pile count and the charging permission flag
====== ==========================================================

Groups eq8/eq17/eq23/eq33/eq37 are realized as variable bounds rather than
rows; they keep their tags for traceability and validation reporting.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field

import numpy as np

from .network import TimeSpaceNetwork, build_tsn
from .scenario import Scenario
from .solution import Solution, render_name

ALL_TAGS = tuple(
    f"eq{k}" for k in list(range(1, 16)) + list(range(17, 26)) + list(range(27, 38))
)

BINARY, INTEGER, CONTINUOUS = "binary", "integer", "continuous"


class ModelError(ValueError):
    pass


@dataclass(frozen=True)
class Variable:
    idx: int
    name: str
    family: str
    kind: str
    lo: float
    hi: float
    bound_tag: str | None = None

    def __post_init__(self):
        if self.lo > self.hi:
            raise ModelError(f"{self.name}: bound lo {self.lo} > hi {self.hi}")
        if self.kind == BINARY and (self.lo, self.hi) != (0.0, 1.0):
            raise ModelError(f"{self.name}: binary variables must have bounds [0, 1]")


@dataclass(frozen=True)
class LinearConstraint:
    name: str
    tag: str
    coeffs: dict[int, float]
    sense: str  # '<=', '=', '>='
    rhs: float

    def __post_init__(self):
        if not self.coeffs:
            raise ModelError(f"{self.name}: constraint has no coefficients")
        if self.tag not in ALL_TAGS:
            raise ModelError(f"{self.name}: unknown tag {self.tag}")
        if self.sense not in ("<=", "=", ">="):
            raise ModelError(f"{self.name}: bad sense {self.sense}")


@dataclass
class MilpModel:
    scenario: Scenario
    tsn: TimeSpaceNetwork
    variables: list[Variable]
    constraints: list[LinearConstraint]
    objective: dict[int, float]  # maximize
    provenance: str
    _by_name: dict[str, int] = field(repr=False, default_factory=dict)

    def var(self, name: str) -> Variable:
        return self.variables[self._by_name[name]]

    def var_idx(self, name: str) -> int:
        return self._by_name[name]

    @property
    def n_vars(self) -> int:
        return len(self.variables)

    def objective_value(self, values: np.ndarray) -> float:
        return float(sum(c * values[i] for i, c in self.objective.items()))

    def traceability(self) -> list[tuple[str, int, str]]:
        """(tag, instance count, touched variable families) per constraint group."""
        counts: dict[str, int] = {t: 0 for t in ALL_TAGS}
        fams: dict[str, set] = {t: set() for t in ALL_TAGS}
        for c in self.constraints:
            counts[c.tag] += 1
            for i in c.coeffs:
                fams[c.tag].add(self.variables[i].family)
        for v in self.variables:
            if v.bound_tag is not None:
                counts[v.bound_tag] += 1
                fams[v.bound_tag].add(v.family)
        return [(t, counts[t], "|".join(sorted(fams[t]))) for t in ALL_TAGS]

    def write_traceability_csv(self, path):
        with open(path, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh)
            w.writerow(["tag", "instance_count", "variable_families_touched"])
            for row in self.traceability():
                w.writerow(row)

    def canonical_lines(self) -> list[str]:
        """Deterministic textual form; equal scenarios yield identical lines."""
        lines = [f"provenance {self.provenance}"]
        for v in self.variables:
            lines.append(f"var {v.name} {v.kind} {v.lo:.12g} {v.hi:.12g}")
        for c in self.constraints:
            terms = " ".join(
                f"{coef:+.12g}*{self.variables[i].name}" for i, coef in sorted(c.coeffs.items())
            )
            lines.append(f"row {c.name} [{c.tag}] {terms} {c.sense} {c.rhs:.12g}")
        obj = " ".join(
            f"{coef:+.12g}*{self.variables[i].name}" for i, coef in sorted(self.objective.items())
        )
        lines.append(f"max {obj}")
        return lines


class _Builder:
    def __init__(self, scenario: Scenario):
        self.s = scenario
        self.tsn = build_tsn(scenario.expanded, scenario.horizon)
        self.variables: list[Variable] = []
        self.by_name: dict[str, int] = {}
        self.constraints: list[LinearConstraint] = []

    def add_var(self, family, kind, lo, hi, bound_tag=None, **idx) -> int:
        name = render_name(family, **idx)
        v = Variable(len(self.variables), name, family, kind, float(lo), float(hi), bound_tag)
        self.variables.append(v)
        self.by_name[name] = v.idx
        return v.idx

    def add_row(self, name, tag, coeffs, sense, rhs):
        self.constraints.append(LinearConstraint(name, tag, dict(coeffs), sense, float(rhs)))


def _allocate_variables(b: _Builder):
    """Declare every variable in a fixed order independent of build order."""
    s, tsn = b.s, b.tsn
    T = s.horizon
    for tr in s.trucks:
        for t in range(1, T + 1):
            for (i, j) in tsn.arcs:
                b.add_var("arc", BINARY, 0, 1, w=tr.id, t=t, i=i, j=j)
        for t in range(1, T + 1):
            b.add_var("mov", BINARY, 0, 1, w=tr.id, t=t)
        for t in range(1, T + 1):
            b.add_var("tdb", INTEGER, 0, tr.capacity, bound_tag="eq8", w=tr.id, t=t)
        for t in range(1, T + 1):
            b.add_var("twb", INTEGER, 0, tr.capacity, bound_tag="eq8", w=tr.id, t=t)
        for bss in s.bss:
            for t in range(1, T + 1):
                b.add_var("ldb", INTEGER, 0, tr.capacity, w=tr.id, node=bss.node, t=t)
                b.add_var("uwb", INTEGER, 0, tr.capacity, w=tr.id, node=bss.node, t=t)
        for bcs in s.bcs:
            for t in range(1, T + 1):
                b.add_var("lwb", INTEGER, 0, tr.capacity, w=tr.id, node=bcs.node, t=t)
                b.add_var("udb", INTEGER, 0, tr.capacity, w=tr.id, node=bcs.node, t=t)
    fleet_cap = sum(tr.capacity for tr in s.trucks)
    for bss in s.bss:
        for t in range(1, T + 1):
            b.add_var(
                "dsw", INTEGER, bss.min_departure[t - 1], bss.arrival[t - 1],
                bound_tag="eq17", node=bss.node, t=t,
            )
        for t in range(1, T + 1):
            b.add_var("supd", INTEGER, 0, fleet_cap, bound_tag="eq23", node=bss.node, t=t)
        for t in range(1, T + 1):
            b.add_var("recw", INTEGER, 0, fleet_cap, bound_tag="eq23", node=bss.node, t=t)
        for t in range(1, T + 1):
            b.add_var("sdb", INTEGER, 0, bss.cap, bound_tag="eq23", node=bss.node, t=t)
        for t in range(1, T + 1):
            b.add_var("swb", INTEGER, 0, bss.cap, bound_tag="eq23", node=bss.node, t=t)
    for bcs in s.bcs:
        for t in range(1, T + 1):
            b.add_var("recd", INTEGER, 0, fleet_cap, bound_tag="eq33", node=bcs.node, t=t)
        for t in range(1, T + 1):
            b.add_var("supw", INTEGER, 0, fleet_cap, bound_tag="eq33", node=bcs.node, t=t)
        for t in range(1, T + 1):
            b.add_var("bin", INTEGER, 0, bcs.chargers, bound_tag="eq33", node=bcs.node, t=t)
        for t in range(1, T + 1):
            b.add_var("bout", INTEGER, 0, bcs.chargers, bound_tag="eq33", node=bcs.node, t=t)
        for t in range(1, T + 1):
            b.add_var("back", INTEGER, 0, bcs.backup_cap, bound_tag="eq33", node=bcs.node, t=t)
        for t in range(1, T + 1):
            b.add_var("inch", INTEGER, 0, bcs.chargers, bound_tag="eq33", node=bcs.node, t=t)
        for t in range(1, T + 1):
            b.add_var("cdb", INTEGER, 0, bcs.db_cap, bound_tag="eq33", node=bcs.node, t=t)
        for t in range(1, T + 1):
            b.add_var("cwb", INTEGER, 0, bcs.wb_cap, bound_tag="eq33", node=bcs.node, t=t)
        for t in range(1, T + 1):
            hi = s.costs.max_pile_kw * bcs.chargers * bcs.charge_enabled[t - 1]
            b.add_var("pw", CONTINUOUS, 0, hi, bound_tag="eq37", node=bcs.node, t=t)


def build_vehicle_constraints(b: _Builder):
    """Arc occupancy, initial departure, flow continuity, traveling indicator."""
    s, tsn = b.s, b.tsn
    T = s.horizon
    vid = b.by_name
    for tr in s.trucks:
        w = tr.id
        if (tr.initial_node, tr.initial_node) not in tsn.arc_index:
            raise ModelError(
                f"truck {w} starts at node {tr.initial_node} which has no parking arc"
            )
        for t in range(1, T + 1):
            coeffs = {vid[render_name("arc", w=w, t=t, i=i, j=j)]: 1.0 for (i, j) in tsn.arcs}
            b.add_row(f"eq1_w{w}_t{t}", "eq1", coeffs, "=", 1.0)
        out0 = {
            vid[render_name("arc", w=w, t=1, i=i, j=j)]: 1.0
            for (i, j) in tsn.arcs
            if i == tr.initial_node
        }
        b.add_row(f"eq2_w{w}", "eq2", out0, "=", 1.0)
        for node in [n.id for n in s.expanded.nodes]:
            for t in range(1, T):
                coeffs: dict[int, float] = {}
                for k in tsn.in_arcs[node]:
                    i, j = tsn.arcs[k]
                    coeffs[vid[render_name("arc", w=w, t=t, i=i, j=j)]] = 1.0
                for k in tsn.out_arcs[node]:
                    i, j = tsn.arcs[k]
                    idx = vid[render_name("arc", w=w, t=t + 1, i=i, j=j)]
                    coeffs[idx] = coeffs.get(idx, 0.0) - 1.0
                b.add_row(f"eq3_w{w}_node{node}_t{t}", "eq3", coeffs, "=", 0.0)
        for t in range(1, T + 1):
            coeffs = {vid[render_name("mov", w=w, t=t)]: 1.0}
            for (i, j) in tsn.arcs:
                if i != j:
                    coeffs[vid[render_name("arc", w=w, t=t, i=i, j=j)]] = -1.0
            b.add_row(f"eq4_w{w}_t{t}", "eq4", coeffs, "=", 0.0)


def build_truck_battery_constraints(b: _Builder):
    """Carry recursions, capacity, residual limits and parking-gated transfers."""
    s, tsn = b.s, b.tsn
    T = s.horizon
    vid = b.by_name
    for tr in s.trucks:
        w, C = tr.id, tr.capacity
        for t in range(1, T + 1):
            coeffs = {vid[render_name("tdb", w=w, t=t)]: 1.0}
            if t > 1:
                coeffs[vid[render_name("tdb", w=w, t=t - 1)]] = -1.0
            for bss in s.bss:
                coeffs[vid[render_name("ldb", w=w, node=bss.node, t=t)]] = -1.0
            for bcs in s.bcs:
                coeffs[vid[render_name("udb", w=w, node=bcs.node, t=t)]] = 1.0
            b.add_row(f"eq5_w{w}_t{t}", "eq5", coeffs, "=", 0.0)
        for t in range(1, T + 1):
            coeffs = {vid[render_name("twb", w=w, t=t)]: 1.0}
            if t > 1:
                coeffs[vid[render_name("twb", w=w, t=t - 1)]] = -1.0
            for bcs in s.bcs:
                coeffs[vid[render_name("lwb", w=w, node=bcs.node, t=t)]] = -1.0
            for bss in s.bss:
                coeffs[vid[render_name("uwb", w=w, node=bss.node, t=t)]] = 1.0
            b.add_row(f"eq6_w{w}_t{t}", "eq6", coeffs, "=", 0.0)
        for t in range(1, T + 1):
            b.add_row(
                f"eq7_w{w}_t{t}",
                "eq7",
                {
                    vid[render_name("tdb", w=w, t=t)]: 1.0,
                    vid[render_name("twb", w=w, t=t)]: 1.0,
                },
                "<=",
                C,
            )
        residual = math.floor(C / 3)
        b.add_row(
            f"eq9_db_w{w}", "eq9", {vid[render_name("tdb", w=w, t=T)]: 1.0}, "<=", residual
        )
        b.add_row(
            f"eq9_wb_w{w}", "eq9", {vid[render_name("twb", w=w, t=T)]: 1.0}, "<=", residual
        )
        for bss in s.bss:
            n = bss.node
            for t in range(1, T + 1):
                park_idx = vid[render_name("arc", w=w, t=t, i=n, j=n)]
                b.add_row(
                    f"eq10_w{w}_n{n}_t{t}",
                    "eq10",
                    {vid[render_name("ldb", w=w, node=n, t=t)]: 1.0, park_idx: -float(C)},
                    "<=",
                    0.0,
                )
                b.add_row(
                    f"eq11_w{w}_n{n}_t{t}",
                    "eq11",
                    {vid[render_name("uwb", w=w, node=n, t=t)]: 1.0, park_idx: -float(C)},
                    "<=",
                    0.0,
                )
            b.add_row(
                f"eq12_init_w{w}_n{n}",
                "eq12",
                {vid[render_name("uwb", w=w, node=n, t=1)]: 1.0},
                "=",
                0.0,
            )
            for t in range(2, T + 1):
                b.add_row(
                    f"eq12_w{w}_n{n}_t{t}",
                    "eq12",
                    {
                        vid[render_name("uwb", w=w, node=n, t=t)]: 1.0,
                        vid[render_name("twb", w=w, t=t - 1)]: -1.0,
                    },
                    "<=",
                    0.0,
                )
        for bcs in s.bcs:
            m = bcs.node
            for t in range(1, T + 1):
                park_idx = vid[render_name("arc", w=w, t=t, i=m, j=m)]
                b.add_row(
                    f"eq13_w{w}_m{m}_t{t}",
                    "eq13",
                    {vid[render_name("lwb", w=w, node=m, t=t)]: 1.0, park_idx: -float(C)},
                    "<=",
                    0.0,
                )
                b.add_row(
                    f"eq14_w{w}_m{m}_t{t}",
                    "eq14",
                    {vid[render_name("udb", w=w, node=m, t=t)]: 1.0, park_idx: -float(C)},
                    "<=",
                    0.0,
                )
            b.add_row(
                f"eq15_init_w{w}_m{m}",
                "eq15",
                {vid[render_name("udb", w=w, node=m, t=1)]: 1.0},
                "=",
                0.0,
            )
            for t in range(2, T + 1):
                b.add_row(
                    f"eq15_w{w}_m{m}_t{t}",
                    "eq15",
                    {
                        vid[render_name("udb", w=w, node=m, t=t)]: 1.0,
                        vid[render_name("tdb", w=w, t=t - 1)]: -1.0,
                    },
                    "<=",
                    0.0,
                )


def build_bss_constraints(b: _Builder):
    """Swap-curve monotonicity, truck-flow aggregation, stock balances, bands."""
    s = b.s
    T = s.horizon
    vid = b.by_name
    for bss in s.bss:
        n = bss.node
        for t in range(2, T + 1):
            b.add_row(
                f"eq18_n{n}_t{t}",
                "eq18",
                {
                    vid[render_name("dsw", node=n, t=t - 1)]: 1.0,
                    vid[render_name("dsw", node=n, t=t)]: -1.0,
                },
                "<=",
                0.0,
            )
        for t in range(1, T + 1):
            coeffs = {vid[render_name("supd", node=n, t=t)]: 1.0}
            for tr in s.trucks:
                coeffs[vid[render_name("ldb", w=tr.id, node=n, t=t)]] = -1.0
            b.add_row(f"eq19_n{n}_t{t}", "eq19", coeffs, "=", 0.0)
            coeffs = {vid[render_name("recw", node=n, t=t)]: 1.0}
            for tr in s.trucks:
                coeffs[vid[render_name("uwb", w=tr.id, node=n, t=t)]] = -1.0
            b.add_row(f"eq20_n{n}_t{t}", "eq20", coeffs, "=", 0.0)
        for t in range(1, T + 1):
            coeffs = {
                vid[render_name("sdb", node=n, t=t)]: 1.0,
                vid[render_name("dsw", node=n, t=t)]: -1.0,
            }
            for h in range(1, t + 1):
                coeffs[vid[render_name("supd", node=n, t=h)]] = 1.0
            b.add_row(f"eq21_n{n}_t{t}", "eq21", coeffs, "=", bss.init_db)
            coeffs = {
                vid[render_name("swb", node=n, t=t)]: 1.0,
                vid[render_name("dsw", node=n, t=t)]: 1.0,
            }
            for h in range(1, t + 1):
                coeffs[vid[render_name("recw", node=n, t=h)]] = -1.0
            b.add_row(f"eq22_n{n}_t{t}", "eq22", coeffs, "=", bss.init_wb)
        eps = s.costs.terminal_band_packs
        b.add_row(
            f"eq24_hi_n{n}", "eq24",
            {vid[render_name("sdb", node=n, t=T)]: 1.0}, "<=", bss.init_db + eps,
        )
        b.add_row(
            f"eq24_lo_n{n}", "eq24",
            {vid[render_name("sdb", node=n, t=T)]: 1.0}, ">=", bss.init_db - eps,
        )
        b.add_row(
            f"eq25_hi_n{n}", "eq25",
            {vid[render_name("swb", node=n, t=T)]: 1.0}, "<=", bss.init_wb + eps,
        )
        b.add_row(
            f"eq25_lo_n{n}", "eq25",
            {vid[render_name("swb", node=n, t=T)]: 1.0}, ">=", bss.init_wb - eps,
        )


def build_bcs_constraints(b: _Builder):
    """Depot aggregation, pile occupancy and timing, stock balances, energy."""
    s = b.s
    T = s.horizon
    c = s.costs
    vid = b.by_name
    for bcs in s.bcs:
        m = bcs.node
        for t in range(1, T + 1):
            coeffs = {vid[render_name("recd", node=m, t=t)]: 1.0}
            for tr in s.trucks:
                coeffs[vid[render_name("udb", w=tr.id, node=m, t=t)]] = -1.0
            b.add_row(f"eq27_m{m}_t{t}", "eq27", coeffs, "=", 0.0)
            coeffs = {vid[render_name("supw", node=m, t=t)]: 1.0}
            for tr in s.trucks:
                coeffs[vid[render_name("lwb", w=tr.id, node=m, t=t)]] = -1.0
            b.add_row(f"eq28_m{m}_t{t}", "eq28", coeffs, "=", 0.0)
        for t in range(1, T + 1):
            coeffs = {vid[render_name("inch", node=m, t=t)]: 1.0}
            for h in range(1, t + 1):
                coeffs[vid[render_name("bin", node=m, t=h)]] = -1.0
                coeffs[vid[render_name("bout", node=m, t=h)]] = 1.0
            b.add_row(f"eq29_m{m}_t{t}", "eq29", coeffs, "=", 0.0)
            coeffs = {vid[render_name("cdb", node=m, t=t)]: 1.0}
            for h in range(1, t + 1):
                coeffs[vid[render_name("back", node=m, t=h)]] = -1.0
                coeffs[vid[render_name("recd", node=m, t=h)]] = -1.0
                coeffs[vid[render_name("bin", node=m, t=h)]] = 1.0
            b.add_row(f"eq30_m{m}_t{t}", "eq30", coeffs, "=", 0.0)
            coeffs = {vid[render_name("cwb", node=m, t=t)]: 1.0}
            for h in range(1, t + 1):
                coeffs[vid[render_name("bout", node=m, t=h)]] = -1.0
                coeffs[vid[render_name("supw", node=m, t=h)]] = 1.0
            b.add_row(f"eq31_m{m}_t{t}", "eq31", coeffs, "=", 0.0)
        for t in range(1, T + 1):
            coeffs = {}
            for h in range(1, t + 1):
                coeffs[vid[render_name("bout", node=m, t=h)]] = 1.0
            for h in range(1, t - (bcs.t_c - 1) + 1):
                coeffs[vid[render_name("bin", node=m, t=h)]] = -1.0
            b.add_row(f"eq32_m{m}_t{t}", "eq32", coeffs, "<=", 0.0)
        b.add_row(
            f"eq34_init_m{m}", "eq34", {vid[render_name("bout", node=m, t=1)]: 1.0}, "=", 0.0
        )
        for t in range(2, T + 1):
            b.add_row(
                f"eq34_m{m}_t{t}",
                "eq34",
                {
                    vid[render_name("bout", node=m, t=t)]: 1.0,
                    vid[render_name("inch", node=m, t=t - 1)]: -1.0,
                },
                "<=",
                0.0,
            )
        b.add_row(
            f"eq35_init_m{m}", "eq35", {vid[render_name("supw", node=m, t=1)]: 1.0}, "=", 0.0
        )
        for t in range(2, T + 1):
            b.add_row(
                f"eq35_m{m}_t{t}",
                "eq35",
                {
                    vid[render_name("supw", node=m, t=t)]: 1.0,
                    vid[render_name("cwb", node=m, t=t - 1)]: -1.0,
                },
                "<=",
                0.0,
            )
        for t in range(1, T + 1):
            coeffs = {}
            for h in range(1, t + 1):
                coeffs[vid[render_name("pw", node=m, t=h)]] = c.charge_efficiency * c.step_hours
                coeffs[vid[render_name("bout", node=m, t=h)]] = -c.battery_kwh
            b.add_row(f"eq36_m{m}_t{t}", "eq36", coeffs, "=", 0.0)


def build_objective(b: _Builder) -> dict[int, float]:
    s = b.s
    c = s.costs
    T = s.horizon
    vid = b.by_name
    obj: dict[int, float] = {}
    for tr in s.trucks:
        for t in range(1, T + 1):
            obj[vid[render_name("mov", w=tr.id, t=t)]] = -c.travel_cost_per_step
            for bss in s.bss:
                obj[vid[render_name("ldb", w=tr.id, node=bss.node, t=t)]] = -c.labor_cost_per_pack
                obj[vid[render_name("uwb", w=tr.id, node=bss.node, t=t)]] = -c.labor_cost_per_pack
            for bcs in s.bcs:
                obj[vid[render_name("lwb", w=tr.id, node=bcs.node, t=t)]] = -c.labor_cost_per_pack
                obj[vid[render_name("udb", w=tr.id, node=bcs.node, t=t)]] = -c.labor_cost_per_pack
    for bss in s.bss:
        obj[vid[render_name("dsw", node=bss.node, t=T)]] = c.swap_revenue_per_pack
    for bcs in s.bcs:
        for t in range(1, T + 1):
            price = bcs.price[t - 1] + c.degradation_cost_per_kwh
            obj[vid[render_name("pw", node=bcs.node, t=t)]] = -price * c.step_hours
            obj[vid[render_name("back", node=bcs.node, t=t)]] = -c.backup_cost_per_pack
    return {i: v for i, v in obj.items() if v != 0.0}


def build_model(scenario: Scenario) -> MilpModel:
    """Assemble the full MILP for a scenario; deterministic for equal inputs."""
    b = _Builder(scenario)
    _allocate_variables(b)
    build_vehicle_constraints(b)
    build_truck_battery_constraints(b)
    build_bss_constraints(b)
    build_bcs_constraints(b)
    objective = build_objective(b)
    return MilpModel(
        scenario=scenario,
        tsn=b.tsn,
        variables=b.variables,
        constraints=b.constraints,
        objective=objective,
        provenance=scenario.digest(),
        _by_name=b.by_name,
    )


def objective_components(scenario: Scenario, sol: Solution) -> tuple[float, float, float, float]:
    """Recompute (logistics, swap revenue, depot, total) profit from a solution."""
    c = scenario.costs
    tran = -c.travel_cost_per_step * float(sol.moving.sum())
    tran -= c.labor_cost_per_pack * float(
        sol.load_db_bss.sum()
        + sol.unload_wb_bss.sum()
        + sol.load_wb_bcs.sum()
        + sol.unload_db_bcs.sum()
    )
    swap = c.swap_revenue_per_pack * float(sol.swaps[:, -1].sum()) if len(scenario.bss) else 0.0
    depot = 0.0
    for k, bcs in enumerate(scenario.bcs):
        for t in range(scenario.horizon):
            price = bcs.price[t] + c.degradation_cost_per_kwh
            depot -= price * float(sol.charge_power[k, t]) * c.step_hours
            depot -= c.backup_cost_per_pack * float(sol.backup[k, t])
    return tran, swap, depot, tran + swap + depot
