"""Problem instance definition, JSON ingestion and demand-curve construction.

A scenario bundles the transport network, the truck fleet, per-station
parameters, cumulative swap-demand curves, the electricity price series and
all cost coefficients.  Curves are cumulative pack counts indexed by step
(array index 0 holds step 1).
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field

from .network import (
    NetworkError,
    NodeKind,
    TransportEdge,
    TransportNetwork,
    TransportNode,
    expand_virtual_nodes,
    shortest_steps,
)


class ScenarioError(ValueError):
    """Raised with a field path when scenario data violates an invariant."""


def _require(cond: bool, path: str, msg: str):
    if not cond:
        raise ScenarioError(f"{path}: {msg}")


@dataclass(frozen=True)
class TruckSpec:
    id: int
    capacity: int
    initial_node: int


@dataclass(frozen=True)
class BssSpec:
    node: int
    init_db: int
    init_wb: int
    cap: int
    arrival: tuple[int, ...]        # cumulative packs required, per step
    min_departure: tuple[int, ...]  # cumulative packs that must have left, per step


@dataclass(frozen=True)
class BcsSpec:
    node: int
    chargers: int
    db_cap: int
    wb_cap: int
    backup_cap: int
    t_c: int                          # minimum steps a pack sits in a pile
    price: tuple[float, ...]          # $/kWh per step
    charge_enabled: tuple[int, ...]   # 0/1 per step


@dataclass(frozen=True)
class CostParams:
    travel_cost_per_step: float
    labor_cost_per_pack: float
    swap_revenue_per_pack: float
    degradation_cost_per_kwh: float
    backup_cost_per_pack: float
    battery_kwh: float
    charge_efficiency: float
    max_pile_kw: float
    terminal_band_packs: int
    step_hours: float = 1.0


COST_FIELDS = (
    "travel_cost_per_step",
    "labor_cost_per_pack",
    "swap_revenue_per_pack",
    "degradation_cost_per_kwh",
    "backup_cost_per_pack",
    "battery_kwh",
    "charge_efficiency",
    "max_pile_kw",
    "terminal_band_packs",
    "step_hours",
)


@dataclass(frozen=True)
class EvtolArrival:
    node: int
    arrival_step: int
    latest_departure_step: int
    packs: int


@dataclass(frozen=True)
class Scenario:
    network: TransportNetwork
    horizon: int
    trucks: tuple[TruckSpec, ...]
    bss: tuple[BssSpec, ...]
    bcs: tuple[BcsSpec, ...]
    costs: CostParams
    description: str = ""
    expanded: TransportNetwork = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        # Canonical ordering keeps model builds and serialization deterministic.
        object.__setattr__(self, "trucks", tuple(sorted(self.trucks, key=lambda t: t.id)))
        object.__setattr__(self, "bss", tuple(sorted(self.bss, key=lambda b: b.node)))
        object.__setattr__(self, "bcs", tuple(sorted(self.bcs, key=lambda b: b.node)))
        object.__setattr__(self, "expanded", expand_virtual_nodes(self.network))
        self._validate()

    def _validate(self):
        T = self.horizon
        _require(T >= 1, "horizon", f"must be >= 1, got {T}")
        real = set(self.network.real_nodes)
        declared_bss = {b.node for b in self.bss}
        declared_bcs = {b.node for b in self.bcs}
        _require(
            declared_bss == set(self.network.bss_nodes),
            "bss",
            f"specs {sorted(declared_bss)} must cover exactly the BSS nodes "
            f"{sorted(self.network.bss_nodes)}",
        )
        _require(
            declared_bcs == set(self.network.bcs_nodes),
            "bcs",
            f"specs {sorted(declared_bcs)} must cover exactly the BCS nodes "
            f"{sorted(self.network.bcs_nodes)}",
        )
        seen = set()
        for k, tr in enumerate(self.trucks):
            path = f"trucks[{k}]"
            _require(tr.id not in seen, path + ".id", f"duplicate truck id {tr.id}")
            seen.add(tr.id)
            _require(tr.capacity >= 1, path + ".capacity", "must be >= 1")
            _require(
                tr.initial_node in real,
                path + ".initial_node",
                f"node {tr.initial_node} is not a real node",
            )
        for b in self.bss:
            path = f"bss[node={b.node}]"
            _require(len(b.arrival) == T, path + ".A", f"length {len(b.arrival)} != horizon {T}")
            _require(
                len(b.min_departure) == T,
                path + ".D_min",
                f"length {len(b.min_departure)} != horizon {T}",
            )
            _require(b.cap >= 0, path + ".cap", "must be >= 0")
            _require(0 <= b.init_db <= b.cap, path + ".init_db", f"must be in [0, {b.cap}]")
            _require(0 <= b.init_wb <= b.cap, path + ".init_wb", f"must be in [0, {b.cap}]")
            prev_a = prev_d = 0
            for t in range(1, T + 1):
                a, d = b.arrival[t - 1], b.min_departure[t - 1]
                _require(a >= prev_a, f"{path}.A[t={t}]", f"not nondecreasing ({prev_a} -> {a})")
                _require(
                    d >= prev_d, f"{path}.D_min[t={t}]", f"not nondecreasing ({prev_d} -> {d})"
                )
                _require(d <= a, f"{path}.D_min[t={t}]", f"exceeds A ({d} > {a})")
                prev_a, prev_d = a, d
        for b in self.bcs:
            path = f"bcs[node={b.node}]"
            _require(b.chargers >= 1, path + ".chargers", "must be >= 1")
            _require(b.t_c >= 1, path + ".t_c", "must be >= 1")
            _require(b.t_c <= T, path + ".t_c", f"exceeds horizon {T}; no pack could finish charging")
            _require(len(b.price) == T, path + ".price", f"length {len(b.price)} != horizon {T}")
            _require(
                len(b.charge_enabled) == T,
                path + ".charge_enabled",
                f"length {len(b.charge_enabled)} != horizon {T}",
            )
            _require(all(p >= 0 for p in b.price), path + ".price", "prices must be >= 0")
            _require(
                all(f in (0, 1) for f in b.charge_enabled),
                path + ".charge_enabled",
                "flags must be 0 or 1",
            )
            _require(min(b.db_cap, b.wb_cap, b.backup_cap) >= 0, path, "caps must be >= 0")
        c = self.costs
        for name in COST_FIELDS:
            _require(getattr(c, name) >= 0, f"costs.{name}", "must be >= 0")
        _require(0 < c.charge_efficiency <= 1, "costs.charge_efficiency", "must be in (0, 1]")
        _require(c.step_hours > 0, "costs.step_hours", "must be > 0")

    @property
    def n_trucks(self) -> int:
        return len(self.trucks)

    def bss_by_node(self, node: int) -> BssSpec:
        for b in self.bss:
            if b.node == node:
                return b
        raise KeyError(node)

    def bcs_by_node(self, node: int) -> BcsSpec:
        for b in self.bcs:
            if b.node == node:
                return b
        raise KeyError(node)

    def digest(self) -> str:
        """Stable content hash used to stamp models built from this scenario."""
        return hashlib.sha256(
            json.dumps(to_dict(self), sort_keys=True).encode()
        ).hexdigest()[:16]


_TOP_KEYS = {"horizon", "nodes", "edges", "trucks", "bss", "bcs", "costs", "description"}


def _get(obj: dict, key: str, path: str):
    if key not in obj:
        raise ScenarioError(f"{path}.{key}: missing field")
    return obj[key]


def from_dict(doc: dict) -> Scenario:
    """Build and fully validate a Scenario from parsed JSON."""
    if not isinstance(doc, dict):
        raise ScenarioError("document root must be an object")
    unknown = set(doc) - _TOP_KEYS
    if unknown:
        raise ScenarioError(f"unknown top-level keys: {sorted(unknown)}")
    horizon = _get(doc, "horizon", "$")
    nodes = tuple(
        TransportNode(int(_get(n, "id", f"nodes[{k}]")), NodeKind(_get(n, "kind", f"nodes[{k}]")))
        for k, n in enumerate(_get(doc, "nodes", "$"))
    )
    edges = tuple(
        TransportEdge(
            int(_get(e, "a", f"edges[{k}]")),
            int(_get(e, "b", f"edges[{k}]")),
            int(_get(e, "travel_time", f"edges[{k}]")),
        )
        for k, e in enumerate(_get(doc, "edges", "$"))
    )
    try:
        net = TransportNetwork(nodes, edges)
    except NetworkError as exc:
        raise ScenarioError(f"network: {exc}") from exc
    trucks = tuple(
        TruckSpec(
            int(_get(t, "id", f"trucks[{k}]")),
            int(_get(t, "capacity", f"trucks[{k}]")),
            int(_get(t, "initial_node", f"trucks[{k}]")),
        )
        for k, t in enumerate(_get(doc, "trucks", "$"))
    )
    bss = tuple(
        BssSpec(
            node=int(_get(b, "node", f"bss[{k}]")),
            init_db=int(_get(b, "init_db", f"bss[{k}]")),
            init_wb=int(_get(b, "init_wb", f"bss[{k}]")),
            cap=int(_get(b, "cap", f"bss[{k}]")),
            arrival=tuple(int(v) for v in _get(b, "A", f"bss[{k}]")),
            min_departure=tuple(int(v) for v in _get(b, "D_min", f"bss[{k}]")),
        )
        for k, b in enumerate(_get(doc, "bss", "$"))
    )
    bcs = tuple(
        BcsSpec(
            node=int(_get(b, "node", f"bcs[{k}]")),
            chargers=int(_get(b, "chargers", f"bcs[{k}]")),
            db_cap=int(_get(b, "db_cap", f"bcs[{k}]")),
            wb_cap=int(_get(b, "wb_cap", f"bcs[{k}]")),
            backup_cap=int(_get(b, "backup_cap", f"bcs[{k}]")),
            t_c=int(_get(b, "t_c", f"bcs[{k}]")),
            price=tuple(float(v) for v in _get(b, "price", f"bcs[{k}]")),
            charge_enabled=tuple(int(v) for v in _get(b, "charge_enabled", f"bcs[{k}]")),
        )
        for k, b in enumerate(_get(doc, "bcs", "$"))
    )
    costs_doc = _get(doc, "costs", "$")
    missing = [f for f in COST_FIELDS if f != "step_hours" and f not in costs_doc]
    if missing:
        raise ScenarioError(f"costs: missing fields {missing}")
    fields = {f: float(costs_doc[f]) for f in COST_FIELDS if f in costs_doc}
    fields["terminal_band_packs"] = int(fields["terminal_band_packs"])
    costs = CostParams(**fields)
    return Scenario(
        network=net,
        horizon=int(horizon),
        trucks=trucks,
        bss=bss,
        bcs=bcs,
        costs=costs,
        description=str(doc.get("description", "")),
    )


def to_dict(s: Scenario) -> dict:
    """Inverse of from_dict; round-trips every valid Scenario."""
    doc = {
        "horizon": s.horizon,
        "nodes": [{"id": n.id, "kind": n.kind.value} for n in s.network.nodes],
        "edges": [{"a": e.a, "b": e.b, "travel_time": e.travel_time} for e in s.network.edges],
        "trucks": [
            {"id": t.id, "capacity": t.capacity, "initial_node": t.initial_node}
            for t in s.trucks
        ],
        "bss": [
            {
                "node": b.node,
                "init_db": b.init_db,
                "init_wb": b.init_wb,
                "cap": b.cap,
                "A": list(b.arrival),
                "D_min": list(b.min_departure),
            }
            for b in s.bss
        ],
        "bcs": [
            {
                "node": b.node,
                "chargers": b.chargers,
                "db_cap": b.db_cap,
                "wb_cap": b.wb_cap,
                "backup_cap": b.backup_cap,
                "t_c": b.t_c,
                "price": list(b.price),
                "charge_enabled": list(b.charge_enabled),
            }
            for b in s.bcs
        ],
        "costs": {f: getattr(s.costs, f) for f in COST_FIELDS},
    }
    if s.description:
        doc["description"] = s.description
    return doc


def parse_scenario(path) -> Scenario:
    """Load, parse and validate a scenario JSON file."""
    with open(path, encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ScenarioError(f"{path}: invalid JSON: {exc}") from exc
    return from_dict(doc)


def save_scenario(s: Scenario, path):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(to_dict(s), fh, indent=1)
        fh.write("\n")


def build_demand_curves(
    events: list[EvtolArrival], horizon: int, bss_nodes: list[int] | None = None
) -> dict[int, tuple[tuple[int, ...], tuple[int, ...]]]:
    """Turn aircraft arrival events into per-station cumulative (A, D_min) curves.

    A[t] counts packs of aircraft arrived by t; D_min[t] counts packs of
    aircraft whose latest acceptable departure is at or before t.
    """
    nodes = sorted({e.node for e in events} | set(bss_nodes or []))
    arrival = {n: [0] * horizon for n in nodes}
    min_dep = {n: [0] * horizon for n in nodes}
    for k, e in enumerate(events):
        if bss_nodes is not None and e.node not in bss_nodes:
            raise ScenarioError(f"events[{k}].node: {e.node} is not a BSS node")
        _require(e.packs >= 1, f"events[{k}].packs", "must be >= 1")
        _require(
            1 <= e.arrival_step <= e.latest_departure_step <= horizon,
            f"events[{k}]",
            f"need 1 <= arrival ({e.arrival_step}) <= deadline "
            f"({e.latest_departure_step}) <= horizon ({horizon})",
        )
        for t in range(e.arrival_step, horizon + 1):
            arrival[e.node][t - 1] += e.packs
        for t in range(e.latest_departure_step, horizon + 1):
            min_dep[e.node][t - 1] += e.packs
    return {n: (tuple(arrival[n]), tuple(min_dep[n])) for n in nodes}


def validate_feasibility_heuristics(s: Scenario) -> list[str]:
    """Cheap non-fatal screens for obviously undersupplied scenarios.

    These are advisory only; the solver is the arbiter of true infeasibility.
    """
    warnings: list[str] = []
    T = s.horizon
    demand = sum(b.arrival[-1] for b in s.bss)
    supply = sum(b.init_wb for b in s.bss)
    for b in s.bcs:
        # Packs a depot could ever push out: piles turn over at most every t_c
        # steps, the first exit is at step 2, and the power cap binds per step.
        per_step = min(
            b.chargers,
            int(
                s.costs.max_pile_kw
                * b.chargers
                * s.costs.charge_efficiency
                * s.costs.step_hours
                / s.costs.battery_kwh
            )
            if s.costs.battery_kwh > 0
            else b.chargers,
        )
        usable_steps = max(0, T - 1)
        supply += per_step * ((usable_steps + b.t_c - 1) // b.t_c) * min(1, b.chargers)
    if demand > supply:
        warnings.append(
            f"total demand {demand} packs exceeds a generous supply bound {supply} "
            "(initial station stock plus depot charger throughput)"
        )
    for b in s.bss:
        if b.arrival[-1] == 0:
            continue
        reach = []
        for d in s.bcs:
            dist = shortest_steps(s.expanded, d.node).get(b.node)
            if dist is not None and dist < T:
                reach.append(d.node)
        if not reach and b.arrival[-1] > b.init_wb:
            warnings.append(
                f"bss[node={b.node}]: demand {b.arrival[-1]} exceeds initial stock "
                f"{b.init_wb} but no charging depot can reach it within the horizon"
            )
    return warnings
