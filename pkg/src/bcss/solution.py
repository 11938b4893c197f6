"""Structured decision values and the variable naming scheme.

Every decision variable has a flat, parseable name such as ``ldb_w2_n3_t7``
(truck 2 loads depleted packs at station 3 in step 7).  Names are the wire
format used by MPS files and solution files; `Solution` holds the same values
as dense arrays indexed by (truck, station, step) positions.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

import numpy as np

from .scenario import Scenario

# family -> (human meaning, index signature)
FAMILIES = {
    "arc": ("truck occupies arc (i,j)", ("w", "t", "i", "j")),
    "mov": ("truck traveling indicator", ("w", "t")),
    "tdb": ("depleted packs on truck", ("w", "t")),
    "twb": ("charged packs on truck", ("w", "t")),
    "ldb": ("depleted packs loaded at swap station", ("w", "n", "t")),
    "uwb": ("charged packs unloaded at swap station", ("w", "n", "t")),
    "lwb": ("charged packs loaded at charging depot", ("w", "m", "t")),
    "udb": ("depleted packs unloaded at charging depot", ("w", "m", "t")),
    "dsw": ("cumulative swaps served", ("n", "t")),
    "supd": ("depleted packs handed to trucks", ("n", "t")),
    "recw": ("charged packs received from trucks", ("n", "t")),
    "sdb": ("swap-station depleted stock", ("n", "t")),
    "swb": ("swap-station charged stock", ("n", "t")),
    "recd": ("depleted packs received by depot", ("m", "t")),
    "supw": ("charged packs supplied by depot", ("m", "t")),
    "bin": ("packs placed into piles", ("m", "t")),
    "bout": ("packs taken out of piles", ("m", "t")),
    "back": ("backup packs deployed", ("m", "t")),
    "inch": ("packs sitting in piles", ("m", "t")),
    "cdb": ("depot depleted stock", ("m", "t")),
    "cwb": ("depot charged stock", ("m", "t")),
    "pw": ("depot charging power, kW", ("m", "t")),
}

_NAME_RE = re.compile(
    r"^(?P<family>[a-z]+)"
    r"(?:_w(?P<w>\d+))?"
    r"(?:_[nm](?P<node>\d+))?"
    r"(?:_t(?P<t>\d+))?"
    r"(?:_i(?P<i>\d+)_j(?P<j>\d+))?$"
)


def render_name(family: str, w=None, node=None, t=None, i=None, j=None) -> str:
    sig = FAMILIES[family][1]
    parts = [family]
    if "w" in sig:
        parts.append(f"w{w}")
    if "n" in sig:
        parts.append(f"n{node}")
    if "m" in sig:
        parts.append(f"m{node}")
    if "t" in sig:
        parts.append(f"t{t}")
    if "i" in sig:
        parts.append(f"i{i}_j{j}")
    return "_".join(parts)


def parse_name(name: str) -> dict:
    """Invert render_name; raises ValueError on names outside the scheme."""
    m = _NAME_RE.match(name)
    if not m or m.group("family") not in FAMILIES:
        raise ValueError(f"unrecognized variable name {name!r}")
    out = {"family": m.group("family")}
    for key in ("w", "node", "t", "i", "j"):
        v = m.group(key)
        if v is not None:
            out[key] = int(v)
    sig = FAMILIES[out["family"]][1]
    want = {"w": "w" in sig, "node": ("n" in sig) or ("m" in sig), "t": "t" in sig, "i": "i" in sig}
    have = {"w": "w" in out, "node": "node" in out, "t": "t" in out, "i": "i" in out}
    if want != have:
        raise ValueError(f"variable name {name!r} has wrong indices for family {out['family']}")
    return out


@dataclass
class Solution:
    """Dense view of all decision values for one scenario.

    Count arrays are float so unrounded LP values can be inspected; a solution
    coming out of the integer solver holds exact integers.
    """

    scenario: Scenario
    arc_choice: np.ndarray      # [truck, step, arc]
    moving: np.ndarray          # [truck, step]
    truck_db: np.ndarray        # [truck, step]
    truck_wb: np.ndarray
    load_db_bss: np.ndarray     # [truck, bss, step]
    unload_wb_bss: np.ndarray
    load_wb_bcs: np.ndarray     # [truck, bcs, step]
    unload_db_bcs: np.ndarray
    swaps: np.ndarray           # [bss, step] cumulative
    bss_db_supplied: np.ndarray
    bss_wb_received: np.ndarray
    bss_db_stock: np.ndarray
    bss_wb_stock: np.ndarray
    bcs_db_received: np.ndarray  # [bcs, step]
    bcs_wb_supplied: np.ndarray
    piles_in: np.ndarray
    piles_out: np.ndarray
    backup: np.ndarray
    piles_busy: np.ndarray
    bcs_db_stock: np.ndarray
    bcs_wb_stock: np.ndarray
    charge_power: np.ndarray
    arcs: tuple[tuple[int, int], ...] = field(default=())

    @classmethod
    def zeros(cls, scenario: Scenario, arcs: tuple[tuple[int, int], ...]) -> "Solution":
        W, N, M, T, K = (
            len(scenario.trucks),
            len(scenario.bss),
            len(scenario.bcs),
            scenario.horizon,
            len(arcs),
        )
        z = lambda *shape: np.zeros(shape)
        return cls(
            scenario=scenario,
            arc_choice=z(W, T, K),
            moving=z(W, T),
            truck_db=z(W, T),
            truck_wb=z(W, T),
            load_db_bss=z(W, N, T),
            unload_wb_bss=z(W, N, T),
            load_wb_bcs=z(W, M, T),
            unload_db_bcs=z(W, M, T),
            swaps=z(N, T),
            bss_db_supplied=z(N, T),
            bss_wb_received=z(N, T),
            bss_db_stock=z(N, T),
            bss_wb_stock=z(N, T),
            bcs_db_received=z(M, T),
            bcs_wb_supplied=z(M, T),
            piles_in=z(M, T),
            piles_out=z(M, T),
            backup=z(M, T),
            piles_busy=z(M, T),
            bcs_db_stock=z(M, T),
            bcs_wb_stock=z(M, T),
            charge_power=z(M, T),
            arcs=arcs,
        )

    # position lookups -------------------------------------------------
    def truck_pos(self, truck_id: int) -> int:
        for k, tr in enumerate(self.scenario.trucks):
            if tr.id == truck_id:
                return k
        raise KeyError(f"unknown truck id {truck_id}")

    def bss_pos(self, node: int) -> int:
        for k, b in enumerate(self.scenario.bss):
            if b.node == node:
                return k
        raise KeyError(f"unknown swap-station node {node}")

    def bcs_pos(self, node: int) -> int:
        for k, b in enumerate(self.scenario.bcs):
            if b.node == node:
                return k
        raise KeyError(f"unknown depot node {node}")

    def arc_pos(self, i: int, j: int) -> int:
        return self.arcs.index((i, j))

    def set_value(self, name: str, value: float):
        info = parse_name(name)
        fam, t = info["family"], info.get("t")
        ti = None if t is None else t - 1
        if fam == "arc":
            self.arc_choice[self.truck_pos(info["w"]), ti, self.arc_pos(info["i"], info["j"])] = value
        elif fam == "mov":
            self.moving[self.truck_pos(info["w"]), ti] = value
        elif fam == "tdb":
            self.truck_db[self.truck_pos(info["w"]), ti] = value
        elif fam == "twb":
            self.truck_wb[self.truck_pos(info["w"]), ti] = value
        elif fam == "ldb":
            self.load_db_bss[self.truck_pos(info["w"]), self.bss_pos(info["node"]), ti] = value
        elif fam == "uwb":
            self.unload_wb_bss[self.truck_pos(info["w"]), self.bss_pos(info["node"]), ti] = value
        elif fam == "lwb":
            self.load_wb_bcs[self.truck_pos(info["w"]), self.bcs_pos(info["node"]), ti] = value
        elif fam == "udb":
            self.unload_db_bcs[self.truck_pos(info["w"]), self.bcs_pos(info["node"]), ti] = value
        elif fam == "dsw":
            self.swaps[self.bss_pos(info["node"]), ti] = value
        elif fam == "supd":
            self.bss_db_supplied[self.bss_pos(info["node"]), ti] = value
        elif fam == "recw":
            self.bss_wb_received[self.bss_pos(info["node"]), ti] = value
        elif fam == "sdb":
            self.bss_db_stock[self.bss_pos(info["node"]), ti] = value
        elif fam == "swb":
            self.bss_wb_stock[self.bss_pos(info["node"]), ti] = value
        elif fam == "recd":
            self.bcs_db_received[self.bcs_pos(info["node"]), ti] = value
        elif fam == "supw":
            self.bcs_wb_supplied[self.bcs_pos(info["node"]), ti] = value
        elif fam == "bin":
            self.piles_in[self.bcs_pos(info["node"]), ti] = value
        elif fam == "bout":
            self.piles_out[self.bcs_pos(info["node"]), ti] = value
        elif fam == "back":
            self.backup[self.bcs_pos(info["node"]), ti] = value
        elif fam == "inch":
            self.piles_busy[self.bcs_pos(info["node"]), ti] = value
        elif fam == "cdb":
            self.bcs_db_stock[self.bcs_pos(info["node"]), ti] = value
        elif fam == "cwb":
            self.bcs_wb_stock[self.bcs_pos(info["node"]), ti] = value
        elif fam == "pw":
            self.charge_power[self.bcs_pos(info["node"]), ti] = value
        else:  # pragma: no cover - parse_name already rejects
            raise ValueError(fam)

    def get_value(self, name: str) -> float:
        info = parse_name(name)
        fam, t = info["family"], info.get("t")
        ti = None if t is None else t - 1
        s = self
        if fam == "arc":
            return s.arc_choice[s.truck_pos(info["w"]), ti, s.arc_pos(info["i"], info["j"])]
        table = {
            "mov": lambda: s.moving[s.truck_pos(info["w"]), ti],
            "tdb": lambda: s.truck_db[s.truck_pos(info["w"]), ti],
            "twb": lambda: s.truck_wb[s.truck_pos(info["w"]), ti],
            "ldb": lambda: s.load_db_bss[s.truck_pos(info["w"]), s.bss_pos(info["node"]), ti],
            "uwb": lambda: s.unload_wb_bss[s.truck_pos(info["w"]), s.bss_pos(info["node"]), ti],
            "lwb": lambda: s.load_wb_bcs[s.truck_pos(info["w"]), s.bcs_pos(info["node"]), ti],
            "udb": lambda: s.unload_db_bcs[s.truck_pos(info["w"]), s.bcs_pos(info["node"]), ti],
            "dsw": lambda: s.swaps[s.bss_pos(info["node"]), ti],
            "supd": lambda: s.bss_db_supplied[s.bss_pos(info["node"]), ti],
            "recw": lambda: s.bss_wb_received[s.bss_pos(info["node"]), ti],
            "sdb": lambda: s.bss_db_stock[s.bss_pos(info["node"]), ti],
            "swb": lambda: s.bss_wb_stock[s.bss_pos(info["node"]), ti],
            "recd": lambda: s.bcs_db_received[s.bcs_pos(info["node"]), ti],
            "supw": lambda: s.bcs_wb_supplied[s.bcs_pos(info["node"]), ti],
            "bin": lambda: s.piles_in[s.bcs_pos(info["node"]), ti],
            "bout": lambda: s.piles_out[s.bcs_pos(info["node"]), ti],
            "back": lambda: s.backup[s.bcs_pos(info["node"]), ti],
            "inch": lambda: s.piles_busy[s.bcs_pos(info["node"]), ti],
            "cdb": lambda: s.bcs_db_stock[s.bcs_pos(info["node"]), ti],
            "cwb": lambda: s.bcs_wb_stock[s.bcs_pos(info["node"]), ti],
            "pw": lambda: s.charge_power[s.bcs_pos(info["node"]), ti],
        }
        return float(table[fam]())

    def copy(self) -> "Solution":
        import copy as _copy

        return _copy.deepcopy(self)

    def round_counts(self, tol: float = 1e-6) -> "Solution":
        """Snap near-integer count values to integers (power stays continuous)."""
        out = self.copy()
        for name in (
            "arc_choice", "moving", "truck_db", "truck_wb", "load_db_bss",
            "unload_wb_bss", "load_wb_bcs", "unload_db_bcs", "swaps",
            "bss_db_supplied", "bss_wb_received", "bss_db_stock", "bss_wb_stock",
            "bcs_db_received", "bcs_wb_supplied", "piles_in", "piles_out",
            "backup", "piles_busy", "bcs_db_stock", "bcs_wb_stock",
        ):
            arr = getattr(out, name)
            r = np.round(arr)
            near = np.abs(arr - r) <= tol
            arr[near] = r[near]
        return out
