"""Plot-ready CSV series and run summaries for a validated solution.

One file per series so external tools can chart them directly:
truck_trajectory.csv, truck_inventory.csv, bss_series.csv, bcs_series.csv,
summary.csv and comparison.csv.  All files are RFC-4180 CSV with a header
row and deterministic content (wall-clock timing stays out of summary.csv
and lives in run_info.json instead).
"""

from __future__ import annotations

import csv
import os
from dataclasses import dataclass

from .model import objective_components
from .scenario import Scenario
from .solution import Solution

SERIES_FILES = (
    "truck_trajectory.csv",
    "truck_inventory.csv",
    "bss_series.csv",
    "bcs_series.csv",
    "summary.csv",
)


class ReportError(ValueError):
    pass


def _write(path, header, rows):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        w.writerows(rows)


def _fmt(x: float) -> str:
    v = float(x)
    if v == int(v):
        return str(int(v))
    return f"{v:.10g}"


def emit_series(
    scenario: Scenario,
    sol: Solution,
    out_dir,
    validated: bool = True,
    solver_info: dict | None = None,
) -> list[str]:
    """Write the full series bundle; returns the file paths written."""
    if not validated:
        raise ReportError("refusing to report an unvalidated solution")
    os.makedirs(out_dir, exist_ok=True)
    T = scenario.horizon
    written = []

    rows = []
    for w, tr in enumerate(scenario.trucks):
        for t in range(T):
            k = int(sol.arc_choice[w, t].argmax())
            i, j = sol.arcs[k]
            rows.append([tr.id, t + 1, i, j, "travel" if i != j else "park"])
    path = os.path.join(out_dir, "truck_trajectory.csv")
    _write(path, ["truck", "t", "from", "to", "state"], rows)
    written.append(path)

    rows = []
    for w, tr in enumerate(scenario.trucks):
        for t in range(T):
            rows.append([tr.id, t + 1, _fmt(sol.truck_db[w, t]), _fmt(sol.truck_wb[w, t])])
    path = os.path.join(out_dir, "truck_inventory.csv")
    _write(path, ["truck", "t", "DB", "WB"], rows)
    written.append(path)

    rows = []
    for n, b in enumerate(scenario.bss):
        for t in range(T):
            rows.append(
                [
                    b.node,
                    t + 1,
                    b.arrival[t],
                    _fmt(sol.swaps[n, t]),
                    b.min_departure[t],
                    _fmt(sol.bss_db_stock[n, t]),
                    _fmt(sol.bss_wb_stock[n, t]),
                    _fmt(sol.bss_wb_received[n, t]),
                    _fmt(sol.bss_db_supplied[n, t]),
                ]
            )
    path = os.path.join(out_dir, "bss_series.csv")
    _write(path, ["n", "t", "A", "D", "D_min", "db_stock", "wb_stock", "received", "supplied"], rows)
    written.append(path)

    rows = []
    for m, b in enumerate(scenario.bcs):
        for t in range(T):
            rows.append(
                [
                    b.node,
                    t + 1,
                    _fmt(sol.piles_in[m, t]),
                    _fmt(sol.piles_out[m, t]),
                    _fmt(sol.backup[m, t]),
                    _fmt(sol.piles_busy[m, t]),
                    _fmt(sol.bcs_db_stock[m, t]),
                    _fmt(sol.bcs_wb_stock[m, t]),
                    _fmt(sol.charge_power[m, t]),
                    _fmt(b.price[t]),
                ]
            )
    path = os.path.join(out_dir, "bcs_series.csv")
    _write(
        path,
        ["m", "t", "bin", "bout", "backup", "in_char", "db_stock", "wb_stock", "power_kW", "price"],
        rows,
    )
    written.append(path)

    tran, swaps, depot, total = objective_components(scenario, sol)
    info = solver_info or {}
    path = os.path.join(out_dir, "summary.csv")
    _write(
        path,
        ["P_obj_tran", "P_obj_BSS", "P_obj_BCS", "P_obj_all", "status", "bound", "gap", "nodes"],
        [
            [
                _fmt(tran),
                _fmt(swaps),
                _fmt(depot),
                _fmt(total),
                info.get("status", ""),
                _fmt(info["bound"]) if "bound" in info else "",
                _fmt(info["gap"]) if "gap" in info else "",
                info.get("nodes", ""),
            ]
        ],
    )
    written.append(path)
    return written


@dataclass
class SummaryRow:
    label: str
    status: str
    tran: float
    swaps: float
    depot: float
    total: float
    bound: float | None = None
    gap: float | None = None
    wall_time: float | None = None


def summarize(
    scenario: Scenario, entries: list[tuple[str, Solution, dict]]
) -> list[SummaryRow]:
    """Comparison rows for heuristic / exact / imported solutions."""
    if not entries:
        raise ReportError("nothing to summarize")
    rows = []
    for label, sol, info in entries:
        tran, swaps, depot, total = objective_components(scenario, sol)
        rows.append(
            SummaryRow(
                label=label,
                status=info.get("status", ""),
                tran=tran,
                swaps=swaps,
                depot=depot,
                total=total,
                bound=info.get("bound"),
                gap=info.get("gap"),
                wall_time=info.get("wall_time"),
            )
        )
    return rows


def write_comparison(rows: list[SummaryRow], path):
    _write(
        path,
        ["label", "status", "P_obj_tran", "P_obj_BSS", "P_obj_BCS", "P_obj_all", "bound", "gap", "wall_time_s"],
        [
            [
                r.label,
                r.status,
                _fmt(r.tran),
                _fmt(r.swaps),
                _fmt(r.depot),
                _fmt(r.total),
                _fmt(r.bound) if r.bound is not None else "",
                _fmt(r.gap) if r.gap is not None else "",
                f"{r.wall_time:.2f}" if r.wall_time is not None else "",
            ]
            for r in rows
        ],
    )
