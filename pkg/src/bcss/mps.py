"""Free-format MPS export/import and the flat solution-file format.

The MPS file carries the model as a minimization of the negated objective
(the standard solver convention); a header comment records that the original
problem maximizes.  Integer columns are wrapped in INTORG/INTEND markers and
every column gets explicit LO/UP bounds.  Solution files are plain
``name value`` lines with ``#`` comments.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .model import MilpModel
from .solution import Solution
from .solver import CanonicalLp, canonicalize

OBJ_ROW = "OBJ"


class MpsError(ValueError):
    pass


def _num(x: float) -> str:
    return f"{x:.17g}"


def export_mps(model: MilpModel, path, canon: CanonicalLp | None = None):
    """Write the model as free-format MPS; deterministic byte output."""
    canon = canon or canonicalize(model)
    by_col: list[list[tuple[str, float]]] = [[] for _ in range(canon.n)]
    csc = canon.A.tocsc()
    for j in range(canon.n):
        for p in range(csc.indptr[j], csc.indptr[j + 1]):
            by_col[j].append((canon.row_names[csc.indices[p]], csc.data[p]))
    lines = [
        "* maximization problem exported as: minimize the negated objective",
        f"* provenance {model.provenance}",
        f"NAME bcss_{model.provenance}",
        "ROWS",
        f" N {OBJ_ROW}",
    ]
    sense_code = {"<=": "L", ">=": "G", "=": "E"}
    for name, sense in zip(canon.row_names, canon.senses):
        lines.append(f" {sense_code[sense]} {name}")
    lines.append("COLUMNS")
    marker_on = False
    mk = 0
    for j, name in enumerate(canon.names):
        want_int = bool(canon.integrality[j])
        if want_int != marker_on:
            mk += 1
            state = "INTORG" if want_int else "INTEND"
            lines.append(f" MK{mk:04d} 'MARKER' '{state}'")
            marker_on = want_int
        if canon.objective[j] != 0.0:
            lines.append(f" {name} {OBJ_ROW} {_num(-canon.objective[j])}")
        for row_name, coef in by_col[j]:
            lines.append(f" {name} {row_name} {_num(coef)}")
    if marker_on:
        mk += 1
        lines.append(f" MK{mk:04d} 'MARKER' 'INTEND'")
    lines.append("RHS")
    for name, rhs in zip(canon.row_names, canon.rhs):
        if rhs != 0.0:
            lines.append(f" RHS {name} {_num(rhs)}")
    lines.append("BOUNDS")
    for j, name in enumerate(canon.names):
        lines.append(f" LO BND {name} {_num(canon.lo[j])}")
        if np.isfinite(canon.hi[j]):
            lines.append(f" UP BND {name} {_num(canon.hi[j])}")
    lines.append("ENDATA")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")


@dataclass
class ParsedMps:
    name: str
    col_names: list[str]
    lo: np.ndarray
    hi: np.ndarray
    c_min: np.ndarray            # objective of the minimization as stored
    integrality: np.ndarray
    A: sp.csr_matrix
    senses: list[str]
    rhs: np.ndarray
    row_names: list[str]
    maximize_negated: bool = True


def parse_mps(path) -> ParsedMps:
    """Read back a free-format MPS file (the dialect export_mps writes)."""
    section = None
    name = ""
    row_sense: dict[str, str] = {}
    row_order: list[str] = []
    row_pos: dict[str, int] = {}
    col_order: list[str] = []
    col_idx: dict[str, int] = {}
    entries: list[tuple[int, int, float]] = []
    obj: dict[int, float] = {}
    rhs: dict[str, float] = {}
    lo: dict[int, float] = {}
    hi: dict[int, float] = {}
    integer_cols: set[int] = set()
    int_mode = False
    sense_map = {"L": "<=", "G": ">=", "E": "="}
    with open(path, encoding="utf-8") as fh:
        for raw in fh:
            line = raw.rstrip()
            if not line or line.lstrip().startswith("*"):
                continue
            head = line.split()
            # section headers start in column 1; data lines are indented (the
            # RHS set name is conventionally also "RHS", so indentation matters)
            if not raw[0].isspace() and head[0] in (
                "NAME", "ROWS", "COLUMNS", "RHS", "RANGES", "BOUNDS", "ENDATA"
            ):
                section = head[0]
                if section == "NAME" and len(head) > 1:
                    name = head[1]
                continue
            f = line.split()
            if section == "ROWS":
                code, rname = f[0], f[1]
                if code == "N":
                    continue
                if code not in sense_map:
                    raise MpsError(f"unknown row type {code!r}")
                row_sense[rname] = sense_map[code]
                row_pos[rname] = len(row_order)
                row_order.append(rname)
            elif section == "COLUMNS":
                if len(f) >= 3 and f[1] == "'MARKER'":
                    int_mode = f[2] == "'INTORG'"
                    continue
                cname = f[0]
                if cname not in col_idx:
                    col_idx[cname] = len(col_order)
                    col_order.append(cname)
                    if int_mode:
                        integer_cols.add(col_idx[cname])
                j = col_idx[cname]
                pairs = f[1:]
                if len(pairs) % 2:
                    raise MpsError(f"odd COLUMNS entry: {line!r}")
                for rname, val in zip(pairs[::2], pairs[1::2]):
                    if rname == OBJ_ROW:
                        obj[j] = obj.get(j, 0.0) + float(val)
                    else:
                        if rname not in row_sense:
                            raise MpsError(f"COLUMNS references unknown row {rname!r}")
                        entries.append((row_pos[rname], j, float(val)))
            elif section == "RHS":
                pairs = f[1:]
                for rname, val in zip(pairs[::2], pairs[1::2]):
                    rhs[rname] = float(val)
            elif section == "BOUNDS":
                kind, _, cname = f[0], f[1], f[2]
                if cname not in col_idx:
                    raise MpsError(f"BOUNDS references unknown column {cname!r}")
                j = col_idx[cname]
                if kind == "LO":
                    lo[j] = float(f[3])
                elif kind == "UP":
                    hi[j] = float(f[3])
                elif kind == "FX":
                    lo[j] = hi[j] = float(f[3])
                elif kind == "BV":
                    lo[j], hi[j] = 0.0, 1.0
                    integer_cols.add(j)
                elif kind == "FR":
                    lo[j] = -np.inf
                else:
                    raise MpsError(f"unsupported bound type {kind!r}")
            elif section == "ENDATA":
                break
    n = len(col_order)
    m = len(row_order)
    lo_arr = np.zeros(n)
    hi_arr = np.full(n, np.inf)
    for j, v in lo.items():
        lo_arr[j] = v
    for j, v in hi.items():
        hi_arr[j] = v
    c = np.zeros(n)
    for j, v in obj.items():
        c[j] = v
    integrality = np.zeros(n, dtype=bool)
    integrality[list(integer_cols)] = True
    data = [e[2] for e in entries]
    ri = [e[0] for e in entries]
    ci = [e[1] for e in entries]
    A = sp.csr_matrix((data, (ri, ci)), shape=(m, n))
    return ParsedMps(
        name=name,
        col_names=col_order,
        lo=lo_arr,
        hi=hi_arr,
        c_min=c,
        integrality=integrality,
        A=A,
        senses=[row_sense[r] for r in row_order],
        rhs=np.array([rhs.get(r, 0.0) for r in row_order]),
        row_names=row_order,
    )


def coefficient_multiset(canonlike) -> dict:
    """Hashable coefficient view used for export/import equality checks."""
    out: dict = {}
    A = canonlike.A.tocoo()
    names = canonlike.col_names if hasattr(canonlike, "col_names") else canonlike.names
    rows = canonlike.row_names
    for r, cjs, v in zip(A.row, A.col, A.data):
        out[("A", rows[r], names[cjs])] = v
    obj = canonlike.c_min if hasattr(canonlike, "c_min") else -canonlike.objective
    for j, v in enumerate(obj):
        if v != 0.0:
            out[("obj", names[j])] = v
    for k, rname in enumerate(rows):
        out[("sense", rname)] = canonlike.senses[k]
        if canonlike.rhs[k] != 0.0:
            out[("rhs", rname)] = canonlike.rhs[k]
    for j, nm in enumerate(names):
        out[("lo", nm)] = canonlike.lo[j]
        if np.isfinite(canonlike.hi[j]):
            out[("hi", nm)] = canonlike.hi[j]
        if canonlike.integrality[j]:
            out[("int", nm)] = True
    return out


def write_solution_file(values: dict[str, float], path, comment: str = ""):
    with open(path, "w", encoding="utf-8") as fh:
        if comment:
            for ln in comment.splitlines():
                fh.write(f"# {ln}\n")
        for name in values:
            fh.write(f"{name} {_num(values[name])}\n")


def read_solution_file(path) -> dict[str, float]:
    values: dict[str, float] = {}
    with open(path, encoding="utf-8") as fh:
        for k, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) != 2:
                raise MpsError(f"{path}:{k}: expected 'name value', got {raw!r}")
            try:
                values[parts[0]] = float(parts[1])
            except ValueError as exc:
                raise MpsError(f"{path}:{k}: bad value {parts[1]!r}") from exc
    return values


def import_solution(
    model: MilpModel, path, feasibility_tolerance: float = 1e-7
) -> tuple[Solution, list[str]]:
    """Load a name/value file against a model; returns (solution, warnings)."""
    values = read_solution_file(path)
    known = {v.name for v in model.variables}
    unknown = sorted(set(values) - known)
    if unknown:
        raise MpsError(f"solution file names unknown variables: {unknown[:10]}")
    warnings = []
    missing = sorted(known - set(values))
    if missing:
        warnings.append(f"{len(missing)} variables missing from file; defaulted to 0")
    for v in model.variables:
        val = values.get(v.name, 0.0)
        if val < v.lo - feasibility_tolerance or val > v.hi + feasibility_tolerance:
            raise MpsError(
                f"{v.name} = {val} violates declared bounds [{v.lo}, {v.hi}]"
            )
    sol = Solution.zeros(model.scenario, model.tsn.arcs)
    for name, val in values.items():
        sol.set_value(name, val)
    return sol, warnings
