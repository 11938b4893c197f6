import csv

import pytest

from bcss import build_model, check_solution, solve_bnb
from bcss.report import ReportError, SERIES_FILES, emit_series, summarize, write_comparison
from bcss.solution import Solution
from bcss.solver import SolveOptions

from fixtures import one_truck_basic, zero_demand


@pytest.fixture(scope="module")
def solved():
    sc = one_truck_basic()
    model = build_model(sc)
    res = solve_bnb(model, SolveOptions(lp_engine="simplex"))
    sol = res.to_solution(model)
    assert check_solution(sc, sol).verdict
    return sc, sol, res


def read_csv(path):
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    return rows[0], rows[1:]


class TestEmitSeries:
    def test_all_files_written(self, solved, tmp_path):
        sc, sol, res = solved
        written = emit_series(sc, sol, tmp_path, solver_info={"status": res.status})
        names = {p.split("/")[-1] for p in written}
        assert set(SERIES_FILES) == names

    def test_zero_solution_all_zero_summary(self, tmp_path):
        sc = zero_demand()
        from bcss.model import build_model

        model = build_model(sc)
        sol = Solution.zeros(sc, model.tsn.arcs)
        park = model.tsn.arcs.index((1, 1))
        sol.arc_choice[0, :, park] = 1
        emit_series(sc, sol, tmp_path)
        header, rows = read_csv(tmp_path / "summary.csv")
        assert rows[0][:4] == ["0", "0", "0", "0"]

    def test_bss_series_sandwich(self, solved, tmp_path):
        sc, sol, _ = solved
        emit_series(sc, sol, tmp_path)
        header, rows = read_csv(tmp_path / "bss_series.csv")
        ia, id_, imin = header.index("A"), header.index("D"), header.index("D_min")
        prev_d = 0.0
        for row in rows:
            a, d, dmin = float(row[ia]), float(row[id_]), float(row[imin])
            assert dmin <= d <= a
            assert d >= prev_d
            prev_d = d

    def test_swap_revenue_identity(self, solved, tmp_path):
        sc, sol, _ = solved
        emit_series(sc, sol, tmp_path)
        _, srows = read_csv(tmp_path / "summary.csv")
        _, brows = read_csv(tmp_path / "bss_series.csv")
        swaps_at_end = sum(float(r[3]) for r in brows if int(r[1]) == sc.horizon)
        assert float(srows[0][1]) == pytest.approx(
            sc.costs.swap_revenue_per_pack * swaps_at_end
        )

    def test_round_trip_regenerates_identically(self, solved, tmp_path):
        sc, sol, _ = solved
        a = tmp_path / "a"
        b = tmp_path / "b"
        emit_series(sc, sol, a)
        emit_series(sc, sol, b)
        for name in SERIES_FILES:
            assert (a / name).read_bytes() == (b / name).read_bytes()

    def test_unvalidated_solution_refused(self, solved, tmp_path):
        sc, sol, _ = solved
        with pytest.raises(ReportError, match="refusing"):
            emit_series(sc, sol, tmp_path, validated=False)

    def test_trajectory_states(self, solved, tmp_path):
        sc, sol, _ = solved
        emit_series(sc, sol, tmp_path)
        header, rows = read_csv(tmp_path / "truck_trajectory.csv")
        assert header == ["truck", "t", "from", "to", "state"]
        for row in rows:
            assert (row[2] == row[3]) == (row[4] == "park")


class TestSummarize:
    def test_single_row(self, solved):
        sc, sol, res = solved
        rows = summarize(sc, [("exact", sol, {"status": res.status, "gap": res.gap})])
        assert len(rows) == 1
        assert rows[0].total == pytest.approx(res.objective)

    def test_exact_dominates_heuristic(self, solved):
        from bcss import greedy_schedule

        sc, sol, res = solved
        trace = greedy_schedule(sc)
        entries = [("exact", sol, {"status": res.status})]
        if trace.status == "feasible":
            entries.insert(0, ("heuristic", trace.solution, {"status": "feasible"}))
            rows = summarize(sc, entries)
            assert rows[-1].total >= rows[0].total - 1e-9

    def test_identical_solutions_identical_rows(self, solved):
        sc, sol, _ = solved
        rows = summarize(sc, [("a", sol, {}), ("b", sol, {})])
        assert rows[0].total == rows[1].total
        assert rows[0].tran == rows[1].tran

    def test_empty_rejected(self, solved):
        sc, _, _ = solved
        with pytest.raises(ReportError):
            summarize(sc, [])

    def test_comparison_csv(self, solved, tmp_path):
        sc, sol, res = solved
        rows = summarize(sc, [("exact", sol, {"status": res.status, "wall_time": 1.25})])
        path = tmp_path / "comparison.csv"
        write_comparison(rows, path)
        header, data = read_csv(path)
        assert header[0] == "label"
        assert data[0][0] == "exact"
