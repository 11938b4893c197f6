import numpy as np
import pytest

from bcss import build_model, check_solution, parse_scenario, solve_bnb
from bcss.model import ALL_TAGS, ModelError, build_model, objective_components
from bcss.scenario import from_dict, to_dict
from bcss.solution import Solution
from bcss.solver import SolveOptions, canonicalize

from fixtures import one_truck_basic, two_stations, zero_demand


def tag_count(model, tag):
    return sum(1 for c in model.constraints if c.tag == tag)


class TestConstraintCounts:
    def test_tiny_instance_hand_enumeration(self):
        # one truck, two real nodes joined by a unit edge, two steps
        doc = to_dict(zero_demand())
        doc["horizon"] = 2
        for b in doc["bss"]:
            b["A"] = [0, 0]
            b["D_min"] = [0, 0]
        for b in doc["bcs"]:
            b["price"] = [0.1, 0.1]
            b["charge_enabled"] = [1, 1]
        model = build_model(from_dict(doc))
        assert tag_count(model, "eq1") == 2      # one per step
        assert tag_count(model, "eq2") == 1      # initial departure
        assert tag_count(model, "eq3") == 2      # per node at the single boundary
        assert tag_count(model, "eq4") == 2      # traveling indicator per step

    def test_full_topology_count_formula(self):
        model = build_model(parse_scenario("src/bcss/data/shanghai24.json"))
        W, T = 4, 24
        nodes = 5  # four real plus one pass-through
        assert tag_count(model, "eq1") == W * T
        assert tag_count(model, "eq2") == W
        assert tag_count(model, "eq3") == W * nodes * (T - 1)
        assert tag_count(model, "eq4") == W * T

    def test_residual_capacity_floor(self):
        model = build_model(parse_scenario("src/bcss/data/shanghai24.json"))
        rows = [c for c in model.constraints if c.tag == "eq9"]
        assert rows and all(c.rhs == 100 for c in rows)  # floor(300 / 3)

    def test_power_bound_value(self):
        model = build_model(parse_scenario("src/bcss/data/shanghai24.json"))
        v = model.var("pw_m1_t5")
        assert v.hi == pytest.approx(120 * 300)
        assert v.bound_tag == "eq37"

    def test_charge_disabled_zeroes_power_bound(self):
        doc = to_dict(one_truck_basic())
        doc["bcs"][0]["charge_enabled"] = [1, 1, 0, 1, 1]
        model = build_model(from_dict(doc))
        assert model.var("pw_m1_t3").hi == 0.0
        assert model.var("pw_m1_t4").hi > 0

    def test_depot_unloading_gated_by_depot_parking(self):
        model = build_model(one_truck_basic())
        rows = [c for c in model.constraints if c.tag == "eq14"]
        park_idx = model.var_idx("arc_w1_t2_i1_j1")
        gate = [c for c in rows if park_idx in c.coeffs]
        assert gate, "depot unloading must reference the depot parking arc"

    def test_first_step_exit_and_supply_fixed(self):
        model = build_model(one_truck_basic())
        names = {c.name: c for c in model.constraints}
        assert names["eq34_init_m1"].sense == "=" and names["eq34_init_m1"].rhs == 0
        assert names["eq35_init_m1"].sense == "=" and names["eq35_init_m1"].rhs == 0

    def test_terminal_band_rows_at_reference_scale(self):
        # band 30 around initial stocks of 200 -> [170, 230]
        model = build_model(parse_scenario("src/bcss/data/shanghai24.json"))
        rows = {c.name: c for c in model.constraints}
        assert rows["eq24_hi_n2"].rhs == 230 and rows["eq24_hi_n2"].sense == "<="
        assert rows["eq24_lo_n2"].rhs == 170 and rows["eq24_lo_n2"].sense == ">="
        assert rows["eq25_hi_n2"].rhs == 230
        assert rows["eq25_lo_n2"].rhs == 170

    def test_t_c_lag_empty_window(self):
        # with t_c = 2 the first pile-exit budget is an empty sum (== 0)
        doc = to_dict(one_truck_basic())
        doc["bcs"][0]["t_c"] = 2
        model = build_model(from_dict(doc))
        row = next(c for c in model.constraints if c.name == "eq32_m1_t1")
        fams = {model.variables[i].family for i in row.coeffs}
        assert fams == {"bout"} and row.rhs == 0.0


class TestTraceability:
    def test_every_tag_present(self):
        model = build_model(one_truck_basic())
        rows = model.traceability()
        assert [r[0] for r in rows] == list(ALL_TAGS)
        missing = [tag for tag, count, _ in rows if count == 0]
        assert missing == []

    def test_csv_written(self, tmp_path):
        model = build_model(one_truck_basic())
        path = tmp_path / "trace.csv"
        model.write_traceability_csv(path)
        lines = path.read_text().strip().splitlines()
        assert lines[0] == "tag,instance_count,variable_families_touched"
        assert len(lines) == len(ALL_TAGS) + 1


class TestDeterminism:
    def test_identical_scenarios_identical_models(self):
        a = build_model(one_truck_basic())
        b = build_model(one_truck_basic())
        assert a.canonical_lines() == b.canonical_lines()
        assert a.provenance == b.provenance

    def test_different_scenarios_different_digest(self):
        a = build_model(one_truck_basic())
        b = build_model(two_stations())
        assert a.provenance != b.provenance


class TestObjective:
    def test_zero_solution_objective_zero(self):
        model = build_model(one_truck_basic())
        sol = Solution.zeros(model.scenario, model.tsn.arcs)
        assert objective_components(model.scenario, sol) == (0.0, 0.0, 0.0, 0.0)

    def test_single_swap_revenue(self):
        model = build_model(one_truck_basic())
        sol = Solution.zeros(model.scenario, model.tsn.arcs)
        sol.swaps[0, -1] = 1
        tran, swap, depot, total = objective_components(model.scenario, sol)
        assert (tran, swap, depot, total) == (0.0, 6.0, 0.0, 6.0)

    def test_travel_and_handling_costs(self):
        # three traveling steps and four handled packs at reference prices
        doc = to_dict(one_truck_basic())
        doc["costs"]["travel_cost_per_step"] = 10.0
        sc = from_dict(doc)
        model = build_model(sc)
        sol = Solution.zeros(sc, model.tsn.arcs)
        sol.moving[0, 0:3] = 1
        sol.load_db_bss[0, 0, 2] = 2
        sol.unload_db_bcs[0, 0, 3] = 2
        tran, swap, depot, total = objective_components(sc, sol)
        assert tran == pytest.approx(-(10 * 3) - (0.1 * 4))
        assert total == pytest.approx(-30.4)

    def test_components_match_solver_objective(self):
        model = build_model(one_truck_basic())
        res = solve_bnb(model, SolveOptions(lp_engine="simplex"))
        sol = res.to_solution(model)
        total = objective_components(model.scenario, sol)[3]
        assert total == pytest.approx(res.objective, rel=1e-6)


class TestModelInvariants:
    def test_relaxing_min_departure_keeps_solutions_feasible(self):
        sc = one_truck_basic()
        model = build_model(sc)
        res = solve_bnb(model, SolveOptions(lp_engine="simplex"))
        assert check_solution(sc, res.to_solution(model)).verdict
        # lower the departure floor pointwise; the same solution must stay valid
        doc = to_dict(sc)
        doc["bss"][0]["D_min"] = [0, 0, 0, 0, 1]
        relaxed = from_dict(doc)
        sol = res.to_solution(model)
        sol.scenario = relaxed
        assert check_solution(relaxed, sol).verdict

    def test_depleted_pack_conservation(self):
        # every swap creates exactly one depleted pack, found on stations,
        # trucks or at the depot by the end of the horizon
        sc = two_stations()
        model = build_model(sc)
        res = solve_bnb(model, SolveOptions(lp_engine="simplex"))
        sol = res.to_solution(model)
        created = sol.swaps[:, -1].sum()
        d_bss = sum(
            sol.bss_db_stock[n, -1] - sc.bss[n].init_db for n in range(len(sc.bss))
        )
        d_truck = sol.truck_db[:, -1].sum()
        to_depot = sol.bcs_db_received.sum()
        assert d_bss + d_truck + to_depot == pytest.approx(created)

    def test_energy_identity_per_step(self):
        sc = one_truck_basic()
        model = build_model(sc)
        res = solve_bnb(model, SolveOptions(lp_engine="simplex"))
        sol = res.to_solution(model)
        c = sc.costs
        for t in range(sc.horizon):
            lhs = sol.charge_power[0, t] * c.charge_efficiency * c.step_hours
            assert lhs == pytest.approx(c.battery_kwh * sol.piles_out[0, t], abs=1e-7)

    def test_duplicate_coefficients_rejected(self):
        from bcss.model import LinearConstraint

        with pytest.raises(ModelError, match="no coefficients"):
            LinearConstraint("x", "eq1", {}, "<=", 0.0)
        with pytest.raises(ModelError, match="tag"):
            LinearConstraint("x", "eq16", {0: 1.0}, "<=", 0.0)
