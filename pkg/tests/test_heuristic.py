import pytest

from bcss import check_solution, greedy_schedule, parse_scenario
from bcss.heuristic import FEASIBLE, INFEASIBLE_GUESS
from bcss.scenario import from_dict, to_dict

from fixtures import (
    EXPECTED_OPTIMA,
    FIXTURES,
    infeasible_deadline,
    stock_only,
    zero_demand,
)


def test_zero_demand_parks_everything():
    trace = greedy_schedule(zero_demand())
    assert trace.status == FEASIBLE
    assert trace.objective == 0.0
    assert trace.solution.moving.sum() == 0


def test_stock_served_demand_schedules_no_trips():
    trace = greedy_schedule(stock_only())
    assert trace.status == FEASIBLE
    assert trace.solution.moving.sum() == 0
    assert trace.solution.load_wb_bcs.sum() == 0
    assert any("no truck trips" in n for n in trace.notes)


@pytest.mark.parametrize("name", sorted(FIXTURES))
def test_feasible_traces_validate_and_respect_optimum(name):
    sc = FIXTURES[name]()
    trace = greedy_schedule(sc)
    if trace.status != FEASIBLE:
        return  # an infeasible guess is allowed; it must not fake an objective
    report = check_solution(sc, trace.solution)
    assert report.verdict, report.to_table()
    assert trace.objective <= EXPECTED_OPTIMA[name] + 1e-9
    assert trace.objective == pytest.approx(report.components[3])


def test_infeasible_scenario_yields_guess_not_crash():
    trace = greedy_schedule(infeasible_deadline())
    assert trace.status == INFEASIBLE_GUESS
    assert trace.objective is None
    assert trace.notes  # carries the reasons for diagnostics


def test_scaled_scenario_feasible_with_early_loaded_departure():
    sc = parse_scenario("src/bcss/data/shanghai24_scaled.json")
    trace = greedy_schedule(sc)
    assert trace.status == FEASIBLE
    sol = trace.solution
    loaded_departures = [
        (w, t)
        for w in range(len(sc.trucks))
        for t in range(4)
        if sol.moving[w, t] and sol.truck_wb[w, t] > 0
    ]
    assert loaded_departures, "a loaded truck must leave the depot early"


def test_trace_notes_describe_decisions():
    sc = parse_scenario("src/bcss/data/shanghai24_scaled.json")
    trace = greedy_schedule(sc)
    assert any("load" in n and "station" in n for n in trace.notes)


def test_determinism():
    sc = parse_scenario("src/bcss/data/shanghai24_scaled.json")
    a = greedy_schedule(sc)
    b = greedy_schedule(sc)
    assert a.status == b.status
    assert a.objective == b.objective
    assert (a.solution.arc_choice == b.solution.arc_choice).all()
