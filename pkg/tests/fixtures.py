"""Tiny scenario builders shared across the test suite.

Every fixture is small enough for the exhaustive oracle (at most 2 stations
beyond the depot, horizon <= 6, 1-2 trucks of capacity <= 3, <= 3 piles).
EXPECTED_OPTIMA holds objective values computed once with
`bcss.validator.brute_force_optimum` and frozen; `bcss brute-force` on the
serialized fixture reproduces them.
"""

from bcss import (
    BcsSpec,
    BssSpec,
    CostParams,
    NodeKind,
    Scenario,
    TransportEdge,
    TransportNetwork,
    TransportNode,
    TruckSpec,
)

DEFAULT_COSTS = CostParams(
    travel_cost_per_step=1.0,
    labor_cost_per_pack=0.1,
    swap_revenue_per_pack=6.0,
    degradation_cost_per_kwh=0.01,
    backup_cost_per_pack=0.5,
    battery_kwh=10.0,
    charge_efficiency=0.95,
    max_pile_kw=30.0,
    terminal_band_packs=2,
    step_hours=1.0,
)


def _net(kinds, edges):
    nodes = tuple(TransportNode(i + 1, NodeKind(k)) for i, k in enumerate(kinds))
    return TransportNetwork(nodes, tuple(TransportEdge(*e) for e in edges))


def one_truck_basic() -> Scenario:
    """Single depot-station pair; one delivery round forced by the deadline."""
    return Scenario(
        network=_net(["BCS", "BSS"], [(1, 2, 1)]),
        horizon=5,
        trucks=(TruckSpec(1, 2, 1),),
        bss=(BssSpec(node=2, init_db=1, init_wb=1, cap=5,
                     arrival=(0, 1, 2, 2, 2), min_departure=(0, 0, 0, 0, 2)),),
        bcs=(BcsSpec(node=1, chargers=2, db_cap=4, wb_cap=4, backup_cap=3, t_c=1,
                     price=(0.1, 0.2, 0.1, 0.3, 0.3), charge_enabled=(1,) * 5),),
        costs=DEFAULT_COSTS,
    )


def zero_demand() -> Scenario:
    return Scenario(
        network=_net(["BCS", "BSS"], [(1, 2, 1)]),
        horizon=4,
        trucks=(TruckSpec(1, 2, 1),),
        bss=(BssSpec(node=2, init_db=1, init_wb=1, cap=5,
                     arrival=(0, 0, 0, 0), min_departure=(0, 0, 0, 0)),),
        bcs=(BcsSpec(node=1, chargers=2, db_cap=4, wb_cap=4, backup_cap=3, t_c=1,
                     price=(0.1, 0.2, 0.1, 0.3), charge_enabled=(1,) * 4),),
        costs=DEFAULT_COSTS,
    )


def stock_only() -> Scenario:
    """Demand coverable by the initial station stock inside the terminal band."""
    return Scenario(
        network=_net(["BCS", "BSS"], [(1, 2, 1)]),
        horizon=4,
        trucks=(TruckSpec(1, 3, 1),),
        bss=(BssSpec(node=2, init_db=1, init_wb=2, cap=5,
                     arrival=(0, 1, 1, 1), min_departure=(0, 0, 0, 1)),),
        bcs=(BcsSpec(node=1, chargers=2, db_cap=4, wb_cap=4, backup_cap=3, t_c=1,
                     price=(0.1, 0.2, 0.1, 0.3), charge_enabled=(1,) * 4),),
        costs=DEFAULT_COSTS,
    )


def two_stations() -> Scenario:
    """Two stations on unit edges compete for one truck."""
    return Scenario(
        network=_net(["BCS", "BSS", "BSS"], [(1, 2, 1), (1, 3, 1), (2, 3, 1)]),
        horizon=5,
        trucks=(TruckSpec(1, 3, 1),),
        bss=(
            BssSpec(node=2, init_db=1, init_wb=1, cap=5,
                    arrival=(0, 1, 1, 1, 1), min_departure=(0, 0, 0, 0, 1)),
            BssSpec(node=3, init_db=1, init_wb=1, cap=5,
                    arrival=(0, 0, 1, 2, 2), min_departure=(0, 0, 0, 0, 2)),
        ),
        bcs=(BcsSpec(node=1, chargers=2, db_cap=4, wb_cap=4, backup_cap=3, t_c=1,
                     price=(0.1, 0.15, 0.1, 0.2, 0.3), charge_enabled=(1,) * 5),),
        costs=DEFAULT_COSTS,
    )


def two_trucks() -> Scenario:
    """Two unit-capacity trucks; the deadline needs both moving."""
    from dataclasses import replace

    return Scenario(
        network=_net(["BCS", "BSS"], [(1, 2, 1)]),
        horizon=5,
        trucks=(TruckSpec(1, 1, 1), TruckSpec(2, 1, 1)),
        bss=(BssSpec(node=2, init_db=1, init_wb=1, cap=6,
                     arrival=(0, 1, 2, 3, 3), min_departure=(0, 0, 0, 0, 3)),),
        bcs=(BcsSpec(node=1, chargers=2, db_cap=4, wb_cap=4, backup_cap=3, t_c=1,
                     price=(0.1, 0.2, 0.15, 0.25, 0.3), charge_enabled=(1,) * 5),),
        # unit trucks cannot also haul packs back in time; widen the band
        costs=replace(DEFAULT_COSTS, terminal_band_packs=3),
    )


def slow_charger() -> Scenario:
    """Packs must sit two steps in a pile (t_c = 2) before coming out."""
    return Scenario(
        network=_net(["BCS", "BSS"], [(1, 2, 1)]),
        horizon=6,
        trucks=(TruckSpec(1, 2, 1),),
        bss=(BssSpec(node=2, init_db=1, init_wb=1, cap=5,
                     arrival=(0, 0, 1, 2, 2, 2), min_departure=(0, 0, 0, 0, 0, 2)),),
        bcs=(BcsSpec(node=1, chargers=2, db_cap=4, wb_cap=4, backup_cap=3, t_c=2,
                     price=(0.1, 0.1, 0.2, 0.15, 0.3, 0.3), charge_enabled=(1,) * 6),),
        costs=DEFAULT_COSTS,
    )


def with_virtual_node() -> Scenario:
    """Depot and station two steps apart; expansion inserts a pass-through node."""
    return Scenario(
        network=_net(["BCS", "BSS"], [(1, 2, 2)]),
        horizon=6,
        trucks=(TruckSpec(1, 2, 1),),
        bss=(BssSpec(node=2, init_db=1, init_wb=1, cap=5,
                     arrival=(0, 0, 0, 1, 2, 2), min_departure=(0, 0, 0, 0, 0, 2)),),
        bcs=(BcsSpec(node=1, chargers=2, db_cap=4, wb_cap=4, backup_cap=3, t_c=1,
                     price=(0.1, 0.15, 0.1, 0.2, 0.3, 0.3), charge_enabled=(1,) * 6),),
        costs=DEFAULT_COSTS,
    )


def infeasible_deadline() -> Scenario:
    """First-step departure requirement exceeds every reachable supply."""
    return Scenario(
        network=_net(["BCS", "BSS"], [(1, 2, 1)]),
        horizon=3,
        trucks=(TruckSpec(1, 2, 1),),
        bss=(BssSpec(node=2, init_db=1, init_wb=0, cap=5,
                     arrival=(1, 1, 1), min_departure=(1, 1, 1)),),
        bcs=(BcsSpec(node=1, chargers=2, db_cap=4, wb_cap=4, backup_cap=3, t_c=1,
                     price=(0.1, 0.2, 0.1), charge_enabled=(1,) * 3),),
        costs=DEFAULT_COSTS,
    )


FIXTURES = {
    "one_truck_basic": one_truck_basic,
    "zero_demand": zero_demand,
    "stock_only": stock_only,
    "two_stations": two_stations,
    "two_trucks": two_trucks,
    "slow_charger": slow_charger,
    "with_virtual_node": with_virtual_node,
}

# objective values computed once with brute_force_optimum and frozen
EXPECTED_OPTIMA = {
    "one_truck_basic": 8.089473684210526,
    "zero_demand": 0.0,
    "stock_only": 6.0,
    "two_stations": 14.615789473684211,
    "two_trucks": 10.178947368421053,
    "slow_charger": 9.142105263157895,
    "with_virtual_node": 7.615789473684211,
}
