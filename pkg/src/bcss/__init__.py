"""Battery charging/swapping logistics optimization over a time-space network.

Builds the full mixed-integer model of a closed-loop pack supply chain
(swap stations, one or more charging depots, a truck fleet on a time-space
network), solves it exactly at desk scale with an in-repo branch-and-bound
solver, exports MPS for external solvers at full scale, and independently
validates and reports every solution.
"""

from .heuristic import HeuristicTrace, greedy_schedule
from .model import MilpModel, build_model, objective_components
from .mps import export_mps, import_solution, parse_mps
from .network import (
    NetworkError,
    NodeKind,
    TimeSpaceNetwork,
    TransportEdge,
    TransportNetwork,
    TransportNode,
    build_tsn,
    expand_virtual_nodes,
)
from .scenario import (
    BcsSpec,
    BssSpec,
    CostParams,
    EvtolArrival,
    Scenario,
    ScenarioError,
    TruckSpec,
    build_demand_curves,
    parse_scenario,
    save_scenario,
    validate_feasibility_heuristics,
)
from .solution import Solution
from .solver import (
    CanonicalLp,
    MilpSolution,
    SolveOptions,
    canonicalize,
    solve_bnb,
    solve_lp_relaxation,
)
from .validator import (
    SearchSpaceExceeded,
    ValidationReport,
    brute_force_optimum,
    check_solution,
)

__version__ = "0.1.0"

__all__ = [
    "BcsSpec", "BssSpec", "CanonicalLp", "CostParams", "EvtolArrival",
    "HeuristicTrace", "MilpModel", "MilpSolution", "NetworkError", "NodeKind",
    "Scenario", "ScenarioError", "SearchSpaceExceeded", "SolveOptions",
    "Solution", "TimeSpaceNetwork", "TransportEdge", "TransportNetwork",
    "TransportNode", "ValidationReport", "build_demand_curves", "build_model",
    "build_tsn", "brute_force_optimum", "canonicalize", "check_solution",
    "expand_virtual_nodes", "export_mps", "greedy_schedule", "import_solution",
    "objective_components", "parse_mps", "parse_scenario", "save_scenario",
    "solve_bnb", "solve_lp_relaxation", "validate_feasibility_heuristics",
]
