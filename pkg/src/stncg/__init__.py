"""Joint multi-hop routing and computation offloading for satellite-terrestrial
networks, solved exactly by column generation."""
from .baselines import check_feasibility, solve_dfs, solve_full_enumeration, solve_local_only
from .colgen import (
    ColGenOptions,
    ColGenResult,
    audit_optimality,
    result_to_dict,
    run_column_generation,
)
from .constellation import (
    GROUND,
    DuplexMode,
    Edge,
    LinkKind,
    Topology,
    build_topology,
    build_walker_star,
    neighbors,
    validate_topology,
)
from .lp import LpProblem, LpSolution, LpStatus, SimplexOptions, solve, to_mps
from .master import ColumnPool, DualPrices, MasterSolution, add_columns, build_rmp, solve_rmp
from .pricing import find_violating_ground, find_violating_intersat, truncated_bellman_ford
from .routing import Route, RouteKind, build_route_index, enumerate_routes
from .scenario import (
    DemandModel,
    Scenario,
    derive_compute_capacity,
    generate_demands,
    load_scenario,
    reference_scenario,
    scenario_to_dict,
)

__version__ = "0.1.0"
