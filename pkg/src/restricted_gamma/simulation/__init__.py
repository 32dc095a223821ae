"""Monte Carlo study engine."""

from .design import gen_design, gen_response
from .study import (
    ScenarioCell,
    aggregate_cell,
    grid_cells,
    run_grid,
    run_replication,
    run_scenario,
)

__all__ = [
    "ScenarioCell",
    "aggregate_cell",
    "gen_design",
    "gen_response",
    "grid_cells",
    "run_grid",
    "run_replication",
    "run_scenario",
]
