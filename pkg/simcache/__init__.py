from __future__ import absolute_import

__all__ = ['catalog_module', 'workload_module', 'simulator_module', 'solver_module',
           'baseline_module', 'oracle_module', 'experiment_module']

__version__ = "1.0.0"
version = __version__

# Local Definitions
from .utilities import SimcacheEnvironment
from .catalog_module import Catalog, NeighborIndex, QModel, build_neighbor_index, closer_set
from .workload_module import PopularityProfile, RequestStream, gen_requests, ingest_trace, synth_grid_popularity
from .simulator_module import CacheSimulator, SimResult, aggregate_replications, simulate
from .solver_module import FixedPointSolver, SolverResult, fixed_point
from .baseline_module import CoverageInstance, greedy_coverage, lru_agg, lru_ttl
from .oracle_module import MarkovOracle, exact_hit_rate
from .experiment_module import ExperimentConfig, ExperimentModule

__env__report__ = SimcacheEnvironment.__simcache__environment__report__pretty__
__env__dict__ = SimcacheEnvironment.__simcache__environment__dict__
