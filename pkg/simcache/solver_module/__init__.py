__all__ = ['solver', 'ttl_maps']

# Local Definitions
from .solver import FixedPointSolver, SolverResult, SolverState, fixed_point
from .ttl_maps import entry_rates, hit_probs, occupancies, refresh_rates, solve_tc
