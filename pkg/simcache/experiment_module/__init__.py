__all__ = ['cli', 'experiment_config', 'experiment_module']

# Local Definitions
from .experiment_config import ExperimentConfig, parse_capacities, parse_grid
from .experiment_module import ExperimentModule
