__all__ = ['exceptions']

# Local Definitions
from .exceptions import (SimcacheError,
                         CatalogError,
                         NeighborhoodError,
                         WorkloadError,
                         InfeasibleCapacityError,
                         ConfigurationError,
                         StateSpaceError,
                         SimulationInvariantError)
