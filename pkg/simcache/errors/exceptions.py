"""
Exceptions raised by simcache.

Every exception also derives from the builtin that callers would otherwise
expect (``ValueError`` for bad input and so on), so existing ``except``
clauses keep working.
"""


class SimcacheError(Exception):
    """Base class for all simcache errors."""


class CatalogError(SimcacheError, ValueError):
    """Malformed catalog, bad item ids, dimension mismatch or invalid threshold."""


class NeighborhoodError(SimcacheError, ValueError):
    """An item was looked up in a neighbourhood that does not contain it."""


class WorkloadError(SimcacheError, ValueError):
    """Invalid popularity profile, trace or request stream parameters."""


class InfeasibleCapacityError(SimcacheError, ValueError):
    """
    The cache capacity is not strictly below the number of items that can
    ever enter the cache, so no characteristic time satisfies the capacity
    constraint.
    """

    def __init__(self, capacity, reachable):
        self.capacity = capacity
        self.reachable = reachable
        msg = "Capacity {} is infeasible: only {} items can enter the cache"
        super().__init__(msg.format(capacity, reachable))


class ConfigurationError(SimcacheError, ValueError):
    """Inconsistent experiment or replication configuration."""


class StateSpaceError(SimcacheError, RuntimeError):
    """The exact Markov chain has more states than the configured cap."""


class SimulationInvariantError(SimcacheError, AssertionError):
    """A debug-mode simulation check failed."""
