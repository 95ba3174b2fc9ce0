__all__ = ['simulator']

# Local Definitions
from .simulator import (CacheSimulator,
                        CacheState,
                        ReplicationSummary,
                        SimResult,
                        aggregate_replications,
                        replication_seeds,
                        simulate)
