__all__ = ['coverage', 'lru']

# Local Definitions
from .coverage import CoverageInstance, CoverageResult, exhaustive_coverage, greedy_coverage
from .lru import TTLEstimate, lru_agg, lru_ttl
