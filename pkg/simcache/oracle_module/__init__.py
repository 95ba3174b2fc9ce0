__all__ = ['markov_oracle']

# Local Definitions
from .markov_oracle import ExactResult, MarkovOracle, exact_hit_rate
