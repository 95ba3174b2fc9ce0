# External modules
from collections import namedtuple
import numpy as np

# Local modules
from ..solver_module import solve_tc

TTLEstimate = namedtuple('TTLEstimate', ['t_c', 'h', 'hit_rate'])


def lru_ttl(rates, C):
    """
    Che approximation of a plain LRU cache: h_n = 1 - exp(-lambda_n t_C) with
    sum(h) = C.
    """
    rates = np.asarray(rates, dtype=np.float64)
    t_c = solve_tc(rates, rates, C)
    h = -np.expm1(-rates * t_c)
    return TTLEstimate(t_c, h, float(np.dot(rates, h)))


def lru_agg(rates, index, C):
    """
    LRU with aggregate requests: every item is treated as if it received the
    requests of its whole closed neighbourhood, o_n = h_n = 1 - exp(-sum_{i in N[n]} lambda_i t_C),
    with sum(o) = C. The hit rate weights h by the items' own rates.
    """
    rates = np.asarray(rates, dtype=np.float64)
    aggregate = index.aggregate(rates)
    t_c = solve_tc(aggregate, aggregate, C)
    h = -np.expm1(-aggregate * t_c)
    return TTLEstimate(t_c, h, float(np.dot(rates, h)))
