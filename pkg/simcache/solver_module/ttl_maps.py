"""
The maps of the TTL approximation for similarity caches: entry rates,
refresh rates, occupancies and hit probabilities, plus the capacity
constraint that fixes the characteristic time.

Every map works on the padded arrays of a NeighborIndex. Column 0 of each row
is the item itself; columns 1.. are its neighbours in the index order, so
prefix products along a row are the "no closer item is cached" terms.
"""
# External modules
import logging
import numpy as np
from scipy import optimize

# Local modules
from ..errors import ConfigurationError, InfeasibleCapacityError
from ..utilities.utilities import LOGGER_NAME

# Exponents lambda_r * t_C are clamped here; expm1(700) is finite in double.
MAX_EXPONENT = 700.
MAX_DOUBLINGS = 1024
MAX_BISECTIONS = 500


def _gathered(o, index):
    """
    o at every (n, position) entry of the index, 0 on padding.
    """
    o = np.asarray(o, dtype=np.float64)
    return np.where(index.mask, o[np.maximum(index.neighbors, 0)], 0.)


def _prefix_products(one_minus):
    """
    Exclusive prefix products along rows: column k holds the product of
    columns 0..k-1, column 0 holds 1.
    """
    cum = np.cumprod(one_minus, axis=1)
    ones = np.ones((one_minus.shape[0], 1), dtype=np.float64)
    return np.hstack((ones, cum[:, :-1])), cum[:, -1]


def _open_prefix(o, index):
    """
    Products over the open neighbourhood, skipping the item itself.
    """
    o_g = _gathered(o, index)
    one_minus = 1. - o_g
    one_minus[:, 0] = 1.
    excl, full = _prefix_products(one_minus)
    return o_g, excl, full


def entry_rates(o, index, q, rates):
    """
    Rate at which every item enters the cache.

    An absent item n enters on a request for n that no cached neighbour
    serves: either no neighbour is cached, or the closest cached neighbour i
    declines with probability 1 - q_i(n). Presence events are treated as
    independent.

    Parameters
    ----------
    o: array
        Occupancies, in [0, 1].

    index: NeighborIndex

    q: QModel

    rates: array
        Request rates lambda.

    Returns
    -------
    lambda_e: array
        Entry rates, each in [0, lambda_n].
    """
    rates = np.asarray(rates, dtype=np.float64)
    o_g, excl, none_cached = _open_prefix(o, index)
    q_m = index.q_matrix(q)
    declined = (1. - q_m[:, 1:]) * o_g[:, 1:] * excl[:, 1:]
    p_enter = np.minimum(none_cached + declined.sum(axis=1), 1.)
    return rates * p_enter


def refresh_rates(o, index, q, rates):
    """
    Rate at which every cached item is moved to the front: its own requests,
    plus requests for each neighbour i that it serves because it is the
    closest cached item to i (every item of N[i] before it is absent) and the
    serve draw succeeds.
    """
    rates = np.asarray(rates, dtype=np.float64)
    mask = index.mask
    one_minus = np.where(mask, 1. - _gathered(o, index), 1.)
    excl, _ = _prefix_products(one_minus)
    contrib = rates[:, None] * index.q_matrix(q) * excl
    return np.bincount(index.neighbors[mask], weights=contrib[mask], minlength=index.n_items)


def occupancies(lambda_e, lambda_r, t_c):
    """
    o_n = E_n / (1/lambda_e_n + E_n) with E_n = expm1(lambda_r_n t_C) / lambda_r_n
    the expected time in cache. E_n = t_C when lambda_r_n = 0 and o_n = 0
    when lambda_e_n = 0.
    """
    lambda_e = np.asarray(lambda_e, dtype=np.float64)
    lambda_r = np.asarray(lambda_r, dtype=np.float64)
    t_c = float(t_c)
    exponent = np.minimum(lambda_r * t_c, MAX_EXPONENT)
    with np.errstate(divide='ignore', invalid='ignore'):
        on_time = np.where(lambda_r > 0., np.expm1(exponent) / np.where(lambda_r > 0., lambda_r, 1.), t_c)
    entered = lambda_e * on_time
    return entered / (1. + entered)


def hit_probs(o, index, q):
    """
    h_n = sum over i in N[n] of q_i(n) o_i prod over N_i(n) of (1 - o_m).

    Computed exactly as written, without clamping: states where n and a
    farther neighbour are both cached count twice, so h_n may exceed 1.
    """
    o_g, excl, _ = _open_prefix(o, index)
    q_m = index.q_matrix(q)
    return o_g[:, 0] + (q_m[:, 1:] * o_g[:, 1:] * excl[:, 1:]).sum(axis=1)


def solve_tc(lambda_e, lambda_r, C):
    """
    Characteristic time t_C such that sum(occupancies(lambda_e, lambda_r, t_C)) = C.

    The bracket [0, t] is doubled until the sum reaches C, then bisected.

    Raises
    ------
    InfeasibleCapacityError
        If C is not strictly below the number of items with lambda_e > 0.
    """
    logger = logging.getLogger(LOGGER_NAME)
    lambda_e = np.asarray(lambda_e, dtype=np.float64)
    lambda_r = np.asarray(lambda_r, dtype=np.float64)
    C = float(C)
    if not np.isfinite(C) or C <= 0.:
        raise ConfigurationError("Cache capacity must be positive, got {}".format(C))
    reachable = int(np.count_nonzero(lambda_e > 0.))
    if C >= reachable:
        raise InfeasibleCapacityError(C, reachable)

    def excess(t):
        return occupancies(lambda_e, lambda_r, t).sum() - C

    hi = 1.
    for _ in range(MAX_DOUBLINGS):
        if excess(hi) >= 0.:
            break
        hi *= 2.
    else:
        raise InfeasibleCapacityError(C, reachable)
    t_c = optimize.bisect(excess, 0., hi, xtol=np.finfo(np.float64).tiny,
                          rtol=4. * np.finfo(np.float64).eps, maxiter=MAX_BISECTIONS)
    logger.debug("Characteristic time %.17g for C=%g (bracket %g)", t_c, C, hi)
    return t_c
