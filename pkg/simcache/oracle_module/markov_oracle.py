"""
Exact steady state of small similarity caches.

The cache content in recency order is a Markov chain on the request epochs.
Its states are enumerated breadth first from the empty cache, the
transition matrix is assembled with scipy.sparse, and the limiting
distribution from the empty cache is found by power iteration.

Every non-empty reachable state has a self loop (a request for a cached
item with nonzero rate always hits that item), so the chain is aperiodic and
the iteration converges even when the chain is reducible.
"""
# External modules
from collections import deque, namedtuple
import numpy as np
import sys
from scipy import sparse

# Local modules
from ..errors import ConfigurationError, StateSpaceError
from ..simulator_module.simulator import POLICIES
from ..utilities import InitLogger, SelectParameter

ExactResult = namedtuple('ExactResult', ['hit_rate', 'h', 'o', 'pi', 'states', 'residual', 'iterations'])

RESIDUAL_WARNING = 1e-10


class MarkovOracle(object):

    def __init__(self, policy, index, q, rates, capacity, **kwargs):
        """
        Parameters
        ----------
        policy: string
            'lru', 'sim-lru' or 'rnd-lru'.

        index: NeighborIndex

        q: QModel

        rates: array
            Request probabilities per item.

        capacity: int
            Cache size C >= 1.

        **kwargs: dictionary
            max_states, tolerance, max_iterations (oracle_* configuration
            keywords), config_file and logger.
        """
        policy = str(policy).lower()
        if policy not in POLICIES:
            raise ConfigurationError("Unknown policy {}; expected one of {}".format(policy, POLICIES))
        if int(capacity) < 1:
            raise ConfigurationError("Cache capacity must be >= 1, got {}".format(capacity))
        self.policy = policy
        self.index = index
        self.q = q
        self.rates = np.asarray(rates, dtype=np.float64)
        self.capacity = int(capacity)
        self.max_states = int(self._parameter('max_states', kwargs))
        self.tolerance = float(self._parameter('tolerance', kwargs))
        self.max_iterations = int(self._parameter('max_iterations', kwargs))
        self.logger = InitLogger(kwargs)

        self.requested = [int(n) for n in np.flatnonzero(self.rates > 0.)]
        if policy == 'lru':
            self.rows = [[(n, 1.)] for n in range(index.n_items)]
        else:
            serve = index.q_matrix(q)
            if policy == 'sim-lru':
                serve = np.where(index.mask, 1., 0.)
            self.rows = [list(zip(row[:length].tolist(), s[:length].tolist()))
                         for row, s, length in zip(index.neighbors, serve, index.lengths)]

    @staticmethod
    def _parameter(name, kwargs):
        value = kwargs.get(name, None)
        if value is None:
            value = SelectParameter('oracle_' + name, kwargs, kwargs.get('config_file', None))
        return value

    def transitions(self, state):
        """
        Outcomes of one request in state: a list of (item requested, next
        state, probability, hit) with probabilities summing to 1.
        """
        outcomes = []
        cached = set(state)
        for n in self.requested:
            rate = self.rates[n]
            serve, server = 0., None
            for m, q_nm in self.rows[n]:
                if m in cached:
                    serve, server = q_nm, m
                    break
            if server is not None and serve > 0.:
                refreshed = (server,) + tuple(m for m in state if m != server)
                outcomes.append((n, refreshed, rate * serve, True))
            if serve < 1.:
                inserted = ((n,) + state)[:self.capacity]
                outcomes.append((n, inserted, rate * (1. - serve), False))
        return outcomes

    def enumerate_states(self):
        """
        States reachable from the empty cache, sorted lexicographically.
        """
        seen = {(): None}
        queue = deque([()])
        while queue:
            state = queue.popleft()
            for _, nxt, prob, _ in self.transitions(state):
                if prob > 0. and nxt not in seen:
                    seen[nxt] = None
                    if len(seen) > self.max_states:
                        msg = "More than {} reachable cache states (N={}, C={})"
                        raise StateSpaceError(msg.format(self.max_states, self.index.n_items, self.capacity))
                    queue.append(nxt)
        return sorted(seen)

    def build(self):
        """
        Row-stochastic transition matrix, per-state hit probability and
        per-(state, item) hit mass.
        """
        states = self.enumerate_states()
        position = {state: k for k, state in enumerate(states)}
        n_states, n_items = len(states), self.index.n_items
        rows, cols, vals = [], [], []
        state_hits = np.zeros(n_states, dtype=np.float64)
        item_hits = np.zeros((n_states, n_items), dtype=np.float64)
        for k, state in enumerate(states):
            for n, nxt, prob, hit in self.transitions(state):
                if prob <= 0.:
                    continue
                rows.append(k)
                cols.append(position[nxt])
                vals.append(prob)
                if hit:
                    state_hits[k] += prob
                    item_hits[k, n] += prob
        matrix = sparse.coo_matrix((vals, (rows, cols)), shape=(n_states, n_states)).tocsr()
        return states, matrix, state_hits, item_hits

    def solve(self):
        """
        Limiting distribution from the empty cache and the exact hit rate,
        per-item hit probabilities and occupancies.

        Returns
        -------
        result: ExactResult
        """
        states, matrix, state_hits, item_hits = self.build()
        self._log('info', "Markov chain: {} states, policy {} C={}".format(len(states), self.policy, self.capacity))
        transposed = matrix.T.tocsr()
        pi = np.zeros(len(states), dtype=np.float64)
        pi[0] = 1.
        iterations = 0
        for iterations in range(1, self.max_iterations + 1):
            nxt = transposed @ pi
            change = float(np.abs(nxt - pi).sum())
            pi = nxt
            if change <= self.tolerance:
                break
        else:
            self._log('warning', "Power iteration stopped after {} iterations (change {:.3g})".format(
                self.max_iterations, change))
        pi = pi / pi.sum()
        residual = float(np.abs(transposed @ pi - pi).max())
        if residual > RESIDUAL_WARNING:
            self._log('warning', "Stationary residual {:.3g} exceeds {:.0e}".format(residual, RESIDUAL_WARNING))

        occupancy = np.zeros(self.index.n_items, dtype=np.float64)
        for weight, state in zip(pi, states):
            for m in state:
                occupancy[m] += weight
        with np.errstate(invalid='ignore', divide='ignore'):
            h = np.where(self.rates > 0., (pi @ item_hits) / np.where(self.rates > 0., self.rates, 1.), np.nan)
        hit_rate = float(pi @ state_hits)
        return ExactResult(hit_rate, h, occupancy, pi, states, residual, iterations)

    def _log(self, mtype, message):
        """
        Checks if a logger exists. Else prints.
        """
        if hasattr(self, 'logger'):
            getattr(self.logger, mtype)(message)
        else:
            sys.stderr.write("{}: {}\n".format(mtype, message))


def exact_hit_rate(policy, index, q, rates, C, **kwargs):
    """
    Exact steady-state (hit rate, per-item h, per-item o) of a tiny cache;
    see MarkovOracle.
    """
    return MarkovOracle(policy, index, q, rates, C, **kwargs).solve()
