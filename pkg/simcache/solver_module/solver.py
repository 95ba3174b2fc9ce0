# External modules
from collections import namedtuple
import numpy as np
import sys
from astropy.table import Table, Column

# Local modules
from .ttl_maps import entry_rates, hit_probs, occupancies, refresh_rates, solve_tc
from ..errors import ConfigurationError
from ..utilities import InitLogger, SelectParameter

# Hit probabilities above 1 + H_TOLERANCE are reported in the diagnostics.
H_TOLERANCE = 1e-12

SolverState = namedtuple('SolverState', ['o', 'lambda_e', 'lambda_r', 't_c', 'iteration',
                                         'capacity_residual', 'max_delta_o'])

TRACE_COLUMNS = ['iteration', 't_c', 'hit_rate', 'max_delta_o']


class SolverResult(object):
    """
    Final state of the fixed point iteration and its convergence trace. Row 0
    of the trace is the LRU initialisation.
    """

    def __init__(self, o, h, lambda_e, lambda_r, t_c, rates, capacity, trace, converged):
        self.o = o
        self.h = h
        self.lambda_e = lambda_e
        self.lambda_r = lambda_r
        self.t_c = t_c
        self.capacity = capacity
        self.hit_rate = float(np.dot(rates, h))
        self.trace = trace
        self.converged = converged

    @property
    def iterations(self):
        """
        Index of the last iteration performed.
        """
        return self.trace[-1]['iteration']

    @property
    def t_c0(self):
        return self.trace[0]['t_c']

    @property
    def diagnostics(self):
        return {'h_above_one': int(np.count_nonzero(self.h > 1. + H_TOLERANCE)),
                'max_h': float(self.h.max()),
                'iterations': self.iterations,
                'converged': self.converged}

    def trace_table(self, full=False):
        """
        The convergence trace as an astropy Table. full adds the capacity
        residual at every solve point and the count of h_n > 1.
        """
        names = TRACE_COLUMNS + (['capacity_residual', 'h_above_one'] if full else [])
        t = Table()
        for name in names:
            data = np.array([row[name] for row in self.trace])
            t.add_column(Column(name=name, data=data))
        return t

    def __repr__(self):
        return "SolverResult(H={:.6f}, t_C={:.6g}, iterations={}, converged={})".format(
            self.hit_rate, self.t_c, self.iterations, self.converged)


class FixedPointSolver(object):

    def __init__(self, index, q, rates, **kwargs):
        """
        Damped fixed point iteration for the occupancies of a SIM-LRU or
        RND-LRU cache.

        Examples
        --------
        >>> solver = FixedPointSolver(index, QModel.sim_lru(1.), catalog.rates)
        >>> result = solver.solve(500)

        Parameters
        ----------
        index: NeighborIndex
            Neighbourhoods within the similarity threshold.

        q: QModel
            Serve probabilities.

        rates: array
            Per-item request rates lambda (normalized).

        **kwargs: dictionary
            epsilon, max_iterations, damping, config_file, logger. Unset values
            come from the configuration file.
        """
        self.index = index
        self.q = q
        self.rates = np.asarray(rates, dtype=np.float64)
        if self.rates.shape != (index.n_items,):
            raise ConfigurationError("Got {} rates for {} items".format(self.rates.shape, index.n_items))
        self.epsilon = float(SelectParameter('epsilon', kwargs, kwargs.get('config_file', None)))
        self.max_iterations = int(SelectParameter('max_iterations', kwargs, kwargs.get('config_file', None)))
        self.damping = float(SelectParameter('damping', kwargs, kwargs.get('config_file', None)))
        self.logger = InitLogger(kwargs)
        if not self.epsilon > 0.:
            raise ConfigurationError("epsilon must be positive, got {}".format(self.epsilon))
        if self.max_iterations < 1:
            raise ConfigurationError("max_iterations must be >= 1, got {}".format(self.max_iterations))
        if not 0. < self.damping <= 1.:
            raise ConfigurationError("damping must be in (0, 1], got {}".format(self.damping))

    def initial_state(self, C):
        """
        Plain LRU: t_C(0) from the LRU capacity constraint, o(0) its occupancies.
        """
        t_c = solve_tc(self.rates, self.rates, C)
        o = occupancies(self.rates, self.rates, t_c)
        return SolverState(o, self.rates, self.rates, t_c, 0, float(o.sum() - C), np.nan)

    def step(self, state, C):
        lambda_e = entry_rates(state.o, self.index, self.q, self.rates)
        lambda_r = refresh_rates(state.o, self.index, self.q, self.rates)
        t_c = solve_tc(lambda_e, lambda_r, C)
        predicted = occupancies(lambda_e, lambda_r, t_c)
        o = self.damping * predicted + (1. - self.damping) * state.o
        delta = float(np.max(np.abs(o - state.o)))
        return SolverState(o, lambda_e, lambda_r, t_c, state.iteration + 1,
                           float(predicted.sum() - C), delta)

    def states(self, C):
        """
        Iterates of the solver, starting from the LRU initialisation and
        stopping once max |o(j) - o(j-1)| <= epsilon or at max_iterations.
        """
        state = self.initial_state(C)
        yield state
        while state.iteration < self.max_iterations:
            state = self.step(state, C)
            yield state
            if state.max_delta_o <= self.epsilon:
                return

    def _trace_row(self, state):
        h = hit_probs(state.o, self.index, self.q)
        return {'iteration': state.iteration, 't_c': state.t_c, 'hit_rate': float(np.dot(self.rates, h)),
                'max_delta_o': state.max_delta_o, 'capacity_residual': state.capacity_residual,
                'h_above_one': int(np.count_nonzero(h > 1. + H_TOLERANCE))}

    def solve(self, C):
        """
        Run the iteration for capacity C.

        Returns
        -------
        result: SolverResult

        Raises
        ------
        InfeasibleCapacityError
            If no characteristic time satisfies the capacity constraint.
        """
        trace = []
        state = None
        for state in self.states(C):
            trace.append(self._trace_row(state))
            self._log('debug', "Iteration {}: t_C={:.9g} H={:.9g} max|do|={:.3g}".format(
                state.iteration, state.t_c, trace[-1]['hit_rate'], state.max_delta_o))
        converged = state.iteration > 0 and state.max_delta_o <= self.epsilon
        if not converged:
            self._log('warning', "Fixed point did not converge for C={} in {} iterations (max|do|={:.3g})".format(
                C, self.max_iterations, state.max_delta_o))
        h = hit_probs(state.o, self.index, self.q)
        result = SolverResult(state.o, h, state.lambda_e, state.lambda_r, state.t_c, self.rates, C,
                              trace, converged)
        if result.diagnostics['h_above_one'] > 0:
            self._log('info', "{} items have h_n > 1 (max {:.6f})".format(result.diagnostics['h_above_one'],
                                                                          result.diagnostics['max_h']))
        self._log('info', "Solved C={}: H={:.6f}, t_C={:.6g} (t_C(0)={:.6g}) after {} iterations".format(
            C, result.hit_rate, result.t_c, result.t_c0, result.iterations))
        return result

    def _log(self, mtype, message):
        """
        Checks if a logger exists. Else prints.
        """
        if hasattr(self, 'logger'):
            getattr(self.logger, mtype)(message)
        else:
            sys.stderr.write("{}: {}\n".format(mtype, message))


def fixed_point(index, q, rates, C, epsilon=None, max_iterations=None, damping=None, **kwargs):
    """
    Functional entry point; see FixedPointSolver.
    """
    solver = FixedPointSolver(index, q, rates, epsilon=epsilon, max_iterations=max_iterations,
                              damping=damping, **kwargs)
    return solver.solve(C)
