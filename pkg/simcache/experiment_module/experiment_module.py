# External modules
from concurrent.futures import ProcessPoolExecutor
import numpy as np
import os
import sys
from astropy.table import Table, Column, MaskedColumn

# Local modules
from .experiment_config import METHOD_SUFFIXES, ExperimentConfig
from ..baseline_module import CoverageInstance, greedy_coverage, lru_agg, lru_ttl
from ..catalog_module import Catalog, build_neighbor_index
from ..errors import InfeasibleCapacityError
from ..simulator_module import CacheSimulator, aggregate_replications, replication_seeds
from ..solver_module import FixedPointSolver
from ..utilities import InitLogger, ResolvePath, SimcacheDataTable, SimcacheEnvironment
from ..workload_module import (PopularityProfile, RequestStream, gen_requests, ingest_trace,
                               synth_grid_popularity)

SWEEP_COLUMNS = ['capacity', 'method', 'hit_rate', 'ci_low', 'ci_high']
OCCUPANCY_COLUMNS = ['item_id', 'x', 'y', 'occupancy_sim', 'occupancy_solver']

# Shared read-only state of the worker processes, set by _init_worker.
_CONTEXT = None


def _init_worker(context):
    global _CONTEXT
    _CONTEXT = context


def _run_replication(context, capacity, seeds):
    stream_seed, draw_seed = seeds
    if context['replay'] is not None:
        stream = context['replay']
    else:
        stream = gen_requests(context['profile'], context['requests'], stream_seed)
    simulator = CacheSimulator(context['policy'], context['index'], context['q'], capacity,
                               debug=context['debug'], log_level=context['log_level'])
    return simulator.run(stream, warmup_fraction=context['warmup'], seed=draw_seed)


def _run_solver(context, capacity):
    solver = FixedPointSolver(context['solver_index'], context['q'], context['rates'], **context['solver_kwargs'])
    try:
        return solver.solve(capacity)
    except InfeasibleCapacityError as e:
        return e


def _worker_replication(capacity, seeds):
    return _run_replication(_CONTEXT, capacity, seeds)


def _worker_solver(capacity):
    return _run_solver(_CONTEXT, capacity)


class ExperimentModule(object):

    def __init__(self, config=None, **kwargs):
        """
        Experiment orchestration: catalog generation, capacity sweeps of the
        simulator against every estimator, occupancy maps and convergence
        traces.

        Examples
        --------
        >>> from simcache import ExperimentModule
        >>> module = ExperimentModule(grid='30x30', capacities=[50, 100], replications=2)
        >>> module.cmd_sweep()

        Parameters
        ----------
        config: ExperimentConfig, optional
            Fully resolved configuration. If absent, one is built from kwargs.

        **kwargs: dictionary
            ExperimentConfig keywords, and logger.
        """
        self.config = config if config is not None else ExperimentConfig(**kwargs)
        log_kwargs = {'log_level': self.config.log_level}
        if 'logger' in kwargs:
            log_kwargs['logger'] = kwargs['logger']
        self.logger = InitLogger(log_kwargs)
        self._log('info', SimcacheEnvironment.__simcache__environment__report__)
        for line in self.config.describe():
            self._log('info', line)

        self.catalog = self.load_catalog()
        self.q = self.config.q_model()
        self.index = build_neighbor_index(self.catalog, self.config.d)
        if self.config.policy == 'lru':
            self.solver_index = build_neighbor_index(self.catalog, 0.)
        else:
            self.solver_index = self.index
        self.replay = None
        if self.config.replay is not None:
            path = ResolvePath(self.config.replay, self.config.in_path)
            self.replay = RequestStream.from_replay(path, self.catalog.n_items)
            self._log('info', "Replaying {} requests from {}".format(len(self.replay), path))

    def load_catalog(self):
        config = self.config
        if config.catalog is None:
            self.profile = synth_grid_popularity(config.width, config.height, config.hotspots, config.alpha)
            catalog = Catalog.from_grid(config.width, config.height, self.profile.probabilities)
        else:
            catalog = Catalog.from_file(ResolvePath(config.catalog, config.in_path))
            if config.counts is not None:
                counts = ResolvePath(config.counts, config.in_path)
                self.profile = ingest_trace(catalog, counts)
                catalog = self.profile.apply(catalog)
            else:
                self.profile = PopularityProfile(catalog.rates, {'source': 'catalog', 'file': config.catalog})
        self._log('info', "Catalog with {} items of dimension {}".format(catalog.n_items, catalog.dimension))
        return catalog

    @property
    def methods(self):
        """
        Sweep method names in file order: the simulated and predicted hit
        rates of every sweep policy, then the baselines.
        """
        suffixes = [METHOD_SUFFIXES[policy] for policy in self.config.sweep_policies]
        return (['Exp-' + suffix for suffix in suffixes] + ['Ours-' + suffix for suffix in suffixes] +
                ['LRU', 'LRU-agg', 'Greedy'])

    def _context(self, policy=None):
        policy = policy if policy is not None else self.config.policy
        return {'policy': policy, 'index': self.index, 'solver_index': self.solver_index,
                'q': self.config.q_model(policy), 'rates': self.catalog.rates, 'profile': self.profile,
                'replay': self.replay, 'requests': self.config.requests, 'warmup': self.config.warmup,
                'debug': self.config.debug, 'log_level': self.config.log_level,
                'solver_kwargs': self.config.solver_kwargs()}

    def run_points(self, capacities, policy=None):
        """
        Simulation replications and solver runs for every capacity, on the
        worker pool when more than one core is configured. policy defaults to
        the configured one.

        Returns
        -------
        simulations: dict
            capacity -> ReplicationSummary

        solutions: dict
            capacity -> SolverResult, or the InfeasibleCapacityError raised.
        """
        seeds = replication_seeds(self.config.seed, self.config.replications)
        jobs = [(capacity, k) for capacity in capacities for k in range(len(seeds))]
        context = self._context(policy)
        if self.config.cores == 1:
            runs = [_run_replication(context, capacity, seeds[k]) for capacity, k in jobs]
            solved = [_run_solver(context, capacity) for capacity in capacities]
        else:
            self._log('info', "Dispatching {} simulations to {} workers".format(len(jobs), self.config.cores))
            with ProcessPoolExecutor(max_workers=self.config.cores, initializer=_init_worker,
                                     initargs=(context,)) as executor:
                run_futures = [executor.submit(_worker_replication, capacity, seeds[k]) for capacity, k in jobs]
                solve_futures = [executor.submit(_worker_solver, capacity) for capacity in capacities]
                runs = [future.result() for future in run_futures]
                solved = [future.result() for future in solve_futures]

        simulations = {}
        for capacity in capacities:
            results = [run for (c, _), run in zip(jobs, runs) if c == capacity]
            simulations[capacity] = aggregate_replications(results)
        solutions = dict(zip(capacities, solved))
        for capacity, solution in solutions.items():
            if isinstance(solution, InfeasibleCapacityError):
                self._log('warning', "Solver skipped {} C={}: {}".format(context['policy'], capacity, solution))
        return simulations, solutions

    def _baseline(self, estimator, capacity, name):
        try:
            return estimator(capacity).hit_rate
        except InfeasibleCapacityError as e:
            self._log('warning', "{} skipped C={}: {}".format(name, capacity, e))
            return np.nan

    def sweep_table(self, capacities=None):
        """
        Hit rates of every method at every capacity as an astropy Table.
        """
        capacities = capacities if capacities is not None else self.config.capacities
        rates = self.catalog.rates
        instance = CoverageInstance.from_index(self.index, rates, max(capacities))
        greedy = greedy_coverage(instance)

        rows = []
        for policy in self.config.sweep_policies:
            suffix = METHOD_SUFFIXES[policy]
            simulations, solutions = self.run_points(capacities, policy)
            for capacity in capacities:
                summary = simulations[capacity]
                solution = solutions[capacity]
                ours = np.nan if isinstance(solution, InfeasibleCapacityError) else solution.hit_rate
                if summary.has_ci:
                    self._log('info', "{} C={}: simulated H={:.6f} +/- {:.2e}".format(policy, capacity, summary.mean,
                                                                                      summary.half_width))
                rows.append((capacity, 'Exp-' + suffix, summary.mean, summary.ci_low, summary.ci_high))
                rows.append((capacity, 'Ours-' + suffix, ours, None, None))
        for capacity in capacities:
            rows.append((capacity, 'LRU', self._baseline(lambda c: lru_ttl(rates, c), capacity, 'LRU'), None, None))
            rows.append((capacity, 'LRU-agg', self._baseline(lambda c: lru_agg(rates, self.index, c), capacity,
                                                             'LRU-agg'), None, None))
            rows.append((capacity, 'Greedy', instance.covered_weight(greedy.selected[:capacity]), None, None))
        order = {method: k for k, method in enumerate(self.methods)}
        rows.sort(key=lambda row: (row[0], order[row[1]]))

        t = Table()
        t.add_column(Column(name='capacity', data=np.array([row[0] for row in rows], dtype=np.int64)))
        t.add_column(Column(name='method', data=[row[1] for row in rows]))
        t.add_column(Column(name='hit_rate', data=np.array([row[2] for row in rows], dtype=np.float64)))
        for k, name in ((3, 'ci_low'), (4, 'ci_high')):
            values = [row[k] for row in rows]
            mask = [value is None for value in values]
            data = np.array([np.nan if value is None else value for value in values], dtype=np.float64)
            t.add_column(MaskedColumn(name=name, data=data, mask=mask))
        return t

    def output_file(self, name):
        out_path = self.config.out_path
        if out_path is not None and not os.path.isdir(out_path):
            os.makedirs(out_path)
        file_name = "{}_{}.csv".format(self.config.prefix, name)
        return os.path.join(out_path, file_name) if out_path is not None else file_name

    def cmd_synth(self):
        """
        Write the catalog (embeddings and normalized weights) and its
        popularity profile.

        Returns
        -------
        catalog_file, popularity_file: string
        """
        catalog_file = self.catalog.write(self.output_file('catalog'))
        t = Table()
        t.add_column(Column(name='item_id', data=np.arange(self.catalog.n_items, dtype=np.int64)))
        t.add_column(Column(name='probability', data=np.array(self.profile.probabilities)))
        popularity_file = self.output_file('popularity')
        SimcacheDataTable.dataTableFromFile(popularity_file).write(t)
        self._log('info', "Wrote {} and {}".format(catalog_file, popularity_file))
        return catalog_file, popularity_file

    def cmd_sweep(self):
        """
        Hit rate versus capacity for the simulator and every estimator, as
        ``capacity,method,hit_rate,ci_low,ci_high``.
        """
        t = self.sweep_table()
        out_file = self.output_file('sweep')
        SimcacheDataTable.dataTableFromFile(out_file).write(t)
        self._log('info', "Wrote {} rows to {}".format(len(t), out_file))
        return out_file

    def occupancy_table(self, capacity=None):
        capacity = capacity if capacity is not None else self.config.capacity
        if capacity is None:
            capacity = self.config.capacities[0]
        simulations, solutions = self.run_points([capacity])
        solution = solutions[capacity]
        if isinstance(solution, InfeasibleCapacityError):
            # t_C -> infinity: every item that is ever requested stays cached
            solver_o = (self.catalog.rates > 0.).astype(np.float64)
            self._log('info', "C={} holds every requested item; solver occupancies set to 1".format(capacity))
        else:
            solver_o = solution.o

        t = Table()
        t.add_column(Column(name='item_id', data=np.arange(self.catalog.n_items, dtype=np.int64)))
        positions = self.catalog.positions
        for k, name in enumerate(('x', 'y')):
            if positions is None:
                data = np.zeros(self.catalog.n_items, dtype=np.int64)
                t.add_column(MaskedColumn(name=name, data=data, mask=np.ones(self.catalog.n_items, dtype=bool)))
            else:
                t.add_column(Column(name=name, data=np.array(positions[:, k])))
        t.add_column(Column(name='occupancy_sim', data=np.array(simulations[capacity].occupancy)))
        t.add_column(Column(name='occupancy_solver', data=np.array(solver_o)))
        return t

    def cmd_occupancy(self, capacity=None):
        """
        Per-item simulated and predicted occupancies as
        ``item_id,x,y,occupancy_sim,occupancy_solver``.
        """
        t = self.occupancy_table(capacity)
        capacity = capacity if capacity is not None else (self.config.capacity or self.config.capacities[0])
        out_file = self.output_file('occupancy_C{}'.format(capacity))
        SimcacheDataTable.dataTableFromFile(out_file).write(t)
        self._log('info', "Wrote {}".format(out_file))
        return out_file

    def cmd_trace(self, capacity=None):
        """
        Convergence trace of the fixed point iteration as
        ``iteration,t_c,hit_rate,max_delta_o``. Row 0 is the LRU start.
        """
        capacity = capacity if capacity is not None else (self.config.capacity or self.config.capacities[0])
        solver = FixedPointSolver(self.solver_index, self.q, self.catalog.rates, logger=self.logger,
                                  **self.config.solver_kwargs())
        result = solver.solve(capacity)
        out_file = self.output_file('trace_C{}'.format(capacity))
        SimcacheDataTable.dataTableFromFile(out_file).write(result.trace_table())
        self._log('info', "Stopped at iteration {} (converged: {}); wrote {}".format(result.iterations,
                                                                                    result.converged, out_file))
        return out_file

    def _log(self, mtype, message):
        """
        Checks if a logger exists. Else prints.
        """
        if hasattr(self, 'logger'):
            getattr(self.logger, mtype)(message)
        else:
            sys.stderr.write("{}: {}\n".format(mtype, message))
