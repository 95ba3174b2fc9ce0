# External modules
import numpy as np

# Local modules
from ..catalog_module import QModel
from ..errors import CatalogError, ConfigurationError, WorkloadError
from ..simulator_module.simulator import POLICIES
from ..utilities import SelectParameter
from ..workload_module import parse_hotspots

METHOD_SUFFIXES = {'lru': 'LRU', 'sim-lru': 'SIM', 'rnd-lru': 'RND'}


def parse_capacities(value):
    """
    Capacities from "c1,c2,..." text or a sequence.
    """
    if value is None:
        return None
    if isinstance(value, (int, np.integer)):
        return [int(value)]
    if isinstance(value, str):
        value = [v for v in value.replace(' ', '').split(',') if v]
    try:
        return [int(v) for v in value]
    except (TypeError, ValueError):
        raise ConfigurationError("Cannot parse capacities {!r}".format(value))


def parse_grid(value):
    """
    (width, height) from "WxH".
    """
    try:
        width, height = str(value).lower().split('x')
        return int(width), int(height)
    except ValueError:
        raise ConfigurationError("Cannot parse grid {!r}; expected WxH".format(value))


class ExperimentConfig(object):
    """
    Every parameter of an experiment. Keywords override the configuration
    file, which overrides the internal defaults (see SelectParameter).
    """

    def __init__(self, **kwargs):
        config_file = kwargs.get('config_file', None)
        self.config_file = config_file

        def select(name):
            return SelectParameter(name, kwargs, config_file)

        self.catalog = kwargs.get('catalog', None)
        self.counts = kwargs.get('counts', None)
        self.replay = kwargs.get('replay', None)
        if kwargs.get('grid', None) is not None:
            self.width, self.height = parse_grid(kwargs['grid'])
        else:
            self.width = int(select('width'))
            self.height = int(select('height'))
        self.alpha = float(select('alpha'))
        self.d = float(select('d'))
        self.q_map = str(select('q_map'))
        self.policy = str(select('policy')).lower()
        self.capacities = parse_capacities(select('capacities'))
        self.capacity = kwargs.get('capacity', None)
        self.requests = int(select('requests'))
        self.replications = int(select('replications'))
        self.seed = int(select('seed'))
        self.warmup = float(select('warmup'))
        self.epsilon = float(select('epsilon'))
        self.max_iterations = int(select('max_iterations'))
        self.damping = float(select('damping'))
        self.in_path = select('in_path')
        self.out_path = select('out_path')
        self.cores = int(select('cores'))
        self.debug = bool(select('debug'))
        self.log_level = str(select('log_level')).upper()
        self.prefix = kwargs.get('out_prefix', 'sim')
        try:
            self.hotspots = parse_hotspots(select('hotspots'))
        except WorkloadError as e:
            raise ConfigurationError(str(e))
        self.validate()

    def validate(self):
        if self.policy not in POLICIES:
            raise ConfigurationError("Unknown policy {}; expected one of {}".format(self.policy, POLICIES))
        if not np.isfinite(self.d) or self.d < 0.:
            raise ConfigurationError("Similarity threshold must be finite and nonnegative, got {}".format(self.d))
        if not self.capacities:
            raise ConfigurationError("At least one capacity is required")
        if any(c < 1 for c in self.capacities):
            raise ConfigurationError("Capacities must be >= 1, got {}".format(self.capacities))
        if any(b <= a for a, b in zip(self.capacities, self.capacities[1:])):
            raise ConfigurationError("Capacities must be strictly increasing, got {}".format(self.capacities))
        if self.capacity is not None:
            self.capacity = int(self.capacity)
            if self.capacity < 1:
                raise ConfigurationError("Capacity must be >= 1, got {}".format(self.capacity))
        if self.replications < 1:
            raise ConfigurationError("Replications must be >= 1, got {}".format(self.replications))
        if self.requests < 1:
            raise ConfigurationError("Requests must be >= 1, got {}".format(self.requests))
        if not 0. <= self.warmup < 1.:
            raise ConfigurationError("Warm-up fraction must be in [0, 1), got {}".format(self.warmup))
        if self.cores < 1:
            raise ConfigurationError("Worker count must be >= 1, got {}".format(self.cores))
        if self.counts is not None and self.catalog is None:
            raise ConfigurationError("Trace counts need a catalog file")
        try:
            self.q_model()
        except CatalogError as e:
            raise ConfigurationError(str(e))

    def q_model(self, policy=None):
        policy = policy if policy is not None else self.policy
        if policy == 'rnd-lru':
            return QModel.from_string(self.q_map, self.d)
        if policy == 'sim-lru':
            return QModel.sim_lru(self.d)
        return QModel.exact()

    @property
    def sweep_policies(self):
        """
        Policies simulated and solved by a sweep. An RND-LRU sweep also runs
        SIM-LRU at the same threshold, so both curves land in one file.
        """
        if self.policy == 'rnd-lru':
            return ['sim-lru', 'rnd-lru']
        return [self.policy]

    @property
    def method_suffix(self):
        return METHOD_SUFFIXES[self.policy]

    def solver_kwargs(self):
        return {'epsilon': self.epsilon, 'max_iterations': self.max_iterations, 'damping': self.damping,
                'log_level': self.log_level}

    def describe(self):
        source = self.catalog if self.catalog is not None else "{}x{} grid".format(self.width, self.height)
        return ["Catalog: {}".format(source),
                "Policy {} with d={} (q-map {})".format(self.policy, self.d, self.q_model().to_string()),
                "Capacities: {}".format(self.capacities),
                "Requests {} x {} replications, seed {}, warm-up {}".format(self.requests, self.replications,
                                                                            self.seed, self.warmup),
                "Solver: epsilon {}, max iterations {}, damping {}".format(self.epsilon, self.max_iterations,
                                                                           self.damping)]
