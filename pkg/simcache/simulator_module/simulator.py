"""
Trace-driven simulation of LRU, SIM-LRU and RND-LRU caches.

:Organization: simcache developers

"""
# External modules
from collections import OrderedDict
import numpy as np
import sys

# Local modules
from ..errors import ConfigurationError, SimulationInvariantError
from ..utilities import InitLogger, SelectParameter

POLICIES = ('lru', 'sim-lru', 'rnd-lru')
CHUNK_SIZE = 1 << 20


class CacheState(object):
    """
    Recency-ordered cache content. Internally the most recent item is the
    last key of an OrderedDict, so membership, refresh and eviction are O(1).
    """

    def __init__(self, capacity):
        self.capacity = int(capacity)
        self._entries = OrderedDict()

    def __contains__(self, item):
        return item in self._entries

    def __len__(self):
        return len(self._entries)

    def refresh(self, item):
        self._entries.move_to_end(item)

    def insert(self, item, epoch):
        """
        Put item at the front, then evict the back if over capacity. Returns
        (evicted item, the epoch it entered) or None.
        """
        self._entries[item] = epoch
        if len(self._entries) > self.capacity:
            return self._entries.popitem(last=False)
        return None

    def recency_list(self):
        """
        Cached items, most recent first.
        """
        return list(reversed(self._entries))

    def entries(self):
        return self._entries.items()


class SimResult(object):
    """
    Counters of one simulation run, measured after the warm-up prefix.
    Presence counts sample cache membership at every counted request epoch
    before the request is applied.
    """

    def __init__(self, requests, warmup, item_hits, item_requests, presence, config=None, seed=None):
        self.requests = int(requests)
        self.warmup = int(warmup)
        self.item_hits = np.asarray(item_hits, dtype=np.int64)
        self.item_requests = np.asarray(item_requests, dtype=np.int64)
        self.presence = np.asarray(presence, dtype=np.int64)
        self.config = config
        self.seed = seed

    @property
    def counted(self):
        return self.requests - self.warmup

    @property
    def hits(self):
        return int(self.item_hits.sum())

    @property
    def hit_rate(self):
        return self.hits / self.counted

    @property
    def occupancy(self):
        return self.presence / self.counted

    @property
    def item_hit_probs(self):
        """
        hits_n / requests_n, nan for items never requested.
        """
        with np.errstate(invalid='ignore', divide='ignore'):
            return np.where(self.item_requests > 0, self.item_hits / np.maximum(self.item_requests, 1), np.nan)

    def __repr__(self):
        return "SimResult(r={}, warmup={}, hits={}, H={:.6f})".format(self.requests, self.warmup,
                                                                      self.hits, self.hit_rate)


class ReplicationSummary(object):
    """
    Mean hit rate over replications with the normal 95% confidence interval.
    half_width is None when a single replication is available.
    """

    Z95 = 1.96

    def __init__(self, hit_rates, occupancy, config=None):
        self.hit_rates = np.asarray(hit_rates, dtype=np.float64)
        self.n = len(self.hit_rates)
        self.mean = float(self.hit_rates.mean())
        if self.n >= 2:
            self.half_width = float(self.Z95 * self.hit_rates.std(ddof=1) / np.sqrt(self.n))
        else:
            self.half_width = None
        self.occupancy = occupancy
        self.config = config

    @property
    def has_ci(self):
        return self.half_width is not None

    @property
    def ci_low(self):
        return None if self.half_width is None else self.mean - self.half_width

    @property
    def ci_high(self):
        return None if self.half_width is None else self.mean + self.half_width

    def __repr__(self):
        if self.half_width is None:
            return "ReplicationSummary(n=1, H={:.6f})".format(self.mean)
        return "ReplicationSummary(n={}, H={:.6f} +/- {:.6f})".format(self.n, self.mean, self.half_width)


def aggregate_replications(results):
    """
    Combine replications of one configuration.

    Parameters
    ----------
    results: list of SimResult
        Runs that differ only in their seeds.

    Returns
    -------
    summary: ReplicationSummary
    """
    results = list(results)
    if len(results) == 0:
        raise ConfigurationError("No simulation results to aggregate")
    configs = set(result.config for result in results)
    if len(configs) > 1:
        msg = "Cannot aggregate results of different configurations: {}"
        raise ConfigurationError(msg.format(sorted(map(str, configs))))
    shapes = set(result.presence.shape for result in results)
    if len(shapes) > 1:
        raise ConfigurationError("Cannot aggregate results over different catalogs")
    hit_rates = [result.hit_rate for result in results]
    occupancy = np.mean([result.occupancy for result in results], axis=0)
    return ReplicationSummary(hit_rates, occupancy, config=results[0].config)


class CacheSimulator(object):

    def __init__(self, policy, index, q, capacity, **kwargs):
        """
        Sequential IRM cache simulator.

        Parameters
        ----------
        policy: string
            'lru', 'sim-lru' or 'rnd-lru'.

        index: NeighborIndex
            Neighbourhoods within the similarity threshold; the closest cached
            item is the first cached entry of the requested item's list.

        q: QModel
            Serve probabilities for RND-LRU (ignored by the other policies).

        capacity: int
            Cache size C >= 1.

        **kwargs: dictionary
            debug (check invariants after every request), logger.
        """
        policy = str(policy).lower()
        if policy not in POLICIES:
            raise ConfigurationError("Unknown policy {}; expected one of {}".format(policy, POLICIES))
        if int(capacity) < 1:
            raise ConfigurationError("Cache capacity must be >= 1, got {}".format(capacity))
        self.policy = policy
        self.index = index
        self.q = q
        self.capacity = int(capacity)
        self.debug = bool(SelectParameter('debug', kwargs))
        self.logger = InitLogger(kwargs)

        if policy == 'lru':
            self.rows = [[n] for n in range(index.n_items)]
        else:
            self.rows = index.rows()
        self.serve = None
        if policy == 'rnd-lru':
            q_matrix = index.q_matrix(q)
            self.serve = [row[:length].tolist() for row, length in zip(q_matrix, index.lengths)]

    def config_key(self, requests, warmup):
        q_key = self.q.to_string() if self.policy == 'rnd-lru' else None
        return (self.policy, self.index.d, q_key, self.capacity, int(requests), int(warmup))

    def run(self, stream, warmup_fraction=0., seed=None):
        """
        Simulate the cache over stream, starting empty.

        Parameters
        ----------
        stream: RequestStream
            The requests, in order.

        warmup_fraction: float
            Fraction of the stream, in [0, 1), replayed but not counted.

        seed: int
            Seed of the RND-LRU serve draws, independent of the stream seed.

        Returns
        -------
        result: SimResult
        """
        warmup_fraction = float(warmup_fraction)
        if not 0. <= warmup_fraction < 1.:
            raise ConfigurationError("Warm-up fraction must be in [0, 1), got {}".format(warmup_fraction))
        items = stream.items
        n_requests = len(items)
        warmup = int(warmup_fraction * n_requests)
        n_items = self.index.n_items
        if n_requests and (items.min() < 0 or items.max() >= n_items):
            raise ConfigurationError("Request stream refers to items outside the catalog")

        rows = self.rows
        serve = self.serve
        draws = None
        if serve is not None:
            draws = self._draws(n_requests, seed)
        cache = CacheState(self.capacity)
        item_hits = np.zeros(n_items, dtype=np.int64)
        item_requests = np.zeros(n_items, dtype=np.int64)
        presence = np.zeros(n_items, dtype=np.int64)

        self._log('debug', "Simulating {} C={} over {} requests (warm-up {})".format(self.policy, self.capacity,
                                                                                      n_requests, warmup))
        for j, n in enumerate(items.tolist()):
            counted = j >= warmup
            if counted:
                item_requests[n] += 1
            hit = False
            row = rows[n]
            for k, m in enumerate(row):
                if m in cache:
                    if serve is None or draws[j] < serve[n][k]:
                        hit = True
                        cache.refresh(m)
                    break
            if hit:
                if counted:
                    item_hits[n] += 1
            else:
                evicted = cache.insert(n, j + 1)
                if evicted is not None:
                    old, since = evicted
                    presence[old] += max(0, j + 1 - max(since, warmup))
                if self.debug:
                    self._check_insert(cache, n)
            if self.debug:
                self._check_state(cache)
        for m, since in cache.entries():
            presence[m] += max(0, n_requests - max(since, warmup))

        return SimResult(n_requests, warmup, item_hits, item_requests, presence,
                         config=self.config_key(n_requests, warmup), seed=seed)

    def _draws(self, n_requests, seed):
        rng = np.random.Generator(np.random.PCG64(seed))
        draws = np.empty(n_requests, dtype=np.float64)
        for start in range(0, n_requests, CHUNK_SIZE):
            stop = min(start + CHUNK_SIZE, n_requests)
            draws[start:stop] = rng.random(stop - start)
        return draws.tolist()

    def _check_state(self, cache):
        if len(cache) > self.capacity:
            raise SimulationInvariantError("Cache holds {} items, capacity {}".format(len(cache), self.capacity))
        recency = cache.recency_list()
        if len(set(recency)) != len(recency):
            raise SimulationInvariantError("Duplicate entries in the recency list {}".format(recency))

    def _check_insert(self, cache, n):
        if self.policy != 'sim-lru':
            return
        for m in self.rows[n][1:]:
            if m in cache:
                msg = "Items {} and {} are cached together within d={}"
                raise SimulationInvariantError(msg.format(n, m, self.index.d))

    def _log(self, mtype, message):
        """
        Checks if a logger exists. Else prints.
        """
        if hasattr(self, 'logger'):
            getattr(self.logger, mtype)(message)
        else:
            sys.stderr.write("{}: {}\n".format(mtype, message))


def simulate(policy, index, q, C, stream, warmup_fraction=0., seed=None, **kwargs):
    """
    Run one simulation; see CacheSimulator.run.
    """
    simulator = CacheSimulator(policy, index, q, C, **kwargs)
    return simulator.run(stream, warmup_fraction=warmup_fraction, seed=seed)


def replication_seeds(seed, replications):
    """
    (stream seed, draw seed) for every replication, each a 64-bit integer
    taken from an independent child of SeedSequence(seed).
    """
    children = np.random.SeedSequence(seed).spawn(int(replications))
    seeds = []
    for child in children:
        stream_seed, draw_seed = child.generate_state(2, dtype=np.uint64)
        seeds.append((int(stream_seed), int(draw_seed)))
    return seeds
