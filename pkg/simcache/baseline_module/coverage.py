"""
Static allocation as maximum weighted coverage: place C items so that the
request mass within d of some placed item is as large as possible.
"""
# External modules
from collections import namedtuple
import heapq
import itertools
import logging
import numpy as np

# Local modules
from ..errors import ConfigurationError
from ..utilities.utilities import LOGGER_NAME

CoverageResult = namedtuple('CoverageResult', ['selected', 'hit_rate', 'gains'])

MAX_EXHAUSTIVE_ITEMS = 20


class CoverageInstance(object):
    """
    Weights w over the elements, one set per item (its closed neighbourhood)
    and a budget of C sets.
    """

    def __init__(self, weights, sets, budget):
        self.weights = np.asarray(weights, dtype=np.float64)
        self.sets = [np.unique(np.asarray(s, dtype=np.int64)) for s in sets]
        self.budget = int(budget)
        if self.budget < 1:
            raise ConfigurationError("Coverage budget must be >= 1, got {}".format(budget))
        if len(self.sets) != len(self.weights):
            raise ConfigurationError("Got {} sets for {} elements".format(len(self.sets), len(self.weights)))
        for n, members in enumerate(self.sets):
            if n not in members:
                raise ConfigurationError("Set {} does not contain its own item".format(n))

    @classmethod
    def from_index(cls, index, rates, C):
        return cls(rates, [index.closed(n) for n in range(index.n_items)], C)

    @property
    def n_items(self):
        return len(self.sets)

    def covered_weight(self, selected):
        covered = np.zeros(self.n_items, dtype=bool)
        for n in selected:
            covered[self.sets[n]] = True
        return float(self.weights[covered].sum())


def greedy_coverage(instance):
    """
    Greedy maximum weighted coverage with lazy gain updates.

    At each step the set with the largest weight of still uncovered elements
    is chosen, ties going to the lowest item id. The procedure stops after C
    picks or as soon as no set adds weight.

    Returns
    -------
    result: CoverageResult
        selected items in pick order, covered weight (the predicted hit
        rate) and the marginal gain of every pick.
    """
    logger = logging.getLogger(LOGGER_NAME)
    weights = instance.weights
    covered = np.zeros(instance.n_items, dtype=bool)

    def gain(n):
        members = instance.sets[n]
        return float(weights[members[~covered[members]]].sum())

    heap = [(-gain(n), n) for n in range(instance.n_items)]
    heapq.heapify(heap)
    selected, gains = [], []
    while heap and len(selected) < instance.budget:
        _, n = heapq.heappop(heap)
        fresh = gain(n)
        # stale keys are upper bounds, so a fresh key still at the top wins
        if heap and (-fresh, n) > heap[0]:
            heapq.heappush(heap, (-fresh, n))
            continue
        if fresh <= 0.:
            break
        selected.append(n)
        gains.append(fresh)
        covered[instance.sets[n]] = True
    logger.debug("Greedy coverage picked %d of %d sets", len(selected), instance.budget)
    return CoverageResult(selected, float(weights[covered].sum()), gains)


def exhaustive_coverage(instance):
    """
    Optimal allocation by enumerating every min(C, N)-subset. Only meant as a
    reference on small instances.
    """
    n_items = instance.n_items
    if n_items > MAX_EXHAUSTIVE_ITEMS:
        raise ConfigurationError("Exhaustive coverage is limited to {} items, got {}".format(MAX_EXHAUSTIVE_ITEMS,
                                                                                               n_items))
    membership = np.zeros((n_items, n_items), dtype=bool)
    for n, members in enumerate(instance.sets):
        membership[n, members] = True
    best, best_weight = None, -1.
    for subset in itertools.combinations(range(n_items), min(instance.budget, n_items)):
        weight = float(instance.weights[membership[list(subset)].any(axis=0)].sum())
        if weight > best_weight:
            best, best_weight = list(subset), weight
    return CoverageResult(best, best_weight, None)
