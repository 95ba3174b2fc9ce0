import itertools
import numpy as np

from ..catalog_module import Catalog, closer_set


def makeLine(coords, rates=None):
    """
    Catalog of items on a line at the given coordinates.
    """
    return Catalog(np.asarray(coords, dtype=np.float64).reshape(-1, 1), rates=rates)


def makePair(rates=(0.6, 0.4), distance=1.):
    return makeLine([0., distance], rates=rates)


def makeGrid(width, height, rates=None):
    return Catalog.from_grid(width, height, weights=rates)


def makeRandomCatalog(n_items, dimension=2, seed=0, scale=3.):
    """
    Items at random real positions with random rates; no ties in distance.
    """
    rng = np.random.default_rng(seed)
    embeddings = rng.uniform(0., scale, size=(n_items, dimension))
    rates = rng.uniform(0.1, 1., size=n_items)
    return Catalog(embeddings, rates=rates)


def bruteNeighbors(catalog, d):
    """
    Sets N[n] from direct distance evaluation.
    """
    emb = catalog.embeddings
    sets = []
    for n in range(catalog.n_items):
        dist = np.sqrt(((emb - emb[n]) ** 2).sum(axis=1))
        sets.append(set(np.flatnonzero(dist <= d).tolist()))
    return sets


def refEntryRates(o, index, q, rates):
    lambda_e = np.zeros(index.n_items)
    for n in range(index.n_items):
        none_cached = np.prod([1. - o[m] for m in index.open(n)])
        declined = 0.
        for i, dist in index.neighbor_list(n)[1:]:
            declined += (1. - q.probability(dist)) * o[i] * np.prod([1. - o[m] for m in closer_set(index, n, i)])
        lambda_e[n] = rates[n] * (none_cached + declined)
    return lambda_e


def refRefreshRates(o, index, q, rates):
    lambda_r = np.zeros(index.n_items)
    for n in range(index.n_items):
        for i, dist in index.neighbor_list(n):
            closer = closer_set(index, i, n, closed=True)
            lambda_r[n] += rates[i] * q.probability(dist) * np.prod([1. - o[m] for m in closer])
    return lambda_r


def refHitProbs(o, index, q):
    h = np.zeros(index.n_items)
    for n in range(index.n_items):
        for i, dist in index.neighbor_list(n):
            h[n] += q.probability(dist) * o[i] * np.prod([1. - o[m] for m in closer_set(index, n, i)])
    return h


def bruteCoverage(weights, sets, budget):
    """
    Best covered weight over every subset of min(budget, N) sets.
    """
    n_items = len(sets)
    best = 0.
    for subset in itertools.combinations(range(n_items), min(budget, n_items)):
        covered = set().union(*(sets[n] for n in subset))
        best = max(best, float(sum(weights[m] for m in covered)))
    return best
