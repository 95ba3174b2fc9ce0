"""
Neighbourhoods within the similarity threshold.

For every item n the index stores the closed neighbourhood N[n] as a list
sorted by (distance, tie rank), with n itself first. The list order is the
strict total order used everywhere else: the closest cached item, the
"strictly closer" sets N_i(n) and N_i[n], and the simulator's search.
"""
# External modules
import logging
import numpy as np
from scipy.spatial.distance import cdist

# Local modules
from ..errors import CatalogError, NeighborhoodError
from ..utilities.utilities import LOGGER_NAME

TIE_BREAKS = ('auto', 'angle', 'id')
TWO_PI = 2. * np.pi
CHUNK_ROWS = 512


def _angles(dx, dy):
    """
    Counterclockwise angle in [0, 2*pi), starting at the positive x-axis.
    """
    angle = np.mod(np.arctan2(dy, dx), TWO_PI)
    return np.where(angle >= TWO_PI, 0., angle)


class NeighborIndex(object):
    """
    Padded (N, K) arrays of neighbour ids and distances, K being the largest
    neighbourhood. Padding entries have id -1 and distance +inf. Arrays are
    read-only, so an index can be shared freely between workers.
    """

    def __init__(self, d, neighbors, distances, lengths, tie_break):
        self._d = float(d)
        self._neighbors = neighbors
        self._distances = distances
        self._lengths = lengths
        self._tie_break = tie_break
        for arr in (self._neighbors, self._distances, self._lengths):
            arr.flags.writeable = False
        self._rows = None

    @property
    def d(self):
        return self._d

    @property
    def tie_break(self):
        return self._tie_break

    @property
    def n_items(self):
        return self._neighbors.shape[0]

    @property
    def width(self):
        return self._neighbors.shape[1]

    @property
    def neighbors(self):
        return self._neighbors

    @property
    def distances(self):
        return self._distances

    @property
    def lengths(self):
        return self._lengths

    @property
    def mask(self):
        return self._neighbors >= 0

    def rows(self):
        """
        Neighbour ids per item as plain lists, for the sequential simulator.
        """
        if self._rows is None:
            self._rows = [row[:length].tolist() for row, length in zip(self._neighbors, self._lengths)]
        return self._rows

    def neighbor_list(self, n):
        length = self._lengths[n]
        return [(int(m), float(dist)) for m, dist in zip(self._neighbors[n, :length], self._distances[n, :length])]

    def closed(self, n):
        """
        N[n], in order.
        """
        return self._neighbors[n, :self._lengths[n]].copy()

    def open(self, n):
        """
        N(n), in order.
        """
        return self._neighbors[n, 1:self._lengths[n]].copy()

    def position(self, n, i):
        """
        Position of i in the ordered list of n.
        """
        hits = np.flatnonzero(self._neighbors[n, :self._lengths[n]] == i)
        if len(hits) == 0:
            raise NeighborhoodError("Item {} is not within d={} of item {}".format(i, self._d, n))
        return int(hits[0])

    def contains(self, n, i):
        return bool(np.any(self._neighbors[n, :self._lengths[n]] == i))

    def q_matrix(self, q):
        """
        q evaluated at every (n, position) entry; 0 on padding.
        """
        return np.where(self.mask, q.probability(self._distances), 0.)

    def aggregate(self, values):
        """
        sum over i in N[n] of values[i], for every n.
        """
        values = np.asarray(values, dtype=np.float64)
        gathered = np.where(self.mask, values[np.maximum(self._neighbors, 0)], 0.)
        return gathered.sum(axis=1)

    def __eq__(self, other):
        return (isinstance(other, NeighborIndex) and self._d == other._d and
                np.array_equal(self._neighbors, other._neighbors) and
                np.array_equal(self._distances, other._distances))

    def __getstate__(self):
        state = self.__dict__.copy()
        state['_rows'] = None
        return state

    def __setstate__(self, state):
        self.__dict__.update(state)
        for arr in (self._neighbors, self._distances, self._lengths):
            arr.flags.writeable = False


def _pad(rows_ids, rows_dist, n_items):
    lengths = np.array([len(ids) for ids in rows_ids], dtype=np.int64)
    width = int(lengths.max())
    neighbors = np.full((n_items, width), -1, dtype=np.int64)
    distances = np.full((n_items, width), np.inf, dtype=np.float64)
    for n, (ids, dist) in enumerate(zip(rows_ids, rows_dist)):
        neighbors[n, :len(ids)] = ids
        distances[n, :len(ids)] = dist
    return neighbors, distances, lengths


def _grid_index(catalog, d):
    """
    Stencil construction for full grid catalogs: only offsets inside the
    bounding box [-floor(d), floor(d)]^2 are candidates.
    """
    width, height = catalog.grid_shape
    reach = int(np.floor(d))
    dx, dy = np.meshgrid(np.arange(-reach, reach + 1), np.arange(-reach, reach + 1), indexing='ij')
    dx, dy = dx.ravel(), dy.ravel()
    dist = np.sqrt((dx * dx + dy * dy).astype(np.float64))
    keep = dist <= d
    dx, dy, dist = dx[keep], dy[keep], dist[keep]
    not_self = (dx != 0) | (dy != 0)
    order = np.lexsort((_angles(dx, dy), not_self, dist))
    dx, dy, dist = dx[order], dy[order], dist[order]

    xs = catalog.positions[:, 0]
    ys = catalog.positions[:, 1]
    nx = xs[:, None] + dx[None, :]
    ny = ys[:, None] + dy[None, :]
    valid = (nx >= 0) & (nx < width) & (ny >= 0) & (ny < height)
    ids = np.where(valid, ny * width + nx, -1)
    dists = np.where(valid, dist[None, :], np.inf)
    # stable compaction keeps the stencil order among valid entries
    compact = np.argsort(~valid, axis=1, kind='stable')
    neighbors = np.take_along_axis(ids, compact, axis=1)
    distances = np.take_along_axis(dists, compact, axis=1)
    lengths = valid.sum(axis=1).astype(np.int64)
    width_k = int(lengths.max())
    return (np.ascontiguousarray(neighbors[:, :width_k]),
            np.ascontiguousarray(distances[:, :width_k]), lengths)


def _general_index(catalog, d, use_angle):
    embeddings = catalog.embeddings
    n_items = catalog.n_items
    rows_ids, rows_dist = [], []
    for start in range(0, n_items, CHUNK_ROWS):
        stop = min(start + CHUNK_ROWS, n_items)
        block = cdist(embeddings[start:stop], embeddings, metric='euclidean')
        for offset, row in enumerate(block):
            n = start + offset
            ids = np.flatnonzero(row <= d)
            dist = row[ids]
            not_self = ids != n
            if use_angle:
                delta = embeddings[ids] - embeddings[n]
                rank = _angles(delta[:, 0], delta[:, 1])
            else:
                rank = ids.astype(np.float64)
            order = np.lexsort((ids, rank, not_self, dist))
            rows_ids.append(ids[order])
            rows_dist.append(dist[order])
    return _pad(rows_ids, rows_dist, n_items)


def build_neighbor_index(catalog, d, tie_break='auto'):
    """
    Build the neighbourhood index of catalog for similarity threshold d.

    Parameters
    ----------
    catalog: Catalog
        The item universe.

    d: float
        Similarity threshold; m is a neighbour of n iff dis(n, m) <= d.

    tie_break: string
        'angle' orders equidistant neighbours counterclockwise starting from
        the positive x-axis (2-D catalogs only), 'id' by ascending item id,
        'auto' picks 'angle' for grid catalogs and 'id' otherwise.

    Returns
    -------
    index: NeighborIndex
    """
    logger = logging.getLogger(LOGGER_NAME)
    d = float(d)
    if not np.isfinite(d) or d < 0.:
        raise CatalogError("Similarity threshold must be finite and nonnegative, got {}".format(d))
    if tie_break not in TIE_BREAKS:
        raise CatalogError("Unknown tie-break policy {}; expected one of {}".format(tie_break, TIE_BREAKS))
    if tie_break == 'auto':
        tie_break = 'angle' if catalog.is_grid else 'id'
    if tie_break == 'angle' and catalog.dimension != 2:
        raise CatalogError("Angle tie-breaking needs 2-D embeddings, got dimension {}".format(catalog.dimension))

    if tie_break == 'angle' and catalog.grid_shape is not None:
        neighbors, distances, lengths = _grid_index(catalog, d)
    else:
        neighbors, distances, lengths = _general_index(catalog, d, tie_break == 'angle')
    logger.debug("Built neighbour index: N=%d, d=%g, max |N[n]|=%d", catalog.n_items, d, neighbors.shape[1])
    return NeighborIndex(d, neighbors, distances, lengths, tie_break)


def closer_set(index, n, i, closed=False):
    """
    Items of n's neighbourhood strictly before i in n's order: N_i(n) when
    closed is False, N_i[n] (which also holds n unless i is n) when True.
    """
    pos = index.position(n, i)
    start = 0 if closed else 1
    return [int(m) for m in index.neighbors[n, start:pos]]
