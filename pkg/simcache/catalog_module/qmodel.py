# External modules
import numpy as np

# Local modules
from ..errors import CatalogError


class QModel(object):
    """
    Approximation probability q as a function of the dissimilarity between the
    requested item and the cached item that would serve it.

    The model is a nonincreasing step table ``[(distance_k, q_k)]`` with
    ascending distances. q(0) = 1; for 0 < x <= d, q(x) is q_k for the first
    distance_k >= x, and 0 when x exceeds every tabulated distance; q(x) = 0
    for x > d.
    """

    def __init__(self, table, d):
        d = float(d)
        if not np.isfinite(d) or d < 0.:
            raise CatalogError("Similarity threshold must be finite and nonnegative, got {}".format(d))
        pairs = [(float(dist), float(q)) for dist, q in table]
        distances = np.array([p[0] for p in pairs], dtype=np.float64)
        values = np.array([p[1] for p in pairs], dtype=np.float64)
        if np.any(~np.isfinite(distances)) or np.any(distances <= 0.):
            raise CatalogError("q-map distances must be finite and positive")
        if np.any(np.diff(distances) <= 0.):
            raise CatalogError("q-map distances must be strictly increasing")
        if np.any(values < 0.) or np.any(values > 1.):
            raise CatalogError("q-map probabilities must lie in [0, 1]")
        if np.any(np.diff(values) > 0.):
            raise CatalogError("q-map probabilities must be nonincreasing in distance")
        self._d = d
        self._distances = distances
        self._values = np.append(values, 0.)
        self._distances.flags.writeable = False
        self._values.flags.writeable = False

    @classmethod
    def sim_lru(cls, d):
        """
        SIM-LRU: every cached item within d serves the request.
        """
        return cls([(d, 1.)] if d > 0. else [], d)

    @classmethod
    def exact(cls):
        """
        Plain LRU: only the requested item itself serves the request.
        """
        return cls([], 0.)

    @classmethod
    def from_string(cls, text, d):
        """
        Parse the ``"distance:q,distance:q,..."`` syntax.
        """
        table = []
        for entry in str(text).split(','):
            entry = entry.strip()
            if not entry:
                continue
            try:
                dist, q = entry.split(':')
                table.append((float(dist), float(q)))
            except ValueError:
                raise CatalogError("Cannot parse q-map entry '{}'".format(entry))
        return cls(table, d)

    def probability(self, distance):
        """
        q evaluated at one distance or an array of distances.
        """
        x = np.asarray(distance, dtype=np.float64)
        idx = np.searchsorted(self._distances, x, side='left')
        q = self._values[idx]
        q = np.where(x <= 0., 1., q)
        q = np.where(x > self._d, 0., q)
        if q.ndim == 0:
            return float(q)
        return q

    @property
    def d(self):
        return self._d

    @property
    def table(self):
        return [(float(dist), float(q)) for dist, q in zip(self._distances, self._values[:-1])]

    def to_string(self):
        return ",".join("{!r}:{!r}".format(dist, q) for dist, q in self.table)

    def __eq__(self, other):
        return isinstance(other, QModel) and self._d == other._d and self.table == other.table

    def __hash__(self):
        return hash((self._d, tuple(self.table)))

    def __repr__(self):
        return "QModel({}, d={!r})".format(self.table, self._d)
