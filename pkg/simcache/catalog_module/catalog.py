# External modules
from collections import namedtuple
import numpy as np
from astropy.table import Table, Column

# Local modules
from ..errors import CatalogError
from ..utilities import SimcacheDataTable

Item = namedtuple('Item', ['id', 'embedding', 'position'])


class Catalog(object):
    """
    The Catalog class represents the item universe. Each item has a dense integer
    id in [0, N), an embedding in R^D (dissimilarity is the Euclidean distance
    between embeddings) and a request rate. Rates are normalized to sum to 1, so
    the time unit is the mean interarrival time of the aggregate request process.

    Catalogs whose embeddings are 2-D integer points carry grid positions, which
    switches neighbourhood tie-breaking to the counterclockwise angle order.
    """

    METRIC = 'euclidean'

    def __init__(self, embeddings, rates=None, grid_shape=None):
        try:
            embeddings = np.array(embeddings, dtype=np.float64)
        except ValueError as e:
            raise CatalogError("Embeddings do not share a dimension: {}".format(e))
        if embeddings.ndim == 1:
            embeddings = embeddings.reshape(-1, 1)
        if embeddings.ndim != 2:
            raise CatalogError("Embeddings must form an (N, D) array, got shape {}".format(embeddings.shape))
        if embeddings.shape[0] == 0 or embeddings.shape[1] == 0:
            raise CatalogError("Catalog must contain at least one item of dimension >= 1")
        if not np.all(np.isfinite(embeddings)):
            raise CatalogError("Embeddings must be finite")
        self._embeddings = embeddings
        self._embeddings.flags.writeable = False
        self._rates = self.normalize(rates, embeddings.shape[0])

        self._positions = None
        if embeddings.shape[1] == 2 and np.all(embeddings == np.round(embeddings)):
            self._positions = embeddings.astype(np.int64)
            self._positions.flags.writeable = False
        self._grid_shape = None
        if grid_shape is not None:
            width, height = int(grid_shape[0]), int(grid_shape[1])
            if self._positions is None or width * height != self.n_items:
                raise CatalogError("Grid shape {}x{} does not match the catalog".format(width, height))
            self._grid_shape = (width, height)

    @staticmethod
    def normalize(rates, n_items):
        """
        Validate per-item weights and normalize them to probabilities.
        """
        if rates is None:
            rates = np.full(n_items, 1. / n_items)
            rates.flags.writeable = False
            return rates
        rates = np.array(rates, dtype=np.float64).ravel()
        if rates.shape[0] != n_items:
            raise CatalogError("Got {} rates for {} items".format(rates.shape[0], n_items))
        if not np.all(np.isfinite(rates)) or np.any(rates < 0.):
            raise CatalogError("Rates must be finite and nonnegative")
        total = rates.sum()
        if total <= 0.:
            raise CatalogError("Rates must not all be zero")
        rates = rates / total
        rates.flags.writeable = False
        return rates

    @classmethod
    def from_grid(cls, width, height, weights=None):
        """
        The synthetic grid catalog [0..width-1] x [0..height-1]. Item (x, y) has
        id y*width + x and embedding (x, y).
        """
        width, height = int(width), int(height)
        if width < 1 or height < 1:
            raise CatalogError("Grid must be at least 1x1, got {}x{}".format(width, height))
        ys, xs = np.divmod(np.arange(width * height), width)
        embeddings = np.column_stack((xs, ys))
        return cls(embeddings, rates=weights, grid_shape=(width, height))

    @classmethod
    def from_file(cls, file_name):
        """
        Read a catalog CSV with header ``item_id,dim_0,...,dim_{D-1},weight``.
        """
        data_table = SimcacheDataTable.dataTableFromFile(file_name, names=['item_id', 'weight'])
        table = data_table.read()
        dims = [name for name in table.colnames if name.startswith('dim_')]
        expected = ['dim_{}'.format(k) for k in range(len(dims))]
        if len(dims) == 0 or sorted(dims, key=lambda name: int(name[4:])) != expected:
            raise CatalogError("Catalog {} must have columns dim_0..dim_(D-1)".format(file_name))
        ids = np.asarray(table['item_id'], dtype=np.int64)
        n_items = len(ids)
        if n_items == 0 or not np.array_equal(np.sort(ids), np.arange(n_items)):
            raise CatalogError("Catalog {} item ids must be exactly 0..N-1".format(file_name))
        order = np.argsort(ids, kind='stable')
        embeddings = np.column_stack([np.asarray(table[name], dtype=np.float64)[order] for name in expected])
        weights = np.asarray(table['weight'], dtype=np.float64)[order]
        catalog = cls(embeddings, rates=weights)
        if catalog.positions is not None:
            width = int(catalog.positions[:, 0].max()) + 1
            height = int(catalog.positions[:, 1].max()) + 1
            expect = catalog.positions[:, 1] * width + catalog.positions[:, 0]
            if (width * height == n_items and np.all(catalog.positions >= 0) and
                    np.array_equal(expect, np.arange(n_items))):
                catalog._grid_shape = (width, height)
        return catalog

    def to_table(self):
        t = Table()
        t.add_column(Column(name='item_id', data=np.arange(self.n_items, dtype=np.int64)))
        for k in range(self.dimension):
            t.add_column(Column(name='dim_{}'.format(k), data=np.array(self._embeddings[:, k])))
        t.add_column(Column(name='weight', data=np.array(self._rates)))
        return t

    def write(self, file_name):
        data_table = SimcacheDataTable.dataTableFromFile(file_name)
        data_table.write(self.to_table())
        return file_name

    def with_rates(self, rates):
        """
        Same items, new request rates.
        """
        return Catalog(self._embeddings, rates=rates, grid_shape=self._grid_shape)

    def item(self, n):
        position = None if self._positions is None else tuple(int(v) for v in self._positions[n])
        return Item(int(n), self._embeddings[n], position)

    def item_at(self, x, y):
        """
        Id of the grid item at (x, y).
        """
        if self._grid_shape is None:
            raise CatalogError("Catalog is not a full grid")
        width, height = self._grid_shape
        if not (0 <= x < width and 0 <= y < height):
            raise CatalogError("Point ({},{}) is outside the {}x{} grid".format(x, y, width, height))
        return int(y) * width + int(x)

    @property
    def n_items(self):
        return self._embeddings.shape[0]

    @property
    def dimension(self):
        return self._embeddings.shape[1]

    @property
    def embeddings(self):
        return self._embeddings

    @property
    def rates(self):
        return self._rates

    @property
    def positions(self):
        return self._positions

    @property
    def grid_shape(self):
        return self._grid_shape

    @property
    def is_grid(self):
        return self._positions is not None

    def __len__(self):
        return self.n_items
