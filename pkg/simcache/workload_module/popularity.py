# External modules
import logging
import numpy as np
import os
from astropy.table import Table, Column

# Local modules
from ..catalog_module import Catalog
from ..errors import CatalogError, WorkloadError
from ..utilities import SimcacheDataTable
from ..utilities.utilities import LOGGER_NAME


class PopularityProfile(object):
    """
    Request probabilities over the items of a catalog, together with a record
    of where they came from (synthetic parameters or an empirical trace).
    """

    def __init__(self, probabilities, provenance=None):
        try:
            self._p = Catalog.normalize(probabilities, len(probabilities))
        except CatalogError as e:
            raise WorkloadError(str(e))
        self._provenance = dict(provenance) if provenance is not None else {'source': 'explicit'}

    @property
    def probabilities(self):
        return self._p

    @property
    def provenance(self):
        return dict(self._provenance)

    @property
    def n_items(self):
        return self._p.shape[0]

    def cdf(self):
        """
        Cumulative probabilities with the last entry pinned to exactly 1.
        """
        cdf = np.minimum(np.cumsum(self._p), 1.)
        cdf[-1] = 1.
        return cdf

    def apply(self, catalog):
        """
        catalog with its rates replaced by this profile.
        """
        if catalog.n_items != self.n_items:
            msg = "Profile covers {} items but the catalog has {}"
            raise WorkloadError(msg.format(self.n_items, catalog.n_items))
        return catalog.with_rates(self._p)

    def __len__(self):
        return self.n_items

    def __repr__(self):
        return "PopularityProfile(N={}, {})".format(self.n_items, self._provenance)


def parse_hotspots(hotspots):
    """
    Hotspot centres from either a sequence of (x, y) pairs or the
    ``"x,y;x,y"`` text used on the command line and in the configuration.
    """
    if isinstance(hotspots, str):
        points = []
        for entry in hotspots.split(';'):
            entry = entry.strip()
            if not entry:
                continue
            try:
                x, y = entry.split(',')
                points.append((int(x), int(y)))
            except ValueError:
                raise WorkloadError("Cannot parse hotspot '{}'; expected 'x,y'".format(entry))
        hotspots = points
    hotspots = [(int(x), int(y)) for x, y in hotspots]
    if len(hotspots) == 0:
        raise WorkloadError("At least one hotspot is required")
    return hotspots


def hotspot_weights(width, height, hotspots, alpha):
    """
    Unnormalized grid weights: (distance to the nearest hotspot + 1)^-alpha,
    indexed by item id y*width + x.
    """
    width, height = int(width), int(height)
    if width < 1 or height < 1:
        raise WorkloadError("Grid must be at least 1x1, got {}x{}".format(width, height))
    alpha = float(alpha)
    if not np.isfinite(alpha) or alpha <= 0.:
        raise WorkloadError("Popularity skew alpha must be positive, got {}".format(alpha))
    centres = np.array(parse_hotspots(hotspots), dtype=np.float64)
    outside = (centres[:, 0] < 0) | (centres[:, 0] >= width) | (centres[:, 1] < 0) | (centres[:, 1] >= height)
    if np.any(outside):
        bad = [tuple(int(v) for v in c) for c in centres[outside]]
        raise WorkloadError("Hotspots {} lie outside the {}x{} grid".format(bad, width, height))
    ys, xs = np.divmod(np.arange(width * height), width)
    dx = xs[:, None] - centres[None, :, 0]
    dy = ys[:, None] - centres[None, :, 1]
    nearest = np.sqrt(dx * dx + dy * dy).min(axis=1)
    return (nearest + 1.) ** (-alpha)


def synth_grid_popularity(width, height, hotspots, alpha):
    """
    Synthetic grid popularity profile.

    Parameters
    ----------
    width, height: int
        Grid size; items are the points [0..width-1] x [0..height-1].

    hotspots: list of (x, y) or string
        Popularity centres, which must lie inside the grid.

    alpha: float
        Skew of the popularity distribution.

    Returns
    -------
    profile: PopularityProfile
    """
    weights = hotspot_weights(width, height, hotspots, alpha)
    provenance = {'source': 'grid', 'width': int(width), 'height': int(height),
                  'hotspots': parse_hotspots(hotspots), 'alpha': float(alpha)}
    return PopularityProfile(weights, provenance)


def read_trace_counts(file_name):
    """
    Read a ``item_id,count`` CSV into a dictionary.
    """
    table = SimcacheDataTable.dataTableFromFile(file_name, names=['item_id', 'count']).read()
    counts = {}
    for item_id, count in zip(table['item_id'], table['count']):
        counts[int(item_id)] = counts.get(int(item_id), 0) + count
    return counts


def write_trace_counts(counts, file_name):
    ids = sorted(counts)
    t = Table()
    t.add_column(Column(name='item_id', data=np.array(ids, dtype=np.int64)))
    t.add_column(Column(name='count', data=np.array([counts[i] for i in ids])))
    SimcacheDataTable.dataTableFromFile(file_name).write(t)
    return file_name


def ingest_trace(catalog_file, counts):
    """
    Empirical popularity from per-item request counts.

    Parameters
    ----------
    catalog_file: string or Catalog
        The catalog the counts refer to.

    counts: dict or string
        Mapping item id -> request count, or the path of a trace-count CSV.

    Returns
    -------
    profile: PopularityProfile
        p_n = count_n / sum(counts); items without a count get 0.
    """
    logger = logging.getLogger(LOGGER_NAME)
    catalog = catalog_file if isinstance(catalog_file, Catalog) else Catalog.from_file(catalog_file)
    source = None
    if isinstance(counts, (str, os.PathLike)):
        source = str(counts)
        counts = read_trace_counts(counts)
    weights = np.zeros(catalog.n_items, dtype=np.float64)
    for item_id, count in counts.items():
        item_id = int(item_id)
        if item_id < 0 or item_id >= catalog.n_items:
            raise WorkloadError("Trace refers to unknown item id {}".format(item_id))
        count = float(count)
        if not np.isfinite(count) or count < 0.:
            raise WorkloadError("Item {} has invalid count {}".format(item_id, count))
        weights[item_id] += count
    total = weights.sum()
    if total <= 0.:
        raise WorkloadError("Trace counts are all zero")
    logger.debug("Ingested %d requests over %d items", int(total), int(np.count_nonzero(weights)))
    provenance = {'source': 'trace', 'requests': total}
    if source is not None:
        provenance['file'] = source
    return PopularityProfile(weights, provenance)
