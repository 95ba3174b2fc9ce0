# External modules
import numpy as np
from astropy.table import Table, Column

# Local modules
from ..errors import WorkloadError
from ..utilities.DataTable import SimcacheReplayTable

# Requests are drawn in blocks of this many uniforms. PCG64 consumes one
# 64-bit output per double, so the block size does not change the sequence.
CHUNK_SIZE = 1 << 20


class RequestStream(object):
    """
    An IRM request sequence: r i.i.d. draws from a popularity profile, made
    with numpy's PCG64 generator and inverse-CDF sampling, or a fixed sequence
    replayed from a file. Streams are value-like; two streams with the same
    (profile, r, seed) produce the same items.
    """

    def __init__(self, profile=None, r=None, seed=None, items=None):
        if items is not None:
            items = np.array(items, dtype=np.int64).ravel()
            if len(items) == 0:
                raise WorkloadError("A replayed stream needs at least one request")
            items.flags.writeable = False
            self._items = items
            self._profile = profile
            self._r = len(items)
            self._seed = None
            return
        if profile is None:
            raise WorkloadError("A request stream needs a popularity profile or a fixed item sequence")
        if r is None or int(r) < 1:
            raise WorkloadError("A request stream needs r >= 1 requests, got {}".format(r))
        self._profile = profile
        self._r = int(r)
        self._seed = seed
        self._items = None

    @classmethod
    def from_replay(cls, file_name, n_items=None):
        """
        Stream replayed from a file holding one item id per line.
        """
        items = read_replay(file_name)
        if n_items is not None and (items.min() < 0 or items.max() >= n_items):
            raise WorkloadError("Replay file {} refers to items outside 0..{}".format(file_name, n_items - 1))
        return cls(items=items)

    @property
    def seed(self):
        return self._seed

    @property
    def r(self):
        return self._r

    @property
    def profile(self):
        return self._profile

    @property
    def is_replay(self):
        return self._seed is None and self._items is not None and self._profile is None

    def generate(self):
        rng = np.random.Generator(np.random.PCG64(self._seed))
        cdf = self._profile.cdf()
        items = np.empty(self._r, dtype=np.int64)
        for start in range(0, self._r, CHUNK_SIZE):
            stop = min(start + CHUNK_SIZE, self._r)
            u = rng.random(stop - start)
            items[start:stop] = np.searchsorted(cdf, u, side='right')
        # u is in [0, 1) and cdf[-1] == 1, so the index is always valid.
        items.flags.writeable = False
        return items

    @property
    def items(self):
        if self._items is None:
            self._items = self.generate()
        return self._items

    def __len__(self):
        return self._r

    def __iter__(self):
        return iter(self.items.tolist())

    def __getstate__(self):
        state = self.__dict__.copy()
        if self._seed is not None:
            state['_items'] = None
        return state

    def __setstate__(self, state):
        self.__dict__.update(state)
        if self._items is not None:
            self._items.flags.writeable = False


def gen_requests(profile, r, seed):
    """
    r i.i.d. requests drawn from profile, reproducible given seed.
    """
    return RequestStream(profile=profile, r=r, seed=seed)


def read_replay(file_name):
    table = SimcacheReplayTable(file_name=file_name).read()
    items = np.asarray(table['item_id'], dtype=np.int64)
    if len(items) == 0:
        raise WorkloadError("Replay file {} is empty".format(file_name))
    return items


def write_replay(stream, file_name):
    """
    Write a stream as a replay file, one item id per line.
    """
    items = stream.items if isinstance(stream, RequestStream) else np.asarray(stream, dtype=np.int64)
    t = Table()
    t.add_column(Column(name='item_id', data=np.array(items, dtype=np.int64)))
    SimcacheReplayTable(file_name=file_name).write(t)
    return file_name
