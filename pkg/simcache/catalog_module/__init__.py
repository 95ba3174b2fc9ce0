__all__ = ['catalog', 'neighbors', 'qmodel']

# Local Definitions
from .catalog import Catalog, Item
from .neighbors import NeighborIndex, build_neighbor_index, closer_set
from .qmodel import QModel
