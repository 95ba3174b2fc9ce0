__all__ = ['utilities']

# Local Definitions
from .DataTable import SimcacheDataTable
from .utilities import (SimcacheEnvironment,
                        InitLogger,
                        SelectParameter,
                        GetParameter,
                        ResolvePath)
