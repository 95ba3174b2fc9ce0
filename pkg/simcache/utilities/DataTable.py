"""
General code for handling the CSV data tables that simcache reads and writes:
catalogues, trace counts, replay streams and experiment results.

:Organization: simcache developers

"""
from __future__ import absolute_import, division, print_function

# External modules
import numpy as np
import os
from astropy.table import Table

# Floats are written with 17 significant digits so that re-reading a file
# reproduces the in-memory doubles exactly.
FLOAT_FORMAT = '%.17g'


class SimcacheDataTable(object):
    def __init__(self, **kwargs):
        """
        This function creates a data table object. It expects a file name, and
        will take formatting arguments, and do both input and output.
        """
        self._file = kwargs.get('file_name', None)
        self._fname = os.path.split(self._file)[1]
        self._in_dir = kwargs.get('in_dir', os.getcwd())
        self._format = kwargs.get('format', 'ascii.csv')
        self._names = kwargs.get('names', None)
        self.init_table()

    @staticmethod
    def dataTableFromFile(table_file, **kwargs):
        """
        Creates a data table given a file. Files ending in ``.txt`` or
        ``.replay`` are header-less single column streams, anything else is CSV.
        """
        table_classes = {'replay': SimcacheReplayTable, 'default': SimcacheCsvTable}
        (file_path, file_name) = os.path.split(table_file)
        (table_base, ext) = os.path.splitext(file_name)
        if ext in ('.txt', '.replay'):
            table = table_classes['replay'](file_name=table_file, format='ascii.no_header',
                                            in_dir=file_path, **kwargs)
        else:
            table = table_classes['default'](file_name=table_file, format='ascii.csv',
                                             in_dir=file_path, **kwargs)
        return table

    @property
    def file(self):
        return self._file

    @property
    def in_dir(self):
        return self._in_dir

    @property
    def format(self):
        return self._format

    def init_table(self):
        """
        Nothing to do in base class
        """
        pass

    def read(self):
        raise NotImplementedError("Read not implemented in base class")

    def write(self, table):
        raise NotImplementedError("Write not implemented in base class")

    @staticmethod
    def float_formats(table):
        """
        Output formats for every floating point column of table.
        """
        formats = {}
        for name in table.colnames:
            if np.issubdtype(table[name].dtype, np.floating):
                formats[name] = FLOAT_FORMAT
        return formats


class SimcacheCsvTable(SimcacheDataTable):
    def init_table(self):
        self.columns = None
        if os.path.isfile(self.file):
            with open(self.file, 'r') as inf:
                header = inf.readline().strip()
            self.columns = header.split(',') if header else []

    def read(self):
        if not os.path.isfile(self.file):
            raise FileNotFoundError("File {} does not exist.".format(self.file))
        table = Table.read(self.file, format=self.format, guess=False)
        if self._names is not None:
            missing = [name for name in self._names if name not in table.colnames]
            if missing:
                msg = "Table {} is missing columns {}"
                raise ValueError(msg.format(self.file, ", ".join(missing)))
        return table

    def write(self, table):
        out = table.copy(copy_data=False)
        out.meta.clear()
        out.write(self.file, format=self.format, overwrite=True,
                  formats=self.float_formats(out))
        self.columns = list(out.colnames)


class SimcacheReplayTable(SimcacheDataTable):
    def read(self):
        if not os.path.isfile(self.file):
            raise FileNotFoundError("File {} does not exist.".format(self.file))
        return Table.read(self.file, format='ascii.no_header', names=['item_id'], guess=False)

    def write(self, table):
        out = Table([np.asarray(table['item_id'], dtype=np.int64)], names=['item_id'])
        out.write(self.file, format='ascii.no_header', overwrite=True)
