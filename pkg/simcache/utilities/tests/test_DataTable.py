import numpy as np
import pytest
from astropy.table import Column, MaskedColumn, Table

from simcache.utilities import SimcacheDataTable
from simcache.utilities.DataTable import SimcacheCsvTable, SimcacheReplayTable


testTableType_data = [
    ("results.csv", SimcacheCsvTable),
    ("catalog.dat", SimcacheCsvTable),
    ("requests.txt", SimcacheReplayTable),
    ("requests.replay", SimcacheReplayTable)
]


@pytest.mark.parametrize(("file_name", "table_type"), testTableType_data)
def test_table_type(tmp_path, file_name, table_type):
    table = SimcacheDataTable.dataTableFromFile(str(tmp_path / file_name))
    assert isinstance(table, table_type)


def test_floats_survive_round_trip(tmp_path):
    values = np.array([1. / 3., np.pi * 1e-12, 0.1 + 0.2, 2. ** -40])
    t = Table()
    t.add_column(Column(name='item_id', data=np.arange(4)))
    t.add_column(Column(name='value', data=values))
    data_table = SimcacheDataTable.dataTableFromFile(str(tmp_path / "values.csv"))
    data_table.write(t)
    assert data_table.columns == ['item_id', 'value']
    again = data_table.read()
    np.testing.assert_array_equal(again['value'], values)


def test_masked_cells_are_empty(tmp_path):
    t = Table()
    t.add_column(Column(name='method', data=['Exp-SIM', 'LRU']))
    t.add_column(MaskedColumn(name='ci_low', data=[0.25, np.nan], mask=[False, True]))
    file_name = str(tmp_path / "sweep.csv")
    SimcacheDataTable.dataTableFromFile(file_name).write(t)
    with open(file_name) as inf:
        lines = inf.read().splitlines()
    assert lines == ["method,ci_low", "Exp-SIM,0.25", "LRU,"]


def test_missing_columns(tmp_path):
    file_name = str(tmp_path / "counts.csv")
    with open(file_name, "w") as outf:
        outf.write("item_id,hits\n0,3\n")
    with pytest.raises(ValueError):
        SimcacheDataTable.dataTableFromFile(file_name, names=['item_id', 'count']).read()


def test_replay_table(tmp_path):
    file_name = str(tmp_path / "stream.txt")
    data_table = SimcacheDataTable.dataTableFromFile(file_name)
    data_table.write(Table([[3, 1, 4, 1, 5]], names=['item_id']))
    with open(file_name) as inf:
        assert inf.read().split() == ['3', '1', '4', '1', '5']
    assert data_table.read()['item_id'].tolist() == [3, 1, 4, 1, 5]


def test_missing_file(tmp_path):
    with pytest.raises(FileNotFoundError):
        SimcacheDataTable.dataTableFromFile(str(tmp_path / "absent.csv")).read()
