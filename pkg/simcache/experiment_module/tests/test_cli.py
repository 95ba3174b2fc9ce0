import os

import pytest

from simcache.experiment_module.cli import build_parser, main

SMALL = ['--grid', '5x5', '--hotspots', '1,1;3,3', '--requests', '2000', '--replications', '2']


def test_parser_names():
    args = build_parser().parse_args(['sweep', '--q-map', '1:0.5', '--max-iters', '7', '--out', 'results',
                                      '--capacities', '3,6'])
    assert args.command == 'sweep'
    assert args.q_map == '1:0.5'
    assert args.max_iterations == 7
    assert args.out_path == 'results'
    assert args.capacities == [3, 6]
    assert args.debug is None


testCommands_data = [
    (['synth'], ["sim_catalog.csv", "sim_popularity.csv"]),
    (['sweep', '--capacities', '2,4'], ["sim_sweep.csv"]),
    (['occupancy', '--capacity', '3'], ["sim_occupancy_C3.csv"]),
    (['trace', '--capacity', '3', '--prefix', 'run'], ["run_trace_C3.csv"])
]


@pytest.mark.parametrize(("command", "files"), testCommands_data)
def test_commands(out_dir, command, files):
    assert main(command + SMALL + ['--out', out_dir]) == 0
    for file_name in files:
        assert os.path.isfile(os.path.join(out_dir, file_name))


testFailures_data = [
    ['sweep', '--capacities', '4,2'],
    ['sweep', '--policy', 'rnd-lru', '--q-map', 'oops'],
    ['trace', '--capacity', '25'],
    ['synth', '--catalog', 'missing_catalog.csv'],
    ['synth', '--grid', '5x5', '--hotspots', '9,9']
]


@pytest.mark.parametrize("command", testFailures_data)
def test_failures_exit_with_one(out_dir, capsys, command):
    options = SMALL + command[1:] if command[0] != 'synth' else command[1:]
    assert main(command[:1] + options + ['--out', out_dir]) == 1
    assert "error" in capsys.readouterr().err


testUsage_data = [
    [],
    ['sweep', '--policy', 'fifo'],
    ['sweep', '--requests', 'many'],
    ['evaluate']
]


@pytest.mark.parametrize("argv", testUsage_data)
def test_malformed_arguments_exit_with_two(argv):
    with pytest.raises(SystemExit) as excinfo:
        main(argv)
    assert excinfo.value.code == 2


def test_version(capsys):
    with pytest.raises(SystemExit) as excinfo:
        main(['--version'])
    assert excinfo.value.code == 0
    assert "simcache" in capsys.readouterr().out
