"""
Command line interface::

    simcache synth --grid 100x100 --alpha 2.5 --out results
    simcache sweep --policy sim-lru --d 1 --capacities 100,200,300 --replications 10
    simcache occupancy --capacity 500
    simcache trace --capacity 500 --max-iters 25

Exit code 0 on success, 1 on configuration or feasibility errors, 2 on
malformed arguments.
"""
# External modules
import argparse
import sys

# Local modules
from .experiment_config import parse_capacities
from .experiment_module import ExperimentModule
from .. import __version__
from ..errors import SimcacheError

COMMANDS = ('synth', 'sweep', 'occupancy', 'trace')


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    source = common.add_argument_group('catalog')
    source.add_argument('--catalog', help='Catalog CSV (item_id,dim_0,...,weight); default is the synthetic grid')
    source.add_argument('--counts', help='Trace-count CSV (item_id,count) giving empirical rates over --catalog')
    source.add_argument('--replay', help='Replay file with one requested item id per line')
    source.add_argument('--grid', metavar='WxH', help='Synthetic grid size')
    source.add_argument('--alpha', type=float, help='Popularity skew of the synthetic grid')
    source.add_argument('--hotspots', metavar='"x,y;x,y"', help='Popularity centres of the synthetic grid')

    cache = common.add_argument_group('cache')
    cache.add_argument('--d', type=float, help='Similarity threshold')
    cache.add_argument('--q-map', dest='q_map', metavar='"dist:q,..."', help='RND-LRU serve probabilities')
    cache.add_argument('--policy', choices=['lru', 'sim-lru', 'rnd-lru'])
    cache.add_argument('--capacity', type=int, help='Single capacity (occupancy, trace)')
    cache.add_argument('--capacities', type=parse_capacities, metavar='C1,C2,...', help='Sweep capacities')

    run = common.add_argument_group('simulation and solver')
    run.add_argument('--requests', type=int, help='Requests per stream')
    run.add_argument('--replications', type=int, help='Independent replications')
    run.add_argument('--seed', type=int, help='Random seed')
    run.add_argument('--warmup', type=float, help='Fraction of each stream not counted')
    run.add_argument('--epsilon', type=float, help='Fixed point stopping threshold on max|do|')
    run.add_argument('--max-iters', dest='max_iterations', type=int, help='Maximum fixed point iterations')
    run.add_argument('--damping', type=float, help='Weight of the new prediction in the damped update')
    run.add_argument('--cores', type=int, help='Worker processes')
    run.add_argument('--debug', action='store_true', default=None, help='Check cache invariants at every request')

    general = common.add_argument_group('general')
    general.add_argument('--out', dest='out_path', help='Output directory')
    general.add_argument('--prefix', dest='out_prefix', default='sim', help='Output file name prefix')
    general.add_argument('--config', dest='config_file', help='Configuration file')
    general.add_argument('--log-level', dest='log_level', choices=['CRITICAL', 'ERROR', 'WARNING', 'INFO', 'DEBUG'])

    parser = argparse.ArgumentParser(prog='simcache',
                                     description='Hit rate prediction and simulation of similarity caches')
    parser.add_argument('--version', action='version', version='%(prog)s {}'.format(__version__))
    subparsers = parser.add_subparsers(dest='command', required=True)
    subparsers.add_parser('synth', parents=[common], help='Write the synthetic catalog and popularity')
    subparsers.add_parser('sweep', parents=[common], help='Hit rate versus capacity for every method')
    subparsers.add_parser('occupancy', parents=[common], help='Simulated and predicted per-item occupancies')
    subparsers.add_parser('trace', parents=[common], help='Convergence trace of the fixed point iteration')
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    kwargs = {key: value for key, value in vars(args).items() if key != 'command' and value is not None}
    try:
        module = ExperimentModule(**kwargs)
        if args.command == 'synth':
            module.cmd_synth()
        elif args.command == 'sweep':
            module.cmd_sweep()
        elif args.command == 'occupancy':
            module.cmd_occupancy()
        else:
            module.cmd_trace()
    except (SimcacheError, FileNotFoundError) as e:
        sys.stderr.write("simcache {}: error: {}\n".format(args.command, e))
        return 1
    return 0


if __name__ == '__main__':
    sys.exit(main())
