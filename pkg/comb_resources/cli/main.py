import argparse
import logging

import jsonschema

from comb_resources.cli import commands
from comb_resources.cli.config_file import merge_config
from comb_resources.cli.verify import SUITES
from comb_resources.optimizer.config import Schedule
from comb_resources.quantifiers import Objective

logger = logging.getLogger(__package__)

PACKAGE_LOGGERS = ('comb_resources', 'comb_resources.comb_model', 'comb_resources.optimizer', 'comb_resources.cli')

EXIT_SUCCESS = 0
EXIT_ASSERTION = 1
EXIT_INPUT = 2


def set_verbosity(verbose):
    level = logging.DEBUG if verbose else logging.INFO
    for name in PACKAGE_LOGGERS:
        logging.getLogger(name).setLevel(level)


def _add_optimizer_flags(parser):
    parser.add_argument('--config', help='JSON optimizer config file; flags override its values')
    parser.add_argument('--seed', type=int, help='Root seed of every random draw')
    parser.add_argument('--restarts', type=int, help='Number of starting combs')
    parser.add_argument('--tol', type=float, dest='rel_tol', help='Relative change that ends the sweeps')
    parser.add_argument('--max-sweeps', type=int, help='Sweep limit per restart')
    parser.add_argument('--inner-iters', type=int, help='Ascent steps per channel update')
    parser.add_argument('--objective', choices=[objective.value for objective in Objective],
                        help='Quantity to maximize')
    parser.add_argument('--resolution', nargs='*', metavar='TIME',
                        help='Intermediate times left open after control; give no times to close them all')
    parser.add_argument('--schedule', choices=[schedule.value for schedule in Schedule],
                        help='Optimize at the target resolution directly or through staged coarse-graining')
    parser.add_argument('--threads', type=int, help='Worker processes for the restarts')
    parser.add_argument('--witness', action='append', default=[], help='Comb file used as a warm start; repeatable')


def optimizer_config(args):
    flags = {
        'seed': args.seed,
        'restarts': args.restarts,
        'rel_tol': args.rel_tol,
        'max_sweeps': args.max_sweeps,
        'inner_iters': args.inner_iters,
        'objective': args.objective,
        'target_resolution': args.resolution,
        'schedule': args.schedule,
        'threads': args.threads,
    }
    return merge_config(flags, args.config)


def build_parser():
    parser = argparse.ArgumentParser(
        description='Process tensors under restricted control: quantifiers of temporal correlations, their '
                    'control-optimized monotones and reachable comb divergences.')
    parser.add_argument('--verbose', action='store_true', help='Log at DEBUG level')
    subparsers = parser.add_subparsers(dest='command', required=True)

    build = subparsers.add_parser('build', help='Build a process from a scenario file')
    build.add_argument('spec_file', help='Scenario specification JSON')
    build.add_argument('--out', required=True, help='Output directory')
    build.set_defaults(handler=lambda args: commands.cmd_build(args.spec_file, args.out))

    quantify = subparsers.add_parser('quantify', help='Total information, Markovian information and '
                                                      'non-Markovianity of a process')
    quantify.add_argument('process_file', help='Process matrix file with its .slots.json sidecar')
    quantify.add_argument('--coarse-grain', nargs='+', metavar='TIME',
                          help=f'Also quantify after closing these intermediate times, or {commands.COARSE_GRAIN_ALL}')
    quantify.add_argument('--out', required=True, help='Output directory')
    quantify.set_defaults(handler=lambda args: commands.cmd_quantify(args.process_file, args.out, args.coarse_grain))

    optimize = subparsers.add_parser('optimize', help='Lower bound on a control-optimized monotone')
    optimize.add_argument('process_file', help='Process matrix file with its .slots.json sidecar')
    optimize.add_argument('--all', action='store_true', dest='all_objectives',
                          help='Estimate all three monotones with shared warm starts')
    optimize.add_argument('--out', required=True, help='Output directory')
    _add_optimizer_flags(optimize)
    optimize.set_defaults(handler=lambda args: commands.cmd_optimize(
        args.process_file, args.out, optimizer_config(args), args.witness, args.all_objectives))

    divergence = subparsers.add_parser('divergence', help='Lower bound on the reachable comb divergence')
    divergence.add_argument('process_file', help='Process matrix file')
    divergence.add_argument('reference_file', nargs='?', help='Reference process; defaults to the full marginal')
    divergence.add_argument('--hierarchy', action='store_true', help='Also check the monotone-divergence hierarchy')
    divergence.add_argument('--bounds', action='store_true', help='Also bound the three monotones by divergences')
    divergence.add_argument('--out', required=True, help='Output directory')
    _add_optimizer_flags(divergence)
    divergence.set_defaults(handler=lambda args: commands.cmd_divergence(
        args.process_file, args.reference_file, args.out, optimizer_config(args), args.witness, args.hierarchy,
        args.bounds))

    compose = subparsers.add_parser('compose', help='Sequential or parallel composition of two processes')
    compose.add_argument('first_file', help='Earlier (seq) or more significant (par) process')
    compose.add_argument('second_file', help='Later (seq) or less significant (par) process')
    compose.add_argument('--mode', choices=commands.COMPOSE_MODES, default='seq')
    compose.add_argument('--out', required=True, help='Output directory')
    compose.set_defaults(handler=lambda args: commands.cmd_compose(args.first_file, args.second_file, args.mode,
                                                                   args.out))

    verify = subparsers.add_parser('verify', help='Run property suites')
    verify.add_argument('suites', nargs='+', choices=list(SUITES) + ['all'])
    verify.add_argument('--quick', action='store_true', help='Use small sample counts')
    verify.add_argument('--out', required=True, help='Output directory')
    verify.set_defaults(handler=lambda args: commands.cmd_verify(args.suites, args.out, args.quick))

    report = subparsers.add_parser('report', help='Collate report files into one table')
    report.add_argument('report_files', nargs='+')
    report.add_argument('--out', required=True, help='Output directory')
    report.set_defaults(handler=lambda args: commands.cmd_report(args.report_files, args.out))
    return parser


def main(argv=None):
    """Run one subcommand and return its exit code: 0 on success, 1 when a numerical check fails and 2 on bad input.
    Usage errors exit with code 2 from argparse."""
    args = build_parser().parse_args(argv)
    set_verbosity(args.verbose)
    try:
        args.handler(args)
    except AssertionError as err:
        logger.error(f'Numerical check failed: {err}')
        return EXIT_ASSERTION
    except (ValueError, OSError, jsonschema.exceptions.ValidationError, jsonschema.exceptions.SchemaError) as err:
        logger.error(f'Input error: {err}')
        return EXIT_INPUT
    return EXIT_SUCCESS
