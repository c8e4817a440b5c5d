"""The subcommands of bin/comb_tool.py. Every command writes its outputs and a report.json into the output directory
and prints the collated report."""

import logging
import os

from comb_resources.cli import matrix_file, verify
from comb_resources.cli.report import Report, collate_reports, write_summary
from comb_resources.comb_model.composition import compose_parallel, compose_sequential
from comb_resources.comb_model.control import coarse_grain
from comb_resources.comb_model.process import full_marginal
from comb_resources.divergence import hierarchy_check, monotone_bounds, reachable_divergence
from comb_resources.optimizer.diagnostics import estimate_all
from comb_resources.optimizer.see_saw import estimate_monotone
from comb_resources.quantifiers import quantify
from comb_resources.scenarios import PLANTED_KINDS, ScenarioKind, build_decoupling, build_planted, build_random

logger = logging.getLogger(__package__)

# Output file names.
PROCESS_FILE_NAME = 'process.json'
PLANTED_COMB_FILE_NAME = 'planted_comb.json'
WITNESS_FILE_NAME = 'witness_comb.json'
DIVERGENCE_WITNESS_FILE_NAME = 'divergence_witness_comb.json'
COMPOSED_FILE_NAME = 'composed.json'
VERIFY_FILE_NAME = 'verify.tsv'

COARSE_GRAIN_ALL = 'all'
COMPOSE_MODES = ('seq', 'par')


def _finish(report, dir_out):
    report.finish()
    path = report.write(dir_out)
    print(report.collate_report())
    return path


def _witness_path(dir_out, file_name, name=None):
    if name is None:
        return os.path.join(dir_out, file_name)
    return os.path.join(dir_out, f'{name}_{file_name}')


def cmd_build(spec_file, dir_out):
    """Build the process a scenario file describes, with its planted comb where the scenario has one."""
    os.makedirs(dir_out, exist_ok=True)
    spec = matrix_file.read_scenario(spec_file)
    report = Report('build', {'spec_file': spec_file, 'scenario': spec.as_dict()}, seed=spec.seed)
    if spec.kind in PLANTED_KINDS:
        comb_metadata = {'scenario': spec.kind.value}
        if spec.kind == ScenarioKind.DEPHASING_STATIC_ENV:
            scenario = build_decoupling(spec)
            t, comb = scenario.process, scenario.comb
            comb_metadata['dd_margin'] = repr(scenario.margin)
            report.add_diagnostics('decoupling', {'dd_margin': scenario.margin})
        else:
            t, comb = build_planted(spec)
        comb_path = os.path.join(dir_out, PLANTED_COMB_FILE_NAME)
        matrix_file.write_comb(comb_path, comb, metadata=comb_metadata)
        report.inputs['planted_comb_file'] = comb_path
    else:
        t = build_random(spec)
    process_path = os.path.join(dir_out, PROCESS_FILE_NAME)
    matrix_file.write_process(process_path, t, metadata={'scenario': spec.kind.value, 'seed': spec.seed})
    report.inputs['process_file'] = process_path
    report.add_diagnostics('validation', t.validate().as_dict())
    report.add_quantifiers('process', quantify(t))
    _finish(report, dir_out)
    return process_path


def coarse_grain_labels(t, coarse):
    """Intermediate time labels to close: every one of them for 'all'."""
    if not coarse:
        return []
    if list(coarse) == [COARSE_GRAIN_ALL]:
        return list(t.slots.intermediate_labels)
    return list(coarse)


def cmd_quantify(process_file, dir_out, coarse=None):
    os.makedirs(dir_out, exist_ok=True)
    t = matrix_file.read_process(process_file)
    drop = coarse_grain_labels(t, coarse)
    report = Report('quantify', {'process_file': process_file, 'coarse_grain': drop})
    report.add_quantifiers('process', quantify(t))
    if drop:
        report.add_quantifiers('coarse_grained', quantify(coarse_grain(t, drop)))
    return _finish(report, dir_out)


def _read_combs(paths):
    return [matrix_file.read_comb(path) for path in paths or ()]


def cmd_optimize(process_file, dir_out, cfg, witness_files=(), all_objectives=False):
    """Estimate the configured monotone, or all three at the same resolution, and store the witness combs."""
    os.makedirs(dir_out, exist_ok=True)
    t = matrix_file.read_process(process_file)
    seeds = _read_combs(witness_files)
    report = Report('optimize', {'process_file': process_file, 'witness_files': list(witness_files or ()),
                                 'config': cfg.as_dict()}, seed=cfg.seed)
    report.add_quantifiers('process', quantify(t))
    if all_objectives:
        monotones = estimate_all(t, cfg)
        results = monotones.results
        report.add_diagnostics('subadditivity', monotones.as_dict())
    else:
        results = [estimate_monotone(t, cfg, seeds)]
    for result in results:
        name = None if len(results) == 1 else result.objective.value
        path = _witness_path(dir_out, WITNESS_FILE_NAME, name)
        matrix_file.write_comb(path, result.best_comb, metadata={'objective': result.objective.value,
                                                                 'best_value': repr(result.best_value)})
        report.add_optimization(result, path)
    return _finish(report, dir_out)


def cmd_divergence(t_file, r_file, dir_out, cfg, witness_files=(), hierarchy=False, bounds=False):
    """Reachable divergence of t from r (from its full marginal when r is not given), optionally with the hierarchy
    check and the divergence bounds on the monotones."""
    os.makedirs(dir_out, exist_ok=True)
    t = matrix_file.read_process(t_file)
    r = matrix_file.read_process(r_file, check=False) if r_file else full_marginal(t)
    report = Report('divergence', {'process_file': t_file, 'reference_file': r_file or 'full marginal',
                                   'config': cfg.as_dict()}, seed=cfg.seed)
    result = reachable_divergence(t, r, cfg, seeds=_read_combs(witness_files))
    path = _witness_path(dir_out, DIVERGENCE_WITNESS_FILE_NAME)
    matrix_file.write_comb(path, result.witness_comb, metadata={'value_bits': repr(result.value_bits)})
    report.add_divergence(result, path)
    if hierarchy:
        hierarchy_report = hierarchy_check(t, cfg)
        path = _witness_path(dir_out, DIVERGENCE_WITNESS_FILE_NAME, 'hierarchy')
        matrix_file.write_comb(path, hierarchy_report.divergence.witness_comb)
        report.add_divergence(hierarchy_report.divergence, path, name='hierarchy')
        report.add_diagnostics('hierarchy', hierarchy_report.as_dict())
    if bounds:
        bounds_report = monotone_bounds(t, cfg)
        for name, divergence in (('total', bounds_report.total), ('markov', bounds_report.markov),
                                 ('non_markov', bounds_report.non_markov)):
            path = _witness_path(dir_out, DIVERGENCE_WITNESS_FILE_NAME, name)
            matrix_file.write_comb(path, divergence.witness_comb)
            report.add_divergence(divergence, path, name=f'bound_{name}')
        report.add_diagnostics('bounds', bounds_report.as_dict())
    return _finish(report, dir_out)


def cmd_compose(first_file, second_file, mode, dir_out):
    if mode not in COMPOSE_MODES:
        raise ValueError(f'Unknown composition mode {mode!r}, expected one of {list(COMPOSE_MODES)}')
    os.makedirs(dir_out, exist_ok=True)
    first = matrix_file.read_process(first_file)
    second = matrix_file.read_process(second_file)
    composed = compose_sequential(first, second) if mode == 'seq' else compose_parallel(first, second)
    path = os.path.join(dir_out, COMPOSED_FILE_NAME)
    matrix_file.write_process(path, composed, metadata={'mode': mode, 'first': first_file, 'second': second_file})
    report = Report('compose', {'first_file': first_file, 'second_file': second_file, 'mode': mode,
                                'process_file': path})
    for name, t in (('first', first), ('second', second), ('composed', composed)):
        report.add_quantifiers(name, quantify(t))
    _finish(report, dir_out)
    return path


def cmd_verify(suites, dir_out, quick=False):
    """Run the property suites and write one row per check; any failed check fails the command."""
    os.makedirs(dir_out, exist_ok=True)
    table = verify.run_suites(suites, quick)
    path = os.path.join(dir_out, VERIFY_FILE_NAME)
    table.to_csv(path, sep='\t', index=False)
    print(table.to_string(index=False))
    failed = table[~table['passed']]
    assert failed.empty, f'{len(failed)} of {len(table)} checks failed: {list(failed["check"])}'
    return path


def cmd_report(report_files, dir_out):
    os.makedirs(dir_out, exist_ok=True)
    table = collate_reports(report_files)
    path = write_summary(table, dir_out)
    print(table.to_string(index=False))
    return path
