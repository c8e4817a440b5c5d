import logging
import math
import os
import time

import pandas as pd

from comb_resources.cli.matrix_file import read_json, validate_document, write_json

logger = logging.getLogger(__package__)

# Output file names.
REPORT_FILE_NAME = 'report.json'
SUMMARY_FILE_NAME = 'summary.tsv'


def _finite(value):
    """JSON-safe number: infinities become the string 'inf'."""
    if isinstance(value, float) and math.isinf(value):
        return 'inf' if value > 0 else '-inf'
    return value


class Report:
    """Holds the inputs, results and timing of one command run."""

    def __init__(self, command, inputs, seed=None):
        self.command = command
        self.inputs = dict(inputs)
        self.seed = seed
        self.quantifiers = {}
        self.optimizations = []
        self.divergences = []
        self.diagnostics = {}
        self.started = time.monotonic()
        self.wall_clock_seconds = 0.0

    def add_quantifiers(self, name, quantifier_report):
        self.quantifiers[name] = quantifier_report.as_dict()

    def add_optimization(self, result, witness_file):
        document = result.as_dict()
        document['witness_file'] = witness_file
        self.optimizations.append(document)

    def add_divergence(self, result, witness_file, name='divergence'):
        document = result.as_dict()
        document['name'] = name
        document['witness_file'] = witness_file
        self.divergences.append(document)

    def add_diagnostics(self, name, document):
        self.diagnostics[name] = {key: _finite(value) for key, value in document.items()}

    def finish(self):
        self.wall_clock_seconds = time.monotonic() - self.started

    def as_dict(self):
        return {
            'command': self.command,
            'inputs': self.inputs,
            'quantifiers': self.quantifiers,
            'optimizations': self.optimizations,
            'divergences': self.divergences,
            'diagnostics': self.diagnostics,
            'seed': self.seed,
            'wall_clock_seconds': self.wall_clock_seconds,
        }

    def collate_report(self):
        lines = [f'Command\t{self.command}']
        for name, values in self.quantifiers.items():
            lines.append(f'Quantifiers of {name}')
            lines.append(f'    I (bits)\t{values["I_bits"]:.9f}')
            lines.append(f'    M (bits)\t{values["M_bits"]:.9f}')
            lines.append(f'    N (bits)\t{values["N_bits"]:.9f}')
            lines.append(f'    |I - (M + N)|\t{values["identity_defect"]:.3e}')
        for optimization in self.optimizations:
            lines.append(f'Found lower bound on the optimized {optimization["objective"]}\t'
                         f'{optimization["best_value"]:.9f}')
            lines.append(f'    Converged\t{optimization["converged"]}')
            lines.append(f'    Restarts\t{len(optimization["restarts"])}')
            lines.append(f'    Witness comb\t{optimization["witness_file"]}')
        for divergence in self.divergences:
            lines.append(f'Found lower bound on the reachable divergence ({divergence["name"]})\t'
                         f'{divergence["value_bits"]}')
            lines.append(f'    Combs evaluated\t{divergence["samples_evaluated"]}')
            lines.append(f'    Witness comb\t{divergence["witness_file"]}')
        for name, values in self.diagnostics.items():
            lines.append(f'Diagnostics: {name}')
            lines.extend(f'    {key}\t{value}' for key, value in values.items())
        lines.append(f'Wall clock (s)\t{self.wall_clock_seconds:.2f}')
        return '\n'.join(lines)

    def write(self, dir_out):
        document = self.as_dict()
        validate_document(document, 'report')
        path = os.path.join(dir_out, REPORT_FILE_NAME)
        write_json(path, document)
        return path


def _flatten(document, prefix=''):
    flat = {}
    for key, value in document.items():
        name = f'{prefix}{key}'
        if isinstance(value, dict):
            flat.update(_flatten(value, f'{name}.'))
        elif not isinstance(value, list):
            flat[name] = value
    return flat


def report_row(path):
    """One summary row of a report file: scalar quantifier, optimization, divergence and diagnostic values."""
    document = read_json(path, 'report')
    row = {'report': path, 'command': document['command'], 'seed': document['seed'],
           'wall_clock_seconds': document['wall_clock_seconds']}
    row.update(_flatten(document['quantifiers'], 'quantifiers.'))
    for optimization in document['optimizations']:
        row[f'optimized.{optimization["objective"]}'] = optimization['best_value']
        row[f'optimized.{optimization["objective"]}.converged'] = optimization['converged']
    for divergence in document['divergences']:
        row[f'divergence.{divergence["name"]}'] = divergence['value_bits']
    row.update(_flatten(document['diagnostics'], 'diagnostics.'))
    return row


def collate_reports(paths):
    """Summary table with one row per report file."""
    return pd.DataFrame([report_row(path) for path in paths])


def write_summary(table, dir_out):
    path = os.path.join(dir_out, SUMMARY_FILE_NAME)
    table.to_csv(path, sep='\t', index=False)
    return path
