"""Index-loop reference implementations of the multi-leg matrix operations, written entry by entry without einsum or
reshapes. They are slow and meant only to check linalg_core on small leg configurations."""

import itertools
import math

import numpy as np

from comb_resources.linalg_core import MultiLegMatrix

# Largest total dimension the oracle checks are run on.
ORACLE_MAX_DIM = 81
ORACLE_TOLERANCE = 1e-12


def _flat(digits, dims):
    index = 0
    for digit, dim in zip(digits, dims):
        index = index * dim + digit
    return index


def _digits(dims):
    return itertools.product(*[range(dim) for dim in dims])


def tensor_product_oracle(a, b):
    entries = np.zeros((a.dim * b.dim, a.dim * b.dim), dtype=np.complex128)
    for row_a, col_a, row_b, col_b in itertools.product(range(a.dim), range(a.dim), range(b.dim), range(b.dim)):
        entries[row_a * b.dim + row_b, col_a * b.dim + col_b] = a.entries[row_a, col_a] * b.entries[row_b, col_b]
    return MultiLegMatrix(entries, a.legs + b.legs)


def partial_trace_oracle(m, over):
    kept = [axis for axis, label in enumerate(m.labels) if label not in over]
    traced = [axis for axis, label in enumerate(m.labels) if label in over]
    kept_dims = [m.dims[axis] for axis in kept]
    entries = np.zeros((math.prod(kept_dims), math.prod(kept_dims)), dtype=np.complex128)
    for row in _digits(kept_dims):
        for col in _digits(kept_dims):
            total = 0
            for inner in _digits([m.dims[axis] for axis in traced]):
                full_row, full_col = [0] * len(m.legs), [0] * len(m.legs)
                for axis, digit in zip(kept, row):
                    full_row[axis] = digit
                for axis, digit in zip(kept, col):
                    full_col[axis] = digit
                for axis, digit in zip(traced, inner):
                    full_row[axis] = full_col[axis] = digit
                total += m.entries[_flat(full_row, m.dims), _flat(full_col, m.dims)]
            entries[_flat(row, kept_dims), _flat(col, kept_dims)] = total
    return MultiLegMatrix(entries, [m.legs[axis] for axis in kept])


def partial_transpose_oracle(m, over):
    entries = np.zeros_like(m.entries)
    for row in _digits(m.dims):
        for col in _digits(m.dims):
            source_row, source_col = list(row), list(col)
            for axis, label in enumerate(m.labels):
                if label in over:
                    source_row[axis], source_col[axis] = col[axis], row[axis]
            entries[_flat(row, m.dims), _flat(col, m.dims)] = \
                m.entries[_flat(source_row, m.dims), _flat(source_col, m.dims)]
    return MultiLegMatrix(entries, m.legs)


def link_product_oracle(a, b):
    """d · Σ over shared indices s, s' of a[(x, s), (x', s')] · b[(s, y), (s', y')], with d the shared dimension."""
    shared = [label for label in a.labels if label in b.labels]
    a_only = [label for label in a.labels if label not in shared]
    b_only = [label for label in b.labels if label not in shared]
    shared_dims = [a.leg(label).dim for label in shared]
    a_dims = [a.leg(label).dim for label in a_only]
    b_dims = [b.leg(label).dim for label in b_only]
    out_dims = a_dims + b_dims
    out_dim = math.prod(out_dims)
    entries = np.zeros((out_dim, out_dim), dtype=np.complex128)

    def a_index(free, common):
        digits = {**dict(zip(a_only, free)), **dict(zip(shared, common))}
        return _flat([digits[label] for label in a.labels], a.dims)

    def b_index(free, common):
        digits = {**dict(zip(b_only, free)), **dict(zip(shared, common))}
        return _flat([digits[label] for label in b.labels], b.dims)

    for row in _digits(out_dims):
        for col in _digits(out_dims):
            row_a, row_b = row[:len(a_only)], row[len(a_only):]
            col_a, col_b = col[:len(a_only)], col[len(a_only):]
            total = 0
            for common_row in _digits(shared_dims):
                for common_col in _digits(shared_dims):
                    total += (a.entries[a_index(row_a, common_row), a_index(col_a, common_col)] *
                              b.entries[b_index(row_b, common_row), b_index(col_b, common_col)])
            entries[_flat(row, out_dims), _flat(col, out_dims)] = math.prod(shared_dims) * total
    legs = [a.leg(label) for label in a_only] + [b.leg(label) for label in b_only]
    return MultiLegMatrix(entries, legs)


def max_abs_error(m, reference):
    """Largest entry-wise deviation after aligning the leg order of m with the reference."""
    return float(np.max(np.abs(m.permute(reference.labels).entries - reference.entries), initial=0.0))
