"""Dense complex-matrix primitives on multi-leg tensor spaces. A MultiLegMatrix is a square matrix together with an ordered
list of labelled legs; the composite row (and column) index is row-major with the first leg most significant, so the
Kronecker product of two matrices is the matrix of the concatenated leg list."""

import logging
import math

import numpy as np
import scipy.linalg

logger = logging.getLogger(__package__)

# Eigenvalues at or below this value are treated as zero in support decisions and logarithms.
EIGENVALUE_CUTOFF = 1e-12

# Relative tolerance for accepting a matrix as Hermitian, see hermiticity_tolerance().
HERMITICITY_TOLERANCE = 1e-9

# Maximum number of distinct einsum subscripts numpy accepts.
MAX_SUBSCRIPTS = 52


class LegSpec:
    """A labelled Hilbert-space factor of a given dimension."""

    def __init__(self, label, dim):
        if int(dim) != dim or dim < 1:
            raise ValueError(f'Leg {label!r} must have a positive integer dimension, got {dim}')
        self.label = label
        self.dim = int(dim)

    def __eq__(self, other):
        if not isinstance(other, type(self)):
            return False
        return self.label == other.label and self.dim == other.dim

    def __hash__(self):
        return hash((self.label, self.dim))

    def __repr__(self):
        return f'LegSpec({self.label!r}, {self.dim})'

    def relabelled(self, label):
        return LegSpec(label, self.dim)


def _as_leg(leg):
    if isinstance(leg, LegSpec):
        return leg
    label, dim = leg
    return LegSpec(label, dim)


class MultiLegMatrix:
    """An immutable D×D complex matrix over an ordered list of legs, where D is the product of the leg dimensions."""

    def __init__(self, entries, legs):
        self._legs = tuple(_as_leg(leg) for leg in legs)
        labels = [leg.label for leg in self._legs]
        if len(set(labels)) != len(labels):
            raise ValueError(f'Leg labels must be unique, got {labels}')
        dim = math.prod(leg.dim for leg in self._legs)
        entries = np.array(entries, dtype=np.complex128)
        if entries.ndim == 0:
            entries = entries.reshape(1, 1)
        if entries.shape != (dim, dim):
            raise ValueError(f'Entries of shape {entries.shape} do not match legs {labels} of total dimension {dim}')
        entries.setflags(write=False)
        self._entries = entries

    def __repr__(self):
        return f'MultiLegMatrix(legs={list(self._legs)})'

    @property
    def entries(self):
        return self._entries

    @property
    def legs(self):
        return self._legs

    @property
    def labels(self):
        return tuple(leg.label for leg in self._legs)

    @property
    def dims(self):
        return tuple(leg.dim for leg in self._legs)

    @property
    def dim(self):
        return self._entries.shape[0]

    def leg(self, label):
        for leg in self._legs:
            if leg.label == label:
                return leg
        raise ValueError(f'Unknown leg {label!r}, available legs are {list(self.labels)}')

    def index(self, label):
        return self.labels.index(self.leg(label).label)

    def tensor(self):
        """Entries reshaped to a tensor with one row axis per leg followed by one column axis per leg."""
        return self._entries.reshape(self.dims + self.dims)

    @classmethod
    def from_tensor(cls, tensor, legs):
        legs = tuple(_as_leg(leg) for leg in legs)
        dim = math.prod(leg.dim for leg in legs)
        return cls(np.reshape(tensor, (dim, dim)), legs)

    def with_entries(self, entries):
        return MultiLegMatrix(entries, self._legs)

    def trace(self):
        return complex(np.trace(self._entries))

    def dagger(self):
        return self.with_entries(self._entries.conj().T)

    def conj(self):
        return self.with_entries(self._entries.conj())

    def hermitian_part(self):
        return self.with_entries((self._entries + self._entries.conj().T) / 2)

    def permute(self, labels):
        """Reorder the legs to the given label order."""
        labels = tuple(labels)
        if sorted(labels) != sorted(self.labels) or len(labels) != len(self._legs):
            raise ValueError(f'Cannot permute legs {list(self.labels)} to {list(labels)}')
        if labels == self.labels:
            return self
        order = [self.labels.index(label) for label in labels]
        k = len(order)
        tensor = np.transpose(self.tensor(), order + [k + axis for axis in order])
        return MultiLegMatrix.from_tensor(tensor, [self._legs[axis] for axis in order])

    def relabel(self, mapping):
        """Rename legs; labels missing from the mapping are kept."""
        return MultiLegMatrix(self._entries, [leg.relabelled(mapping.get(leg.label, leg.label)) for leg in self._legs])

    def merge_legs(self, labels, label):
        """Fuse the given legs into one leg of the product dimension, placed where the first of them was."""
        labels = list(labels)
        unknown = [lab for lab in labels if lab not in self.labels]
        if unknown:
            raise ValueError(f'Cannot merge unknown legs {unknown}')
        position = min(self.labels.index(lab) for lab in labels)
        rest = [lab for lab in self.labels if lab not in labels]
        order = rest[:position] + labels + rest[position:]
        permuted = self.permute(order)
        merged = LegSpec(label, math.prod(self.leg(lab).dim for lab in labels))
        legs = [self.leg(lab) for lab in rest[:position]] + [merged] + [self.leg(lab) for lab in rest[position:]]
        return MultiLegMatrix(permuted.entries, legs)

    def split_leg(self, label, legs):
        """Inverse of merge_legs: replace one leg by several whose dimensions multiply to its dimension."""
        legs = [_as_leg(leg) for leg in legs]
        if math.prod(leg.dim for leg in legs) != self.leg(label).dim:
            raise ValueError(f'Cannot split leg {label!r} of dimension {self.leg(label).dim} into {legs}')
        position = self.labels.index(label)
        return MultiLegMatrix(self._entries, list(self._legs[:position]) + legs + list(self._legs[position + 1:]))


def _check_labels(m, over):
    over = set(over)
    unknown = over - set(m.labels)
    if unknown:
        raise ValueError(f'Unknown legs {sorted(unknown)}, available legs are {list(m.labels)}')
    return over


def tensor_product(a, b):
    shared = set(a.labels) & set(b.labels)
    if shared:
        raise ValueError(f'Cannot take the tensor product of matrices sharing legs {sorted(shared)}')
    return MultiLegMatrix(np.kron(a.entries, b.entries), a.legs + b.legs)


def partial_trace(m, over):
    """Trace out the legs in `over`; the remaining legs keep their order."""
    over = _check_labels(m, over)
    if not over:
        return m
    k = len(m.legs)
    rows = list(range(k))
    cols = list(range(k, 2 * k))
    for axis, label in enumerate(m.labels):
        if label in over:
            cols[axis] = rows[axis]
    kept = [axis for axis, label in enumerate(m.labels) if label not in over]
    tensor = np.einsum(m.tensor(), rows + cols, [rows[axis] for axis in kept] + [cols[axis] for axis in kept])
    return MultiLegMatrix.from_tensor(tensor, [m.legs[axis] for axis in kept])


def keep_legs(m, labels):
    """Marginal on the given legs, in the given order."""
    labels = list(labels)
    _check_labels(m, labels)
    return partial_trace(m, set(m.labels) - set(labels)).permute(labels)


def partial_transpose(m, over):
    over = _check_labels(m, over)
    k = len(m.legs)
    axes = list(range(2 * k))
    for axis, label in enumerate(m.labels):
        if label in over:
            axes[axis], axes[k + axis] = k + axis, axis
    return MultiLegMatrix.from_tensor(np.transpose(m.tensor(), axes), m.legs)


def hermiticity_tolerance(entries):
    return HERMITICITY_TOLERANCE * max(1.0, np.linalg.norm(entries))


def herm_eig(m):
    """Eigendecomposition of a Hermitian matrix (a MultiLegMatrix or a plain array).

    :param m: matrix which must be Hermitian up to hermiticity_tolerance()
    :return: eigenvalues sorted in descending order and the matching eigenvectors as columns; degenerate eigenvalues
        keep the order returned by the solver
    """
    entries = m.entries if isinstance(m, MultiLegMatrix) else np.asarray(m, dtype=np.complex128)
    defect = np.linalg.norm(entries - entries.conj().T)
    if defect > hermiticity_tolerance(entries):
        raise ValueError(f'Matrix is not Hermitian: ‖m − m†‖_F = {defect:.3e}')
    values, vectors = scipy.linalg.eigh((entries + entries.conj().T) / 2)
    order = np.argsort(-values, kind='stable')
    return values[order], vectors[:, order]


def herm_function(m, function):
    """Apply a real function to the spectrum of a Hermitian matrix."""
    values, vectors = herm_eig(m)
    entries = (vectors * function(values)) @ vectors.conj().T
    if isinstance(m, MultiLegMatrix):
        return m.with_entries(entries)
    return entries


def herm_log2(m, cutoff=EIGENVALUE_CUTOFF):
    """Base-2 matrix logarithm with eigenvalues clipped from below at `cutoff`."""
    return herm_function(m, lambda values: np.log2(np.maximum(values, cutoff)))


def herm_log2_derivative(m, direction, cutoff=EIGENVALUE_CUTOFF):
    """Fréchet derivative of herm_log2 at m applied to `direction`, from the divided differences of log₂ over the
    clipped spectrum of m. Both arguments are plain arrays or both MultiLegMatrix on the same legs."""
    values, vectors = herm_eig(m)
    values = np.maximum(values, cutoff)
    logs = np.log2(values)
    numerator = logs[:, None] - logs[None, :]
    denominator = values[:, None] - values[None, :]
    close = np.abs(denominator) <= cutoff * np.maximum(values[:, None], values[None, :])
    ratio = np.where(close, 1 / (values[:, None] * math.log(2)), numerator / np.where(close, 1.0, denominator))
    entries = direction.entries if isinstance(direction, MultiLegMatrix) else np.asarray(direction)
    rotated = vectors.conj().T @ entries @ vectors
    result = vectors @ (ratio * rotated) @ vectors.conj().T
    if isinstance(m, MultiLegMatrix):
        return m.with_entries(result)
    return result


def max_entangled(dim, leg_a, leg_b):
    """Unit-trace projector onto (1/√dim)·Σᵢ |ii⟩ over the legs (leg_a, leg_b)."""
    vector = np.eye(dim, dtype=np.complex128).reshape(-1) / np.sqrt(dim)
    return MultiLegMatrix(np.outer(vector, vector.conj()), [(leg_a, dim), (leg_b, dim)])


def maximally_mixed(legs):
    legs = [_as_leg(leg) for leg in legs]
    dim = math.prod(leg.dim for leg in legs)
    return MultiLegMatrix(np.eye(dim) / dim, legs)


def embed(m, legs):
    """Extend m by identities on the legs it lacks and order the result as `legs`."""
    legs = [_as_leg(leg) for leg in legs]
    missing = [leg for leg in legs if leg.label not in m.labels]
    identity = MultiLegMatrix(np.eye(math.prod(leg.dim for leg in missing)), missing)
    return tensor_product(m, identity).permute([leg.label for leg in legs])


def link_product(a, b):
    """Normalized link product d·tr_S[a^{T_S} b] over the shared legs S, where d is the product of the shared leg
    dimensions. The result carries the unshared legs of a followed by the unshared legs of b; with no shared legs this
    is the tensor product."""
    shared = [label for label in a.labels if label in b.labels]
    for label in shared:
        if a.leg(label).dim != b.leg(label).dim:
            raise ValueError(f'Leg {label!r} has dimension {a.leg(label).dim} on one side and {b.leg(label).dim} '
                             f'on the other')
    a_only = [axis for axis, label in enumerate(a.labels) if label not in shared]
    b_only = [axis for axis, label in enumerate(b.labels) if label not in shared]
    if 2 * (len(a.legs) + len(b_only)) > MAX_SUBSCRIPTS:
        raise ValueError(f'Too many legs to contract: {list(a.labels)} and {list(b.labels)}')

    ka, kb = len(a.legs), len(b.legs)
    a_rows, a_cols = list(range(ka)), list(range(ka, 2 * ka))
    next_index = 2 * ka
    b_rows, b_cols = [], []
    for label in b.labels:
        if label in shared:
            b_rows.append(a_rows[a.labels.index(label)])
            b_cols.append(a_cols[a.labels.index(label)])
        else:
            b_rows.append(next_index)
            b_cols.append(next_index + 1)
            next_index += 2
    output = ([a_rows[axis] for axis in a_only] + [b_rows[axis] for axis in b_only] +
              [a_cols[axis] for axis in a_only] + [b_cols[axis] for axis in b_only])
    tensor = np.einsum(a.tensor(), a_rows + a_cols, b.tensor(), b_rows + b_cols, output, optimize=True)
    scale = math.prod(a.leg(label).dim for label in shared)
    legs = [a.legs[axis] for axis in a_only] + [b.legs[axis] for axis in b_only]
    return MultiLegMatrix.from_tensor(scale * tensor, legs)
