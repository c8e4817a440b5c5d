"""Von Neumann entropy, quantum relative entropy and the correlation quantifiers of process tensors, in bits."""

import logging
import math
from enum import Enum

import numpy as np
from scipy.special import xlogy

from comb_resources.comb_model.process import full_marginal, markov_marginal
from comb_resources.linalg_core import EIGENVALUE_CUTOFF, MultiLegMatrix, herm_eig, keep_legs

logger = logging.getLogger(__package__)

# Most negative eigenvalue tolerated in a state before it is rejected.
PSD_TOLERANCE = 1e-9
TRACE_TOLERANCE = 1e-8
# Weight of x outside the support of y above which S(x‖y) is infinite.
SUPPORT_TOLERANCE = 1e-10
# Largest tolerated |I − (M + N)|.
IDENTITY_TOLERANCE = 1e-8


class Objective(str, Enum):
    TOTAL_INFO = 'total_info'
    MARKOV_INFO = 'markov_info'
    NON_MARKOVIANITY = 'non_markovianity'
    LAMBDA_MAX_PROXY = 'lambda_max_proxy'


def _state_spectrum(m):
    values, vectors = herm_eig(m)
    if values[-1] < -PSD_TOLERANCE:
        raise ValueError(f'Not a positive matrix: smallest eigenvalue {values[-1]:.3e}')
    trace = float(np.sum(values))
    if abs(trace - 1) > TRACE_TOLERANCE:
        raise ValueError(f'Not a unit-trace matrix: trace {trace:.12f}')
    return values, vectors


def _entropy_of_spectrum(values):
    values = np.where(values > EIGENVALUE_CUTOFF, values, 0.0)
    return float(-np.sum(xlogy(values, values)) / math.log(2))


def vn_entropy(m):
    values, _ = _state_spectrum(m)
    return _entropy_of_spectrum(values)


def rel_entropy(x, y):
    """S(x‖y) = tr[x log₂ x] − tr[x log₂ y], or math.inf when the support of x is not inside the support of y.

    Legs of y may be listed in a different order from those of x; they are aligned before the comparison.
    """
    if isinstance(x, MultiLegMatrix) and isinstance(y, MultiLegMatrix):
        if x.labels != y.labels:
            if sorted(x.labels) != sorted(y.labels):
                raise ValueError(f'Cannot compare matrices on legs {list(x.labels)} and {list(y.labels)}')
            y = y.permute(x.labels)
        if x.legs != y.legs:
            raise ValueError(f'Leg dimensions differ: {list(x.legs)} and {list(y.legs)}')
    x_values, x_vectors = _state_spectrum(x)
    y_values, y_vectors = _state_spectrum(y)
    x_values = np.where(x_values > EIGENVALUE_CUTOFF, x_values, 0.0)
    overlaps = np.abs(x_vectors.conj().T @ y_vectors) ** 2

    support = y_values > EIGENVALUE_CUTOFF
    leak = float(x_values @ overlaps[:, ~support].sum(axis=1))
    if leak > SUPPORT_TOLERANCE:
        logger.debug(f'Support violation in relative entropy: weight {leak:.3e} outside the support')
        return math.inf
    log_y = np.where(support, np.log2(np.where(support, y_values, 1.0)), 0.0)
    cross = float(x_values @ (overlaps @ log_y))
    return -_entropy_of_spectrum(x_values) - cross


def total_info(t):
    return rel_entropy(t.choi, full_marginal(t).choi)


def markov_info(t):
    return rel_entropy(markov_marginal(t).choi, full_marginal(t).choi)


def non_markovianity(t):
    return rel_entropy(t.choi, markov_marginal(t).choi)


def lambda_max(t):
    values, _ = herm_eig(t.choi)
    return float(values[0])


class QuantifierReport:

    def __init__(self, total_info, markov_info, non_markovianity):
        self.total_info = total_info
        self.markov_info = markov_info
        self.non_markovianity = non_markovianity

    @property
    def identity_defect(self):
        return abs(self.total_info - (self.markov_info + self.non_markovianity))

    def value(self, objective):
        return {
            Objective.TOTAL_INFO: self.total_info,
            Objective.MARKOV_INFO: self.markov_info,
            Objective.NON_MARKOVIANITY: self.non_markovianity,
            Objective.LAMBDA_MAX_PROXY: self.total_info,
        }[Objective(objective)]

    def as_dict(self):
        return {
            'I_bits': self.total_info,
            'M_bits': self.markov_info,
            'N_bits': self.non_markovianity,
            'identity_defect': self.identity_defect,
        }

    def __repr__(self):
        return (f'QuantifierReport(I={self.total_info:.9f}, M={self.markov_info:.9f}, '
                f'N={self.non_markovianity:.9f})')


def quantify(t):
    report = QuantifierReport(total_info(t), markov_info(t), non_markovianity(t))
    if report.identity_defect > IDENTITY_TOLERANCE:
        logger.warning(f'I − (M + N) = {report.identity_defect:.3e} exceeds {IDENTITY_TOLERANCE}')
    return report


def _negated(terms):
    return [(-c, labels) for c, labels in terms]


def entropy_terms(slots, objective):
    """The objective as a signed sum of marginal entropies.

    :return: list of (coefficient, leg labels) such that the objective of a process on `slots` equals
        Σ coefficient · S(marginal on leg labels)
    """
    objective = Objective(objective)
    if objective == Objective.LAMBDA_MAX_PROXY:
        raise ValueError('The largest-eigenvalue surrogate is not an entropy objective')
    singles = [(1, (label,)) for label in slots.leg_labels]
    pairs = [(1, tuple(pair)) for pair in slots.markov_pairs]
    whole = [(1, tuple(slots.leg_labels))]
    if objective == Objective.TOTAL_INFO:
        return singles + _negated(whole)
    if objective == Objective.MARKOV_INFO:
        return singles + _negated(pairs)
    return pairs + _negated(whole)


def objective_value(m, slots, objective):
    """Evaluate an entropy objective on a process Choi matrix through its marginal entropies."""
    if Objective(objective) == Objective.LAMBDA_MAX_PROXY:
        values, _ = herm_eig(m)
        return float(values[0])
    return sum(c * vn_entropy(keep_legs(m, labels)) for c, labels in entropy_terms(slots, objective))
