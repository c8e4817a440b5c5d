"""Objective values and their gradients with respect to a single channel of a control comb.

Holding every other channel fixed, the linked process is linear in the Choi matrix C of the free channel:
R(C) = link_product(E, C) where E is the process contracted with all remaining factors of the comb. A gradient G of
the objective with respect to R therefore pulls back to C through E.
"""

import logging
import math

import numpy as np

from comb_resources.comb_model.control import LinkPlan, outer_label
from comb_resources.linalg_core import embed, herm_eig, herm_log2, keep_legs, link_product
from comb_resources.optimizer.projection import trace_preserving_tangent
from comb_resources.quantifiers import Objective, entropy_terms, objective_value

logger = logging.getLogger(__package__)

# Gradients with a smaller Frobenius norm mark a stationary point.
STATIONARY_NORM = 1e-14


class ChannelEnvironment:
    """Everything a linked process depends on apart from the channel with flat index `index`."""

    def __init__(self, t, comb, index, objective=Objective.TOTAL_INFO):
        self.plan = LinkPlan(t.slots, comb)
        self.index = index
        self.objective = Objective(objective)
        self.legs = self.plan.channel_legs(index)
        self.matrix = self.plan.contract(t.choi, skip=index)
        self.shared_dim = math.prod(self.matrix.leg(label).dim for label in self.legs if label in self.matrix.labels)

    @property
    def channel(self):
        return self.plan.comb.channels[self.index]

    def linked(self, channel):
        """The process obtained with `channel` in place of the free channel."""
        return self.plan.finalize(link_product(self.matrix, channel.labelled(*self.legs)))

    def value(self, channel):
        t = self.linked(channel)
        return objective_value(t.choi, t.slots, self.objective)

    def pullback(self, gradient):
        """Gradient with respect to the free channel's Choi matrix of a linear functional tr[G R] of the linked
        process, with G on the legs of the linked process; the result carries the channel legs (out, in)."""
        gradient = gradient.relabel({label: outer_label(label) for label in gradient.labels})
        contracted = [label for label in self.matrix.labels if label in gradient.labels]
        contracted_dim = math.prod(self.matrix.leg(label).dim for label in contracted)
        pulled = link_product(self.matrix.conj(), gradient)
        pulled = pulled.with_entries(pulled.entries * self.shared_dim / contracted_dim)
        return pulled.permute(self.legs).hermitian_part()


def entropy_gradient(t, objective):
    """Gradient of Σ c S(marginal) with respect to the process Choi matrix, dropping the multiple of the identity that
    does not change the value along unit-trace directions."""
    m = t.choi
    gradient = np.zeros_like(m.entries)
    for coefficient, labels in entropy_terms(t.slots, objective):
        log_marginal = herm_log2(keep_legs(m, labels))
        gradient -= coefficient * embed(log_marginal, m.legs).entries
    return m.with_entries(gradient)


def top_eigenprojector(t):
    """|v⟩⟨v| for the eigenvector of the largest eigenvalue; ties go to the first vector returned."""
    _, vectors = herm_eig(t.choi)
    vector = vectors[:, 0]
    return t.choi.with_entries(np.outer(vector, vector.conj()))


def linear_value(t, functional):
    return float(np.real(np.sum(functional.permute(t.choi.labels).entries.T * t.choi.entries)))


def gradient_direction(environment, channel, functional=None):
    """Unit-norm ascent direction for the free channel, or None at a stationary point. With `functional` given, the
    direction of the linear objective tr[functional · R] instead."""
    if functional is not None:
        gradient = functional
    elif environment.objective == Objective.LAMBDA_MAX_PROXY:
        gradient = top_eigenprojector(environment.linked(channel))
    else:
        gradient = entropy_gradient(environment.linked(channel), environment.objective)
    return unit_tangent(environment.pullback(gradient))


def unit_tangent(direction):
    """Normalized trace-preserving part of a direction on channel legs (out, in), or None when it vanishes."""
    out_dim, in_dim = direction.dims
    direction = direction.with_entries(trace_preserving_tangent(direction.entries, in_dim, out_dim))
    norm = np.linalg.norm(direction.entries)
    if norm < STATIONARY_NORM:
        return None
    return direction.with_entries(direction.entries / norm)
