import logging

import numpy as np

from comb_resources.comb_model.channel import IN, OUT, Channel
from comb_resources.comb_model.slots import SlotStructure, in_label, out_label
from comb_resources.linalg_core import (MultiLegMatrix, herm_eig, keep_legs, link_product, max_entangled,
                                        maximally_mixed, partial_trace, tensor_product)

logger = logging.getLogger(__package__)

# Absolute tolerance of every process invariant check, in max-abs norm for causality.
PROCESS_TOLERANCE = 1e-9

ENV = 'env'


class Diagnostics:
    """Outcome of validating a process Choi matrix."""

    def __init__(self, psd_defect, trace_defect, causality_defects, tolerance=PROCESS_TOLERANCE):
        self.psd_defect = psd_defect
        self.trace_defect = trace_defect
        # One entry per level, latest time first.
        self.causality_defects = list(causality_defects)
        self.tolerance = tolerance

    @property
    def causality_defect(self):
        return max(self.causality_defects, default=0.0)

    @property
    def passed(self):
        return max(self.psd_defect, self.trace_defect, self.causality_defect) <= self.tolerance

    def as_dict(self):
        return {
            'psd_defect': self.psd_defect,
            'trace_defect': self.trace_defect,
            'causality_defects': self.causality_defects,
            'passed': self.passed,
        }

    def __repr__(self):
        return (f'Diagnostics(psd_defect={self.psd_defect:.2e}, trace_defect={self.trace_defect:.2e}, '
                f'causality_defect={self.causality_defect:.2e}, passed={self.passed})')


def causality_defects(choi, slots):
    """Max-abs defects of tr_{in_f} T = I/d ⊗ tr_{in_f, out_n} T, applied recursively down to t_i."""
    defects = []
    m = choi
    for position in range(len(slots.times) - 1, 0, -1):
        in_leg = slots.times[position].in_leg
        out_leg = slots.times[position - 1].out_leg
        reduced = partial_trace(m, {in_leg.label})
        lower = partial_trace(reduced, {out_leg.label})
        expected = tensor_product(MultiLegMatrix(np.eye(out_leg.dim) / out_leg.dim, [out_leg]), lower)
        defects.append(float(np.max(np.abs(reduced.entries - expected.permute(reduced.labels).entries))))
        m = lower
    return defects


def validate(t):
    values, _ = herm_eig(t.choi)
    psd_defect = max(0.0, -float(values[-1]))
    trace_defect = abs(t.choi.trace() - 1)
    return Diagnostics(psd_defect, trace_defect, causality_defects(t.choi, t.slots))


class ProcessTensor:
    """Choi state of a multi-time quantum process over a slot structure, with legs in canonical order."""

    def __init__(self, choi, slots, check=True):
        if sorted(choi.labels) != sorted(slots.leg_labels):
            raise ValueError(f'Choi legs {list(choi.labels)} do not match the slot legs {list(slots.leg_labels)}')
        choi = choi.permute(slots.leg_labels)
        if choi.legs != slots.legs:
            raise ValueError(f'Choi leg dimensions {list(choi.legs)} do not match the slot legs {list(slots.legs)}')
        self.choi = choi
        self.slots = slots
        if check:
            diagnostics = validate(self)
            if not diagnostics.passed:
                raise ValueError(f'Not a valid process tensor: {diagnostics}')

    def __repr__(self):
        return f'ProcessTensor(times={list(self.slots.labels)}, dims={list(self.choi.dims)})'

    @property
    def n_slots(self):
        return self.slots.n_slots

    @classmethod
    def from_channels(cls, channels, labels=None):
        """Markov process in which channel k maps the out leg at time k to the in leg at time k+1."""
        slots = SlotStructure.from_dims([channel.in_dim for channel in channels],
                                        [channel.out_dim for channel in channels], labels)
        choi = MultiLegMatrix(1, [])
        for (later, earlier), channel in zip(slots.markov_pairs, reversed(channels)):
            choi = tensor_product(choi, channel.labelled(later, earlier))
        return cls(choi, slots)

    def validate(self):
        return validate(self)

    def to_channel(self):
        """The channel t_i → t_f of a process without intermediate times."""
        if self.n_slots:
            raise ValueError(f'Only a process without intermediate times is a channel, this one has {self.n_slots}')
        final, initial = self.slots.leg_labels
        return Channel.from_matrix(self.choi.relabel({final: OUT, initial: IN}))

    def marginal(self, labels):
        return keep_legs(self.choi, labels)

    def apply(self, inputs, keep=None):
        """Response of the process when the state inputs[k] is fed at the k-th out leg and every in leg not in `keep`
        is discarded; `keep` defaults to the final in leg."""
        out_legs = [time.out_leg for time in self.slots.times[:-1]]
        if len(inputs) != len(out_legs):
            raise ValueError(f'Expected {len(out_legs)} input states, got {len(inputs)}')
        if keep is None:
            keep = [self.slots.times[-1].in_leg.label]
        m = self.choi
        for leg, rho in zip(out_legs, inputs):
            m = link_product(m, MultiLegMatrix(rho, [leg]))
        return keep_legs(m, keep)


def markov_marginal(t):
    m = MultiLegMatrix(1, [])
    for pair in t.slots.markov_pairs:
        m = tensor_product(m, keep_legs(t.choi, pair))
    return ProcessTensor(m, t.slots, check=False)


def full_marginal(t):
    m = MultiLegMatrix(1, [])
    for label in t.slots.leg_labels:
        m = tensor_product(m, keep_legs(t.choi, [label]))
    return ProcessTensor(m, t.slots, check=False)


def is_uncorrelated(t, atol=PROCESS_TOLERANCE):
    """True when t is a product of single-leg states with maximally mixed out legs."""
    if np.max(np.abs(t.choi.entries - full_marginal(t).choi.entries)) > atol:
        return False
    for time in t.slots.times[:-1]:
        leg = time.out_leg
        marginal = keep_legs(t.choi, [leg.label]).entries
        if np.max(np.abs(marginal - np.eye(leg.dim) / leg.dim)) > atol:
            return False
    return True


def build_process(env_state, dynamics, sys_dim):
    """Choi state of the process in which half of a maximally entangled pair is fed to the system at every time,
    system and environment evolve under dynamics[k] between consecutive times, and the environment is discarded at the
    end.

    :param env_state: initial environment state, any leg structure
    :param dynamics: Channels on system ⊗ environment (system most significant), one per interval
    :param sys_dim: system dimension
    :return: ProcessTensor with len(dynamics) - 1 intermediate times labelled '1', '2', ...
    """
    if not dynamics:
        raise ValueError('At least one dynamics map is needed')
    env_dim = env_state.dim
    values, _ = herm_eig(env_state)
    if values[-1] < -PROCESS_TOLERANCE or abs(env_state.trace() - 1) > PROCESS_TOLERANCE:
        raise ValueError('The environment state must be a unit-trace positive matrix')
    for k, channel in enumerate(dynamics):
        if channel.in_dim != sys_dim * env_dim or channel.out_dim != sys_dim * env_dim:
            raise ValueError(f'Dynamics map {k} acts on dimension {channel.in_dim} → {channel.out_dim}, expected '
                             f'{sys_dim} × {env_dim} = {sys_dim * env_dim}')

    n_slots = len(dynamics) - 1
    slots = SlotStructure.uniform(n_slots, sys_dim)
    times = slots.labels
    state = env_state.merge_legs(env_state.labels, ENV) if env_state.legs else MultiLegMatrix(env_state.entries,
                                                                                             [(ENV, 1)])
    for k, channel in enumerate(dynamics):
        state = tensor_product(state, max_entangled(sys_dim, 'sys', out_label(times[k])))
        choi = channel.choi.split_leg(OUT, [('sys#', sys_dim), ('env#', env_dim)])
        choi = choi.split_leg(IN, [('sys', sys_dim), (ENV, env_dim)])
        state = link_product(state, choi).relabel({'sys#': in_label(times[k + 1]), 'env#': ENV})
        logger.debug(f'Propagated interval {k} of {n_slots + 1}')
    choi = partial_trace(state, {ENV}).permute(slots.leg_labels)
    return ProcessTensor(choi, slots)


def uncorrelated_process(states, slots):
    """Process which hands back states[k] at the k-th in leg whatever it is fed."""
    states = list(states)
    if len(states) != slots.n_slots + 1:
        raise ValueError(f'Expected {slots.n_slots + 1} states, got {len(states)}')
    m = MultiLegMatrix(1, [])
    for time in reversed(slots.times):
        if time.out_leg is not None:
            m = tensor_product(m, maximally_mixed([time.out_leg]))
        if time.in_leg is not None:
            m = tensor_product(m, MultiLegMatrix(states[slots.position(time.label) - 1], [time.in_leg]))
    return ProcessTensor(m, slots)
