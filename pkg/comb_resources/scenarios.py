"""Reference processes: the coarse-graining counterexample, random families and models with a known optimal control."""

import logging
from enum import Enum

import numpy as np
import scipy.linalg

from comb_resources import sampling
from comb_resources.comb_model.channel import PAULIS, Channel
from comb_resources.comb_model.control import ControlComb, coarse_grain, link
from comb_resources.comb_model.process import ProcessTensor, build_process, uncorrelated_process
from comb_resources.comb_model.slots import SlotStructure
from comb_resources.linalg_core import MultiLegMatrix
from comb_resources.optimizer.control_library import dd_cycle, dd_sequence
from comb_resources.quantifiers import total_info

logger = logging.getLogger(__package__)


class ScenarioKind(str, Enum):
    COUNTEREXAMPLE = 'counterexample'
    MARKOV_RANDOM = 'markov_random'
    UNCORRELATED_RANDOM = 'uncorrelated_random'
    HAAR_RANDOM_ENV = 'haar_random_env'
    PLANTED_UNITARY = 'planted_unitary'
    DEPHASING_STATIC_ENV = 'dephasing_static_env'


PLANTED_KINDS = (ScenarioKind.PLANTED_UNITARY, ScenarioKind.DEPHASING_STATIC_ENV)


class ScenarioSpec:

    def __init__(self, kind, sys_dim=2, env_dim=2, n_slots=1, seed=0, params=()):
        self.kind = ScenarioKind(kind)
        self.sys_dim = int(sys_dim)
        self.env_dim = int(env_dim)
        self.n_slots = int(n_slots)
        self.seed = int(seed)
        self.params = [float(p) for p in params]
        if self.sys_dim < 2:
            raise ValueError(f'System dimension must be at least 2, got {self.sys_dim}')
        if self.env_dim < 1:
            raise ValueError(f'Environment dimension must be positive, got {self.env_dim}')
        if self.n_slots < 0:
            raise ValueError(f'Number of slots must be nonnegative, got {self.n_slots}')
        if self.kind in PLANTED_KINDS and self.n_slots < 1:
            raise ValueError(f'Scenario {self.kind.value} needs at least one slot')
        if self.kind == ScenarioKind.DEPHASING_STATIC_ENV and self.sys_dim != 2:
            raise ValueError('The dephasing scenario is defined for a qubit system')

    @classmethod
    def from_dict(cls, document):
        return cls(document['kind'], document.get('sys_dim', 2), document.get('env_dim', 2),
                   document.get('n_slots', 1), document.get('seed', 0), document.get('params', ()))

    def as_dict(self):
        return {'kind': self.kind.value, 'sys_dim': self.sys_dim, 'env_dim': self.env_dim, 'n_slots': self.n_slots,
                'seed': self.seed, 'params': self.params}

    def __repr__(self):
        return f'ScenarioSpec({self.as_dict()})'


def _basis_permutation(dims, mapping):
    """Unitary sending the basis state with digits `index` (row-major over dims) to mapping(index)."""
    total = int(np.prod(dims))
    unitary = np.zeros((total, total))
    for source in range(total):
        digits = np.unravel_index(source, dims)
        unitary[np.ravel_multi_index(mapping(*digits), dims), source] = 1
    return unitary


def _ket_bra(dim, k):
    projector = np.zeros((dim, dim))
    projector[k, k] = 1
    return projector


def build_counterexample():
    """One-slot qubit process whose output at t_1 is |0⟩ whatever it is fed, and whose final output is
    p·ρ₁ + (1 − p)·I/2 for input ρ₁ at t_i and ρ₂ at t_1, with p = ⟨0|ρ₂|0⟩.

    The environment is two qubits e1, e2 prepared in |0⟩⟨0| ⊗ I/2. The first interval swaps s and e1. The second
    dephases s, swaps e1 with e2 controlled on s and finally swaps s and e1.
    """
    dims = (2, 2, 2)
    swap_s_e1 = _basis_permutation(dims, lambda s, e1, e2: (e1, s, e2))
    controlled_swap = _basis_permutation(dims, lambda s, e1, e2: (s, e2, e1) if s else (s, e1, e2))
    dephasing = [np.kron(_ket_bra(2, b), np.eye(4)) for b in range(2)]
    second = [swap_s_e1 @ controlled_swap @ projector for projector in dephasing]
    env_state = MultiLegMatrix(np.kron(_ket_bra(2, 0), np.eye(2) / 2), [('e1', 2), ('e2', 2)])
    return build_process(env_state, [Channel.from_unitary(swap_s_e1), Channel.from_kraus(second)], sys_dim=2)


def _env_ground_state(env_dim):
    return MultiLegMatrix(_ket_bra(env_dim, 0), [('env', env_dim)])


def build_random(spec):
    """Process of one of the random families; deterministic given spec.seed."""
    rng = sampling.stream(spec.seed)
    n, d = spec.n_slots, spec.sys_dim
    if spec.kind == ScenarioKind.COUNTEREXAMPLE:
        return build_counterexample()
    if spec.kind == ScenarioKind.MARKOV_RANDOM:
        return ProcessTensor.from_channels([sampling.random_channel(rng, d) for _ in range(n + 1)])
    if spec.kind == ScenarioKind.UNCORRELATED_RANDOM:
        return uncorrelated_process([sampling.random_state(rng, d) for _ in range(n + 1)],
                                    SlotStructure.uniform(n, d))
    if spec.kind == ScenarioKind.HAAR_RANDOM_ENV:
        dynamics = [Channel.from_unitary(sampling.haar_unitary(rng, d * spec.env_dim)) for _ in range(n + 1)]
        return build_process(_env_ground_state(spec.env_dim), dynamics, d)
    process, _ = build_planted(spec)
    return process


def _controlled_sum(sys_dim, env_dim):
    return _basis_permutation((sys_dim, env_dim), lambda s, e: (s, (e + s) % env_dim))


def _planted_unitary(spec):
    rng = sampling.stream(spec.seed)
    d, env_dim, n = spec.sys_dim, spec.env_dim, spec.n_slots
    rotations = [sampling.haar_unitary(rng, d) for _ in range(n)]
    csum = _controlled_sum(d, env_dim)
    env_identity = np.eye(env_dim)
    unitaries = [np.kron(rotations[0], env_identity) @ csum]
    unitaries += [np.kron(rotation, env_identity) for rotation in rotations[1:]]
    unitaries.append(csum.conj().T)
    process = build_process(_env_ground_state(env_dim), [Channel.from_unitary(u) for u in unitaries], d)
    pre = [Channel.identity(d)] + [Channel.from_unitary(rotation.conj().T) for rotation in rotations]
    post = [Channel.identity(d) for _ in range(n + 1)]
    return process, ControlComb(pre, post, range(1, n + 1))


def dephasing_angles(spec):
    if spec.params:
        if len(spec.params) != spec.n_slots + 1:
            raise ValueError(f'Expected {spec.n_slots + 1} coupling angles, got {len(spec.params)}')
        return list(spec.params)
    rng = sampling.stream(spec.seed)
    base = np.pi / (4 * (spec.n_slots + 1))
    return list(base * (1 + 0.2 * rng.uniform(-1, 1, spec.n_slots + 1)))


class DecouplingScenario:
    """Dephasing process with its X, Z, X, Z, … pulse comb and the decoupling margin measured when it was built."""

    def __init__(self, process, comb, margin):
        self.process = process
        self.comb = comb
        self.margin = margin

    def __repr__(self):
        return f'DecouplingScenario(n_slots={self.process.n_slots}, margin={self.margin:.9f})'


def build_decoupling(spec):
    """Qubit dephased by a static ZZ coupling to a maximally mixed environment qubit, with the pulse comb that echoes
    it. Coupling angles for which the pulses do not increase the total information are rejected."""
    if spec.kind != ScenarioKind.DEPHASING_STATIC_ENV:
        raise ValueError(f'Scenario {spec.kind.value} is not a dephasing scenario')
    zz = np.kron(PAULIS['Z'], PAULIS['Z'])
    dynamics = [Channel.from_unitary(scipy.linalg.expm(-1j * theta * zz)) for theta in dephasing_angles(spec)]
    env_state = MultiLegMatrix(np.eye(2) / 2, [('env', 2)])
    process = build_process(env_state, dynamics, 2)
    comb = dd_sequence(spec.n_slots, dd_cycle(spec.n_slots))
    margin = dd_margin(process, comb)
    if margin <= 0:
        raise ValueError(f'Decoupling pulses change the total information by {margin:.3e} bits for coupling angles '
                         f'{dephasing_angles(spec)}; expected an improvement')
    logger.info(f'Dephasing scenario: decoupling improves the total information by {margin:.6f} bits')
    return DecouplingScenario(process, comb, margin)


def dd_margin(t, comb):
    """I of t under `comb` minus I of t coarse-grained without control."""
    uncontrolled = coarse_grain(t, t.slots.intermediate_labels)
    return total_info(link(t, comb)) - total_info(uncontrolled)


def build_planted(spec):
    """A process together with a control comb known to perform well on it."""
    if spec.kind == ScenarioKind.PLANTED_UNITARY:
        return _planted_unitary(spec)
    if spec.kind == ScenarioKind.DEPHASING_STATIC_ENV:
        scenario = build_decoupling(spec)
        return scenario.process, scenario.comb
    raise ValueError(f'Scenario {spec.kind.value} has no planted control')
