"""Property suites run by the verify command. Each suite returns Check rows; a suite passes when every row does."""

import itertools
import logging
import math

import numpy as np
import pandas as pd

from comb_resources import oracles, sampling
from comb_resources.comb_model.composition import (absorb_uncorrelated, compose_parallel, compose_sequential,
                                                   concatenate_combs, split_concatenated)
from comb_resources.comb_model.control import ControlComb, coarse_grain, link
from comb_resources.comb_model.process import uncorrelated_process
from comb_resources.comb_model.slots import SlotStructure
from comb_resources.divergence import hierarchy_check, marginal_closeness
from comb_resources.linalg_core import (MultiLegMatrix, link_product, partial_trace, partial_transpose,
                                        tensor_product)
from comb_resources.optimizer.config import OptimizerConfig
from comb_resources.optimizer.control_library import warm_start_compose
from comb_resources.optimizer.diagnostics import GAP_TOLERANCE, dd_gap
from comb_resources.optimizer.see_saw import estimate_monotone
from comb_resources.quantifiers import non_markovianity, quantify, total_info
from comb_resources.scenarios import (ScenarioKind, ScenarioSpec, build_counterexample, build_decoupling, build_planted,
                                      build_random)

logger = logging.getLogger(__package__)

SUITES = ('identity', 'markov', 'counterexample', 'composition', 'oracles', 'monotone', 'dd')

IDENTITY_TOLERANCE = 1e-8
EXACT_TOLERANCE = 1e-8
MARKOV_TOLERANCE = 1e-9
OPTIMIZER_TOLERANCE = 1e-6
PLANTED_TOLERANCE = 1e-4
WITNESS_TOLERANCE = 1e-9
CONTRACT_TOLERANCE = 1e-9

# Optimizer settings of the runs inside the suites.
SUITE_CONFIG = OptimizerConfig(restarts=3, max_sweeps=30, inner_iters=30, rel_tol=1e-9)

# Sample counts of the full runs.
IDENTITY_PROCESSES = 100
MARKOV_PROCESSES = 50
ADDITIVITY_PAIRS = 20
OPTIMIZED_PAIRS = 10
CONSISTENCY_COMBS = 20
CONSISTENCY_PROCESSES = 5
HIERARCHY_PROCESSES = 10


class Check:

    def __init__(self, suite, name, value, threshold, passed):
        self.suite = suite
        self.name = name
        self.value = value
        self.threshold = threshold
        self.passed = bool(passed)

    def as_dict(self):
        return {'suite': self.suite, 'check': self.name, 'value': self.value, 'threshold': self.threshold,
                'passed': self.passed}


def at_most(suite, name, value, threshold):
    return Check(suite, name, value, threshold, value <= threshold)


def at_least(suite, name, value, threshold):
    return Check(suite, name, value, threshold, value >= threshold)


def witness_checks(suite, t, combs):
    """Marginal-closeness inequality S(⟦t|y⟧ ‖ ⟦t|y⟧^marg) ≤ S(⟦t|y⟧ ‖ ⟦t^marg|y⟧) on every witness y."""
    checks = []
    for k, comb in enumerate(combs):
        own, pushed = marginal_closeness(t, comb)
        checks.append(at_most(suite, f'witness {k} marginal closeness', own - pushed, WITNESS_TOLERANCE))
    return checks


def _random_env_spec(seed, n_slots=None, env_dim=None):
    return ScenarioSpec(ScenarioKind.HAAR_RANDOM_ENV, sys_dim=2, env_dim=env_dim or 2 + seed % 3,
                        n_slots=seed % 3 if n_slots is None else n_slots, seed=seed)


def identity_suite(samples=IDENTITY_PROCESSES):
    defects = []
    for seed in range(samples):
        defects.append(quantify(build_random(_random_env_spec(seed))).identity_defect)
    return [at_most('identity', f'max |I - (M + N)| over {samples} processes', max(defects), IDENTITY_TOLERANCE)]


def markov_suite(samples=MARKOV_PROCESSES):
    values = [non_markovianity(build_random(ScenarioSpec(ScenarioKind.MARKOV_RANDOM, n_slots=seed % 3, seed=seed)))
              for seed in range(samples)]
    return [
        at_most('markov', f'max |N| over {samples} Markov processes', max(abs(value) for value in values),
                MARKOV_TOLERANCE),
        at_least('markov', 'N of the counterexample', non_markovianity(build_counterexample()), 1e-3),
    ]


def tomography_states():
    """Eigenstates of X, Y and Z."""
    kets = [np.array([1, 0]), np.array([0, 1]), np.array([1, 1]) / math.sqrt(2), np.array([1, -1]) / math.sqrt(2),
            np.array([1, 1j]) / math.sqrt(2), np.array([1, -1j]) / math.sqrt(2)]
    return [np.outer(ket, ket.conj()).astype(np.complex128) for ket in kets]


def counterexample_contract_defect(t):
    """Largest deviation from: output at t_1 is |0⟩⟨0|; output at t_f is p·ρ₁ + (1 − p)·I/2 with p = ⟨0|ρ₂|0⟩."""
    ground = np.diag([1, 0]).astype(np.complex128)
    deviation = 0.0
    for first, second in itertools.product(tomography_states(), repeat=2):
        middle = t.apply([first, second], keep=['in_1']).entries
        final = t.apply([first, second]).entries
        p = float(np.real(second[0, 0]))
        expected = p * first + (1 - p) * np.eye(2) / 2
        deviation = max(deviation, np.max(np.abs(middle - ground)), np.max(np.abs(final - expected)))
    return float(deviation)


def counterexample_suite():
    t = build_counterexample()
    return [
        at_most('counterexample', 'I - 1', abs(total_info(t) - 1), EXACT_TOLERANCE),
        at_most('counterexample', 'I(coarse-grained) - 2',
                abs(total_info(coarse_grain(t, t.slots.intermediate_labels)) - 2), EXACT_TOLERANCE),
        at_most('counterexample', 'behavioral contract on tomography inputs', counterexample_contract_defect(t),
                CONTRACT_TOLERANCE),
    ]


def _pair(seed):
    first = build_random(_random_env_spec(2 * seed, n_slots=seed % 2, env_dim=2))
    second = build_random(_random_env_spec(2 * seed + 1, n_slots=(seed + 1) % 2, env_dim=2))
    return first, second


def composition_suite(samples=ADDITIVITY_PAIRS, optimized=OPTIMIZED_PAIRS, cfg=SUITE_CONFIG):
    checks = []
    defects = []
    for seed in range(samples):
        t, s = _pair(seed)
        defects.append(abs(total_info(compose_sequential(t, s)) - total_info(t) - total_info(s)))
    checks.append(at_most('composition', f'sequential I additivity over {samples} pairs', max(defects),
                          EXACT_TOLERANCE))

    for seed in range(optimized):
        t, s = _pair(2 * seed)
        partner = build_random(_random_env_spec(1000 + seed, n_slots=t.n_slots, env_dim=2))
        checks.extend(sequential_optimizer_checks(t, s, cfg))
        checks.extend(parallel_optimizer_checks(t, partner, cfg))
        checks.extend(padding_checks(t, seed, cfg))
    return checks


def sequential_optimizer_checks(t, s, cfg):
    """Ī of the sequential composition with the joint time open against the sum of the individual Ī, warm starts
    passed both ways."""
    joint_process = compose_sequential(t, s)
    joint_label = joint_process.slots.labels[t.n_slots + 1]
    first = estimate_monotone(t, cfg)
    second = estimate_monotone(s, cfg)
    joint_cfg = cfg.replace(target_resolution=[joint_label])
    joint = estimate_monotone(joint_process, joint_cfg,
                              seeds=[concatenate_combs(first.best_comb, second.best_comb)])
    seed_t, seed_s = split_concatenated(joint.best_comb, t.slots)
    first = estimate_monotone(t, cfg, seeds=[first.best_comb, seed_t])
    second = estimate_monotone(s, cfg, seeds=[second.best_comb, seed_s])
    concatenated = concatenate_combs(first.best_comb, second.best_comb).with_mask(joint.best_comb.coarse_mask)
    joint_value = max(joint.best_value, total_info(link(joint_process, concatenated)))
    gap = abs(joint_value - first.best_value - second.best_value)
    checks = [at_most('composition', 'sequential optimizer additivity', gap, OPTIMIZER_TOLERANCE)]
    checks.extend(witness_checks('composition', joint_process, [joint.best_comb]))
    return checks


def parallel_optimizer_checks(t, s, cfg):
    first = estimate_monotone(t, cfg)
    second = estimate_monotone(s, cfg)
    joint_process = compose_parallel(t, s)
    joint = estimate_monotone(joint_process, cfg, seeds=[first.best_comb.tensor(second.best_comb)])
    checks = [at_least('composition', 'parallel superadditivity', joint.best_value,
                       first.best_value + second.best_value - EXACT_TOLERANCE)]
    checks.extend(witness_checks('composition', joint_process, [joint.best_comb]))
    return checks


def padding_checks(t, seed, cfg):
    """Ī of t against Ī of t next to an uncorrelated process, warm starts shared both ways."""
    rng = sampling.stream(seed, 1)
    u = uncorrelated_process([sampling.random_state(rng, 2) for _ in range(t.n_slots + 1)],
                             SlotStructure.uniform(t.n_slots, 2))
    padded = compose_parallel(t, u)
    mask = cfg.target_mask(t.slots)
    alone = estimate_monotone(t, cfg)
    joint = estimate_monotone(padded, cfg, seeds=[alone.best_comb.tensor(ControlComb.trivial(u.slots, mask))])
    alone = estimate_monotone(t, cfg, seeds=[alone.best_comb, absorb_uncorrelated(joint.best_comb, u)])
    padded_comb = alone.best_comb.tensor(ControlComb.trivial(u.slots, alone.best_comb.coarse_mask))
    joint_value = max(joint.best_value, total_info(link(padded, padded_comb)))
    return [at_most('composition', 'uncorrelated padding invariance', abs(joint_value - alone.best_value),
                    OPTIMIZER_TOLERANCE)]


def _random_matrix(rng, legs):
    dim = math.prod(dim for _, dim in legs)
    return MultiLegMatrix(sampling.ginibre(rng, dim), legs)


def leg_configurations(max_legs=4):
    """Leg lists of qubit and qutrit legs with total dimension at most the oracle limit."""
    for count in range(1, max_legs + 1):
        for dims in itertools.product((2, 3), repeat=count):
            if math.prod(dims) <= oracles.ORACLE_MAX_DIM:
                yield [(f'l{k}', dim) for k, dim in enumerate(dims)]


def _subsets(labels):
    for size in range(1, len(labels) + 1):
        yield from itertools.combinations(labels, size)


def link_configurations():
    for free_a, shared, free_b in itertools.product([(), (2,), (3,)], [(2,), (3,), (2, 3)], [(), (2,), (3,)]):
        a = [(f'x{k}', dim) for k, dim in enumerate(free_a)] + [(f's{k}', dim) for k, dim in enumerate(shared)]
        b = [(f's{k}', dim) for k, dim in enumerate(shared)] + [(f'y{k}', dim) for k, dim in enumerate(free_b)]
        yield a, b
        yield a, list(reversed(b))


def oracle_suite(max_legs=4, seed=0):
    rng = sampling.stream(seed)
    errors = {'tensor product': 0.0, 'partial trace': 0.0, 'partial transpose': 0.0, 'link product': 0.0}
    for legs in leg_configurations(max_legs):
        m = _random_matrix(rng, legs)
        labels = [label for label, _ in legs]
        for over in _subsets(labels):
            errors['partial trace'] = max(errors['partial trace'], oracles.max_abs_error(
                partial_trace(m, over), oracles.partial_trace_oracle(m, over)))
            errors['partial transpose'] = max(errors['partial transpose'], oracles.max_abs_error(
                partial_transpose(m, over), oracles.partial_transpose_oracle(m, over)))
    for first, second in itertools.product(leg_configurations(2), repeat=2):
        a = _random_matrix(rng, first)
        b = _random_matrix(rng, [(f'm{label}', dim) for label, dim in second])
        if a.dim * b.dim <= oracles.ORACLE_MAX_DIM:
            errors['tensor product'] = max(errors['tensor product'], oracles.max_abs_error(
                tensor_product(a, b), oracles.tensor_product_oracle(a, b)))
    for first, second in link_configurations():
        a, b = _random_matrix(rng, first), _random_matrix(rng, second)
        errors['link product'] = max(errors['link product'], oracles.max_abs_error(
            link_product(a, b), oracles.link_product_oracle(a, b)))
    return [at_most('oracles', f'{name} against index loops', error, oracles.ORACLE_TOLERANCE)
            for name, error in errors.items()]


def monotone_consistency_checks(t, name, samples, cfg):
    """For random combs z, the optimizer on t warm-started with the composition of z and the witness found on
    ⟦t|z⟧ reaches at least the value found on ⟦t|z⟧."""
    checks = []
    for k in range(samples):
        z = sampling.random_comb(sampling.stream(cfg.seed, 100 + k), t.slots)
        transformed = estimate_monotone(link(t, z), cfg)
        original = estimate_monotone(t, cfg, seeds=[warm_start_compose(z, transformed.best_comb)])
        checks.append(at_least('monotone', f'{name}: comb {k} monotone under control', original.best_value,
                               transformed.best_value - OPTIMIZER_TOLERANCE))
        checks.extend(witness_checks('monotone', t, [original.best_comb]))
    return checks


def monotone_suite(samples=CONSISTENCY_COMBS, processes=CONSISTENCY_PROCESSES, hierarchy_samples=HIERARCHY_PROCESSES,
                   cfg=SUITE_CONFIG):
    checks = []
    t = build_counterexample()
    ceiling = estimate_monotone(t, cfg)
    checks.append(at_least('monotone', 'counterexample ceiling', ceiling.best_value, 2 - OPTIMIZER_TOLERANCE))
    checks.extend(witness_checks('monotone', t, [ceiling.best_comb]))

    planted, comb = build_planted(ScenarioSpec(ScenarioKind.PLANTED_UNITARY, sys_dim=2, env_dim=2, n_slots=1))
    found = estimate_monotone(planted, cfg, seeds=[comb])
    checks.append(at_least('monotone', 'planted unitary ceiling', found.best_value, 2 - PLANTED_TOLERANCE))

    checks.extend(monotone_consistency_checks(t, 'counterexample', samples, cfg))
    for seed in range(processes):
        checks.extend(monotone_consistency_checks(build_random(_random_env_spec(seed, n_slots=1)),
                                                  f'random process {seed}', samples, cfg))
    for seed in range(hierarchy_samples):
        report = hierarchy_check(build_random(_random_env_spec(seed, n_slots=1)), cfg)
        checks.append(at_most('monotone', f'random process {seed}: |I - M| with every time closed',
                              report.coincidence_gap, OPTIMIZER_TOLERANCE))
        checks.append(at_least('monotone', f'random process {seed}: marginal closeness slack',
                               report.witness_slack, -WITNESS_TOLERANCE))
    return checks


def dd_suite(cfg=SUITE_CONFIG):
    """Decoupling against no control and against optimized control. Optimized control must beat the pulse sequence
    on at least one scenario; the gap of every scenario is reported."""
    checks = []
    gaps = {}
    for n_slots in (1, 2):
        scenario = build_decoupling(ScenarioSpec(ScenarioKind.DEPHASING_STATIC_ENV, n_slots=n_slots, seed=n_slots))
        report = dd_gap(scenario.process, cfg)
        checks.append(at_least('dd', f'{n_slots} pulses: decoupling margin measured at build time', scenario.margin,
                               GAP_TOLERANCE))
        checks.append(at_most('dd', f'{n_slots} pulses: build-time margin against I with pulses - I without control',
                              abs(report.decoupled - report.uncontrolled - scenario.margin), EXACT_TOLERANCE))
        checks.extend(witness_checks('dd', scenario.process, [report.optimized.best_comb]))
        gaps[f'dephasing, {n_slots} pulses'] = report
    gaps['counterexample, X pulse'] = dd_gap(build_counterexample(), cfg, pattern='X')
    for name, report in gaps.items():
        logger.info(f'{name}: optimized control gains {report.improvement:.6f} bits over the pulses, '
                    f'gap positive {report.gap_positive}')
        checks.append(at_least('dd', f'{name}: optimized I minus I with pulses (gap positive: {report.gap_positive})',
                               report.improvement, -WITNESS_TOLERANCE))
    best = max(gaps, key=lambda name: gaps[name].improvement)
    checks.append(Check('dd', f'optimized control beats the pulses on at least one scenario (best: {best})',
                        gaps[best].improvement, GAP_TOLERANCE, any(report.gap_positive for report in gaps.values())))
    return checks


def run_suite(name, quick=False):
    """Checks of one suite; quick runs use small sample counts."""
    suites = {
        'identity': lambda: identity_suite(10 if quick else IDENTITY_PROCESSES),
        'markov': lambda: markov_suite(10 if quick else MARKOV_PROCESSES),
        'counterexample': counterexample_suite,
        'composition': lambda: (composition_suite(5, 1) if quick else
                                composition_suite(ADDITIVITY_PAIRS, OPTIMIZED_PAIRS)),
        'oracles': lambda: oracle_suite(3 if quick else 4),
        'monotone': lambda: (monotone_suite(1, 1, 1) if quick else
                             monotone_suite(CONSISTENCY_COMBS, CONSISTENCY_PROCESSES, HIERARCHY_PROCESSES)),
        'dd': dd_suite,
    }
    if name not in suites:
        raise ValueError(f'Unknown suite {name!r}, expected one of {list(SUITES)} or all')
    logger.info(f'Running the {name} suite')
    return suites[name]()


def run_suites(names, quick=False):
    """Table with one row per check of the named suites; 'all' expands to every suite."""
    if 'all' in names:
        names = SUITES
    checks = [check for name in names for check in run_suite(name, quick)]
    return pd.DataFrame([check.as_dict() for check in checks], columns=['suite', 'check', 'value', 'threshold',
                                                                        'passed'])
