"""See-saw estimation of the monotone quantifiers: coordinate ascent over the channels of a control comb, one channel at
a time with the others fixed, from several starting combs."""

import logging
import math
import multiprocessing

import numpy as np

from comb_resources import sampling
from comb_resources.comb_model.control import ControlComb, link
from comb_resources.optimizer.config import OptimizerConfig, Schedule
from comb_resources.optimizer.control_library import dd_cycle, dd_sequence, widen_comb
from comb_resources.optimizer.objectives import (ChannelEnvironment, gradient_direction, linear_value,
                                                 top_eigenprojector)
from comb_resources.optimizer.projection import cptp_project
from comb_resources.quantifiers import IDENTITY_TOLERANCE, Objective, objective_value, quantify

logger = logging.getLogger(__package__)

INITIAL_STEP = 0.5
MIN_STEP = 1e-10
# Eigenvector extractions per channel update for the largest-eigenvalue surrogate.
PROXY_ROUNDS = 3


class RestartSummary:

    def __init__(self, index, kind, value, sweeps, converged):
        self.index = index
        self.kind = kind
        self.value = value
        self.sweeps = sweeps
        self.converged = converged

    def as_dict(self):
        return {'index': self.index, 'kind': self.kind, 'value': self.value, 'sweeps': self.sweeps,
                'converged': self.converged}

    def __repr__(self):
        return f'RestartSummary({self.as_dict()})'


class OptimResult:
    """Best comb found over all restarts. best_value is the objective re-evaluated on the linked process (the total
    information for the largest-eigenvalue surrogate); trace holds the per-sweep surrogate values of the best restart."""

    def __init__(self, best_value, best_comb, trace, converged, restarts, max_identity_defect, objective):
        self.best_value = best_value
        self.best_comb = best_comb
        self.trace = list(trace)
        self.converged = converged
        self.restarts = list(restarts)
        self.max_identity_defect = max_identity_defect
        self.objective = Objective(objective)

    def as_dict(self):
        return {
            'objective': self.objective.value,
            'best_value': self.best_value,
            'trace': self.trace,
            'converged': self.converged,
            'max_identity_defect': self.max_identity_defect,
            'restarts': [restart.as_dict() for restart in self.restarts],
        }

    def __repr__(self):
        return (f'OptimResult(objective={self.objective.value}, best_value={self.best_value:.9f}, '
                f'converged={self.converged}, restarts={len(self.restarts)})')


def _project(entries, channel, cfg):
    return cptp_project(entries, channel.in_dim, cfg.projection_tol, cfg.projection_max_iter)


def ascend(channel, value_of, direction_of, cfg):
    """Projected gradient ascent on one channel: a step is kept only if it strictly improves the value, after which
    the step doubles; otherwise it halves. An infinite value ends the ascent."""
    value = value_of(channel)
    direction = direction_of(channel)
    step = INITIAL_STEP
    for _ in range(cfg.inner_iters):
        if direction is None or step < MIN_STEP or value == math.inf:
            break
        candidate = _project(channel.choi.entries + step * direction.entries, channel, cfg)
        candidate_value = value_of(candidate)
        if candidate_value > value:
            channel, value = candidate, candidate_value
            step *= 2
            direction = direction_of(channel)
        else:
            step /= 2
    return channel, value


def see_saw_inner(t, comb, index, cfg):
    """Improved replacement for the channel with flat index `index` of `comb`, all other channels held fixed."""
    environment = ChannelEnvironment(t, comb, index, cfg.objective)
    channel = environment.channel
    if cfg.objective != Objective.LAMBDA_MAX_PROXY:
        channel, _ = ascend(channel, environment.value, lambda c: gradient_direction(environment, c), cfg)
        return channel

    for _ in range(PROXY_ROUNDS):
        before = environment.value(channel)
        functional = top_eigenprojector(environment.linked(channel))
        direction = gradient_direction(environment, channel, functional)
        channel, _ = ascend(channel, lambda c: linear_value(environment.linked(c), functional),
                             lambda c: direction, cfg)
        if environment.value(channel) <= before:
            break
    return channel


def _identity_defect(linked):
    report = quantify(linked)
    assert report.total_info <= report.markov_info + report.non_markovianity + IDENTITY_TOLERANCE, \
        f'I = {report.total_info} exceeds M + N = {report.markov_info + report.non_markovianity}'
    return report.identity_defect


def _sweeps(t, comb, cfg):
    linked = link(t, comb)
    value = objective_value(linked.choi, linked.slots, cfg.objective)
    trace = [value]
    max_defect = _identity_defect(linked)
    converged = False
    sweeps = 0
    while sweeps < cfg.max_sweeps:
        sweeps += 1
        for index in range(comb.n_channels):
            comb = comb.replace(index, see_saw_inner(t, comb, index, cfg))
        linked = link(t, comb)
        new_value = objective_value(linked.choi, linked.slots, cfg.objective)
        max_defect = max(max_defect, _identity_defect(linked))
        trace.append(new_value)
        change = abs(new_value - value)
        value = new_value
        if change <= cfg.rel_tol * max(abs(value), 1.0):
            converged = True
            break
    return comb, trace, converged, sweeps, max_defect


def stage_masks(mask):
    """Coarse-graining stages from full resolution to `mask`, each closing half of the times still to be closed."""
    current = frozenset()
    stages = [current]
    remaining = sorted(mask)
    while remaining:
        current = current | frozenset(remaining[::2])
        stages.append(current)
        remaining = sorted(set(mask) - current)
    return stages


def run_restart(t, start, cfg, index=0, kind='seed'):
    """Coordinate ascent from one starting comb; returns (summary, comb, trace, max identity defect). Under the staged
    schedule the trace runs through every stage and the restart has converged only if every stage did."""
    mask = start.coarse_mask
    masks = stage_masks(mask) if cfg.schedule == Schedule.STAGED else [mask]
    comb = start
    trace = []
    converged = True
    total_sweeps = 0
    max_defect = 0.0
    for stage_mask in masks:
        comb, stage_trace, stage_converged, sweeps, defect = _sweeps(t, comb.with_mask(stage_mask), cfg)
        trace.extend(stage_trace)
        converged = converged and stage_converged
        total_sweeps += sweeps
        max_defect = max(max_defect, defect)
    value = quantify(link(t, comb)).value(cfg.objective)
    logger.info(f'Restart {index} ({kind}): {value:.9f} bits after {total_sweeps} sweeps, converged {converged}')
    return RestartSummary(index, kind, value, total_sweeps, converged), comb, trace, max_defect


def _run_restart_job(job):
    return run_restart(*job)


def initial_combs(t, cfg, seeds=()):
    """Starting combs in restart order: the given seeds, the trivial comb, the decoupling comb on qubit processes and
    Haar-random unitary pre-processing."""
    mask = cfg.target_mask(t.slots)
    starts = [('seed', seed.with_mask(mask)) for seed in seeds]
    generated = [('trivial', ControlComb.trivial(t.slots, mask))]
    qubit_slots = all(dim == 2 for dim in t.slots.out_dims + t.slots.in_dims)
    if t.n_slots >= 1 and qubit_slots:
        generated.append(('dd', dd_sequence(t.n_slots, dd_cycle(t.n_slots)).with_mask(mask)))
    while len(generated) < cfg.restarts:
        rng = sampling.stream(cfg.seed, len(generated))
        generated.append(('random', sampling.random_unitary_comb(rng, t.slots, mask)))
    return [(kind, widen_comb(comb, cfg.reference_dims)) for kind, comb in starts + generated[:cfg.restarts]]


def estimate_monotone(t, cfg=None, seeds=()):
    """Lower bound on the supremum of the configured objective over control combs at the target resolution.

    :param t: ProcessTensor
    :param cfg: OptimizerConfig, defaults to OptimizerConfig()
    :param seeds: ControlCombs evaluated first; their coarse-graining mask is replaced by the target one
    :return: OptimResult whose best_value is achieved by best_comb
    """
    cfg = OptimizerConfig() if cfg is None else cfg
    jobs = [(t, comb, cfg, index, kind) for index, (kind, comb) in enumerate(initial_combs(t, cfg, seeds))]
    logger.info(f'Optimizing {cfg.objective.value} over {len(jobs)} starting combs')
    if cfg.threads > 1 and len(jobs) > 1:
        with multiprocessing.Pool(processes=min(cfg.threads, len(jobs))) as pool:
            results = pool.map(_run_restart_job, jobs)
    else:
        results = [_run_restart_job(job) for job in jobs]

    summary, comb, trace, _ = max(results, key=lambda result: (result[0].value, -result[0].index))
    return OptimResult(
        best_value=summary.value,
        best_comb=comb,
        trace=trace,
        converged=summary.converged,
        restarts=[result[0] for result in results],
        max_identity_defect=max(result[3] for result in results),
        objective=cfg.objective,
    )


def trace_is_monotone(trace, atol=1e-10):
    return bool(np.all(np.diff(trace) >= -atol))
