"""Reachable comb divergences: the largest relative entropy between two processes seen through the same control comb,
taken over independent-quantum-instrument combs followed by coarse-graining to the target resolution. Every value
computed here is a lower bound on that supremum found by search."""

import logging
import math
import multiprocessing

from comb_resources.comb_model.control import link
from comb_resources.comb_model.process import full_marginal, markov_marginal
from comb_resources.linalg_core import herm_log2, herm_log2_derivative
from comb_resources.optimizer.config import OptimizerConfig, Schedule
from comb_resources.optimizer.diagnostics import estimate_all
from comb_resources.optimizer.objectives import ChannelEnvironment, unit_tangent
from comb_resources.optimizer.see_saw import ascend, estimate_monotone, initial_combs, stage_masks
from comb_resources.quantifiers import Objective, markov_info, rel_entropy, total_info

logger = logging.getLogger(__package__)

WITNESS_TOLERANCE = 1e-9
# Largest tolerated difference between the found Ī and M̄ once every time is closed.
COINCIDENCE_TOLERANCE = 1e-6


class DivergenceResult:

    def __init__(self, value_bits, witness_comb, samples_evaluated, trace=(), restarts=()):
        self.value_bits = value_bits
        self.witness_comb = witness_comb
        self.samples_evaluated = samples_evaluated
        self.trace = list(trace)
        self.restarts = list(restarts)

    @property
    def infinite(self):
        return self.value_bits == math.inf

    def as_dict(self):
        return {
            'value_bits': 'inf' if self.infinite else self.value_bits,
            'infinite': self.infinite,
            'samples_evaluated': self.samples_evaluated,
            'trace': ['inf' if value == math.inf else value for value in self.trace],
            'restarts': [{'index': index, 'kind': kind, 'value': 'inf' if value == math.inf else value}
                         for index, kind, value in self.restarts],
        }

    def __repr__(self):
        return f'DivergenceResult(value_bits={self.value_bits}, samples_evaluated={self.samples_evaluated})'


def comb_divergence(t, r, comb):
    """S(⟦t|comb⟧ ‖ ⟦r|comb⟧) in bits."""
    return rel_entropy(link(t, comb).choi, link(r, comb).choi)


class DivergenceEnvironment:
    """The pair of linked processes as functions of one free channel of a comb shared by both processes."""

    def __init__(self, t, r, comb, index):
        self.first = ChannelEnvironment(t, comb, index)
        self.second = ChannelEnvironment(r, comb, index)
        self.evaluations = 0

    @property
    def channel(self):
        return self.first.channel

    def value(self, channel):
        self.evaluations += 1
        return rel_entropy(self.first.linked(channel).choi, self.second.linked(channel).choi)

    def direction(self, channel):
        """Ascent direction of S(x‖y): log₂x − log₂y pulled back through the first process and −Dlog₂(y)[x] through
        the second."""
        x = self.first.linked(channel).choi
        y = self.second.linked(channel).choi.permute(x.labels)
        gradient_x = x.with_entries(herm_log2(x).entries - herm_log2(y).entries)
        derivative = herm_log2_derivative(y, x)
        gradient_y = y.with_entries(-derivative.entries)
        pulled_x = self.first.pullback(gradient_x)
        pulled_y = self.second.pullback(gradient_y)
        return unit_tangent(pulled_x.with_entries(pulled_x.entries + pulled_y.entries))


def _divergence_sweeps(t, r, comb, cfg):
    value = comb_divergence(t, r, comb)
    trace = [value]
    evaluations = 1
    converged = value == math.inf
    sweeps = 0
    while not converged and sweeps < cfg.max_sweeps:
        sweeps += 1
        for index in range(comb.n_channels):
            environment = DivergenceEnvironment(t, r, comb, index)
            channel, _ = ascend(environment.channel, environment.value, environment.direction, cfg)
            evaluations += environment.evaluations
            comb = comb.replace(index, channel)
        new_value = comb_divergence(t, r, comb)
        evaluations += 1
        trace.append(new_value)
        if new_value == math.inf:
            value = new_value
            break
        converged = abs(new_value - value) <= cfg.rel_tol * max(abs(new_value), 1.0)
        value = new_value
    return comb, trace, evaluations


def run_divergence_restart(t, r, start, cfg, index=0, kind='seed'):
    """Coordinate ascent of the divergence from one starting comb; returns (value, comb, trace, evaluations). The trace
    runs through every stage of the staged schedule."""
    masks = stage_masks(start.coarse_mask) if cfg.schedule == Schedule.STAGED else [start.coarse_mask]
    comb = start
    trace = []
    evaluations = 0
    for mask in masks:
        comb, stage_trace, stage_evaluations = _divergence_sweeps(t, r, comb.with_mask(mask), cfg)
        trace.extend(stage_trace)
        evaluations += stage_evaluations
        if stage_trace[-1] == math.inf:
            break
    value = comb_divergence(t, r, comb)
    logger.info(f'Divergence restart {index} ({kind}): {value:.9f} bits after {evaluations} evaluations')
    return value, comb, trace, evaluations


def _run_divergence_job(job):
    return run_divergence_restart(*job)


def reachable_divergence(t, r, cfg=None, seeds=()):
    """Lower bound on the reachable divergence of t from r at the configured target resolution.

    :param t: ProcessTensor
    :param r: ProcessTensor on the same slot structure as t
    :param cfg: OptimizerConfig; its objective is ignored
    :param seeds: ControlCombs evaluated first, e.g. monotone witnesses or composed witnesses of transformed processes
    :return: DivergenceResult whose value is re-evaluated on its witness comb
    """
    if t.slots != r.slots:
        raise ValueError(f'Processes on different slot structures: {t.slots} and {r.slots}')
    cfg = OptimizerConfig() if cfg is None else cfg
    starts = initial_combs(t, cfg, seeds)
    jobs = [(t, r, comb, cfg, index, kind) for index, (kind, comb) in enumerate(starts)]
    logger.info(f'Estimating the reachable divergence over {len(jobs)} starting combs')
    if cfg.threads > 1 and len(jobs) > 1:
        with multiprocessing.Pool(processes=min(cfg.threads, len(jobs))) as pool:
            results = pool.map(_run_divergence_job, jobs)
    else:
        results = [_run_divergence_job(job) for job in jobs]

    best = max(range(len(results)), key=lambda index: (results[index][0], -index))
    value, comb, trace, _ = results[best]
    if value == math.inf:
        logger.warning(f'Restart {best} left the support of the reference process: the divergence is infinite')
    return DivergenceResult(
        value_bits=value,
        witness_comb=comb,
        samples_evaluated=sum(result[3] for result in results),
        trace=trace,
        restarts=[(index, kind, result[0]) for (index, (kind, _)), result in zip(enumerate(starts), results)],
    )


def marginal_closeness(t, comb):
    """The two sides of S(⟦t|y⟧ ‖ ⟦t|y⟧^marg) ≤ S(⟦t|y⟧ ‖ ⟦t^marg|y⟧) for the comb y."""
    linked = link(t, comb)
    own = rel_entropy(linked.choi, full_marginal(linked).choi)
    pushed = rel_entropy(linked.choi, link(full_marginal(t), comb).choi)
    return own, pushed


class HierarchyReport:

    def __init__(self, total, markov, divergence, witness_sides):
        self.total = total
        self.markov = markov
        self.divergence = divergence
        # (own marginal, pushed marginal) divergence per witness comb
        self.witness_sides = list(witness_sides)

    @property
    def coincidence_gap(self):
        return abs(self.total - self.markov)

    @property
    def witness_slack(self):
        """Smallest margin by which the pushed marginal is further away than the process's own marginal."""
        return min(pushed - own for own, pushed in self.witness_sides)

    def as_dict(self):
        return {
            'I_bar_found': self.total,
            'M_bar_found': self.markov,
            'D_reach_found': 'inf' if self.divergence.infinite else self.divergence.value_bits,
            'D_reach_infinite': self.divergence.infinite,
            'I_M_gap': self.coincidence_gap,
            'D_minus_I': 'inf' if self.divergence.infinite else self.divergence.value_bits - self.total,
            'witness_slack': 'inf' if self.witness_slack == math.inf else self.witness_slack,
            'samples_evaluated': self.divergence.samples_evaluated,
        }


def hierarchy_check(t, cfg=None):
    """Found values of Ī and M̄ with every time closed and of the reachable divergence from the full marginal, with the
    equality of the first two and the marginal-closeness inequality on every witness asserted. The gaps between the
    found values are lower-bound diagnostics; no equality or separation of the underlying suprema is implied."""
    cfg = (OptimizerConfig() if cfg is None else cfg).replace(target_resolution=())
    total = estimate_monotone(t, cfg.replace(objective=Objective.TOTAL_INFO))
    markov = estimate_monotone(t, cfg.replace(objective=Objective.MARKOV_INFO), seeds=[total.best_comb])
    total_bar = max(total.best_value, total_info(link(t, markov.best_comb)))
    markov_bar = max(markov.best_value, markov_info(link(t, total.best_comb)))
    divergence = reachable_divergence(t, full_marginal(t), cfg, seeds=[total.best_comb, markov.best_comb])

    witnesses = [total.best_comb, markov.best_comb, divergence.witness_comb]
    witness_sides = [marginal_closeness(t, comb) for comb in witnesses]
    report = HierarchyReport(total_bar, markov_bar, divergence, witness_sides)
    assert report.coincidence_gap <= COINCIDENCE_TOLERANCE, \
        f'Found Ī = {total_bar} and M̄ = {markov_bar} differ with every time closed'
    for own, pushed in witness_sides:
        assert own <= pushed + WITNESS_TOLERANCE, \
            f'Witness is closer to the pushed marginal ({pushed}) than to its own ({own})'
    logger.info(f'Ī found {total_bar:.6f}, M̄ found {markov_bar:.6f}, reachable divergence found '
                f'{divergence.value_bits:.6f} bits')
    return report


class BoundsReport:
    """Found monotones next to the reachable divergences that bound them from above."""

    def __init__(self, monotones, total, markov, non_markov):
        self.monotones = monotones
        self.total = total
        self.markov = markov
        self.non_markov = non_markov

    @property
    def pairs(self):
        return [(self.monotones.total, self.total), (self.monotones.markov, self.markov),
                (self.monotones.non_markov, self.non_markov)]

    @property
    def dominates(self):
        """Whether every found divergence is at least its found monotone."""
        return all(divergence.value_bits >= monotone.best_value - WITNESS_TOLERANCE
                   for monotone, divergence in self.pairs)

    def as_dict(self):
        document = self.monotones.as_dict()
        for key, result in (('D_total', self.total), ('D_markov', self.markov), ('D_non_markov', self.non_markov)):
            document[key] = 'inf' if result.infinite else result.value_bits
        document['dominates'] = self.dominates
        return document


def monotone_bounds(t, cfg=None):
    """Ī ≤ D(T‖T^marg), M̄ ≤ D(T^Mkv‖T^marg) and N̄ ≤ D(T‖T^Mkv) at the configured resolution, each divergence seeded
    with the matching monotone witness."""
    cfg = OptimizerConfig() if cfg is None else cfg
    monotones = estimate_all(t, cfg)
    marginal, markov = full_marginal(t), markov_marginal(t)
    report = BoundsReport(
        monotones,
        reachable_divergence(t, marginal, cfg, seeds=[monotones.total.best_comb]),
        reachable_divergence(markov, marginal, cfg, seeds=[monotones.markov.best_comb]),
        reachable_divergence(t, markov, cfg, seeds=[monotones.non_markov.best_comb]),
    )
    if not report.dominates:
        logger.warning('A found divergence lies below its found monotone: the divergence search fell short')
    return report
