import logging

from comb_resources.comb_model.control import coarse_grain, link
from comb_resources.optimizer.control_library import dd_cycle, dd_sequence
from comb_resources.optimizer.see_saw import estimate_monotone
from comb_resources.quantifiers import Objective, total_info

logger = logging.getLogger(__package__)

# Positive Ī − (M̄ + N̄) above this is reported as an optimizer shortfall on M̄ or N̄.
SUBADDITIVITY_FLAG = 1e-6
GAP_TOLERANCE = 1e-9


class MonotoneReport:

    def __init__(self, total, markov, non_markov):
        self.total = total
        self.markov = markov
        self.non_markov = non_markov

    @property
    def results(self):
        return [self.total, self.markov, self.non_markov]

    @property
    def subadditivity_gap(self):
        return self.total.best_value - (self.markov.best_value + self.non_markov.best_value)

    @property
    def shortfall(self):
        return self.subadditivity_gap > SUBADDITIVITY_FLAG

    @property
    def max_identity_defect(self):
        return max(result.max_identity_defect for result in self.results)

    def as_dict(self):
        return {
            'I_bar_found': self.total.best_value,
            'M_bar_found': self.markov.best_value,
            'N_bar_found': self.non_markov.best_value,
            'subadditivity_gap': self.subadditivity_gap,
            'shortfall': self.shortfall,
            'max_identity_defect': self.max_identity_defect,
        }


def estimate_all(t, cfg):
    """Ī, M̄ and N̄ at the configured resolution, each later search seeded with the witnesses of the earlier ones."""
    total = estimate_monotone(t, cfg.replace(objective=Objective.TOTAL_INFO))
    markov = estimate_monotone(t, cfg.replace(objective=Objective.MARKOV_INFO), seeds=[total.best_comb])
    non_markov = estimate_monotone(t, cfg.replace(objective=Objective.NON_MARKOVIANITY),
                                   seeds=[total.best_comb, markov.best_comb])
    report = MonotoneReport(total, markov, non_markov)
    if report.shortfall:
        logger.warning(f'Found Ī exceeds M̄ + N̄ by {report.subadditivity_gap:.3e}: the M̄ or N̄ search fell short')
    return report


class DDGapReport:

    def __init__(self, pattern, uncontrolled, decoupled, optimized):
        self.pattern = pattern
        self.uncontrolled = uncontrolled
        self.decoupled = decoupled
        self.optimized = optimized

    @property
    def improvement(self):
        """Lower bound on what optimized control gains over the decoupling sequence."""
        return self.optimized.best_value - self.decoupled

    @property
    def dd_improves(self):
        return self.decoupled > self.uncontrolled

    @property
    def gap_positive(self):
        return self.improvement > GAP_TOLERANCE

    def as_dict(self):
        return {
            'pattern': self.pattern,
            'I_uncontrolled': self.uncontrolled,
            'I_dd': self.decoupled,
            'I_bar_found': self.optimized.best_value,
            'improvement': self.improvement,
            'dd_improves': self.dd_improves,
            'gap_positive': self.gap_positive,
        }


def dd_gap(t, cfg, pattern=None):
    """Compare no control, a decoupling pulse sequence and optimized control on the fully coarse-grained process."""
    pattern = dd_cycle(t.n_slots) if pattern is None else ''.join(pattern)
    comb = dd_sequence(t.n_slots, pattern)
    uncontrolled = total_info(coarse_grain(t, t.slots.intermediate_labels))
    decoupled = total_info(link(t, comb))
    optimized = estimate_monotone(t, cfg.replace(objective=Objective.TOTAL_INFO, target_resolution=()), seeds=[comb])
    report = DDGapReport(pattern, uncontrolled, decoupled, optimized)
    logger.info(f'Pulses {pattern}: I without control {uncontrolled:.6f}, with pulses {decoupled:.6f}, optimized '
                f'{optimized.best_value:.6f} bits')
    return report
