import logging
import os
from enum import Enum

from comb_resources.quantifiers import Objective

logger = logging.getLogger(__package__)

THREADS_VARIABLE = 'COMB_RESOURCES_THREADS'


class Schedule(str, Enum):
    DIRECT = 'direct'
    STAGED = 'staged'


def default_threads():
    value = os.environ.get(THREADS_VARIABLE)
    if value is None:
        return 1
    try:
        threads = int(value)
    except ValueError:
        raise ValueError(f'{THREADS_VARIABLE} must be a positive integer, got {value!r}')
    if threads < 1:
        raise ValueError(f'{THREADS_VARIABLE} must be a positive integer, got {value!r}')
    return threads


class OptimizerConfig:
    """Settings of the see-saw search over control combs.

    target_resolution lists the intermediate times left open after optimization; every other intermediate time is
    closed by an identity link. reference_dims, when given, is the pair of input dimension at t_i and output dimension
    at t_f the combs expose instead of the process dimensions (used by divergences).
    """

    FIELDS = ('restarts', 'max_sweeps', 'inner_iters', 'rel_tol', 'seed', 'objective', 'target_resolution',
              'schedule', 'threads', 'projection_tol', 'projection_max_iter', 'reference_dims')

    def __init__(self, restarts=16, max_sweeps=200, inner_iters=50, rel_tol=1e-7, seed=0,
                 objective=Objective.TOTAL_INFO, target_resolution=(), schedule=Schedule.DIRECT, threads=None,
                 projection_tol=1e-9, projection_max_iter=2000, reference_dims=None):
        self.restarts = int(restarts)
        self.max_sweeps = int(max_sweeps)
        self.inner_iters = int(inner_iters)
        self.rel_tol = float(rel_tol)
        self.seed = int(seed)
        self.objective = Objective(objective)
        self.target_resolution = tuple(str(label) for label in target_resolution)
        self.schedule = Schedule(schedule)
        self.threads = default_threads() if threads is None else int(threads)
        self.projection_tol = float(projection_tol)
        self.projection_max_iter = int(projection_max_iter)
        self.reference_dims = None if reference_dims is None else tuple(int(d) for d in reference_dims)

        if self.restarts < 1:
            raise ValueError(f'restarts must be at least 1, got {self.restarts}')
        if self.max_sweeps < 1 or self.inner_iters < 1:
            raise ValueError('max_sweeps and inner_iters must be positive')
        if self.rel_tol <= 0:
            raise ValueError(f'rel_tol must be positive, got {self.rel_tol}')
        if not 0 <= self.seed < 2 ** 64:
            raise ValueError(f'seed must be a 64-bit unsigned integer, got {self.seed}')
        if self.threads < 1:
            raise ValueError(f'threads must be positive, got {self.threads}')
        if self.projection_tol <= 0 or self.projection_max_iter < 1:
            raise ValueError('projection_tol and projection_max_iter must be positive')
        if self.reference_dims is not None and (len(self.reference_dims) != 2 or min(self.reference_dims) < 1):
            raise ValueError(f'reference_dims must be two positive dimensions, got {self.reference_dims}')

    def __repr__(self):
        return f'OptimizerConfig({self.as_dict()})'

    def as_dict(self):
        document = {field: getattr(self, field) for field in self.FIELDS}
        document['objective'] = self.objective.value
        document['schedule'] = self.schedule.value
        document['target_resolution'] = list(self.target_resolution)
        document['reference_dims'] = None if self.reference_dims is None else list(self.reference_dims)
        return document

    def replace(self, **changes):
        document = self.as_dict()
        document.update(changes)
        return OptimizerConfig(**document)

    def target_mask(self, slots):
        """Positions of the intermediate times closed at the target resolution."""
        open_positions = slots.intermediate_positions(self.target_resolution)
        return frozenset(range(1, slots.n_slots + 1)) - open_positions
