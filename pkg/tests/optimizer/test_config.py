import os
import unittest
from unittest import mock

from comb_resources.comb_model.slots import SlotStructure
from comb_resources.optimizer.config import THREADS_VARIABLE, OptimizerConfig, Schedule, default_threads
from comb_resources.quantifiers import Objective


class OptimizerConfigTest(unittest.TestCase):

    def test_defaults(self):
        cfg = OptimizerConfig(threads=1)
        self.assertEqual((cfg.restarts, cfg.max_sweeps, cfg.inner_iters), (16, 200, 50))
        self.assertEqual(cfg.objective, Objective.TOTAL_INFO)
        self.assertEqual(cfg.schedule, Schedule.DIRECT)
        self.assertEqual(cfg.target_resolution, ())

    def test_invalid_values_rejected(self):
        for kwargs in ({'restarts': 0}, {'max_sweeps': 0}, {'rel_tol': 0}, {'seed': -1}, {'seed': 2 ** 64},
                       {'threads': 0}, {'objective': 'entropy'}, {'schedule': 'random'},
                       {'reference_dims': (2,)}):
            with self.assertRaises(ValueError, msg=str(kwargs)):
                OptimizerConfig(**kwargs)

    def test_replace_keeps_other_fields(self):
        cfg = OptimizerConfig(restarts=3, seed=7, threads=1).replace(objective='markov_info')
        self.assertEqual((cfg.restarts, cfg.seed), (3, 7))
        self.assertEqual(cfg.objective, Objective.MARKOV_INFO)

    def test_dict_round_trip(self):
        cfg = OptimizerConfig(target_resolution=['2'], reference_dims=(2, 3), threads=1)
        again = OptimizerConfig(**cfg.as_dict())
        self.assertEqual(again.as_dict(), cfg.as_dict())

    def test_target_mask(self):
        slots = SlotStructure.uniform(3, 2)
        self.assertEqual(OptimizerConfig(threads=1).target_mask(slots), frozenset({1, 2, 3}))
        self.assertEqual(OptimizerConfig(target_resolution=['2'], threads=1).target_mask(slots), frozenset({1, 3}))
        with self.assertRaises(ValueError):
            OptimizerConfig(target_resolution=['f'], threads=1).target_mask(slots)

    def test_threads_from_environment(self):
        with mock.patch.dict(os.environ, {THREADS_VARIABLE: '3'}):
            self.assertEqual(default_threads(), 3)
            self.assertEqual(OptimizerConfig().threads, 3)
        for value in ('many', '0'):
            with mock.patch.dict(os.environ, {THREADS_VARIABLE: value}):
                with self.assertRaises(ValueError):
                    default_threads()
        with mock.patch.dict(os.environ, clear=True):
            self.assertEqual(default_threads(), 1)
