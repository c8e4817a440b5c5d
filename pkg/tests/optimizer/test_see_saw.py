import unittest

from comb_resources.comb_model.control import link
from comb_resources.optimizer.config import OptimizerConfig, Schedule
from comb_resources.optimizer.see_saw import estimate_monotone, initial_combs, stage_masks, trace_is_monotone
from comb_resources.quantifiers import Objective, quantify, total_info
from comb_resources.scenarios import ScenarioSpec, build_counterexample, build_planted, build_random

QUICK = OptimizerConfig(restarts=2, max_sweeps=5, inner_iters=10, rel_tol=1e-9, threads=1)


class SeeSawTest(unittest.TestCase):

    @classmethod
    def setUpClass(cls):
        cls.counterexample = build_counterexample()
        cls.result = estimate_monotone(cls.counterexample, QUICK)

    def test_counterexample_reaches_two_bits(self):
        self.assertGreaterEqual(self.result.best_value, 2 - 1e-6)

    def test_best_value_is_achieved_by_witness(self):
        linked = link(self.counterexample, self.result.best_comb)
        self.assertEqual(linked.n_slots, 0)
        self.assertAlmostEqual(total_info(linked), self.result.best_value, places=9)

    def test_trace_never_decreases(self):
        self.assertTrue(trace_is_monotone(self.result.trace))
        self.assertGreaterEqual(len(self.result.trace), 2)

    def test_restart_summaries(self):
        self.assertEqual([restart.kind for restart in self.result.restarts], ['trivial', 'dd'])
        self.assertEqual(self.result.as_dict()['objective'], 'total_info')
        self.assertLess(self.result.max_identity_defect, 1e-8)

    def test_seed_is_never_beaten_by_worse_result(self):
        t, comb = build_planted(ScenarioSpec('planted_unitary', n_slots=1, seed=2))
        result = estimate_monotone(t, QUICK.replace(restarts=1), seeds=[comb])
        self.assertEqual(result.restarts[0].kind, 'seed')
        self.assertGreaterEqual(result.best_value, 2 - 1e-9)

    def test_open_resolution_keeps_times(self):
        cfg = QUICK.replace(restarts=1, max_sweeps=2, target_resolution=['1'])
        result = estimate_monotone(self.counterexample, cfg)
        self.assertEqual(result.best_comb.coarse_mask, frozenset())
        self.assertGreaterEqual(result.best_value, total_info(self.counterexample) - 1e-9)

    def test_markov_objective(self):
        t = build_random(ScenarioSpec('haar_random_env', n_slots=1, seed=3))
        cfg = QUICK.replace(objective=Objective.MARKOV_INFO, restarts=1, target_resolution=['1'])
        result = estimate_monotone(t, cfg)
        self.assertAlmostEqual(quantify(link(t, result.best_comb)).markov_info, result.best_value, places=9)
        self.assertGreaterEqual(result.best_value, quantify(t).markov_info - 1e-9)

    def test_largest_eigenvalue_surrogate_reports_total_information(self):
        cfg = QUICK.replace(objective=Objective.LAMBDA_MAX_PROXY, restarts=1)
        result = estimate_monotone(self.counterexample, cfg)
        self.assertAlmostEqual(total_info(link(self.counterexample, result.best_comb)), result.best_value, places=9)

    def test_worker_pool_matches_serial_run(self):
        cfg = QUICK.replace(restarts=3, max_sweeps=2)
        serial = estimate_monotone(self.counterexample, cfg)
        pooled = estimate_monotone(self.counterexample, cfg.replace(threads=2))
        self.assertEqual(len(pooled.restarts), 3)
        for expected, restart in zip(serial.restarts, pooled.restarts):
            self.assertAlmostEqual(restart.value, expected.value, places=9)

    def test_staged_schedule(self):
        t = build_random(ScenarioSpec('haar_random_env', n_slots=2, seed=6))
        result = estimate_monotone(t, QUICK.replace(restarts=1, max_sweeps=2, schedule=Schedule.STAGED))
        self.assertEqual(result.best_comb.coarse_mask, frozenset({1, 2}))
        self.assertEqual(link(t, result.best_comb).n_slots, 0)


class InitialCombTest(unittest.TestCase):

    def test_stage_masks(self):
        self.assertEqual(stage_masks({1, 2, 3}), [frozenset(), frozenset({1, 3}), frozenset({1, 2, 3})])
        self.assertEqual(stage_masks(set()), [frozenset()])

    def test_start_kinds_and_masks(self):
        t = build_counterexample()
        starts = initial_combs(t, QUICK.replace(restarts=4))
        self.assertEqual([kind for kind, _ in starts], ['trivial', 'dd', 'random', 'random'])
        self.assertTrue(all(comb.coarse_mask == frozenset({1}) for _, comb in starts))

    def test_random_starts_depend_on_seed(self):
        t = build_counterexample()
        first = initial_combs(t, QUICK.replace(restarts=3, seed=1))[2][1]
        again = initial_combs(t, QUICK.replace(restarts=3, seed=1))[2][1]
        other = initial_combs(t, QUICK.replace(restarts=3, seed=2))[2][1]
        self.assertTrue(first.pre[0].is_close(again.pre[0], atol=0))
        self.assertFalse(first.pre[0].is_close(other.pre[0]))

    def test_reference_dimensions_widen_combs(self):
        t = build_counterexample()
        for _, comb in initial_combs(t, QUICK.replace(reference_dims=(3, 4))):
            self.assertEqual((comb.pre[0].in_dim, comb.post[-1].out_dim), (3, 4))
