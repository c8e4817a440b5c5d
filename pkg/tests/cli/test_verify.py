import unittest
from unittest import mock

from comb_resources.cli import verify
from comb_resources.optimizer.config import OptimizerConfig

QUICK = OptimizerConfig(restarts=2, max_sweeps=5, inner_iters=10, rel_tol=1e-9, threads=1)


class SampleCountTest(unittest.TestCase):

    def test_full_runs_use_full_sample_counts(self):
        with mock.patch.object(verify, 'monotone_suite', return_value=[]) as monotone_suite:
            verify.run_suite('monotone')
        monotone_suite.assert_called_once_with(20, 5, 10)
        with mock.patch.object(verify, 'composition_suite', return_value=[]) as composition_suite:
            verify.run_suite('composition')
        composition_suite.assert_called_once_with(20, 10)
        with mock.patch.object(verify, 'identity_suite', return_value=[]) as identity_suite:
            verify.run_suite('identity')
        identity_suite.assert_called_once_with(100)

    def test_quick_runs_use_small_sample_counts(self):
        with mock.patch.object(verify, 'monotone_suite', return_value=[]) as monotone_suite:
            verify.run_suite('monotone', quick=True)
        monotone_suite.assert_called_once_with(1, 1, 1)
        with mock.patch.object(verify, 'composition_suite', return_value=[]) as composition_suite:
            verify.run_suite('composition', quick=True)
        composition_suite.assert_called_once_with(5, 1)

    def test_unknown_suite_rejected(self):
        with self.assertRaises(ValueError):
            verify.run_suite('nonexistent')


class DecouplingSuiteTest(unittest.TestCase):

    @classmethod
    def setUpClass(cls):
        cls.checks = verify.dd_suite(QUICK)

    def test_every_check_passes(self):
        failed = [check.name for check in self.checks if not check.passed]
        self.assertEqual(failed, [])

    def test_gap_is_recorded_for_every_scenario(self):
        names = [check.name for check in self.checks]
        for scenario in ('dephasing, 1 pulses', 'dephasing, 2 pulses', 'counterexample, X pulse'):
            self.assertEqual(len([name for name in names if name.startswith(f'{scenario}: optimized I minus')]), 1,
                             msg=scenario)
        self.assertTrue(any(name.startswith('1 pulses: decoupling margin') for name in names))

    def test_counterexample_gap_is_two_bits(self):
        gap = next(check for check in self.checks if check.name.startswith('counterexample, X pulse'))
        self.assertGreaterEqual(gap.value, 2 - 1e-6)
        self.assertIn('gap positive: True', gap.name)
