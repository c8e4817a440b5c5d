import unittest

import jsonschema

from comb_resources.cli.config_file import merge_config, read_config
from comb_resources.quantifiers import Objective
from tests.cli import config

NO_FLAGS = {'seed': None, 'restarts': None, 'rel_tol': None, 'max_sweeps': None, 'inner_iters': None,
            'objective': None, 'target_resolution': None, 'schedule': None, 'threads': None}


class ConfigFileTest(unittest.TestCase):

    def test_read_config(self):
        self.assertEqual(read_config(config.optimizer_config_file)['restarts'], 2)

    def test_file_overrides_defaults(self):
        cfg = merge_config(NO_FLAGS, config.optimizer_config_file)
        self.assertEqual((cfg.restarts, cfg.max_sweeps, cfg.seed), (2, 4, 11))
        self.assertEqual(cfg.objective, Objective.MARKOV_INFO)
        self.assertEqual(cfg.rel_tol, 1e-7)

    def test_flags_override_file(self):
        flags = dict(NO_FLAGS, restarts=5, objective='non_markovianity', target_resolution=[])
        cfg = merge_config(flags, config.optimizer_config_file)
        self.assertEqual(cfg.restarts, 5)
        self.assertEqual(cfg.objective, Objective.NON_MARKOVIANITY)
        self.assertEqual(cfg.inner_iters, 8)
        self.assertEqual(cfg.target_resolution, ())

    def test_defaults_without_file(self):
        cfg = merge_config(dict(NO_FLAGS, threads=1))
        self.assertEqual((cfg.restarts, cfg.max_sweeps), (16, 200))

    def test_unknown_setting_rejected(self):
        with self.assertRaises(jsonschema.exceptions.ValidationError):
            merge_config(NO_FLAGS, config.unknown_setting_config_file)
