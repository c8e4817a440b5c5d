import json
import os
import shutil
import tempfile
import unittest

import jsonschema
import numpy as np

from comb_resources import sampling
from comb_resources.cli import matrix_file
from comb_resources.comb_model.slots import SlotStructure
from comb_resources.scenarios import ScenarioKind, build_counterexample
from tests.cli import config


class MatrixFileTest(unittest.TestCase):

    @classmethod
    def setUpClass(cls):
        cls.t = build_counterexample()

    def setUp(self):
        self.dir_out = tempfile.mkdtemp()

    def tearDown(self):
        shutil.rmtree(self.dir_out)

    def test_process_round_trip(self):
        path = os.path.join(self.dir_out, 'process.json')
        matrix_file.write_process(path, self.t, metadata={'scenario': 'counterexample'})
        self.assertTrue(os.path.exists(os.path.join(self.dir_out, 'process.slots.json')))
        again = matrix_file.read_process(path)
        self.assertEqual(again.slots, self.t.slots)
        self.assertTrue(np.array_equal(again.choi.entries, self.t.choi.entries))

    def test_comb_round_trip(self):
        comb = sampling.random_comb(sampling.stream(2), self.t.slots, {1})
        path = os.path.join(self.dir_out, 'comb.json')
        matrix_file.write_comb(path, comb)
        again = matrix_file.read_comb(path)
        self.assertEqual(again.coarse_mask, comb.coarse_mask)
        for expected, channel in zip(comb.channels, again.channels):
            self.assertTrue(channel.is_close(expected, atol=0))

    def test_entry_count_mismatch(self):
        document = matrix_file.matrix_to_dict(self.t.choi)
        document['entries'] = document['entries'][:-1]
        with self.assertRaises(ValueError):
            matrix_file.matrix_from_dict(document)

    def test_missing_legs_fail_schema(self):
        path = os.path.join(self.dir_out, 'matrix.json')
        document = matrix_file.matrix_to_dict(self.t.choi)
        del document['legs']
        with open(path, 'w') as matrix_json:
            json.dump(document, matrix_json)
        with self.assertRaises(jsonschema.exceptions.ValidationError):
            matrix_file.read_matrix(path)

    def test_leg_labels_follow_time_labels(self):
        document = matrix_file.slots_to_dict(SlotStructure.uniform(1, 2))
        self.assertEqual(matrix_file.slots_from_dict(document), SlotStructure.uniform(1, 2))
        document['times'][1]['in'][0] = 'in_7'
        with self.assertRaises(ValueError):
            matrix_file.slots_from_dict(document)

    def test_non_channel_in_comb_rejected(self):
        comb = sampling.random_comb(sampling.stream(3), self.t.slots)
        document = matrix_file.comb_to_dict(comb)
        document['pre'][0]['entries'] = [[0.0, 0.0]] * len(document['pre'][0]['entries'])
        with self.assertRaises(ValueError):
            matrix_file.comb_from_dict(document)

    def test_sidecar_path(self):
        self.assertEqual(matrix_file.slots_path('out/process.json'), 'out/process.slots.json')
        self.assertEqual(matrix_file.slots_path('out/process'), 'out/process.slots.json')

    def test_scenario_files(self):
        self.assertEqual(matrix_file.read_scenario(config.counterexample_spec_file).kind,
                         ScenarioKind.COUNTEREXAMPLE)
        self.assertEqual(matrix_file.read_scenario(config.planted_spec_file).seed, 3)
        with self.assertRaises(jsonschema.exceptions.ValidationError):
            matrix_file.read_scenario(config.unknown_kind_spec_file)
