import unittest

import numpy as np

from comb_resources import sampling
from comb_resources.comb_model.channel import Channel
from comb_resources.comb_model.process import (ProcessTensor, build_process, full_marginal, is_uncorrelated,
                                               markov_marginal, uncorrelated_process)
from comb_resources.comb_model.slots import SlotStructure
from comb_resources.linalg_core import MultiLegMatrix, maximally_mixed
from comb_resources.scenarios import ScenarioSpec, build_random


class ProcessTensorTest(unittest.TestCase):

    @classmethod
    def setUpClass(cls):
        cls.identity = ProcessTensor.from_channels([Channel.identity(2), Channel.identity(2)])
        cls.random = build_random(ScenarioSpec('haar_random_env', n_slots=1, seed=4))

    def test_markov_process_validates(self):
        diagnostics = self.identity.validate()
        self.assertTrue(diagnostics.passed)
        self.assertEqual(len(diagnostics.causality_defects), 2)

    def test_random_process_validates(self):
        self.assertTrue(self.random.validate().passed)
        self.assertEqual(self.random.slots.leg_labels, ('in_f', 'out_1', 'in_1', 'out_i'))

    def test_non_causal_choi_rejected(self):
        choi = MultiLegMatrix(np.diag([1.0, 0.0, 0.0, 0.0]), [('in_f', 2), ('out_i', 2)])
        with self.assertRaises(ValueError):
            ProcessTensor(choi, SlotStructure.uniform(0, 2))

    def test_perturbed_diagonal_breaks_causality(self):
        entries = self.identity.choi.entries.copy()
        entries[0, 0] += 1e-3
        perturbed = ProcessTensor(self.identity.choi.with_entries(entries), self.identity.slots, check=False)
        diagnostics = perturbed.validate()
        self.assertGreater(diagnostics.causality_defect, 1e-6)
        self.assertFalse(diagnostics.passed)
        with self.assertRaises(ValueError):
            ProcessTensor(perturbed.choi, perturbed.slots)

    def test_leg_mismatch_rejected(self):
        with self.assertRaises(ValueError):
            ProcessTensor(maximally_mixed([('in_f', 2), ('out_x', 2)]), SlotStructure.uniform(0, 2))

    def test_legs_are_put_in_canonical_order(self):
        choi = maximally_mixed([('out_i', 2), ('in_f', 3)])
        t = ProcessTensor(choi, SlotStructure.from_dims([2], [3]))
        self.assertEqual(t.choi.labels, ('in_f', 'out_i'))

    def test_markov_marginal_of_markov_process(self):
        self.assertTrue(np.allclose(markov_marginal(self.identity).choi.entries, self.identity.choi.entries))

    def test_full_marginal_is_product(self):
        self.assertTrue(is_uncorrelated(full_marginal(self.random)))
        self.assertFalse(is_uncorrelated(self.random))

    def test_marginals_are_idempotent(self):
        for marginal in (markov_marginal, full_marginal):
            once = marginal(self.random)
            self.assertLess(np.max(np.abs(marginal(once).choi.entries - once.choi.entries)), 1e-12,
                            msg=marginal.__name__)

    def test_full_marginal_of_markov_marginal(self):
        expected = full_marginal(self.random).choi.entries
        self.assertLess(np.max(np.abs(full_marginal(markov_marginal(self.random)).choi.entries - expected)), 1e-12)

    def test_apply_identity_channel(self):
        rho = sampling.random_state(sampling.stream(1), 2)
        t = ProcessTensor.from_channels([Channel.identity(2)])
        self.assertTrue(np.allclose(t.apply([rho]).entries, rho))

    def test_to_channel_round_trip(self):
        channel = sampling.random_channel(sampling.stream(2), 2)
        self.assertTrue(ProcessTensor.from_channels([channel]).to_channel().is_close(channel))
        with self.assertRaises(ValueError):
            self.identity.to_channel()

    def test_uncorrelated_process_hands_back_states(self):
        rng = sampling.stream(3)
        states = [sampling.random_state(rng, 2) for _ in range(2)]
        t = uncorrelated_process(states, SlotStructure.uniform(1, 2))
        self.assertTrue(is_uncorrelated(t))
        response = t.apply([np.eye(2) / 2, np.diag([1.0, 0.0])], keep=['in_1', 'in_f'])
        self.assertTrue(np.allclose(response.entries, np.kron(states[0], states[1])))

    def test_build_process_checks_dimensions(self):
        env = maximally_mixed([('e', 2)])
        with self.assertRaises(ValueError):
            build_process(env, [Channel.identity(2)], sys_dim=2)
        with self.assertRaises(ValueError):
            build_process(env, [], sys_dim=2)
