import unittest

import numpy as np

from comb_resources import sampling
from comb_resources.comb_model.channel import PAULIS, Channel
from comb_resources.comb_model.control import ControlComb, coarse_grain, compose_combs, link
from comb_resources.comb_model.process import ProcessTensor, is_uncorrelated
from comb_resources.comb_model.slots import SlotStructure
from comb_resources.quantifiers import total_info
from comb_resources.scenarios import ScenarioSpec, build_random


def assert_same_process(test, a, b, atol=1e-10):
    test.assertEqual(a.slots, b.slots)
    test.assertLess(np.max(np.abs(a.choi.entries - b.choi.entries)), atol)


class ControlCombTest(unittest.TestCase):

    @classmethod
    def setUpClass(cls):
        cls.t = build_random(ScenarioSpec('haar_random_env', n_slots=2, seed=9))

    def setUp(self):
        self.rng = sampling.stream(21)

    def test_unequal_channel_counts_rejected(self):
        with self.assertRaises(ValueError):
            ControlComb([Channel.identity(2)] * 2, [Channel.identity(2)])

    def test_boundary_positions_cannot_be_closed(self):
        with self.assertRaises(ValueError):
            ControlComb.trivial(SlotStructure.uniform(1, 2), {0})
        with self.assertRaises(ValueError):
            ControlComb.trivial(SlotStructure.uniform(1, 2), {2})

    def test_flat_channel_order(self):
        pre = [Channel.pauli('X'), Channel.pauli('Y')]
        post = [Channel.pauli('Z'), Channel.identity(2)]
        comb = ControlComb(pre, post)
        self.assertEqual(comb.channels, [pre[0], post[0], pre[1], post[1]])
        rebuilt = ControlComb.from_channels(comb.channels, {1})
        self.assertEqual(rebuilt.pre, comb.pre)
        self.assertEqual(rebuilt.coarse_mask, frozenset({1}))

    def test_slot_count_mismatch_rejected(self):
        with self.assertRaises(ValueError):
            link(self.t, ControlComb.trivial(SlotStructure.uniform(1, 2)))

    def test_trivial_comb_leaves_process_unchanged(self):
        assert_same_process(self, link(self.t, ControlComb.trivial(self.t.slots)), self.t)

    def test_coarse_graining_composes_channels(self):
        t = ProcessTensor.from_channels([Channel.pauli('X'), Channel.pauli('Z')])
        closed = coarse_grain(t, ['1'])
        self.assertEqual(closed.n_slots, 0)
        self.assertTrue(closed.to_channel().is_close(Channel.from_unitary(PAULIS['Z'] @ PAULIS['X'])))

    def test_coarse_graining_nothing_is_identity(self):
        self.assertIs(coarse_grain(self.t, []), self.t)

    def test_linked_process_is_valid(self):
        comb = sampling.random_comb(self.rng, self.t.slots, {2})
        linked = link(self.t, comb)
        self.assertEqual(linked.slots.labels, ('i', '1', 'f'))
        self.assertTrue(linked.validate().passed)

    def test_composed_comb_matches_successive_links(self):
        earlier = sampling.random_comb(self.rng, self.t.slots, {1})
        once = link(self.t, earlier)
        later = sampling.random_comb(self.rng, once.slots)
        assert_same_process(self, link(once, later), link(self.t, compose_combs(later, earlier)))

    def test_composed_comb_carries_both_masks(self):
        earlier = sampling.random_comb(self.rng, self.t.slots, {1})
        once = link(self.t, earlier)
        later = sampling.random_comb(self.rng, once.slots, {1})
        composed = compose_combs(later, earlier)
        self.assertEqual(composed.coarse_mask, frozenset({1, 2}))
        assert_same_process(self, link(once, later), link(self.t, composed))

    def test_comb_choi_has_unit_trace(self):
        comb = sampling.random_comb(self.rng, SlotStructure.uniform(0, 2))
        choi = comb.choi(SlotStructure.uniform(0, 2))
        self.assertEqual(len(choi.legs), 4)
        self.assertAlmostEqual(choi.trace().real, 1.0)

    def test_uncorrelated_process_stays_uncorrelated(self):
        u = build_random(ScenarioSpec('uncorrelated_random', n_slots=2, seed=7))
        for mask in ((), {1}, {1, 2}):
            linked = link(u, sampling.random_comb(self.rng, u.slots, mask))
            self.assertTrue(is_uncorrelated(linked), msg=str(mask))
            self.assertAlmostEqual(total_info(linked), 0.0, delta=1e-9)
