import unittest

import numpy as np

from comb_resources import sampling
from comb_resources.comb_model.channel import PAULIS, Channel, compose_channels
from comb_resources.linalg_core import max_entangled

PLUS = np.full((2, 2), 0.5)
ZERO = np.diag([1.0, 0.0])


class ChannelTest(unittest.TestCase):

    def test_identity_choi_is_max_entangled(self):
        self.assertTrue(np.allclose(Channel.identity(3).choi.entries, max_entangled(3, 'out', 'in').entries))

    def test_pauli_flips_basis_state(self):
        self.assertTrue(np.allclose(Channel.pauli('x').apply(ZERO), np.diag([0.0, 1.0])))

    def test_unknown_pulse_rejected(self):
        with self.assertRaises(ValueError):
            Channel.pauli('H')

    def test_non_trace_preserving_choi_rejected(self):
        with self.assertRaises(ValueError):
            Channel(np.diag([1.0, 0.0, 0.0, 0.0]), in_dim=2, out_dim=2)

    def test_dephasing_destroys_coherence(self):
        self.assertTrue(np.allclose(Channel.completely_dephasing(2).apply(PLUS), np.eye(2) / 2))

    def test_embedding_is_isometric_upwards(self):
        channel = Channel.embedding(2, 3)
        self.assertEqual((channel.in_dim, channel.out_dim), (2, 3))
        embedded = channel.apply(PLUS)
        self.assertTrue(np.allclose(embedded[:2, :2], PLUS))
        self.assertAlmostEqual(embedded[2, 2].real, 0.0)

    def test_composition_order(self):
        composed = compose_channels(Channel.pauli('Z'), Channel.pauli('X'))
        self.assertTrue(composed.is_close(Channel.from_unitary(PAULIS['Z'] @ PAULIS['X'])))
        self.assertTrue(compose_channels(Channel.pauli('X'), Channel.pauli('X')).is_close(Channel.identity(2)))

    def test_composition_dimension_mismatch(self):
        with self.assertRaises(ValueError):
            compose_channels(Channel.identity(2), Channel.identity(3))

    def test_parallel_product_acts_factorwise(self):
        product = Channel.pauli('X').tensor(Channel.identity(2))
        self.assertTrue(np.allclose(product.apply(np.kron(ZERO, ZERO)), np.kron(np.diag([0.0, 1.0]), ZERO)))

    def test_random_channel_passes_checks(self):
        channel = sampling.random_channel(sampling.stream(5), 2, 3)
        self.assertLess(max(channel.defects()), 1e-9)
        self.assertAlmostEqual(np.trace(channel.apply(PLUS)).real, 1.0)
