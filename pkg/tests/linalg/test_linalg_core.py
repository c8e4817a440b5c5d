import itertools
import math
import unittest

import numpy as np
from hypothesis import given, seed, settings
from hypothesis import strategies as st

from comb_resources import oracles, sampling
from comb_resources.linalg_core import (MultiLegMatrix, embed, herm_eig, herm_log2, herm_log2_derivative, keep_legs,
                                        link_product, max_entangled, maximally_mixed, partial_trace,
                                        partial_transpose, tensor_product)

TOLERANCE = 1e-12


def random_matrix(rng, legs):
    dim = math.prod(dim for _, dim in legs)
    return MultiLegMatrix(sampling.ginibre(rng, dim), legs)


def random_density(rng, legs):
    dim = math.prod(dim for _, dim in legs)
    return MultiLegMatrix(sampling.random_state(rng, dim), legs)


class MultiLegMatrixTest(unittest.TestCase):

    def setUp(self):
        self.rng = sampling.stream(7)

    def test_duplicate_labels_rejected(self):
        with self.assertRaises(ValueError):
            MultiLegMatrix(np.eye(4), [('a', 2), ('a', 2)])

    def test_shape_mismatch_rejected(self):
        with self.assertRaises(ValueError):
            MultiLegMatrix(np.eye(5), [('a', 2), ('b', 2)])

    def test_permute_round_trip(self):
        m = random_matrix(self.rng, [('a', 2), ('b', 3), ('c', 2)])
        back = m.permute(['c', 'a', 'b']).permute(['a', 'b', 'c'])
        self.assertEqual(back.legs, m.legs)
        self.assertTrue(np.array_equal(back.entries, m.entries))

    def test_permute_matches_kronecker_order(self):
        a = random_matrix(self.rng, [('a', 2)])
        b = random_matrix(self.rng, [('b', 3)])
        swapped = tensor_product(a, b).permute(['b', 'a'])
        self.assertLess(np.max(np.abs(swapped.entries - np.kron(b.entries, a.entries))), TOLERANCE)

    def test_permute_unknown_label_rejected(self):
        m = random_matrix(self.rng, [('a', 2), ('b', 2)])
        with self.assertRaises(ValueError):
            m.permute(['a', 'c'])

    def test_merge_then_split_restores_legs(self):
        m = random_matrix(self.rng, [('a', 2), ('b', 3), ('c', 2)])
        merged = m.merge_legs(['a', 'c'], 'ac')
        self.assertEqual(merged.labels, ('ac', 'b'))
        restored = merged.split_leg('ac', [('a', 2), ('c', 2)]).permute(['a', 'b', 'c'])
        self.assertLess(np.max(np.abs(restored.entries - m.entries)), TOLERANCE)

    def test_tensor_product_rejects_shared_legs(self):
        a = random_matrix(self.rng, [('a', 2)])
        with self.assertRaises(ValueError):
            tensor_product(a, a)

    def test_link_product_rejects_dimension_mismatch(self):
        with self.assertRaises(ValueError):
            link_product(random_matrix(self.rng, [('a', 2)]), random_matrix(self.rng, [('a', 3)]))

    def test_partial_trace_rejects_unknown_leg(self):
        with self.assertRaises(ValueError):
            partial_trace(random_matrix(self.rng, [('a', 2)]), {'z'})


class OracleTest(unittest.TestCase):
    """Vectorized operations against the index-loop references."""

    @classmethod
    def setUpClass(cls):
        cls.rng = sampling.stream(11)
        cls.configurations = [
            [('a', 2)],
            [('a', 3), ('b', 2)],
            [('a', 2), ('b', 3), ('c', 2)],
            [('a', 3), ('b', 3), ('c', 3)],
            [('a', 2), ('b', 2), ('c', 2), ('d', 2)],
        ]

    def test_partial_trace(self):
        for legs in self.configurations:
            m = random_matrix(self.rng, legs)
            labels = [label for label, _ in legs]
            for size in range(1, len(labels) + 1):
                for over in itertools.combinations(labels, size):
                    error = oracles.max_abs_error(partial_trace(m, over), oracles.partial_trace_oracle(m, over))
                    self.assertLess(error, TOLERANCE, msg=f'{legs} over {over}')

    def test_partial_transpose(self):
        for legs in self.configurations:
            m = random_matrix(self.rng, legs)
            labels = [label for label, _ in legs]
            for size in range(1, len(labels) + 1):
                for over in itertools.combinations(labels, size):
                    error = oracles.max_abs_error(partial_transpose(m, over),
                                                  oracles.partial_transpose_oracle(m, over))
                    self.assertLess(error, TOLERANCE, msg=f'{legs} over {over}')

    def test_tensor_product(self):
        for first, second in [([('a', 2)], [('b', 3)]), ([('a', 3), ('b', 2)], [('c', 2), ('d', 3)]),
                              ([('a', 3), ('b', 3)], [('c', 3), ('d', 3)])]:
            a, b = random_matrix(self.rng, first), random_matrix(self.rng, second)
            self.assertLess(oracles.max_abs_error(tensor_product(a, b), oracles.tensor_product_oracle(a, b)),
                            TOLERANCE)

    def test_link_product(self):
        cases = [
            ([('x', 2), ('s', 3)], [('s', 3), ('y', 2)]),
            ([('s', 2), ('x', 3)], [('y', 2), ('s', 2)]),
            ([('x', 2), ('s', 2), ('t', 3)], [('t', 3), ('y', 3), ('s', 2)]),
            ([('s', 3)], [('s', 3)]),
            ([('s', 2), ('t', 2)], [('t', 2), ('s', 2), ('y', 2)]),
        ]
        for first, second in cases:
            a, b = random_matrix(self.rng, first), random_matrix(self.rng, second)
            self.assertLess(oracles.max_abs_error(link_product(a, b), oracles.link_product_oracle(a, b)), TOLERANCE,
                            msg=f'{first} with {second}')

    def test_link_product_without_shared_legs_is_tensor_product(self):
        a = random_matrix(self.rng, [('a', 2), ('b', 3)])
        b = random_matrix(self.rng, [('c', 2)])
        self.assertLess(oracles.max_abs_error(link_product(a, b), tensor_product(a, b)), TOLERANCE)


class SpectralTest(unittest.TestCase):

    def setUp(self):
        self.rng = sampling.stream(3)

    def test_eigenvalues_descending(self):
        values, vectors = herm_eig(random_density(self.rng, [('a', 4)]))
        self.assertTrue(np.all(np.diff(values) <= 0))
        self.assertLess(np.max(np.abs(vectors.conj().T @ vectors - np.eye(4))), 1e-10)

    def test_eigendecomposition_reconstructs_matrix(self):
        g = sampling.ginibre(self.rng, 6)
        m = (g + g.conj().T) / 2
        values, vectors = herm_eig(m)
        residual = np.linalg.norm((vectors * values) @ vectors.conj().T - m)
        self.assertLess(residual, 1e-12 * np.linalg.norm(m))

    def test_non_hermitian_rejected(self):
        with self.assertRaises(ValueError):
            herm_eig(np.array([[0, 1], [0, 0]]))

    def test_log_of_maximally_mixed(self):
        log = herm_log2(maximally_mixed([('a', 2), ('b', 2)]))
        self.assertLess(np.max(np.abs(log.entries + 2 * np.eye(4))), 1e-12)

    def test_log_derivative_matches_finite_difference(self):
        m = 0.8 * sampling.random_state(self.rng, 3) + 0.2 * np.eye(3) / 3
        g = sampling.ginibre(self.rng, 3)
        direction = (g + g.conj().T) / 2
        step = 1e-6
        numeric = (herm_log2(m + step * direction) - herm_log2(m - step * direction)) / (2 * step)
        self.assertLess(np.max(np.abs(herm_log2_derivative(m, direction) - numeric)), 1e-6)

    def test_log_derivative_along_identity_is_scaled_inverse(self):
        m = 0.5 * sampling.random_state(self.rng, 2) + 0.25 * np.eye(2)
        expected = np.linalg.inv(m) / math.log(2)
        self.assertLess(np.max(np.abs(herm_log2_derivative(m, np.eye(2)) - expected)), 1e-10)

    def test_max_entangled_is_pure_unit_trace(self):
        psi = max_entangled(3, 'a', 'b')
        self.assertAlmostEqual(psi.trace().real, 1.0, places=12)
        self.assertLess(np.max(np.abs(psi.entries @ psi.entries - psi.entries)), 1e-12)
        self.assertLess(np.max(np.abs(keep_legs(psi, ['a']).entries - np.eye(3) / 3)), 1e-12)

    def test_embed_orders_legs(self):
        m = random_matrix(self.rng, [('b', 2)])
        embedded = embed(m, [('a', 3), ('b', 2)])
        self.assertEqual(embedded.labels, ('a', 'b'))
        self.assertLess(np.max(np.abs(embedded.entries - np.kron(np.eye(3), m.entries))), 1e-12)


dims_strategy = st.lists(st.integers(min_value=1, max_value=3), min_size=1, max_size=3)


@seed(1)
@settings(deadline=None, max_examples=40)
@given(first=dims_strategy, second=dims_strategy, rng_seed=st.integers(min_value=0, max_value=2 ** 32 - 1))
def test_partial_trace_of_product_recovers_factor(first, second, rng_seed):
    rng = sampling.stream(rng_seed)
    a = random_density(rng, [(f'a{k}', dim) for k, dim in enumerate(first)])
    b = random_density(rng, [(f'b{k}', dim) for k, dim in enumerate(second)])
    reduced = partial_trace(tensor_product(a, b), set(b.labels))
    assert np.allclose(reduced.entries, a.entries, atol=1e-12)


@seed(2)
@settings(deadline=None, max_examples=40)
@given(dims=st.lists(st.integers(min_value=1, max_value=3), min_size=4, max_size=4),
       rng_seed=st.integers(min_value=0, max_value=2 ** 32 - 1))
def test_link_product_is_associative(dims, rng_seed):
    x, s, t, y = dims
    rng = sampling.stream(rng_seed)
    a = random_matrix(rng, [('x', x), ('s', s)])
    b = random_matrix(rng, [('s', s), ('t', t)])
    c = random_matrix(rng, [('t', t), ('y', y)])
    left = link_product(link_product(a, b), c)
    right = link_product(a, link_product(b, c))
    assert np.allclose(left.entries, right.permute(left.labels).entries, atol=1e-10)


@seed(3)
@settings(deadline=None, max_examples=40)
@given(dims=dims_strategy, rng_seed=st.integers(min_value=0, max_value=2 ** 32 - 1))
def test_partial_transpose_is_involution(dims, rng_seed):
    rng = sampling.stream(rng_seed)
    m = random_matrix(rng, [(f'l{k}', dim) for k, dim in enumerate(dims)])
    over = set(m.labels[::2])
    assert np.array_equal(partial_transpose(partial_transpose(m, over), over).entries, m.entries)
