"""Seeded random draws: Haar unitaries, random states, random channels and random control combs.

Every draw takes a numpy Generator; `stream(seed, index)` derives independent counter-based streams from one 64-bit seed.
"""

import numpy as np
import scipy.linalg

from comb_resources.comb_model.channel import Channel
from comb_resources.comb_model.control import ControlComb


def stream(seed, index=0):
    """Independent generator number `index` of the stream family rooted at `seed`."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed, spawn_key=(index,))))


def ginibre(rng, rows, cols=None):
    cols = rows if cols is None else cols
    return (rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))) / np.sqrt(2)


def haar_isometry(rng, rows, cols):
    """Isometry (rows ≥ cols) with Haar-distributed columns, from the QR decomposition of a Ginibre matrix with the
    phases of R moved into Q."""
    q, r = scipy.linalg.qr(ginibre(rng, rows, cols), mode='economic')
    phases = np.diag(r) / np.abs(np.diag(r))
    return q * phases


def haar_unitary(rng, dim):
    return haar_isometry(rng, dim, dim)


def random_state(rng, dim, rank=None):
    """Density matrix G G† / tr(G G†) for a dim × rank Ginibre matrix G."""
    g = ginibre(rng, dim, dim if rank is None else rank)
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def random_channel(rng, in_dim, out_dim=None, ancilla_dim=None):
    """Generic channel from a Haar isometry dilation; the ancilla defaults to dimension in_dim²."""
    out_dim = in_dim if out_dim is None else out_dim
    ancilla_dim = in_dim * in_dim if ancilla_dim is None else ancilla_dim
    isometry = haar_isometry(rng, out_dim * ancilla_dim, in_dim).reshape(out_dim, ancilla_dim, in_dim)
    return Channel.from_kraus([isometry[:, a, :] for a in range(ancilla_dim)])


def random_unitary_comb(rng, slots, coarse_mask=()):
    """Haar-random unitary pre channels with identity post channels."""
    pre = [Channel.from_unitary(haar_unitary(rng, dim)) for dim in slots.out_dims]
    post = [Channel.identity(dim) for dim in slots.in_dims]
    return ControlComb(pre, post, coarse_mask)


def random_comb(rng, slots, coarse_mask=()):
    """Generic random channels at every pre and post position."""
    pre = [random_channel(rng, dim) for dim in slots.out_dims]
    post = [random_channel(rng, dim) for dim in slots.in_dims]
    return ControlComb(pre, post, coarse_mask)
