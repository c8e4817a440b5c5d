import logging

from comb_resources.comb_model.channel import PAULIS, Channel, compose_channels
from comb_resources.comb_model.control import ControlComb, compose_combs

logger = logging.getLogger(__package__)

DD_CYCLE = 'XZ'


def dd_cycle(n_slots):
    """The X, Z, X, Z, … decoupling pattern for n_slots pulses."""
    return (DD_CYCLE * n_slots)[:n_slots]


def dd_sequence(n_slots, pattern):
    """Open-loop pulse comb on a qubit process: pulse pattern[k - 1] right after time k, no other action, and every
    intermediate time closed."""
    pattern = [pulse.upper() for pulse in pattern]
    if len(pattern) != n_slots:
        raise ValueError(f'A pattern of {len(pattern)} pulses does not fit {n_slots} slots')
    unknown = sorted(set(pattern) - set(PAULIS))
    if unknown:
        raise ValueError(f'Unknown pulses {unknown}, expected letters from {sorted(PAULIS)}')
    pre = [Channel.identity(2)] + [Channel.pauli(pulse) for pulse in pattern]
    post = [Channel.identity(2) for _ in range(n_slots + 1)]
    return ControlComb(pre, post, range(1, n_slots + 1))


def warm_start_compose(z_outer, z_inner):
    """Comb equivalent to linking z_outer to a process and then z_inner to the result, so that a comb found for
    ⟦t|z_outer⟧ transfers to t."""
    return compose_combs(z_inner, z_outer)


def widen_comb(comb, reference_dims):
    """Comb whose t_i input and t_f output have the given reference dimensions, by basis embeddings in front of the
    first pre channel and behind the last post channel."""
    if reference_dims is None:
        return comb
    initial_dim, final_dim = reference_dims
    pre, post = list(comb.pre), list(comb.post)
    if pre[0].in_dim != initial_dim:
        pre[0] = compose_channels(pre[0], Channel.embedding(initial_dim, pre[0].in_dim))
    if post[-1].out_dim != final_dim:
        post[-1] = compose_channels(Channel.embedding(post[-1].out_dim, final_dim), post[-1])
    return ControlComb(pre, post, comb.coarse_mask)
