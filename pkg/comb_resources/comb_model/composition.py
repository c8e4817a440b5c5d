"""Sequential and parallel composition of processes, and the matching constructions on control combs."""

import logging

from comb_resources.comb_model.channel import IN, OUT, Channel
from comb_resources.comb_model.control import ControlComb
from comb_resources.comb_model.process import ProcessTensor, is_uncorrelated
from comb_resources.comb_model.slots import SlotStructure, TimeSlot
from comb_resources.linalg_core import keep_legs, link_product, partial_trace, tensor_product

logger = logging.getLogger(__package__)

JOINT_TIME = "t'"
SUFFIX = "'"


def _unique(label, taken):
    while label in taken:
        label += SUFFIX
    return label


def _relabel_legs(t, labels):
    """Choi matrix of t with its time labels replaced, position by position."""
    renamed = t.slots.relabelled(labels)
    return t.choi.relabel(dict(zip(t.slots.leg_labels, renamed.leg_labels))), renamed


def compose_sequential(t, s):
    """Process in which t happens first and s afterwards, joined by a new time whose in leg is the final in leg of t
    and whose out leg is the initial out leg of s. Times of s that collide with times of t get a "'" suffix."""
    t_labels = list(t.slots.labels[:-1])
    taken = set(t_labels)
    joint = _unique(JOINT_TIME, taken)
    taken.add(joint)
    s_labels = []
    for label in s.slots.labels[1:]:
        label = _unique(label, taken)
        taken.add(label)
        s_labels.append(label)
    if s_labels != list(s.slots.labels[1:]):
        logger.debug(f'Relabelled times {list(s.slots.labels[1:])} of the later process to {s_labels}')

    t_choi, _ = _relabel_legs(t, t_labels + [joint])
    s_choi, _ = _relabel_legs(s, [joint] + s_labels)
    times = list(t.slots.times[:-1])
    times.append(TimeSlot(joint, in_dim=t.slots.times[-1].in_dim, out_dim=s.slots.times[0].out_dim))
    times.extend(TimeSlot(label, time.in_dim, time.out_dim) for label, time in zip(s_labels, s.slots.times[1:]))
    slots = SlotStructure(times)
    return ProcessTensor(tensor_product(s_choi, t_choi), slots, check=False)


def compose_parallel(t, s):
    """Process on the times of t whose legs are the products of the matching legs of t and s, t most significant."""
    if t.n_slots != s.n_slots:
        raise ValueError(f'Cannot compose processes with {t.n_slots} and {s.n_slots} intermediate times in parallel')
    a = t.choi.relabel({label: 'a:' + label for label in t.choi.labels})
    b = s.choi.relabel(dict(zip(s.slots.leg_labels, ['b:' + label for label in t.slots.leg_labels])))
    m = tensor_product(a, b)
    for label in t.slots.leg_labels:
        m = m.merge_legs(['a:' + label, 'b:' + label], label)
    slots = SlotStructure.from_dims([x * y for x, y in zip(t.slots.out_dims, s.slots.out_dims)],
                                    [x * y for x, y in zip(t.slots.in_dims, s.slots.in_dims)], t.slots.labels)
    return ProcessTensor(m, slots, check=False)


def concatenate_combs(z_t, z_s):
    """Comb on compose_sequential(t, s) acting as z_t on t and z_s on s; the joint time stays open."""
    mask = set(z_t.coarse_mask) | {z_t.n_slots + 1 + position for position in z_s.coarse_mask}
    return ControlComb(z_t.pre + z_s.pre, z_t.post + z_s.post, mask)


def absorb_uncorrelated(z, u):
    """Comb on t alone equivalent to z acting on compose_parallel(t, u), for u a product of single-leg states.

    Pre channels lose the part of their output that would enter u, post channels get the part of their input that u
    would supply fed from u's state at that leg.
    """
    if not is_uncorrelated(u):
        raise ValueError('Only an uncorrelated process can be absorbed into a comb')
    if z.n_slots != u.n_slots:
        raise ValueError(f'A comb with {z.n_slots} slots cannot absorb a process with {u.n_slots}')
    pre = []
    for channel, dim in zip(z.pre, u.slots.out_dims):
        if channel.out_dim % dim:
            raise ValueError(f'Pre channel output dimension {channel.out_dim} is not a multiple of {dim}')
        choi = channel.choi.split_leg(OUT, [(OUT, channel.out_dim // dim), ('u', dim)])
        pre.append(Channel.from_matrix(partial_trace(choi, {'u'}), check=False))
    post = []
    for channel, time in zip(z.post, u.slots.times[1:]):
        leg = time.in_leg
        if channel.in_dim % leg.dim:
            raise ValueError(f'Post channel input dimension {channel.in_dim} is not a multiple of {leg.dim}')
        choi = channel.choi.split_leg(IN, [(IN, channel.in_dim // leg.dim), ('u', leg.dim)])
        state = keep_legs(u.choi, [leg.label]).relabel({leg.label: 'u'})
        post.append(Channel.from_matrix(link_product(choi, state), check=False))
    return ControlComb(pre, post, z.coarse_mask)


def split_concatenated(z, t_slots):
    """Inverse of concatenate_combs: the combs acting on t and on s inside a comb on compose_sequential(t, s)."""
    cut = t_slots.n_slots + 1
    if not 0 < cut < len(z.pre):
        raise ValueError(f'A comb with {z.n_slots} slots does not contain a comb on {t_slots.n_slots} slots')
    z_t = ControlComb(z.pre[:cut], z.post[:cut], [position for position in z.coarse_mask if position < cut])
    z_s = ControlComb(z.pre[cut:], z.post[cut:], [position - cut for position in z.coarse_mask if position > cut])
    return z_t, z_s
