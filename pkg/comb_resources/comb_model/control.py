import logging

from comb_resources.comb_model.channel import Channel, compose_channels
from comb_resources.comb_model.process import ProcessTensor
from comb_resources.linalg_core import MultiLegMatrix, link_product, max_entangled

logger = logging.getLogger(__package__)

# Prefix of the outer legs a control comb exposes to the experimenter.
OUTER = '~'


def outer_label(label):
    return OUTER + label


class ControlComb:
    """Independent quantum instruments: a pre-processing channel at every out leg, a post-processing channel at every
    in leg, and a set of intermediate positions whose post and pre channels are joined by an identity link.

    pre[k] acts at the out leg of time k (k = 0 … n) and post[k] at the in leg of time k + 1. Channels are stored
    without leg labels; the slot structure they are linked to supplies them.
    """

    def __init__(self, pre, post, coarse_mask=()):
        self.pre = tuple(pre)
        self.post = tuple(post)
        if len(self.pre) != len(self.post) or not self.pre:
            raise ValueError(f'Expected as many pre channels as post channels, got {len(self.pre)} and '
                             f'{len(self.post)}')
        self.coarse_mask = frozenset(int(position) for position in coarse_mask)
        invalid = sorted(position for position in self.coarse_mask if not 1 <= position <= self.n_slots)
        if invalid:
            raise ValueError(f'Coarse-graining positions {invalid} are not intermediate times of a comb with '
                             f'{self.n_slots} slots')

    def __repr__(self):
        return f'ControlComb(n_slots={self.n_slots}, coarse_mask={sorted(self.coarse_mask)})'

    @property
    def n_slots(self):
        return len(self.pre) - 1

    @property
    def channels(self):
        """All channels in time order: pre at t_i, post at t_1, pre at t_1, …, post at t_f."""
        flat = []
        for pre, post in zip(self.pre, self.post):
            flat.extend([pre, post])
        return flat

    @property
    def n_channels(self):
        return 2 * len(self.pre)

    @classmethod
    def trivial(cls, slots, coarse_mask=()):
        return cls([Channel.identity(dim) for dim in slots.out_dims], [Channel.identity(dim) for dim in slots.in_dims],
                   coarse_mask)

    @classmethod
    def from_channels(cls, channels, coarse_mask=()):
        """Inverse of the `channels` property."""
        if len(channels) % 2:
            raise ValueError(f'A comb has an even number of channels, got {len(channels)}')
        return cls(channels[0::2], channels[1::2], coarse_mask)

    def replace(self, index, channel):
        channels = self.channels
        channels[index] = channel
        return ControlComb.from_channels(channels, self.coarse_mask)

    def with_mask(self, coarse_mask):
        return ControlComb(self.pre, self.post, coarse_mask)

    def tensor(self, other):
        """Comb acting on the parallel composition of two processes, this comb on the more significant factor."""
        if self.n_slots != other.n_slots or self.coarse_mask != other.coarse_mask:
            raise ValueError(f'Cannot take the parallel product of {self!r} and {other!r}')
        return ControlComb.from_channels([a.tensor(b) for a, b in zip(self.channels, other.channels)],
                                         self.coarse_mask)

    def check_chaining(self, slots):
        if slots.n_slots != self.n_slots:
            raise ValueError(f'A comb with {self.n_slots} slots cannot act on a process with {slots.n_slots}')
        for k, (pre, dim) in enumerate(zip(self.pre, slots.out_dims)):
            if pre.out_dim != dim:
                raise ValueError(f'Pre channel at time {slots.labels[k]!r} outputs dimension {pre.out_dim}, the '
                                 f'process expects {dim}')
        for k, (post, dim) in enumerate(zip(self.post, slots.in_dims)):
            if post.in_dim != dim:
                raise ValueError(f'Post channel at time {slots.labels[k + 1]!r} takes dimension {post.in_dim}, the '
                                 f'process returns {dim}')
        for position in self.coarse_mask:
            if self.post[position - 1].out_dim != self.pre[position].in_dim:
                raise ValueError(f'Cannot close time {slots.labels[position]!r}: post channel outputs dimension '
                                 f'{self.post[position - 1].out_dim}, pre channel takes {self.pre[position].in_dim}')

    def result_slots(self, slots):
        """Slot structure of a process after this comb has been linked to it."""
        resized = slots.resized([pre.in_dim for pre in self.pre], [post.out_dim for post in self.post])
        return resized.coarse_grained(self.coarse_mask)

    def choi(self, slots):
        """Materialized Choi matrix of the comb on the legs of `slots` and their outer counterparts."""
        m = MultiLegMatrix(1, [])
        for _, factor in LinkPlan(slots, self).factors:
            m = link_product(m, factor)
        return m


class LinkPlan:
    """Labelled factors of a comb in contraction order: for every time, its post and pre channels and then, for a
    closed time, the identity link between them."""

    def __init__(self, slots, comb):
        comb.check_chaining(slots)
        self.slots = slots
        self.comb = comb
        self.result_slots = comb.result_slots(slots)
        # (flat channel index or None for an identity link, labelled Choi matrix)
        self.factors = []
        for position, time in enumerate(slots.times):
            if position > 0:
                label = time.in_leg.label
                self.factors.append((2 * position - 1, comb.post[position - 1].labelled(outer_label(label), label)))
            if position < len(slots.times) - 1:
                label = time.out_leg.label
                self.factors.append((2 * position, comb.pre[position].labelled(label, outer_label(label))))
            if position in comb.coarse_mask:
                self.factors.append((None, max_entangled(comb.pre[position].in_dim, outer_label(time.out_leg.label),
                                                         outer_label(time.in_leg.label))))

    def channel_legs(self, index):
        """Labels (output, input) of the flat channel `index` inside the plan."""
        for position, factor in self.factors:
            if position == index:
                return factor.labels
        raise ValueError(f'Unknown channel index {index}')

    def contract(self, choi, skip=None):
        """Link every factor except the channel with flat index `skip` to `choi`."""
        m = choi
        for index, factor in self.factors:
            if index is None or index != skip:
                m = link_product(m, factor)
        return m

    def finalize(self, m):
        mapping = {label: label[len(OUTER):] for label in m.labels if label.startswith(OUTER)}
        return ProcessTensor(m.relabel(mapping), self.result_slots, check=False)


def link(t, z):
    """The process ⟦t|z⟧ seen through the control comb z."""
    plan = LinkPlan(t.slots, z)
    return plan.finalize(plan.contract(t.choi))


def coarse_grain(t, drop):
    """Close the intermediate times labelled `drop` with identity links."""
    positions = t.slots.intermediate_positions(drop)
    if not positions:
        return t
    return link(t, ControlComb.trivial(t.slots, positions))


def compose_combs(later, earlier):
    """The comb equivalent to linking `earlier` to a process and then `later` to the result."""
    surviving = [position for position in range(earlier.n_slots + 2) if position not in earlier.coarse_mask]
    if later.n_slots != len(surviving) - 2:
        raise ValueError(f'A comb with {later.n_slots} slots cannot follow one that leaves {len(surviving) - 2} open')
    pre, post = list(earlier.pre), list(earlier.post)
    for q, p in enumerate(surviving):
        if q < len(surviving) - 1:
            pre[p] = compose_channels(earlier.pre[p], later.pre[q])
        if q > 0:
            post[p - 1] = compose_channels(later.post[q - 1], earlier.post[p - 1])
    mask = set(earlier.coarse_mask) | {surviving[q] for q in later.coarse_mask}
    return ControlComb(pre, post, mask)
