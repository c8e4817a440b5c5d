import logging

from comb_resources.linalg_core import LegSpec

logger = logging.getLogger(__package__)

INITIAL_TIME = 'i'
FINAL_TIME = 'f'


def in_label(time):
    return f'in_{time}'


def out_label(time):
    return f'out_{time}'


class TimeSlot:
    """One access time of a process. `out_dim` is the dimension of the leg the experimenter feeds into the process,
    `in_dim` the dimension of the leg the process hands back; either is None where the time has no such leg."""

    def __init__(self, label, in_dim=None, out_dim=None):
        self.label = str(label)
        self.in_dim = in_dim
        self.out_dim = out_dim

    def __eq__(self, other):
        if not isinstance(other, type(self)):
            return False
        return (self.label, self.in_dim, self.out_dim) == (other.label, other.in_dim, other.out_dim)

    def __hash__(self):
        return hash((self.label, self.in_dim, self.out_dim))

    def __repr__(self):
        return f'TimeSlot({self.label!r}, in_dim={self.in_dim}, out_dim={self.out_dim})'

    @property
    def in_leg(self):
        return None if self.in_dim is None else LegSpec(in_label(self.label), self.in_dim)

    @property
    def out_leg(self):
        return None if self.out_dim is None else LegSpec(out_label(self.label), self.out_dim)


class SlotStructure:
    """Ordered access times (t_i, t_1, …, t_n, t_f) of a process and the legs they carry. The canonical leg order of a
    process Choi matrix is in_f, out_n, in_n, …, out_1, in_1, out_i."""

    def __init__(self, times):
        self.times = tuple(times)
        if len(self.times) < 2:
            raise ValueError('A slot structure needs at least an initial and a final time')
        first, last = self.times[0], self.times[-1]
        if first.in_dim is not None or first.out_dim is None:
            raise ValueError(f'Initial time {first.label!r} must carry an out leg only')
        if last.out_dim is not None or last.in_dim is None:
            raise ValueError(f'Final time {last.label!r} must carry an in leg only')
        for time in self.times[1:-1]:
            if time.in_dim is None or time.out_dim is None:
                raise ValueError(f'Intermediate time {time.label!r} must carry both an in and an out leg')
        labels = self.labels
        if len(set(labels)) != len(labels):
            raise ValueError(f'Time labels must be unique, got {list(labels)}')

    @classmethod
    def from_dims(cls, out_dims, in_dims, labels=None):
        """Build from the out-leg dimensions at t_i, t_1, …, t_n and the in-leg dimensions at t_1, …, t_n, t_f."""
        out_dims, in_dims = list(out_dims), list(in_dims)
        if len(out_dims) != len(in_dims):
            raise ValueError(f'Expected as many out legs as in legs, got {len(out_dims)} and {len(in_dims)}')
        n_slots = len(out_dims) - 1
        if labels is None:
            labels = [INITIAL_TIME] + [str(k) for k in range(1, n_slots + 1)] + [FINAL_TIME]
        times = [TimeSlot(labels[0], out_dim=out_dims[0])]
        times += [TimeSlot(labels[k], in_dim=in_dims[k - 1], out_dim=out_dims[k]) for k in range(1, n_slots + 1)]
        times.append(TimeSlot(labels[-1], in_dim=in_dims[-1]))
        return cls(times)

    @classmethod
    def uniform(cls, n_slots, dim):
        return cls.from_dims([dim] * (n_slots + 1), [dim] * (n_slots + 1))

    def __eq__(self, other):
        return isinstance(other, type(self)) and self.times == other.times

    def __hash__(self):
        return hash(self.times)

    def __repr__(self):
        return f'SlotStructure({list(self.times)})'

    @property
    def n_slots(self):
        return len(self.times) - 2

    @property
    def labels(self):
        return tuple(time.label for time in self.times)

    @property
    def intermediate_labels(self):
        return self.labels[1:-1]

    @property
    def out_dims(self):
        return [time.out_dim for time in self.times[:-1]]

    @property
    def in_dims(self):
        return [time.in_dim for time in self.times[1:]]

    @property
    def legs(self):
        legs = []
        for time in reversed(self.times):
            legs.extend(leg for leg in (time.out_leg, time.in_leg) if leg is not None)
        return tuple(legs)

    @property
    def leg_labels(self):
        return tuple(leg.label for leg in self.legs)

    @property
    def markov_pairs(self):
        """Leg label pairs (in at t_{k+1}, out at t_k) of the Markov marginal, in canonical order."""
        pairs = [(self.times[k + 1].in_leg.label, self.times[k].out_leg.label) for k in range(self.n_slots + 1)]
        return list(reversed(pairs))

    def position(self, label):
        """Index of a time label in (t_i, t_1, …, t_f)."""
        if str(label) not in self.labels:
            raise ValueError(f'Unknown time {label!r}, available times are {list(self.labels)}')
        return self.labels.index(str(label))

    def intermediate_positions(self, labels):
        positions = set()
        for label in labels:
            position = self.position(label)
            if position in (0, len(self.times) - 1):
                raise ValueError(f'Time {label!r} is not an intermediate time')
            positions.add(position)
        return frozenset(positions)

    def coarse_grained(self, positions):
        """The structure left after closing the intermediate times at the given positions."""
        return SlotStructure([time for position, time in enumerate(self.times) if position not in positions])

    def resized(self, out_dims, in_dims):
        return SlotStructure.from_dims(out_dims, in_dims, self.labels)

    def relabelled(self, labels):
        return SlotStructure.from_dims(self.out_dims, self.in_dims, labels)
