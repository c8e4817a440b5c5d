import logging

import numpy as np

from comb_resources.linalg_core import MultiLegMatrix, herm_eig, link_product, partial_trace

logger = logging.getLogger(__package__)

OUT = 'out'
IN = 'in'

# Absolute tolerance of the positivity, trace and trace-preservation checks.
CHANNEL_TOLERANCE = 1e-9

PAULIS = {
    'I': np.eye(2, dtype=np.complex128),
    'X': np.array([[0, 1], [1, 0]], dtype=np.complex128),
    'Y': np.array([[0, -1j], [1j, 0]], dtype=np.complex128),
    'Z': np.array([[1, 0], [0, -1]], dtype=np.complex128),
}


class Channel:
    """A CPTP map stored as its unit-trace Choi matrix J = (Λ ⊗ id)(Ψ⁺) over the legs (out, in), so that
    tr_out J = I/in_dim."""

    def __init__(self, choi, in_dim, out_dim, check=True):
        self.choi = MultiLegMatrix(choi, [(OUT, out_dim), (IN, in_dim)])
        if check:
            psd, trace, tp = self.defects()
            if max(psd, trace, tp) > CHANNEL_TOLERANCE:
                raise ValueError(f'Not a CPTP Choi matrix: positivity defect {psd:.2e}, trace defect {trace:.2e}, '
                                 f'trace-preservation defect {tp:.2e}')

    def __repr__(self):
        return f'Channel(in_dim={self.in_dim}, out_dim={self.out_dim})'

    @property
    def in_dim(self):
        return self.choi.dims[1]

    @property
    def out_dim(self):
        return self.choi.dims[0]

    @classmethod
    def from_matrix(cls, m, check=True):
        """Wrap a two-leg MultiLegMatrix whose legs are (output, input)."""
        if len(m.legs) != 2:
            raise ValueError(f'A channel Choi matrix has exactly two legs, got {list(m.labels)}')
        return cls(m.entries, in_dim=m.dims[1], out_dim=m.dims[0], check=check)

    @classmethod
    def from_kraus(cls, kraus):
        kraus = [np.asarray(k, dtype=np.complex128) for k in kraus]
        out_dim, in_dim = kraus[0].shape
        vectors = np.array([k.reshape(-1) for k in kraus])
        return cls(vectors.T @ vectors.conj() / in_dim, in_dim=in_dim, out_dim=out_dim)

    @classmethod
    def from_unitary(cls, unitary):
        return cls.from_kraus([unitary])

    @classmethod
    def identity(cls, dim):
        return cls.from_unitary(np.eye(dim))

    @classmethod
    def pauli(cls, name):
        if name.upper() not in PAULIS:
            raise ValueError(f'Unknown pulse {name!r}, expected one of {sorted(PAULIS)}')
        return cls.from_unitary(PAULIS[name.upper()])

    @classmethod
    def completely_dephasing(cls, dim):
        projectors = []
        for k in range(dim):
            projector = np.zeros((dim, dim))
            projector[k, k] = 1
            projectors.append(projector)
        return cls.from_kraus(projectors)

    @classmethod
    def embedding(cls, in_dim, out_dim):
        """Basis-preserving channel between spaces of different dimension: input basis state k is sent to
        k mod out_dim, so it is an isometry when out_dim ≥ in_dim."""
        kraus = []
        for block in range(-(-in_dim // out_dim)):
            k = np.zeros((out_dim, in_dim))
            for i in range(out_dim):
                if block * out_dim + i < in_dim:
                    k[i, block * out_dim + i] = 1
            kraus.append(k)
        return cls.from_kraus(kraus)

    def defects(self):
        """Positivity, trace and trace-preservation defects of the Choi matrix."""
        values, _ = herm_eig(self.choi)
        psd = max(0.0, -values[-1])
        trace = abs(self.choi.trace() - 1)
        marginal = partial_trace(self.choi, {OUT}).entries
        tp = np.max(np.abs(marginal - np.eye(self.in_dim) / self.in_dim))
        return psd, trace, tp

    def labelled(self, out_leg, in_leg):
        return self.choi.relabel({OUT: out_leg, IN: in_leg})

    def apply(self, rho):
        """Λ(ρ) = in_dim · tr_in[J (I ⊗ ρ^T)]."""
        tensor = self.choi.entries.reshape(self.out_dim, self.in_dim, self.out_dim, self.in_dim)
        return self.in_dim * np.einsum('aibj,ij->ab', tensor, np.asarray(rho, dtype=np.complex128))

    def tensor(self, other):
        """Parallel product with this channel on the more significant factor of each leg."""
        joint = MultiLegMatrix(np.kron(self.choi.entries, other.choi.entries),
                               [('a_out', self.out_dim), ('a_in', self.in_dim),
                                ('b_out', other.out_dim), ('b_in', other.in_dim)])
        joint = joint.merge_legs(['a_out', 'b_out'], OUT).merge_legs(['a_in', 'b_in'], IN)
        return Channel.from_matrix(joint.permute([OUT, IN]))

    def is_close(self, other, atol=1e-9):
        return self.choi.dims == other.choi.dims and np.allclose(self.choi.entries, other.choi.entries, atol=atol)


def compose_channels(outer, inner):
    """Choi matrix of outer ∘ inner, i.e. inner acts first."""
    if outer.in_dim != inner.out_dim:
        raise ValueError(f'Cannot compose a channel with input dimension {outer.in_dim} after one with output '
                         f'dimension {inner.out_dim}')
    joint = link_product(outer.labelled(OUT, 'mid'), inner.labelled('mid', IN))
    return Channel.from_matrix(joint.permute([OUT, IN]))
