"""Projection of Hermitian matrices onto the Choi matrices of channels, by Dykstra's alternating projections between the
positive cone and the affine set of trace-preserving maps (unit-trace convention, legs (out, in))."""

import logging

import numpy as np

from comb_resources.comb_model.channel import Channel
from comb_resources.linalg_core import EIGENVALUE_CUTOFF, MultiLegMatrix, herm_eig, herm_function

logger = logging.getLogger(__package__)

DEFAULT_TOLERANCE = 1e-9
DEFAULT_MAX_ITER = 2000


def project_positive(entries):
    values, vectors = herm_eig(entries)
    return (vectors * np.maximum(values, 0)) @ vectors.conj().T


def _marginal_in(entries, in_dim, out_dim):
    return np.einsum('aiaj->ij', entries.reshape(out_dim, in_dim, out_dim, in_dim))


def project_trace_preserving(entries, in_dim, out_dim):
    """Nearest matrix in Frobenius norm with tr_out J = I/in_dim."""
    excess = _marginal_in(entries, in_dim, out_dim) - np.eye(in_dim) / in_dim
    return entries - np.kron(np.eye(out_dim) / out_dim, excess)


def trace_preserving_tangent(entries, in_dim, out_dim):
    """Component of a direction that leaves tr_out J unchanged."""
    return entries - np.kron(np.eye(out_dim) / out_dim, _marginal_in(entries, in_dim, out_dim))


def trace_preservation_defect(entries, in_dim, out_dim):
    return float(np.max(np.abs(_marginal_in(entries, in_dim, out_dim) - np.eye(in_dim) / in_dim)))


def dykstra_cptp(entries, in_dim, tol=DEFAULT_TOLERANCE, max_iter=DEFAULT_MAX_ITER):
    """Dykstra's algorithm for the intersection of the positive cone and the trace-preserving set.

    :return: (positive iterate, its trace-preservation defect, iterations used)
    """
    entries = np.asarray(entries, dtype=np.complex128)
    entries = (entries + entries.conj().T) / 2
    out_dim = entries.shape[0] // in_dim
    state = entries
    positive_change = np.zeros_like(entries)
    affine_change = np.zeros_like(entries)
    positive = project_positive(state)
    defect = trace_preservation_defect(positive, in_dim, out_dim)
    iteration = 0
    while defect > tol and iteration < max_iter:
        iteration += 1
        pre_positive = state + positive_change
        positive = project_positive(pre_positive)
        positive_change = pre_positive - positive

        pre_affine = positive + affine_change
        state = project_trace_preserving(pre_affine, in_dim, out_dim)
        affine_change = pre_affine - state
        defect = trace_preservation_defect(positive, in_dim, out_dim)
    return positive, defect, iteration


def _restore_trace_preservation(entries, in_dim, out_dim):
    """Congruence (I ⊗ σ^{-1/2}) J (I ⊗ σ^{-1/2}) with σ = in_dim · tr_out J, which keeps J positive and makes it
    exactly trace preserving."""
    sigma = in_dim * _marginal_in(entries, in_dim, out_dim)
    inverse_root = herm_function(sigma, lambda values: 1 / np.sqrt(np.maximum(values, EIGENVALUE_CUTOFF)))
    congruence = np.kron(np.eye(out_dim), inverse_root)
    return congruence @ entries @ congruence.conj().T


def cptp_project(m, in_dim, tol=DEFAULT_TOLERANCE, max_iter=DEFAULT_MAX_ITER):
    """Channel whose Choi matrix is the nearest channel Choi matrix to m, up to the projection tolerance.

    :param m: Hermitian MultiLegMatrix or array whose legs are (out, in)
    :param in_dim: dimension of the input leg
    """
    entries = m.entries if isinstance(m, MultiLegMatrix) else np.asarray(m, dtype=np.complex128)
    if entries.shape[0] % in_dim:
        raise ValueError(f'Matrix of size {entries.shape[0]} has no input leg of dimension {in_dim}')
    out_dim = entries.shape[0] // in_dim
    positive, defect, iterations = dykstra_cptp(entries, in_dim, tol, max_iter)
    if defect > tol:
        logger.warning(f'Channel projection stopped after {iterations} iterations with trace-preservation defect '
                       f'{defect:.3e}')
    return Channel(_restore_trace_preservation(positive, in_dim, out_dim), in_dim, out_dim, check=False)
