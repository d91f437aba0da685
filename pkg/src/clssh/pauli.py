"""Pauli matrices and small helpers shared across the package.

The ladder sublattice space (legs u, v) and the chain sublattice space
(sites a, b) are both two dimensional; the same four matrices serve for
either, so they are defined once here.
"""

import numpy as np

ID2 = np.eye(2, dtype=complex)
SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
SIGMA_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
SIGMA_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)

# The chain sector uses the same algebra under different names.
TAU_X, TAU_Y, TAU_Z = SIGMA_X, SIGMA_Y, SIGMA_Z


def expm_hermitian(h):
    """exp(-i h) of a Hermitian matrix via eigendecomposition.

    Exact up to the eigensolver for dense Hermitian input; no series
    truncation is involved.
    """
    h = np.asarray(h, dtype=complex)
    w, v = np.linalg.eigh(h)
    return (v * np.exp(-1j * w)) @ v.conj().T
