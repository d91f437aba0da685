"""Labeled dense operators and real-space assembly from Bloch harmonics.

Basis conventions
-----------------
One-dimensional operators act on ``length`` unit cells of two sites each.
The ladder cells carry sublattices ``("u", "v")``, the chain cells
``("a", "b")``; row index = 2*cell + sublattice.  Two-dimensional
operators use Kronecker ordering with the x block outer and the y block
inner: row index = x_site * (2 * length_y) + y_site.  Every operator
carries its basis labels explicitly so the ordering can never be
silently transposed.

Bloch harmonics
---------------
A translation-invariant block Hamiltonian is specified by a map
``{d: M_d}`` with H(k) = sum_d M_d exp(-i k d), where M_d is the block
coupling cell n to cell n+d (M_{-d} = M_d^dagger for a Hermitian
operator).  Under this convention a ``cos k * M`` term becomes the
symmetric hop (c_m^dag M c_{m+1} + h.c.)/2 and a ``sin k * M`` term the
antisymmetric hop (c_m^dag M c_{m+1} - h.c.)/(2i).
"""

from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

OPEN = "open"
PERIODIC = "periodic"
NOT_APPLICABLE = "not_applicable"
BC_1D = (OPEN, PERIODIC)

HERMITIAN_TOL = 1e-12
UNITARY_TOL = 1e-10


class Site1D(NamedTuple):
    cell: int
    sub: str


class Site2D(NamedTuple):
    cell_x: int
    sub_x: str
    cell_y: int
    sub_y: str


def make_basis(length, subs):
    return [Site1D(cell, s) for cell in range(length) for s in subs]


def ladder_basis(length):
    return make_basis(length, ("u", "v"))


def chain_basis(length):
    return make_basis(length, ("a", "b"))


def combine_bases(basis_x, basis_y):
    return [
        Site2D(sx.cell, sx.sub, sy.cell, sy.sub)
        for sx in basis_x
        for sy in basis_y
    ]


def hermiticity_residual(m):
    return float(np.abs(m - m.conj().T).max())


def unitarity_residual(m):
    return float(np.abs(m.conj().T @ m - np.eye(m.shape[0])).max())


@dataclass
class LatticeOperator:
    """Dense labeled operator with boundary-condition metadata.

    ``kind`` is "hamiltonian" or "floquet".  A 2D Kronecker product may
    carry its two factors; the full matrix is then materialized lazily
    so that large factorized operators never have to exist densely.
    ``frame`` records the time frame a Floquet operator was built in.
    """

    basis: list
    bc_x: str
    bc_y: str
    kind: str
    matrix_data: np.ndarray | None = None
    factors: tuple | None = None
    frame: str | None = None
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.matrix_data is None and self.factors is None:
            raise ValueError("operator needs a matrix or factors")
        if self.matrix_data is not None:
            m = np.ascontiguousarray(self.matrix_data, dtype=complex)
            if m.shape != (len(self.basis), len(self.basis)):
                raise ValueError(
                    f"matrix shape {m.shape} does not match basis length {len(self.basis)}"
                )
            m.flags.writeable = False
            self.matrix_data = m
            self._validate(m)

    def _validate(self, m):
        if self.kind == "hamiltonian":
            r = hermiticity_residual(m)
            if r > HERMITIAN_TOL:
                raise ValueError(f"Hamiltonian not Hermitian: residual {r:.3e}")
        elif self.kind == "floquet":
            r = unitarity_residual(m)
            if r > UNITARY_TOL:
                raise ValueError(f"Floquet operator not unitary: residual {r:.3e}")
        else:
            raise ValueError(f"unknown operator kind {self.kind!r}")

    @property
    def dim(self):
        return len(self.basis)

    @property
    def matrix(self):
        if self.matrix_data is None:
            ux, uy = self.factors
            m = np.kron(ux.matrix, uy.matrix)
            m.flags.writeable = False
            self.matrix_data = m
        return self.matrix_data

    @property
    def is_factorized(self):
        return self.factors is not None


@dataclass
class BlochMatrix:
    """Momentum-space matrix at a single quasimomentum."""

    k: float
    matrix: np.ndarray
    kind: str = "hamiltonian"
    frame: str | None = None

    def __post_init__(self):
        self.matrix = np.asarray(self.matrix, dtype=complex)
        if self.kind == "hamiltonian":
            r = hermiticity_residual(self.matrix)
            if r > HERMITIAN_TOL:
                raise ValueError(f"Bloch Hamiltonian not Hermitian: residual {r:.3e}")
        elif self.kind == "floquet":
            r = unitarity_residual(self.matrix)
            if r > UNITARY_TOL:
                raise ValueError(f"Bloch Floquet matrix not unitary: residual {r:.3e}")

    @property
    def dim(self):
        return self.matrix.shape[0]


def bloch_from_harmonics(k, blocks):
    """Evaluate H(k) = sum_d M_d exp(-i k d)."""
    dim = next(iter(blocks.values())).shape[0]
    h = np.zeros((dim, dim), dtype=complex)
    for d, m in blocks.items():
        h += np.asarray(m, dtype=complex) * np.exp(-1j * k * d)
    return h


def realspace_from_harmonics(length, blocks, bc):
    """Assemble the real-space block matrix for the given harmonics.

    Open boundaries drop hops leaving the chain; periodic boundaries wrap
    cell indices modulo the length.
    """
    if length < 2:
        raise ValueError(f"length must be >= 2, got {length}")
    if bc not in BC_1D:
        raise ValueError(f"boundary condition must be one of {BC_1D}, got {bc!r}")
    nb = next(iter(blocks.values())).shape[0]
    n = nb * length
    h = np.zeros((n, n), dtype=complex)
    for d, m in blocks.items():
        m = np.asarray(m, dtype=complex)
        for col_cell in range(length):
            row_cell = col_cell + d
            if bc == PERIODIC:
                row_cell %= length
            elif not (0 <= row_cell < length):
                continue
            r, c = nb * row_cell, nb * col_cell
            h[r : r + nb, c : c + nb] += m
    return h


def cos_k(m):
    """Harmonics of cos(k) * M."""
    m = np.asarray(m, dtype=complex)
    return {1: m / 2.0, -1: m / 2.0}


def sin_k(m):
    """Harmonics of sin(k) * M."""
    m = np.asarray(m, dtype=complex)
    return {1: 1j * m / 2.0, -1: -1j * m / 2.0}


def const_k(m):
    return {0: np.asarray(m, dtype=complex)}


def merge_harmonics(*harmonic_maps):
    out = {}
    for blocks in harmonic_maps:
        for d, m in blocks.items():
            if d in out:
                out[d] = out[d] + np.asarray(m, dtype=complex)
            else:
                out[d] = np.asarray(m, dtype=complex)
    return out
