"""Spectra of the lattice operators: eigenphases, IPRs, gaps, mode counting.

Quasienergies follow U |psi> = exp(-i eps) |psi| with eps folded to
[-pi, pi); -pi is the canonical representative of the band edge.  All
distances between phases use the circle metric, so counting modes "at pi"
is insensitive to the folding choice.
"""

from dataclasses import dataclass, field

import numpy as np

from .lattice import OPEN, PERIODIC, LatticeOperator, combine_bases
from . import models as _models

COS_CLUSTER_TOL = 1e-8
EIG_RESIDUAL_TOL = 1e-9
NORM_TOL = 1e-8


def fold_phases(x):
    """Map angles to the canonical branch [-pi, pi)."""
    return np.mod(np.asarray(x, dtype=float) + np.pi, 2 * np.pi) - np.pi


def circle_distance(a, b):
    d = np.abs(np.mod(np.asarray(a, dtype=float) - b, 2 * np.pi))
    return np.minimum(d, 2 * np.pi - d)


def ipr(vector):
    """Inverse participation ratio sum_s |psi_s|^4 of a normalized vector."""
    v = np.asarray(vector)
    norm = np.linalg.norm(v)
    if abs(norm - 1.0) > NORM_TOL:
        raise ValueError(f"vector norm deviates from 1 by {abs(norm - 1.0):.3e}")
    a2 = np.abs(v) ** 2
    return float((a2 * a2).sum())


@dataclass
class QuasienergySpectrum:
    """Eigenphases, IPRs, and (possibly lazily stored) eigenvectors.

    Dense decompositions keep the full eigenvector matrix.  Factorized and
    mixed-boundary decompositions keep only the factor eigenvectors plus a
    recipe per eigenstate; vector(i) materializes the full state on demand
    in the x-outer basis ordering.
    """

    phases: np.ndarray
    iprs: np.ndarray
    dim: int
    residual: float
    _vectors: np.ndarray | None = None
    _recipe: dict | None = field(default=None, repr=False)

    def __len__(self):
        return len(self.phases)

    def vector(self, i):
        if self._vectors is not None:
            return self._vectors[:, i]
        r = self._recipe
        if r["kind"] == "kron":
            ix, iy = r["pairs"][i]
            return np.kron(r["vx"][:, ix], r["vy"][:, iy])
        if r["kind"] == "mixed":
            k, iband, iopen = r["entries"][i]
            cells = r["cells_periodic"]
            wave = np.exp(1j * k * np.arange(cells)) / np.sqrt(cells)
            band = r["band_vectors"][(k, iband)]
            periodic_part = np.kron(wave, band)
            open_part = r["open_vectors"][:, iopen]
            if r["periodic_axis"] == "x":
                return np.kron(periodic_part, open_part)
            return np.kron(open_part, periodic_part)
        raise RuntimeError(f"unknown vector recipe {r['kind']!r}")

    def indices_near(self, target, eps_tol):
        return np.flatnonzero(circle_distance(self.phases, target) < eps_tol)

    def order(self):
        """Indices sorting phases ascending (stable)."""
        return np.argsort(self.phases, kind="stable")


@dataclass
class EnergySpectrum:
    """Plain Hermitian eigendecomposition with IPRs (static models)."""

    energies: np.ndarray
    iprs: np.ndarray
    dim: int
    residual: float
    _vectors: np.ndarray | None = None

    def __len__(self):
        return len(self.energies)

    def vector(self, i):
        return self._vectors[:, i]

    def indices_near(self, target, eps_tol):
        return np.flatnonzero(np.abs(self.energies - target) < eps_tol)


@dataclass(frozen=True)
class GapReport:
    gap0: float
    gap_pi: float


def _two_stage_unitary_eig(u):
    """Eigenphases/vectors of a unitary via its Hermitian and anti parts.

    Diagonalizing (U + U^dag)/2 fixes cos(eps); clusters degenerate in
    cos(eps) are split by re-diagonalizing (U - U^dag)/(2i) inside the
    cluster, which separates +eps from -eps without losing orthogonality.
    """
    uh = (u + u.conj().T) / 2
    ua = (u - u.conj().T) / 2j
    cosv, vecs = np.linalg.eigh(uh)
    n = len(cosv)
    phases = np.empty(n)
    i = 0
    while i < n:
        j = i
        while j + 1 < n and cosv[j + 1] - cosv[i] < COS_CLUSTER_TOL:
            j += 1
        blk = slice(i, j + 1)
        if j > i:
            sub = vecs[:, blk].conj().T @ ua @ vecs[:, blk]
            sinv, rot = np.linalg.eigh((sub + sub.conj().T) / 2)
            vecs[:, blk] = vecs[:, blk] @ rot
            phases[blk] = -np.arctan2(sinv, cosv[blk])
        else:
            sinv = (vecs[:, blk].conj().T @ ua @ vecs[:, blk])[0, 0].real
            phases[i] = -np.arctan2(sinv, cosv[i])
        i = j + 1
    return fold_phases(phases), vecs


def eig_unitary(op):
    """Full quasienergy decomposition of a Floquet LatticeOperator.

    Operators carrying their Kronecker factors take the exact product
    path: phases are folded sums of factor phases, IPRs are products of
    factor IPRs, and eigenvectors stay factorized until requested.
    """
    if not isinstance(op, LatticeOperator):
        raise TypeError("eig_unitary expects a LatticeOperator")
    if op.kind != "floquet":
        raise ValueError("eig_unitary needs a unitary (floquet) operator")

    if op.is_factorized:
        sx = eig_unitary(op.factors[0])
        sy = eig_unitary(op.factors[1])
        nx, ny = len(sx), len(sy)
        phases = fold_phases(sx.phases[:, None] + sy.phases[None, :]).ravel()
        iprs = (sx.iprs[:, None] * sy.iprs[None, :]).ravel()
        pairs = [(i, j) for i in range(nx) for j in range(ny)]
        return QuasienergySpectrum(
            phases=phases,
            iprs=iprs,
            dim=op.dim,
            residual=sx.residual + sy.residual,
            _recipe={
                "kind": "kron",
                "vx": sx._vectors,
                "vy": sy._vectors,
                "pairs": pairs,
            },
        )

    u = op.matrix
    phases, vecs = _two_stage_unitary_eig(u)
    residual = float(np.abs(u @ vecs - vecs * np.exp(-1j * phases)).max())
    if residual > EIG_RESIDUAL_TOL:
        raise RuntimeError(f"unitary eigensolve residual {residual:.3e}")
    iprs = (np.abs(vecs) ** 4).sum(axis=0)
    return QuasienergySpectrum(
        phases=phases, iprs=iprs, dim=op.dim, residual=residual, _vectors=vecs
    )


def eig_hermitian(op):
    """Energy decomposition of a Hamiltonian LatticeOperator."""
    if op.kind != "hamiltonian":
        raise ValueError("eig_hermitian needs a Hamiltonian operator")
    h = op.matrix
    energies, vecs = np.linalg.eigh(h)
    residual = float(np.abs(h @ vecs - vecs * energies).max())
    iprs = (np.abs(vecs) ** 4).sum(axis=0)
    return EnergySpectrum(
        energies=energies, iprs=iprs, dim=op.dim, residual=residual, _vectors=vecs
    )


def gaps(spec):
    """Circle-metric spectral distances to 0 and to pi."""
    phases = spec.phases
    if len(phases) == 0:
        raise ValueError("empty spectrum")
    return GapReport(
        gap0=float(circle_distance(phases, 0.0).min()),
        gap_pi=float(circle_distance(phases, np.pi).min()),
    )


def default_ipr_min(spec):
    """Scale-free localization cutoff: ten times the median IPR."""
    return 10.0 * float(np.median(spec.iprs))


def count_modes(spec, target, eps_tol, ipr_min=None):
    """Number of states within eps_tol of the target phase and localized.

    Works on quasienergy spectra (circle metric) and energy spectra
    (absolute distance).  ipr_min=None uses the ten-times-median default.
    """
    if eps_tol <= 0:
        raise ValueError("eps_tol must be positive")
    if ipr_min is None:
        ipr_min = default_ipr_min(spec)
    if isinstance(spec, EnergySpectrum):
        near = np.abs(spec.energies - target) < eps_tol
    else:
        near = circle_distance(spec.phases, target) < eps_tol
    return int(np.count_nonzero(near & (spec.iprs > ipr_min)))


def mixed_bc_spectrum(p, bc_x, bc_y, lengths, k_grid=None, frame=_models.FRAME_RAW):
    """Spectrum with one periodic and one open direction (kicked protocols).

    The periodic direction is block-diagonalized over its exact momentum
    grid k = 2 pi j / L; each block contributes the Bloch eigenphases of
    that direction added to the open-direction eigenphases.  Reported IPRs
    are the open-direction IPRs divided by the periodic cell count, the
    uniform-direction weight of a plane wave.
    """
    if not p.kicked:
        raise ValueError("mixed_bc_spectrum applies to kicked protocols")
    if {bc_x, bc_y} != {OPEN, PERIODIC}:
        raise ValueError(
            "need exactly one periodic and one open direction; "
            "use the direct constructors otherwise"
        )
    lx, ly = lengths
    cells = lx if bc_x == PERIODIC else ly
    if k_grid is None:
        k_grid = 2 * np.pi * np.arange(cells) / cells
    elif len(k_grid) != cells:
        raise ValueError("k_grid must enumerate the periodic direction exactly")

    if bc_x == PERIODIC:
        open_spec = eig_unitary(_models.floquet_y_realspace(ly, OPEN, p))
        bloch = lambda k: _models.floquet_x_bloch(k, p, frame=frame).matrix
        periodic_axis = "x"
    else:
        open_spec = eig_unitary(_models.floquet_x_realspace(lx, OPEN, p, frame=frame))
        bloch = lambda k: _models.floquet_y_bloch(k, p).matrix
        periodic_axis = "y"

    all_phases, all_iprs, entries, band_vectors = [], [], [], {}
    for k in k_grid:
        bph, bvecs = _two_stage_unitary_eig(bloch(k))
        for ib, bp in enumerate(bph):
            band_vectors[(k, ib)] = bvecs[:, ib]
            total = fold_phases(bp + open_spec.phases)
            all_phases.append(total)
            all_iprs.append(open_spec.iprs / cells)
            entries.extend((k, ib, io) for io in range(len(open_spec)))
    phases = np.concatenate(all_phases)
    iprs = np.concatenate(all_iprs)
    return QuasienergySpectrum(
        phases=phases,
        iprs=iprs,
        dim=4 * lx * ly,
        residual=open_spec.residual,
        _recipe={
            "kind": "mixed",
            "entries": entries,
            "band_vectors": band_vectors,
            "open_vectors": open_spec._vectors,
            "cells_periodic": cells,
            "periodic_axis": periodic_axis,
        },
    )
