"""Composite drives that break the Kronecker structure: perturbations, disorder.

Both constructors build the same two-step evolution U = exp(-i H1) exp(-i H2)
on the full 2D basis.  Step 1 carries the rung kick of the ladder plus the
chain Hamiltonian; step 2 carries the intercell flight of the ladder plus the
chain Hamiltonian again.  With everything clean this factorizes exactly into
(ladder period) x exp(-2i H_chain), which shares the corner-mode structure of
the plain Kronecker drive.

Uniform perturbations (all coupling x-hops):
  delta_x: intercell sigma_z hop on the ladder, sign flipped, in step 1
  delta_1: intercell sigma_x hop weighted by the chain sublattice sign, step 1
  delta_2: antisymmetric intercell sigma_z hop with chain sublattice sign, step 2
  delta_y: next-neighbor-free tau_y modulation of the chain, both steps
delta_x and delta_y break time-reversal, particle-hole, and inversion;
delta_1 and delta_2 additionally destroy the tensor-product factorization.
All four commute with nothing but preserve the composite chiral symmetry
sigma_y (x) tau_z in the symmetric frames.

Disorder adds lam * eps to every hopping amplitude, eps uniform in [-1, 1]
from a seeded generator.  Granularity is one eps per drawn coupling of the
lattice drawing, the coarsest grouping that keeps the chiral relation exact
in this basis: ladder rungs get one eps per (x-cell, y-site); each ladder
intercell link group (both diagonals and both legs) shares one eps per
(x-link, y-site); each chain bond gets one eps per (y-bond, x-cell), shared
by the two ladder legs and by both evolution steps.  Finer per-bond draws
inside a link group would detune the two diagonals against each other and
break chirality.  Draw order: rungs, links, intra-cell chain bonds,
intercell chain bonds (row-major), so seeds are reproducible.
"""

from dataclasses import dataclass

import numpy as np

from .lattice import (
    OPEN,
    PERIODIC,
    LatticeOperator,
    chain_basis,
    combine_bases,
    ladder_basis,
)
from .models import FRAME_RAW, FRAME_SYM1, FRAME_SYM2, FRAMES
from .params import KICKED_V1
from .pauli import expm_hermitian


@dataclass(frozen=True)
class Perturbation:
    """Uniform chiral-symmetric perturbation strengths."""

    delta_x: float = 0.0
    delta_y: float = 0.0
    delta_1: float = 0.0
    delta_2: float = 0.0

    @property
    def any_nonzero(self):
        return any(
            v != 0.0 for v in (self.delta_x, self.delta_y, self.delta_1, self.delta_2)
        )


def _bond_count(cells, bc):
    return cells if bc == PERIODIC else cells - 1


def _disordered_amplitudes(p, lengths, bc, lam, rng):
    """Per-coupling amplitude arrays, disorder included."""
    lx, ly = lengths
    bc_x, bc_y = bc
    ny = 2 * ly
    rung = np.full((lx, ny), float(p.jx0))
    link = np.full((_bond_count(lx, bc_x), ny), float(p.jx1))
    chain_intra = np.full((ly, lx), float(p.jy0))
    chain_inter = np.full((_bond_count(ly, bc_y), lx), float(p.jy1))
    for arr in (rung, link, chain_intra, chain_inter):
        arr += lam * rng.uniform(-1.0, 1.0, size=arr.shape)
    return rung, link, chain_intra, chain_inter


def _build_steps(p, lengths, bc, pert, rung, link, chain_intra, chain_inter):
    """Dense step Hamiltonians H1, H2 on the composite basis (x-outer)."""
    lx, ly = lengths
    bc_x, bc_y = bc
    ny = 2 * ly
    dim = 2 * lx * ny
    h1 = np.zeros((dim, dim), dtype=complex)
    h2 = np.zeros((dim, dim), dtype=complex)

    def xs(cell, leg):
        # slice of all y-sites of one ladder site
        start = (2 * cell + leg) * ny
        return slice(start, start + ny)

    ys = np.arange(ny)
    tau_sign = np.where(ys % 2 == 0, 1.0, -1.0)  # chain sublattice sign

    # --- step-1 ladder part: rung kick and the uniform delta hops
    for m in range(lx):
        h1[xs(m, 0), xs(m, 1)] += np.diag(rung[m])
        h1[xs(m, 1), xs(m, 0)] += np.diag(rung[m])
    dxh = 0.5 * pert.delta_x
    d1h = 0.5 * pert.delta_1
    for m in range(_bond_count(lx, bc_x)):
        mm = (m + 1) % lx
        for src, dst in ((m, mm), (mm, m)):
            # -delta_x cos(kx) sigma_z hop, sublattice-blind in the chain
            h1[xs(dst, 0), xs(src, 0)] += np.diag(np.full(ny, -dxh))
            h1[xs(dst, 1), xs(src, 1)] += np.diag(np.full(ny, dxh))
            # delta_1 cos(kx) sigma_x hop carrying the chain sublattice sign
            h1[xs(dst, 0), xs(src, 1)] += np.diag(d1h * tau_sign)
            h1[xs(dst, 1), xs(src, 0)] += np.diag(d1h * tau_sign)

    # --- step-2 ladder part: intercell link groups and the delta_2 hop
    d2h = 0.5 * pert.delta_2
    for m in range(_bond_count(lx, bc_x)):
        mm = (m + 1) % lx
        amps = link[m]
        fwd_leg = 0.5j * amps + 1j * d2h * tau_sign
        fwd_diag = 0.5 * amps
        h2[xs(mm, 0), xs(m, 0)] += np.diag(fwd_leg)
        h2[xs(mm, 1), xs(m, 1)] += np.diag(-fwd_leg)
        h2[xs(mm, 0), xs(m, 1)] += np.diag(fwd_diag)
        h2[xs(mm, 1), xs(m, 0)] += np.diag(fwd_diag)
        h2[xs(m, 0), xs(mm, 0)] += np.diag(fwd_leg.conj())
        h2[xs(m, 1), xs(mm, 1)] += np.diag(-fwd_leg.conj())
        h2[xs(m, 0), xs(mm, 1)] += np.diag(fwd_diag)
        h2[xs(m, 1), xs(mm, 0)] += np.diag(fwd_diag)

    # --- chain part, identical in both steps, disorder shared per x-cell
    tau_y_hop = 0.5 * pert.delta_y * np.array([[0, -1j], [1j, 0]], dtype=complex)
    for mx in range(lx):
        hy = np.zeros((ny, ny), dtype=complex)
        for n in range(ly):
            hy[2 * n, 2 * n + 1] += chain_intra[n, mx]
            hy[2 * n + 1, 2 * n] += chain_intra[n, mx]
        for n in range(_bond_count(ly, bc_y)):
            nn = (n + 1) % ly
            hy[2 * nn, 2 * n + 1] += chain_inter[n, mx]
            hy[2 * n + 1, 2 * nn] += chain_inter[n, mx]
            hy[2 * nn : 2 * nn + 2, 2 * n : 2 * n + 2] += tau_y_hop
            hy[2 * n : 2 * n + 2, 2 * nn : 2 * nn + 2] += tau_y_hop.conj().T
        for leg in (0, 1):
            h1[xs(mx, leg), xs(mx, leg)] += hy
            h2[xs(mx, leg), xs(mx, leg)] += hy
    return h1, h2


def _two_step_operator(p, lengths, bc, pert, rung, link, ci, ce, frame, meta):
    h1, h2 = _build_steps(p, lengths, bc, pert, rung, link, ci, ce)
    if frame == FRAME_RAW:
        u = expm_hermitian(h1) @ expm_hermitian(h2)
    elif frame == FRAME_SYM1:
        half = expm_hermitian(h2 / 2)
        u = half @ expm_hermitian(h1) @ half
    elif frame == FRAME_SYM2:
        half = expm_hermitian(h1 / 2)
        u = half @ expm_hermitian(h2) @ half
    else:
        raise ValueError(f"unknown frame {frame!r}, expected one of {FRAMES}")
    lx, ly = lengths
    return LatticeOperator(
        basis=combine_bases(ladder_basis(lx), chain_basis(ly)),
        bc_x=bc[0], bc_y=bc[1], kind="floquet", matrix_data=u,
        frame=frame, meta=meta,
    )


def _require_v1(p, caller):
    if p.protocol != KICKED_V1:
        raise ValueError(f"{caller} is defined for the kicked_v1 protocol only")


def perturbed_floquet_2d(p, deltas, lengths, bc, frame=FRAME_RAW):
    """Two-step composite drive with uniform symmetry-breaking hops.

    `deltas` is a Perturbation (or mapping with its field names).  With all
    strengths zero this is the clean two-step drive, whose eigenphases match
    ladder-period plus doubled-chain phases exactly.
    """
    _require_v1(p, "perturbed_floquet_2d")
    if not isinstance(deltas, Perturbation):
        deltas = Perturbation(**dict(deltas))
    rung, link, ci, ce = _disordered_amplitudes(
        p, lengths, bc, 0.0, np.random.default_rng(0)
    )
    meta = {"deltas": deltas, "lengths": tuple(lengths)}
    return _two_step_operator(p, lengths, bc, deltas, rung, link, ci, ce, frame, meta)


def disordered_floquet_2d(p, lam, seed, lengths, bc, deltas=None, frame=FRAME_RAW):
    """Two-step composite drive with additive hopping disorder of strength lam.

    Every drawn coupling of the lattice gets an independent shift
    lam * eps, eps ~ U[-1, 1] from numpy's seeded default generator; see the
    module docstring for the grouping.  Optional `deltas` stack the uniform
    perturbations on top.  lam = 0 with no deltas reproduces the clean
    two-step drive bit for bit.
    """
    _require_v1(p, "disordered_floquet_2d")
    if lam < 0:
        raise ValueError(f"disorder strength must be >= 0, got {lam}")
    pert = deltas if isinstance(deltas, Perturbation) else (
        Perturbation(**dict(deltas)) if deltas else Perturbation()
    )
    rng = np.random.default_rng(seed)
    rung, link, ci, ce = _disordered_amplitudes(p, lengths, bc, float(lam), rng)
    meta = {"lam": float(lam), "seed": seed, "deltas": pert, "lengths": tuple(lengths)}
    return _two_step_operator(p, lengths, bc, pert, rung, link, ci, ce, frame, meta)
