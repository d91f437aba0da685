"""Hamiltonians and Floquet operators for the ladder, chain, and coupled models.

The ladder ("cl") is a two-leg Creutz-type ladder whose Bloch Hamiltonian is
(j0 + j1 cos k) sigma_x + j1 sin k sigma_z; the chain ("ssh") is a dimerized
hopping chain with (j0 + j1 cos k) tau_x + j1 sin k tau_y.  The coupled 2D
model is their direct sum in momentum space and a Kronecker structure in
real space.

Kicked drives alternate two step generators A and B within one period:
protocol "kicked_v1" kicks the rung coupling (A = jx0 sigma_x) and flies with
the intercell part (B = jx1 (cos k sigma_x + sin k sigma_z)); protocol
"kicked_v2" applies a momentum-dependent kick (B = jx1p sin k sigma_z) before
the free part (A = (jx0 + jx1 cos k) sigma_x).  Three time frames are
offered: "raw" is exp(-iA) exp(-iB); "sym1" centers A inside half-steps of B;
"sym2" centers B inside half-steps of A.  The symmetric frames make the
chiral relation S U S = U^dagger exact.
"""

import numpy as np

from .lattice import (
    NOT_APPLICABLE,
    OPEN,
    PERIODIC,
    BlochMatrix,
    LatticeOperator,
    bloch_from_harmonics,
    chain_basis,
    combine_bases,
    const_k,
    cos_k,
    ladder_basis,
    merge_harmonics,
    realspace_from_harmonics,
    sin_k,
)
from .params import KICKED_V1, KICKED_V2, STATIC, ModelParams
from .pauli import ID2, SIGMA_X, SIGMA_Y, SIGMA_Z, TAU_X, TAU_Y, TAU_Z, expm_hermitian

MODEL_LADDER = "cl"
MODEL_CHAIN = "ssh"
MODELS_1D = (MODEL_LADDER, MODEL_CHAIN)

FRAME_RAW = "raw"
FRAME_SYM1 = "sym1"
FRAME_SYM2 = "sym2"
FRAMES = (FRAME_RAW, FRAME_SYM1, FRAME_SYM2)

SECTOR_LADDER = "ladder"
SECTOR_CHAIN = "chain"
SECTOR_COMPOSITE = "composite"

CHIRAL = "chiral"
TRS = "trs"
PHS = "phs"
SYMMETRIES = (CHIRAL, TRS, PHS)


# ---------------------------------------------------------------- harmonics

def ladder_harmonics(j0, j1):
    """Hopping blocks of (j0 + j1 cos k) sigma_x + j1 sin k sigma_z."""
    return merge_harmonics(
        const_k(j0 * SIGMA_X), cos_k(j1 * SIGMA_X), sin_k(j1 * SIGMA_Z)
    )


def chain_harmonics(j0, j1):
    """Hopping blocks of (j0 + j1 cos k) tau_x + j1 sin k tau_y."""
    return merge_harmonics(
        const_k(j0 * TAU_X), cos_k(j1 * TAU_X), sin_k(j1 * TAU_Y)
    )


def _step_harmonics(p):
    """Return (A, B) harmonic maps for the two drive steps of a kicked protocol."""
    if p.protocol == KICKED_V1:
        a = const_k(p.jx0 * SIGMA_X)
        b = merge_harmonics(cos_k(p.jx1 * SIGMA_X), sin_k(p.jx1 * SIGMA_Z))
    elif p.protocol == KICKED_V2:
        a = merge_harmonics(const_k(p.jx0 * SIGMA_X), cos_k(p.jx1 * SIGMA_X))
        b = sin_k(p.jx1p * SIGMA_Z)
    else:
        raise ValueError(f"protocol {p.protocol!r} has no drive steps")
    return a, b


# ------------------------------------------------------------ Bloch builders

def bloch_hx(kx, p):
    m = (p.jx0 + p.jx1 * np.cos(kx)) * SIGMA_X + p.jx1 * np.sin(kx) * SIGMA_Z
    return BlochMatrix(k=kx, matrix=m, kind="hamiltonian")


def bloch_hy(ky, p):
    m = (p.jy0 + p.jy1 * np.cos(ky)) * TAU_X + p.jy1 * np.sin(ky) * TAU_Y
    return BlochMatrix(k=ky, matrix=m, kind="hamiltonian")


def _framed_product(ua_half, ua, ub_half, ub, frame):
    if frame == FRAME_RAW:
        return ua @ ub
    if frame == FRAME_SYM1:
        return ub_half @ ua @ ub_half
    if frame == FRAME_SYM2:
        return ua_half @ ub @ ua_half
    raise ValueError(f"unknown frame {frame!r}, expected one of {FRAMES}")


def floquet_x_bloch(kx, p, frame=FRAME_RAW):
    """One-period Bloch evolution of the driven ladder at momentum kx."""
    if not p.kicked:
        raise ValueError("floquet_x_bloch needs a kicked protocol")
    ha_blocks, hb_blocks = _step_harmonics(p)
    ha = bloch_from_harmonics(kx, ha_blocks)
    hb = bloch_from_harmonics(kx, hb_blocks)
    u = _framed_product(
        expm_hermitian(ha / 2),
        expm_hermitian(ha),
        expm_hermitian(hb / 2),
        expm_hermitian(hb),
        frame,
    )
    return BlochMatrix(k=kx, matrix=u, kind="floquet", frame=frame)


def floquet_y_bloch(ky, p):
    """Undriven chain factor exp(-i H_y(ky)) of the composite evolution."""
    return BlochMatrix(
        k=ky,
        matrix=expm_hermitian(bloch_hy(ky, p).matrix),
        kind="floquet",
        frame=FRAME_RAW,
    )


def floquet_x_bloch_batch(ks, p, frame=FRAME_RAW):
    """Vectorized floquet_x_bloch over a momentum array; returns (n, 2, 2).

    Each drive step is the exponential of a single rotated Pauli axis, so
    the factors are elementary rotations; frames only change how the two
    factors interleave.  Agrees with the scalar constructor entrywise.
    """
    if not p.kicked:
        raise ValueError("floquet_x_bloch_batch needs a kicked protocol")
    ks = np.asarray(ks, dtype=float)
    if p.protocol == KICKED_V1:
        a_angle = np.full(len(ks), float(p.jx0))
        a_axis = np.tile((1.0, 0.0, 0.0), (len(ks), 1))
        b_angle = np.full(len(ks), float(p.jx1))
        b_axis = np.stack(
            [np.cos(ks), np.zeros_like(ks), np.sin(ks)], axis=1
        )
    else:
        a_angle = p.jx0 + p.jx1 * np.cos(ks)
        a_axis = np.tile((1.0, 0.0, 0.0), (len(ks), 1))
        b_angle = p.jx1p * np.sin(ks)
        b_axis = np.tile((0.0, 0.0, 1.0), (len(ks), 1))

    def rot(angles, axes):
        out = np.empty((len(ks), 2, 2), dtype=complex)
        c, s = np.cos(angles), np.sin(angles)
        out[:, 0, 0] = c - 1j * s * axes[:, 2]
        out[:, 1, 1] = c + 1j * s * axes[:, 2]
        out[:, 0, 1] = -1j * s * (axes[:, 0] - 1j * axes[:, 1])
        out[:, 1, 0] = -1j * s * (axes[:, 0] + 1j * axes[:, 1])
        return out

    if frame == FRAME_RAW:
        return rot(a_angle, a_axis) @ rot(b_angle, b_axis)
    if frame == FRAME_SYM1:
        half = rot(b_angle / 2, b_axis)
        return half @ rot(a_angle, a_axis) @ half
    if frame == FRAME_SYM2:
        half = rot(a_angle / 2, a_axis)
        return half @ rot(b_angle, b_axis) @ half
    raise ValueError(f"unknown frame {frame!r}, expected one of {FRAMES}")


def dispersion_x(kx, p):
    """Positive quasienergy band of the driven ladder (static: energy band)."""
    kx = np.asarray(kx, dtype=float)
    if p.protocol == STATIC:
        return np.hypot(p.jx0 + p.jx1 * np.cos(kx), p.jx1 * np.sin(kx))
    if p.protocol == KICKED_V1:
        c = np.cos(p.jx0) * np.cos(p.jx1) - np.sin(p.jx0) * np.sin(p.jx1) * np.cos(kx)
    else:
        c = np.cos(p.jx0 + p.jx1 * np.cos(kx)) * np.cos(p.jx1p * np.sin(kx))
    return np.arccos(np.clip(c, -1.0, 1.0))


def dispersion_y(ky, p):
    ky = np.asarray(ky, dtype=float)
    return np.hypot(p.jy0 + p.jy1 * np.cos(ky), p.jy1 * np.sin(ky))


# ------------------------------------------------------- real-space builders

def realspace_h(model, length, bc, p):
    """Static Hamiltonian of one 1D building block on `length` unit cells."""
    if model == MODEL_LADDER:
        blocks = ladder_harmonics(p.jx0, p.jx1)
        basis = ladder_basis(length)
    elif model == MODEL_CHAIN:
        blocks = chain_harmonics(p.jy0, p.jy1)
        basis = chain_basis(length)
    else:
        raise ValueError(f"model must be one of {MODELS_1D}, got {model!r}")
    h = realspace_from_harmonics(length, blocks, bc)
    bc_x, bc_y = (bc, NOT_APPLICABLE) if model == MODEL_LADDER else (NOT_APPLICABLE, bc)
    return LatticeOperator(
        basis=basis, bc_x=bc_x, bc_y=bc_y, kind="hamiltonian", matrix_data=h,
        meta={"model": model, "length": length},
    )


def floquet_x_realspace(length, bc, p, frame=FRAME_RAW):
    """One-period real-space evolution of the driven ladder.

    Edge-mode analysis is done in the raw frame; the symmetric frames are
    unitary conjugations of it, so open-boundary eigenphases agree across
    frames while eigenvectors rotate.
    """
    if not p.kicked:
        raise ValueError("floquet_x_realspace needs a kicked protocol")
    ha_blocks, hb_blocks = _step_harmonics(p)
    ha = realspace_from_harmonics(length, ha_blocks, bc)
    hb = realspace_from_harmonics(length, hb_blocks, bc)
    u = _framed_product(
        expm_hermitian(ha / 2),
        expm_hermitian(ha),
        expm_hermitian(hb / 2),
        expm_hermitian(hb),
        frame,
    )
    return LatticeOperator(
        basis=ladder_basis(length), bc_x=bc, bc_y=NOT_APPLICABLE, kind="floquet",
        matrix_data=u, frame=frame, meta={"length": length, "protocol": p.protocol},
    )


def floquet_y_realspace(length, bc, p):
    """Chain factor exp(-i H_y) of the composite drive."""
    h = realspace_from_harmonics(length, chain_harmonics(p.jy0, p.jy1), bc)
    return LatticeOperator(
        basis=chain_basis(length), bc_x=NOT_APPLICABLE, bc_y=bc, kind="floquet",
        matrix_data=expm_hermitian(h), frame=FRAME_RAW, meta={"length": length},
    )


def realspace_h2d(lengths, bc, p):
    """Static coupled Hamiltonian H_x (x) 1 + 1 (x) H_y on lengths=(Lx, Ly) cells."""
    lx, ly = lengths
    bc_x, bc_y = bc
    hx = realspace_from_harmonics(lx, ladder_harmonics(p.jx0, p.jx1), bc_x)
    hy = realspace_from_harmonics(ly, chain_harmonics(p.jy0, p.jy1), bc_y)
    h = np.kron(hx, np.eye(2 * ly)) + np.kron(np.eye(2 * lx), hy)
    return LatticeOperator(
        basis=combine_bases(ladder_basis(lx), chain_basis(ly)),
        bc_x=bc_x, bc_y=bc_y, kind="hamiltonian", matrix_data=h,
        meta={"lengths": (lx, ly)},
    )


def floquet_2d(ux, uy):
    """Compose the driven ladder with the chain factor, x-outer ordering.

    LatticeOperator inputs give a lazily materialized Kronecker product that
    keeps its factors for the fast spectral path; BlochMatrix inputs give the
    dense 4x4 product.
    """
    if isinstance(ux, BlochMatrix) and isinstance(uy, BlochMatrix):
        return BlochMatrix(
            k=(ux.k, uy.k), matrix=np.kron(ux.matrix, uy.matrix),
            kind="floquet", frame=ux.frame,
        )
    if not (isinstance(ux, LatticeOperator) and isinstance(uy, LatticeOperator)):
        raise TypeError("floquet_2d needs two LatticeOperators or two BlochMatrix")
    if ux.kind != "floquet" or uy.kind != "floquet":
        raise ValueError("floquet_2d needs unitary (floquet) factors")
    return LatticeOperator(
        basis=combine_bases(ux.basis, uy.basis),
        bc_x=ux.bc_x, bc_y=uy.bc_y, kind="floquet",
        factors=(ux, uy), frame=ux.frame,
        meta={"factorized": True},
    )


def clean_floquet_2d(lengths, bc, p, frame=FRAME_RAW):
    """Convenience: full composite operator for a kicked protocol."""
    lx, ly = lengths
    bc_x, bc_y = bc
    return floquet_2d(
        floquet_x_realspace(lx, bc_x, p, frame=frame),
        floquet_y_realspace(ly, bc_y, p),
    )


# ------------------------------------------------------- symmetry machinery

_SECTOR_BLOCKS = {
    SECTOR_LADDER: {CHIRAL: SIGMA_Y, TRS: SIGMA_X, PHS: SIGMA_Z},
    SECTOR_CHAIN: {CHIRAL: TAU_Z, TRS: ID2, PHS: TAU_Z},
    SECTOR_COMPOSITE: {
        CHIRAL: np.kron(SIGMA_Y, TAU_Z),
        TRS: np.kron(SIGMA_X, ID2),
        PHS: np.kron(SIGMA_Z, TAU_Z),
    },
}


def symmetry_operator(which, sector, cells):
    """Block-diagonal unitary implementing the symmetry on `cells` repeats.

    `cells` counts unit cells (composite sector: pairs of x/y cells), so the
    returned matrix has dimension cells * blockdim.
    """
    try:
        block = _SECTOR_BLOCKS[sector][which]
    except KeyError:
        raise ValueError(f"no {which!r} operator for sector {sector!r}") from None
    return np.kron(np.eye(cells), block)


def _sector_of_basis(basis):
    first = basis[0]
    if hasattr(first, "sub_x"):
        return SECTOR_COMPOSITE
    return SECTOR_LADDER if first.sub in ("u", "v") else SECTOR_CHAIN


def _composite_symmetry(which, lx, ly):
    # kron(ladder rep, chain rep) keeps the x-outer ordering of the basis
    sx = symmetry_operator(which, SECTOR_LADDER, lx)
    sy = symmetry_operator(which, SECTOR_CHAIN, ly)
    return np.kron(sx, sy)


def check_symmetries(opr, which, frame=None, sector=None):
    """Max-abs residual of the defining symmetry relation.

    Hamiltonians: chiral/phs anticommute (S H S = -H with conjugation for
    phs), trs commutes under conjugation.  Floquet operators: chiral maps
    S U S = U^dagger; trs maps U to U^dagger under conjugation; phs leaves
    U fixed.  Anti-unitary relations (trs, phs) need the real-space matrix,
    where complex conjugation implements k -> -k; they are rejected for
    single-k Bloch input.
    """
    if which not in SYMMETRIES:
        raise ValueError(f"unknown symmetry {which!r}")
    if isinstance(opr, BlochMatrix):
        if which != CHIRAL:
            raise ValueError(
                f"{which} is anti-unitary; check it on a real-space operator"
            )
        if sector is None:
            if opr.dim == 4:
                sector = SECTOR_COMPOSITE
            else:
                raise ValueError("2x2 Bloch input needs an explicit sector")
        s = symmetry_operator(which, sector, 1)
        u = opr.matrix
        kind = opr.kind
    elif isinstance(opr, LatticeOperator):
        if sector is None:
            sector = _sector_of_basis(opr.basis)
        if sector == SECTOR_COMPOSITE:
            lx = 1 + max(lbl.cell_x for lbl in opr.basis)
            ly = 1 + max(lbl.cell_y for lbl in opr.basis)
            s = _composite_symmetry(which, lx, ly)
        else:
            s = symmetry_operator(which, sector, len(opr.basis) // 2)
        u = opr.matrix
        kind = opr.kind
    else:
        raise TypeError("expected LatticeOperator or BlochMatrix")

    if frame is not None and getattr(opr, "frame", None) not in (None, frame):
        raise ValueError(f"operator was built in frame {opr.frame!r}, not {frame!r}")

    if kind == "hamiltonian":
        if which == CHIRAL:
            r = s @ u @ s.conj().T + u
        elif which == TRS:
            r = s @ u.conj() @ s.conj().T - u
        else:
            r = s @ u.conj() @ s.conj().T + u
    else:
        if which == CHIRAL:
            r = s @ u @ s.conj().T - u.conj().T
        elif which == TRS:
            r = s @ u.conj() @ s.conj().T - u.conj().T
        else:
            r = s @ u.conj() @ s.conj().T - u
    return float(np.abs(r).max())
