"""Closed-form edge and corner eigenmodes of the clean models.

Each construction solves the half-infinite boundary difference equation
exactly and truncates the geometric profile to a finite lattice.  The
truncation error of the defining eigen-relation therefore scales as
|decay|^length: residuals are only meaningful once that factor is below
the target tolerance, and a non-normalizable mode (|decay| >= 1) yields
a vector that is formally correct but numerically useless.

Driven-ladder modes are eigenvectors of the plain two-step evolution
(no symmetric reshuffling of the period): eigenvalue +1 for the zero
mode and -1 for the pi mode.  Corner modes are Kronecker products of a
ladder mode along x and the chain zero mode along y, in the package's
x-outer index ordering.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import models as _models
from .params import KICKED_V1, STATIC

SIDE_LEFT = "L"
SIDE_RIGHT = "R"
SIDE_BOTTOM = "B"
SIDE_TOP = "T"
LADDER_SIDES = (SIDE_LEFT, SIDE_RIGHT)
CHAIN_SIDES = (SIDE_BOTTOM, SIDE_TOP)

# fixed construction (and orthogonalization) order for the degenerate set
CORNERS = ("LB", "LT", "RB", "RT")

TARGET_ZERO = 0.0
TARGET_PI = np.pi

_INV_SQRT2 = math.sqrt(0.5)


@dataclass(frozen=True)
class AnalyticMode:
    corner_or_edge: str
    target_quasienergy: float
    decay_x: float | None
    decay_y: float | None
    sublattice_amplitudes: dict
    normalizable: bool


def _check_target(target):
    if target not in (TARGET_ZERO, TARGET_PI):
        raise ValueError(f"target quasienergy must be 0 or pi, got {target!r}")


def _decay_ratio(num, den):
    if den == 0.0:
        if num == 0.0:
            raise ValueError("0/0 decay ratio: degenerate couplings")
        return math.inf
    return num / den


def _geometric_profile(decay, cells, anchor_low):
    """Signed profile decay^m from the anchored end, peak-scaled to 1.

    Scaling relative to the largest entry keeps |decay| > 1 free of
    overflow; the subsequent normalization removes the scale anyway.
    """
    m = np.arange(cells)
    if not anchor_low:
        m = m[::-1]
    a = abs(decay)
    if a == 0.0:
        mag = (m == 0).astype(float)
    elif a <= 1.0:
        mag = a ** m
    else:
        mag = a ** (m - (cells - 1))
    if decay < 0:
        mag = mag * (-1.0) ** m
    return mag


def _mode_vector(decay, amps, cells, anchor_low):
    if cells < 1:
        raise ValueError("need at least one cell")
    if not math.isfinite(decay):
        return None
    prof = _geometric_profile(decay, cells, anchor_low)
    vec = np.kron(prof, np.asarray(amps, dtype=complex))
    return vec / np.linalg.norm(vec)


def static_edge_mode(model, side, p, length):
    """Zero-energy edge mode of a static 1D model on `length` cells.

    Ladder: the legs combine as (u - iv)/sqrt(2) on the left edge and
    (u + iv)/sqrt(2) on the right, with cell ratio -jx0/jx1.  Chain:
    the mode occupies a single sublattice, first one from the bottom
    and second one from the top, with cell ratio -jy0/jy1.  Returns
    (AnalyticMode, vector); the vector is an exact annihilated state of
    the open-boundary Hamiltonian up to the |decay|^length truncation
    tail, and is normalizable iff the outer coupling dominates.
    """
    if model == _models.MODEL_LADDER:
        if side not in LADDER_SIDES:
            raise ValueError(f"ladder edge modes sit at L or R, got {side!r}")
        j0, j1 = p.jx0, p.jx1
    elif model == _models.MODEL_CHAIN:
        if side not in CHAIN_SIDES:
            raise ValueError(f"chain edge modes sit at B or T, got {side!r}")
        j0, j1 = p.jy0, p.jy1
    else:
        raise ValueError(f"unknown model {model!r}")
    if j1 == 0:
        raise ValueError("zero inter-cell coupling: no edge construction")

    decay = -j0 / j1
    if model == _models.MODEL_LADDER:
        amps = (
            (_INV_SQRT2, -1j * _INV_SQRT2)
            if side == SIDE_LEFT
            else (_INV_SQRT2, 1j * _INV_SQRT2)
        )
    else:
        amps = (1.0, 0.0) if side == SIDE_BOTTOM else (0.0, 1.0)
    anchor_low = side in (SIDE_LEFT, SIDE_BOTTOM)
    axis = "x" if model == _models.MODEL_LADDER else "y"
    mode = AnalyticMode(
        corner_or_edge=side,
        target_quasienergy=TARGET_ZERO,
        decay_x=decay if axis == "x" else None,
        decay_y=decay if axis == "y" else None,
        sublattice_amplitudes={axis: amps},
        normalizable=abs(decay) < 1.0,
    )
    return mode, _mode_vector(decay, amps, length, anchor_low)


def kicked_edge_mode(side, target, p, length):
    """Edge eigenmode of the two-step driven ladder at quasienergy 0 or pi.

    Decay factors are -tan(jx0/2)/tan(jx1/2) for the zero mode and
    1/(tan(jx0/2) tan(jx1/2)) for the pi mode, evaluated through
    half-angle sine/cosine products so tangent poles come out as an
    infinite ratio (not normalizable) instead of a numerical pole.
    The leg amplitudes mix the legs through the two half-angle
    combinations (cos(jx0/2) -+ sin(jx0/2))/sqrt(2).
    """
    if p.protocol != KICKED_V1:
        raise ValueError("closed-form driven edge modes exist for kicked_v1 only")
    if side not in LADDER_SIDES:
        raise ValueError(f"driven edge modes sit at L or R, got {side!r}")
    _check_target(target)

    s0, c0 = math.sin(p.jx0 / 2), math.cos(p.jx0 / 2)
    s1, c1 = math.sin(p.jx1 / 2), math.cos(p.jx1 / 2)
    rho = (c0 - s0) * _INV_SQRT2
    lam = (c0 + s0) * _INV_SQRT2
    if target == TARGET_ZERO:
        decay = _decay_ratio(-s0 * c1, c0 * s1)
        amps = (rho, -1j * lam) if side == SIDE_LEFT else (lam, 1j * rho)
    else:
        decay = _decay_ratio(c0 * c1, s0 * s1)
        amps = (lam, 1j * rho) if side == SIDE_LEFT else (rho, -1j * lam)

    mode = AnalyticMode(
        corner_or_edge=side,
        target_quasienergy=target,
        decay_x=decay,
        decay_y=None,
        sublattice_amplitudes={"x": amps},
        normalizable=abs(decay) < 1.0,
    )
    return mode, _mode_vector(decay, amps, length, side == SIDE_LEFT)


def corner_mode(corner, target, p, lengths):
    """Corner eigenmode of the 2D model as a product of 1D edge modes.

    The x factor is the ladder mode at `target` (static ladders only
    carry a zero mode) and the y factor is the chain zero mode, so the
    product is an eigenvector of the composite evolution at exactly
    `target`.  Normalizable iff both factors are.
    """
    if corner not in CORNERS:
        raise ValueError(f"corner must be one of {CORNERS}, got {corner!r}")
    _check_target(target)
    lx, ly = lengths

    if p.protocol == STATIC:
        if target != TARGET_ZERO:
            raise ValueError("static corner modes exist at zero energy only")
        mx, vx = static_edge_mode(_models.MODEL_LADDER, corner[0], p, lx)
    elif p.protocol == KICKED_V1:
        mx, vx = kicked_edge_mode(corner[0], target, p, lx)
    else:
        raise ValueError(
            "no closed-form corner construction for this protocol; "
            "use the numeric spectrum instead"
        )
    my, vy = static_edge_mode(_models.MODEL_CHAIN, corner[1], p, ly)

    amps = dict(mx.sublattice_amplitudes)
    amps.update(my.sublattice_amplitudes)
    mode = AnalyticMode(
        corner_or_edge=corner,
        target_quasienergy=target,
        decay_x=mx.decay_x,
        decay_y=my.decay_y,
        sublattice_amplitudes=amps,
        normalizable=mx.normalizable and my.normalizable,
    )
    vec = None if vx is None or vy is None else np.kron(vx, vy)
    return mode, vec


def corner_mode_set(target, p, lengths):
    """All four corner modes at `target`, orthonormalized in CORNERS order.

    Gram-Schmidt runs in the fixed order LB, LT, RB, RT so that small
    lattices (where the exponential tails overlap) produce a
    deterministic orthonormal set.  Raises if any corner fails to
    produce a normalizable vector: the construction is fourfold
    degenerate or absent.
    """
    modes, vectors = [], []
    for corner in CORNERS:
        mode, vec = corner_mode(corner, target, p, lengths)
        if not mode.normalizable or vec is None:
            raise ValueError(
                f"corner {corner} has no normalizable mode at target {target}"
            )
        modes.append(mode)
        vectors.append(vec)
    return modes, orthonormalize(vectors)


def orthonormalize(vectors, dependence_tol=1e-12):
    """Gram-Schmidt in the given order; rejects linearly dependent input."""
    out = []
    for i, v in enumerate(vectors):
        w = np.asarray(v, dtype=complex).copy()
        for u in out:
            w = w - u * (u.conj() @ w)
        n = np.linalg.norm(w)
        if n < dependence_tol:
            raise ValueError(f"vector {i} is linearly dependent on its precursors")
        out.append(w / n)
    return out


def subspace_overlap(analytic, numeric, target, eps_tol):
    """Minimum principal-angle cosine between analytic and numeric subspaces.

    `analytic` is an orthonormal list (see orthonormalize); the numeric
    side is every eigenvector of the spectrum within eps_tol of the
    target on the circle.  Returns the smallest singular value of the
    cross-overlap matrix: 1 means the analytic set lies entirely inside
    the numeric eigenspace.
    """
    if not analytic:
        raise ValueError("empty analytic set")
    idx = numeric.indices_near(target, eps_tol)
    if len(idx) < len(analytic):
        raise ValueError(
            f"numeric subspace at {target} has dimension {len(idx)}, "
            f"smaller than the analytic set ({len(analytic)})"
        )
    a = np.column_stack([np.asarray(v, dtype=complex) for v in analytic])
    b = np.column_stack([numeric.vector(i) for i in idx])
    overlap = a.conj().T @ b
    return float(np.linalg.svd(overlap, compute_uv=False).min())
