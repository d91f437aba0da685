"""Closed-form edge and corner modes against the numeric operators."""

import numpy as np
import pytest

from clssh.lattice import OPEN
from clssh.models import (
    MODEL_CHAIN,
    MODEL_LADDER,
    clean_floquet_2d,
    floquet_x_realspace,
    realspace_h,
    realspace_h2d,
)
from clssh.modes import (
    CORNERS,
    SIDE_BOTTOM,
    SIDE_LEFT,
    SIDE_RIGHT,
    SIDE_TOP,
    TARGET_PI,
    TARGET_ZERO,
    corner_mode,
    corner_mode_set,
    kicked_edge_mode,
    orthonormalize,
    static_edge_mode,
    subspace_overlap,
)
from clssh.params import (
    ModelParams,
    KICKED_V1,
    KICKED_V2,
    STATIC,
    params_from_angles,
)
from clssh.spectral import eig_hermitian, eig_unitary

PS = ModelParams(jx0=0.5, jx1=1.0, jy0=0.5, jy1=1.0, protocol=STATIC)
PK = params_from_angles(2 * np.pi / 3, np.pi)  # gapped, corner modes at zero


def test_static_chain_edge_modes_are_eigenvectors():
    L = 40
    h = realspace_h(MODEL_CHAIN, L, OPEN, PS).matrix
    for side in (SIDE_BOTTOM, SIDE_TOP):
        mode, vec = static_edge_mode(MODEL_CHAIN, side, PS, L)
        assert mode.normalizable
        assert mode.decay_y == pytest.approx(-PS.jy0 / PS.jy1)
        assert np.linalg.norm(h @ vec) < 1e-10  # zero mode up to truncation


def test_static_ladder_edge_modes_are_eigenvectors():
    L = 40
    h = realspace_h(MODEL_LADDER, L, OPEN, PS).matrix
    for side in (SIDE_LEFT, SIDE_RIGHT):
        mode, vec = static_edge_mode(MODEL_LADDER, side, PS, L)
        assert mode.normalizable
        assert np.linalg.norm(h @ vec) < 1e-10


def test_static_edge_sublattice_structure():
    mode, vec = static_edge_mode(MODEL_CHAIN, SIDE_BOTTOM, PS, 30)
    # first-sublattice polarized: every second amplitude vanishes
    assert np.allclose(vec[1::2], 0.0, atol=1e-15)
    mode, vec = static_edge_mode(MODEL_CHAIN, SIDE_TOP, PS, 30)
    assert np.allclose(vec[0::2], 0.0, atol=1e-15)


def test_kicked_edge_modes_are_floquet_eigenvectors():
    L = 40
    u = floquet_x_realspace(L, OPEN, PK).matrix
    for target, eig in ((TARGET_ZERO, 1.0), (TARGET_PI, -1.0)):
        for side in (SIDE_LEFT, SIDE_RIGHT):
            mode, vec = kicked_edge_mode(side, target, PK, L)
            if not mode.normalizable:
                continue
            assert np.linalg.norm(u @ vec - eig * vec) < 1e-9


def test_kicked_decay_factors_closed_form():
    h0, h1 = PK.jx0 / 2, PK.jx1 / 2
    r0 = -np.sin(h0) * np.cos(h1) / (np.cos(h0) * np.sin(h1))
    rpi = np.cos(h0) * np.cos(h1) / (np.sin(h0) * np.sin(h1))
    m0, _ = kicked_edge_mode(SIDE_LEFT, TARGET_ZERO, PK, 20)
    mpi, _ = kicked_edge_mode(SIDE_LEFT, TARGET_PI, PK, 20)
    assert m0.decay_x == pytest.approx(r0, abs=1e-12)
    assert mpi.decay_x == pytest.approx(rpi, abs=1e-12)


def test_normalizability_boundary():
    # past criticality the formal decay factor leaves the unit disk;
    # the finite-lattice profile is still returned, flagged as such
    trivial = ModelParams(jx0=1.0, jx1=0.5, jy0=0.5, jy1=1.0, protocol=STATIC)
    mode, vec = static_edge_mode(MODEL_LADDER, SIDE_LEFT, trivial, 10)
    assert not mode.normalizable
    assert mode.decay_x == pytest.approx(-2.0)
    assert vec is not None


def test_corner_mode_is_kron_of_edges():
    lengths = (12, 12)
    mode, vec = corner_mode("LB", TARGET_ZERO, PS, lengths)
    _, vx = static_edge_mode(MODEL_LADDER, SIDE_LEFT, PS, 12)
    _, vy = static_edge_mode(MODEL_CHAIN, SIDE_BOTTOM, PS, 12)
    ref = np.kron(vx, vy)
    ref = ref / np.linalg.norm(ref)
    phase = np.vdot(ref, vec)
    assert np.abs(np.abs(phase) - 1) < 1e-12
    assert np.linalg.norm(vec - phase * ref) < 1e-12


def test_static_corner_modes_annihilated():
    # truncation bounds the residual by ~|decay|^L = 0.5^26
    lengths = (26, 26)
    h = realspace_h2d(lengths, (OPEN, OPEN), PS).matrix
    modes, vecs = corner_mode_set(TARGET_ZERO, PS, lengths)
    assert len(vecs) == 4
    for vec in vecs:
        assert np.linalg.norm(h @ vec) < 1e-7


def test_kicked_corner_modes_are_floquet_eigenvectors():
    lengths = (20, 20)
    u = clean_floquet_2d(lengths, (OPEN, OPEN), PK).matrix
    modes, vecs = corner_mode_set(TARGET_ZERO, PK, lengths)
    for vec in vecs:
        assert np.linalg.norm(u @ vec - vec) < 1e-8


def test_corner_set_is_orthonormal():
    _, vecs = corner_mode_set(TARGET_ZERO, PS, (10, 10))
    g = np.array([[np.vdot(a, b) for b in vecs] for a in vecs])
    assert np.allclose(g, np.eye(4), atol=1e-12)


def test_corner_set_raises_when_absent():
    trivial = ModelParams(jx0=1.0, jx1=0.5, jy0=0.5, jy1=1.0, protocol=STATIC)
    with pytest.raises(ValueError):
        corner_mode_set(TARGET_ZERO, trivial, (10, 10))


def test_v2_has_no_closed_form():
    p = ModelParams(jx0=np.pi / 2, jx1=1.5 * np.pi, jy0=np.pi / 4,
                    jy1=3 * np.pi / 4, jx1p=np.pi / 2, protocol=KICKED_V2)
    with pytest.raises(ValueError):
        corner_mode(CORNERS[0], TARGET_ZERO, p, (10, 10))


def test_orthonormalize_preserves_span():
    rng = np.random.default_rng(5)
    raw = [rng.normal(size=8) + 1j * rng.normal(size=8) for _ in range(3)]
    out = orthonormalize(raw)
    g = np.array([[np.vdot(a, b) for b in out] for a in out])
    assert np.allclose(g, np.eye(3), atol=1e-12)
    # same span: projecting the originals onto the new set loses nothing
    basis = np.column_stack(out)
    for v in raw:
        proj = basis @ (basis.conj().T @ v)
        assert np.linalg.norm(proj - v) < 1e-10


def test_subspace_overlap_accepts_and_rejects():
    lengths = (12, 12)
    s = eig_hermitian(realspace_h2d(lengths, (OPEN, OPEN), PS))
    _, vecs = corner_mode_set(TARGET_ZERO, PS, lengths)
    ov = subspace_overlap(vecs, s, 0.0, 1e-2)
    assert ov > 1 - 1e-6
    with pytest.raises(ValueError):
        subspace_overlap([], s, 0.0, 1e-2)
    # a window too narrow to hold four states
    with pytest.raises(ValueError):
        subspace_overlap(vecs, s, 2.0, 1e-12)
