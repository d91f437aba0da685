"""Eigensolvers, folding, gaps, and the factorized fast path."""

import numpy as np
import pytest

import oracles
from clssh.lattice import OPEN, PERIODIC, LatticeOperator
from clssh.models import clean_floquet_2d, realspace_h2d
from clssh.params import ModelParams, KICKED_V1, KICKED_V2, STATIC
from clssh.spectral import (
    circle_distance,
    count_modes,
    default_ipr_min,
    eig_hermitian,
    eig_unitary,
    fold_phases,
    gaps,
    ipr,
    mixed_bc_spectrum,
)

P1 = ModelParams(jx0=0.9, jx1=2.1, jy0=0.7, jy1=2.3, protocol=KICKED_V1)
P2 = ModelParams(jx0=0.9, jx1=2.1, jy0=0.7, jy1=2.3, jx1p=0.8,
                 protocol=KICKED_V2)


def test_fold_phases_range_and_fixed_points():
    x = np.array([0.0, np.pi, -np.pi, 3.5 * np.pi, -2 * np.pi])
    f = fold_phases(x)
    assert np.all(f >= -np.pi) and np.all(f < np.pi)
    assert f[0] == 0.0
    assert f[1] == -np.pi  # pi folds to the left endpoint
    assert np.isclose(f[3], -0.5 * np.pi)


def test_circle_distance_wraps():
    assert circle_distance(np.pi - 0.01, -np.pi + 0.01) == pytest.approx(0.02)
    assert circle_distance(0.3, 0.3) == 0.0


def test_ipr_extremes():
    v = np.zeros(64)
    v[5] = 1.0
    assert ipr(v) == pytest.approx(1.0)
    u = np.full(64, 1 / 8.0)
    assert ipr(u) == pytest.approx(1 / 64)


def test_eig_unitary_against_numpy():
    s = eig_unitary(clean_floquet_2d((3, 3), (OPEN, OPEN), P1))
    w = np.linalg.eigvals(
        clean_floquet_2d((3, 3), (OPEN, OPEN), P1).matrix)
    assert np.allclose(
        np.sort(s.phases), np.sort(fold_phases(-np.angle(w))), atol=1e-12)


def test_eigenvector_residual_and_eigenvalue_convention():
    s = eig_unitary(clean_floquet_2d((3, 2), (OPEN, OPEN), P2))
    u = clean_floquet_2d((3, 2), (OPEN, OPEN), P2).matrix
    for i in (0, 5, len(s.phases) - 1):
        v = s.vector(i)
        assert np.linalg.norm(
            u @ v - np.exp(-1j * s.phases[i]) * v) < 1e-10


def test_factorized_path_matches_dense_path():
    """Kron recipe: phases, iprs, and vectors against materialization."""
    for p in (P1, P2):
        fac = clean_floquet_2d((4, 3), (OPEN, PERIODIC), p)
        dense = LatticeOperator(
            basis=fac.basis, bc_x=fac.bc_x, bc_y=fac.bc_y,
            kind="floquet", matrix_data=fac.matrix, frame=fac.frame,
        )
        sf = eig_unitary(fac)
        sd = eig_unitary(dense)
        of, od = np.argsort(sf.phases), np.argsort(sd.phases)
        pf = sf.phases[of]
        assert np.allclose(pf, sd.phases[od], atol=1e-11)
        # IPRs are basis-dependent inside degenerate clusters; compare
        # them only where the eigenvalue is isolated.
        spacing = np.minimum(
            np.abs(np.diff(pf, prepend=pf[0] - 1)),
            np.abs(np.diff(pf, append=pf[-1] + 1)),
        )
        isolated = spacing > 1e-6
        assert isolated.sum() > 10
        assert np.allclose(
            sf.iprs[of][isolated], sd.iprs[od][isolated], atol=1e-9)
        i = int(np.argmax(sf.iprs))
        v = sf.vector(i)
        assert np.linalg.norm(
            fac.matrix @ v - np.exp(-1j * sf.phases[i]) * v) < 1e-9


def test_quasienergy_pairing():
    # chiral pairing: the folded multiset is symmetric under negation
    s = eig_unitary(clean_floquet_2d((4, 4), (OPEN, OPEN), P1))
    assert np.allclose(
        np.sort(s.phases), np.sort(-fold_phases(-np.sort(s.phases))),
        atol=1e-10)


def test_eig_hermitian_static():
    ps = ModelParams(jx0=0.5, jx1=1.0, jy0=0.5, jy1=1.0, protocol=STATIC)
    s = eig_hermitian(realspace_h2d((3, 3), (OPEN, OPEN), ps))
    assert np.allclose(
        np.sort(s.energies), oracles.STATIC2D_33_ENERGIES, atol=1e-12)
    assert np.allclose(np.sort(s.energies), -np.sort(s.energies)[::-1],
                       atol=1e-12)


def test_gaps_and_counting():
    s = eig_unitary(clean_floquet_2d((4, 4), (OPEN, OPEN), P1))
    g = gaps(s)
    assert g.gap0 == pytest.approx(
        float(np.min(np.abs(s.phases))), abs=1e-15)
    assert g.gap_pi == pytest.approx(
        float(np.min(circle_distance(s.phases, np.pi))), abs=1e-15)
    n_all = count_modes(s, 0.0, np.pi + 0.1, ipr_min=0.0)
    assert n_all == len(s.phases)


def test_default_ipr_min_is_ten_medians():
    s = eig_unitary(clean_floquet_2d((4, 4), (OPEN, OPEN), P1))
    assert default_ipr_min(s) == pytest.approx(10 * float(np.median(s.iprs)))


def test_mixed_bc_matches_dense():
    for p in (P1, P2):
        for bc in ((PERIODIC, OPEN), (OPEN, PERIODIC)):
            sm = mixed_bc_spectrum(p, bc[0], bc[1], (4, 3))
            sd = eig_unitary(clean_floquet_2d((4, 3), bc, p))
            assert np.allclose(
                np.sort(sm.phases), np.sort(sd.phases), atol=1e-10)


def test_mixed_bc_rejects_uniform_bc():
    with pytest.raises(ValueError):
        mixed_bc_spectrum(P1, OPEN, OPEN, (4, 3))
