"""Acceptance gate: the headline claims of the library, each as one test.

Every function checks one end-to-end statement at its stated tolerance,
so a verbose pytest run reads as one pass/fail line per claim.  Slow
dense diagonalizations are confined to the robustness check; everything
else rides the factorized spectral path.
"""

import numpy as np
import pytest

import oracles
from clssh.params import ModelParams, params_from_angles, KICKED_V1, KICKED_V2, STATIC
from clssh.models import (
    CHIRAL,
    FRAME_SYM1,
    FRAME_SYM2,
    MODEL_CHAIN,
    MODEL_LADDER,
    SECTOR_COMPOSITE,
    check_symmetries,
    clean_floquet_2d,
    realspace_h,
)
from clssh.lattice import OPEN, unitarity_residual
from clssh import spectral as sp
from clssh import invariants as inv
from clssh import modes
from clssh.perturbations import Perturbation
from clssh import experiments as ex

PI = np.pi
JY_REF = dict(jy0=0.25 * PI, jy1=0.75 * PI)


def _v1(jx0, jx1):
    return ModelParams(jx0=jx0, jx1=jx1, protocol=KICKED_V1, **JY_REF)


def test_static_models_host_two_edge_and_four_corner_zero_modes():
    # 1d chains, 200 cells: raw zero-eigenvalue count, splitting ~ 0.5^200
    for model, topo, triv in (
        (MODEL_CHAIN, dict(jy0=0.5, jy1=1.0), dict(jy0=1.0, jy1=0.5)),
        (MODEL_LADDER, dict(jx0=0.5, jx1=1.0), dict(jx0=1.0, jx1=0.5)),
    ):
        for kw, expected in ((topo, 2), (triv, 0)):
            p = ModelParams(jx0=0.5, jx1=1.0, jy0=0.5, jy1=1.0, protocol=STATIC).with_(**kw)
            s = sp.eig_hermitian(realspace_h(model, 200, OPEN, p))
            n = int(np.count_nonzero(np.abs(s.energies) < 1e-8))
            assert n == expected, f"{model} {kw}: {n} zero modes, wanted {expected}"
    # 2d composite, 16x16 cells: corner-concentrated count (the identical
    # sector spectra also produce extended accidental zeros, which the
    # quadrant filter must reject); the ladder-critical point jx0 = jx1
    # is the negative control
    p_top = ModelParams(jx0=0.5, jx1=1.0, jy0=0.5, jy1=1.0, protocol=STATIC)
    p_crit = ModelParams(jx0=1.0, jx1=1.0, jy0=0.5, jy1=1.0, protocol=STATIC)
    counts_top, _ = ex.observed_mode_counts(p_top, (16, 16))
    counts_crit, _ = ex.observed_mode_counts(p_crit, (16, 16))
    assert counts_top == (4, 0), counts_top
    assert counts_crit == (0, 0), counts_crit


def test_invariant_routes_agree_across_the_gapped_coupling_plane():
    # 64x64 interior grid: closed-form table, zero/pole count, and the
    # rounded winding pair must coincide on every gapped point
    values = np.linspace(0.0, 2 * PI, 66)[1:-1]
    n_gapped = 0
    for jx0 in values:
        for jx1 in values:
            p = _v1(jx0, jx1)
            if inv.gap_closing_locus(p).flag != inv.GAPPED:
                continue
            n_gapped += 1
            table = inv.closed_form_kicked_table(p)
            f1 = inv.build_mapping(inv.PROV_KICKED_F1X, p)
            f2 = inv.build_mapping(inv.PROV_KICKED_F2X, p)
            o1 = inv.zero_pole_invariant(f1, inv.GAPPED)
            o2 = inv.zero_pole_invariant(f2, inv.GAPPED)
            zp = (abs(o1 + o2) // 2, abs(o1 - o2) // 2)
            assert zp == table, f"zero/pole {zp} vs table {table} at ({jx0}, {jx1})"
            w1 = inv.refined_winding(inv.PROV_KICKED_F1X, p, FRAME_SYM1)
            w2 = inv.refined_winding(inv.PROV_KICKED_F2X, p, FRAME_SYM2)
            wind = (abs(round(w1 + w2)) // 2, abs(round(w1 - w2)) // 2)
            assert wind == table, f"winding {wind} vs table {table} at ({jx0}, {jx1})"
    assert n_gapped > 3000, f"grid almost entirely critical? {n_gapped} gapped"
    # worked reference points, including every closing-flag kind
    for jx0, jx1, omega, flag in (
        (PI / 3, PI / 3, (0, 0), inv.ZERO_CLOSING),
        (2 * PI / 3, 2 * PI / 3, (0, 1), inv.ZERO_CLOSING),
        (PI / 3, 2 * PI / 3, (1, 0), inv.PI_CLOSING),
        (PI / 2, PI / 2, (0, 0), inv.BOTH_CLOSING),
        (PI / 2, PI, (1, 1), inv.GAPPED),
    ):
        rep = inv.kicked_invariants(_v1(jx0, jx1))
        assert rep.omega_pair == omega, (jx0, jx1, rep.omega_pair)
        assert rep.closing_flag == flag, (jx0, jx1, rep.closing_flag)


def test_angle_plane_shows_four_regions_with_pinned_composite_gaps():
    values = np.linspace(0.0, 2 * PI, 41)
    grid = ex.scan_phase_diagram(("theta", "phi"), (values, values),
                                 params_from_angles(0.0, 0.0))
    assert grid.omega_tuples() == {(0, 0), (0, 1), (1, 0), (1, 1)}
    # the composite quasienergy gaps vanish identically over the plane:
    # transitions are visible only through the invariant pair
    assert float(np.max(grid.gap_zero)) < 1e-9
    assert float(np.max(grid.gap_pi)) < 1e-9
    # every detected boundary midpoint lies within one grid step of a
    # known transition line
    step = values[1] - values[0]
    ticks_t = np.array([PI / 4, 3 * PI / 4, 5 * PI / 4, 7 * PI / 4])
    ticks_p = np.array([PI / 2, 3 * PI / 2])
    boundary = grid.boundary_points()
    assert len(boundary) > 0
    for theta, phi in boundary:
        d = min(np.abs(ticks_t - theta).min(), np.abs(ticks_p - phi).min())
        assert d < step, f"boundary point ({theta}, {phi}) off the lines by {d}"


def test_corner_mode_quartets_and_bulk_corner_correspondence():
    lengths = (20, 20)
    for theta, target in ((0.75 * PI, 0.0), (1.25 * PI, PI)):
        p = params_from_angles(theta, PI)
        s = ex.clean_spectrum(p, (OPEN, OPEN), lengths)
        raw = np.flatnonzero(sp.circle_distance(s.phases, target) < 1e-8)
        assert len(raw) == 4, f"theta={theta}: {len(raw)} states within 1e-8"
        ipr_min = sp.default_ipr_min(s)
        assert all(s.iprs[i] > ipr_min for i in raw)
        records = ex.corner_mode_vectors(s, target, 1e-8, ipr_min, lengths)
        assert {r.corner for r in records} == {"LB", "LT", "RB", "RT"}
        assert min(r.weight for r in records) >= 0.9
        # the complementary channel is critical: its gap collapses with size
        g = sp.gaps(s)
        closing_gap = g.gap_pi if target == 0.0 else g.gap0
        assert closing_gap < 0.05
        counts, _ = ex.observed_mode_counts(p, lengths)
        assert counts == ((4, 0) if target == 0.0 else (0, 4))
    verdicts = ex.verify_bcc()
    expected = ((4, 0), (4, 4), (0, 4), (0, 0), (0, 0),
                (4, 0), (0, 4), (0, 0), (0, 0))
    assert tuple(v.observed for v in verdicts) == expected
    assert all(v.passed for v in verdicts)


def test_closed_form_corner_modes_span_the_numeric_eigenspaces():
    lengths = (20, 20)
    for theta, target, floor in (
        (0.75 * PI, 0.0, 1.0 - 1e-4),
        (1.25 * PI, PI, 1.0 - 1e-4),
        (2 * PI / 3, 0.0, 1.0 - 1e-6),
    ):
        p = params_from_angles(theta, PI)
        _, vectors = modes.corner_mode_set(target, p, lengths)
        s = ex.clean_spectrum(p, (OPEN, OPEN), lengths)
        overlap = modes.subspace_overlap(vectors, s, target, 1e-2)
        assert overlap > floor, f"theta={theta}: overlap {overlap} <= {floor}"


def test_second_protocol_critical_lines_carry_multiple_quartets():
    def v2(jx1):
        return ModelParams(jx0=0.5 * PI, jx1=jx1, jx1p=0.5 * PI,
                           protocol=KICKED_V2, **JY_REF)

    # simultaneous closings with exactly degenerate dispersion gaps
    for jx1, omega in ((0.5 * PI, (0, 0)), (1.5 * PI, (1, 1)), (2.5 * PI, (2, 2))):
        rep = inv.kicked_invariants(v2(jx1))
        assert rep.closing_flag == inv.BOTH_CLOSING, (jx1, rep.closing_flag)
        assert rep.gap_report.gap0 < 1e-6 and rep.gap_report.gap_pi < 1e-6
        assert rep.omega_pair == omega, (jx1, rep.omega_pair)
    # gapped plateaus between the closings
    for jx1, omega in ((PI, (1, 1)), (2 * PI, (2, 2)), (2.8 * PI, (3, 3))):
        rep = inv.kicked_invariants(v2(jx1))
        assert rep.closing_flag == inv.GAPPED and rep.omega_pair == omega
    # mode counts exactly on the two phase boundaries at 30x30 cells;
    # sufficiency of the size is gated on the measured quasienergy
    # splitting of the counted modes, not on a decay-factor proxy
    lengths = (30, 30)
    for jx1, expected in ((1.5 * PI, (4, 4)), (2.5 * PI, (8, 8))):
        p = v2(jx1)
        counts, s = ex.observed_mode_counts(p, lengths)
        assert counts == expected, (jx1, counts)
        ipr_min = sp.default_ipr_min(s)
        for target in (0.0, PI):
            records = ex.corner_mode_vectors(s, target, 1e-2, ipr_min, lengths)
            split = max(float(sp.circle_distance(r.phase, target)) for r in records)
            assert split < 1e-8, f"jx1={jx1}, target={target}: splitting {split}"


def test_corner_quartets_survive_detuning_and_disorder():
    # dense 1600-dim diagonalizations; the slow test of the suite
    deltas = Perturbation(0.1, 0.1, 0.2, 0.2)
    for theta in (0.75 * PI, 1.25 * PI):
        p = params_from_angles(theta, PI)
        det = ex.robustness_experiment(p, deltas=deltas, n_realizations=1,
                                       lengths=(20, 20))
        assert det.all_retained, f"theta={theta}: detuning lost a corner"
        dis = ex.robustness_experiment(p, disorder=0.2, n_realizations=10,
                                       seed=7, lengths=(20, 20))
        assert dis.all_retained, (
            f"theta={theta}: retained fraction {dis.retained_fraction}"
        )
        assert len(dis.outcomes) == 10


def test_spectral_structure_and_route_equivalences_hold_generically():
    rng = np.random.default_rng(2026)
    # unitarity, chiral frames, spectral pairing, factorized-vs-dense
    for _ in range(4):
        jx = rng.uniform(0.2, 2 * PI - 0.2, size=2)
        jy = rng.uniform(0.3, 1.2, size=2)
        for protocol in (KICKED_V1, KICKED_V2):
            p = ModelParams(jx0=jx[0], jx1=jx[1], jy0=jy[0], jy1=jy[1],
                            jx1p=rng.uniform(0.2, 1.5), protocol=protocol)
            op = clean_floquet_2d((5, 4), (OPEN, OPEN), p)
            assert unitarity_residual(op.matrix) < 1e-12
            for frame in (FRAME_SYM1, FRAME_SYM2):
                framed = clean_floquet_2d((5, 4), (OPEN, OPEN), p, frame=frame)
                assert check_symmetries(framed, CHIRAL, frame=frame,
                                        sector=SECTOR_COMPOSITE) < 1e-10
            s = sp.eig_unitary(op)
            mirrored = np.sort(sp.fold_phases(-s.phases))
            assert np.allclose(np.sort(s.phases), mirrored, atol=1e-9)
            dense = oracles.quasienergies(
                oracles.kicked_2d_u(p, (5, 4), (OPEN, OPEN)))
            assert np.allclose(np.sort(s.phases), dense, atol=1e-10)
    # winding and zero/pole routes agree on 200 random gapped points
    n_done = 0
    while n_done < 200:
        p = _v1(*rng.uniform(0.05, 2 * PI - 0.05, size=2))
        if inv.gap_closing_locus(p).flag != inv.GAPPED:
            continue
        rep = inv.kicked_invariants(p)
        for i in (0, 1):
            assert abs(rep.w_pair[i] - round(rep.w_pair[i])) < 1e-6
            assert round(rep.w_pair[i]) == rep.omega_pair[i]
        n_done += 1
    # on every critical segment the established value obeys the limiting
    # rule: minimum adjacent magnitude for the closing channel, agreement
    # across the line for the other
    segments = (
        (0.3 * PI, 0.3 * PI), (0.6 * PI, 0.6 * PI),
        (1.4 * PI, 1.4 * PI), (1.7 * PI, 1.7 * PI),
        (0.3 * PI, 0.7 * PI), (0.7 * PI, 0.3 * PI),
        (0.6 * PI, 1.4 * PI), (1.3 * PI, 0.7 * PI),
        (1.2 * PI, 1.8 * PI), (1.7 * PI, 1.3 * PI),
        (1.2 * PI, 0.2 * PI), (1.8 * PI, 0.8 * PI),
        (0.2 * PI, 1.2 * PI), (0.7 * PI, 1.7 * PI),
    )
    for jx0, jx1 in segments:
        p = _v1(jx0, jx1)
        locus = inv.gap_closing_locus(p)
        assert locus.flag in (inv.ZERO_CLOSING, inv.PI_CLOSING)
        rep = inv.kicked_invariants(p)
        lo = inv.kicked_invariants(p.with_(jx1=jx1 - 1e-3))
        hi = inv.kicked_invariants(p.with_(jx1=jx1 + 1e-3))
        assert lo.closing_flag == hi.closing_flag == inv.GAPPED
        for idx, closes in ((0, locus.closes_zero), (1, locus.closes_pi)):
            a, b = lo.omega_pair[idx], hi.omega_pair[idx]
            if closes:
                assert rep.omega_pair[idx] == min(abs(a), abs(b))
            else:
                assert a == b == rep.omega_pair[idx]
