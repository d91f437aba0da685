"""The seven figure builders and the render() entry point.

Each builder gets already-validated data and an output path. All input
loading happens before any drawing, so a schema failure can never leave
an image behind.
"""

from dataclasses import dataclass

import numpy as np
from matplotlib.collections import LineCollection
from matplotlib.cm import ScalarMappable

from .schema import (
    CORNERS,
    SchemaError,
    load_corner_modes,
    load_mode_grid,
    load_robustness,
    load_scan,
    load_spectrum,
    load_trajectory,
)
from . import style

PI = np.pi


def _fold(phases):
    return np.mod(np.asarray(phases) + PI, 2 * PI) - PI


def _circle_distance(phases, target):
    return np.abs(_fold(np.asarray(phases) - target))


# ------------------------------------------------------------- region maps

def _boundary_segments(scan, component):
    """Dashed-line segments between grid cells where an invariant jumps."""
    omega = scan.omega_zero if component == 0 else scan.omega_pi
    a, b = scan.axis_a, scan.axis_b
    da = a[1] - a[0]
    db = b[1] - b[0]
    segments = []
    for i in range(len(a) - 1):
        for j in range(len(b)):
            if omega[i, j] != omega[i + 1, j]:
                x = (a[i] + a[i + 1]) / 2
                segments.append(((x, b[j] - db / 2), (x, b[j] + db / 2)))
    for i in range(len(a)):
        for j in range(len(b) - 1):
            if omega[i, j] != omega[i, j + 1]:
                y = (b[j] + b[j + 1]) / 2
                segments.append(((a[i] - da / 2, y), (a[i] + da / 2, y)))
    return segments


def _label_position(mask, axis_a, axis_b):
    """A grid point deep inside the region, found by repeated erosion.

    Centroids fail here: the trivial region is usually a frame around
    the others, and its centroid lands inside a different region.
    """
    m = mask
    survivors = m
    while m.any():
        survivors = m
        eroded = np.zeros_like(m)
        eroded[1:-1, 1:-1] = (m[1:-1, 1:-1]
                              & m[:-2, 1:-1] & m[2:, 1:-1]
                              & m[1:-1, :-2] & m[1:-1, 2:])
        m = eroded
    ii, jj = np.nonzero(survivors)
    k = len(ii) // 2
    return float(axis_a[ii[k]]), float(axis_b[jj[k]])


def _region_panel(ax, scan, zero_linestyle, pi_linestyle):
    pairs = {(int(z), int(p))
             for z, p in zip(scan.omega_zero.ravel(), scan.omega_pi.ravel())}
    colors = style.region_color_table(pairs)
    n1, n2 = len(scan.axis_a), len(scan.axis_b)
    img = np.empty((n2, n1, 3))
    for i in range(n1):
        for j in range(n2):
            img[j, i] = colors[(int(scan.omega_zero[i, j]),
                                int(scan.omega_pi[i, j]))]
    da = scan.axis_a[1] - scan.axis_a[0]
    db = scan.axis_b[1] - scan.axis_b[0]
    extent = (scan.axis_a[0] - da / 2, scan.axis_a[-1] + da / 2,
              scan.axis_b[0] - db / 2, scan.axis_b[-1] + db / 2)
    ax.imshow(img, origin="lower", extent=extent, aspect="auto",
              interpolation="nearest")
    for pair in sorted(pairs):
        mask = (scan.omega_zero == pair[0]) & (scan.omega_pi == pair[1])
        x, y = _label_position(mask, scan.axis_a, scan.axis_b)
        ax.text(x, y, f"({pair[0]},{pair[1]})", ha="center", va="center")
    for component, ls, color in ((0, zero_linestyle, style.BOUNDARY_ZERO),
                                 (1, pi_linestyle, style.BOUNDARY_PI)):
        segments = _boundary_segments(scan, component)
        if segments:
            ax.add_collection(LineCollection(
                segments, colors=color, linestyles=ls, linewidths=1.2))
    ax.set_xlabel(scan.axis_names[0])
    ax.set_ylabel(scan.axis_names[1])
    ax.set_xlim(extent[0], extent[1])
    ax.set_ylim(extent[2], extent[3])


def _render_fig1d(inputs, out):
    scan = load_scan(inputs[0])
    fig = style.new_figure(4.2, 3.4)
    ax = fig.add_subplot(111)
    _region_panel(ax, scan, "dashed", "dashed")
    ax.set_title("invariant pair over the parameter plane")
    style.save(fig, out)


def _render_figB1(inputs, out):
    scan = load_scan(inputs[0])
    fig = style.new_figure(4.2, 3.8)
    ax = fig.add_subplot(111)
    # solid where the zero gap closes, dashed where the pi gap closes
    _region_panel(ax, scan, "solid", "dashed")
    ax.set_title("driven-ladder phases over the coupling plane")
    style.save(fig, out)


# ----------------------------------------------------- IPR-colored spectra

def _ipr_colorbar(fig, axes):
    mappable = ScalarMappable(norm=style.IPR_NORM, cmap=style.IPR_CMAP)
    fig.colorbar(mappable, ax=axes, label="IPR", fraction=0.046, pad=0.02)


def _waypoint_positions(position, theta, phi):
    """Kinks of the sampled path: endpoints plus direction changes."""
    pts, seen = [], set()
    for p, t, f in zip(position, theta, phi):
        if p not in seen:
            seen.add(p)
            pts.append((p, t, f))
    pts.sort()
    ticks = [pts[0]]
    for k in range(1, len(pts) - 1):
        d1 = np.array(pts[k][1:]) - np.array(pts[k - 1][1:])
        d2 = np.array(pts[k + 1][1:]) - np.array(pts[k][1:])
        cross = d1[0] * d2[1] - d1[1] * d2[0]
        if abs(cross) > 1e-9 or np.dot(d1, d2) < 0:
            ticks.append(pts[k])
    ticks.append(pts[-1])
    return ticks


def _render_fig2(inputs, out):
    panels = [load_trajectory(p) for p in inputs]
    fig = style.new_figure(9.0, 6.0)
    fig.subplots_adjust(hspace=0.45, wspace=0.25)
    axes = []
    for k, (position, theta, phi, quasienergy, ipr) in enumerate(panels):
        ax = fig.add_subplot(2, 2, k + 1)
        # even spacing per sampled point; raw arc length crowds short legs
        uniq = np.unique(position)
        rank = np.searchsorted(uniq, position)
        order = np.argsort(ipr, kind="stable")  # localized states drawn last
        size = 4 + 60 * np.clip(ipr[order], 0.0, 0.5)
        ax.scatter(rank[order], _fold(quasienergy)[order],
                   c=ipr[order], cmap=style.IPR_CMAP, norm=style.IPR_NORM,
                   s=size, linewidths=0)
        ticks = _waypoint_positions(position, theta, phi)
        ax.set_xticks([int(np.searchsorted(uniq, t[0])) for t in ticks])
        ax.set_xticklabels(
            [f"({t[1] / PI:.3g},{t[2] / PI:.3g})$\\pi$" for t in ticks],
            rotation=30, ha="right", fontsize=7)
        ax.set_ylim(-PI - 0.2, PI + 0.2)
        ax.set_yticks((-PI, 0, PI))
        ax.set_yticklabels(("$-\\pi$", "0", "$\\pi$"))
        ax.set_title(f"({'abcd'[k]})", loc="left")
        if k % 2 == 0:
            ax.set_ylabel("quasienergy")
        axes.append(ax)
    _ipr_colorbar(fig, axes)
    style.save(fig, out)


def _stem_group(ax, quasienergy, ipr, target, n=20):
    """The n states closest to the target, stems anchored at the target."""
    dist = _circle_distance(quasienergy, target)
    order = np.argsort(dist, kind="stable")[:n]
    rank = np.arange(1, len(order) + 1)
    values = np.abs(_fold(quasienergy[order]))
    anchor = abs(target)
    ax.vlines(rank, anchor, values, colors="0.6", linewidths=0.8, zorder=1)
    ax.scatter(rank, values, c=ipr[order], cmap=style.IPR_CMAP,
               norm=style.IPR_NORM, s=18, zorder=2)
    return float(dist[order].max())


def _render_fig3(inputs, out):
    spectra = [load_spectrum(p) for p in inputs]
    fig = style.new_figure(7.0, 2.9)
    fig.subplots_adjust(wspace=0.35)
    axes = []
    for k, ((quasienergy, ipr), target) in enumerate(zip(spectra, (0.0, PI))):
        ax = fig.add_subplot(1, 2, k + 1)
        spread = _stem_group(ax, quasienergy, ipr, target)
        pad = max(4 * spread, 1e-12)
        if target == 0:
            ax.set_ylim(-0.15 * pad, pad)  # |quasienergy| grows upward from 0
        else:
            ax.set_ylim(PI - pad, PI + 0.15 * pad)  # and approaches pi from below
        ax.set_xlabel("state (ranked by distance to target)")
        ax.set_ylabel("|quasienergy|")
        label = "0" if target == 0 else "$\\pi$"
        ax.set_title(f"({'ab'[k]}) target {label}", loc="left")
        axes.append(ax)
    _ipr_colorbar(fig, axes)
    style.save(fig, out)


def _render_fig4(inputs, out):
    scan = load_scan(inputs[0])
    spectra = [load_spectrum(p) for p in inputs[1:]]
    fig = style.new_figure(9.0, 6.2)
    fig.subplots_adjust(hspace=0.4, wspace=0.3)
    ax0 = fig.add_subplot(2, 2, 1)
    _region_panel(ax0, scan, "dashed", "dashed")
    ax0.set_title("(a)", loc="left")
    axes = []
    for k, (quasienergy, ipr) in enumerate(spectra):
        ax = fig.add_subplot(2, 2, k + 2)
        _stem_group(ax, quasienergy, ipr, 0.0)
        _stem_group(ax, quasienergy, ipr, PI)
        ax.set_ylim(-0.25, PI + 0.25)
        ax.set_yticks((0.0, PI / 2, PI))
        ax.set_yticklabels(("0", "$\\pi/2$", "$\\pi$"))
        ax.set_xlabel("state (ranked by distance to target)")
        ax.set_ylabel("|quasienergy|")
        ax.set_title(f"({'bcd'[k]})", loc="left")
        axes.append(ax)
    _ipr_colorbar(fig, axes)
    style.save(fig, out)


# ------------------------------------------------- corner probability maps

def _probability_groups(path):
    """Summed probability grids, one mode per corner in each group.

    Corner modes come in quartets; a channel holding eight modes has two
    per corner and yields two panels. Anything corner-unbalanced breaks
    the quartet contract and is refused.
    """
    doc = load_corner_modes(path)
    base = path.rsplit("/", 1)[0] if "/" in path else "."
    panels = []
    for ch in doc["channels"]:
        buckets = {corner: [] for corner in CORNERS}
        for m in ch["modes"]:
            buckets[m["corner"]].append(m["file"])
        sizes = {len(v) for v in buckets.values()}
        if len(sizes) != 1:
            raise SchemaError(
                f"{path}: channel at {ch['target']} does not hold one mode "
                f"per corner (corner counts "
                f"{[len(buckets[c]) for c in CORNERS]})"
            )
        for k in range(sizes.pop()):
            grids = [load_mode_grid(f"{base}/{buckets[corner][k]}")
                     for corner in CORNERS]
            panels.append((float(ch["target"]), sum(grids)))
    return panels


def _render_fig5(inputs, out):
    panels = []
    for path in inputs:
        panels.extend(_probability_groups(path))
    vmax = max(float(grid.max()) for _, grid in panels)
    ncol = (len(panels) + 1) // 2
    fig = style.new_figure(2.6 * ncol, 5.2)
    fig.subplots_adjust(hspace=0.25, wspace=0.15)
    axes = []
    for k, (target, grid) in enumerate(panels):
        ax = fig.add_subplot(2, ncol, k + 1)
        im = ax.imshow(grid, origin="lower", cmap=style.PROBABILITY_CMAP,
                       vmin=0.0, vmax=vmax, interpolation="nearest")
        label = "0" if abs(target) < 1e-9 else "$\\pi$"
        ax.set_title(f"({'abcdefgh'[k]}) target {label}", loc="left")
        ax.set_xticks(())
        ax.set_yticks(())
        axes.append(ax)
    fig.colorbar(im, ax=axes, label="summed probability",
                 fraction=0.03, pad=0.02)
    style.save(fig, out)


# --------------------------------------------------------------- robustness

def _render_fig6(inputs, out):
    docs = [load_robustness(p) for p in inputs]
    fig = style.new_figure(9.0, 6.2)
    fig.subplots_adjust(hspace=0.55, wspace=0.25)
    axes = []
    for k, doc in enumerate(docs):
        ax = fig.add_subplot(2, 2, k + 1)
        # circles: modes that stayed corner-locked; crosses: candidates
        # that failed the retention window (the other channel's controls)
        for retained, marker in ((True, "o"), (False, "x")):
            xs, ys, cs = [], [], []
            for i, outcome in enumerate(doc["outcomes"]):
                for m in outcome["modes"]:
                    if bool(m["retained"]) == retained:
                        xs.append(i)
                        ys.append(m["corner_weight"])
                        cs.append(m["ipr"])
            if xs:
                ax.scatter(xs, ys, c=cs, cmap=style.IPR_CMAP,
                           norm=style.IPR_NORM, marker=marker, s=22)
        ax.axhline(0.85, color="0.3", linestyle="dashed", linewidth=1.0)
        pred = doc["predicted"]
        kind = ("disorder" if doc["disorder"] > 0 else "detuning")
        ax.set_title(
            f"({'abcd'[k]}) {kind}, predicted ({pred[0]},{pred[1]})\n"
            f"kept fraction {doc['retained_fraction']:.2f}",
            loc="left")
        ax.set_xlabel("realization")
        ax.set_ylabel("corner weight")
        ax.set_ylim(0.0, 1.05)
        ax.set_xticks(range(len(doc["outcomes"])))
        axes.append(ax)
    _ipr_colorbar(fig, axes)
    style.save(fig, out)


# ------------------------------------------------------------------ driver

FIGURES = {
    "fig1d": (_render_fig1d, 1),
    "fig2": (_render_fig2, 4),
    "fig3": (_render_fig3, 2),
    "fig4": (_render_fig4, 4),
    "fig5": (_render_fig5, 2),
    "fig6": (_render_fig6, 4),
    "figB1": (_render_figB1, 1),
}


@dataclass(frozen=True)
class FigureSpec:
    figure: str
    inputs: tuple
    output: str


def render(spec):
    """Validate, draw, and save one figure; returns the output path."""
    if spec.figure not in FIGURES:
        raise ValueError(f"unknown figure {spec.figure!r}; "
                         f"choose from {sorted(FIGURES)}")
    builder, n_inputs = FIGURES[spec.figure]
    if len(spec.inputs) != n_inputs:
        raise ValueError(
            f"{spec.figure} wants {n_inputs} input file(s), got {len(spec.inputs)}"
        )
    builder(tuple(str(p) for p in spec.inputs), str(spec.output))
    return str(spec.output)
