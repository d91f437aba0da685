"""Fixed visual conventions shared by every figure.

The Agg backend is forced before pyplot loads and image metadata is
stripped at save time, so rerendering identical inputs produces
byte-identical files.
"""

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
from matplotlib.colors import Normalize, to_rgb

# localization colorbar shared across every spectral panel
IPR_NORM = Normalize(vmin=0.0, vmax=0.5)
IPR_CMAP = plt.get_cmap("viridis")

# invariant-pair region fills; extras cycle deterministically
REGION_COLORS = {
    (0, 0): "#d9d9d9",
    (1, 0): "#6baed6",
    (0, 1): "#fd8d3c",
    (1, 1): "#74c476",
    (2, 2): "#9e9ac8",
    (3, 3): "#f0c27a",
}
FALLBACK_COLORS = ("#e377c2", "#8c564b", "#17becf", "#bcbd22")

BOUNDARY_ZERO = "#08519c"  # invariant at 0 changes across the line
BOUNDARY_PI = "#006d2c"    # invariant at pi changes across the line

PROBABILITY_CMAP = plt.get_cmap("magma")

_RC = {
    "figure.dpi": 100,
    "savefig.dpi": 150,
    "font.size": 9,
    "axes.titlesize": 9,
    "axes.labelsize": 9,
    "svg.hashsalt": "clssh-figs",
}


def region_color_table(pairs):
    """Deterministic pair -> rgb map for sorted invariant pairs."""
    table = {}
    extra = 0
    for pair in sorted(pairs):
        if pair in REGION_COLORS:
            table[pair] = to_rgb(REGION_COLORS[pair])
        else:
            table[pair] = to_rgb(FALLBACK_COLORS[extra % len(FALLBACK_COLORS)])
            extra += 1
    return table


def new_figure(width, height):
    with plt.rc_context(_RC):
        return plt.figure(figsize=(width, height))


def save(fig, path):
    """Write the image without timestamps or software metadata."""
    path = str(path)
    # each backend names its version/date metadata differently
    if path.endswith(".svg"):
        metadata = {"Date": None}
    elif path.endswith(".pdf"):
        metadata = {"Creator": None, "Producer": None, "CreationDate": None}
    else:
        metadata = {"Software": None}
    with plt.rc_context(_RC):
        fig.savefig(path, dpi=150, metadata=metadata, bbox_inches="tight")
    plt.close(fig)
