"""Command-line interface: one reproducible run per invocation.

Eight subcommands cover the full workflow: single spectra, phase-diagram
scans, invariant reports, corner-mode extraction, bulk-corner
verification, critical-path trajectories, disorder sweeps, and
closed-form mode tables.  Every run stages its artifacts in memory and
only then writes them, together with a manifest that pins the fully
resolved configuration and code version; rerunning any manifest (via
--config) reproduces the outputs byte for byte.

Exit codes: 0 success, 2 invalid input, 3 internal consistency failure
(a cross-check between independent computation routes did not agree).

Lattice sizes on the command line are given in sites per direction and
must be even; internally everything runs on unit cells (two sites per
cell per direction).
"""

import argparse
import sys

import numpy as np

from . import __version__
from . import experiments
from . import invariants as _inv
from . import io as runio
from . import modes as _modes
from .lattice import BC_1D, OPEN, PERIODIC
from .params import PROTOCOLS, STATIC
from .perturbations import Perturbation

_MODEL_FLAGS = ("theta", "phi", "jx0", "jx1", "jy0", "jy1", "jx1p", "protocol")

_TARGET_CHOICES = ("zero", "pi", "both")
_TARGETS = {"zero": 0.0, "pi": float(np.pi)}


def _parser():
    parser = argparse.ArgumentParser(
        prog="clssh",
        description="Coupled-ladder lattice runs: spectra, invariants, "
        "corner modes, and robustness experiments.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def command(name, helptext, *, lattice=True, tolerances=False):
        sp = sub.add_parser(name, help=helptext)
        for flag in _MODEL_FLAGS:
            if flag == "protocol":
                sp.add_argument("--protocol", choices=PROTOCOLS)
            else:
                sp.add_argument(f"--{flag}", metavar="VALUE")
        if lattice:
            sp.add_argument("--L", type=int, metavar="SITES",
                            help="sites per direction (even), both directions")
            sp.add_argument("--Lx", type=int, metavar="SITES")
            sp.add_argument("--Ly", type=int, metavar="SITES")
            sp.add_argument("--bc", metavar="X,Y",
                            help="boundary conditions, e.g. open,open")
        if tolerances:
            sp.add_argument("--eps-tol", metavar="VALUE",
                            help="counting window around the target phase")
            sp.add_argument("--ipr-factor", metavar="VALUE",
                            help="localization cutoff in units of the median IPR")
        sp.add_argument("--outdir", metavar="DIR")
        sp.add_argument("--seed", type=int)
        sp.add_argument("--write-vectors", action="store_true", default=None)
        sp.add_argument("--config", metavar="FILE",
                        help="flat key=value config or a manifest.json to rerun")
        return sp

    command("spectrum", "diagonalize one parameter point and write spectrum.csv")

    sp = command("phase-diagram", "invariants and gaps over a parameter plane",
                 lattice=False)
    sp.add_argument("--axes", metavar="A,B", help="axis pair, e.g. theta,phi")
    sp.add_argument("--min", dest="axis_min", metavar="A,B")
    sp.add_argument("--max", dest="axis_max", metavar="A,B")
    sp.add_argument("--samples", metavar="NA,NB")

    sp = command("invariants", "winding and zero/pole invariants at one point")
    sp.add_argument("--observe", action="store_true", default=None,
                    help="also diagonalize and compare corner-mode counts")

    sp = command("corner-modes", "extract localized corner modes numerically",
                 tolerances=True)
    sp.add_argument("--target", choices=_TARGET_CHOICES)

    sp = command("verify-bcc", "predicted versus observed corner-mode counts",
                 tolerances=True)
    sp.add_argument("--points", metavar="T,P;T,P;...",
                    help="semicolon-separated (theta, phi) pairs")

    sp = command("trajectory", "spectra along a piecewise-linear critical path",
                 tolerances=True)
    sp.add_argument("--waypoints", metavar="T,P;T,P;...")
    sp.add_argument("--samples-per-segment", type=int)

    sp = command("disorder-sweep", "corner-mode retention under perturbations")
    sp.add_argument("--lam", metavar="VALUE", help="hopping disorder strength")
    sp.add_argument("--realizations", type=int)
    sp.add_argument("--deltas", metavar="DX,DY,D1,D2",
                    help="uniform perturbation strengths")

    sp = command("analytic-modes", "closed-form corner modes on the lattice")
    sp.add_argument("--target", choices=_TARGET_CHOICES)

    return parser


# ------------------------------------------------------- config resolution

_OPT_FLAGS = {
    "phase-diagram": ("axes", "axis_min", "axis_max", "samples"),
    "invariants": ("observe",),
    "corner-modes": ("target", "eps_tol", "ipr_factor"),
    "verify-bcc": ("points", "eps_tol", "ipr_factor"),
    "trajectory": ("waypoints", "samples_per_segment", "eps_tol", "ipr_factor"),
    "disorder-sweep": ("lam", "realizations", "deltas"),
    "analytic-modes": ("target",),
    "spectrum": (),
}

# flat-config names for the option flags (argparse dest -> opt key)
_OPT_KEYS = {
    "axis_min": "min",
    "axis_max": "max",
    "samples_per_segment": "samples_per_segment",
}


def _load_config_file(path):
    try:
        text = open(path, encoding="utf-8").read()
    except OSError as exc:
        raise runio.ValidationError(f"cannot read config {path}: {exc}") from None
    if path.endswith(".json"):
        import json

        try:
            manifest = json.loads(text)
            flat = dict(manifest["config"])
        except (ValueError, KeyError, TypeError):
            raise runio.ValidationError(
                f"{path} is not a manifest with a config block"
            ) from None
        return flat
    return runio.parse_config_text(text)


def _sites_to_cells(sites, flag):
    if sites is None:
        return None
    if sites <= 0 or sites % 2:
        raise runio.ValidationError(
            f"--{flag} must be a positive even site count, got {sites}"
        )
    return sites // 2


def _resolve_config(args):
    """Merge config-file defaults with explicit flags into a RunConfig."""
    flat = _load_config_file(args.config) if args.config else {}
    flat["command"] = args.command

    model = {k: v for k, v in vars(args).items()
             if k in _MODEL_FLAGS and v is not None}
    if set(model) == {"protocol"}:
        # protocol alone is a modifier on a configured model, not a point
        flat["model.protocol"] = model["protocol"]
    elif model:
        # any other model flag replaces the configured model wholesale
        for key in [k for k in flat if k.startswith("model.")]:
            del flat[key]
        for k, v in model.items():
            flat[f"model.{k}"] = str(v)
    if not any(k.startswith("model.") for k in flat):
        default = _default_point(args)
        if default is None:
            raise runio.ValidationError(
                "model is unspecified: give theta/phi or jx0/jx1/jy0/jy1"
            )
        flat["model.theta"], flat["model.phi"] = default

    cells = _sites_to_cells(getattr(args, "L", None), "L")
    cells_x = _sites_to_cells(getattr(args, "Lx", None), "Lx")
    cells_y = _sites_to_cells(getattr(args, "Ly", None), "Ly")
    if cells is not None:
        flat["lattice.cells_x"] = str(cells)
        flat["lattice.cells_y"] = str(cells)
    if cells_x is not None:
        flat["lattice.cells_x"] = str(cells_x)
    if cells_y is not None:
        flat["lattice.cells_y"] = str(cells_y)
    flat.setdefault("lattice.cells_x", "20")
    flat.setdefault("lattice.cells_y", "20")

    bc = getattr(args, "bc", None)
    if bc is not None:
        flat["lattice.bc"] = bc
    flat.setdefault("lattice.bc", f"{OPEN},{OPEN}")
    parts = flat["lattice.bc"].split(",")
    if len(parts) != 2 or any(part not in BC_1D for part in parts):
        raise runio.ValidationError(
            f"bad boundary conditions {flat['lattice.bc']!r}; "
            f"expected two of {BC_1D} separated by a comma"
        )

    if args.outdir is not None:
        flat["run.outdir"] = args.outdir
    if args.seed is not None:
        flat["run.seed"] = str(args.seed)
    if args.write_vectors is not None:
        flat["run.write_vectors"] = "true"
    flat.setdefault("run.outdir", "out")
    flat.setdefault("run.seed", "7")
    flat.setdefault("run.write_vectors", "false")

    for dest in _OPT_FLAGS[args.command]:
        value = getattr(args, dest, None)
        if value is not None:
            key = _OPT_KEYS.get(dest, dest)
            if isinstance(value, bool):
                value = "true" if value else "false"
            flat[f"opt.{key}"] = str(value)

    return runio.RunConfig.from_flat(flat)


def _default_point(args):
    """Commands whose point list implies a model need no explicit one."""
    if args.command == "trajectory":
        waypoints = getattr(args, "waypoints", None)
        if waypoints:
            theta, phi = _parse_pairs(waypoints)[0]
            return runio.fmt17(theta), runio.fmt17(phi)
        theta, phi = experiments.DEFAULT_WAYPOINTS[0]
        return runio.fmt17(theta), runio.fmt17(phi)
    if args.command == "verify-bcc":
        points = getattr(args, "points", None)
        if points:
            theta, phi = _parse_pairs(points)[0]
        else:
            theta, phi = experiments.DEFAULT_BCC_POINTS[0]
        return runio.fmt17(theta), runio.fmt17(phi)
    return None


def _parse_pairs(text):
    pairs = []
    for chunk in text.split(";"):
        chunk = chunk.strip()
        if not chunk:
            continue
        parts = chunk.split(",")
        if len(parts) != 2:
            raise runio.ValidationError(
                f"expected 'theta,phi' pairs separated by ';', got {chunk!r}"
            )
        pairs.append((runio.parse_pi_value(parts[0]), runio.parse_pi_value(parts[1])))
    if not pairs:
        raise runio.ValidationError("empty point list")
    return pairs


def _opt_float(config, key, default):
    raw = config.option(key)
    return default if raw is None else runio.parse_pi_value(raw)


def _opt_int(config, key, default):
    raw = config.option(key)
    if raw is None:
        return default
    try:
        return int(raw)
    except ValueError:
        raise runio.ValidationError(f"option {key} wants an integer, got {raw!r}")


def _require_open_bc(config, what):
    if config.bc != (OPEN, OPEN):
        raise runio.ValidationError(f"{what} needs --bc open,open")


def _targets_for(config):
    choice = config.option("target", "both")
    if choice not in _TARGET_CHOICES:
        raise runio.ValidationError(f"bad target {choice!r}")
    if config.params.protocol == STATIC:
        if choice == "pi":
            raise runio.ValidationError(
                "static spectra have no pi channel; use --target zero"
            )
        return (("zero", 0.0),)
    if choice == "both":
        return tuple(_TARGETS.items())
    return ((choice, _TARGETS[choice]),)


# --------------------------------------------------------------- handlers

def _run_spectrum(config):
    s = experiments.clean_spectrum(config.params, config.bc, config.lengths)
    files = {runio.SPECTRUM_CSV: runio.spectrum_csv(s)}
    if config.write_vectors:
        order = np.argsort(
            s.energies if hasattr(s, "energies") else s.phases, kind="stable"
        )
        columns = np.column_stack([s.vector(i) for i in order])
        files[runio.VECTORS_NPY] = runio.vectors_npy(columns)
    return files


def _run_invariants(config):
    report = _inv.composite_invariants(config.params)
    observed = None
    passed = None
    if config.option("observe") == "true":
        observed, _ = experiments.observed_mode_counts(config.params, config.lengths)
        passed = tuple(observed) == tuple(report.predicted_modes)
    return {
        runio.INVARIANTS_JSON: runio.invariants_json(
            config.params, report, observed, passed
        )
    }


def _run_phase_diagram(config):
    axes = config.option("axes", "theta,phi").split(",")
    if len(axes) != 2:
        raise runio.ValidationError("--axes wants two comma-separated names")
    lo = [runio.parse_pi_value(v) for v in config.option("min", "0,0").split(",")]
    hi = [runio.parse_pi_value(v) for v in config.option("max", "2pi,2pi").split(",")]
    ns = [int(v) for v in config.option("samples", "41,41").split(",")]
    if len(lo) != 2 or len(hi) != 2 or len(ns) != 2:
        raise runio.ValidationError("--min/--max/--samples want two values each")
    if any(n < 2 for n in ns):
        raise runio.ValidationError("need at least 2 samples per axis")
    values = (np.linspace(lo[0], hi[0], ns[0]), np.linspace(lo[1], hi[1], ns[1]))
    grid = experiments.scan_phase_diagram(tuple(axes), values, config.params)
    return {runio.SCAN_CSV: runio.scan_csv(grid)}


def _run_corner_modes(config):
    _require_open_bc(config, "corner-mode extraction")
    s = experiments.clean_spectrum(config.params, config.bc, config.lengths)
    ipr_factor = _opt_float(config, "ipr_factor", experiments.DEFAULT_IPR_FACTOR)
    eps_tol = _opt_float(config, "eps_tol", experiments.DEFAULT_COUNT_TOL)
    ipr_min = ipr_factor * float(np.median(s.iprs))
    files = {runio.SPECTRUM_CSV: runio.spectrum_csv(s)}
    groups = []
    for name, target in _targets_for(config):
        records = experiments.corner_mode_vectors(
            s, target, eps_tol, ipr_min, config.lengths
        )
        filenames = []
        for i, record in enumerate(records):
            filename = f"modes_{name}_{i}.csv"
            files[filename] = runio.modes_csv(record.vector, config.lengths)
            filenames.append(filename)
        groups.append((target, records, filenames))
    files[runio.CORNER_MODES_JSON] = runio.corner_modes_json(groups, ipr_min)
    return files


def _run_verify_bcc(config):
    raw = config.option("points")
    points = _parse_pairs(raw) if raw else None
    verdicts = experiments.verify_bcc(
        points=points,
        lengths=config.lengths,
        eps_tol=_opt_float(config, "eps_tol", experiments.DEFAULT_COUNT_TOL),
        ipr_factor=_opt_float(config, "ipr_factor", experiments.DEFAULT_IPR_FACTOR),
    )
    return {runio.BCC_JSON: runio.bcc_json(verdicts)}


def _run_trajectory(config):
    raw = config.option("waypoints")
    kwargs = {}
    if raw:
        kwargs["waypoints"] = tuple(_parse_pairs(raw))
    samples = _opt_int(config, "samples_per_segment", None)
    if samples is not None:
        kwargs["samples_per_segment"] = samples
    spec = experiments.TrajectorySpec(**kwargs) if kwargs else None
    points = experiments.trajectory_spectra(
        spec,
        config.bc,
        config.lengths,
        eps_tol=_opt_float(config, "eps_tol", experiments.DEFAULT_COUNT_TOL),
        ipr_factor=_opt_float(config, "ipr_factor", experiments.DEFAULT_IPR_FACTOR),
    )
    return {
        runio.TRAJECTORY_CSV: runio.trajectory_csv(points),
        runio.TRAJECTORY_COUNTS_CSV: runio.trajectory_counts_csv(points),
    }


def _run_disorder_sweep(config):
    deltas_raw = config.option("deltas", "0,0,0,0").split(",")
    if len(deltas_raw) != 4:
        raise runio.ValidationError("--deltas wants four comma-separated values")
    deltas = Perturbation(*(runio.parse_pi_value(v) for v in deltas_raw))
    result = experiments.robustness_experiment(
        config.params,
        deltas=deltas,
        disorder=_opt_float(config, "lam", 0.0),
        n_realizations=_opt_int(config, "realizations", 10),
        seed=config.seed,
        lengths=config.lengths,
    )
    return {runio.ROBUSTNESS_JSON: runio.robustness_json(result)}


def _run_analytic_modes(config):
    files = {}
    entries = []
    for name, target in _targets_for(config):
        modes, vectors = _modes.corner_mode_set(target, config.params, config.lengths)
        for corner, mode, vector in zip(_modes.CORNERS, modes, vectors):
            filename = f"analytic_{name}_{corner}.csv"
            files[filename] = runio.modes_csv(vector, config.lengths)
            entries.append((corner, mode, filename))
    files[runio.ANALYTIC_MODES_JSON] = runio.analytic_modes_json(entries)
    return files


_HANDLERS = {
    "spectrum": _run_spectrum,
    "phase-diagram": _run_phase_diagram,
    "invariants": _run_invariants,
    "corner-modes": _run_corner_modes,
    "verify-bcc": _run_verify_bcc,
    "trajectory": _run_trajectory,
    "disorder-sweep": _run_disorder_sweep,
    "analytic-modes": _run_analytic_modes,
}


def main(argv=None):
    args = _parser().parse_args(argv)
    try:
        config = _resolve_config(args)
        files = _HANDLERS[config.command](config)
        files[runio.MANIFEST_JSON] = runio.manifest_json(config, __version__)
        paths = runio.write_outputs(config.outdir, files)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:
        print(
            f"internal consistency failure ({type(exc).__name__}): {exc}",
            file=sys.stderr,
        )
        return 3
    for path in paths:
        print(path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
