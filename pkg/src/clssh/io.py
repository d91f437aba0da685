"""Serialized run artifacts: CSV/JSON renderers, flat config files, manifests.

Schema contract shared with downstream figure scripts:

  spectrum.csv     index,quasienergy,ipr
  modes CSV        cell_x,sub_x,cell_y,sub_y,probability,re,im
  invariants.json  params, w_pair, omega_pair, closing_flag, n_predicted,
                   n_observed, pass
  scan.csv         <axis0>,<axis1>,omega_0,omega_pi,gap0,gap_pi

Auxiliary artifacts follow the same conventions: trajectory.csv and
trajectory_counts.csv, bcc.json, robustness.json, analytic_modes.json.

Every float is written with 17 significant digits, enough to recover the
exact double on parse, and no file carries a timestamp, so identical runs
produce byte-identical outputs.  All content is rendered in memory first;
`write_outputs` only then touches the disk and removes everything it wrote
if any single write fails, so failed runs leave no partial artifacts.
"""

import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .params import (
    KICKED_V1,
    KICKED_V2,
    PROTOCOLS,
    ModelParams,
    params_from_angles,
)
from .spectral import EnergySpectrum

SPECTRUM_CSV = "spectrum.csv"
SCAN_CSV = "scan.csv"
INVARIANTS_JSON = "invariants.json"
MANIFEST_JSON = "manifest.json"
TRAJECTORY_CSV = "trajectory.csv"
TRAJECTORY_COUNTS_CSV = "trajectory_counts.csv"
BCC_JSON = "bcc.json"
ROBUSTNESS_JSON = "robustness.json"
ANALYTIC_MODES_JSON = "analytic_modes.json"
CORNER_MODES_JSON = "corner_modes.json"
VECTORS_NPY = "vectors.npy"

SPECTRUM_HEADER = "index,quasienergy,ipr"
MODES_HEADER = "cell_x,sub_x,cell_y,sub_y,probability,re,im"
SCAN_VALUE_HEADER = "omega_0,omega_pi,gap0,gap_pi"
TRAJECTORY_HEADER = "position,theta,phi,index,quasienergy,ipr"
TRAJECTORY_COUNTS_HEADER = "position,theta,phi,gap_zero,gap_pi,n_zero,n_pi"


class ValidationError(ValueError):
    """User-facing input problem; the CLI maps it to exit code 2."""


def fmt17(x):
    """Shortest text that still pins the double exactly."""
    value = float(x)
    if not math.isfinite(value):
        raise ValueError(f"cannot serialize non-finite float {value!r}")
    return format(value, ".17g")


# ------------------------------------------------------------------ JSON

def render_json(obj):
    """Deterministic JSON with 17-significant-digit floats.

    The stdlib encoder hardwires float repr (shortest round-trip form),
    which varies in printed precision; rendering by hand keeps the float
    contract uniform across CSV and JSON.  Dict insertion order is
    preserved, so builders control the layout.
    """
    out = []
    _emit_json(obj, out, 0)
    out.append("\n")
    return "".join(out)


def _emit_json(obj, out, level):
    pad = "  " * level
    inner = "  " * (level + 1)
    if isinstance(obj, dict):
        if not obj:
            out.append("{}")
            return
        out.append("{\n")
        for i, (key, value) in enumerate(obj.items()):
            if not isinstance(key, str):
                raise TypeError(f"JSON object keys must be strings, got {key!r}")
            out.append(inner + json.dumps(key) + ": ")
            _emit_json(value, out, level + 1)
            out.append(",\n" if i < len(obj) - 1 else "\n")
        out.append(pad + "}")
    elif isinstance(obj, (list, tuple)):
        items = list(obj)
        if not items:
            out.append("[]")
            return
        out.append("[\n")
        for i, value in enumerate(items):
            out.append(inner)
            _emit_json(value, out, level + 1)
            out.append(",\n" if i < len(items) - 1 else "\n")
        out.append(pad + "]")
    elif isinstance(obj, str):
        out.append(json.dumps(obj))
    elif obj is None:
        out.append("null")
    elif isinstance(obj, (bool, np.bool_)):
        out.append("true" if obj else "false")
    elif isinstance(obj, (int, np.integer)):
        out.append(str(int(obj)))
    elif isinstance(obj, (float, np.floating)):
        out.append(fmt17(obj))
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__} to JSON")


# ------------------------------------------------------------- parameters

def parse_pi_value(text):
    """Float from plain numerals or symbolic pi multiples like '0.75pi'."""
    if isinstance(text, (int, float)):
        return float(text)
    s = str(text).strip().lower()
    scale = 1.0
    if s.endswith("pi"):
        scale = math.pi
        s = s[:-2].strip()
        if s in ("", "+"):
            s = "1"
        elif s == "-":
            s = "-1"
    try:
        return float(s) * scale
    except ValueError:
        raise ValidationError(f"cannot parse numeric value {text!r}") from None


_ANGLE_KEYS = ("theta", "phi")
_COUPLING_KEYS = ("jx0", "jx1", "jy0", "jy1")
_PARAM_KEYS = _ANGLE_KEYS + _COUPLING_KEYS + ("jx1p", "protocol")


def parse_params(raw):
    """ModelParams from a key-value mapping.

    Accepts either the polar angles (both theta and phi) or the four
    direct couplings, never a mixture; jx1p only with kicked_v2, which
    in turn is incompatible with the angle form because the angles
    parameterize the square phase diagram of the other two protocols.
    """
    raw = dict(raw)
    unknown = sorted(set(raw) - set(_PARAM_KEYS))
    if unknown:
        raise ValidationError(f"unknown model keys: {', '.join(unknown)}")
    protocol = raw.pop("protocol", KICKED_V1)
    if protocol not in PROTOCOLS:
        raise ValidationError(
            f"unknown protocol {protocol!r}, expected one of {PROTOCOLS}"
        )
    angles = {k: raw[k] for k in _ANGLE_KEYS if k in raw}
    couplings = {k: raw[k] for k in _COUPLING_KEYS if k in raw}
    has_jx1p = "jx1p" in raw
    if angles and (couplings or has_jx1p):
        raise ValidationError(
            "give either theta/phi or direct couplings, not both"
        )
    if angles:
        if set(angles) != set(_ANGLE_KEYS):
            raise ValidationError("the angle form needs both theta and phi")
        if protocol == KICKED_V2:
            raise ValidationError(
                "kicked_v2 takes direct couplings plus jx1p, not angles"
            )
        return params_from_angles(
            parse_pi_value(angles["theta"]),
            parse_pi_value(angles["phi"]),
            protocol=protocol,
        )
    if set(couplings) != set(_COUPLING_KEYS):
        missing = sorted(set(_COUPLING_KEYS) - set(couplings))
        if couplings or has_jx1p:
            raise ValidationError(f"missing couplings: {', '.join(missing)}")
        raise ValidationError(
            "model is unspecified: give theta/phi or jx0/jx1/jy0/jy1"
        )
    jx1p = parse_pi_value(raw["jx1p"]) if has_jx1p else 0.0
    if protocol == KICKED_V2 and not has_jx1p:
        raise ValidationError("kicked_v2 needs jx1p")
    if protocol != KICKED_V2 and has_jx1p:
        raise ValidationError(f"jx1p has no meaning for protocol {protocol}")
    return ModelParams(
        jx0=parse_pi_value(couplings["jx0"]),
        jx1=parse_pi_value(couplings["jx1"]),
        jy0=parse_pi_value(couplings["jy0"]),
        jy1=parse_pi_value(couplings["jy1"]),
        jx1p=jx1p,
        protocol=protocol,
    )


def params_to_flat(p):
    """Fully resolved model namespace for configs and manifests."""
    flat = {
        "model.protocol": p.protocol,
        "model.jx0": fmt17(p.jx0),
        "model.jx1": fmt17(p.jx1),
        "model.jy0": fmt17(p.jy0),
        "model.jy1": fmt17(p.jy1),
    }
    if p.protocol == KICKED_V2:
        flat["model.jx1p"] = fmt17(p.jx1p)
    return flat


def params_to_json(p):
    obj = {
        "protocol": p.protocol,
        "jx0": p.jx0,
        "jx1": p.jx1,
        "jy0": p.jy0,
        "jy1": p.jy1,
    }
    if p.protocol == KICKED_V2:
        obj["jx1p"] = p.jx1p
    return obj


# ------------------------------------------------------------ run config

def parse_config_text(text):
    """Flat key = value lines into a dict; '#' starts a comment line."""
    flat = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if "=" not in stripped:
            raise ValidationError(f"config line {lineno} lacks '=': {line!r}")
        key, _, value = stripped.partition("=")
        key = key.strip()
        value = value.strip()
        if not key:
            raise ValidationError(f"config line {lineno} has an empty key")
        if key in flat:
            raise ValidationError(f"duplicate config key {key!r}")
        flat[key] = value
    return flat


def config_text(flat):
    """Canonical text form: sorted keys, one 'key = value' per line."""
    return "".join(f"{k} = {flat[k]}\n" for k in sorted(flat))


@dataclass(frozen=True)
class RunConfig:
    """One fully resolved CLI invocation.

    lengths are unit cells (the CLI converts its site counts before
    building one of these); options carries command-specific settings as
    sorted (key, value-string) pairs so the whole object round-trips
    losslessly through the flat text form.
    """

    command: str
    params: ModelParams
    lengths: tuple
    bc: tuple
    outdir: str
    seed: int = 7
    write_vectors: bool = False
    options: tuple = ()

    def option(self, key, default=None):
        for k, v in self.options:
            if k == key:
                return v
        return default

    def to_flat(self):
        flat = {"command": self.command}
        flat.update(params_to_flat(self.params))
        flat["lattice.cells_x"] = str(self.lengths[0])
        flat["lattice.cells_y"] = str(self.lengths[1])
        flat["lattice.bc"] = ",".join(self.bc)
        flat["run.outdir"] = self.outdir
        flat["run.seed"] = str(self.seed)
        flat["run.write_vectors"] = "true" if self.write_vectors else "false"
        for key, value in self.options:
            flat[f"opt.{key}"] = value
        return flat

    @classmethod
    def from_flat(cls, flat):
        flat = dict(flat)
        try:
            command = flat.pop("command")
            model = {
                k.split(".", 1)[1]: flat.pop(k)
                for k in [k for k in flat if k.startswith("model.")]
            }
            lengths = (
                int(flat.pop("lattice.cells_x")),
                int(flat.pop("lattice.cells_y")),
            )
            bc = tuple(flat.pop("lattice.bc").split(","))
            outdir = flat.pop("run.outdir")
            seed = int(flat.pop("run.seed"))
            write_vectors = flat.pop("run.write_vectors") == "true"
        except KeyError as missing:
            raise ValidationError(f"config misses key {missing}") from None
        options = []
        for key in sorted(flat):
            if not key.startswith("opt."):
                raise ValidationError(f"unknown config key {key!r}")
            options.append((key.split(".", 1)[1], flat[key]))
        return cls(
            command=command,
            params=parse_params(model),
            lengths=lengths,
            bc=bc,
            outdir=outdir,
            seed=seed,
            write_vectors=write_vectors,
            options=tuple(options),
        )


def manifest_json(config, version):
    """Manifest content: code version plus the fully resolved flat config."""
    flat = config.to_flat()
    return render_json(
        {"version": version, "config": {k: flat[k] for k in sorted(flat)}}
    )


# ------------------------------------------------------------- CSV files

def spectrum_csv(spec):
    """index,quasienergy,ipr rows in ascending order; energies for statics."""
    values = spec.energies if isinstance(spec, EnergySpectrum) else spec.phases
    order = np.argsort(values, kind="stable")
    lines = [SPECTRUM_HEADER]
    for row, i in enumerate(order):
        lines.append(f"{row},{fmt17(values[i])},{fmt17(spec.iprs[i])}")
    return "\n".join(lines) + "\n"


def site_components(i, lengths):
    """(cell_x, sub_x, cell_y, sub_y) of one flat composite-basis index."""
    ny = 2 * lengths[1]
    xsite, yidx = divmod(int(i), ny)
    cx, sx = divmod(xsite, 2)
    cy, sy = divmod(yidx, 2)
    return cx, sx, cy, sy


def modes_csv(vector, lengths):
    """One mode as per-site rows: cell_x,sub_x,cell_y,sub_y,probability,re,im."""
    lx, ly = lengths
    if len(vector) != 4 * lx * ly:
        raise ValueError(
            f"vector length {len(vector)} does not match lattice {lx}x{ly}"
        )
    lines = [MODES_HEADER]
    for i, amp in enumerate(vector):
        cx, sx, cy, sy = site_components(i, lengths)
        prob = float(np.abs(amp)) ** 2
        lines.append(
            f"{cx},{sx},{cy},{sy},{fmt17(prob)},{fmt17(amp.real)},{fmt17(amp.imag)}"
        )
    return "\n".join(lines) + "\n"


def scan_csv(grid):
    """Phase-diagram grid as rows of axis values, invariants and gaps."""
    lines = [f"{grid.axis_names[0]},{grid.axis_names[1]},{SCAN_VALUE_HEADER}"]
    v0, v1 = grid.axis_values
    for i, a in enumerate(v0):
        for j, b in enumerate(v1):
            lines.append(
                ",".join(
                    (
                        fmt17(a),
                        fmt17(b),
                        fmt17(grid.omega_zero[i, j]),
                        fmt17(grid.omega_pi[i, j]),
                        fmt17(grid.gap_zero[i, j]),
                        fmt17(grid.gap_pi[i, j]),
                    )
                )
            )
    return "\n".join(lines) + "\n"


def trajectory_csv(points):
    """Every sampled spectrum along the path, one row per state."""
    lines = [TRAJECTORY_HEADER]
    for pt in points:
        head = f"{fmt17(pt.position)},{fmt17(pt.theta)},{fmt17(pt.phi)}"
        order = np.argsort(pt.phases, kind="stable")
        for row, i in enumerate(order):
            lines.append(
                f"{head},{row},{fmt17(pt.phases[i])},{fmt17(pt.iprs[i])}"
            )
    return "\n".join(lines) + "\n"


def trajectory_counts_csv(points):
    """Per-point gaps and localized-mode counts along the path."""
    lines = [TRAJECTORY_COUNTS_HEADER]
    for pt in points:
        lines.append(
            ",".join(
                (
                    fmt17(pt.position),
                    fmt17(pt.theta),
                    fmt17(pt.phi),
                    fmt17(pt.gap_zero),
                    fmt17(pt.gap_pi),
                    str(pt.n_zero),
                    str(pt.n_pi),
                )
            )
        )
    return "\n".join(lines) + "\n"


# ------------------------------------------------------------ JSON files

def invariants_json(p, report, n_observed=None, passed=None):
    """The invariant report of one parameter point, observation optional."""
    predicted = report.predicted_modes
    obj = {
        "params": params_to_json(p),
        "w_pair": list(report.w_pair),
        "omega_pair": list(report.omega_pair),
        "closing_flag": report.closing_flag,
        "n_predicted": [int(predicted[0]), int(predicted[1])],
        "n_observed": None if n_observed is None else list(map(int, n_observed)),
        "pass": passed,
    }
    return render_json(obj)


def bcc_json(verdicts):
    points = [
        {
            "params": params_to_json(v.params),
            "predicted": list(map(int, v.predicted)),
            "observed": list(map(int, v.observed)),
            "passed": bool(v.passed),
        }
        for v in verdicts
    ]
    return render_json(
        {"points": points, "all_passed": all(v.passed for v in verdicts)}
    )


def robustness_json(result):
    outcomes = []
    for o in result.outcomes:
        modes = [
            {
                "target": d["target"],
                "corner": d["corner"],
                "retained": bool(d["retained"]),
                "phase": d["phase"],
                "ipr": d["ipr"],
                "corner_weight": d["corner_weight"],
                "peak_site": list(map(int, d["peak_site"])),
            }
            for d in o.mode_details
        ]
        outcomes.append(
            {
                "seed": o.seed,
                "n_zero": int(o.n_zero),
                "n_pi": int(o.n_pi),
                "modes": modes,
            }
        )
    deltas = result.deltas
    return render_json(
        {
            "params": params_to_json(result.params),
            "deltas": {
                "delta_x": deltas.delta_x,
                "delta_y": deltas.delta_y,
                "delta_1": deltas.delta_1,
                "delta_2": deltas.delta_2,
            },
            "disorder": result.disorder,
            "lengths": list(map(int, result.lengths)),
            "predicted": list(map(int, result.predicted)),
            "outcomes": outcomes,
            "retained_fraction": result.retained_fraction,
            "all_retained": bool(result.all_retained),
        }
    )


def _complex_pair(z):
    z = complex(z)
    return [z.real, z.imag]


def analytic_modes_json(entries):
    """Closed-form corner modes: decays, sublattice amplitudes, file names."""
    modes = []
    for corner, mode, filename in entries:
        modes.append(
            {
                "corner": corner,
                "target": mode.target_quasienergy,
                "decay_x": mode.decay_x,
                "decay_y": mode.decay_y,
                "amplitudes_x": [_complex_pair(z) for z in mode.sublattice_amplitudes["x"]],
                "amplitudes_y": [_complex_pair(z) for z in mode.sublattice_amplitudes["y"]],
                "normalizable": bool(mode.normalizable),
                "file": filename,
            }
        )
    return render_json({"modes": modes})


def corner_modes_json(groups, ipr_min):
    """Numeric corner-mode summary per target channel."""
    channels = []
    for target, records, filenames in groups:
        channels.append(
            {
                "target": target,
                "count": len(records),
                "modes": [
                    {
                        "corner": r.corner,
                        "weight": r.weight,
                        "ipr": r.ipr,
                        "phase": r.phase,
                        "file": name,
                    }
                    for r, name in zip(records, filenames)
                ],
            }
        )
    return render_json({"ipr_min": ipr_min, "channels": channels})


# ---------------------------------------------------------------- output

def vectors_npy(columns):
    """Binary eigenvector dump (.npy bytes) for on-request persistence."""
    import io as _io

    buf = _io.BytesIO()
    np.save(buf, np.asarray(columns))
    return buf.getvalue()


def write_outputs(outdir, files):
    """Write staged {name: text-or-bytes}; on any failure remove what landed."""
    path = Path(outdir)
    path.mkdir(parents=True, exist_ok=True)
    written = []
    try:
        for name, content in files.items():
            target = path / name
            if isinstance(content, bytes):
                target.write_bytes(content)
            else:
                target.write_text(content)
            written.append(target)
    except BaseException:
        for target in written:
            try:
                target.unlink()
            except OSError:
                pass
        raise
    return [str(path / name) for name in files]
