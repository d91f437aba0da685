"""Serialization: formats, parsing, config round-trips, staged writes."""

import json

import numpy as np
import pytest

from clssh import io as runio
from clssh.params import KICKED_V1, KICKED_V2, STATIC


def test_fmt17_round_trips_doubles():
    for x in (0.1, np.pi, 1 / 3, 2.0, 1e-17, -3.5e300):
        assert float(runio.fmt17(x)) == x
    assert runio.fmt17(2.0) == "2"
    with pytest.raises(ValueError):
        runio.fmt17(float("nan"))


def test_parse_pi_value():
    assert runio.parse_pi_value("0.75pi") == pytest.approx(0.75 * np.pi)
    assert runio.parse_pi_value("pi") == pytest.approx(np.pi)
    assert runio.parse_pi_value("-pi") == pytest.approx(-np.pi)
    assert runio.parse_pi_value("2.5") == 2.5
    with pytest.raises(runio.ValidationError):
        runio.parse_pi_value("two")


def test_parse_params_angles():
    p = runio.parse_params({"theta": "pi", "phi": "pi"})
    assert p.protocol == KICKED_V1
    assert p.jx0 == pytest.approx(1.5707963267948966)
    assert p.jx1 == pytest.approx(2.356194490192345)
    assert p.jy0 == pytest.approx(0.7853981633974483)
    assert p.jy1 == pytest.approx(2.356194490192345)


def test_parse_params_validation():
    with pytest.raises(runio.ValidationError):
        runio.parse_params({"theta": "pi"})  # phi missing
    with pytest.raises(runio.ValidationError):
        runio.parse_params({"theta": "pi", "phi": "pi", "jx0": "1"})
    with pytest.raises(runio.ValidationError):
        runio.parse_params({"jx0": "1", "jx1": "1", "jy0": "1"})
    with pytest.raises(runio.ValidationError):
        runio.parse_params({"theta": "pi", "phi": "pi", "bogus": "1"})
    with pytest.raises(runio.ValidationError):
        # the second protocol cannot come from the angle family
        runio.parse_params(
            {"theta": "pi", "phi": "pi", "protocol": KICKED_V2})
    with pytest.raises(runio.ValidationError):
        # jx1p only makes sense for the second protocol
        runio.parse_params(
            {"jx0": "1", "jx1": "1", "jy0": "1", "jy1": "1", "jx1p": "1"})
    p = runio.parse_params(
        {"jx0": "0.5pi", "jx1": "1.5pi", "jy0": "0.25pi", "jy1": "0.75pi",
         "jx1p": "0.5pi", "protocol": KICKED_V2})
    assert p.protocol == KICKED_V2


def test_config_text_round_trip():
    flat = {"model.jx0": "1.5", "run.seed": "7", "command": "spectrum"}
    text = runio.config_text(flat)
    assert runio.parse_config_text(text) == flat
    with pytest.raises(runio.ValidationError):
        runio.parse_config_text("a = 1\na = 2\n")
    assert runio.parse_config_text("# comment\n\nk = v\n") == {"k": "v"}


def test_runconfig_round_trip():
    flat = {
        "command": "spectrum",
        "model.theta": "0.75pi",
        "model.phi": "pi",
        "lattice.cells_x": "10",
        "lattice.cells_y": "12",
        "lattice.bc": "open,periodic",
        "run.outdir": "out",
        "run.seed": "9",
        "run.write_vectors": "true",
        "opt.target": "zero",
    }
    cfg = runio.RunConfig.from_flat(flat)
    assert cfg.lengths == (10, 12)
    assert cfg.bc == ("open", "periodic")
    assert cfg.seed == 9
    assert cfg.write_vectors
    assert cfg.option("target") == "zero"
    assert cfg.option("absent", "fallback") == "fallback"
    back = runio.RunConfig.from_flat(cfg.to_flat())
    assert back.params == cfg.params
    assert back.to_flat() == cfg.to_flat()


def test_runconfig_rejects_unknown_and_missing():
    with pytest.raises(runio.ValidationError):
        runio.RunConfig.from_flat({"command": "spectrum"})
    flat = {
        "command": "spectrum", "model.theta": "pi", "model.phi": "pi",
        "lattice.cells_x": "4", "lattice.cells_y": "4",
        "lattice.bc": "open,open", "run.outdir": "o", "run.seed": "1",
        "run.write_vectors": "false", "mystery.key": "1",
    }
    with pytest.raises(runio.ValidationError):
        runio.RunConfig.from_flat(flat)


def test_json_rendering_deterministic_and_17_digits():
    obj = {"b": 1, "a": [0.1, float(np.pi)], "flag": True, "none": None}
    text = runio.render_json(obj)
    assert text == runio.render_json(obj)
    assert "0.10000000000000001" in text
    assert "3.1415926535897931" in text
    assert '"b": 1' in text  # insertion order kept, not resorted
    assert text.index('"b"') < text.index('"a"')
    json.loads(text)  # stays valid JSON


def test_spectrum_csv_shape():
    class Spec:
        phases = np.array([0.5, -0.25, 0.0])
        iprs = np.array([0.1, 0.2, 0.3])

    text = runio.spectrum_csv(Spec())
    lines = text.strip().split("\n")
    assert lines[0] == "index,quasienergy,ipr"
    assert lines[1].startswith("0,-0.25")
    assert len(lines) == 4


def test_modes_csv_layout():
    lengths = (2, 2)
    v = np.zeros(16, dtype=complex)
    v[13] = 1j  # flat index 13 -> cell_x 1, sub_x 1, cell_y 0, sub_y 1
    text = runio.modes_csv(v, lengths)
    lines = text.strip().split("\n")
    assert lines[0] == "cell_x,sub_x,cell_y,sub_y,probability,re,im"
    row = lines[1 + 13].split(",")
    assert row[:4] == ["1", "1", "0", "1"]
    assert float(row[4]) == 1.0 and float(row[6]) == 1.0
    with pytest.raises(ValueError):
        runio.modes_csv(v[:-1], lengths)


def test_write_outputs_and_cleanup(tmp_path):
    out = tmp_path / "run"
    paths = runio.write_outputs(out, {"a.txt": "hello", "b.bin": b"\x00\x01"})
    assert sorted(p.rsplit("/", 1)[-1] for p in paths) == ["a.txt", "b.bin"]
    assert (out / "a.txt").read_text() == "hello"
    # a failing write rolls back everything from that call
    with pytest.raises(Exception):
        runio.write_outputs(out / "fail", {"ok.txt": "x", "bad.txt": 3.14})
    assert not list((out / "fail").glob("*"))


def test_manifest_embeds_version_and_config():
    cfg = runio.RunConfig.from_flat({
        "command": "spectrum", "model.theta": "pi", "model.phi": "pi",
        "lattice.cells_x": "4", "lattice.cells_y": "4",
        "lattice.bc": "open,open", "run.outdir": "o", "run.seed": "1",
        "run.write_vectors": "false",
    })
    data = json.loads(runio.manifest_json(cfg, "1.2.3"))
    assert data["version"] == "1.2.3"
    assert data["config"]["command"] == "spectrum"
    assert runio.RunConfig.from_flat(data["config"]).lengths == (4, 4)
