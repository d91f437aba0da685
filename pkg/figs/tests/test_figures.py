"""End-to-end rendering: every figure draws from the bundled samples,
reruns are byte-identical, and bad input stops before any file exists."""

import json

import pytest

from clsshfigs.cli import main
from clsshfigs.figures import FIGURES, FigureSpec, render
from clsshfigs.schema import SchemaError

PNG_MAGIC = b"\x89PNG\r\n\x1a\n"

FIG_INPUTS = {
    "fig1d": ("fig1d/scan.csv",),
    "fig2": ("fig2/pp/trajectory.csv", "fig2/po/trajectory.csv",
             "fig2/op/trajectory.csv", "fig2/oo/trajectory.csv"),
    "fig3": ("fig3/a/spectrum.csv", "fig3/b/spectrum.csv"),
    "fig4": ("fig4/scan/scan.csv", "fig4/b/spectrum.csv",
             "fig4/c/spectrum.csv", "fig4/d/spectrum.csv"),
    "fig5": ("fig5/quartets/corner_modes.json",
             "fig5/octets/corner_modes.json"),
    "fig6": ("fig6/detuned_zero/robustness.json",
             "fig6/detuned_pi/robustness.json",
             "fig6/disordered_zero/robustness.json",
             "fig6/disordered_pi/robustness.json"),
    "figB1": ("figB1/scan.csv",),
}


def _inputs(samples, figure):
    return tuple(str(samples / rel) for rel in FIG_INPUTS[figure])


def test_registry_and_sample_set_agree():
    assert set(FIG_INPUTS) == set(FIGURES)
    for figure, (_, n) in FIGURES.items():
        assert len(FIG_INPUTS[figure]) == n


@pytest.mark.parametrize("figure", sorted(FIGURES))
def test_every_figure_renders_png(figure, samples, tmp_path):
    out = tmp_path / f"{figure}.png"
    got = render(FigureSpec(figure, _inputs(samples, figure), str(out)))
    assert got == str(out)
    data = out.read_bytes()
    assert data[:8] == PNG_MAGIC
    assert len(data) > 10_000


def test_rerender_is_byte_identical(samples, tmp_path):
    spec_a = FigureSpec("fig3", _inputs(samples, "fig3"),
                        str(tmp_path / "a.png"))
    spec_b = FigureSpec("fig3", _inputs(samples, "fig3"),
                        str(tmp_path / "b.png"))
    render(spec_a)
    render(spec_b)
    assert (tmp_path / "a.png").read_bytes() == (tmp_path / "b.png").read_bytes()


def test_svg_output_is_deterministic(samples, tmp_path):
    for name in ("a.svg", "b.svg"):
        render(FigureSpec("fig1d", _inputs(samples, "fig1d"),
                          str(tmp_path / name)))
    assert (tmp_path / "a.svg").read_bytes() == (tmp_path / "b.svg").read_bytes()


def test_unknown_figure_rejected(samples, tmp_path):
    with pytest.raises(ValueError, match="unknown figure"):
        render(FigureSpec("fig9", _inputs(samples, "fig1d"),
                          str(tmp_path / "x.png")))


def test_wrong_input_count_rejected(samples, tmp_path):
    with pytest.raises(ValueError, match="input file"):
        render(FigureSpec("fig3", _inputs(samples, "fig1d"),
                          str(tmp_path / "x.png")))
    assert not (tmp_path / "x.png").exists()


def test_bad_input_leaves_no_image(tmp_path):
    scan = tmp_path / "scan.csv"
    scan.write_text("theta,phi,omega_0,omega_pi,gap0,gap_pi\n")
    out = tmp_path / "fig.png"
    with pytest.raises(SchemaError):
        render(FigureSpec("fig1d", (str(scan),), str(out)))
    assert not out.exists()


def test_mode_group_must_be_quartets(samples, tmp_path):
    doc = json.loads(
        (samples / "fig5" / "quartets" / "corner_modes.json").read_text())
    doc["channels"][0]["modes"] = doc["channels"][0]["modes"][:3]
    doc["channels"][0]["count"] = 3
    bad = tmp_path / "corner_modes.json"
    bad.write_text(json.dumps(doc))
    out = tmp_path / "fig.png"
    with pytest.raises(SchemaError, match="one mode per corner"):
        render(FigureSpec(
            "fig5",
            (str(bad), str(samples / "fig5" / "octets" / "corner_modes.json")),
            str(out)))
    assert not out.exists()


def test_quartet_probability_sums(samples):
    from clsshfigs.figures import _probability_groups

    panels = _probability_groups(
        str(samples / "fig5" / "quartets" / "corner_modes.json"))
    assert len(panels) == 2
    for _, grid in panels:
        assert abs(grid.sum() - 4.0) < 1e-8

    panels = _probability_groups(
        str(samples / "fig5" / "octets" / "corner_modes.json"))
    assert len(panels) == 4


def test_cli_success_and_errors(samples, tmp_path, capsys):
    out = tmp_path / "fig3.png"
    code = main(["fig3", "--inputs", *_inputs(samples, "fig3"),
                 "--out", str(out)])
    assert code == 0
    assert out.read_bytes()[:8] == PNG_MAGIC
    assert str(out) in capsys.readouterr().out

    bad = tmp_path / "bad.csv"
    bad.write_text("not,a,header\n1,2,3\n")
    code = main(["fig3", "--inputs", str(bad), str(bad),
                 "--out", str(tmp_path / "x.png")])
    assert code == 2
    assert "error:" in capsys.readouterr().err
    assert not (tmp_path / "x.png").exists()

    with pytest.raises(SystemExit) as exc:
        main(["fig9", "--inputs", str(bad), "--out", str(tmp_path / "y.png")])
    assert exc.value.code == 2
