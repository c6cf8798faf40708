import io
import json
import re

import numpy as np
import pytest

from crunchfx.cli import dispatch, display
from crunchfx.config import DEFAULTS, parse_config
from crunchfx.errors import ConfigFormatError, ValidationError
from crunchfx.export import render_svg_chart, write_trajectories_csv
from crunchfx.simulation import TimeGrid, Trajectory

REF_DOC = json.dumps(
    {"spot": 2.2, "sigma": 0.25, "rd": 0.015, "rf": 0.01, "beta": 0.5,
     "strike": 2.3, "maturity": 0.75, "side": "call"}
)


@pytest.fixture
def ref_config(tmp_path):
    path = tmp_path / "ref.json"
    path.write_text(REF_DOC)
    return str(path)


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = dispatch(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


# config parsing

def test_parse_reference_document():
    cfg = parse_config(REF_DOC)
    assert (cfg.spot, cfg.sigma, cfg.rd, cfg.rf, cfg.beta) == (2.2, 0.25, 0.015, 0.01, 0.5)
    assert (cfg.strike, cfg.maturity, cfg.side) == (2.3, 0.75, "call")


def test_flags_override_file_and_defaults():
    cfg = parse_config(REF_DOC, {"beta": 0.0, "seed": 9, "sigma": None})
    assert cfg.beta == 0.0 and cfg.seed == 9 and cfg.sigma == 0.25
    assert cfg.dt == DEFAULTS["dt"]


def test_empty_file_all_flags():
    flags = dict(spot=7.0, sigma=0.05, rd=0.02, rf=0.0, beta=1.0, strike=7.0, maturity=1.0,
                 side="put", n_paths=500, dt=0.01, seed=3, horizon=2.0, output_path="x", format="svg")
    cfg = parse_config("", flags)
    assert cfg.to_dict() == flags


def test_default_seed_is_one():
    assert parse_config("").seed == 1


@pytest.mark.parametrize("text", ["{not json", "[1, 2]", '{"spot": {"v": 1}}', '"hi"'])
def test_malformed_documents(text):
    with pytest.raises(ConfigFormatError):
        parse_config(text)


@pytest.mark.parametrize(
    "doc, key",
    [({"sigma": -0.1}, "sigma"), ({"beta": -1}, "beta"), ({"spot": "abc"}, "spot"),
     ({"volatility": 0.2}, "volatility"), ({"n_paths": 0}, "n_paths"), ({"seed": -1}, "seed"),
     ({"format": "png"}, "format"), ({"side": "both"}, "side"), ({"dt": 0}, "dt")],
)
def test_validation_names_key(doc, key):
    with pytest.raises(ValidationError) as exc:
        parse_config(json.dumps(doc))
    assert exc.value.key == key


# display

@pytest.mark.parametrize("x, shown", [(0.150161432, "0.15016"), (0.125005, "0.12500"),
                                      (0.125015, "0.12502"), (-1e-17, "0.00000"), (2.5, "2.50000")])
def test_display_half_even(x, shown):
    assert display(x) == shown


# dispatch

def test_price_standard_model(ref_config):
    code, out, err = run("price", "--config", ref_config, "--beta", "0")
    assert code == 0
    assert re.search(r"^call 0\.15016\b", out, re.M)
    assert re.search(r"^put\s+0\.24087\b", out, re.M)
    assert err == ""


def test_price_crunch_prints_notice_on_stderr(ref_config):
    code, out, err = run("price", "--config", ref_config)
    assert code == 0
    assert re.search(r"^call 0\.31970\b", out, re.M)
    assert re.search(r"^put\s+0\.41041\b", out, re.M)
    assert "notice" in err and "notice" not in out
    assert len(err.strip().splitlines()) == 1


def test_price_json(ref_config):
    code, out, _ = run("price", "--config", ref_config, "--format", "json", "--side", "put")
    doc = json.loads(out)
    assert code == 0
    assert doc["premium"] == pytest.approx(0.41040715388204611, abs=1e-13)
    assert doc["d2"] == pytest.approx(doc["d1"] - 0.25 * 0.75**0.5, abs=1e-14)


def test_parity_gap_zero(ref_config):
    code, out, _ = run("parity", "--config", ref_config)
    assert code == 0 and out.strip() == "parity gap 0.00000"


def test_mc_json_fields(ref_config):
    code, out, _ = run("mc", "--config", ref_config, "--n-paths", "20000", "--format", "json")
    doc = json.loads(out)
    assert code == 0
    assert {"premium", "stderr", "ci95_low", "ci95_high", "n", "analytic"} <= set(doc)
    assert abs(doc["premium"] - doc["analytic"]) < 4 * doc["stderr"]


def test_mc_workers_flag(ref_config):
    a = run("mc", "--config", ref_config, "--n-paths", "200000", "--format", "json")[1]
    b = run("mc", "--config", ref_config, "--n-paths", "200000", "--format", "json", "--workers", "4")[1]
    assert a == b


def test_calibrate_sigma(ref_config):
    code, out, _ = run("calibrate", "--config", ref_config, "--beta", "0", "--target", "0.15016",
                       "--bracket", "0.01", "2", "--format", "json")
    doc = json.loads(out)
    assert code == 0
    assert doc["parameter"] == pytest.approx(0.25, abs=1e-4)
    assert {"residual", "iterations"} <= set(doc)


def test_calibrate_bracket_failure_exit_4(ref_config):
    code, _, err = run("calibrate", "--config", ref_config, "--solve", "beta",
                       "--target", "0.04940", "--bracket", "0", "5")
    assert code == 4 and "sign change" in err


def test_simulate_csv_and_json(ref_config):
    code, out, _ = run("simulate", "--config", ref_config, "--horizon", "0.01", "--dt", "0.001")
    lines = out.splitlines()
    assert code == 0 and lines[0] == "t,exact,euler" and len(lines) == 12
    code, out, _ = run("simulate", "--config", ref_config, "--horizon", "0.01", "--format", "json")
    doc = json.loads(out)
    assert doc["exact"][0] == 2.2 and len(doc["t"]) == 11


def test_simulate_svg_to_file(ref_config, tmp_path):
    target = tmp_path / "sim.svg"
    code, out, _ = run("simulate", "--config", ref_config, "--format", "svg", "--out", str(target))
    assert code == 0 and out == ""
    assert target.read_text().startswith("<svg")


def test_figure_without_output_prints_csv(ref_config):
    code, out, _ = run("figure", "--config", ref_config, "--horizon", "0.005")
    assert code == 0 and out.splitlines()[0] == "t,beta=0,beta=0.5"


def test_figure_single_beta_is_plain_gbm_euler(tmp_path):
    code, out, _ = run("figure", "--spot", "7", "--sigma", "0.05", "--rd", "0.02", "--rf", "0",
                       "--betas", "0", "--horizon", "0.1")
    header, *rows = out.splitlines()
    assert code == 0 and header == "t,beta=0"
    from crunchfx.mathutil import RandomStream
    from crunchfx.simulation import brownian_increments
    g = TimeGrid.build(0.1, 0.001)
    dw = brownian_increments(RandomStream(1), g)
    s = [7.0]
    for i in range(g.n_steps):
        s.append(s[-1] * (1 + 0.02 * 0.001 + 0.05 * dw[i]))
    got = [float(r.split(",")[1]) for r in rows]
    assert np.allclose(got, s, rtol=1e-9, atol=0)


@pytest.mark.parametrize(
    "argv, code",
    [
        (["bogus"], 2),
        ([], 2),
        (["price", "--no-such-flag"], 2),
        (["price", "--sigma", "-0.1"], 3),
        (["price", "--beta", "-0.5"], 3),
        (["mc", "--n-paths", "10"], 3),
        (["price", "--config", "/nonexistent/cfg.json"], 3),
        (["--help"], 0),
    ],
)
def test_exit_codes(argv, code, capsys):
    assert dispatch(argv, io.StringIO(), io.StringIO()) == code


def test_validation_error_names_key():
    code, _, err = run("price", "--sigma", "-0.1")
    assert code == 3 and "sigma" in err


def test_malformed_config_exit_2(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("{spot: 2")
    assert run("price", "--config", str(path))[0] == 2


def test_unwritable_output_exit_3(ref_config, tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("")
    assert run("figure", "--config", ref_config, "--out", str(blocker / "sub" / "fig"))[0] == 3


# CSV / SVG writers

def _traj(values, label, t_end=1.0, dt=0.5):
    return Trajectory(TimeGrid.build(t_end, dt), np.asarray(values, dtype=float), label)


def test_csv_layout():
    buf = io.StringIO()
    write_trajectories_csv([_traj([1, 2, 3], "standard"), _traj([1, 2.5, 4], "modified")], buf)
    text = buf.getvalue()
    assert text.splitlines()[0] == "t,standard,modified"
    assert text.count("\n") == 4 and "\r" not in text


def test_csv_round_trip_ten_digits():
    vals = np.array([7.0, 7.123456789012345, -0.000123456789123, 1234567.891234])
    buf = io.StringIO()
    write_trajectories_csv([_traj(vals, "x", 1.5, 0.5)], buf)
    back = np.array([float(r.split(",")[1]) for r in buf.getvalue().splitlines()[1:]])
    assert np.allclose(back, vals, rtol=5e-10, atol=0)
    assert [r.split(",")[1] for r in buf.getvalue().splitlines()[1:]] == [f"{v:.10g}" for v in vals]


def test_csv_rejects_mismatched_grids():
    with pytest.raises(ValidationError):
        write_trajectories_csv([_traj([1, 2, 3], "a"), _traj([1, 2], "b", 1.0, 1.0)], io.StringIO())


def test_svg_structure_and_determinism():
    trs = [_traj([1, 2, 3], "standard"), _traj([1, 2.5, 4], "modified")]
    a, b = io.StringIO(), io.StringIO()
    render_svg_chart(trs, a)
    render_svg_chart(trs, b)
    svg = a.getvalue()
    assert svg == b.getvalue()
    assert 'width="800" height="500"' in svg
    assert svg.count("<polyline") == 2
    assert svg.count('class="legend"') == 2
    assert ">standard<" in svg and ">modified<" in svg
    assert ">1<" in svg and ">4<" in svg


def test_svg_constant_series_mid_height():
    buf = io.StringIO()
    render_svg_chart([_traj([5, 5, 5], "flat")], buf)
    points = re.search(r'points="([^"]+)"', buf.getvalue()).group(1).split()
    ys = {float(p.split(",")[1]) for p in points}
    assert ys == {(30 + 450) / 2}


def test_svg_empty_input():
    with pytest.raises(ValidationError):
        render_svg_chart([], io.StringIO())


def test_svg_escapes_labels():
    buf = io.StringIO()
    render_svg_chart([_traj([1, 2, 3], "a<b&c")], buf)
    assert "a&lt;b&amp;c" in buf.getvalue()
