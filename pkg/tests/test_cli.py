import csv
import json
import math

import pytest

from colltherm import cli
from colltherm import model


def read_csv(path):
    comments, rows = [], []
    with open(path) as fh:
        for line in fh:
            if line.startswith("#"):
                comments.append(line)
            else:
                rows.append(line)
    parsed = list(csv.reader(rows))
    return comments, parsed[0], parsed[1:]


def run_heatmap(tmp_path, name="heat.csv", extra=()):
    out = tmp_path / name
    args = [
        "heatmap",
        "--gamma-axis", "0.1:1:3:log",
        "--theta-axis", "0:pi/2:3",
        "--temperature", "2",
        "--out", str(out),
        *extra,
    ]
    assert cli.main(args) == 0
    return out


def test_heatmap_csv_shape_and_values(tmp_path):
    out = run_heatmap(tmp_path)
    comments, header, rows = read_csv(out)
    assert header == ["gamma_tau_se", "g_tau_sa", "f1", "f1_over_fth",
                      "n_truncated", "richardson_err", "error"]
    assert len(rows) == 9
    assert any("units" in c for c in comments)
    assert any("temperature = 2" in c for c in comments)
    # outer axis is gamma: first three rows share the first gamma value
    assert rows[0][0] == rows[1][0] == rows[2][0]
    for row in rows:
        assert row[-1] == ""  # no per-point errors on this grid
        floats = [float(x) for x in row[:-1]]
        assert all(math.isfinite(v) for v in floats)
    # the theta = 0 column carries no temperature information
    zero_theta = [r for r in rows if float(r[1]) == 0.0]
    assert zero_theta and all(float(r[2]) <= 1e-18 for r in zero_theta)
    # near the full swap the ratio must exceed one at moderate coupling
    best = max(float(r[3]) for r in rows)
    assert best > 1.0


def test_heatmap_determinism_and_thread_independence(tmp_path):
    a = run_heatmap(tmp_path, "a.csv").read_bytes()
    b = run_heatmap(tmp_path, "b.csv").read_bytes()
    c = run_heatmap(tmp_path, "c.csv", extra=("--threads", "2")).read_bytes()
    assert a == b
    assert a == c


def test_scaling_csv(tmp_path):
    out = tmp_path / "scaling.csv"
    rc = cli.main([
        "scaling",
        "--n-max", "3",
        "--preps", "g,e",
        "--gamma-tau-se", "0.1",
        "--g-tau-sa", "pi/100",
        "--out", str(out),
    ])
    assert rc == 0
    _, header, rows = read_csv(out)
    assert header == ["prep", "n", "f_n", "f_n_over_fth", "f_n_over_n_f1", "error"]
    assert [r[0] for r in rows] == ["g", "g", "g", "e", "e", "e"]
    for r in rows:
        assert r[-1] == ""
        n = int(r[1])
        ratio = float(r[4])
        if n == 1:
            assert ratio == pytest.approx(1.0, abs=1e-12)
        else:
            assert ratio >= 1.0 - 1e-9  # superadditivity in the output table
    f_g = [float(r[2]) for r in rows if r[0] == "g"]
    assert f_g[2] >= f_g[1] >= f_g[0]


def test_scaling_rejects_n_above_cap(tmp_path):
    rc = cli.main([
        "scaling", "--n-max", "13", "--out", str(tmp_path / "x.csv"),
    ])
    assert rc == cli.EXIT_USAGE


def test_config_file_defaults_and_flag_precedence(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("temperature = 3.0\ngamma-tau-se = 0.2\n# comment line\n")
    out = tmp_path / "h.csv"
    rc = cli.main([
        "heatmap",
        "--config", str(cfg),
        "--temperature", "2.5",  # flag wins over config
        "--gamma-axis", "0.1:1:2",
        "--theta-axis", "0.5:1:2",
        "--out", str(out),
    ])
    assert rc == 0
    comments, _, _ = read_csv(out)
    assert any("temperature = 2.5" in c for c in comments)


def test_custom_prep_roundtrip(tmp_path):
    prep_file = tmp_path / "prep.json"
    prep_file.write_text(json.dumps([[0.25, 0.0], [0.0, 0.75]]))
    out = tmp_path / "h.csv"
    rc = cli.main([
        "heatmap",
        "--prep", f"custom:{prep_file}",
        "--gamma-axis", "0.1:1:2",
        "--theta-axis", "0.5:1:2",
        "--out", str(out),
    ])
    assert rc == 0
    comments, _, rows = read_csv(out)
    assert any("prep = custom" in c for c in comments)
    assert all(r[-1] == "" for r in rows)


def test_unknown_prep_is_usage_error(tmp_path):
    rc = cli.main([
        "heatmap", "--prep", "sideways",
        "--gamma-axis", "0.1:1:2", "--theta-axis", "0.5:1:2",
        "--out", str(tmp_path / "x.csv"),
    ])
    assert rc == cli.EXIT_USAGE


def test_bad_axis_is_usage_error(tmp_path):
    rc = cli.main([
        "heatmap", "--gamma-axis", "1:0.1:5",
        "--theta-axis", "0.5:1:2",
        "--out", str(tmp_path / "x.csv"),
    ])
    assert rc == cli.EXIT_USAGE


def test_parse_number_pi_shorthand():
    assert cli._parse_number("pi/2") == pytest.approx(math.pi / 2)
    assert cli._parse_number("3pi/8") == pytest.approx(3 * math.pi / 8)
    assert cli._parse_number("-pi") == pytest.approx(-math.pi)
    assert cli._parse_number("0.25") == 0.25
    with pytest.raises(ValueError):
        cli._parse_number("pie")


def test_validate_quick_passes(tmp_path, capsys):
    out = tmp_path / "report.json"
    rc = cli.main(["validate", "--quick", "--out", str(out)])
    assert rc == 0
    report = json.loads(out.read_text())
    assert report["all_pass"] is True
    names = {c["name"] for c in report["checks"]}
    assert "thermal_fisher_anchor" in names
    assert "pair_coherence_closed_form" in names
    for check in report["checks"]:
        assert set(check) == {"name", "pass", "deviation", "tolerance"}
        assert check["pass"] is True
        assert check["deviation"] <= check["tolerance"]


def test_validate_detects_injected_coherence_sign_flip(monkeypatch):
    # mutation check: flipping the coherence decay sign in the thermal map
    # must break the pair-coherence oracle with a visible deviation
    original = model.thermal_map_factors

    def flipped(params):
        pop_decay, coh_decay, p_e = original(params)
        return pop_decay, -coh_decay, p_e

    monkeypatch.setattr(model, "thermal_map_factors", flipped)
    deviation, tolerance = cli._check_coherence_closed_form(quick=True)
    assert deviation > tolerance


def test_validate_full_report_schema(tmp_path):
    out = tmp_path / "full.json"
    rc = cli.main(["validate", "--out", str(out)])
    report = json.loads(out.read_text())
    assert rc == 0 and report["all_pass"] is True
    names = [c["name"] for c in report["checks"]]
    for expected in (
        "single_ancilla_ratio_closed_form",
        "pair_enhancement_weak_coupling",
        "superadditivity",
        "decorrelation_limit",
        "thermal_map_semigroup",
        "qfi_unitary_invariance",
    ):
        assert expected in names
