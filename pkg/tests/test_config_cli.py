import math

import numpy as np
import pytest

from raman_fwm.cli import main
from raman_fwm.config import PRESET_NAMES, ConfigError, SweepConfig, parse_config, preset, to_config_text
from raman_fwm.sweep import Table, build_table, format_csv, run_sweep, transfer_report

PHYS_OK = [
    "omega_mhz=60",
    "delta_one_mhz=3000",
    "delta_two_mhz=50",
    "g_mhz=0.5",
    "alpha0=100",
    "k_pump=1e7",
    "k_quantum=0.99e7",
]


def table(text: str) -> Table:
    return build_table(parse_config(text))


# --- parsing -----------------------------------------------------------------


def test_parse_minimal():
    cfg = parse_config("mode=entanglement\np=10\nr=0.5")
    assert (cfg.mode, cfg.p, cfg.r) == ("entanglement", 10.0, 0.5)
    assert cfg.alpha == 1.0
    assert cfg.grid == (0.0, 2 * math.pi, 401)


def test_parse_bad_value_reports_position():
    with pytest.raises(ConfigError) as exc:
        parse_config("p=abc")
    assert exc.value.line == 1 and exc.value.column == 3


def test_parse_empty_needs_mode():
    with pytest.raises(ConfigError, match="mode is required"):
        parse_config("")


def test_unknown_key_line_number():
    with pytest.raises(ConfigError) as exc:
        parse_config("mode=amplitudes\n# comment\n\nbogus=1\n")
    assert exc.value.line == 4
    assert "bogus" in str(exc.value)


@pytest.mark.parametrize(
    "text, fragment",
    [
        ("mode=amplitudes\ngrid=0, 1, 1", "points"),
        ("mode=amplitudes\ngrid=2, 1, 10", "stop > start"),
        ("mode=amplitudes\nr=-1", "r:"),
        ("mode=spectra", "mode must be"),
        ("mode=amplitudes\nchi=1", "together"),
        ("mode=amplitudes\np=1\np=2", "duplicate"),
        ("mode=amplitudes\njunk", "key=value"),
    ],
)
def test_range_and_syntax_errors(text, fragment):
    with pytest.raises(ConfigError, match=fragment):
        parse_config(text)


def test_comments_and_overrides():
    cfg = parse_config("# header\nmode=quadratures  \n p = 1.1 \n", {"r": "0.3"})
    assert cfg.p == 1.1 and cfg.r == 0.3
    assert parse_config("mode=amplitudes\np=2", {"p": "3"}).p == 3.0


def test_assumption_repeats():
    cfg = parse_config("mode=amplitudes\np=2\nassumption=one\nassumption=two")
    assert cfg.assumption == ("one", "two")


@pytest.mark.parametrize("name", PRESET_NAMES)
def test_preset_round_trip(name):
    cfg = preset(name).config
    assert parse_config(to_config_text(cfg)) == cfg


def test_round_trip_awkward_floats():
    cfg = SweepConfig(mode="quadratures", p=1 / 3, r=0.1 + 0.2, grid=(0.0, math.pi, 7))
    assert parse_config(to_config_text(cfg)) == cfg


# --- presets -------------------------------------------------------------------


def test_figure_presets():
    assert preset("fig2c").config.p == 0.4
    a = preset("fig4a").config
    assert a.p == 10 and a.mode == "entanglement"
    for panel, p in zip("abc", (10, 1.1, 0.4)):
        for fig, mode in zip("234", ("amplitudes", "quadratures", "entanglement")):
            cfg = preset(f"fig{fig}{panel}").config
            assert cfg.p == p and cfg.mode == mode
            assert cfg.assumption


def test_sodium_preset():
    pre = preset("sodium_d1")
    cfg = pre.config
    assert (cfg.delta_one_mhz, cfg.delta_two_mhz, cfg.omega_mhz) == (3000.0, 50.0, 60.0)
    assert {"g_mhz", "alpha0"} <= set(pre.required)
    assert all(getattr(cfg, k) is None for k in pre.required)


def test_unknown_preset():
    with pytest.raises(ConfigError):
        preset("fig5a")


# --- sweep tables --------------------------------------------------------------------


def test_amplitudes_quarter_row():
    t = table("mode=amplitudes\np=10\nalpha=1")
    row = t.rows[100]
    assert row[0] == pytest.approx(math.pi / 2, abs=1e-15)
    assert row[1:] == pytest.approx([0.722992, 0.277008], abs=1e-6)
    assert t.header == ["sL", "A_a/A0", "A_b/A0"]


def test_amplitudes_sum_conserved():
    for p in (10, 1.1, 0.4):
        t = table(f"mode=amplitudes\np={p}\nalpha=1.7\nr=0.4")
        total = t.column("A_a/A0") + t.column("A_b/A0")
        n_in = 1 + math.sinh(0.4) ** 2 / 1.7**2
        assert np.max(np.abs(total - n_in)) < 1e-10


def test_entanglement_minimum_near_pi():
    t = table("mode=entanglement\np=10\nr=0.5")
    q = t.column("Q")
    # the closed form ties at sL = 0 (identity map); the pi row must attain the minimum
    i = 200
    assert t.rows[i][0] == pytest.approx(math.pi, abs=1e-15)
    assert q[i] == pytest.approx(q.min(), abs=1e-12)
    assert q[i] == pytest.approx(0.683940, abs=1e-6)
    assert q[i - 1] > q[i] < q[i + 1]
    assert t.header[:3] == ["sL", "Q", "entangled"]


def test_bandgap_amplitude_decreasing():
    a = table("mode=amplitudes\np=0.4\ngrid=0, 3, 301").column("A_a/A0")
    assert np.all(np.diff(a) < 0)


def test_amplitude_crossing_at_half():
    # |S1|^-2 = 1 + (sigma/s)^2 sin^2(sL), so the curves cross where sin^2(sL) = (chi/sigma)^2 - 1
    p = 1.1
    ratio = 2 - 1 / p
    expected = math.asin(math.sqrt(ratio**2 - 1))
    t = table(f"mode=amplitudes\np={p}\ngrid=0, {math.pi / 2!r}, 20001")
    diff = t.column("A_a/A0") - t.column("A_b/A0")
    i = int(np.argmax(diff < 0))
    assert t.rows[i][0] == pytest.approx(expected, abs=1e-4)
    # no crossing at P = 10 where chi^2 > 2 sigma^2
    far = table("mode=amplitudes\np=10")
    assert np.all(far.column("A_a/A0") > far.column("A_b/A0"))


def test_quadratures_columns():
    t = table("mode=quadratures\np=1.1\nr=1\ngrid=0, 3.141592653589793, 3")
    assert t.header[:5] == ["sL", "VarX_a", "VarX_b", "VarY_a", "VarY_b"]
    assert t.rows[1][1] == pytest.approx(0.0683603633188023, abs=1e-12)
    t0 = table("mode=quadratures\np=1.1\nr=0")
    assert t0.header == ["sL", "VarX_a", "VarX_b", "VarY_a", "VarY_b"]
    assert np.allclose(np.array([r[1:] for r in t0.rows]), 0.25, atol=1e-12)


def test_regime_map():
    t = table("mode=regime_map\ngrid=0.05, 2, 40\nlength=2")
    for p, regime, s2 in t.rows:
        if 1 / 3 < p < 1:
            assert regime == "BandGap"
        elif abs(p - 1 / 3) > 1e-12 and abs(p - 1) > 1e-12:
            assert regime == "Propagating"
        assert 0 <= s2 <= 1 + 1e-12


def test_elimination_table():
    t = table("mode=elimination\ngrid=0, 1, 2\nsamples=4\nalpha=0.5")
    assert t.header == ["scale", "fidelity", "leakage"]
    fid = t.column("fidelity")
    assert np.all(fid > 0.99) and fid[1] > fid[0]


def test_physical_mode_with_valid_inputs():
    t = table("mode=amplitudes\n" + "\n".join(PHYS_OK))
    assert any(c.startswith("P=") for c in t.comments)


def test_physical_zero_mismatch_rejected():
    text = "mode=amplitudes\n" + "\n".join(PHYS_OK[:-1]) + "\nk_quantum=1e7"
    with pytest.raises(ConfigError, match="delta_k"):
        table(text)


def test_p_zero_rejected():
    with pytest.raises(ConfigError):
        table("mode=amplitudes\np=0")


def test_csv_format():
    text = format_csv(table("mode=amplitudes\np=10\ngrid=0, 1, 3\nassumption=note"))
    lines = text.split("\n")
    assert lines[0] == "# mode=amplitudes"
    assert lines[1] == "# assumption: note"
    assert lines[2] == "sL,A_a/A0,A_b/A0"
    assert lines[3] == "0,1,0"
    assert text.endswith("\n")
    assert "-0," not in text


@pytest.mark.parametrize("name", [n for n in PRESET_NAMES if n != "sodium_d1"])
def test_presets_deterministic(name):
    cfg = preset(name).config
    assert run_sweep(cfg) == run_sweep(cfg)


def test_transfer_report_grid():
    best = transfer_report(np.linspace(1, 20, 191), np.linspace(0, 2 * math.pi, 81), 1.0)
    assert best.p == pytest.approx(1.1) and best.sl == pytest.approx(math.pi / 2)
    assert best.efficiency == pytest.approx(0.648, abs=1e-3)


# --- command line ------------------------------------------------------------------


def test_cli_sweep_writes_file(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("mode=amplitudes\np=10\ngrid=0, 1.5707963267948966, 3\n")
    out = tmp_path / "out.csv"
    assert main(["sweep", str(cfg), "-o", str(out)]) == 0
    assert out.read_text().splitlines()[-1] == "1.57079633,0.72299169,0.27700831"
    assert capsys.readouterr().out == ""
    assert main(["sweep", str(cfg)]) == 0
    assert capsys.readouterr().out == out.read_text()


def test_cli_config_errors(tmp_path, capsys):
    bad = tmp_path / "bad.cfg"
    bad.write_text("mode=amplitudes\np=abc\n")
    assert main(["sweep", str(bad)]) == 2
    assert "line 2" in capsys.readouterr().err
    assert main(["sweep", str(tmp_path / "missing.cfg")]) == 2
    assert main(["preset", "sodium_d1"]) == 2


def test_cli_unwritable_output(tmp_path):
    target = tmp_path / "no_such_dir" / "out.csv"
    assert main(["preset", "fig2a", "-o", str(target)]) == 2


def test_cli_preset_override_and_print(capsys):
    assert main(["preset", "fig3b", "--set", "r=0.8", "--print-config"]) == 0
    out = capsys.readouterr().out
    assert "r=0.8" in out and "p=1.1" in out


def test_cli_validate(capsys):
    assert main(["validate", "omega_mhz=60", "g_mhz=0.5", "delta_one_mhz=3000", "delta_two_mhz=50"]) == 0
    out = capsys.readouterr().out.splitlines()
    assert out[0] == "pump_ratio=0.04" and out[-1] == "pass"
    assert main(["validate", "omega_mhz=600", "g_mhz=0.5", "delta_one_mhz=3000", "delta_two_mhz=50"]) == 3
    assert main(["validate", "omega_mhz=60"]) == 2


def test_cli_validity_failure_in_sweep(tmp_path):
    cfg = tmp_path / "phys.cfg"
    cfg.write_text("mode=amplitudes\n" + "\n".join(PHYS_OK) + "\n")
    assert main(["sweep", str(cfg)]) == 0
    assert main(["sweep", str(cfg), "--set", "omega_mhz=3000"]) == 3


def test_cli_transfer(capsys):
    assert main(["transfer", "--p-points", "20", "--sl-points", "41"]) == 0
    out = dict(line.split("=") for line in capsys.readouterr().out.splitlines())
    assert set(out) == {"max_transfer", "P", "sL", "r"}
    assert 0 < float(out["max_transfer"]) <= 1
