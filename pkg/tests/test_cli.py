import subprocess
import sys

import numpy as np
import pytest

from tlmodes.cli import EXIT_OK, EXIT_SOLVER, EXIT_USAGE, main
from tlmodes.errors import NetlistSyntaxError
from tlmodes.scenario import load_scenario, parse_scenario


def _run(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def _rows(text):
    lines = [l for l in text.splitlines() if not l.startswith("#")]
    return lines[0].split(","), [l.split(",") for l in lines[1:]]


def test_modes_bare(capsys):
    code, out, _ = _run(["modes", "--scenario", "bare"], capsys)
    assert code == EXIT_OK
    header, rows = _rows(out)
    assert header[:4] == ["index", "freq_hz", "c_sigma_F", "l_sigma_H"]
    freqs = np.array([float(r[1]) for r in rows])
    np.testing.assert_allclose(freqs, [2.4e9, 4.8e9, 7.2e9, 9.6e9], rtol=1e-6)
    assert out.startswith("# length_m=")


def test_kerr_table(capsys):
    code, out, _ = _run(["kerr", "--scenario", "twoqubit"], capsys)
    assert code == EXIT_OK
    header, rows = _rows(out)
    assert header == ["m", "n", "k_mn_over_omega_m", "k_mn_rad_per_s"]
    assert len(rows) == 16
    k33 = next(float(r[2]) for r in rows if r[0] == "3" and r[1] == "3")
    assert k33 == pytest.approx(-3.98e-5, rel=5e-3)


def test_qubit_table(capsys):
    code, out, _ = _run(["qubit", "--scenario", "twoqubit"], capsys)
    assert code == EXIT_OK
    header, rows = _rows(out)
    assert header[:2] == ["loop", "omega10_hz"]
    assert [r[0] for r in rows] == ["Q1", "Q2"]
    assert float(rows[0][1]) == pytest.approx(6.39e9, rel=1e-8)
    assert float(rows[1][1]) == pytest.approx(5.28e9, rel=1e-8)


def test_oracle_check(capsys):
    code, out, _ = _run(["oracle-check", "--scenario", "twoqubit"], capsys)
    assert code == EXIT_OK
    _, rows = _rows(out)
    assert {r[0] for r in rows} >= {"mode1_frequency_rel", "mode3_kerr_rel"}
    assert all(r[3] == "pass" for r in rows)


def test_out_file(tmp_path, capsys):
    target = tmp_path / "modes.csv"
    code, out, _ = _run(["modes", "--scenario", "bare", "--out", str(target)], capsys)
    assert code == EXIT_OK and out == ""
    assert "freq_hz" in target.read_text()


def test_shunt_sweep_deterministic_across_threads(capsys):
    code1, out1, _ = _run(["sweep", "--scenario", "twoqubit_shunt", "--threads", "1"], capsys)
    code4, out4, _ = _run(["sweep", "--scenario", "twoqubit_shunt", "--threads", "4"], capsys)
    assert code1 == code4 == EXIT_OK
    assert out1 == out4
    header, rows = _rows(out1)
    assert header == ["cs_over_cs0", "omega10_hz"]
    w = [float(r[1]) for r in rows]
    assert all(a > b for a, b in zip(w, w[1:]))


def test_missing_scenario(capsys):
    code, _, err = _run(["modes", "--scenario", "does-not-exist"], capsys)
    assert code == EXIT_USAGE
    assert "not found" in err


def test_bad_netlist_exit_code(tmp_path, capsys):
    (tmp_path / "bad.net").write_text("ground g\nport_in a\nport_out b\nC c1 a g oops\n")
    scn = tmp_path / "bad.scn"
    scn.write_text("netlist = bad.net\nlength = 0.025\n")
    code, _, err = _run(["modes", "--scenario", str(scn)], capsys)
    assert code == EXIT_USAGE
    assert "line 4" in err


def test_solver_error_exit_code(tmp_path, capsys):
    scn = tmp_path / "empty.scn"
    scn.write_text("netlist = bare.net\nlength = 0.025\nf_min = 0.5e9\nf_max = 1e9\n")
    code, _, err = _run(["modes", "--scenario", str(scn)], capsys)
    assert code == EXIT_SOLVER
    assert "solver error" in err


def test_sweep_without_range(capsys):
    code, _, err = _run(["sweep", "--scenario", "twoqubit"], capsys)
    assert code == EXIT_USAGE


def test_argparse_errors(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["bogus", "--scenario", "bare"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit):
        main(["modes"])
    with pytest.raises(SystemExit):
        main(["modes", "--scenario", "bare", "--threads", "0"])


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "tlmodes", "modes", "--scenario", "bare"], capture_output=True, text=True, check=False
    )
    assert proc.returncode == 0
    assert "freq_hz" in proc.stdout


def test_scenario_parsing():
    scn = parse_scenario("netlist = x.net  # comment\ntarget_f1 = 2.4e9\nqubit_targets = 6e9, 5e9\nsweep = eta\nsweep_steps = 3\nsweep_stop = 2\n")
    assert scn.qubit_targets == (6e9, 5e9)
    assert scn.sweep_values() == (0.0, 1.0, 2.0)
    assert load_scenario("twoqubit").mode == 3


@pytest.mark.parametrize(
    "text",
    [
        "length = 0.02\n",
        "netlist = x.net\n",
        "netlist = x.net\nlength = abc\n",
        "netlist = x.net\nlength = 0.02\nfoo = 1\n",
        "netlist = x.net\nlength = 0.02\nsweep = bogus\n",
        "netlist = x.net\nlength = 0.02\nreference = excited\n",
        "netlist = x.net\nlength = 0.02\nqubits = 3\n",
        "netlist = x.net\nlength\n",
    ],
)
def test_scenario_errors(text):
    with pytest.raises(NetlistSyntaxError):
        parse_scenario(text)
