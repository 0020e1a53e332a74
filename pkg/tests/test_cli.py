from __future__ import annotations

import subprocess
import sys

import pytest

from aceqec import parse_circuit, serialize_circuit
from aceqec.cli import main, parse_value_grid

PSI_CSV = (
    "p_x,p_y,p_z,p_i,p_total,alpha\n"
    "6.94444444e-11,6.94444444e-11,0.000999000666,0.999000999,0.000999000805,7192805.3\n"
)

MEMORY5_ACE = (
    "qubits 1\n"
    "XEC 0\nZEC 0\n" + "WAIT 0\nZEC 0\n" * 5 + "XEC 0\nZEC 0\n"
)


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_channel_preset_csv(capsys):
    code, out, err = run(capsys, "channel", "--preset", "P:Si", "--gate-time", "1e-6")
    assert code == 0
    assert out == PSI_CSV
    assert "alpha   = 7192805.3  (order 10^6)" in err


def test_channel_output_file_routes_summary_to_stdout(capsys, tmp_path):
    target = tmp_path / "ch.csv"
    code, out, err = run(
        capsys, "channel", "--preset", "P:Si", "--gate-time", "1e-6",
        "--output", str(target),
    )
    assert code == 0
    assert target.read_text() == PSI_CSV
    assert "order 10^6" in out
    assert err == ""


def test_channel_quiet_drops_the_summary(capsys):
    code, out, err = run(
        capsys, "channel", "--p-total", "1e-3", "--alpha", "10", "--quiet"
    )
    assert code == 0
    assert out.startswith("p_x,p_y,p_z,")
    assert err == ""


def test_channel_rejects_ambiguous_sources(capsys):
    code, _, err = run(
        capsys, "channel", "--preset", "P:Si", "--p-total", "1e-3", "--alpha", "10"
    )
    assert code == 1
    assert "exactly one channel source" in err


def test_channel_preset_file(capsys, tmp_path):
    table = tmp_path / "platforms.txt"
    table.write_text("my fancy qubit 1e-2 1e-6 4\n")
    code, out, _ = run(
        capsys, "channel", "--preset", "MyFancyQubit", "--preset-file", str(table)
    )
    assert code == 0
    assert out.startswith("p_x,")
    code, _, err = run(
        capsys, "channel", "--preset", "other", "--preset-file", str(table)
    )
    assert code == 1
    assert "not in" in err


def test_schedule_ace_memory5(capsys):
    code, out, err = run(capsys, "schedule", "--template", "memory5")
    assert code == 0
    assert out == MEMORY5_ACE
    assert "depth 77" in err


def test_schedule_writes_circuit_file(capsys, tmp_path):
    target = tmp_path / "conv.ftc"
    code, out, _ = run(
        capsys, "schedule", "--template", "bell", "--scheme", "conventional",
        "--output", str(target),
    )
    assert code == 0
    circuit = parse_circuit(target.read_text())
    assert circuit.count_kinds() == {"XEC": 6, "ZEC": 6, "H": 1, "CX": 1, "WAIT": 1}
    assert "6 XEC + 6 ZEC" in out


def test_schedule_rebalanced_needs_channel(capsys):
    code, _, err = run(capsys, "schedule", "--template", "memory5",
                       "--scheme", "ace_rebalanced")
    assert code == 1
    assert "channel" in err


def test_schedule_circuit_file_input(capsys, tmp_path):
    source = tmp_path / "in.ftc"
    source.write_text("qubits 2\nH 0\nCX 0 1\n")
    code, out, _ = run(capsys, "schedule", "--circuit", str(source), "--quiet")
    assert code == 0
    parsed = parse_circuit(out)
    assert parsed.n_qubits == 2


def test_schedule_rejects_two_circuit_sources(capsys, tmp_path):
    source = tmp_path / "in.ftc"
    source.write_text("qubits 1\nWAIT 0\n")
    code, _, _ = run(capsys, "schedule", "--template", "bell",
                     "--circuit", str(source))
    assert code == 1


def test_schedule_missing_circuit_file_is_an_input_error(capsys, tmp_path):
    code, _, err = run(capsys, "schedule", "--circuit", str(tmp_path / "nope.ftc"))
    assert code == 1
    assert err


def test_analyze_level1_csv(capsys):
    code, out, err = run(
        capsys, "analyze", "--template", "memory5", "--scheme", "ace",
        "--p-total", "1e-3", "--alpha", "100",
    )
    assert code == 0
    assert out == (
        "alpha,p_total,scheme,levels,depth,p_fail_x,p_fail_z,p_fail_total\n"
        "100,0.001,ace,1,77,1.83898739e-05,0.0736252019,0.0736422378\n"
    )
    assert "p_fail_total" in err


def test_analyze_two_levels(capsys):
    code, out, err = run(
        capsys, "analyze", "--template", "memory5", "--scheme", "ace",
        "--p-total", "1e-5", "--alpha", "1e6", "--levels", "2",
    )
    assert code == 0
    assert ",ace,2,941," in out
    assert "level 1" in err and "level 2" in err


def test_analyze_plot(capsys, tmp_path):
    target = tmp_path / "rep.csv"
    code, _, _ = run(
        capsys, "analyze", "--template", "memory5", "--p-total", "1e-3",
        "--alpha", "10", "--output", str(target), "--plot",
    )
    assert code == 0
    figure = tmp_path / "rep_rectangles.png"
    assert figure.exists()
    assert figure.read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"


def test_analyze_plot_requires_output(capsys):
    code, _, err = run(
        capsys, "analyze", "--template", "memory5", "--p-total", "1e-3",
        "--alpha", "10", "--plot",
    )
    assert code == 1
    assert "--output" in err


def test_analyze_as_is_scheme(capsys, tmp_path):
    source = tmp_path / "sched.ftc"
    run(capsys, "schedule", "--template", "memory5", "--scheme", "conventional",
        "--output", str(source))
    code, out, _ = run(
        capsys, "analyze", "--circuit", str(source), "--scheme", "as-is",
        "--p-total", "1e-3", "--alpha", "100", "--quiet",
    )
    assert code == 0
    code2, out2, _ = run(
        capsys, "analyze", "--template", "memory5", "--scheme", "conventional",
        "--p-total", "1e-3", "--alpha", "100", "--quiet",
    )
    assert code2 == 0
    assert out.splitlines()[1].split(",")[4:] == out2.splitlines()[1].split(",")[4:]


def test_simulate_csv_row(capsys):
    code, out, err = run(
        capsys, "simulate", "--template", "memory5", "--scheme", "ace",
        "--p-total", "1e-3", "--alpha", "10",
        "--shots", "20000", "--seed", "7", "--jobs", "2",
    )
    assert code == 0
    assert out == (
        "alpha,p_total,scheme,levels,depth,p_fail_x,p_fail_z,p_fail_total,"
        "shots,seed,ci_halfwidth\n"
        "10,0.001,ace,1,77,0.0014,0.053,0.05395,20000,7,0.00313107769\n"
    )
    assert "MC" in err and "analytic" in err


def test_sweep_csv_and_grid(capsys):
    code, out, err = run(
        capsys, "sweep", "--template", "memory5",
        "--alpha", "1,10", "--p-total", "1e-3",
        "--schemes", "conventional,ace",
    )
    assert code == 0
    assert out == (
        "alpha,p_total,scheme,levels,depth,p_fail_x,p_fail_z,p_fail_total\n"
        "1,0.001,conventional,1,101,0.0503502244,0.0503502244,0.0981653036\n"
        "1,0.001,ace,1,77,0.0644282432,0.0348066841,0.0969923938\n"
        "10,0.001,conventional,1,101,0.00113541176,0.0968099796,0.0978354722\n"
        "10,0.001,ace,1,77,0.00163111473,0.0679262765,0.0694465957\n"
    )
    assert "4 rows" in err


def test_sweep_plot(capsys, tmp_path):
    target = tmp_path / "sweep.csv"
    code, _, _ = run(
        capsys, "sweep", "--template", "memory5",
        "--alpha", "1:100:log:5", "--p-total", "1e-5",
        "--schemes", "conventional,ace", "--levels", "2",
        "--output", str(target), "--plot",
    )
    assert code == 0
    assert len(target.read_text().splitlines()) == 11
    assert (tmp_path / "sweep.png").exists()


def test_verify_subcommand(capsys):
    code, out, err = run(capsys, "verify", "--trials", "5", "--seed", "1")
    assert code == 0
    assert out == (
        "check,result\n"
        "distance3,pass\n"
        "pure_type_decoding,pass\n"
        "type_preservation,pass\n"
    )
    assert err.count("PASS") == 3


def test_config_file_expansion(capsys, tmp_path):
    cfg = tmp_path / "job.cfg"
    cfg.write_text(
        "# defaults for the memory sweeps\n"
        "template = memory5\n"
        "p_total 1e-3\n"
        "alpha = 1,10\n"
        "schemes = conventional,ace\n"
        "quiet = yes\n"
    )
    code, out, err = run(capsys, "sweep", "--config", str(cfg))
    assert code == 0
    assert len(out.splitlines()) == 5
    assert err == ""
    # explicit flags win over the config file
    code, out, _ = run(capsys, "sweep", "--config", str(cfg), "--alpha", "10")
    assert code == 0
    assert len(out.splitlines()) == 3


def test_parse_value_grid():
    assert parse_value_grid("1,2,5", "x") == [1.0, 2.0, 5.0]
    assert parse_value_grid("3", "x") == [3.0]
    assert parse_value_grid("1:5:lin:5", "x") == [1.0, 2.0, 3.0, 4.0, 5.0]
    grid = parse_value_grid("1:100:log:5", "x")
    assert grid[0] == pytest.approx(1.0)
    assert grid[-1] == pytest.approx(100.0)
    assert grid[2] == pytest.approx(10.0)
    assert len(parse_value_grid("1:100:log", "x")) == 25


@pytest.mark.parametrize(
    "text",
    ["", "1:10", "1:10:cubic:5", "1:10:log:1", "0:10:log:5", "a,b", "1:10:log:0"],
)
def test_parse_value_grid_rejects(text):
    with pytest.raises(Exception):
        parse_value_grid(text, "x")


def test_exit_codes(capsys):
    assert run(capsys, "--help")[0] == 0
    assert run(capsys)[0] == 1
    assert run(capsys, "frobnicate")[0] == 1
    assert run(capsys, "sweep", "--template", "memory5", "--alpha", "1",
               "--p-total", "1e-3", "--no-such-flag")[0] == 1
    assert run(capsys, "analyze", "--template", "memory5")[0] == 1
    assert run(capsys, "schedule", "--template", "nosuch")[0] == 1
    assert run(capsys, "channel", "--preset", "unobtainium")[0] == 1


def test_no_x_rejected_on_mixing_circuits(capsys):
    code, _, err = run(capsys, "schedule", "--template", "bell", "--scheme", "no_x")
    assert code == 1
    assert "mixing" in err


def test_internal_failure_returns_two(capsys, monkeypatch):
    def boom(*args, **kwargs):
        raise RuntimeError("wedged")

    monkeypatch.setattr("aceqec.cli.schedule_with", boom)
    code, _, err = run(capsys, "schedule", "--template", "memory5")
    assert code == 2
    assert "wedged" in err


def test_console_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "aceqec.cli", "--help"],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0
    assert "channel" in proc.stdout and "sweep" in proc.stdout


def test_schedule_output_round_trips(capsys, tmp_path):
    target = tmp_path / "out.ftc"
    run(capsys, "schedule", "--template", "chain3", "--output", str(target))
    circuit = parse_circuit(target.read_text())
    assert serialize_circuit(circuit) == target.read_text()
