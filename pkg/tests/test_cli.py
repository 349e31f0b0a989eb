import subprocess
import sys

from qeclab.cli import main


def run_cli(args):
    return subprocess.run(
        [sys.executable, "-m", "qeclab.cli", *args],
        capture_output=True, text=True, timeout=600)


def test_unknown_flag_exits_2():
    proc = run_cli(["grover", "--bogus", "1"])
    assert proc.returncode == 2
    assert "--bogus" in proc.stderr


def test_missing_subcommand_exits_2():
    proc = run_cli([])
    assert proc.returncode == 2


def test_codes_info_steane(capsys):
    assert main(["codes", "info", "--code", "steane"]) == 0
    out = capsys.readouterr().out
    assert "[[7,1,3]]" in out
    assert out.count("+") == 6          # six generators in canonical text
    assert "0001111" in out and "1111111" in out


def test_codes_info_classical(capsys):
    assert main(["codes", "info", "--code", "hamming743"]) == 0
    out = capsys.readouterr().out
    assert "1010101" in out and "d = 3" in out


def test_codes_circuit(capsys):
    assert main(["codes", "circuit"]) == 0
    out = capsys.readouterr().out
    assert out.startswith("L1: H(1) H(2) H(4)")
    assert main(["codes", "circuit", "--zero-only"]) == 0
    out2 = capsys.readouterr().out
    assert len(out2.strip().split("\n")) == 5


def test_grover_csv_roundtrip(tmp_path):
    out = tmp_path / "grover.csv"
    args = ["grover", "--epsilon", "0.02", "--gamma", "0.02",
            "--shots", "200", "--seed", "9", "--iterations", "2",
            "--threads", "1", "--out", str(out)]
    assert main(args) == 0
    text = out.read_text()
    assert "# qeclab grover" in text
    assert "# seed = 9" in text
    assert "x,mean,stderr,shots" in text
    rows = [ln for ln in text.split("\n") if ln and not ln.startswith("#")]
    assert len(rows) == 1 + 3           # header + k = 0,1,2


def test_grover_byte_identical_reruns(tmp_path):
    texts = []
    for name in ("a.csv", "b.csv"):
        out = tmp_path / name
        main(["grover", "--epsilon", "0.02", "--gamma", "0.02",
              "--shots", "200", "--seed", "9", "--iterations", "2",
              "--threads", "1", "--out", str(out)])
        texts.append(out.read_text())
    assert texts[0] == texts[1]


def test_seed_echoed_when_drawn(tmp_path, capsys):
    out = tmp_path / "g.csv"
    main(["grover", "--epsilon", "0.05", "--gamma", "0.0", "--shots", "50",
          "--iterations", "1", "--threads", "1", "--out", str(out)])
    text = out.read_text()
    seed_line = [ln for ln in text.split("\n") if ln.startswith("# seed")][0]
    assert int(seed_line.split("=")[1]) >= 0


def test_fidelity_sweep_bitflip(tmp_path):
    out = tmp_path / "fid.csv"
    args = ["fidelity-sweep", "--channel", "bitflip", "--code", "rep3",
            "--epsilons", "0.05,0.1", "--shots", "2000", "--seed", "3",
            "--out", str(out)]
    assert main(args) == 0
    text = out.read_text()
    assert "channel = bitflip" in text
    rows = [ln for ln in text.split("\n") if ln and not ln.startswith("#")]
    assert len(rows) == 3


def test_fidelity_sweep_depolarizing_fit_comment(tmp_path):
    out = tmp_path / "fid.csv"
    args = ["fidelity-sweep", "--epsilons", "0.002,0.005,0.008,0.01",
            "--gamma", "0.001", "--scheme", "simple", "--shots", "300",
            "--seed", "3", "--threads", "1", "--out", str(out)]
    assert main(args) == 0
    assert "# linear term" in out.read_text()


def test_threshold_cli(tmp_path):
    out = tmp_path / "thr.csv"
    args = ["threshold", "--eta", "1e-3,2e-3", "--shots", "800",
            "--seed", "42", "--threads", "2", "--out", str(out)]
    assert main(args) == 0
    text = out.read_text()
    assert "# fit a (P3 = a*eta^2)" in text
    assert "# threshold 1/a" in text


def test_time_sweep_cli(tmp_path):
    out = tmp_path / "ts.csv"
    args = ["time-sweep", "--epsilon", "0.002", "--gamma", "0.002",
            "--steps", "26", "--scheme", "simple", "--shots", "200",
            "--seed", "5", "--threads", "1", "--out", str(out)]
    assert main(args) == 0
    rows = [ln for ln in out.read_text().split("\n")
            if ln and not ln.startswith("#")]
    assert rows[0] == "x,mean,stderr,shots"
    assert rows[1].startswith("13.0,")


def test_plot_requires_out():
    assert main(["grover", "--epsilon", "0.0", "--gamma", "0.0",
                 "--shots", "1", "--iterations", "1", "--plot"]) == 1


def test_plot_renders_png(tmp_path):
    out = tmp_path / "g.csv"
    args = ["grover", "--epsilon", "0.0", "--gamma", "0.0", "--shots", "1",
            "--seed", "1", "--iterations", "2", "--threads", "1",
            "--out", str(out), "--plot"]
    assert main(args) == 0
    png = tmp_path / "g.png"
    assert png.exists() and png.stat().st_size > 1000


def test_selftest_passes(capsys):
    assert main(["selftest", "--seed", "11"]) == 0
    out = capsys.readouterr().out
    assert "39/39" in out
    assert out.count("ok ") == 39
