import json

import pytest

from delcode.cli import main
from delcode.experiment import CSV_HEADER


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


CODE = ["--delta", "1", "--ell", "5", "--n", "20"]


def test_encode(capsys):
    code, out, _ = run(capsys, "encode", *CODE, "--info", "1010 10 01 100")
    assert code == 0
    assert out.strip() == "10101001010001100100"


def test_decode_worked_example(capsys):
    code, out, _ = run(capsys, "decode", *CODE, "--y", "10010011100010100")
    assert code == 0
    assert out.splitlines() == ["1,0,1,1", "1,5,10,14"]


def test_decode_malformed_is_parameter_error(capsys):
    code, _, err = run(capsys, "decode", *CODE, "--y", "1001")
    assert code == 2
    assert "outside" in err


def test_decode_desync_fails(capsys):
    # positions 1, 16 and 17 of the worked codeword deleted; the last block loses two bits
    code, _, err = run(capsys, "decode", *CODE, "--y", "01010010100011100")
    assert code == 1
    assert "delta" in err


def test_decode_best_effort(capsys):
    code, out, err = run(capsys, "decode", *CODE, "--y", "1001", "--best-effort")
    assert code == 0
    assert len(out.splitlines()[0].split(",")) == 4
    assert "suspect" in err


def test_verify_full_code(capsys):
    code, out, _ = run(capsys, "verify", "--delta", "1", "--ell", "3", "--n", "6")
    assert code == 0
    assert json.loads(out) == {"ok": True, "codewords": 8, "witness": None}


def test_verify_witness(capsys, tmp_path):
    path = tmp_path / "code.txt"
    path.write_text("111101\n")
    code, out, _ = run(capsys, "verify", "--delta", "1", "--ell", "3", "--n", "6",
                       "--code-file", str(path))
    assert code == 1
    w = json.loads(out)["witness"]
    assert w["y"] == "11101"
    assert sorted([w["counts_1"], w["counts_2"]]) == [[0, 1], [1, 0]]


def test_verify_capacity(capsys):
    code, _, _ = run(capsys, "verify", "--delta", "2", "--ell", "5", "--n", "10", "--cap", "10")
    assert code == 3


@pytest.mark.parametrize("argv, key, value", [
    (["--what", "delta-star", "--n", "1000", "--alpha", "1", "--p-n", "1000"], "delta", 6),
    (["--what", "epsilon", "--delta", "1", "--ell", "4"], "epsilon", pytest.approx(0.415, abs=1e-3)),
    (["--what", "claim1", "--n", "994", "--k", "14", "--alpha", "1"], "ell", 71),
    (["--what", "bounds", "--n", "994", "--k", "14", "--alpha", "1", "--delta", "3"], "r_markers", 65),
])
def test_analyze(capsys, argv, key, value):
    code, out, _ = run(capsys, "analyze", *argv)
    assert code == 0
    assert json.loads(out)[key] == value


def test_analyze_missing_argument(capsys):
    code, _, err = run(capsys, "analyze", "--what", "claim1", "--n", "994")
    assert code == 2
    assert "--k" in err


def test_analyze_bad_parameters(capsys):
    code, _, _ = run(capsys, "analyze", "--what", "bounds", "--n", "1000", "--k", "10",
                     "--alpha", "0.7", "--delta", "4")
    assert code == 2


def test_simulate_flags_to_stdout(capsys):
    code, out, _ = run(capsys, "simulate", "--scheme", "marker,rll-bma", "--n", "1000", "--k", "10",
                       "--alpha", "1", "--delta", "3", "--t", "2,3", "--runs", "4", "--seed", "3",
                       "--quiet")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == ",".join(CSV_HEADER)
    assert len(lines) == 5


def test_simulate_preset_file_and_jobs(capsys, tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert run(capsys, "simulate", "--preset", "fig3", "--runs", "3", "--out", str(a), "--quiet")[0] == 0
    assert run(capsys, "simulate", "--preset", "fig3", "--runs", "3", "--jobs", "2", "--out", str(b),
               "--quiet")[0] == 0

    def strip_time(text):
        return [ln.rsplit(",", 1)[0] for ln in text.splitlines()]

    assert strip_time(a.read_text()) == strip_time(b.read_text())
    assert len(a.read_text().splitlines()) == 8


def test_simulate_config_file(capsys, tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"scheme": "marker", "n": 1000, "k": 10, "alpha": 1.0, "delta": 3,
                               "t": 3, "runs": 2, "seed": 9}))
    code, out, err = run(capsys, "simulate", "--config", str(cfg))
    assert code == 0
    assert "marker n=1000" in err
    assert len(out.splitlines()) == 2


def test_simulate_incomplete_flags(capsys):
    code, _, err = run(capsys, "simulate", "--n", "1000")
    assert code == 2


def test_simulate_invalid_point(capsys):
    code, _, _ = run(capsys, "simulate", "--scheme", "marker", "--n", "1000", "--k", "10",
                     "--alpha", "0.6", "--delta", "3", "--t", "3", "--seed", "1", "--runs", "2")
    assert code == 2


def test_reconstruct(capsys, tmp_path):
    path = tmp_path / "traces.txt"
    path.write_text("010110010\n0101100101\n")
    code, out, _ = run(capsys, "reconstruct", "--n", "10", "--k", "2", "--alpha", "1", "--delta", "2",
                       "--traces-file", str(path), "--trace", "0101100101")
    assert code == 0
    rec = json.loads(out)
    assert rec["x_hat"] == "0101100101"
    assert len(rec["counts"]) == 3


def test_reconstruct_needs_traces(capsys):
    code, _, _ = run(capsys, "reconstruct", "--n", "10", "--k", "2", "--alpha", "1", "--delta", "2")
    assert code == 2


def test_argparse_errors_exit_2():
    with pytest.raises(SystemExit) as exc:
        main(["encode", "--delta", "x"])
    assert exc.value.code == 2
