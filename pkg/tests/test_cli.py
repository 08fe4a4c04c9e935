import json

import pytest

from qipsim.cli import main
from qipsim.specfile import serialize_spec


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_run_pal_sharp(capsys):
    code, out, _ = run_cli(capsys, "run", "--protocol", "pal_sharp:d=2",
                           "--input", "01#10", "--prover", "honest")
    assert code == 0
    record = json.loads(out)
    assert record["p_acc"] == pytest.approx(1.0, abs=1e-9)


def test_run_upal_identity(capsys):
    code, out, _ = run_cli(capsys, "run", "--protocol", "upal:N=4",
                           "--input", "001", "--prover", "identity")
    assert code == 0
    assert json.loads(out)["p_rej"] >= 0.75 - 1e-9


def test_run_zero_public_empty_input(capsys):
    code, out, _ = run_cli(capsys, "run", "--protocol", "zero_public", "--input", "")
    assert code == 0
    assert json.loads(out)["p_rej"] == pytest.approx(1.0, abs=1e-9)


def test_unknown_protocol_exit_2(capsys):
    code, _out, err = run_cli(capsys, "run", "--protocol", "nope", "--input", "")
    assert code == 2
    assert "unknown protocol" in err


def test_tiling_cli(capsys):
    code, out, _ = run_cli(capsys, "tiling", "--lang", "la", "--n", "1")
    assert code == 0 and json.loads(out)["value"] == 2
    code, out, _ = run_cli(capsys, "tiling", "--bound", "1", "1", "1", "1",
                           "--eps", "0")
    assert code == 0 and json.loads(out)["value"] == 2916


def test_adversary_cli(capsys):
    code, out, _ = run_cli(capsys, "adversary", "--protocol", "center:N=2",
                           "--input", "001", "--classical", "--memory", "2",
                           "--steps", "40")
    assert code == 0
    assert json.loads(out)["best_p_acc"] <= 0.5 + 1e-6


def test_sweep_cli_membership_table(capsys):
    code, out, _ = run_cli(capsys, "sweep", "--protocol", "odd", "--n-max", "2",
                           "--steps", "4", "--memory", "1")
    assert code == 0
    rows = json.loads(out)
    for row in rows:
        assert row["honest_p_acc"] == pytest.approx(
            1.0 if row["member"] else 0.0, abs=1e-9)


def test_validate_good_file(tmp_path, capsys):
    import qipsim as q
    spec = q.build_protocol("la_mo").verifier
    path = tmp_path / "la.qfa"
    path.write_text(serialize_spec(spec))
    code, out, _ = run_cli(capsys, "validate", str(path), "--lengths", "0:6",
                           "--structure", "measure_once")
    assert code == 0
    payload = json.loads(out)
    assert all(payload["well_formed"].values())
    assert payload["structure_ok"]


def test_validate_duplicated_column_exit_1(tmp_path, capsys):
    text = """\
[meta]
name bad
head_model one_way

[states]
q0 non initial
q1 non

[input_alphabet]
a

[comm_alphabet]
#

[transitions]
q0 a # -> q1 # +1 1 0
q1 a # -> q1 # +1 1 0
"""
    path = tmp_path / "bad.qfa"
    path.write_text(text)
    code, _out, err = run_cli(capsys, "validate", str(path))
    assert code == 1
    assert "not orthogonal" in err


def test_validate_malformed_file_exit_2(tmp_path, capsys):
    path = tmp_path / "junk.qfa"
    path.write_text("not a spec at all\n")
    code, _out, err = run_cli(capsys, "validate", str(path))
    assert code == 2


def test_byte_identical_output_for_fixed_seed(capsys):
    argv = ["adversary", "--protocol", "pal_sharp:d=1", "--input", "0#1",
            "--quantum", "--steps", "12", "--restarts", "2",
            "--iterations", "5", "--seed", "42"]
    _code, out1, _ = run_cli(capsys, *argv)
    _code, out2, _ = run_cli(capsys, *argv)
    assert out1 == out2


def test_csv_format(capsys):
    code, out, _ = run_cli(capsys, "run", "--protocol", "la_mo", "--input", "a",
                           "--format", "csv")
    assert code == 0
    header, row = out.strip().splitlines()[:2]
    assert "p_acc" in header
