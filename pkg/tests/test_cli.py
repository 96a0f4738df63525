import json

import numpy as np
import pytest

from cce2nash import TwoEpsCheck, load_game, save_game
from cce2nash.cli import main
from helpers import ASYM, PENNIES

PENNIES_TEXT = "2 2\n1 -1\n-1 1\n"
DIAG_TEXT = "2 2\n0.5 0\n0 0.5\n"
UNIFORM_TEXT = "2 2\n0.25 0.25\n0.25 0.25\n"


@pytest.fixture
def pennies_file(tmp_path):
    path = tmp_path / "pennies.txt"
    path.write_text(PENNIES_TEXT)
    return str(path)


# --- gen -------------------------------------------------------------------------


def test_gen_round_trip(tmp_path, capsys):
    out = tmp_path / "corpus"
    assert main(["gen", "--rows", "2", "--cols", "2", "--count", "1", "--seed", "7", "--out", str(out)]) == 0
    game = load_game(out / "game_7_0.txt")
    assert game.shape == (2, 2)
    assert (np.abs(game.payoff) <= 1.0).all()
    assert "game_7_0.txt" in capsys.readouterr().out


def test_gen_rejects_zero_rows(tmp_path):
    with pytest.raises(SystemExit) as exc:
        main(["gen", "--rows", "0", "--cols", "2", "--out", str(tmp_path)])
    assert exc.value.code == 2


def test_gen_same_seed_same_files(tmp_path):
    for sub in ("a", "b"):
        main(["gen", "--rows", "4", "--cols", "3", "--count", "2", "--seed", "5", "--out", str(tmp_path / sub)])
    for name in ("game_5_0.txt", "game_5_1.txt"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()


# --- learn ------------------------------------------------------------------------


def test_learn_writes_reports_and_summary(pennies_file, tmp_path, capsys):
    out = tmp_path / "run"
    code = main(
        ["learn", "--game", pennies_file, "--algo", "rm", "--iters", "2000",
         "--out", str(out), "--format", "json"]
    )
    assert code == 0
    summary = json.loads((out / "summary.json").read_text())
    assert summary["algo"] == "rm"
    assert summary["averaging"] == "expected"
    assert summary["iters"] == 2000
    assert summary["holds_2eps"] is True
    assert summary["nash_eps"] <= 2.0 * summary["cce_eps"] + 1e-9
    assert summary["oracle_value"] == pytest.approx(0.0, abs=1e-9)
    assert summary["ratio"] == summary["nash_eps"] / max(summary["cce_eps"], 1e-15)
    csv_lines = (out / "trajectory.csv").read_text().splitlines()
    assert csv_lines[0] == "t,cce_eps,nash_eps,avg_row_payoff"
    assert csv_lines[-1].startswith("2000,")
    # json echo requested on stdout
    assert json.loads(capsys.readouterr().out)["algo"] == "rm"


def test_learn_single_round_reports_uniform_play(pennies_file, tmp_path):
    out = tmp_path / "run"
    main(["learn", "--game", pennies_file, "--iters", "1", "--out", str(out)])
    summary = json.loads((out / "summary.json").read_text())
    assert summary["cce_eps"] == 0.0
    assert summary["nash_eps"] == 0.0
    assert summary["avg_row_payoff"] == 0.0
    assert summary["holds_2eps"] is True


def test_learn_rejects_unknown_algo(pennies_file, tmp_path, capsys):
    with pytest.raises(SystemExit) as exc:
        main(["learn", "--game", pennies_file, "--algo", "fictitious", "--iters", "10",
              "--out", str(tmp_path / "x")])
    assert exc.value.code == 2
    err = capsys.readouterr().err
    for name in ("rm", "rmplus", "mw"):
        assert name in err


def test_learn_runs_are_byte_identical(pennies_file, tmp_path):
    flags = ["learn", "--game", pennies_file, "--algo", "mw", "--iters", "3000",
             "--seed", "11", "--averaging", "sampled"]
    main(flags + ["--out", str(tmp_path / "a")])
    main(flags + ["--out", str(tmp_path / "b")])
    for name in ("trajectory.csv", "summary.json"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()


def test_learn_reports_parse_failure_line(tmp_path, capsys):
    bad = tmp_path / "bad.txt"
    bad.write_text("2 2\n1 oops\n-1 1\n")
    assert main(["learn", "--game", str(bad), "--iters", "10", "--out", str(tmp_path / "o")]) == 2
    assert "line 2" in capsys.readouterr().err


# --- check -------------------------------------------------------------------------


def write(tmp_path, name, text):
    path = tmp_path / name
    path.write_text(text)
    return str(path)


def test_check_diagonal_pennies_holds(pennies_file, tmp_path, capsys):
    joint = write(tmp_path, "diag.txt", DIAG_TEXT)
    assert main(["check", "--game", pennies_file, "--joint", joint, "--format", "json"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["cce"]["epsilon"] == pytest.approx(1.0, abs=1e-12)
    assert report["nash_of_marginals"]["epsilon"] == pytest.approx(0.0, abs=1e-12)
    assert report["value_consistency"]["holds"] and report["two_eps"]["holds"]


def test_check_uniform_product_all_zero(pennies_file, tmp_path, capsys):
    joint = write(tmp_path, "uniform.txt", UNIFORM_TEXT)
    assert main(["check", "--game", pennies_file, "--joint", joint]) == 0
    out = capsys.readouterr().out
    assert "cce_eps = 0" in out and "nash_eps = 0" in out


def test_check_rejects_unnormalized_mass(pennies_file, tmp_path, capsys):
    joint = write(tmp_path, "short.txt", "2 2\n0.4 0.2\n0.2 0.1\n")
    assert main(["check", "--game", pennies_file, "--joint", joint]) == 2
    assert "refusing to renormalize" in capsys.readouterr().err


def test_check_rejects_dimension_mismatch_naming_shapes(tmp_path, capsys):
    game = write(tmp_path, "g.txt", "3 3\n0 -1 1\n1 0 -1\n-1 1 0\n")
    joint = write(tmp_path, "mu.txt", DIAG_TEXT)
    assert main(["check", "--game", game, "--joint", joint]) == 2
    err = capsys.readouterr().err
    assert "2x2" in err and "3x3" in err


def test_check_exit_is_deterministic(pennies_file, tmp_path):
    joint = write(tmp_path, "diag.txt", DIAG_TEXT)
    runs = {main(["check", "--game", pennies_file, "--joint", joint]) for _ in range(3)}
    assert runs == {0}


def test_check_exits_one_when_a_bound_fails(pennies_file, tmp_path, monkeypatch):
    import cce2nash.cli as cli_mod

    joint = write(tmp_path, "diag.txt", DIAG_TEXT)
    monkeypatch.setattr(
        cli_mod,
        "two_eps_check",
        lambda mu, game, tol: TwoEpsCheck(cce_eps=0.0, nash_eps=1.0, holds=False),
    )
    assert main(["check", "--game", pennies_file, "--joint", joint]) == 1


def test_check_respects_tolerance_env_var(pennies_file, tmp_path, monkeypatch, capsys):
    joint = write(tmp_path, "diag.txt", DIAG_TEXT)
    monkeypatch.setenv("CCE2NASH_TOL", "0.5")
    assert main(["check", "--game", pennies_file, "--joint", joint, "--format", "json"]) == 0
    assert json.loads(capsys.readouterr().out)["tolerance"] == 0.5


def test_bad_tolerance_env_var_is_an_error(pennies_file, tmp_path, monkeypatch, capsys):
    joint = write(tmp_path, "diag.txt", DIAG_TEXT)
    for bad in ("-1", "nan", "oops"):
        monkeypatch.setenv("CCE2NASH_TOL", bad)
        assert main(["check", "--game", pennies_file, "--joint", joint]) == 2
        assert "CCE2NASH_TOL" in capsys.readouterr().err


# --- value -------------------------------------------------------------------------


def test_value_pennies(pennies_file, capsys):
    assert main(["value", "--game", pennies_file]) == 0
    assert "value = 0" in capsys.readouterr().out


def test_value_asym_json(tmp_path, capsys):
    path = tmp_path / "asym.txt"
    save_game(ASYM, path)
    assert main(["value", "--game", str(path), "--format", "json"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["value"] == pytest.approx(1.0 / 7.0, abs=1e-9)
    assert report["row_strategy"] == pytest.approx([3.0 / 7.0, 4.0 / 7.0], abs=1e-9)


def test_value_one_by_one(tmp_path, capsys):
    game = write(tmp_path, "c.txt", "1 1\n0.125\n")
    assert main(["value", "--game", game]) == 0
    assert "value = 0.125" in capsys.readouterr().out


def test_missing_game_file_is_an_error(tmp_path, capsys):
    assert main(["value", "--game", str(tmp_path / "nope.txt")]) == 2
    assert capsys.readouterr().err.startswith("error:")
