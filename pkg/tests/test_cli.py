import json

import pytest

from negbeta.cli import main
from negbeta.sequences import DigitSequence

EX1 = "poly=1,2,-2,-1,2,-1,-1,0,0,0,0,2,-1,0,3,1;interval=-3,-2"
GOLDEN = "poly=-1,1,1;interval=-1.7,-1.6"
LV1 = "poly=1,0,1,0,0,1;interval=-1.3,-1.1"


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_charseq_json(capsys):
    code, out, _ = run(capsys, "charseq", "--base", EX1, "--mode", "corrected", "--format", "json")
    assert code == 0
    data = json.loads(out)
    assert data["preperiod"] == [2, 0, 1, 2, 1, 2, 1, 2, 0, 1, 2, 0, 0]
    assert data["period"] == [2, 1]
    assert data["settings"]["prec"] == 256 and data["settings"]["max_len"] == 40
    seq = DigitSequence(tuple(data["preperiod"]), tuple(data["period"]))
    assert DigitSequence.from_json(seq.to_json()) == seq


def test_compare(capsys):
    code, out, _ = run(capsys, "compare", "--delta", "-1", "--x", "1,0,0,0,0", "--y", "1,0,0,1,1")
    assert code == 0
    assert out.splitlines()[1] == "less"


def test_gamma(capsys):
    code, out, _ = run(capsys, "gamma", "--n", "0", "--prec", "128")
    assert code == 0
    assert out.splitlines()[1].startswith("1.61803398874989")


def test_headers_print_defaults(capsys):
    _, out, _ = run(capsys, "classify", "--base", "beta=-2")
    header = out.splitlines()[0]
    for key in ("prec=256", "max_len=40", "degree=20", "digit_horizon=60"):
        assert key in header


def test_admissible_exit_codes(capsys):
    assert run(capsys, "admissible", "--base", GOLDEN, "--word", "1,0,0")[0] == 0
    assert run(capsys, "admissible", "--base", GOLDEN, "--word", "1,0,1")[0] == 1


def test_intransitive_exit_codes(capsys):
    code, out, _ = run(capsys, "intransitive", "--base", LV1, "--word", "0,1,1,0,0")
    assert code == 0 and "family 1" in out
    assert run(capsys, "intransitive", "--base", LV1, "--word", "1,0,0")[0] == 1


@pytest.mark.parametrize("argv", [
    ["charseq", "--base", "nonsense"],
    ["compare", "--x", "1,a", "--y", "1"],
    ["charseq", "--base", "beta=-2", "--format", "dot"],
    ["gamma"],
    ["frobnicate"],
])
def test_usage_errors(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == 2
    assert out == ""


def test_numeric_failure_exit_code(capsys):
    # 200 bisection steps cannot reach a bracket of width 1e-300
    code, out, err = run(capsys, "upsilon", "--base", "beta=-1.45", "--tol", "1e-300")
    assert code == 3 and "NoConvergence" in err and out == ""


def test_automaton_dot(capsys):
    code, out, _ = run(capsys, "automaton", "--base", GOLDEN, "--format", "dot")
    assert code == 0 and out.startswith("//") and "digraph" in out


def test_simulate_csv_is_deterministic(capsys):
    argv = ["simulate", "--base", GOLDEN, "--steps", "20000", "--seed", "4", "--word", "1", "--word", "0,0",
            "--format", "csv"]
    _, a, _ = run(capsys, *argv)
    _, b, _ = run(capsys, *argv)
    assert a == b
    assert a.splitlines()[1] == "word,analytic,empirical,stderr,steps,seed"


def test_measure_json(capsys):
    code, out, _ = run(capsys, "measure", "--base", GOLDEN, "--word", "1", "--format", "json")
    data = json.loads(out)
    assert abs(data["codeword"]["value"] - 0.4472135955) < 1e-9


def test_upsilon_round_trip_json(capsys):
    code, out, _ = run(capsys, "upsilon", "--base", "beta=-2", "--inverse", "--n", "1", "--format", "json")
    assert code == 0
    data = json.loads(out)
    for key in ("input", "level", "target_prefix", "result_interval", "digits_matched"):
        assert key in data
    code, out, _ = run(capsys, "upsilon", "--base", data["result"], "--level", "1", "--format", "json")
    assert code == 0
    assert abs(float(json.loads(out)["result"][5:]) + 2) < 1e-9


def test_code_and_identity(capsys):
    code, out, _ = run(capsys, "code", "--base", EX1, "--family", "Gamma0", "--max-len", "6", "--format", "json")
    assert sorted(json.loads(out)["words"]) == ["0", "1", "2,0,0", "2,1"]
    code, out, _ = run(capsys, "identity", "--base", GOLDEN, "--degree", "12")
    assert code == 0 and "identity holds" in out


def test_tn_and_count(capsys):
    code, out, _ = run(capsys, "tn", "--base", "poly=1,0,1,1;interval=-1.5,-1.4", "--format", "json")
    data = json.loads(out)
    assert data["t_n"][:12] == data["f_beta_0_u_n_d"][:12]
    code, out, _ = run(capsys, "count", "--base", "beta=-2", "--n", "5", "--format", "csv")
    assert out.splitlines()[-1] == "5,32"
