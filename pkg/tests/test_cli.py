import json
from pathlib import Path

import pytest

from relkit import cli

DATA = Path(__file__).resolve().parent.parent / "data"


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_allegory_universe_size(capsys):
    code, out, _ = run(capsys, "--json", "allegory", "--universe-size", "2")
    assert code == 0 and json.loads(out)["ok"]


def test_json_is_reproducible(capsys):
    a = run(capsys, "--json", "--seed", "5", "colim")[1]
    b = run(capsys, "colim", "--seed", "5", "--json")[1]
    assert a == b and "elapsed" not in a


def test_bad_flags_exit_2(capsys):
    with pytest.raises(SystemExit) as e:
        cli.main(["--max-size", "0", "pers"])
    assert e.value.code == 2
    with pytest.raises(SystemExit) as e:
        cli.main(["complete", "--class", "lax"])
    assert e.value.code == 2


def test_logic_check(capsys):
    theory = str(DATA / "reflexive.rl")
    code, out, _ = run(capsys, "--json", "logic", "check", "--theory", theory, "--model", str(DATA / "preorder.json"))
    assert code == 0
    code, out, _ = run(capsys, "--json", "logic", "check", "--theory", theory,
                       "--model", str(DATA / "irreflexive.json"))
    rep = json.loads(out)
    assert code == 1 and rep["checks"][0]["witness"] == {"x": "a"}


def test_logic_syntax_error_has_location(capsys):
    code, _, err = run(capsys, "logic", "check", "--theory", str(DATA / "bad.rl"))
    assert code == 2 and "3:22" in err


def test_missing_file(capsys):
    code, _, err = run(capsys, "prof", "kleisli", "--monad", "no-such-file.json")
    assert code == 2 and "no-such-file.json" in err


def test_prof_kleisli(capsys):
    code, out, _ = run(capsys, "--json", "prof", "kleisli", "--monad", str(DATA / "z2_monad.json"))
    rep = json.loads(out)
    assert code == 0 and len(rep["info"]["kleisli"]["arrows"]) == 2


def test_equip_tabulate(capsys):
    code, out, _ = run(capsys, "--json", "equip", "matr", "--max-size", "2", "--tabulate", str(DATA / "relation.json"))
    assert code == 0 and len(json.loads(out)["info"]["tabulation"]["apex"]) == 3


@pytest.mark.parametrize("argv", [["pers", "--max-size", "2"], ["complete", "--class", "eqv", "--max-size", "2"],
                                  ["fib", "validate", "--max-size", "2"], ["logic", "suite", "--count", "50"],
                                  ["equip", "matr", "--max-size", "2", "--validate"]])
def test_subcommands_pass(capsys, argv):
    assert run(capsys, *argv)[0] == 0


def test_run_config():
    rep = cli.run(cli.RunConfig("colim", word_bound=6))
    assert rep.ok and rep.info["word_bound"] == 6
