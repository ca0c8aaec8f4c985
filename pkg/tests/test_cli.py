import json
import subprocess
import sys

import pydot
import pytest

from tvariants.cli import EXIT_BOUNDED, EXIT_FAIL, EXIT_INDETERMINATE, EXIT_OK, EXIT_USAGE, main
from tvariants.serialize import witness_from_json
from tvariants.witness import verify_witness


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_eggbox_dot(capsys):
    code, out, _ = run(capsys, "eggbox", "local", "5", "[2,1,3,4,4]", "--format", "dot")
    assert code == EXIT_OK
    assert pydot.graph_from_dot_data(out)


def test_eggbox_json_and_text_are_deterministic(capsys):
    _, a, _ = run(capsys, "eggbox", "variant", "3", "[1,1,2]", "--format", "json")
    _, b, _ = run(capsys, "eggbox", "variant", "3", "[1,1,2]", "--format", "json")
    assert a == b
    assert json.loads(a)["size"] == 27
    code, text, _ = run(capsys, "eggbox", "tn", "3")
    assert code == EXIT_OK and text.startswith("semigroup of size 27")


def test_eggbox_cap(capsys):
    code, _, err = run(capsys, "eggbox", "tn", "4", "--cap", "10")
    assert code == EXIT_INDETERMINATE and "capped" in err


@pytest.mark.parametrize("direction,a", [("variant-to-local", "[1,2,2]"), ("local-to-variant", "[1,1,2]"),
                                         ("variant-to-local", "[2,2,1,1]")])
def test_construct_emits_verified_witness(capsys, direction, a):
    code, out, _ = run(capsys, "construct", direction, a)
    assert code == EXIT_OK
    d = json.loads(out)
    assert d["witness"]["verdict"]["passed"]
    assert verify_witness(witness_from_json(d["witness"]))


def test_construct_seed_changes_nothing_essential(capsys):
    _, a, _ = run(capsys, "construct", "variant-to-local", "[1,1,1,1]", "--seed", "5")
    _, b, _ = run(capsys, "construct", "variant-to-local", "[1,1,1,1]", "--seed", "5")
    assert a == b
    assert json.loads(a)["scaffold"]["Z"] == 7


def test_verify(capsys):
    code, out, _ = run(capsys, "verify", "local-to-variant", "3", "--exhaustive")
    assert code == EXIT_OK and json.loads(out)["cases"] == 27
    code, out, _ = run(capsys, "verify", "inverse-count", "5", "--seed", "1", "--count", "7")
    assert code == EXIT_OK and json.loads(out)["cases"] == 7


def test_verify_cap_is_a_usage_error(capsys):
    code, _, err = run(capsys, "verify", "inverse-count", "6", "--exhaustive")
    assert code == EXIT_USAGE and "capped" in err


def test_mu(capsys):
    code, out, _ = run(capsys, "mu", "variant", "2", "[1,1]")
    assert code == EXIT_OK
    d = json.loads(out)
    assert (d["lower"], d["upper"], d["status"]) == (3, 3, "exact")
    code, out, _ = run(capsys, "mu", "variant", "3", "[1,1,1]", "--max-degree", "3")
    assert code == EXIT_BOUNDED


def test_iso(capsys):
    code, out, _ = run(capsys, "iso", "tn", "3", "variant", "3", "[2,3,1]")
    assert code == EXIT_OK and json.loads(out)["status"] == "isomorphic"
    code, out, _ = run(capsys, "iso", "tn", "3", "variant", "3", "[1,1,2]")
    assert code == EXIT_OK and json.loads(out)["status"] == "non-isomorphic"
    code, out, _ = run(capsys, "iso", "tn", "3", "tn", "3", "--cap", "5")
    assert code == EXIT_INDETERMINATE


def test_env_defaults(capsys, monkeypatch):
    monkeypatch.setenv("TVARIANTS_COUNT", "4")
    code, out, _ = run(capsys, "verify", "inverse-count", "5")
    assert code == EXIT_OK and json.loads(out)["cases"] == 4
    monkeypatch.setenv("TVARIANTS_COUNT", "four")
    code, _, _ = run(capsys, "verify", "inverse-count", "5")
    assert code == EXIT_USAGE


@pytest.mark.parametrize("argv", [
    ["eggbox", "foo", "3"],
    ["eggbox", "variant", "3"],
    ["eggbox", "variant", "3", "[1,2]"],
    ["eggbox", "tn", "x"],
    ["eggbox", "tn", "3", "extra"],
    ["construct", "local-to-variant", "1,2"],
    ["iso", "tn", "3"],
])
def test_usage_errors(capsys, argv):
    assert main(argv) == EXIT_USAGE


def test_argparse_errors_use_usage_code(capsys):
    with pytest.raises(SystemExit) as info:
        main(["frobnicate"])
    assert info.value.code == EXIT_USAGE


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "tvariants", "iso", "tn", "2", "tn", "2"],
                          capture_output=True, text=True)
    assert proc.returncode == EXIT_OK
    assert json.loads(proc.stdout)["status"] == "isomorphic"


def test_failure_exit_code_is_distinct():
    assert len({EXIT_OK, EXIT_FAIL, EXIT_INDETERMINATE, EXIT_BOUNDED, EXIT_USAGE}) == 5
