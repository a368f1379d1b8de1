import io
import json
import subprocess
import sys

import pytest

from itypes import parse_term
from itypes.cli import run
from itypes.selftest import E_TYPE, GOLDEN_FILE, run_selftest
from itypes.syntax import is_lambda_I


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def call_json(*argv):
    code, out, _ = call(*argv, "--json")
    return code, json.loads(out)


def test_normalize():
    code, out, _ = call("normalize", "--term", r"(\x. x) y")
    assert code == 0 and out.strip() == "y"


def test_normalize_reports_exhausted_fuel():
    code, doc = call_json("normalize", "--term", r"(\x. x x) (\x. x x)", "--mode", "beta", "--fuel", "20")
    assert code == 1 and doc["exhausted"] and doc["steps"] == 20


def test_classify_identity():
    code, doc = call_json("classify", "--type", "Id")
    assert code == 0
    assert doc["verdict"]["kind"] == "ITypeUpToBound" and doc["order"] == 1


def test_classify_expect_itype_fails_on_booleans():
    code, doc = call_json("classify", "--type", "Bool", "--expect-itype")
    assert code == 1 and doc["verdict"]["kind"] == "NotIType"


def test_witness_command():
    code, doc = call_json("witness", "--type", E_TYPE, "--term", r"\x. x id")
    assert code == 0 and doc["checked"]
    assert not is_lambda_I(parse_term(doc["final"]))


def test_typecheck():
    code, doc = call_json("typecheck", "--term", "x", "--type", "X -> X", "--ctx", "x : forall Y. Y -> Y")
    assert code == 0 and doc["typable"] and doc["checked"]
    assert doc["forall_elims"] == [{"path": [], "variant": 2}]
    code, doc = call_json("typecheck", "--term", "K1", "--type", "Id")
    assert code == 1 and doc["typable"] is False
    code, doc = call_json("typecheck", "--simple", "--term", r"\x. \y. x")
    assert code == 0 and doc["type"] == "X -> Y -> X"


def test_polarity_and_erase():
    code, doc = call_json("polarity", "--type", E_TYPE)
    assert code == 0 and not doc["in_pos"] and doc["negative_quantifiers"] == ["bd"]
    code, out, _ = call("erase", "--type", "Bool")
    assert out.strip() == "X -> X -> X"


def test_inhabit():
    code, doc = call_json("inhabit", "--type", "Bool")
    assert code == 0
    assert [i["term"] for i in doc["inhabitants"]] == [r"\x. \y. x", r"\x. \y. y"]


@pytest.mark.parametrize("argv", [
    [],
    ["frobnicate"],
    ["parse", "--term", "(x"],
    ["typecheck", "--term", "x"],
    ["parse"],
    ["typecheck", "--term", "x", "--type", "X", "--ctx", "nonsense"],
    ["sweep", "--quantifiers", "3"],
])
def test_usage_errors_exit_2(argv):
    code, _, err = call(*argv)
    assert code == 2
    assert "usage" in err


def test_domain_error_exits_1():
    code, _, err = call("classify", "--type", "X -> X")
    assert code == 1 and "closed" in err


def test_json_output_is_byte_identical_across_runs():
    argv = ("classify", "--type", E_TYPE, "--json")
    assert call(*argv)[1] == call(*argv)[1]


def test_golden_comparison(tmp_path):
    _, doc = call_json("erase", "--type", "Bool")
    good = tmp_path / "good.json"
    good.write_text(json.dumps(doc))
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"erased": "X"}))
    assert call("erase", "--type", "Bool", "--golden", str(good))[0] == 0
    code, _, err = call("erase", "--type", "Bool", "--golden", str(bad))
    assert code == 1 and "differs" in err


def test_selftest_filter_runs_one_suite():
    code, doc = call_json("selftest", "--filter", "ij-typing")
    assert code == 0
    assert [r["name"] for r in doc["results"]] == ["ij-typing"]


def test_selftest_passes_on_fresh_checkout():
    ok, results = run_selftest()
    failed = [(n, d) for n, r, d in results if not r]
    assert ok, failed
    assert len(results) >= 20


def test_corrupted_golden_is_named(tmp_path):
    entries = json.loads(GOLDEN_FILE.read_text())
    for e in entries:
        if e["name"] == "golden-normalize":
            e["expect"]["result"] = "z"
    path = tmp_path / "goldens.json"
    path.write_text(json.dumps(entries))
    ok, results = run_selftest("golden-normalize", golden_path=path)
    assert not ok
    assert [n for n, r, _ in results if not r] == ["golden-normalize"]
    assert len(results) == 2


def test_unreadable_golden_file(tmp_path):
    ok, results = run_selftest("golden-file", golden_path=tmp_path / "missing.json")
    assert not ok and results[0][0] == "golden-file"


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "itypes.cli", "normalize", "--term", "##0 id id", "--mode", "beta"],
                          capture_output=True, text=True, timeout=60)
    assert proc.returncode == 0
    assert parse_term(proc.stdout.strip()) == parse_term(r"\f. f")
