import io
import json
import subprocess
import sys

import pytest

from addfrob import cli


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = cli.run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def test_eval_sigma_fermat():
    code, out, _ = run("eval-sigma", "--field", "p=2,m=1", "--sigma", "forall a (a^p = a)")
    assert code == 0 and out.strip() == "true"


def test_unknown_flag_is_usage_error(capsys):
    code, _, _ = run("normalize", "--bogus", "1")
    assert code == 2


def test_parse_error_exit_code():
    code, _, err = run("normalize", "--poly", "x1^2 +")
    assert code == 2 and "usage" in err


def test_json_is_deterministic():
    args = ("--output", "json", "normalize", "--poly", "x1^4 + poly{z}*x2^2")
    a, b = run(*args), run(*args)
    assert a == b and a[0] == 0
    doc = json.loads(a[1])
    assert doc["ok"] and doc["result"]["identity_holds"]
    assert list(doc) == sorted(doc)


@pytest.mark.parametrize("argv,expect", [
    (("wronskian", "--s", "1", "--family", "1; z"), "independent, eps = (0, 1)"),
    (("wronskian", "--s", "1", "--family", "1; z^2"), "dependent"),
    (("hasse", "--eps", "1", "--expr", "z^3"), "z^2"),
    (("eval-bounded", "--formula", "exists y:R (x = y^2)", "--assign", "x=z^2"), "true"),
    (("eval-bounded", "--formula", "exists y:R (x = y^2)", "--assign", "x=z"), "false"),
    (("to-sigma", "--evaluate", "--sentence", "exists x:R (x + x = 0 and x != 0)"), "true"),
])
def test_subcommands(argv, expect):
    code, out, _ = run(*argv)
    assert code == 0
    assert out.strip().splitlines()[-1] == expect


def test_reduce_and_preimage():
    code, out, _ = run("--output", "json", "reduce", "--poly", "x1^2 + poly{z}*x2^2", "--u", "1/z^9")
    assert code == 0 and json.loads(out)["result"]["Eord"] >= 1
    code, out, _ = run("preimage", "--poly", "x1^2 + poly{z}*x2^2", "--y", "z^3+1")
    assert code == 0 and "(1, z)" in out


def test_resource_cap_exit_code(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# tiny caps\ncap.enum = 1\n")
    code, _, err = run("--config", str(cfg), "preimage", "--poly", "x1^2 + poly{z}*x2^2", "--y", "z^3+1")
    assert code == 3 and "resource" in err


def test_config_file_and_override(tmp_path, monkeypatch):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("field = p=3\n")
    code, out, _ = run("--config", str(cfg), "hasse", "--eps", "1", "--expr", "z^3 + z^2")
    assert out.strip() == "2*z"
    code, out, _ = run("--config", str(cfg), "--field", "p=2", "hasse", "--eps", "1", "--expr", "z^3 + z^2")
    assert out.strip() == "z^2"
    monkeypatch.setenv("ADDFROB_FIELD", "p=5")
    code, out, _ = run("hasse", "--eps", "1", "--expr", "z^3")
    assert out.strip() == "3*z^2"


def test_invariant_violation_exit_code(monkeypatch):
    monkeypatch.setattr(cli, "check_reduction_witness", lambda f, w, L: ["forced"])
    code, _, err = run("reduce", "--poly", "x1^2 + poly{z}*x2^2", "--u", "1/z^3")
    assert code == 1 and "invariant" in err


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "addfrob", "eval-sigma", "--sigma", "forall a (a^p = a)"],
                         capture_output=True, text=True, timeout=120)
    assert res.returncode == 0 and res.stdout.strip() == "true"


def test_selftest_quick_subset():
    code, out, _ = run("selftest", "--quick", "--only", "2,3")
    assert code == 0 and out.count("PASS") == 2
