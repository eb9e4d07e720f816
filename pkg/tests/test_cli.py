from __future__ import annotations

import json
import subprocess
import sys

import pytest

from hallrud import gf
from hallrud.catalog import LABEL_M, rep_of_label
from hallrud.cli import EXIT_BOUND, EXIT_FAIL, EXIT_OK, EXIT_USAGE, main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv, "--format", "json")
    return code, json.loads(out)


def test_product(capsys):
    code, data = run_json(capsys, "product", "--q", "2", "P1", "I0")
    assert code == EXIT_OK and data["schema"] == 1
    terms = {t["class"]: t["coeff"] for t in data["terms"]}
    assert set(terms) == {"M", "P1+I0"}
    assert all(c.startswith("1") for c in terms.values())


def test_product_with_unit(capsys):
    code, out, _ = run(capsys, "product", "--q", "2", "0", "M")
    assert code == EXIT_OK and out.split()[-1] == "M"


def test_twisted_product(capsys):
    code, untw = run_json(capsys, "product", "--q", "2", "P0", "I0")
    code2, tw = run_json(capsys, "product", "--q", "2", "--twisted", "P0", "I0")
    assert code == code2 == EXIT_OK
    assert {t["class"] for t in untw["terms"]} == {t["class"] for t in tw["terms"]}
    assert untw["terms"] != tw["terms"]


def test_verify_passes(capsys):
    code, data = run_json(capsys, "verify", "--suite", "szanto", "--q", "2", "--max", "2")
    assert code == EXIT_OK and data["ok"] and data["failures"] == 0


def test_verify_finpres(capsys):
    code, data = run_json(capsys, "verify", "--suite", "finpres", "--d", "2")
    assert code == EXIT_OK and data["ok"]


def test_verify_in_parallel(capsys):
    code, data = run_json(capsys, "verify", "--suite", "pbw", "--window", "1", "--jobs", "2")
    assert code == EXIT_OK and data["count"] > 0 and data["ok"]


def test_unknown_suite(capsys):
    code, _, err = run(capsys, "verify", "--suite", "nope")
    assert code == EXIT_USAGE and "unknown suite" in err


def test_classify(tmp_path, capsys):
    path = tmp_path / "rep.json"
    path.write_text(json.dumps(rep_of_label(LABEL_M, gf.field(2)).to_json()))
    code, out, _ = run(capsys, "classify", "--rep", str(path))
    assert code == EXIT_OK and out.strip() == "M"


def test_classify_rejects_bad_relations(tmp_path, capsys):
    path = tmp_path / "rep.json"
    path.write_text(json.dumps({"q": 2, "d": [1, 1], "e": [[1]], "ep": [[1]]}))
    code, _, err = run(capsys, "classify", "--rep", str(path))
    assert code == EXIT_USAGE


def test_theta_beta(capsys):
    code, data = run_json(capsys, "theta-beta", "--q", "2", "--dim", "2,2")
    assert code == EXIT_OK and data["minC"] == 2
    assert {"M", "M'", "R(0;2)"} <= {m["class"] for m in data["minimizers"]}


def test_interp(capsys):
    code, out, _ = run(capsys, "interp", "--x", "I0", "--y", "P1", "--z", "R2", "--qs", "2,3,5", "--holdout", "7")
    assert code == EXIT_OK and out.splitlines()[0] == "1"


def test_interp_non_integral(capsys):
    code, data = run_json(capsys, "interp", "--x", "I0", "--y", "P1", "--z", "a^4")
    assert code == EXIT_FAIL and data["ok"] is False


def test_interp_bad_samples(capsys):
    code, _, _ = run(capsys, "interp", "--x", "I0", "--y", "P1", "--z", "R2", "--qs", "2,3", "--holdout", "3")
    assert code == EXIT_USAGE


def test_express(capsys):
    code, data = run_json(capsys, "express", "--q", "3", "[I0][P1]")
    assert code == EXIT_OK
    assert {t["monomial"] for t in data["terms"]} == {"[P1] [I0]", "R2", "a^4"}


def test_express_not_spherical(capsys):
    code, _, _ = run(capsys, "express", "--q", "2", "[R(x;1)]")
    assert code in (EXIT_FAIL, EXIT_USAGE)


def test_normalize(capsys):
    code, data = run_json(capsys, "normalize", "E[1] E[0]")
    assert code == EXIT_OK and len(data["result"]) == 1


def test_bound_exceeded(capsys):
    code, _, err = run(capsys, "product", "--q", "2", "P9", "I0")
    assert code == EXIT_BOUND and "bound" in err


def test_bound_cap(capsys):
    code, _, _ = run(capsys, "product", "--q", "2", "--bound", "9,9", "P0", "I0")
    assert code == EXIT_USAGE
    code, _, _ = run(capsys, "product", "--q", "2", "--bound", "9,9", "--allow-large", "P0", "I0")
    assert code == EXIT_OK


@pytest.mark.parametrize("argv", [["product", "--q", "6", "P0", "I0"], ["product", "--q", "2", "Q7", "I0"],
                                  ["theta-beta", "--dim", "x"], []])
def test_usage_errors(capsys, argv):
    code, _, _ = run(capsys, *argv)
    assert code == EXIT_USAGE


def test_console_entry_point():
    out = subprocess.run([sys.executable, "-m", "hallrud.cli", "product", "P1", "I0"],
                         capture_output=True, text=True, check=True)
    assert "M" in out.stdout
