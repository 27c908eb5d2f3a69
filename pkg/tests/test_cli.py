import json
import subprocess
import sys
from fractions import Fraction as Fr
from io import StringIO

import pytest

from rkderive.cli import main
from rkderive.tableau import catalogue, from_text_form, to_text_form

from reference import ORDER4_BASIS


def run(*argv):
    out = StringIO()
    try:
        code = main(list(argv), out=out)
    except SystemExit as exc:
        code = exc.code
    return code, out.getvalue()


def test_conditions_text():
    code, text = run("conditions", "--stages", "2", "--order", "2")
    assert code == 0
    assert text.splitlines() == ["b1 + b2 - 1", "2*a21*b2 - 1", "2*b2*c2 - 1"]


def test_conditions_machine():
    code, text = run("conditions", "--stages", "4", "--order", "4", "--autonomous", "--row-sum",
                     "--format", "machine")
    doc = json.loads(text)
    assert code == 0 and len(doc["equations"]) == 7 and doc["stages"] == 4


def test_conditions_deterministic():
    assert run("conditions", "--stages", "4", "--order", "4") == run("conditions", "--stages", "4", "--order", "4")


def test_trees():
    code, text = run("trees", "--order", "4")
    assert code == 0
    assert len(text.splitlines()) == 1 + 8
    assert "a32*a43*b4*c2 - 1/24" in text


def test_reduce_reproduces_basis(tmp_path):
    eqs = tmp_path / "eq.txt"
    eqs.write_text(run("conditions", "--stages", "4", "--order", "4")[1])
    code, text = run("reduce", str(eqs), "--subst", "a21=c2", "--subst", "a31=c3-a32",
                     "--subst", "a41=c4-a42-a43")
    assert code == 0
    assert text.splitlines() == ORDER4_BASIS


def test_reduce_errors(tmp_path):
    assert run("reduce", str(tmp_path / "missing.txt"))[0] == 2
    bad = tmp_path / "bad.txt"
    bad.write_text("b1 + * 2\n")
    assert run("reduce", str(bad))[0] == 2
    good = tmp_path / "good.txt"
    good.write_text("x - 1\n")
    assert run("reduce", str(good), "--subst", "zz=1")[0] == 2


def test_solve_family_point():
    code, text = run("solve-family", "--scenario", "order3", "--c2", "1/2", "--c3", "1")
    assert code == 0
    vals = dict(line.split(" = ") for line in text.splitlines() if " = " in line)
    assert (vals["a31"], vals["a32"], vals["b2"]) == ("-1", "2", "2/3")


def test_solve_family_symbolic():
    code, text = run("solve-family", "--scenario", "order4-equal-c")
    assert code == 0 and "# free: r1" in text and "singular" in text


def test_solve_family_excluded_point(capsys):
    code, _ = run("solve-family", "--scenario", "order3", "--c2", "1/2", "--c3", "1/2")
    assert code == 2
    assert capsys.readouterr().err.startswith("error:")


def test_float_literal_rejected(capsys):
    code, _ = run("solve-family", "--scenario", "order3", "--c2", "0.5", "--c3", "1")
    assert code == 2
    assert "error:" in capsys.readouterr().err


def test_verify_exit_codes(capsys):
    code, text = run("verify", "--order", "4", "rk4")
    assert code == 0 and text.startswith("satisfied")
    code, text = run("verify", "--order", "2", "euler")
    assert code == 1 and "residual -1/2" in text
    assert "error:" in capsys.readouterr().err
    assert run("verify", "--order", "4", "no-such-method")[0] == 2


def test_verify_tableau_file(tmp_path):
    path = tmp_path / "m.json"
    path.write_text(to_text_form(catalogue()["kutta38"]))
    assert run("verify", "--order", "4", str(path))[0] == 0
    path.write_text('{"c": ["0"], "a": [[]], "b": [0.5]}')
    assert run("verify", "--order", "1", str(path))[0] == 2


def test_embed_pair():
    code, text = run("embed", "kutta38", "--r1", "1/6")
    assert code == 0
    t = from_text_form(text)
    assert t.bhat == (Fr(1, 12), Fr(1, 2), Fr(1, 4), Fr(0), Fr(1, 6))
    code, tex = run("embed", "kutta38", "--r1", "1/6", "--format", "latex")
    assert code == 0 and tex.count(r"\\") == 7


def test_embed_family_listing():
    code, text = run("embed", "kutta38")
    assert code == 0 and "s5 = r1" in text


def test_order_test():
    code, text = run("order-test", "rk4", "--problem", "exp", "--h0", "1/10")
    assert code == 0
    observed = float(text.strip().splitlines()[-1].split()[-1])
    assert 3.8 <= observed <= 4.2


def test_order_test_needs_bhat():
    assert run("order-test", "rk4", "--problem", "exp", "--h0", "1/10", "--weights", "bhat")[0] == 2


@pytest.mark.parametrize("fmt", ["text", "latex", "machine"])
def test_catalogue(fmt):
    code, text = run("catalogue", "--format", fmt)
    assert code == 0 and "kutta38" in text


def test_catalogue_single_machine():
    code, text = run("catalogue", "--name", "rk4", "--format", "machine")
    assert code == 0 and json.loads(text)["b"] == ["1/6", "1/3", "1/3", "1/6"]


def test_usage_errors():
    assert run()[0] == 2
    assert run("nonsense")[0] == 2
    assert run("conditions", "--stages", "x", "--order", "2")[0] == 2


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "rkderive", "verify", "--order", "2", "euler"],
                          capture_output=True, text=True)
    assert proc.returncode == 1
    assert proc.stderr.startswith("error:")
