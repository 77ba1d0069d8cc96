import io
import subprocess
import sys

import pytest

from almostlocal import gff as G
from almostlocal import perm as P
from almostlocal import portrait as Q
from almostlocal.cli import main
from almostlocal.tree import V0


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out)
    return code, out.getvalue()


@pytest.fixture(scope="module")
def files(tmp_path_factory):
    root = tmp_path_factory.mktemp("portraits")
    Pr = G.GroupPair.from_specs("dihedral(4)", "sym(4)")
    data = {
        "id": Q.identity(4),
        "g": G.star_element(Pr, V0, P.parse_perm("(1 2 3)", 4)),
        "h2": G.translations(Pr)[2],
        "bad": Q.Portrait.from_data(4, V0, {}, {V0: P.parse_perm("(1 2 3)", 4),
                                                (1,): P.parse_perm("(1 2 3)", 4)}),
    }
    paths = {}
    for k, v in data.items():
        paths[k] = root / f"{k}.portrait"
        paths[k].write_text(Q.format_portrait(v))
    return paths


def test_classify():
    code, out = run("classify", "--F", "dihedral(4)", "--Fp", "sym(4)")
    assert code == 0 and "thm413: yes" in out
    code, out = run("classify", "--F", "cyclic(5)", "--Fp", "alt(5)")
    assert code == 0 and "cor414: yes" in out
    assert run("classify", "--F", "sym(4)", "--Fp", "alt(4)")[0] == 1
    assert run("classify", "--F", "nonsense(4)", "--Fp", "alt(4)")[0] == 1


def test_usage_errors():
    for argv in (["classify", "--F", "sym(4)"], ["frobnicate"], ["scan", "--degree", "4", "--bogus"],
                 ["elem", "--pair", "a,b", "--in", "x", "--op", "dance"]):
        with pytest.raises(SystemExit) as exc:
            run(*argv)
        assert exc.value.code == 2


def test_scan():
    code, out = run("scan", "--degree", "4", "--filter", "thm413 and proper")
    rows = [x for x in out.splitlines() if not x.startswith(("F\t", "#"))]
    assert code == 0 and len(rows) == 1
    assert run("scan", "--degree", "9")[0] == 1


def test_wreath():
    code, out = run("wreath", "--D", "cyclic(2)", "--Dp", "cyclic(4)", "--ell", "4", "--level", "1")
    assert code == 0
    last = out.split("\n\n")[-1]
    assert "mu_K: 8/1" in last and "diverges: yes" in last and "obstruction: yes" in last
    assert run("wreath", "--D", "cyclic(2)", "--Dp", "cyclic(4)", "--ell", "3")[0] == 1


def test_elem_ops(files, tmp_path):
    pair = "dihedral(4),sym(4)"
    code, out = run("elem", "--pair", pair, "--in", str(files["id"]), "--op", "report")
    assert code == 0 and "N: 0" in out
    code, out = run("elem", "--pair", pair, "--in", str(files["g"]), "--op", "symdiff")
    assert code == 0 and out.strip() == "2"
    code, out = run("elem", "--pair", pair, "--in", str(files["h2"]), "--op", "word", "--out", str(tmp_path / "w"))
    assert code == 0 and "length: 1" in out
    assert (tmp_path / "w" / "word.txt").read_text().split() == ["h2"]
    for op in ("decompose", "reduce"):
        code, out = run("elem", "--pair", pair, "--in", str(files["g"]), "--op", op, "--out", str(tmp_path / op))
        assert code == 0 and "verified: yes" in out
        for f in (tmp_path / op).glob("*.portrait"):
            g = Q.parse_portrait(f.read_text())
            assert Q.parse_portrait(Q.format_portrait(g)) == g


def test_elem_reduce_needs_hypotheses(files):
    code, _ = run("elem", "--pair", "cyclic(4),sym(4)", "--in", str(files["id"]), "--op", "reduce")
    assert code == 1


def test_elem_rejects_nonmembers(files, capsys):
    code, _ = run("elem", "--pair", "dihedral(4),sym(4)", "--in", str(files["bad"]), "--op", "report")
    assert code == 1
    assert 'tail ""' in capsys.readouterr().err
    assert run("elem", "--pair", "dihedral(4),sym(4)", "--in", "/nonexistent", "--op", "report")[0] == 1
    assert run("elem", "--pair", "sym(4)", "--in", str(files["id"]), "--op", "report")[0] == 1


def test_examples():
    code, out = run("examples", "--run", "all")
    assert code == 0 and "FAIL" not in out
    code, out = run("examples", "--run", "psl_pgl_q5")
    assert code == 0 and out.startswith("PASS psl_pgl_q5")
    assert run("examples", "--run", "nope")[0] == 1


def test_deterministic_output():
    a = run("--seed", "3", "scan", "--degree", "4", "--filter", "cor421")
    b = run("--seed", "3", "scan", "--degree", "4", "--filter", "cor421")
    assert a == b


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "almostlocal", "classify", "--F", "alt(4)", "--Fp", "sym(4)"],
                         capture_output=True, text=True, check=False)
    assert res.returncode == 0 and "cor421: yes" in res.stdout
