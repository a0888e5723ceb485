import json
import subprocess
import sys

import pytest

from pyramid_algebras.cli import main, parse_vertex


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_gen_dot_pyramid(capsys):
    code, out, _ = run(capsys, "gen", "3", "4", "--format", "dot")
    assert code == 0 and out.startswith("digraph Q {")
    nodes = [l for l in out.splitlines() if l.strip().endswith(";") and "->" not in l]
    assert len(nodes) == 20


def test_gen_json_chain(capsys):
    code, out, _ = run(capsys, "gen", "1", "4", "--format", "json")
    doc = json.loads(out)
    assert doc["vertices"] == [[1], [2], [3], [4]] and len(doc["arrows"]) == 3


def test_gen_stable_table(capsys):
    code, out, _ = run(capsys, "gen", "2", "3", "--stable")
    assert "vertices=6" in out
    assert len([l for l in out.splitlines() if l.startswith("arrow") and l.split()[2] == "3"]) == 3


def test_gen_cover(capsys):
    code, out, _ = run(capsys, "gen", "1", "3", "--cover", "0..1", "--format", "json")
    doc = json.loads(out)
    assert len(doc["vertices"]) == 6


def test_resolve_compare(capsys):
    code, out, _ = run(capsys, "resolve", "3", "4", "--stable", "--vertex", "1,1,1", "--compare")
    assert code == 0 and "no differences" in out


def test_resolve_predict_only(capsys):
    code, out, _ = run(capsys, "resolve", "1", "4", "--stable", "--vertex", "1", "--predict-only")
    lines = [l.split() for l in out.splitlines()[1:5]]
    assert [l[-1] for l in lines] == ["P(1)<0>", "P(2)<1>", "P(3)<2>", "P(4)<3>"]


def test_resolve_json_all(capsys):
    code, out, _ = run(capsys, "resolve", "1", "4", "--format", "json")
    doc = json.loads(out)
    assert len(doc) == 4 and all(d["terminal"]["finite"] for d in doc)


def test_resolve_cover_vertex(capsys):
    code, out, _ = run(capsys, "resolve", "1", "4", "--cover", "0..6", "--vertex", "2@0", "--compare")
    assert code == 0 and "no differences" in out


def test_bad_vertex(capsys):
    code, out, err = run(capsys, "resolve", "1", "4", "--stable", "--vertex", "9")
    assert code == 1 and "not a vertex" in err


def test_invalid_m_is_usage_error(capsys):
    with pytest.raises(SystemExit) as e:
        main(["cone", "1", "2"])
    assert e.value.code == 2


def test_verify_theorems(capsys):
    code, out, _ = run(capsys, "verify", "--theorem", "periodicity", "1", "4")
    assert code == 0 and "period 8" in out
    code, out, _ = run(capsys, "verify", "--theorem", "koszul-type", "1", "4")
    assert code == 0 and "(2, 3)" in out
    with pytest.raises(SystemExit):
        main(["verify", "--theorem", "nope", "1", "4"])


def test_verify_corpus_with_junit(capsys, tmp_path):
    path = tmp_path / "out.xml"
    code, out, _ = run(capsys, "verify", "--corpus", "1", "3", "--junit", str(path))
    assert code == 0 and "0 failed" in out
    assert path.read_text().startswith("<testsuite")


def test_cone_manifest(capsys):
    code, out, _ = run(capsys, "cone", "1", "3")
    doc = json.loads(out)
    assert doc["target_n"] == 2 and doc["stages"][4]["matches_direct"]


def test_build_and_dualize(capsys, monkeypatch):
    code, out, _ = run(capsys, "build", "1", "4", "--format", "json")
    doc = json.loads(out)
    assert doc["field"] == "QQ" and len(doc["relations"]) == 2
    code, out, _ = run(capsys, "dualize", "1", "4")
    assert "# relations\n# graded dimensions" in out
    monkeypatch.setenv("PYRAMID_FIELD", "gf:7")
    code, out, _ = run(capsys, "build", "2", "3", "--stable")
    assert "GF(7)" in out and "6*g[" in out
    code, out, _ = run(capsys, "--field", "rational", "build", "2", "3")
    assert "over QQ" in out


def test_outputs_are_deterministic(capsys):
    outs = [run(capsys, "resolve", "2", "3", "--stable", "--format", "json")[1] for _ in range(2)]
    assert outs[0] == outs[1]


def test_parse_vertex():
    assert parse_vertex("1,2,3") == (1, 2, 3)
    assert parse_vertex("2@-1") == (2, -1)


def test_console_script_module():
    r = subprocess.run([sys.executable, "-m", "pyramid_algebras.cli", "gen", "1", "3"], capture_output=True, text=True)
    assert r.returncode == 0 and "vertices=3" in r.stdout
