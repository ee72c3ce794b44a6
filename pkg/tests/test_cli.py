import json

from stablegon.cli import main
from stablegon.dynkin import DynkinQuiver


def _write(path, obj):
    path.write_text(json.dumps(obj))
    return str(path)


def _quiver(tmp_path, name, signs, fname="q.json"):
    return _write(tmp_path / fname, DynkinQuiver.from_signs(name, signs).to_json())


def test_realize_and_verify(tmp_path):
    q = _quiver(tmp_path, "A2", "+")
    out = str(tmp_path / "p.json")
    assert main(["realize", "--quiver", q, "--out", out, "--svg", str(tmp_path / "p.svg")]) == 0
    assert len(json.loads(open(out).read())["vertices"]) == 3
    rep = str(tmp_path / "r.json")
    assert main(["verify", "--polygon", out, "--against", q, "--report", rep]) == 0
    r = json.loads(open(rep).read())
    assert r["passed"] and r["version"]
    assert [s["name"] for s in r["steps"]] == ["relations", "stable", "intersection quiver",
                                               "matches target", "stability function",
                                               "total stability", "ext quiver"]
    assert all(len(i["sha256"]) == 64 for i in r["inputs"])


def test_realize_d4_has_punctures(tmp_path):
    out = str(tmp_path / "p.json")
    assert main(["realize", "--quiver", _quiver(tmp_path, "D4", "+++"), "--out", out]) == 0
    d = json.loads(open(out).read())
    assert len(d["vertices"]) == 6 and len(d["punctures"]) == 2


def test_realize_e8_from_fixture(tmp_path):
    out = str(tmp_path / "p.json")
    assert main(["realize", "--quiver", _quiver(tmp_path, "E8", "+-+-+-+"), "--out", out]) == 0
    assert len(json.loads(open(out).read())["vertices"]) == 30


def test_verify_failures(tmp_path):
    q = _quiver(tmp_path, "D5", "++-+")
    out = str(tmp_path / "p.json")
    assert main(["realize", "--quiver", q, "--out", out]) == 0
    d = json.loads(open(out).read())
    # wrong orientation
    wrong = _quiver(tmp_path, "D5", "++--", "w.json")
    rep = str(tmp_path / "r.json")
    assert main(["verify", "--polygon", out, "--against", wrong, "--report", rep]) == 1
    steps = {s["name"]: s["ok"] for s in json.loads(open(rep).read())["steps"]}
    assert steps["matches target"] is False
    # punctures pushed out of the level gon, symmetrically
    d["punctures"] = [["0", "-9/10"], ["0", "9/10"]]
    moved = _write(tmp_path / "m.json", d)
    assert main(["verify", "--polygon", moved, "--report", rep]) == 1
    st = [s for s in json.loads(open(rep).read())["steps"] if s["name"] == "stable"][0]
    failed = [c["name"] for c in st["clauses"] if not c["ok"]]
    assert failed and all("puncture" in c and "level-3" in c for c in failed)
    # a relation violation is a failed check, not bad input
    d["punctures"] = [["0", "-1/10"], ["0", "2/10"]]
    assert main(["verify", "--polygon", _write(tmp_path / "v.json", d), "--report", rep]) == 1


def test_invalid_input(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert main(["verify", "--polygon", str(bad)]) == 2
    assert main(["verify", "--polygon", str(tmp_path / "missing.json")]) == 2
    assert main(["realize", "--quiver", _write(tmp_path / "q.json", {"dynkin_type": "E", "rank": 9,
                                                                      "orientation": []}),
                 "--out", str(tmp_path / "o.json")]) == 2
    assert main(["dt", "--polygon", str(bad), "--order", "-1"]) == 2
    assert main(["nonsense"]) == 2


def test_search_exhausted(tmp_path):
    q = _quiver(tmp_path, "E7", "+-+-+-")
    assert main(["realize", "--quiver", q, "--out", str(tmp_path / "o.json"), "--no-fixtures",
                 "--max-candidates", "1"]) == 3


def test_front_ends(tmp_path, capsys):
    out = str(tmp_path / "p.json")
    assert main(["realize", "--quiver", _quiver(tmp_path, "A5", "+-++"), "--out", out]) == 0
    capsys.readouterr()
    assert main(["diagonals", "--polygon", out]) == 0
    assert json.loads(capsys.readouterr().out)["count"] == 15
    assert main(["stability", "--polygon", out]) == 0
    assert json.loads(capsys.readouterr().out)["report"]["verdict"] is True

    a2 = str(tmp_path / "a2.json")
    assert main(["realize", "--quiver", _quiver(tmp_path, "A2", "+"), "--out", a2]) == 0
    capsys.readouterr()
    assert main(["dt", "--polygon", a2, "--order", "4", "--compare", "source-order"]) == 0
    r = json.loads(capsys.readouterr().out)
    assert r["compare"]["equal"] is True and len(r["factors"]) == 3


def test_dt_ties(tmp_path, capsys):
    out = str(tmp_path / "p.json")
    assert main(["realize", "--quiver", _quiver(tmp_path, "A3", "+-"), "--out", out]) == 0
    capsys.readouterr()
    assert main(["dt", "--polygon", out, "--order", "3"]) == 1
    assert "same phase" in json.loads(capsys.readouterr().out)["error"]
    assert main(["dt", "--polygon", out, "--order", "3", "--perturb", "--compare", "source-order"]) == 0


def test_outputs_are_deterministic(tmp_path, capsys):
    out = str(tmp_path / "p.json")
    assert main(["realize", "--quiver", _quiver(tmp_path, "E6", "--+-+"), "--out", out]) == 0
    a, b = str(tmp_path / "a.svg"), str(tmp_path / "b.svg")
    assert main(["svg", "--polygon", out, "--out", a]) == 0
    assert main(["svg", "--polygon", out, "--out", b]) == 0
    assert open(a, "rb").read() == open(b, "rb").read()
    assert open(a).read().startswith("<?xml")
    r1, r2 = str(tmp_path / "r1.json"), str(tmp_path / "r2.json")
    main(["verify", "--polygon", out, "--report", r1])
    main(["verify", "--polygon", out, "--report", r2])
    assert open(r1, "rb").read() == open(r2, "rb").read()
