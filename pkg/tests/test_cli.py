import json
import re
import subprocess
import sys
from pathlib import Path

import pytest

from ratmap.cli import main
from ratmap.dsl import load_file

MODELS = Path(__file__).resolve().parent.parent / "models"


def m(name):
    return str(MODELS / name)


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv, "--json")
    return code, json.loads(out)


def test_freeness_example(capsys):
    code, out, _ = run(capsys, "freeness", m("s5xs11.alg"), m("s8.cdga"), "--max-degree", "14")
    assert code == 0
    assert out.splitlines()[0] == "FREE; generators at degrees 3, 4, 10"


def test_hn_example(capsys):
    code, out, _ = run(capsys, "hn", m("s8.cdga"))
    assert code == 0 and out == "dl = 2; m_H of rationalization = 1\n"


def test_invariants_example(capsys):
    code, out, _ = run(capsys, "invariants", m("cp3.alg"))
    assert code == 0 and out == "CP3: cup = 3, nilpotency = 3, dim = 6\n"


def test_exit_codes(capsys, tmp_path):
    bad = tmp_path / "bad.cdga"
    bad.write_text("cdga B { gen x:8; d x = y; }")
    assert run(capsys, "validate", str(bad))[0] == 2
    assert run(capsys, "validate", str(tmp_path / "missing.cdga"))[0] == 2
    nonmin = tmp_path / "nonmin.cdga"
    nonmin.write_text("cdga N { gen x:3; gen y:2; d y = x; }")
    assert run(capsys, "validate", str(nonmin))[0] == 0
    assert run(capsys, "hn", str(nonmin))[0] == 3
    assert run(capsys, "postnikov", m("cp2.alg"), m("s5.cdga"), "--max-degree", "6")[0] == 3
    assert run(capsys, "freeness", m("s8.cdga"), m("s8.cdga"), "--max-degree", "6")[0] == 2
    assert run(capsys, "cohomology", m("s8.cdga"))[0] == 3
    code, _, err = run(capsys, "make", "cp", "0")
    assert code == 3 and "positive" in err


def test_json_schema(capsys):
    code, doc = run_json(capsys, "freeness", m("cp2.alg"), m("s6.cdga"), "--max-degree", "8")
    assert code == 0
    assert set(doc) >= {"command", "inputs", "invariants", "verdict", "generators", "witness",
                        "tower", "timings_ms"}
    assert doc["invariants"] == {"dl": 2, "cup": 2, "conn": 5, "dim": 4, "nilpotency": 2}
    assert doc["verdict"] == "NOT_FREE"
    assert doc["witness"] == {"y": "y11", "r": 2, "omega": "x^2", "degree": 7}
    assert [i["name"] for i in doc["inputs"]] == ["CP2", "S6"]


def _numbers(text):
    return {k: v for k, v in re.findall(r"([A-Za-z_]+) = (inf|-?\d+)", text)}


@pytest.mark.parametrize("argv", [
    ("freeness", "s5xs11.alg", "s8.cdga", "--max-degree", "14"),
    ("freeness", "cp2.alg", "s6.cdga", "--max-degree", "8"),
    ("postnikov", "cp3.alg", "s8.cdga", "--max-degree", "12"),
    ("invariants", "cp3.alg", "s8.cdga"),
    ("hn", "e4.cdga"),
])
def test_json_and_human_agree(capsys, argv):
    args = [m(a) if "." in a else a for a in argv]
    _, human, _ = run(capsys, *args)
    _, doc = run_json(capsys, *args)
    nums = _numbers(human)
    flat = dict(doc["invariants"])
    if doc["witness"]:
        flat.update({"y": doc["witness"]["y"], "r": doc["witness"]["r"],
                     "degree": doc["witness"]["degree"]})
    if doc["tower"]:
        flat.update({"s": doc["tower"]["s"], "achieved": doc["tower"]["achieved"]})
    if "m_H" in doc.get("details", {}):
        flat["rationalization"] = doc["details"]["m_H"]
    for k, v in nums.items():
        if k in flat and flat[k] is not None:
            assert str(flat[k]) == v, k
    if argv[0] == "freeness" and doc["verdict"] == "FREE":
        listed = human.splitlines()[0].split("degrees ")[1]
        assert listed == ", ".join(map(str, doc["generators"]))
    if doc["witness"]:
        assert f"omega = {doc['witness']['omega']}" in human


def test_deterministic_output(capsys):
    args = ("postnikov", m("cp3.alg"), m("s8.cdga"), "--max-degree", "10", "--json")
    _, a = run_json(capsys, *args[:-1])
    _, b = run_json(capsys, *args[:-1])
    a.pop("timings_ms"), b.pop("timings_ms")
    assert a == b


def test_map_model_emit_round_trip(capsys, tmp_path):
    out = tmp_path / "map.cdga"
    code, text, _ = run(capsys, "map-model", m("cp2.alg"), m("s6.cdga"), "--max-degree", "8",
                        "--emit", str(out))
    assert code == 0 and "h_x2__y11 : 7   D = h_x__x6^2" in text
    model = load_file(out)
    assert len(model.gens) == 4
    code, text, _ = run(capsys, "cohomology", str(out), "--max-degree", "8")
    assert text.splitlines()[-1] == "betti = 1 0 1 0 2 0 2 0 2"


def test_make_and_validate(capsys, tmp_path):
    target = tmp_path / "w.alg"
    assert run(capsys, "make", "trivial", "3", "3", "8", "-o", str(target))[0] == 0
    code, out, _ = run(capsys, "validate", str(target))
    assert code == 0 and out.startswith("VALID algebra")
    code, out, _ = run(capsys, "make", "fibre", "3")
    assert "d y5 = x2^3;" in out


def test_json_flag_before_command(capsys):
    code, out, _ = run(capsys, "--json", "hn", m("s8.cdga"))
    assert json.loads(out)["invariants"]["dl"] == 2


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "ratmap", "hn", m("s8.cdga"), "--r", "3"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert "H(r) test at r = 3: false" in proc.stdout
