import io
import json
import subprocess
import sys

import pytest

from khtl.cli import run
from khtl.homology import BigradedGroup
from khtl.oracles import cube_homology


def call(*argv):
    out = io.StringIO()
    code = run(list(argv), out)
    return code, out.getvalue()


def test_trefoil_table():
    code, text = call("kh", "--braid", "1 1 1", "--strands", "2", "--closure", "--json")
    assert code == 0
    data = json.loads(text)
    H = BigradedGroup.from_json_obj(data["internal"])
    assert {k: (f, tuple(t)) for k, (f, t) in H.entries.items()} == cube_homology(2, (1, 1, 1))
    # the published-table side is the mirror
    M = BigradedGroup.from_json_obj(data["paper"])
    assert M[(-2, -7)] == (0, (2,))


def test_text_output_has_both_conventions():
    code, text = call("kh", "--braid", "1 1 1", "--strands", "2", "--closure")
    assert code == 0 and "internal convention" in text and "published-table convention" in text


def test_mod_p_and_open_tangle():
    code, text = call("kh", "--braid", "1 1 1", "--strands", "2", "--closure", "--mod", "2", "--json")
    assert code == 0 and json.loads(text)["mod_p"]["p"] == 2
    code, text = call("kh", "--braid", "1", "--strands", "2", "--json")
    assert code == 0 and set(json.loads(text)["modules"]) == {"1-2,3-4", "1-4,2-3"}


def test_stable_rows():
    code, text = call("stable", "--n", "3", "--q-min", "-3", "--q-max", "5", "--json")
    assert code == 0
    H = BigradedGroup.from_json_obj(json.loads(text)["internal"])
    assert H.at_q(-3) == {0: (1, ())}
    assert H.at_q(-1) == {0: (1, ())}
    assert H.at_q(1) == {2: (1, ())}
    assert H.at_q(5) == {3: (1, ()), 4: (1, ())}


def test_unlink():
    code, text = call("torus", "--n", "2", "--k", "0", "--json")
    H = BigradedGroup.from_json_obj(json.loads(text)["internal"])
    assert code == 0
    assert H == BigradedGroup({(0, -2): (1, ()), (0, 0): (2, ()), (0, 2): (1, ())})


@pytest.mark.parametrize("argv", [
    ("kh", "--braid", "x", "--strands", "2"),
    ("kh", "--braid", "3", "--strands", "2"),
    ("stable", "--n", "2"),
    ("periodicity", "--q-min", "3", "--q-max", "9"),
    ("projector-verify", "--n", "5", "--depth", "1", "--q-max", "3"),
    ("hochschild", "--tangle", "cup1", "--q-max", "0"),
    ("frobnicate",),
    (),
])
def test_invalid_input_exits_one(argv):
    code, text = call(*argv)
    assert code == 1
    assert json.loads(text)["error"]["type"] == "invalid_input"


def test_verification_failure_exits_two():
    code, text = call("stable", "--n", "2", "--q-min", "0", "--q-max", "0", "--safety", "0", "--json")
    assert code == 2 and json.loads(text)["verified"] is False


def test_verification_commands():
    assert call("projector-verify", "--n", "2", "--depth", "4", "--q-max", "7")[0] == 0
    assert call("periodicity", "--q-min", "7", "--q-max", "9")[0] == 0
    code, text = call("hochschild", "--tangle", "1 1", "--method", "both", "--q-max", "1", "--json")
    assert code == 0 and json.loads(text)["agree"] is True
    code, text = call("gor-compare", "--n", "2", "--q-max", "8", "--xi-n", "--json")
    assert code == 0 and json.loads(text)["matching"] == ["ξ_2..ξ_2, cochain dual"]


def test_output_is_deterministic():
    args = ("torus", "--n", "3", "--k", "4", "--json", "--threads", "3")
    first = call(*args)[1]
    assert call(*args)[1] == first
    assert call("torus", "--n", "3", "--k", "4", "--json")[1] == first


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "khtl", "torus", "--n", "2", "--k", "1"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and "internal convention" in proc.stdout
