import json

import pytest

from sdpquot.cli import demo_names, main

CONSTRUCT_DEMOS = ["catmap", "directproduct-Z", "finite-kernel", "free-nielsen"]


def test_demo_listing(capsys):
    assert main(["demos"]) == 0
    out = capsys.readouterr().out
    for name in CONSTRUCT_DEMOS:
        assert name in out
    assert set(CONSTRUCT_DEMOS) <= set(demo_names())


@pytest.mark.parametrize("demo", CONSTRUCT_DEMOS)
def test_construct_then_verify(tmp_path, demo, capsys):
    cert = tmp_path / "cert.json"
    assert main(["construct", "--demo", demo, "--order", "--output", str(cert)]) == 0
    assert main(["verify", str(cert)]) == 0
    assert "overall: PASS" in capsys.readouterr().out


def test_catmap_certificate_contents(tmp_path):
    cert = tmp_path / "cert.json"
    main(["construct", "--demo", "catmap", "--output", str(cert)])
    doc = json.loads(cert.read_text())
    assert doc["index"] == 4 and doc["quotient"]["parameter"] == 2
    assert all(doc["claims"].values())


def test_direct_product_action_tables_are_identities(tmp_path):
    cert = tmp_path / "cert.json"
    main(["construct", "--demo", "directproduct-Z", "--output", str(cert)])
    doc = json.loads(cert.read_text())
    for auto in doc["induced_action"]:
        m = auto["forward"]["matrix"]
        assert m == [[1 if i == j else 0 for j in range(len(m))] for i in range(len(m))]


def test_tampered_certificate_exits_one(tmp_path, capsys):
    cert = tmp_path / "cert.json"
    main(["construct", "--demo", "catmap", "--output", str(cert)])
    doc = json.loads(cert.read_text())
    doc["pi"]["S"][1][0][0] ^= 1
    cert.write_text(json.dumps(doc))
    assert main(["verify", str(cert)]) == 1
    assert "FAIL" in capsys.readouterr().out


def test_old_format_exits_two(tmp_path, capsys):
    cert = tmp_path / "cert.json"
    main(["construct", "--demo", "catmap", "--output", str(cert)])
    doc = json.loads(cert.read_text())
    doc["format"] = 0
    cert.write_text(json.dumps(doc))
    assert main(["verify", str(cert)]) == 2
    assert "format" in capsys.readouterr().err


def test_malformed_input_exits_two(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert main(["construct", "--input", str(bad)]) == 2
    bad.write_text(json.dumps({"group": {"kind": "semidirect", "K": {"kind": "free"}}, "S": []}))
    assert main(["construct", "--input", str(bad)]) == 2
    assert main(["construct", "--demo", "no-such-demo"]) == 2


def test_cap_exits_three():
    assert main(["construct", "--demo", "free-nielsen", "--max-homs", "10"]) == 3
    assert main(["core", "--free", "-k", "2", "-d", "6"]) == 3


def test_shift_commands(capsys):
    assert main(["shift", "check", "--demo", "shift-z4"]) == 0
    assert "no injective-non-surjective map found" in capsys.readouterr().out
    assert main(["shift", "check", "--demo", "shift-klein"]) == 0
    assert main(["shift", "recode", "--demo", "shift-sym3-recode"]) == 0
    assert "pass" in capsys.readouterr().out
    assert main(["shift", "embed", "--demo", "shift-sym3-embed"]) == 0
    assert "index 2" in capsys.readouterr().out


def test_separate_command(tmp_path):
    out = tmp_path / "w.json"
    assert main(["separate", "--word", "xyXY", "--output", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert doc["sound"] is True


def test_core_commands(capsys):
    assert main(["core", "--free", "-k", "2", "-d", "2"]) == 0
    assert "|N| = 4" in capsys.readouterr().out
    assert main(["core", "--abelian", "[[2,0],[0,3]]"]) == 0
    assert "36" in capsys.readouterr().out


def test_snf_identity(tmp_path):
    out = tmp_path / "s.json"
    assert main(["snf", "--matrix", "[[1,0],[0,1]]", "--output", str(out)]) == 0
    doc = json.loads(out.read_text())
    I = [[1, 0], [0, 1]]
    assert doc["U"] == doc["S"] == doc["V"] == I
