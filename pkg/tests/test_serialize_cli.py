import json
import random
import subprocess
import sys

import pytest
from hypothesis import given

from conftest import bump, dyadic_maps, iv, random_bump
from plgroups import GroupSpec, Interval, ParseError, f_generators, serialize
from plgroups.builders import build_exemplary_tower, find_witness
from plgroups.certificates import TowerCertificate, replay
from plgroups.cli import CommandConfig, config_from_args, main
from plgroups.groups import AnalysisConfig, analyze
from plgroups.svg import _num, plot_map, plot_tower
from plgroups.wreath import build_family, wreath_with_Z

BUMP_GROUP = {"kind": "group", "generators": {"b": [["0", "0"], ["1/4", "1/4"], ["5/16", "3/8"],
                                                    ["1/2", "1/2"], ["1", "1"]]}}


def write_json(path, data):
    path.write_text(json.dumps(data, indent=2) + "\n")
    return str(path)


def run_cli(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


# -- round trips --------------------------------------------------------------------


@given(dyadic_maps())
def test_map_round_trip(f):
    text = serialize.dumps(f)
    assert serialize.loads(text) == f
    assert serialize.dumps(serialize.loads(text)) == text


def test_value_round_trips():
    F = f_generators(2)
    cert = build_exemplary_tower(F, find_witness(F, 1), 3)
    W = wreath_with_Z(GroupSpec([("b", bump(0, 1))]), copies=2)
    for obj in (F, iv("1/3", "2/3"), cert, W, build_family("G", 2, 2)):
        text = serialize.dumps(obj)
        again = serialize.loads(text)
        assert serialize.dumps(again) == text


def test_report_round_trip():
    rep = analyze(GroupSpec([("b", bump("1/4", "1/2"))]), AnalysisConfig(L=3))
    text = serialize.dumps(rep)
    assert serialize.dumps(serialize.loads(text)) == text


def test_loaded_certificate_replays():
    F = f_generators(2)
    cert = build_exemplary_tower(F, find_witness(F, 1), 3)
    again = serialize.loads(serialize.dumps(cert))
    assert isinstance(again, TowerCertificate)
    assert replay(again).ok
    assert again.tower == cert.tower


def test_rationals_render_in_lowest_terms():
    text = serialize.dumps(iv("2/4", 1))
    assert '"1/2"' in text and '"1"' in text and "2/4" not in text


def test_parse_error_names_node_and_position():
    text = json.dumps({"kind": "map", "nodes": [["0", "0"], ["1/2", "1/2"], ["1/4", "3/4"], ["1", "1"]]},
                      indent=2)
    with pytest.raises(ParseError) as e:
        serialize.loads(text)
    assert "node 2" in str(e.value)
    assert e.value.line is not None and e.value.line > 1


@pytest.mark.parametrize("text", [
    '{"kind": "map", "nodes": [["0", "0"], ["1/2", "0.25"], ["1", "1"]]}',
    '{"kind": "map", "nodes": [["0", "0"], ["1/0", "1/4"], ["1", "1"]]}',
    '{"kind": "map", "nodes": [["0", "0"], ["1", "1"]',
    '{"kind": "spaceship"}',
])
def test_malformed_documents(text):
    with pytest.raises(ParseError):
        serialize.loads(text)


# -- svg --------------------------------------------------------------------------


def test_svg_number_format():
    from plgroups.rat import as_rat

    assert _num(as_rat("1/3")) == "0.333333"
    assert _num(as_rat("2/3")) == "0.666667"
    assert _num(as_rat("-1/8")) == "-0.125000"
    assert _num(as_rat(950)) == "950.000000"


def test_svg_examples(A):
    from plgroups import IDENTITY

    s = plot_map(IDENTITY)
    assert s.count("<polyline") == 1 and 'points="50.000000,950.000000 950.000000,50.000000"' in s
    s = plot_map(A)
    [line] = [ln for ln in s.splitlines() if ln.startswith("<polyline")]
    assert len(line.split('points="')[1].split('"')[0].split()) == 4
    F = f_generators(2)
    T = build_exemplary_tower(F, find_witness(F, 1), 3).tower
    s = plot_tower(T)
    bars = [ln for ln in s.splitlines() if ln.startswith("<rect") and "data-interval" in ln]
    assert len(bars) == 3
    widths = [float(b.split('width="')[1].split('"')[0]) for b in bars]
    assert widths == sorted(widths) and len(set(widths)) == 3
    assert plot_tower(T) == s


# -- CLI -------------------------------------------------------------------------


def test_config_validation():
    with pytest.raises(ValueError):
        CommandConfig("analyze", L=0)
    with pytest.raises(ValueError):
        CommandConfig("nope")
    cfg = config_from_args(["analyze", "g.json", "-L", "3", "--caps", "elements=10,commutators=20"])
    assert (cfg.L, cfg.element_cap, cfg.commutator_cap) == (3, 10, 20)


def test_cli_analyze(tmp_path, capsys):
    path = write_json(tmp_path / "bump.json", BUMP_GROUP)
    code, out, _ = run_cli(capsys, "analyze", path, "-L", "3")
    assert code == 0
    assert json.loads(out)["verdict"]["kind"] == "DerivedLengthAtLeast"
    fpath = tmp_path / "f.json"
    assert run_cli(capsys, "f-group", "-o", str(fpath))[0] == 0
    code, out, _ = run_cli(capsys, "analyze", str(fpath), "-L", "2", "--format", "markdown")
    assert code == 0 and "NonsolvableCertified(imbalance)" in out


def test_cli_parse_error(tmp_path, capsys):
    bad = {"kind": "group", "generators": {"g": [["0", "0"], ["1/2", "1/4"], ["1/4", "1/2"], ["1", "1"]]}}
    code, _, err = run_cli(capsys, "analyze", write_json(tmp_path / "bad.json", bad))
    assert code == 2 and "node 2" in err and "line" in err
    assert run_cli(capsys, "analyze", str(tmp_path / "missing.json"))[0] == 2


def test_cli_tower_verify_and_tamper(tmp_path, capsys):
    F = tmp_path / "f.json"
    run_cli(capsys, "f-group", "-o", str(F))
    cert = tmp_path / "cert.json"
    assert run_cli(capsys, "tower", str(F), "-k", "4", "-o", str(cert))[0] == 0
    code, out, _ = run_cli(capsys, "verify", str(cert))
    assert code == 0 and out.startswith("verified")
    derived = tmp_path / "derived.json"
    assert run_cli(capsys, "derive-tower", str(cert), "-o", str(derived))[0] == 0
    assert run_cli(capsys, "verify", str(derived))[0] == 0
    data = json.loads(cert.read_text())
    i = next(i for i, s in enumerate(data["steps"]) if s["op"] == "word" and abs(s["factors"][0][1]) > 1)
    data["steps"][i]["factors"][0][1] += 1
    bad = write_json(tmp_path / "tampered.json", data)
    code, out, _ = run_cli(capsys, "verify", bad)
    assert code == 4 and out.startswith("MISMATCH") and f"step {i}" in out


def test_cli_height_one_certificate(tmp_path, capsys):
    path = write_json(tmp_path / "bump.json", BUMP_GROUP)
    cert = tmp_path / "cert.json"
    assert run_cli(capsys, "tower", path, "-o", str(cert))[0] == 0
    code, out, _ = run_cli(capsys, "verify", str(cert))
    assert code == 0 and "height-1" in out


def test_cli_orbitals_and_plot(tmp_path, capsys):
    path = write_json(tmp_path / "bump.json", BUMP_GROUP)
    code, out, _ = run_cli(capsys, "orbitals", path)
    assert code == 0 and "1/4" in out
    a, b = tmp_path / "a.svg", tmp_path / "b.svg"
    assert run_cli(capsys, "plot", path, "--svg", str(a))[0] == 0
    assert run_cli(capsys, "plot", path, "--svg", str(b))[0] == 0
    assert a.read_bytes() == b.read_bytes()
    assert run_cli(capsys, "plot", path)[0] == 2


def test_cli_wreath_and_obstruction(tmp_path, capsys):
    code, out, _ = run_cli(capsys, "build-wreath", "--family", "W", "--index", "3")
    assert code == 0 and serialize.loads(out).names == ("t1", "t2", "t3")
    code, out, _ = run_cli(capsys, "build-wreath", "--copies", "2")
    assert code == 0
    from plgroups.wreath import bump_on

    G = GroupSpec([("alpha", bump_on(iv(0, "1/4"))), ("beta", bump_on(iv("1/2", 1))),
                   ("gamma", bump_on(iv("5/8", "11/16")))])
    path = tmp_path / "triple.json"
    path.write_text(serialize.dumps(G))
    assert run_cli(capsys, "obstruction", str(path))[0] == 0
    G = GroupSpec([("a", bump(0, 1))])
    path.write_text(serialize.dumps(G))
    assert run_cli(capsys, "obstruction", str(path))[0] == 2


def test_cli_resource_cap(tmp_path, capsys):
    F = tmp_path / "f.json"
    run_cli(capsys, "f-group", "-o", str(F))
    code, out, _ = run_cli(capsys, "analyze", str(F), "-L", "6", "--caps", "elements=10")
    assert code == 0
    assert json.loads(out)["verdict"]["kind"] in ("InconclusiveUpTo", "NonsolvableCertified")


def test_cli_deterministic(tmp_path, capsys):
    rng = random.Random(2)
    G = GroupSpec.of(random_bump(rng), random_bump(rng))
    path = tmp_path / "g.json"
    path.write_text(serialize.dumps(G))
    outs = {run_cli(capsys, "analyze", str(path), "-L", "3")[1] for _ in range(2)}
    assert len(outs) == 1


def test_console_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "plgroups.cli", "f-group"], capture_output=True, text=True)
    assert proc.returncode == 0
    G = serialize.loads(proc.stdout)
    assert G.maps == f_generators(2).maps
    assert G.maps[0](Interval(0, 1).midpoint()) == Interval(0, 1).midpoint() / 2
