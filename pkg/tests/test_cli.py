import json
import os

import pytest

from ocreach.automaton import automaton, automaton_to_json
from ocreach.catalog import (evens_and_one, halfline_and_stretch,
                             halfline_far_block, high_minus_point)
from ocreach.cli import main
from ocreach.hardness import gadget_automaton, subset_sum
from ocreach.targets import target_to_json


@pytest.fixture
def files(tmp_path):
    paths = {}

    def write(name, doc):
        path = tmp_path / name
        path.write_text(json.dumps(doc))
        paths[name] = str(path)
        return str(path)

    write("s5.json", target_to_json(halfline_far_block()))
    write("s3.json", target_to_json(halfline_and_stretch()))
    write("s2.json", target_to_json(evens_and_one()))
    write("s2v.json", target_to_json(high_minus_point()))
    write("zero.json", {"p": 0, "branches": [
        {"base": [], "periods": [], "stride": [1, 0],
         "slots": [{"left": {"const": "0", "coeffs": []},
                    "right": {"const": "0", "coeffs": []}}]}]})
    gadget = gadget_automaton(subset_sum([3, 5, 7], 12), 0)
    write("gadget.json", automaton_to_json(gadget))
    write("chain.json", automaton_to_json(automaton(2, [(0, -3, 1)], 0, 1)))
    write("effects27.json", automaton_to_json(
        automaton(3, [(0, 2, 1), (0, 7, 2), (1, 5, 2)], 0, 2)))
    paths["dir"] = str(tmp_path)
    return paths


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def test_classify_np_hard(files, capsys):
    code, out = run_cli(capsys, "classify", files["s5.json"], "--semantics", "int")
    assert code == 0
    doc = json.loads(out)
    assert doc["side"] == "np-hard"


def test_classify_vass_tractable(files, capsys):
    code, out = run_cli(capsys, "classify", files["s2v.json"],
                        "--semantics", "vass")
    doc = json.loads(out)
    assert code == 0 and doc["side"] == "tractable"
    assert doc["evidence"]["delta"] == 1


def test_decide_gadget_vass(files, capsys):
    code, out = run_cli(capsys, "decide", files["gadget.json"],
                        files["zero.json"], "--semantics", "vass", "--verify")
    doc = json.loads(out)
    assert code == 0 and doc["answer"] is True
    assert doc["oracle_answer"] is True
    assert "witness" in doc


def test_decide_fast_integer(files, capsys):
    code, out = run_cli(capsys, "decide", files["effects27.json"],
                        files["s3.json"], "--semantics", "int",
                        "--params", "5", "--verify")
    doc = json.loads(out)
    assert code == 0 and doc["answer"] is True and doc["method"] == "fast"


def test_decide_exact_fallback(files, capsys):
    code, out = run_cli(capsys, "decide", files["chain.json"],
                        files["s2.json"], "--semantics", "int", "--verify")
    doc = json.loads(out)
    assert code == 0 and doc["answer"] is False
    assert doc["method"] == "exact-fallback"


def test_covertable(files, capsys):
    code, out = run_cli(capsys, "covertable", files["chain.json"],
                        "--from", "0", "--to", "1")
    assert code == 0
    assert json.loads(out) == [["3", "0"]]


def test_oracle_reports_bounds(files, capsys):
    code, out = run_cli(capsys, "oracle", files["gadget.json"],
                        files["zero.json"], "--semantics", "vass")
    doc = json.loads(out)
    assert code == 0 and doc["answer"] is True and doc["bounded"] is True


def test_gadget_emission(files, capsys, tmp_path):
    prefix = str(tmp_path / "red")
    code, out = run_cli(capsys, "gadget", files["s5.json"], "--semantics",
                        "int", "--items", "3", "5", "7",
                        "--target-sum", "12", "--out", prefix)
    assert code == 0
    doc = json.loads(out)
    assert doc["subset_sum_verdict"] is True
    with open(prefix + ".sidecar.json") as fh:
        sidecar = json.load(fh)
    assert sidecar["semantics"] == "int"
    with open(prefix + ".automaton.json") as fh:
        emitted = json.load(fh)
    params = [int(x) for x in sidecar["params"]]
    code, out = run_cli(capsys, "decide", prefix + ".automaton.json",
                        files["s5.json"], "--semantics", "int", "--params",
                        *[str(x) for x in params], "--verify")
    doc = json.loads(out)
    assert code == 0 and doc["answer"] is True


def test_missing_file_exit_2(files, capsys):
    code, out = run_cli(capsys, "classify", files["dir"] + "/nope.json",
                        "--semantics", "int")
    assert code == 2


def test_malformed_target_exit_2(files, capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"p": 1, "branches": [
        {"base": ["0"], "periods": [["1"]], "stride": [0, 0], "slots": []}]}))
    code, out = run_cli(capsys, "classify", str(bad), "--semantics", "int")
    assert code == 2
    assert "stride" in json.loads(out)["error"]


def test_monotone_diagnostic_exit_2(files, capsys, tmp_path):
    bad = tmp_path / "nonmono.json"
    bad.write_text(json.dumps({"p": 1, "branches": [
        {"base": ["0"], "periods": [["1"]], "stride": [1, 0],
         "slots": [{"left": {"const": "0", "coeffs": ["1"]},
                    "right": {"const": "0", "coeffs": ["0"]}}]}]}))
    code, out = run_cli(capsys, "classify", str(bad), "--semantics", "int")
    assert code == 2
    assert "monotone representation required" in json.loads(out)["error"]


def test_bench_writes_csv_and_figure(capsys, tmp_path):
    out_dir = str(tmp_path / "bench")
    code, out = run_cli(capsys, "bench", "--states", "6,10", "--trials", "1",
                        "--weight-bits", "8", "--out", out_dir)
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "states,trial,tripling_seconds,exact_seconds"
    assert len(lines) == 3
    assert os.path.exists(os.path.join(out_dir, "bench.csv"))
    assert os.path.exists(os.path.join(out_dir, "bench.png"))


def test_decide_deterministic(files, capsys):
    results = set()
    for _ in range(2):
        code, out = run_cli(capsys, "decide", files["effects27.json"],
                            files["s3.json"], "--semantics", "int",
                            "--params", "5")
        results.add(out)
    assert len(results) == 1
