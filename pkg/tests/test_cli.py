import io
import json
import subprocess
import sys

import pytest

from ballperm.cli import emit_distribution, main
from ballperm.classical import SwapProgram, ball_decide_bruteforce
from ballperm.state import circuit_from_json, circuit_to_json


def run(argv):
    out = io.StringIO()
    code = main(argv, out)
    return code, out.getvalue()


def write(tmp_path, name, obj):
    path = tmp_path / name
    path.write_text(json.dumps(obj))
    return str(path)


@pytest.fixture
def empty3(tmp_path):
    return write(tmp_path, "c.json", {"n": 3, "gates": []})


@pytest.fixture
def quarter(tmp_path):
    return write(tmp_path, "q.json", {"n": 2, "gates": [{"kind": "x", "theta": "pi/4", "i": 1}]})


def test_trace_empty(empty3):
    code, text = run(["trace", "--circuit", empty3])
    assert code == 0
    assert text == "6.000000000000+0.000000000000i\n"


def test_trace_debug_and_samples(quarter):
    code, text = run(["trace", "--circuit", quarter, "--debug", "--samples", "2000", "--seed", "4"])
    lines = text.splitlines()
    assert code == 0 and lines[0] == "1.414213562373+0.000000000000i"
    assert lines[1] == "diagonal\t1.414213562373+0.000000000000i"
    assert lines[2].startswith("dqc1\t")


def test_ybe_ok():
    code, text = run(["ybe", "--x", "1", "--y", "1"])
    assert code == 0
    residual = float(text.splitlines()[0].split("\t")[1])
    assert residual < 1e-12 and text.splitlines()[1] == "OK"


def test_classical_decide_yes_with_witness(tmp_path):
    prog = {"n": 3, "swaps": [[1, 2], [2, 3]], "probs": [0.5, 0.5]}
    path = write(tmp_path, "p.json", prog)
    code, text = run(["classical", "decide", "--program", path, "--target", "2,3,1"])
    assert code == 0 and text.startswith("YES")
    assert text.strip() == "YES\twitness=1,2"
    assert ball_decide_bruteforce(SwapProgram.from_json(prog), (2, 3, 1))
    code, text = run(["classical", "adjstar", "--program", path, "--target", "3,1,2"])
    assert text.strip() == "NO"


def test_classical_other_actions(tmp_path):
    path = write(tmp_path, "p.json", {"n": 3, "swaps": [[1, 2], [2, 3]], "probs": [0.5, 0.5]})
    assert run(["classical", "run", "--program", path])[1] == "2,3,1\n"
    code, text = run(["classical", "dist", "--program", path])
    assert text.splitlines()[-1] == "sum\t1.000000000000"
    code, text = run(["classical", "edp", "--program", path, "--target", "2,3,1"])
    assert "path_systems\t1" in text
    code, text = run(["classical", "sample", "--program", path, "--shots", "100"])
    assert text.splitlines()[-1] == "shots\t100"
    code, text = run(["classical", "yb", "--x", "2", "--y", "3"])
    assert code == 0


def test_emit_distribution_tsv_and_json():
    out = io.StringIO()
    emit_distribution({(2, 1): 0.5, (1, 2): 0.5}, "tsv", out)
    assert out.getvalue() == "1,2\t0.500000000000\n2,1\t0.500000000000\nsum\t1.000000000000\n"
    out = io.StringIO()
    emit_distribution({(2, 1): 0.5, (1, 2): 0.5}, "json", out)
    assert json.loads(out.getvalue()) == {"1,2": 0.5, "2,1": 0.5}
    with pytest.raises(ValueError):
        emit_distribution({}, "tsv", io.StringIO())


def test_simulate_exact_and_sampled(quarter):
    code, text = run(["simulate", "--circuit", quarter])
    assert text == "1,2\t0.500000000000\n2,1\t0.500000000000\nsum\t1.000000000000\n"
    code, text = run(["simulate", "--circuit", quarter, "--format", "json"])
    assert json.loads(text) == pytest.approx({"1,2": 0.5, "2,1": 0.5})
    a = run(["simulate", "--circuit", quarter, "--shots", "500", "--seed", "7"])
    b = run(["simulate", "--circuit", quarter, "--shots", "500", "--seed", "7"])
    assert a == b and a[0] == 0


def test_amplitude(quarter):
    code, text = run(["amplitude", "--circuit", quarter, "--bra", "2,1", "--ket", "1,2"])
    assert text == "0.000000000000+0.707106781187i\n"


def test_scatter_output_round_trips(tmp_path):
    path = write(tmp_path, "s.json", {"positions": [0, 0.5, 2], "velocities": [1, 0, -1], "c": 1.0})
    code, text = run(["scatter", "--config", path])
    obj = json.loads(text)
    assert obj["signature"] == [3, 2, 1]
    assert [(g["z"], g["pos"]) for g in obj["circuit"]["gates"]] == [(1, 1), (2, 2), (1, 1)]
    assert circuit_to_json(circuit_from_json(obj["circuit"])) == obj["circuit"]


def test_gadget(quarter):
    code, text = run(["gadget", "--z1", "1", "--z2", "1"])
    assert code == 0 and "2,1\t1.000000000000" in text
    code, text = run(["gadget", "--circuit", quarter])
    assert "1,2\t0.500000000000" in text
    assert run(["gadget", "--z1", "1"])[0] == 2


def test_irrep_tableaux_project(tmp_path):
    code, text = run(["irrep", "--shape", "2,1", "--k", "1"])
    assert text.splitlines()[-1] == "trace\t0.000000000000+0.000000000000i"
    code, text = run(["tableaux", "--shape", "3,1"])
    assert [json.loads(line) for line in text.splitlines()] == [[[1, 2, 3], [4]], [[1, 2, 4], [3]], [[1, 3, 4], [2]]]
    code, text = run(["project", "--shape", "2,1"])
    assert text == "norm2\t0.666666666667\nexpected\t0.666666666667\n"
    path = write(tmp_path, "c.json", {"n": 3, "gates": [{"kind": "x", "theta": 0.5, "i": 1}]})
    code, text = run(["irrep", "--shape", "2,1", "--circuit", path])
    assert code == 0 and len(text.splitlines()) == 3


def test_wppp(tmp_path):
    path = write(tmp_path, "w.json", {"n": 3, "sets": [[1, 2], [2, 3]], "target": [3, 1, 2]})
    code, text = run(["wppp", "--instance", path])
    assert code == 0
    answer, reduced = text.splitlines()
    assert reduced == f"reduction\t{answer}"


def test_encode_qubits(tmp_path):
    obj = {"n": 2, "gates": [{"kind": "rot", "theta": 0.392699, "q": 1}, {"kind": "cnot", "c": 1, "t": 2}]}
    path = write(tmp_path, "qc.json", obj)
    code, text = run(["encode-qubits", "--circuit", path, "--samp-tqp", "1000"])
    assert code == 0
    head = json.loads(text.splitlines()[0])
    assert head["leakage"] == 0 and head["tvd"] < 1e-9
    assert any(line.startswith("normalized_trace\t") for line in text.splitlines())


def test_exit_codes(tmp_path, empty3):
    assert run(["frobnicate"])[0] == 2
    assert run(["trace"])[0] == 2
    assert run(["trace", "--circuit", str(tmp_path / "missing.json")])[0] == 2
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run(["trace", "--circuit", str(bad)])[0] == 1
    no_probs = write(tmp_path, "p.json", {"n": 3, "swaps": [[1, 2]]})
    assert run(["classical", "decide", "--program", no_probs, "--target", "2,1,3"])[0] == 1
    assert run(["classical", "decide", "--program", no_probs])[0] == 2
    gate_error = write(tmp_path, "g.json", {"n": 2, "gates": [{"kind": "x", "theta": 0.1, "i": 5}]})
    assert run(["trace", "--circuit", gate_error])[0] == 1


def test_size_cap(tmp_path, monkeypatch):
    monkeypatch.setenv("BP_MAX_N", "2")
    path = write(tmp_path, "c.json", {"n": 3, "gates": []})
    assert run(["trace", "--circuit", path])[0] == 1


def test_module_entry_point(empty3):
    proc = subprocess.run(
        [sys.executable, "-m", "ballperm", "trace", "--circuit", empty3], capture_output=True, text=True
    )
    assert proc.returncode == 0
    assert proc.stdout == "6.000000000000+0.000000000000i\n"
    proc = subprocess.run([sys.executable, "-m", "ballperm", "nope"], capture_output=True, text=True)
    assert proc.returncode == 2
