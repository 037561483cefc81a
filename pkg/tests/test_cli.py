import csv
import io
import json
import shutil
import subprocess
import sys
from fractions import Fraction as F
from pathlib import Path

import pytest

from complexknap.cli import main
from complexknap.instance_io import load_instance, parse_instance, serialize_instance
from complexknap.runner import CSV_HEADER, bench

CORPUS = Path(__file__).resolve().parent.parent / "corpus"
EXAMPLE = str(CORPUS / "ckp-example.json")


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_solve_alg_b_example(capsys):
    code, out, _ = run(capsys, "solve", "--algorithm", "alg-b", "--epsilon", "1/2", EXAMPLE)
    report = json.loads(out)
    assert code == 0
    assert report == {"algorithm": "alg-b", "epsilon": "1/2", "selected": [0], "value": 10}


def test_solve_output_file_and_oracle(capsys, tmp_path):
    dest = tmp_path / "r.json"
    code, out, _ = run(capsys, "solve", "-a", "alg-a", "--oracle", "--timing", EXAMPLE,
                       "-o", str(dest))
    report = json.loads(dest.read_text())
    assert code == 0 and out == ""
    assert report["oracle"] == 10 and isinstance(report["micros"], int)


@pytest.mark.parametrize("algo,path", [("dp-1kp", "onekp-example.json"),
                                       ("fptas-1kp", "onekp-example.json"),
                                       ("monotone-fptas", "onekp-example.json"),
                                       ("alg-c", "gckp-example.json")])
def test_solve_other_algorithms(capsys, algo, path):
    code, out, _ = run(capsys, "solve", "-a", algo, "-e", "1/4", str(CORPUS / path))
    assert code == 0
    expected = {"onekp-example.json": ([0, 1], 7), "gckp-example.json": ([1, 2], 8)}[path]
    r = json.loads(out)
    assert (r["selected"], r["value"]) == expected


def test_exit_codes(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"kind": "c-kp", "capacity": {"c": 5}, "items": [{"id": 0, "re": 1, '
                   '"im": 1, "value": "0"}]}')
    assert run(capsys, "solve", "-a", "alg-a", str(bad))[0] == 3
    assert run(capsys, "solve", "-a", "alg-a", "-e", "0.5", EXAMPLE)[0] == 3
    assert run(capsys, "solve", "-a", "alg-a", "-e", "3/2", EXAMPLE)[0] == 4
    assert run(capsys, "solve", "-a", "alg-c", EXAMPLE)[0] == 4
    assert run(capsys, "solve", "-a", "dp-1kp", EXAMPLE)[0] == 4
    assert run(capsys, "oracle", "--limit", "2", EXAMPLE)[0] == 5
    code, _, err = run(capsys, "solve", "-a", "alg-a", str(tmp_path / "missing.json"))
    assert code == 3 and "error" in err
    with pytest.raises(SystemExit) as exc:
        main(["solve", "-a", "nope", EXAMPLE])
    assert exc.value.code == 2


def test_oracle(capsys):
    code, out, _ = run(capsys, "oracle", EXAMPLE)
    assert code == 0 and json.loads(out)["value"] == 10


def test_symbolic_instance_only_for_oracle(capsys):
    path = str(CORPUS / "reduced-1-2-3-4.json")
    assert json.loads(run(capsys, "oracle", path)[1])["value"] == 2
    assert run(capsys, "solve", "-a", "alg-a", path)[0] == 4


def test_payments(capsys):
    code, out, _ = run(capsys, "payments", "-e", "1/2", EXAMPLE)
    r = json.loads(out)
    assert code == 0 and r["selected"] == [0] and r["payments"] == {"0": 9, "1": 0, "2": 0}


def test_reduce(capsys, tmp_path):
    dest = tmp_path / "red.json"
    code, out, _ = run(capsys, "reduce", "1", "2", "3", "4", "--instance", str(dest))
    summary = json.loads(out)
    assert code == 0 and summary["answer"] == "yes" and summary["c_sq"] == "40"
    doc = json.loads(dest.read_text())
    assert doc["capacity"] == {"c_sq": 40} and doc["im_scale_sq"] == "5/3"
    assert load_instance(dest).symbolic_imaginary


def test_reduce_no_and_errors(capsys):
    code, out, _ = run(capsys, "reduce", "1", "1", "1", "5")
    assert code == 0 and json.loads(out)["answer"] == "no"
    assert run(capsys, "reduce", "1", "2", "3")[0] == 4


def test_bench_empty_directory(tmp_path):
    assert bench(tmp_path) == ",".join(CSV_HEADER) + "\n"


def test_bench_cli_empty(capsys, tmp_path):
    code, out, _ = run(capsys, "bench", str(tmp_path))
    assert code == 0 and out == "instance,algorithm,epsilon,value,oracle,ratio,micros\n"


def test_bench_corpus_rows(tmp_path):
    rows = list(csv.DictReader(io.StringIO(bench(CORPUS, epsilons=["1/2", "1/4"]))))
    assert rows
    keys = [(r["instance"], r["algorithm"], F(r["epsilon"] or "-1")) for r in rows]
    assert keys == sorted(keys) and len(set(keys)) == len(keys)
    for r in rows:
        if r["oracle"] and r["algorithm"] != "oracle":
            assert F(r["ratio"]) >= (1 - F(r["epsilon"])) / 2


def test_bench_algorithm_filter_and_jobs(tmp_path):
    for name in ("ckp-example.json", "onekp-example.json", "gckp-example.json"):
        shutil.copy(CORPUS / name, tmp_path / name)
    out = bench(tmp_path, algorithms=["alg-b"], epsilons=["1/2"], jobs=2)
    rows = list(csv.reader(io.StringIO(out)))[1:]
    assert [(r[0], r[1]) for r in rows] == [("ckp-example.json", "alg-b"),
                                           ("onekp-example.json", "alg-b")]


def test_verify(capsys):
    code, out, _ = run(capsys, "verify", EXAMPLE)
    r = json.loads(out)
    assert code == 0 and r["passed"]
    assert {c["name"] for c in r["checks"]} >= {"alg-a", "alg-b", "alg-b-monotone", "mechanism-ic-ir"}


def test_verify_every_corpus_file(capsys):
    for path in sorted(CORPUS.glob("*.json")):
        code, out, _ = run(capsys, "verify", str(path))
        assert code == 0, (path.name, out)


def test_generate(capsys, tmp_path):
    code, out, _ = run(capsys, "generate", "--seed", "4", "-n", "5", "--kind", "gc-kp",
                       "--profile", "d2-heavy")
    again = run(capsys, "generate", "--seed", "4", "-n", "5", "--kind", "gc-kp",
                "--profile", "d2-heavy")[1]
    assert code == 0 and out == again
    assert parse_instance(out).n == 5
    assert run(capsys, "generate", "--seed", "4", "-n", "0")[0] == 4


def test_corpus_round_trip():
    for path in sorted(CORPUS.glob("*.json")):
        inst = load_instance(path)
        once = serialize_instance(inst)
        assert parse_instance(once) == inst
        assert serialize_instance(parse_instance(once)) == once


def test_console_script_module_entry():
    proc = subprocess.run([sys.executable, "-m", "complexknap.cli", "oracle", EXAMPLE],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and json.loads(proc.stdout)["value"] == 10


# optima computed once with the plain itertools enumeration in conftest
FROZEN_OPTIMA = {
    "ckp-example.json": (3, 10, (0,)),
    "gckp-example.json": (3, 8, (1, 2)),
    "gen-1kp-1.json": (10, 394, (0, 2, 4, 5, 6, 7, 8)),
    "gen-1kp-2.json": (10, 388, (0, 1, 3, 5, 8, 9)),
    "gen-1kp-3.json": (10, 279, (0, 1, 2, 4, 9)),
    "gen-ckp-d1-heavy-1.json": (9, 436, (1, 2, 3, 5, 7, 8)),
    "gen-ckp-d1-heavy-2.json": (9, 227, (0, 2, 3, 6, 7, 8)),
    "gen-ckp-d1-heavy-3.json": (9, 363, (0, 2, 5, 6, 7)),
    "gen-ckp-d2-heavy-1.json": (9, 90, (3,)),
    "gen-ckp-d2-heavy-2.json": (9, 178, (5, 7, 8)),
    "gen-ckp-d2-heavy-3.json": (9, 327, (2, 4, 5, 6)),
    "gen-ckp-irrational-1.json": (8, 374, (0, 1, 2, 5, 7)),
    "gen-ckp-irrational-2.json": (8, 142, (0, 3, 5)),
    "gen-ckp-irrational-3.json": (8, 256, (0, 6, 7)),
    "gen-ckp-mixed-1.json": (9, 436, (1, 2, 3, 5, 7, 8)),
    "gen-ckp-mixed-2.json": (9, 142, (0, 3, 5)),
    "gen-ckp-mixed-3.json": (9, 253, (0, 4, 5)),
    "gen-gckp-1.json": (7, 334, (0, 1, 2, 5)),
    "gen-gckp-2.json": (7, 142, (0, 3, 5)),
    "gen-gckp-3.json": (7, 191, (0, 5)),
    "onekp-example.json": (3, 7, (0, 1)),
    "reduced-1-2-3-4.json": (4, 2, (0, 3)),
}


def test_corpus_frozen_optima(capsys):
    assert sorted(p.name for p in CORPUS.glob("*.json")) == sorted(FROZEN_OPTIMA)
    for name, (n, value, ids) in FROZEN_OPTIMA.items():
        code, out, _ = run(capsys, "oracle", str(CORPUS / name))
        r = json.loads(out)
        assert load_instance(CORPUS / name).n == n
        assert (r["value"], tuple(r["selected"])) == (value, ids), name
