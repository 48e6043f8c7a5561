from __future__ import annotations

import io

from usophase.cli import run
from usophase.constructions import schurr, uniform
from usophase.orientation import load, load_many, store
from usophase.phases import compute_phases_fast


def call(argv, stdin=""):
    out, err = io.StringIO(), io.StringIO()
    code = run(argv, io.StringIO(stdin), out, err)
    return code, out.getvalue(), err.getvalue()


def test_gen_schurr():
    code, out, _ = call(["gen", "--kind", "schurr", "-n", "3"])
    assert code == 0 and load(out) == schurr(3)


def test_verify():
    assert call(["verify"], store(schurr(4)))[0] == 0
    code, _, err = call(["verify", "--jobs", "3"], "uso 2\n10\n01\n01\n10\n")
    assert code == 1 and "face **" in err
    code, _, err = call(["verify"], "uso 2\n00\n")
    assert code == 2 and "line" in err


def test_phases_naive_fast_identical():
    for O in (schurr(3), uniform(3), schurr(5)):
        a = call(["phases", "--fast"], store(O))[1]
        b = call(["phases", "--naive"], store(O))[1]
        c = call(["phases", "--jobs", "4"], store(O))[1]
        assert a == b == c
    assert "000:3 100:3 010:3 110:3\n" in call(["phases"], store(schurr(3)))[1]


def test_queries():
    s3 = store(schurr(3))
    assert call(["2ip", "000:3", "110:3"], s3) == (0, "IN-PHASE\n", "")
    assert call(["2ip", "000:1", "011:1"], s3)[0] == 1
    assert call(["flippable", "000:1"], store(uniform(3)))[:2] == (0, "FLIPPABLE\n")
    assert call(["flippable", "000:3"], s3)[0] == 1
    assert call(["2ip", "00:1", "10:1"], s3)[0] == 2


def test_flips(tmp_path):
    eds = tmp_path / "s.eds"
    eds.write_text("000 3\n100 3\n010 3\n110 3\n")
    code, out, _ = call(["flip-matching", str(eds)], store(schurr(3)))
    assert code == 0
    assert load(out).array.tolist() == (schurr(3).array ^ 0b100).tolist()
    eds.write_text("000 3\n")
    assert call(["flip-matching", str(eds)], store(schurr(3)))[0] == 2
    code, out, _ = call(["flip", str(eds)], store(schurr(3)))
    assert code == 0 and load(out).outmap(0) == 0b100


def test_partial_swap_and_hypervertex(tmp_path):
    code, out, _ = call(["partial-swap", "-j", "1"], store(uniform(3)))
    assert code == 0 and load(out) == uniform(3)
    assert call(["hypervertex", "**0"], store(uniform(3)))[:2] == (0, "HYPERVERTEX\n")
    assert call(["hypervertex", "0*0"], store(schurr(3)))[0] == 1
    rep = tmp_path / "r.uso"
    rep.write_text(store(schurr(2)))
    code, out, _ = call(["hypervertex", "**1", "--replace", str(rep)], store(uniform(3)))
    assert code == 0
    assert load(out).outmap(0b111) == 0b100 | schurr(2).outmap(0b11)


def test_sample_requires_seed():
    assert call(["sample", "-n", "3", "--steps", "10"])[0] == 2
    code, out, err = call(["sample", "-n", "3", "--steps", "10", "--seed", "7"])
    assert code == 0 and err == "seed 7\n"
    assert out == call(["sample", "-n", "3", "--steps", "10", "--seed", "7"])[1]


def test_enumerate():
    assert call(["enumerate", "-n", "3", "--count"])[1] == "744\n"
    assert len(load_many(call(["enumerate", "-n", "2"])[1])) == 12
    assert call(["enumerate", "-n", "4", "--count"])[0] == 2


def test_reduce(tmp_path):
    q = tmp_path / "x.qdimacs"
    q.write_text("p cnf 2 2\na 1 0\ne 2 0\n1 2 0\n-1 -2 0\n")
    emitted = tmp_path / "o.uso"
    code, out, _ = call(["reduce", str(q), "--decide", "--emit-uso", str(emitted)])
    assert code == 0 and out.endswith("IN-PHASE\n") and out.startswith("dim 8\n")
    assert load(emitted.read_text()).dim == 8
    q.write_text("p cnf 1 1\na 1 0\n1 0\n")
    code, out, _ = call(["reduce", str(q), "--decide"])
    assert code == 1 and out.endswith("NOT-IN-PHASE\n")
    q.write_text("p cnf 1 1\na 2 0\n1 0\n")
    code, _, err = call(["reduce", str(q)])
    assert code == 2 and "line 2" in err


def test_bench_csv():
    code, out, _ = call(["bench", "-n", "4"])
    rows = [r.split(",") for r in out.strip().split("\n")]
    assert rows[0] == ["op", "n", "pair_checks", "wall_ns"]
    assert len(rows) == 1 + 4 * 4


def test_usage_errors():
    assert call([])[0] == 2
    assert call(["frobnicate"])[0] == 2
    code, _, err = call(["gen", "--kind", "cube", "-n", "2"])
    assert code == 2 and "usage" in err
    assert call(["gen", "--kind", "uniform", "-n", "0"])[0] == 2
