"""Command-line interface: file formats, exit codes, CSV contract."""

import csv
import random

import pytest

from nttmul.cli import CSV_HEADER, main, read_poly, write_poly
from nttmul.params import load_plan
from nttmul.rns import RnsBasis


@pytest.fixture
def plan_file(tmp_path):
    path = tmp_path / "plan.txt"
    assert main(["params", "--n", "16", "--bits", "12", "--seed", "1",
                 "--out", str(path)]) == 0
    return path


def _write_random_pair(tmp_path, plan, seed=3, binary=False):
    rng = random.Random(seed)
    a = [rng.randrange(plan.q) for _ in range(plan.n)]
    b = [rng.randrange(plan.q) for _ in range(plan.n)]
    pa, pb = tmp_path / "a.poly", tmp_path / "b.poly"
    write_poly(str(pa), a, plan.n, plan.q, binary)
    write_poly(str(pb), b, plan.n, plan.q, binary)
    return pa, pb


def test_params_writes_valid_plan(tmp_path, capsys):
    plan_file = tmp_path / "plan.txt"
    assert main(["params", "--n", "16", "--bits", "12", "--seed", "1",
                 "--out", str(plan_file)]) == 0
    out = capsys.readouterr().out
    assert "q = " in out and "psi = " in out
    plan = load_plan(plan_file)
    assert plan.n == 16
    assert plan.q.bit_length() == 12
    assert plan.q % 32 == 1


def test_params_usage_errors(tmp_path):
    out = str(tmp_path / "x.txt")
    assert main(["params", "--n", "3", "--bits", "10", "--out", out]) == 2
    assert main(["params", "--n", "16", "--bits", "63", "--out", out]) == 2


def test_convolve_methods_agree(tmp_path, plan_file):
    plan = load_plan(plan_file)
    pa, pb = _write_random_pair(tmp_path, plan)
    outs = {}
    for method in ("naive", "ntt", "fused"):
        dest = tmp_path / f"out_{method}.poly"
        assert main(["convolve", "--plan", str(plan_file), "--a", str(pa),
                     "--b", str(pb), "--method", method,
                     "--out", str(dest)]) == 0
        outs[method] = dest.read_bytes()
    assert outs["naive"] == outs["ntt"] == outs["fused"]


def test_convolve_identity_input(tmp_path, plan_file):
    plan = load_plan(plan_file)
    _, pb = _write_random_pair(tmp_path, plan)
    e0 = tmp_path / "e0.poly"
    write_poly(str(e0), [1] + [0] * (plan.n - 1), plan.n, plan.q, False)
    dest = tmp_path / "out.poly"
    assert main(["convolve", "--plan", str(plan_file), "--a", str(e0),
                 "--b", str(pb), "--out", str(dest)]) == 0
    assert read_poly(str(dest), False) == read_poly(str(pb), False)


def test_convolve_binary_roundtrip(tmp_path, plan_file):
    plan = load_plan(plan_file)
    pa, pb = _write_random_pair(tmp_path, plan, binary=True)
    dest_b = tmp_path / "out.bin"
    assert main(["convolve", "--plan", str(plan_file), "--a", str(pa),
                 "--b", str(pb), "--binary", "--out", str(dest_b)]) == 0
    n, q, coeffs = read_poly(str(dest_b), True)
    assert (n, q) == (plan.n, plan.q)
    # same product via text files
    pa_t, pb_t = _write_random_pair(tmp_path, plan)
    dest_t = tmp_path / "out.txt"
    assert main(["convolve", "--plan", str(plan_file), "--a", str(pa_t),
                 "--b", str(pb_t), "--out", str(dest_t)]) == 0
    assert read_poly(str(dest_t), False)[2] == coeffs


def test_convolve_length_mismatch_exit_2(tmp_path, plan_file):
    plan = load_plan(plan_file)
    short = tmp_path / "short.poly"
    write_poly(str(short), [0] * 8, 8, plan.q, False)
    _, pb = _write_random_pair(tmp_path, plan)
    assert main(["convolve", "--plan", str(plan_file), "--a", str(short),
                 "--b", str(pb), "--out", str(tmp_path / "o.poly")]) == 2


def test_convolve_malformed_file_diagnostic(tmp_path, plan_file, capsys):
    bad = tmp_path / "bad.poly"
    bad.write_text("16 4289\n1\n2\nnot-a-number\n")
    assert main(["convolve", "--plan", str(plan_file), "--a", str(bad),
                 "--b", str(bad), "--out", str(tmp_path / "o.poly")]) == 2
    err = capsys.readouterr().err
    assert "bad.poly" in err


def test_convolve_rns(tmp_path):
    basis = RnsBasis.build(8, 28, 2, seed=0)
    plan_path = tmp_path / "basis.txt"
    basis.save(plan_path)
    rng = random.Random(9)
    a = [rng.randrange(basis.big_q) for _ in range(8)]
    b = [rng.randrange(basis.big_q) for _ in range(8)]
    pa, pb = tmp_path / "a.poly", tmp_path / "b.poly"
    write_poly(str(pa), a, 8, basis.big_q, False)
    write_poly(str(pb), b, 8, basis.big_q, False)
    dest = tmp_path / "out.poly"
    assert main(["convolve", "--plan", str(plan_path), "--a", str(pa),
                 "--b", str(pb), "--method", "rns", "--out", str(dest)]) == 0
    from nttmul.rns import negacyclic_naive_bigint
    assert read_poly(str(dest), False)[2] == \
        negacyclic_naive_bigint(a, b, basis.big_q)


def test_verify_samples_zero_skips(capsys):
    assert main(["verify", "--samples", "0"]) == 0
    out = capsys.readouterr().out
    assert "SKIP" in out
    assert "PASS  reduction-exhaustive" in out


def test_verify_corrupted_plan_fails(tmp_path, plan_file, capsys):
    plan = load_plan(plan_file)
    bad = tmp_path / "bad_plan.txt"
    bad.write_text(f"{plan.n} {plan.q} {plan.psi + 1} proposed\n")
    assert main(["verify", "--samples", "0", "--plan", str(bad)]) == 1
    assert "FAIL  plan-validation" in capsys.readouterr().out


def test_bench_csv_contract(tmp_path):
    dest = tmp_path / "bench.csv"
    for kernel in ("barrett-proposed", "polymul-fused"):
        assert main(["bench", "--kernel", kernel, "--n", "64", "--bits", "20",
                     "--reps", "3", "--warmup", "1",
                     "--csv", str(dest)]) == 0
    with open(dest, newline="") as fh:
        rows = list(csv.reader(fh))
    assert tuple(rows[0]) == CSV_HEADER  # header written exactly once
    assert len(rows) == 3
    assert rows[1][0] == "barrett-proposed"
    assert rows[2][0] == "polymul-fused"
    for row in rows[1:]:
        assert float(row[5]) <= float(row[6]) * 1.001  # min <= mean
    # fused pipeline reports the n/2-reduced product count
    assert int(rows[2][8]) > 0


def test_bench_fused_delta(tmp_path):
    dest = tmp_path / "delta.csv"
    for kernel in ("polymul", "polymul-fused"):
        assert main(["bench", "--kernel", kernel, "--n", "2048",
                     "--bits", "30", "--reps", "1", "--warmup", "0",
                     "--csv", str(dest)]) == 0
    with open(dest, newline="") as fh:
        rows = list(csv.reader(fh))
    modmul = {r[0]: int(r[8]) for r in rows[1:]}
    assert modmul["polymul"] - modmul["polymul-fused"] == 1024


def test_count_ops_table(plan_file, capsys):
    assert main(["count-ops", "--plan", str(plan_file)]) == 0
    out = capsys.readouterr().out
    assert "naive" in out and "fused" in out and "delta" in out
    # n = 16: modmul delta -8, negations +4
    delta_line = next(l for l in out.splitlines() if l.startswith("delta"))
    fields = delta_line.split()
    assert fields[1] == "-8"
    assert fields[-1] == "+4"


def test_count_ops_naive_square(tmp_path, capsys):
    path = tmp_path / "p.txt"
    assert main(["params", "--n", "256", "--bits", "30",
                 "--out", str(path)]) == 0
    capsys.readouterr()
    assert main(["count-ops", "--plan", str(path), "--method", "naive"]) == 0
    out = capsys.readouterr().out
    naive_line = next(l for l in out.splitlines() if l.startswith("naive"))
    assert naive_line.split()[1] == str(256 * 256)


def test_read_poly_rejects_binary_garbage(tmp_path):
    bad = tmp_path / "g.bin"
    bad.write_bytes(b"XXXX\x01" + b"\x00" * 16)
    with pytest.raises(Exception):
        read_poly(str(bad), True)
