import dataclasses
import json

import pytest
from hypothesis import given, settings, strategies as st

from approx_adders.error_metrics import (ERROR_FIELDS, PRINTED_TABLE1, approx_sum_bit, measure,
                                         sweep, table1, table1_matches_printed, write_csv,
                                         write_json)
from approx_adders.netlist import AdderSpec, ApproxStyle
from approx_adders.simulate import VectorStream

EXH = VectorStream.exhaustive()


@pytest.mark.parametrize("a,b,style,want", [
    (1, 1, ApproxStyle.OR, 1),
    (1, 1, ApproxStyle.XOR, 0),
    (0, 0, ApproxStyle.OR, 0),
    (0, 0, ApproxStyle.XOR, 0),
])
def test_approx_sum_bit(a, b, style, want):
    assert approx_sum_bit(a, b, style) == want


def test_approx_sum_bit_rejects_none():
    with pytest.raises(ValueError):
        approx_sum_bit(1, 0, ApproxStyle.NONE)


def test_table1_xor_correct_iff_no_carry():
    rows = table1()
    assert len(rows) == 8
    assert all(r.xor_correct == (r.c == 0) for r in rows)


def test_table1_or_incorrect_rows():
    wrong = {(r.a, r.b, r.c) for r in table1() if not r.or_correct}
    assert wrong == {(0, 0, 1), (0, 1, 1), (1, 0, 1), (1, 1, 0)}


def test_table1_balanced():
    rows = table1()
    assert sum(r.xor_correct for r in rows) == 4
    assert sum(r.or_correct for r in rows) == 4


def test_table1_matches_printed():
    assert table1_matches_printed() == 24
    assert len(PRINTED_TABLE1) == 8


def test_measure_accurate_is_error_free():
    rep = measure(AdderSpec(8, "rca"), VectorStream.montecarlo(2000, 1))
    assert rep.error_rate == 0 and rep.mean_error_distance == 0
    assert rep.max_error_distance == 0 and rep.mean_relative_error == 0


BRUTE_CASES = [(arch, style, k) for arch in ("rca", "cla") for style in ("or", "xor")
               for k in (0, 2, 4, 6) if arch == "rca" or k % 4 == 0]


@pytest.mark.parametrize("arch,style,k", BRUTE_CASES)
def test_measure_matches_bruteforce(oracle_n8, arch, style, k):
    spec = AdderSpec(8, arch, k, style if k else "none")
    want = oracle_n8[(style, k)]
    for via in ("behavioral", "netlist"):
        rep = measure(spec, EXH, via=via)
        assert rep.vectors_evaluated == want["vectors"]
        assert rep.error_count == want["error_count"]
        assert rep.total_error_distance == want["total_error_distance"]
        assert rep.max_error_distance == want["max_error_distance"]
        assert rep.error_rate == want["error_count"] / 65536
        assert rep.mean_error_distance == want["total_error_distance"] / 65536


def test_or_k4_error_bounded():
    rep = measure(AdderSpec(8, "rca", 4, "or"), EXH)
    assert rep.max_error_distance < 2**5


def test_sweep_k0_only():
    reps = sweep(8, "rca", ["or", "xor"], [0], EXH)
    assert len(reps) == 1
    assert reps[0].error_rate == 0 and reps[0].mean_error_distance == 0


def test_sweep_orders_by_k(oracle_n8):
    reps = sweep(8, "rca", ["or"], [6, 0, 4, 2], EXH)
    assert [r.approx_bits for r in reps] == [0, 2, 4, 6]
    for r in reps:
        assert r.total_error_distance == oracle_n8[("or", r.approx_bits)]["total_error_distance"]


def test_sweep_rca_equals_cla_n32():
    stream = VectorStream.montecarlo(100_000, 11)
    ks = [4, 8, 12, 16, 20]
    rca = sweep(32, "rca", ["or", "xor"], ks, stream)
    cla = sweep(32, "cla", ["or", "xor"], ks, stream)
    strip = lambda r: dataclasses.replace(r, arch="")
    assert [strip(r) for r in rca] == [strip(r) for r in cla]
    assert len(rca) == 10


@settings(max_examples=25, deadline=None)
@given(st.sampled_from(["rca", "cla"]), st.integers(1, 7), st.sampled_from(["or", "xor"]),
       st.integers(0, 2**32))
def test_netlist_and_closed_form_reports_agree(arch, k4, style, seed):
    k = 4 * k4 if arch == "cla" else 3 * k4
    spec = AdderSpec(32, arch, k, style)
    stream = VectorStream.montecarlo(500, seed)
    a = measure(spec, stream, via="netlist", cross_check=False)
    b = measure(spec, stream, via="behavioral", cross_check=False)
    assert a == b
    assert 0 <= a.error_rate <= 1
    assert a.max_error_distance >= a.mean_error_distance >= 0
    assert a.normalized_med == a.mean_error_distance / 2**32


def test_metrics_independent_of_chunking():
    spec = AdderSpec(16, "rca", 5, "or")
    stream = VectorStream.montecarlo(10_000, 5)
    whole = measure(spec, stream)
    parts = measure(spec, stream, chunk=333)
    assert (parts.error_count, parts.total_error_distance, parts.max_error_distance) == (
        whole.error_count, whole.total_error_distance, whole.max_error_distance)
    assert parts.mean_relative_error == pytest.approx(whole.mean_relative_error, rel=1e-12)


def test_relative_error_uses_floor_of_one():
    # a=b=0 is exact; a=1,b=0 under XOR k=1 is exact; a=b=1 gives 0 vs 2
    spec = AdderSpec(2, "rca", 1, "xor")
    rep = measure(spec, EXH)
    assert rep.mean_relative_error > 0


def test_csv_and_json(tmp_path):
    reps = sweep(8, "rca", ["or"], [0, 4], EXH)
    write_csv(tmp_path / "e.csv", reps)
    write_json(tmp_path / "e.json", reps)
    lines = (tmp_path / "e.csv").read_text().splitlines()
    assert lines[0] == ",".join(ERROR_FIELDS)
    assert len(lines) == 3
    data = json.loads((tmp_path / "e.json").read_text())
    assert data[1]["error_count"] == 44800


def test_frozen_oracle_is_current():
    import subprocess
    import sys
    from pathlib import Path
    here = Path(__file__).parent
    out = subprocess.run([sys.executable, str(here / "oracles" / "bruteforce_errors.py")],
                         capture_output=True, text=True, check=True).stdout
    assert out == (here / "data" / "bruteforce_n8.json").read_text()
