from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from approx_adders.cost_model import (CellLibrary, CellSpec, MissingCellError, Table2Reference,
                                      Table2Row, area_of, calibrate_delay, calibrated_delay,
                                      fit_delay, gate_level_area, reference_specs, pdp_report,
                                      reduction, reproduce_claims, structural_delay)
from approx_adders.netlist import (AdderSpec, Architecture, GateKind, NetlistBuilder,
                                   build_adder)

PRINTED_TABLE2 = [
    ("RCA", "35.18", "3.35", "154.52"), ("RCX1", "32.28", "2.94", "143.34"),
    ("RCX2", "27.98", "2.53", "132.15"), ("RCX3", "23.69", "2.12", "120.97"),
    ("RCX4", "19.36", "1.70", "109.79"), ("RCX5", "16.41", "1.29", "98.61"),
    ("CLA", "49.05", "1.13", "646.54"), ("CLX1", "44.41", "1.04", "573.86"),
    ("CLX2", "38.29", "0.95", "501.17"), ("CLX3", "32.10", "0.86", "428.49"),
    ("CLX4", "25.83", "0.77", "355.80"), ("CLX5", "21.05", "0.68", "283.12"),
]


def test_bundled_table_is_verbatim():
    from importlib import resources
    text = resources.files("approx_adders").joinpath("data/table2.csv").read_text()
    lines = text.strip().splitlines()
    assert lines[0] == "legend,power_uW,delay_ns,area_um2"
    assert [tuple(ln.split(",")) for ln in lines[1:]] == PRINTED_TABLE2


def test_default_library_carries_published_areas(lib):
    assert lib["FA"].area == 4.83
    assert lib["OR2"].area == 2.03
    assert lib["XOR2"].area == 4.32
    assert lib["CLA4"].area == 80.82
    for kind in GateKind:
        if not kind.is_source:
            assert kind in lib


class TestArea:
    def test_accurate_rca(self, lib):
        a = area_of(AdderSpec(32, "rca"), lib)
        assert a == pytest.approx(154.56)
        assert abs(a - 154.52) / 154.52 < 1e-3

    def test_clx1_exact(self, lib):
        assert area_of(AdderSpec(32, "cla", 4, "or"), lib) == pytest.approx(573.86, abs=1e-9)

    def test_rcx5(self, lib):
        a = area_of(AdderSpec(32, "rca", 20, "or"), lib)
        assert a == pytest.approx(98.56)
        assert abs(a - 98.61) / 98.61 < 1e-3

    def test_xor_style_costs_more(self, lib):
        assert area_of(AdderSpec(32, "rca", 8, "xor"), lib) > area_of(AdderSpec(32, "rca", 8, "or"), lib)

    def test_missing_cell(self):
        lib = CellLibrary({"FA": CellSpec("FA", 4.83)}, name="partial")
        with pytest.raises(MissingCellError):
            area_of(AdderSpec(32, "rca", 4, "or"), lib)

    def test_gate_level_area(self, lib):
        nl = build_adder(AdderSpec(1, "rca"))
        assert gate_level_area(nl, lib) == pytest.approx(3 * 4.32 + 2.03 + 2.54)


class TestStructuralDelay:
    def test_single_gate(self, lib):
        sink = NetlistBuilder(1)
        a, b = sink.input("A0"), sink.input("B0")
        sink.output("SUM0", sink.add(GateKind.OR2, a, b))
        assert structural_delay(sink.finish(), lib) == lib["OR2"].unit_delay

    def test_rca_linear(self, lib):
        d = [structural_delay(build_adder(AdderSpec(n, "rca")), lib) for n in range(2, 17)]
        steps = {d[i] - d[i - 1] for i in range(1, len(d))}
        assert len(steps) == 1 and steps.pop() > 0

    def test_cla_per_nibble(self, lib):
        d = [structural_delay(build_adder(AdderSpec(n, "cla")), lib) for n in range(8, 33, 4)]
        steps = {d[i] - d[i - 1] for i in range(1, len(d))}
        assert len(steps) == 1 and steps.pop() > 0

    @pytest.mark.parametrize("arch,ks", [("rca", range(1, 32)), ("cla", range(4, 32, 4))])
    def test_approximation_never_slower(self, lib, arch, ks):
        base = structural_delay(build_adder(AdderSpec(32, arch)), lib)
        stage = 1 if arch == "rca" else 4
        for k in ks:
            for style in ("or", "xor"):
                d = structural_delay(build_adder(AdderSpec(32, arch, k, style)), lib)
                assert d <= base
                if k >= stage:
                    assert d < base

    def test_weighted(self):
        lib = CellLibrary({k.value: CellSpec(k.value, 1.0, 2.5 if k is GateKind.AO21 else 1.0)
                           for k in GateKind if not k.is_source})
        d1 = structural_delay(build_adder(AdderSpec(2, "rca")), lib)
        d2 = structural_delay(build_adder(AdderSpec(3, "rca")), lib)
        assert d2 - d1 == 2.5


def exact_affine_fit(xs, ys):
    """Closed-form least squares in rationals."""
    xs = [Fraction(x) for x in xs]
    ys = [Fraction(y) for y in ys]
    n = len(xs)
    mx, my = sum(xs) / n, sum(ys) / n
    slope = sum((x - mx) * (y - my) for x, y in zip(xs, ys)) / sum((x - mx) ** 2 for x in xs)
    return slope, my - slope * mx


class TestCalibration:
    def test_cla_fit(self, table2):
        p = calibrate_delay(table2)[Architecture.CLA]
        assert p.d_stage == pytest.approx(0.09, abs=1e-12)
        assert p.d_fixed == pytest.approx(0.41, abs=1e-12)
        assert max(abs(r) for r in p.residuals) < 1e-12

    def test_cla_fit_exact_in_rationals(self):
        rows = [r for r in PRINTED_TABLE2 if r[0].startswith("CL")]
        xs = [Fraction(8 - i) for i in range(6)]  # accurate nibbles 8..3
        ys = [Fraction(r[2]) for r in rows]
        slope, icpt = exact_affine_fit(xs, ys)
        assert (slope, icpt) == (Fraction(9, 100), Fraction(41, 100))
        assert all(slope * x + icpt == y for x, y in zip(xs, ys))

    def test_rca_fit(self, table2):
        p = calibrate_delay(table2)[Architecture.RCA]
        assert max(abs(r) for r in p.residuals) <= 0.02
        for row in table2.by_arch(Architecture.RCA):
            assert abs(p.predict(32 - row.approx_bits) - row.delay) <= 0.02

    def test_rca_fit_matches_rational_oracle(self, table2):
        rows = [r for r in PRINTED_TABLE2 if r[0].startswith("RC")]
        slope, icpt = exact_affine_fit([32 - 4 * i for i in range(6)], [r[2] for r in rows])
        p = calibrate_delay(table2)[Architecture.RCA]
        assert p.d_stage == pytest.approx(float(slope), abs=1e-12)
        assert p.d_fixed == pytest.approx(float(icpt), abs=1e-12)

    def test_needs_two_points(self):
        with pytest.raises(ValueError):
            fit_delay(Architecture.RCA, [32], [3.35])
        one_row = Table2Reference((Table2Row("RCA", 1, 1, 1), Table2Row("CLA", 1, 1, 1),
                                   Table2Row("CLX1", 1, 1, 1)))
        with pytest.raises(ValueError):
            calibrate_delay(one_row)

    @pytest.mark.parametrize("spec,want,tol", [
        (AdderSpec(32, "rca", 16, "or"), 1.70, 0.02),
        (AdderSpec(32, "cla", 20, "or"), 0.68, 1e-9),
        (AdderSpec(32, "cla"), 1.13, 1e-9),
    ])
    def test_calibrated_delay(self, table2, spec, want, tol):
        assert abs(calibrated_delay(spec, calibrate_delay(table2)) - want) <= tol

    def test_wrong_arch_params(self, table2):
        params = calibrate_delay(table2)
        with pytest.raises(ValueError):
            calibrated_delay(AdderSpec(32, "rca"), params[Architecture.CLA])


@pytest.fixture(scope="module")
def params(table2):
    return calibrate_delay(table2)


class TestPDP:
    def test_rcx1(self, table2, lib, params):
        rep = pdp_report(AdderSpec(32, "rca", 4, "or"), table2, lib, params)
        assert rep.pdp == pytest.approx(94.90, abs=0.005)
        assert rep.legend == "RCX1"
        base = pdp_report(AdderSpec(32, "rca"), table2, lib, params)
        assert base.pdp == pytest.approx(117.85, abs=0.005)
        assert abs(rep.reductions["pdp"] - 19.5) <= 0.1

    def test_clx5(self, table2, lib, params):
        rep = pdp_report(AdderSpec(32, "cla", 20, "or"), table2, lib, params)
        assert rep.pdp == pytest.approx(14.31, abs=0.005)
        base = pdp_report(AdderSpec(32, "cla"), table2, lib, params)
        assert base.pdp == pytest.approx(55.43, abs=0.005)
        assert abs(rep.reductions["pdp"] - 74.2) <= 0.1

    def test_lookup_miss(self, table2, lib, params):
        rep = pdp_report(AdderSpec(32, "rca", 7, "or"), table2, lib, params)
        assert rep.power is None and rep.pdp is None
        assert rep.area > 0 and rep.delay_calibrated > 0
        assert "pdp" not in rep.reductions and "area" in rep.reductions

    def test_xor_style_has_no_reference_power(self, table2, lib, params):
        assert pdp_report(AdderSpec(32, "rca", 4, "xor"), table2, lib, params).power is None

    def test_baseline_has_zero_reduction(self, table2, lib, params):
        rep = pdp_report(AdderSpec(32, "cla"), table2, lib, params)
        assert all(v == 0 for v in rep.reductions.values())

    def test_reference_specs(self):
        specs = reference_specs()
        assert len(specs) == 12 and len(set(specs)) == 12


class TestClaims:
    def test_headline(self, table2):
        rep = reproduce_claims(table2)
        by_name = {c.name: c for c in rep.claims}
        a = by_name["mean approximate-RCA PDP reduction vs RCA"]
        c = by_name["mean approximate-CLA PDP reduction vs mean approximate-RCA PDP"]
        assert abs(a.computed - 54.2) <= 0.15
        assert abs(c.computed - 46.5) <= 0.15
        assert abs(by_name["RCX3 power reduction"].computed - 32.7) <= 0.1
        assert rep.passed

    def test_per_row_pdp_reductions_monotone(self, table2):
        rep = reproduce_claims(table2)
        for prefix in ("RCX", "CLX"):
            vals = [rep.pdp_reduction[f"{prefix}{i}"] for i in range(1, 6)]
            assert vals == sorted(vals)

    def test_detects_perturbation(self, table2):
        rows = [Table2Row(r.legend, r.power * (1.1 if r.legend == "CLX3" else 1), r.delay, r.area)
                for r in table2.rows]
        assert not reproduce_claims(Table2Reference(tuple(rows))).passed

    @settings(max_examples=30, deadline=None)
    @given(st.floats(0.01, 100))
    def test_scale_invariant(self, scale):
        base = Table2Reference.load()
        scaled = Table2Reference(tuple(Table2Row(r.legend, r.power * scale, r.delay, r.area)
                                       for r in base.rows))
        a, b = reproduce_claims(base), reproduce_claims(scaled)
        for legend, v in a.pdp_reduction.items():
            assert b.pdp_reduction[legend] == pytest.approx(v, abs=1e-9)
        for ca, cb in zip(a.claims, b.claims):
            if ca.unit == "%":
                assert cb.computed == pytest.approx(ca.computed, abs=1e-9)


def test_reduction():
    assert reduction(200, 150) == 25


class TestLibraryFile:
    def test_round_trip(self, lib):
        again = CellLibrary.parse(lib.dumps())
        assert dict(again.cells) == dict(lib.cells)
        assert again.name == lib.name

    def test_parse(self):
        lib = CellLibrary.parse('library="x y"\n# c\nname=OR2 area_um2=1.5 unit_delay=2\n')
        assert lib.name == "x y"
        assert lib["OR2"] == CellSpec("OR2", 1.5, 2.0)

    def test_bad_records(self):
        with pytest.raises(ValueError):
            CellLibrary.parse("name=OR2 unit_delay=1\n")
        with pytest.raises(ValueError):
            CellLibrary.parse("name=OR2 area_um2=0\n")
        with pytest.raises(ValueError):
            CellLibrary.parse("junk\n")
