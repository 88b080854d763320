"""Area, delay, power and PDP for accurate and approximate 32-bit adders.

Area is aggregated at macro level: an accurate RCA bit is one FA cell, an
accurate CLA nibble is one CLA4 cell, and every approximated bit is a
single OR2 or XOR2 cell.

Two delay estimators exist side by side. ``structural_delay`` is the
unit-weight longest path through a netlist and is used for shape checks.
``calibrated_delay`` is an affine model in the accurate-part width fitted
to the published reference delays, and is what reproduces them in ns.

Power is never modelled. It is looked up in the bundled reference table
and every power-derived figure is plain arithmetic over that table.
"""
from __future__ import annotations

import csv
import shlex
import statistics
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Mapping

import numpy as np

from .netlist import AdderSpec, ApproxStyle, Architecture, GateKind, Netlist, build_adder

REFERENCE_WIDTH = 32
REFERENCE_K = (4, 8, 12, 16, 20)
STAGE_WIDTH = {Architecture.RCA: 1, Architecture.CLA: 4}


class MissingCellError(KeyError):
    pass


@dataclass(frozen=True)
class CellSpec:
    name: str
    area: float
    unit_delay: float = 1.0

    def __post_init__(self):
        if self.area <= 0:
            raise ValueError(f"cell {self.name}: area must be positive")
        if self.unit_delay < 0:
            raise ValueError(f"cell {self.name}: unit_delay must be non-negative")


@dataclass(frozen=True)
class CellLibrary:
    cells: Mapping[str, CellSpec]
    name: str = ""
    source: str = ""

    def __getitem__(self, kind) -> CellSpec:
        key = kind.value if isinstance(kind, GateKind) else str(kind)
        try:
            return self.cells[key]
        except KeyError:
            raise MissingCellError(f"cell library {self.name!r} has no entry for {key}") from None

    def __contains__(self, kind) -> bool:
        key = kind.value if isinstance(kind, GateKind) else str(kind)
        return key in self.cells

    def unit_delay(self, kind: GateKind) -> float:
        if kind.is_source:
            return 0.0
        return self[kind].unit_delay

    @classmethod
    def parse(cls, text: str) -> "CellLibrary":
        cells, meta = {}, {}
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            try:
                rec = dict(tok.split("=", 1) for tok in shlex.split(line))
            except ValueError:
                raise ValueError(f"line {lineno}: expected key=value pairs: {raw!r}") from None
            if "name" in rec:
                try:
                    cells[rec["name"]] = CellSpec(rec["name"], float(rec["area_um2"]),
                                                  float(rec.get("unit_delay", 1.0)))
                except KeyError as exc:
                    raise ValueError(f"line {lineno}: missing {exc.args[0]}") from None
            else:
                meta.update(rec)
        return cls(cells, meta.get("library", ""), meta.get("source", ""))

    @classmethod
    def load(cls, path) -> "CellLibrary":
        return cls.parse(Path(path).read_text())

    def dumps(self) -> str:
        lines = [f"library={shlex.quote(self.name)}", f"source={shlex.quote(self.source)}"]
        for c in self.cells.values():
            lines.append(f"name={c.name} area_um2={c.area!r} unit_delay={c.unit_delay!r}")
        return "\n".join(lines) + "\n"


def default_library() -> CellLibrary:
    text = resources.files("approx_adders").joinpath("data/default_cells.txt").read_text()
    return CellLibrary.parse(text)


# reference table ---------------------------------------------------------

@dataclass(frozen=True)
class Table2Row:
    legend: str
    power: float  # uW
    delay: float  # ns
    area: float  # um^2

    @property
    def arch(self) -> Architecture:
        return Architecture.RCA if self.legend.startswith("RC") else Architecture.CLA

    @property
    def approx_bits(self) -> int:
        return 4 * int(self.legend[3:]) if self.legend[2] == "X" else 0

    @property
    def pdp(self) -> float:
        return self.power * self.delay


@dataclass(frozen=True)
class Table2Reference:
    rows: tuple[Table2Row, ...]

    @classmethod
    def load(cls, path=None) -> "Table2Reference":
        if path is None:
            text = resources.files("approx_adders").joinpath("data/table2.csv").read_text()
        else:
            text = Path(path).read_text()
        rows = [Table2Row(r["legend"], float(r["power_uW"]), float(r["delay_ns"]),
                          float(r["area_um2"]))
                for r in csv.DictReader(text.splitlines())]
        return cls(tuple(rows))

    def __getitem__(self, legend: str) -> Table2Row:
        for r in self.rows:
            if r.legend == legend:
                return r
        raise KeyError(legend)

    def lookup(self, spec: AdderSpec) -> Table2Row | None:
        """Row for a spec, or None if the spec is not one of the 12 published designs."""
        if spec.width != REFERENCE_WIDTH or spec.style is ApproxStyle.XOR:
            return None
        for r in self.rows:
            if r.arch is spec.arch and r.approx_bits == spec.approx_bits:
                return r
        return None

    def by_arch(self, arch: Architecture) -> list[Table2Row]:
        return sorted((r for r in self.rows if r.arch is arch), key=lambda r: r.approx_bits)


def legend_for(spec: AdderSpec) -> str | None:
    if spec.width != REFERENCE_WIDTH or spec.style is ApproxStyle.XOR:
        return None
    if spec.approx_bits == 0:
        return spec.arch.name
    if spec.approx_bits in REFERENCE_K:
        prefix = "RCX" if spec.arch is Architecture.RCA else "CLX"
        return f"{prefix}{spec.approx_bits // 4}"
    return None


# area --------------------------------------------------------------------

def area_of(spec: AdderSpec, lib: CellLibrary) -> float:
    m, k = spec.accurate_bits, spec.approx_bits
    if spec.arch is Architecture.RCA:
        area = m * lib["FA"].area
    else:
        area = (m // 4) * lib["CLA4"].area
    if k:
        cell = GateKind.OR2 if spec.style is ApproxStyle.OR else GateKind.XOR2
        area += k * lib[cell].area
    return area


def gate_level_area(netlist: Netlist, lib: CellLibrary) -> float:
    """Sum of decomposed gate areas; not the figure the reference table uses."""
    return sum(lib[g.kind].area for g in netlist.logic_gates)


# delay -------------------------------------------------------------------

def arrival_times(netlist: Netlist, lib: CellLibrary) -> list[float]:
    arrival = [0.0] * netlist.num_nets
    for g in netlist.gates:
        if g.kind.is_source:
            continue
        arrival[g.output] = max(arrival[i] for i in g.inputs) + lib.unit_delay(g.kind)
    return arrival


def structural_delay(netlist: Netlist, lib: CellLibrary) -> float:
    arrival = arrival_times(netlist, lib)
    return max(arrival[net] for _, net in netlist.primary_outputs)


@dataclass(frozen=True)
class DelayModelParams:
    arch: Architecture
    d_stage: float  # ns per stage
    d_fixed: float  # ns
    stage_width: int
    residuals: tuple[float, ...] = ()

    def predict(self, accurate_bits: int) -> float:
        return self.d_stage * (accurate_bits / self.stage_width) + self.d_fixed


def fit_delay(arch: Architecture, accurate_bits, delays) -> DelayModelParams:
    x = np.asarray(accurate_bits, dtype=float) / STAGE_WIDTH[arch]
    y = np.asarray(delays, dtype=float)
    if len(x) < 2 or len(np.unique(x)) < 2:
        raise ValueError("delay calibration needs at least two distinct widths")
    d_stage, d_fixed = np.polyfit(x, y, 1)
    residuals = tuple(float(v) for v in y - (d_stage * x + d_fixed))
    return DelayModelParams(arch, float(d_stage), float(d_fixed), STAGE_WIDTH[arch], residuals)


def calibrate_delay(table2: Table2Reference) -> dict[Architecture, DelayModelParams]:
    """Least-squares affine fit of delay against accurate-part width, per architecture."""
    params = {}
    for arch in Architecture:
        rows = table2.by_arch(arch)
        params[arch] = fit_delay(arch, [REFERENCE_WIDTH - r.approx_bits for r in rows],
                                 [r.delay for r in rows])
    return params


def calibrated_delay(spec: AdderSpec, params) -> float:
    p = params[spec.arch] if isinstance(params, Mapping) else params
    if p.arch is not spec.arch:
        raise ValueError(f"delay parameters are for {p.arch.name}, spec is {spec.arch.name}")
    return p.predict(spec.accurate_bits)


# reports -----------------------------------------------------------------

def reduction(base: float, value: float) -> float:
    return 100.0 * (base - value) / base


@dataclass
class CostReport:
    spec: AdderSpec
    legend: str | None
    area: float
    delay_structural: float
    delay_calibrated: float
    delay_reference: float | None = None
    power: float | None = None
    pdp: float | None = None
    reductions: dict[str, float] = field(default_factory=dict)

    def as_dict(self) -> dict:
        s = self.spec
        return {
            "arch": s.arch.value, "style": s.style.value, "width": s.width,
            "approx_bits": s.approx_bits, "legend": self.legend,
            "area_um2": self.area, "delay_structural": self.delay_structural,
            "delay_calibrated_ns": self.delay_calibrated,
            "delay_reference_ns": self.delay_reference,
            "power_uW": self.power, "pdp_uW_ns": self.pdp,
            **{f"{k}_reduction_pct": v for k, v in self.reductions.items()},
        }


REDUCTION_KEYS = ("area", "delay", "power", "pdp")


def pdp_report(spec: AdderSpec, table2: Table2Reference, lib: CellLibrary,
               params, netlist: Netlist | None = None,
               baseline: "CostReport | None | bool" = None) -> CostReport:
    """Assemble a CostReport, with reductions against the accurate adder of the same arch.

    Power comes from the reference table only; for a published design the
    PDP uses the published delay, as the published PDP figures do.
    """
    netlist = netlist or build_adder(spec)
    row = table2.lookup(spec)
    rep = CostReport(
        spec=spec,
        legend=legend_for(spec),
        area=area_of(spec, lib),
        delay_structural=structural_delay(netlist, lib),
        delay_calibrated=calibrated_delay(spec, params),
    )
    if row is not None:
        rep.delay_reference = row.delay
        rep.power = row.power
        rep.pdp = row.power * row.delay
    if baseline is False:
        return rep
    if baseline is None:
        base_spec = AdderSpec(spec.width, spec.arch)
        baseline = pdp_report(base_spec, table2, lib, params, baseline=False)
    rep.reductions["area"] = reduction(baseline.area, rep.area)
    rep.reductions["delay"] = reduction(baseline.delay_calibrated, rep.delay_calibrated)
    if rep.power is not None and baseline.power is not None:
        rep.reductions["power"] = reduction(baseline.power, rep.power)
        rep.reductions["pdp"] = reduction(baseline.pdp, rep.pdp)
    return rep


def reference_specs() -> list[AdderSpec]:
    """The 12 published configurations, RCA rows first."""
    specs = []
    for arch in (Architecture.RCA, Architecture.CLA):
        specs.append(AdderSpec(REFERENCE_WIDTH, arch))
        specs += [AdderSpec(REFERENCE_WIDTH, arch, k, ApproxStyle.OR) for k in REFERENCE_K]
    return specs


# claims ------------------------------------------------------------------

# bracketed (power, delay, area) reductions as printed next to each row
PRINTED_REDUCTIONS = {
    "RCX1": (8.2, 12.2, 7.2),
    "RCX2": (20.5, 24.5, 14.5),
    "RCX3": (32.7, 36.7, 21.7),
    "RCX4": (45.0, 49.3, 28.9),
    "RCX5": (53.4, 61.5, 36.2),
    "CLX1": (9.5, 8.0, 11.2),
    "CLX2": (21.9, 15.9, 22.5),
    "CLX3": (34.6, 23.9, 33.7),
    "CLX4": (47.3, 31.9, 45.0),
    "CLX5": (57.1, 39.8, 56.2),
}


@dataclass(frozen=True)
class Claim:
    name: str
    computed: float
    expected: float
    tolerance: float
    unit: str = "%"

    @property
    def passed(self) -> bool:
        return abs(self.computed - self.expected) <= self.tolerance + 1e-9

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return (f"{status}  {self.name}: computed {self.computed:.3f}{self.unit}, "
                f"expected {self.expected:g}{self.unit} +/- {self.tolerance:g}")


@dataclass
class ClaimsReport:
    claims: list[Claim]
    pdp: dict[str, float]
    pdp_reduction: dict[str, float]
    monotone: dict[str, bool]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.claims) and all(self.monotone.values())

    def lines(self) -> list[str]:
        out = [c.line() for c in self.claims]
        for arch, ok in self.monotone.items():
            out.append(f"{'PASS' if ok else 'FAIL'}  {arch} PDP reduction increases with approximation size")
        return out


def reproduce_claims(table2: Table2Reference) -> ClaimsReport:
    rca, cla = table2["RCA"], table2["CLA"]
    rcx = [table2[f"RCX{i}"] for i in range(1, 6)]
    clx = [table2[f"CLX{i}"] for i in range(1, 6)]
    mean = statistics.fmean

    pdp = {r.legend: r.pdp for r in table2.rows}
    pdp_red = {}
    for r in rcx + clx:
        base = rca if r.arch is Architecture.RCA else cla
        pdp_red[r.legend] = reduction(base.pdp, r.pdp)

    claims = [
        Claim("RCX1 PDP reduction vs RCA", pdp_red["RCX1"], 19.5, 0.1),
        Claim("RCX5 PDP reduction vs RCA", pdp_red["RCX5"], 82.0, 0.1),
        Claim("CLX1 PDP reduction vs CLA", pdp_red["CLX1"], 16.7, 0.1),
        Claim("CLX5 PDP reduction vs CLA", pdp_red["CLX5"], 74.2, 0.1),
        Claim("mean approximate-RCA PDP reduction vs RCA",
              reduction(rca.pdp, mean(r.pdp for r in rcx)), 54.2, 0.15),
        Claim("mean approximate-CLA PDP reduction vs CLA",
              reduction(cla.pdp, mean(r.pdp for r in clx)), 47.9, 0.15),
        Claim("mean approximate-CLA PDP reduction vs mean approximate-RCA PDP",
              reduction(mean(r.pdp for r in rcx), mean(r.pdp for r in clx)), 46.5, 0.15),
        Claim("mean approximate-CLA power", mean(r.power for r in clx), 32.34, 0.005, " uW"),
        Claim("mean approximate-RCA power", mean(r.power for r in rcx), 23.94, 0.005, " uW"),
        Claim("mean power decrease, approximate RCA vs CLA",
              reduction(mean(r.power for r in clx), mean(r.power for r in rcx)), 26.0, 0.5),
        Claim("mean area decrease, approximate RCA vs CLA",
              reduction(mean(r.area for r in clx), mean(r.area for r in rcx)), 71.8, 0.1),
        Claim("mean approximate-RCA delay", mean(r.delay for r in rcx), 2.12, 0.005, " ns"),
        Claim("mean approximate-CLA delay", mean(r.delay for r in clx), 0.86, 0.005, " ns"),
        Claim("mean delay decrease, approximate CLA vs RCA",
              reduction(mean(r.delay for r in rcx), mean(r.delay for r in clx)), 59.4, 0.1),
    ]
    for r in rcx + clx:
        base = rca if r.arch is Architecture.RCA else cla
        printed = PRINTED_REDUCTIONS[r.legend]
        for metric, got, want in zip(
                ("power", "delay", "area"),
                (reduction(base.power, r.power), reduction(base.delay, r.delay),
                 reduction(base.area, r.area)),
                printed):
            claims.append(Claim(f"{r.legend} {metric} reduction", got, want, 0.1))

    monotone = {}
    for name, rows in (("RCA", rcx), ("CLA", clx)):
        vals = [pdp_red[r.legend] for r in rows]
        monotone[name] = all(x < y for x, y in zip(vals, vals[1:]))
    return ClaimsReport(claims, pdp, pdp_red, monotone)


@dataclass(frozen=True)
class Table2Repro:
    legend: str
    area_model: float
    area_published: float
    delay_model: float
    delay_published: float
    power: float
    pdp: float

    @property
    def area_rel_err(self) -> float:
        return abs(self.area_model - self.area_published) / self.area_published

    @property
    def delay_err(self) -> float:
        return abs(self.delay_model - self.delay_published)


def reproduce_table2(table2: Table2Reference, lib: CellLibrary,
                     params=None) -> list[Table2Repro]:
    """Model area and calibrated delay next to the published values, one row per design."""
    params = params or calibrate_delay(table2)
    out = []
    for spec in reference_specs():
        row = table2.lookup(spec)
        out.append(Table2Repro(row.legend, area_of(spec, lib), row.area,
                               calibrated_delay(spec, params), row.delay, row.power, row.pdp))
    return out
