"""Command-line front end: build, simulate, errors, costs, reproduce, table1.

Exit codes: 0 success, 2 configuration error, 3 stream guard violation,
4 claim failure, 5 missing cell-library entry.
"""
from __future__ import annotations

import argparse
import csv
import datetime
import hashlib
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path

from . import __version__
from .cost_model import (CellLibrary, MissingCellError, Table2Reference, calibrate_delay,
                         default_library, reference_specs, pdp_report, reproduce_claims,
                         reproduce_table2)
from .error_metrics import (format_table1, measure, sweep, table1,
                            table1_matches_printed, write_csv, write_json)
from .netlist import AdderSpec, ApproxStyle, Architecture, GateKind, SpecError, build_adder
from .simulate import StreamGuardError, VectorStream, write_trace

EXIT_OK, EXIT_CONFIG, EXIT_GUARD, EXIT_CLAIM, EXIT_CELL = 0, 2, 3, 4, 5

COST_FIELDS = ("arch", "style", "width", "approx_bits", "legend", "area_um2",
               "delay_structural", "delay_calibrated_ns", "delay_reference_ns",
               "power_uW", "pdp_uW_ns", "area_reduction_pct", "delay_reduction_pct",
               "power_reduction_pct", "pdp_reduction_pct")


@dataclass
class ExperimentConfig:
    width: int = 32
    archs: list[str] = field(default_factory=lambda: ["rca", "cla"])
    k_list: list[int] = field(default_factory=lambda: [0, 4, 8, 12, 16, 20])
    styles: list[str] = field(default_factory=lambda: ["or"])
    stream: str = "mc"
    count: int = 1000
    seed: int = 0
    cells: str | None = None
    out: str = "."
    formats: list[str] = field(default_factory=lambda: ["csv", "json"])

    def specs(self) -> list[AdderSpec]:
        """Every (arch, style, k) spec in canonical order; validates before any run."""
        specs = []
        for arch in sorted(set(self.archs)):
            if any(k == 0 for k in self.k_list):
                specs.append(AdderSpec(self.width, arch))
            for style in sorted(set(self.styles)):
                for k in sorted(set(self.k_list)):
                    if k:
                        specs.append(AdderSpec(self.width, arch, k, style))
        return specs

    def vector_stream(self) -> VectorStream:
        if self.stream == "exhaustive":
            return VectorStream.exhaustive()
        return VectorStream.montecarlo(self.count, self.seed)

    def library(self) -> CellLibrary:
        return CellLibrary.load(self.cells) if self.cells else default_library()


def _sha256(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def write_manifest(out: Path, command: str, config: dict, seeds: list[int],
                   artifacts: list[Path]) -> Path:
    manifest = {
        "tool": "approx_adders",
        "version": __version__,
        "command": command,
        "config": config,
        "seeds": seeds,
        "timestamp": datetime.datetime.now(datetime.timezone.utc).isoformat(),
        "artifacts": {p.name: _sha256(p) for p in artifacts},
    }
    path = out / f"{command}_manifest.json"
    path.write_text(json.dumps(manifest, indent=2) + "\n")
    return path


def _fmt(v):
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(v)
    return v


# commands ----------------------------------------------------------------

def _spec_from_args(args) -> AdderSpec:
    style = args.style if args.approx else "none"
    return AdderSpec(args.width, args.arch, args.approx, style)


def cmd_build(args) -> int:
    spec = _spec_from_args(args)
    netlist = build_adder(spec)
    out = Path(args.out)
    if out.is_dir():
        out = out / f"{spec.label}.net"
    out.write_text(netlist.to_text())
    counts = {k.value: netlist.count(k) for k in GateKind if not k.is_source and netlist.count(k)}
    detail = ", ".join(f"{k} {v}" for k, v in counts.items())
    print(f"{spec.label}: {len(netlist.logic_gates)} gates ({detail}) -> {out}")
    return EXIT_OK


def cmd_simulate(args) -> int:
    spec = _spec_from_args(args)
    stream = (VectorStream.exhaustive(args.c0) if args.stream == "exhaustive"
              else VectorStream.montecarlo(args.count, args.seed, args.c0))
    out = Path(args.out)
    if out.is_dir():
        out = out / f"trace_{spec.label}.csv"
    write_trace(out, spec, stream)
    print(f"trace written to {out}")
    return EXIT_OK


def cmd_errors(cfg: ExperimentConfig) -> int:
    cfg.specs()
    stream = cfg.vector_stream()
    reports = []
    for arch in sorted(set(cfg.archs)):
        reports += sweep(cfg.width, arch, cfg.styles, cfg.k_list, stream)
    reports.sort(key=lambda r: (r.arch, r.style, r.approx_bits))
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    artifacts = []
    if "csv" in cfg.formats:
        write_csv(out / "errors.csv", reports)
        artifacts.append(out / "errors.csv")
    if "json" in cfg.formats:
        write_json(out / "errors.json", reports)
        artifacts.append(out / "errors.json")
    seeds = [cfg.seed] if cfg.stream != "exhaustive" else []
    write_manifest(out, "errors", vars(cfg), seeds, artifacts)
    for r in reports:
        print(f"{r.arch} {r.style:4s} k={r.approx_bits:2d}  ER={r.error_rate:.6f}  "
              f"MED={r.mean_error_distance:.4f}  max={r.max_error_distance}")
    return EXIT_OK


def cmd_costs(cfg: ExperimentConfig, table2_path=None) -> int:
    specs = cfg.specs()
    lib = cfg.library()
    table2 = Table2Reference.load(table2_path)
    params = calibrate_delay(table2)
    reports = [pdp_report(s, table2, lib, params) for s in specs]

    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    artifacts = []
    rows = [r.as_dict() for r in reports]
    if "csv" in cfg.formats:
        with open(out / "costs.csv", "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(COST_FIELDS)
            for row in rows:
                w.writerow([_fmt(row.get(f)) for f in COST_FIELDS])
        artifacts.append(out / "costs.csv")
    if "json" in cfg.formats:
        (out / "costs.json").write_text(
            json.dumps([{f: row.get(f) for f in COST_FIELDS} for row in rows], indent=2) + "\n")
        artifacts.append(out / "costs.json")

    if set(reference_specs()) <= set(specs):
        repro = reproduce_table2(table2, lib, params)
        with open(out / "table2_repro.csv", "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["legend", "area_model_um2", "area_published_um2", "area_rel_err_pct",
                        "delay_model_ns", "delay_published_ns", "delay_err_ns",
                        "power_uW", "pdp_uW_ns"])
            for r in repro:
                w.writerow([r.legend, f"{r.area_model:.4f}", f"{r.area_published:.2f}",
                            f"{100 * r.area_rel_err:.4f}", f"{r.delay_model:.4f}",
                            f"{r.delay_published:.2f}", f"{r.delay_err:.4f}",
                            f"{r.power:.2f}", f"{r.pdp:.4f}"])
        with open(out / "fig3_pdp.txt", "w") as fh:
            fh.write("# legend pdp_uW_ns\n")
            for r in repro:
                fh.write(f"{r.legend} {r.pdp:.4f}\n")
        artifacts += [out / "table2_repro.csv", out / "fig3_pdp.txt"]

    write_manifest(out, "costs", vars(cfg), [], artifacts)
    for r in reports:
        pdp = f"{r.pdp:.2f}" if r.pdp is not None else "-"
        print(f"{r.spec.label:16s} area={r.area:8.2f}  delay={r.delay_calibrated:.3f} ns  PDP={pdp}")
    return EXIT_OK


def cmd_reproduce(table2_path=None, cells=None) -> int:
    table2 = Table2Reference.load(table2_path)
    lib = CellLibrary.load(cells) if cells else default_library()
    lines = []
    ok = True

    def check(passed: bool, text: str):
        nonlocal ok
        ok &= passed
        lines.append(f"{'PASS' if passed else 'FAIL'}  {text}")

    hits = table1_matches_printed(table1())
    check(hits == 24, f"per-bit sum comparison table: {hits}/24 cells match")

    for r in reproduce_table2(table2, lib):
        check(r.area_rel_err <= 1e-3,
              f"{r.legend} area {r.area_model:.2f} vs {r.area_published:.2f} "
              f"({100 * r.area_rel_err:.3f}% <= 0.1%)")
        check(r.delay_err <= 0.02 + 1e-9,
              f"{r.legend} delay {r.delay_model:.3f} vs {r.delay_published:.2f} ns "
              f"(|err| {r.delay_err:.3f} <= 0.02)")

    claims = reproduce_claims(table2)
    ok &= claims.passed
    lines += claims.lines()

    exhaustive = VectorStream.exhaustive()
    for arch in Architecture:
        for k in (0, 2, 4, 6) if arch is Architecture.RCA else (0, 4):
            for style in ((ApproxStyle.NONE,) if k == 0 else (ApproxStyle.OR, ApproxStyle.XOR)):
                spec = AdderSpec(8, arch, k, style)
                try:
                    same = measure(spec, exhaustive, via="netlist") == measure(
                        spec, exhaustive, via="behavioral", cross_check=False)
                except AssertionError:
                    same = False
                check(same, f"{spec.label}: netlist simulation equals closed form "
                            f"over all 65536 operand pairs")

    print("\n".join(lines))
    print("ALL CLAIMS PASS" if ok else "SOME CLAIMS FAILED")
    return EXIT_OK if ok else EXIT_CLAIM


def cmd_table1() -> int:
    print(format_table1())
    return EXIT_OK


# argument parsing --------------------------------------------------------

def _single_spec_args(p):
    p.add_argument("--arch", choices=["rca", "cla"], default="rca")
    p.add_argument("--width", type=int, default=32)
    p.add_argument("--approx", type=int, default=0, metavar="K")
    p.add_argument("--style", choices=["or", "xor"], default="or")


def _sweep_args(p, with_stream: bool):
    p.add_argument("--config", help="JSON file with ExperimentConfig fields; flags override it")
    p.add_argument("--arch", nargs="+", choices=["rca", "cla"], dest="archs")
    p.add_argument("--width", type=int)
    p.add_argument("--approx", nargs="+", type=int, metavar="K", dest="k_list")
    p.add_argument("--style", nargs="+", choices=["or", "xor"], dest="styles")
    if with_stream:
        p.add_argument("--stream", choices=["exhaustive", "mc"])
        p.add_argument("--count", type=int)
        p.add_argument("--seed", type=int)
    p.add_argument("--cells", help="cell library file")
    p.add_argument("--out", help="output directory")
    p.add_argument("--format", nargs="+", choices=["csv", "json"], dest="formats")


def _config_from(args, **defaults) -> ExperimentConfig:
    cfg = ExperimentConfig(**defaults)
    if args.config:
        for key, value in json.loads(Path(args.config).read_text()).items():
            if not hasattr(cfg, key):
                raise SpecError(f"unknown config key {key!r}")
            setattr(cfg, key, value)
    for key in ("archs", "width", "k_list", "styles", "stream", "count", "seed",
                "cells", "out", "formats"):
        value = getattr(args, key, None)
        if value is not None:
            setattr(cfg, key, value)
    return cfg


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="approx-adders", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", help="write a structural netlist")
    _single_spec_args(p)
    p.add_argument("--out", default=".", help="output file or directory")

    p = sub.add_parser("simulate", help="dump a per-vector simulation trace as CSV")
    _single_spec_args(p)
    p.add_argument("--stream", choices=["exhaustive", "mc"], default="mc")
    p.add_argument("--count", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--c0", type=int, choices=[0, 1], default=0)
    p.add_argument("--out", default=".", help="output file or directory")

    p = sub.add_parser("errors", help="error metrics sweep")
    _sweep_args(p, with_stream=True)

    p = sub.add_parser("costs", help="area/delay/power/PDP reports")
    _sweep_args(p, with_stream=False)
    p.add_argument("--table2", help="alternative reference table CSV")

    p = sub.add_parser("reproduce", help="check every published figure")
    p.add_argument("--table2", help="alternative reference table CSV")
    p.add_argument("--cells", help="cell library file")

    sub.add_parser("table1", help="print the per-bit sum comparison table")
    return parser


def main(argv=None) -> int:
    args = make_parser().parse_args(argv)
    try:
        if args.command == "build":
            return cmd_build(args)
        if args.command == "simulate":
            return cmd_simulate(args)
        if args.command == "errors":
            return cmd_errors(_config_from(args, width=8, k_list=[0, 2, 4, 6],
                                           stream="exhaustive"))
        if args.command == "costs":
            return cmd_costs(_config_from(args), args.table2)
        if args.command == "reproduce":
            return cmd_reproduce(args.table2, args.cells)
        return cmd_table1()
    except StreamGuardError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_GUARD
    except MissingCellError as exc:
        print(f"error: {exc.args[0]}", file=sys.stderr)
        return EXIT_CELL
    except (SpecError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
