"""Error metrics for approximate adders measured against exact addition."""
from __future__ import annotations

import csv
import itertools
import json
import math
from dataclasses import asdict, dataclass, fields
from typing import Iterable, Sequence

import numpy as np

from .netlist import AdderSpec, ApproxStyle, Architecture, build_adder
from .simulate import (DEFAULT_CHUNK, Batch, VectorStream, accurate_batch, approx_batch,
                       evaluate_batch, stream_batches)


def approx_sum_bit(a: int, b: int, style: ApproxStyle) -> int:
    if style is ApproxStyle.OR:
        return a | b
    if style is ApproxStyle.XOR:
        return a ^ b
    raise ValueError("approximate sum bit needs an OR or XOR style")


@dataclass(frozen=True)
class BitComparisonRow:
    a: int
    b: int
    c: int
    accurate: int
    approx_xor: int
    approx_or: int

    @property
    def xor_correct(self) -> bool:
        return self.approx_xor == self.accurate

    @property
    def or_correct(self) -> bool:
        return self.approx_or == self.accurate


def table1() -> list[BitComparisonRow]:
    """Per-bit comparison of the exact sum with the carry-free XOR and OR sums."""
    return [
        BitComparisonRow(a, b, c, a ^ b ^ c,
                         approx_sum_bit(a, b, ApproxStyle.XOR),
                         approx_sum_bit(a, b, ApproxStyle.OR))
        for a, b, c in itertools.product((0, 1), repeat=3)
    ]


def format_table1(rows: Sequence[BitComparisonRow] | None = None) -> str:
    rows = rows if rows is not None else table1()
    mark = {True: "correct", False: "incorrect"}
    out = ["A B C | exact | xor            | or"]
    for r in rows:
        out.append(f"{r.a} {r.b} {r.c} |   {r.accurate}   | "
                   f"{r.approx_xor} ({mark[r.xor_correct]:9s}) | "
                   f"{r.approx_or} ({mark[r.or_correct]})")
    return "\n".join(out)


@dataclass(frozen=True)
class ErrorReport:
    arch: str
    style: str
    width: int
    approx_bits: int
    vectors_evaluated: int
    error_count: int
    total_error_distance: int
    error_rate: float
    mean_error_distance: float
    max_error_distance: int
    normalized_med: float
    mean_relative_error: float

    def as_row(self) -> list:
        return [getattr(self, f) for f in ERROR_FIELDS]


ERROR_FIELDS = tuple(f.name for f in fields(ErrorReport))


class _Accumulator:
    """Integer counts, sums and maxima; ER, MED and max ED are chunking-independent."""

    def __init__(self):
        self.count = 0
        self.errors = 0
        self.total_ed = 0
        self.max_ed = 0
        self.rel_sum = 0.0

    def add(self, approx: np.ndarray, exact: np.ndarray):
        diff = approx - exact
        ed = np.abs(diff)
        self.count += len(ed)
        self.errors += int(np.count_nonzero(ed))
        self.total_ed += int(ed.sum(dtype=object) if ed.dtype == object else ed.sum())
        if len(ed):
            self.max_ed = max(self.max_ed, int(ed.max()))
        nz = np.nonzero(ed)[0]
        if len(nz):
            denom = np.maximum(exact[nz], 1)
            terms = (ed[nz] / denom).astype(float).tolist()
            self.rel_sum = math.fsum([self.rel_sum, *terms])

    def report(self, spec: AdderSpec) -> ErrorReport:
        n = self.count
        med = self.total_ed / n if n else 0.0
        return ErrorReport(
            arch=spec.arch.value,
            style=spec.style.value,
            width=spec.width,
            approx_bits=spec.approx_bits,
            vectors_evaluated=n,
            error_count=self.errors,
            total_error_distance=self.total_ed,
            error_rate=self.errors / n if n else 0.0,
            mean_error_distance=med,
            max_error_distance=self.max_ed,
            normalized_med=med / 2 ** spec.width,
            mean_relative_error=self.rel_sum / n if n else 0.0,
        )


class CrossCheckError(AssertionError):
    """Netlist simulation disagreed with the closed-form model."""


def measure(spec: AdderSpec, stream: VectorStream, via: str = "behavioral",
            cross_check: bool = True, chunk: int = DEFAULT_CHUNK) -> ErrorReport:
    """Measure ``spec`` against exact addition with carry-in 0.

    ``via`` picks the path that produces the approximate values: the
    closed-form model (``"behavioral"``) or gate-level simulation
    (``"netlist"``). With ``cross_check`` the other path is run too and any
    disagreement raises CrossCheckError.
    """
    if via not in ("behavioral", "netlist"):
        raise ValueError(f"unknown measurement path {via!r}")
    netlist = build_adder(spec) if (via == "netlist" or cross_check) else None
    acc = _Accumulator()
    for batch in stream_batches(stream, spec.width, chunk):
        batch = Batch(batch.a, batch.b, np.zeros(len(batch), np.uint64))
        exact = accurate_batch(batch, spec.width).values()
        model = approx_batch(batch, spec).values() if (via == "behavioral" or cross_check) else None
        sim = evaluate_batch(netlist, batch).values() if netlist is not None else None
        if cross_check and not np.array_equal(model, sim):
            bad = int(np.nonzero(model != sim)[0][0])
            raise CrossCheckError(
                f"{spec.label}: netlist and closed form disagree at a={int(batch.a[bad])}, "
                f"b={int(batch.b[bad])}: {sim[bad]} vs {model[bad]}")
        acc.add(model if via == "behavioral" else sim, exact)
    return acc.report(spec)


def sweep(width: int, arch: Architecture | str, styles: Iterable[ApproxStyle | str],
          k_list: Iterable[int], stream: VectorStream, **kw) -> list[ErrorReport]:
    """One ErrorReport per (style, k); k = 0 yields a single accurate row."""
    arch = Architecture(arch) if isinstance(arch, str) else arch
    styles = [ApproxStyle(s) if isinstance(s, str) else s for s in styles]
    reports = []
    seen_accurate = False
    for style in sorted(styles, key=lambda s: s.value):
        for k in sorted(k_list):
            if k == 0:
                if seen_accurate:
                    continue
                seen_accurate = True
                spec = AdderSpec(width, arch, 0, ApproxStyle.NONE)
            else:
                spec = AdderSpec(width, arch, k, style)
            reports.append(measure(spec, stream, **kw))
    reports.sort(key=lambda r: (r.approx_bits, r.style))
    return reports


def write_csv(path, reports: Sequence[ErrorReport]):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(ERROR_FIELDS)
        for r in reports:
            w.writerow([repr(v) if isinstance(v, float) else v for v in r.as_row()])


def write_json(path, reports: Sequence[ErrorReport]):
    with open(path, "w") as fh:
        json.dump([asdict(r) for r in reports], fh, indent=2, sort_keys=False)
        fh.write("\n")


# (a, b, c, exact, xor, xor correct, or, or correct) as published
PRINTED_TABLE1 = (
    (0, 0, 0, 0, 0, True, 0, True),
    (0, 0, 1, 1, 0, False, 0, False),
    (0, 1, 0, 1, 1, True, 1, True),
    (0, 1, 1, 0, 1, False, 1, False),
    (1, 0, 0, 1, 1, True, 1, True),
    (1, 0, 1, 0, 1, False, 1, False),
    (1, 1, 0, 0, 0, True, 1, False),
    (1, 1, 1, 1, 0, False, 1, True),
)


def table1_matches_printed(rows: Sequence[BitComparisonRow] | None = None) -> int:
    """Number of (exact, xor, or) cells that agree with the published table (24 max)."""
    rows = rows if rows is not None else table1()
    hits = 0
    for r, (a, b, c, acc, x, xok, o, ook) in zip(rows, PRINTED_TABLE1):
        if (r.a, r.b, r.c) != (a, b, c):
            continue
        hits += r.accurate == acc
        hits += r.approx_xor == x and r.xor_correct == xok
        hits += r.approx_or == o and r.or_correct == ook
    return hits
