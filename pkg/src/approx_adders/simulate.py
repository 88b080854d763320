"""Bit-exact netlist evaluation and behavioural reference adders.

Netlists are evaluated bit-parallel over numpy arrays: every net holds a
boolean vector with one lane per input vector, so a whole stream chunk
goes through the gate list in one topological pass.

Random vectors come from numpy's PCG64 generator (O'Neill's PCG-XSL-RR
128/64) seeded through ``SeedSequence(seed)``. Operands are taken from the
raw 64-bit outputs, alternating a, b, masked to the adder width, which keeps
the sequence independent of how the stream is chunked.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .netlist import AdderSpec, ApproxStyle, GateKind, Netlist, build_adder

EXHAUSTIVE_MAX_BITS = 32
DEFAULT_CHUNK = 1 << 18


class StreamGuardError(ValueError):
    """Requested vector stream is too large to enumerate."""


@dataclass(frozen=True)
class InputVector:
    a: int
    b: int
    c0: int = 0


@dataclass(frozen=True)
class OutputWord:
    sum: int
    cout: int
    width: int

    @property
    def value(self) -> int:
        return (self.cout << self.width) | self.sum


@dataclass(frozen=True)
class VectorStream:
    kind: str = "exhaustive"  # or "montecarlo"
    count: int = 1000
    seed: int = 0
    c0: int = 0

    def __post_init__(self):
        if self.kind not in ("exhaustive", "montecarlo"):
            raise ValueError(f"unknown stream kind {self.kind!r}")
        if self.c0 not in (0, 1):
            raise ValueError("c0 must be 0 or 1")
        if self.kind == "montecarlo" and self.count < 0:
            raise ValueError("count must be non-negative")

    @classmethod
    def exhaustive(cls, c0: int = 0) -> "VectorStream":
        return cls("exhaustive", c0=c0)

    @classmethod
    def montecarlo(cls, count: int, seed: int, c0: int = 0) -> "VectorStream":
        return cls("montecarlo", count=count, seed=seed, c0=c0)

    def size(self, width: int) -> int:
        return 1 << (2 * width) if self.kind == "exhaustive" else self.count


@dataclass
class Batch:
    a: np.ndarray  # uint64
    b: np.ndarray  # uint64
    c0: np.ndarray  # uint64, 0/1

    def __len__(self):
        return len(self.a)


@dataclass
class BatchOutput:
    sum: np.ndarray  # uint64
    cout: np.ndarray  # uint64, 0/1
    width: int

    def values(self) -> np.ndarray:
        """cout * 2**width + sum; int64 when it fits, Python ints otherwise."""
        if self.width <= 61:
            return (self.cout.astype(np.int64) << self.width) | self.sum.astype(np.int64)
        return np.array([(int(c) << self.width) | int(s) for s, c in zip(self.sum, self.cout)],
                        dtype=object)

    def word(self, i: int) -> OutputWord:
        return OutputWord(int(self.sum[i]), int(self.cout[i]), self.width)


def _mask(width: int) -> np.uint64:
    return np.uint64((1 << width) - 1)


def _check_width(width: int):
    if not 1 <= width <= 64:
        raise ValueError(f"width must be in 1..64, got {width}")


def check_stream(stream: VectorStream, width: int):
    _check_width(width)
    if stream.kind == "exhaustive" and 2 * width > EXHAUSTIVE_MAX_BITS:
        raise StreamGuardError(
            f"exhaustive enumeration of {2 * width} input bits exceeds the "
            f"{EXHAUSTIVE_MAX_BITS}-bit guard; use a Monte Carlo stream")


def stream_batches(stream: VectorStream, width: int,
                   chunk: int = DEFAULT_CHUNK) -> Iterator[Batch]:
    check_stream(stream, width)
    mask = _mask(width)
    total = stream.size(width)
    if stream.kind == "exhaustive":
        shift = np.uint64(width)
        for start in range(0, total, chunk):
            idx = np.arange(start, min(start + chunk, total), dtype=np.uint64)
            yield Batch(idx >> shift, idx & mask, np.full(len(idx), stream.c0, np.uint64))
    else:
        bitgen = np.random.PCG64(np.random.SeedSequence(stream.seed))
        for start in range(0, total, chunk):
            m = min(chunk, total - start)
            raw = bitgen.random_raw(2 * m)
            yield Batch(raw[0::2] & mask, raw[1::2] & mask, np.full(m, stream.c0, np.uint64))


def stream_vectors(stream: VectorStream, width: int) -> Iterator[InputVector]:
    """Lazily yield the stream's vectors one at a time, in canonical order."""
    for batch in stream_batches(stream, width):
        for a, b, c in zip(batch.a.tolist(), batch.b.tolist(), batch.c0.tolist()):
            yield InputVector(a, b, c)


def _as_batch(a, b, c0) -> Batch:
    a = np.atleast_1d(np.asarray(a, dtype=np.uint64))
    b = np.atleast_1d(np.asarray(b, dtype=np.uint64))
    c0 = np.broadcast_to(np.asarray(c0, dtype=np.uint64), a.shape)
    return Batch(a, b, c0)


def evaluate_batch(netlist: Netlist, batch: Batch) -> BatchOutput:
    n = netlist.width
    if np.any(batch.a > _mask(n)) or np.any(batch.b > _mask(n)):
        raise ValueError(f"operand does not fit the {n}-bit netlist")
    lanes = len(batch)
    values: list[np.ndarray | None] = [None] * netlist.num_nets
    pis = dict(netlist.primary_inputs)
    one = np.uint64(1)
    for name, net in pis.items():
        if name == "C0":
            values[net] = (batch.c0 & one).astype(bool)
        else:
            word = batch.a if name[0] == "A" else batch.b
            values[net] = ((word >> np.uint64(int(name[1:]))) & one).astype(bool)
    for g in netlist.gates:
        k = g.kind
        if k is GateKind.INPUT:
            continue
        ins = [values[i] for i in g.inputs]
        if k is GateKind.CONST0:
            out = np.zeros(lanes, dtype=bool)
        elif k is GateKind.NOT:
            out = ~ins[0]
        elif k is GateKind.AND2:
            out = ins[0] & ins[1]
        elif k is GateKind.OR2:
            out = ins[0] | ins[1]
        elif k is GateKind.XOR2:
            out = ins[0] ^ ins[1]
        elif k is GateKind.AO21:
            out = (ins[0] & ins[1]) | ins[2]
        else:
            raise ValueError(f"cannot evaluate gate kind {k}")
        values[g.output] = out

    total = np.zeros(lanes, dtype=np.uint64)
    cout = np.zeros(lanes, dtype=np.uint64)
    for name, net in netlist.primary_outputs:
        bits = values[net].astype(np.uint64)
        if name == "COUT":
            cout = bits
        else:
            total |= bits << np.uint64(int(name[3:]))
    return BatchOutput(total, cout, n)


def evaluate(netlist: Netlist, v: InputVector) -> OutputWord:
    n = netlist.width
    if not (0 <= v.a < (1 << n) and 0 <= v.b < (1 << n)):
        raise ValueError(f"operands {v.a}, {v.b} do not fit the {n}-bit netlist")
    # approximate netlists have no C0 pin; their carry-in is tied low
    return evaluate_batch(netlist, _as_batch(v.a, v.b, v.c0)).word(0)


def accurate_batch(batch: Batch, width: int) -> BatchOutput:
    _check_width(width)
    mask = _mask(width)
    a, b, c0 = batch.a & mask, batch.b & mask, batch.c0
    with np.errstate(over="ignore"):
        s1 = a + b
        s2 = s1 + c0
    if width == 64:
        cout = ((s1 < a) | (s2 < s1)).astype(np.uint64)
        return BatchOutput(s2, cout, width)
    return BatchOutput(s2 & mask, s2 >> np.uint64(width), width)


def approx_batch(batch: Batch, spec: AdderSpec) -> BatchOutput:
    n, k = spec.width, spec.approx_bits
    zero = np.zeros(len(batch), dtype=np.uint64)
    if k == 0:
        return accurate_batch(Batch(batch.a, batch.b, zero), n)
    low_mask = _mask(k)
    if spec.style is ApproxStyle.OR:
        low = (batch.a | batch.b) & low_mask
    else:
        low = (batch.a ^ batch.b) & low_mask
    sh = np.uint64(k)
    high = accurate_batch(Batch(batch.a >> sh, batch.b >> sh, zero), n - k)
    return BatchOutput((high.sum << sh) | low, high.cout, n)


def behavioral_accurate(v: InputVector, width: int) -> OutputWord:
    _check_width(width)
    total = v.a + v.b + v.c0
    return OutputWord(total & ((1 << width) - 1), total >> width, width)


def behavioral_approx(v: InputVector, spec: AdderSpec) -> OutputWord:
    """Closed-form model: low bits from OR/XOR, high bits added exactly with carry-in 0."""
    n, k = spec.width, spec.approx_bits
    if k == 0:
        return behavioral_accurate(InputVector(v.a, v.b, 0), n)
    low_mask = (1 << k) - 1
    low = (v.a | v.b) if spec.style is ApproxStyle.OR else (v.a ^ v.b)
    high = (v.a >> k) + (v.b >> k)
    total = (high << k) | (low & low_mask)
    return OutputWord(total & ((1 << n) - 1), total >> n, n)


def write_trace(path, spec: AdderSpec, stream: VectorStream, netlist: Netlist | None = None):
    """Dump one CSV row per vector: inputs, netlist outputs and the exact sum."""
    netlist = netlist or build_adder(spec)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["a", "b", "c0", "sum", "cout", "value", "exact_value"])
        for batch in stream_batches(stream, spec.width):
            if not netlist.has_carry_in:
                batch = Batch(batch.a, batch.b, np.zeros(len(batch), np.uint64))
            got = evaluate_batch(netlist, batch)
            exact = accurate_batch(batch, spec.width)
            for i in range(len(batch)):
                word = got.word(i)
                w.writerow([int(batch.a[i]), int(batch.b[i]), int(batch.c0[i]),
                            word.sum, word.cout, word.value, exact.word(i).value])
