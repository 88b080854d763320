"""Gate-level netlists for accurate and approximate RCA/CLA adders.

Nets are dense integers handed out in construction order, so a netlist
built by the helpers here is topologically ordered by construction and
can be evaluated in a single linear pass.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence


class GateKind(enum.Enum):
    INPUT = "INPUT"
    CONST0 = "CONST0"
    NOT = "NOT"
    AND2 = "AND2"
    OR2 = "OR2"
    XOR2 = "XOR2"
    AO21 = "AO21"  # (x & y) | z

    @property
    def arity(self) -> int:
        return _ARITY[self]

    @property
    def is_source(self) -> bool:
        return self in (GateKind.INPUT, GateKind.CONST0)


_ARITY = {
    GateKind.INPUT: 0,
    GateKind.CONST0: 0,
    GateKind.NOT: 1,
    GateKind.AND2: 2,
    GateKind.OR2: 2,
    GateKind.XOR2: 2,
    GateKind.AO21: 3,
}


class Architecture(enum.Enum):
    RCA = "rca"
    CLA = "cla"


class ApproxStyle(enum.Enum):
    NONE = "none"
    OR = "or"
    XOR = "xor"


class Gate(NamedTuple):
    kind: GateKind
    inputs: tuple[int, ...]
    output: int


class SpecError(ValueError):
    """An AdderSpec violates one of its invariants."""


@dataclass(frozen=True)
class AdderSpec:
    width: int
    arch: Architecture = Architecture.RCA
    approx_bits: int = 0
    style: ApproxStyle = ApproxStyle.NONE

    def __post_init__(self):
        # accept plain strings for convenience
        if isinstance(self.arch, str):
            object.__setattr__(self, "arch", Architecture(self.arch.lower()))
        if isinstance(self.style, str):
            object.__setattr__(self, "style", ApproxStyle(self.style.lower()))
        if self.approx_bits > 0 and self.style is ApproxStyle.NONE:
            # an approximate spec with no explicit style defaults to OR
            object.__setattr__(self, "style", ApproxStyle.OR)
        self.validate()

    @property
    def accurate_bits(self) -> int:
        return self.width - self.approx_bits

    @property
    def is_approximate(self) -> bool:
        return self.approx_bits > 0

    def validate(self):
        n, k = self.width, self.approx_bits
        if not 1 <= n <= 64:
            raise SpecError(f"width must be in 1..64, got {n}")
        if not 0 <= k < n:
            raise SpecError(f"approximation size must satisfy 0 <= k < width, got k={k}, width={n}")
        if (k == 0) != (self.style is ApproxStyle.NONE):
            raise SpecError("style must be NONE exactly when the approximation size is 0")
        if self.arch is Architecture.CLA:
            if n % 4:
                raise SpecError(f"CLA width must be a multiple of 4, got {n}")
            if (n - k) % 4:
                raise SpecError(
                    f"CLA accurate part must be nibble-aligned, got {n - k} accurate bits")

    @property
    def label(self) -> str:
        if not self.is_approximate:
            return f"{self.arch.value}{self.width}"
        return f"{self.arch.value}{self.width}_k{self.approx_bits}_{self.style.value}"


@dataclass(frozen=True)
class Block:
    """A named contiguous run of gates, e.g. one full adder or sub-CLA."""
    name: str
    start: int
    stop: int


@dataclass(frozen=True)
class Netlist:
    width: int
    gates: tuple[Gate, ...]
    primary_inputs: tuple[tuple[str, int], ...]
    primary_outputs: tuple[tuple[str, int], ...]
    blocks: tuple[Block, ...] = ()
    spec: AdderSpec | None = None

    @property
    def num_nets(self) -> int:
        return len(self.gates)

    @property
    def logic_gates(self) -> list[Gate]:
        return [g for g in self.gates if not g.kind.is_source]

    def count(self, kind: GateKind, block_prefix: str | None = None) -> int:
        if block_prefix is None:
            return sum(1 for g in self.gates if g.kind is kind)
        return sum(
            1 for b in self.blocks if b.name.startswith(block_prefix)
            for g in self.gates[b.start:b.stop] if g.kind is kind)

    def blocks_named(self, prefix: str) -> list[Block]:
        return [b for b in self.blocks if b.name.startswith(prefix)]

    def input_net(self, name: str) -> int:
        return dict(self.primary_inputs)[name]

    def output_net(self, name: str) -> int:
        return dict(self.primary_outputs)[name]

    @property
    def has_carry_in(self) -> bool:
        return any(name == "C0" for name, _ in self.primary_inputs)

    def to_text(self) -> str:
        """Plain structural dump: header lines for PIs/POs, then one gate per line."""
        lines = [f"# width {self.width}"]
        if self.spec is not None:
            s = self.spec
            lines.append(f"# spec arch={s.arch.value} approx={s.approx_bits} style={s.style.value}")
        lines.append("inputs " + " ".join(f"{name}={net}" for name, net in self.primary_inputs))
        lines.append("outputs " + " ".join(f"{name}={net}" for name, net in self.primary_outputs))
        for b in self.blocks:
            lines.append(f"block {b.name} {b.start} {b.stop}")
        for g in self.gates:
            lines.append(" ".join([str(g.output), g.kind.value, *map(str, g.inputs)]))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "Netlist":
        width = 0
        pis, pos, blocks, gates = [], [], [], []
        for raw in text.splitlines():
            line = raw.strip()
            if not line:
                continue
            if line.startswith("# width"):
                width = int(line.split()[2])
                continue
            if line.startswith("#"):
                continue
            head, *rest = line.split()
            if head in ("inputs", "outputs"):
                pairs = [(name, int(net)) for name, net in (tok.split("=") for tok in rest)]
                (pis if head == "inputs" else pos).extend(pairs)
            elif head == "block":
                blocks.append(Block(rest[0], int(rest[1]), int(rest[2])))
            else:
                gates.append(Gate(GateKind(rest[0]), tuple(int(x) for x in rest[1:]), int(head)))
        return cls(width, tuple(gates), tuple(pis), tuple(pos), tuple(blocks))


class NetlistBuilder:
    """Mutable sink that the block builders append gates to."""

    def __init__(self, width: int):
        self.width = width
        self.gates: list[Gate] = []
        self.inputs: list[tuple[str, int]] = []
        self.outputs: list[tuple[str, int]] = []
        self.blocks: list[Block] = []
        self._const0: int | None = None
        self._open: tuple[str, int] | None = None

    def add(self, kind: GateKind, *inputs: int) -> int:
        if len(inputs) != kind.arity:
            raise ValueError(f"{kind.value} takes {kind.arity} inputs, got {len(inputs)}")
        for net in inputs:
            if not 0 <= net < len(self.gates):
                raise ValueError(f"net {net} used before it is defined")
        out = len(self.gates)
        self.gates.append(Gate(kind, tuple(inputs), out))
        return out

    def input(self, name: str) -> int:
        net = self.add(GateKind.INPUT)
        self.inputs.append((name, net))
        return net

    def const0(self) -> int:
        if self._const0 is None:
            self._const0 = self.add(GateKind.CONST0)
        return self._const0

    def output(self, name: str, net: int):
        self.outputs.append((name, net))

    def begin(self, name: str):
        self._open = (name, len(self.gates))

    def end(self):
        name, start = self._open
        self.blocks.append(Block(name, start, len(self.gates)))
        self._open = None

    def finish(self, spec: AdderSpec | None = None) -> Netlist:
        return Netlist(self.width, tuple(self.gates), tuple(self.inputs),
                       tuple(self.outputs), tuple(self.blocks), spec)


def build_full_adder(a: int, b: int, cin: int, sink: NetlistBuilder) -> tuple[int, int]:
    """Five-gate full adder with disjoint sum and carry cones.

    The carry cone has its own propagate XOR so the sum logic can be
    sized independently, as in a standard-cell FA; cin reaches cout
    through the single AO21.
    """
    s = sink.add(GateKind.XOR2, sink.add(GateKind.XOR2, a, b), cin)
    p = sink.add(GateKind.XOR2, a, b)
    g = sink.add(GateKind.AND2, a, b)
    cout = sink.add(GateKind.AO21, p, cin, g)
    return s, cout


def _and_tree(nets: Sequence[int], sink: NetlistBuilder) -> int:
    return _tree(GateKind.AND2, list(nets), sink)


def _or_tree(nets: Sequence[int], sink: NetlistBuilder) -> int:
    return _tree(GateKind.OR2, list(nets), sink)


def _tree(kind: GateKind, nets: list[int], sink: NetlistBuilder) -> int:
    while len(nets) > 1:
        paired = [sink.add(kind, nets[i], nets[i + 1]) for i in range(0, len(nets) - 1, 2)]
        if len(nets) % 2:
            paired.append(nets[-1])
        nets = paired
    return nets[0]


def build_clg4(P: Sequence[int], G: Sequence[int], c0: int,
               sink: NetlistBuilder) -> tuple[int, int, int, int]:
    """Delay-optimised 4-bit carry lookahead generator.

    Each carry is C[i+1] = AO21(P[0]..P[i], c0, Ghat[i]) where the group
    propagate product and the carry-in-free group generate Ghat[i] are
    balanced AND/OR trees over P and G alone. The carry-in therefore
    reaches every lookahead carry through exactly one gate.
    """
    if len(P) != 4 or len(G) != 4:
        raise ValueError("CLG needs exactly 4 propagate and 4 generate nets")
    carries = []
    for i in range(4):
        # Ghat[i] = G[i] + P[i]G[i-1] + ... + P[i]..P[1]G[0]
        terms = [G[i]]
        for j in range(i - 1, -1, -1):
            terms.append(_and_tree([*P[j + 1:i + 1], G[j]], sink))
        ghat = _or_tree(terms, sink)
        pgroup = _and_tree(P[:i + 1], sink)
        carries.append(sink.add(GateKind.AO21, pgroup, c0, ghat))
    return tuple(carries)


def build_cla4(A: Sequence[int], B: Sequence[int], c0: int,
               sink: NetlistBuilder) -> tuple[tuple[int, int, int, int], int]:
    P = [sink.add(GateKind.XOR2, a, b) for a, b in zip(A, B)]
    G = [sink.add(GateKind.AND2, a, b) for a, b in zip(A, B)]
    c1, c2, c3, c4 = build_clg4(P, G, c0, sink)
    carry_in = (c0, c1, c2, c3)
    sums = tuple(sink.add(GateKind.XOR2, P[i], carry_in[i]) for i in range(4))
    return sums, c4


def build_adder(spec: AdderSpec) -> Netlist:
    """Build the netlist for an accurate (k = 0) or approximate adder."""
    spec.validate()
    n, k = spec.width, spec.approx_bits
    sink = NetlistBuilder(n)
    A = [sink.input(f"A{i}") for i in range(n)]
    B = [sink.input(f"B{i}") for i in range(n)]
    carry = sink.input("C0") if k == 0 else sink.const0()

    sums: list[int] = [0] * n
    if k:
        kind = GateKind.OR2 if spec.style is ApproxStyle.OR else GateKind.XOR2
        sink.begin("APX")
        for i in range(k):
            sums[i] = sink.add(kind, A[i], B[i])
        sink.end()

    if spec.arch is Architecture.RCA:
        for i in range(k, n):
            sink.begin(f"FA{i}")
            sums[i], carry = build_full_adder(A[i], B[i], carry, sink)
            sink.end()
    else:
        for lo in range(k, n, 4):
            sink.begin(f"CLA{lo // 4}")
            nibble, carry = build_cla4(A[lo:lo + 4], B[lo:lo + 4], carry, sink)
            sums[lo:lo + 4] = nibble
            sink.end()

    for i in range(n):
        sink.output(f"SUM{i}", sums[i])
    sink.output("COUT", carry)
    return sink.finish(spec)


def topo_validate(netlist: Netlist) -> list[str]:
    """Return a list of structural violations; empty means the netlist is sound."""
    problems = []
    defined: set[int] = set()
    producers: dict[int, int] = {}
    for idx, g in enumerate(netlist.gates):
        if len(g.inputs) != g.kind.arity:
            problems.append(f"arity: gate {idx} ({g.kind.value}) has {len(g.inputs)} inputs, "
                            f"expected {g.kind.arity}")
        if g.output in producers:
            problems.append(f"multiple drivers: net {g.output} driven by gates "
                            f"{producers[g.output]} and {idx}")
        producers[g.output] = idx
    for idx, g in enumerate(netlist.gates):
        for net in g.inputs:
            if net not in defined:
                problems.append(f"def-before-use: gate {idx} reads net {net} before it is defined")
        defined.add(g.output)

    if _has_cycle(netlist.gates, producers):
        problems.append("acyclicity: netlist contains a combinational cycle")

    for name, net in netlist.primary_inputs:
        idx = producers.get(net)
        if idx is None or netlist.gates[idx].kind is not GateKind.INPUT:
            problems.append(f"primary input {name} is not driven by an INPUT gate")
    names = [name for name, _ in netlist.primary_outputs]
    expected = [f"SUM{i}" for i in range(netlist.width)] + ["COUT"]
    if sorted(names) != sorted(expected):
        problems.append(f"output completeness: expected {netlist.width + 1} outputs "
                        f"SUM0..SUM{netlist.width - 1}, COUT; got {len(names)}")
    for name, net in netlist.primary_outputs:
        if net not in producers:
            problems.append(f"primary output {name} reads undriven net {net}")
    return problems


def _has_cycle(gates: Sequence[Gate], producers: dict[int, int]) -> bool:
    # iterative DFS over gate indices; 0 = unseen, 1 = on stack, 2 = done
    state = [0] * len(gates)
    for root in range(len(gates)):
        if state[root]:
            continue
        stack = [(root, iter(gates[root].inputs))]
        state[root] = 1
        while stack:
            node, it = stack[-1]
            for net in it:
                pred = producers.get(net)
                if pred is None:
                    continue
                if state[pred] == 1:
                    return True
                if state[pred] == 0:
                    state[pred] = 1
                    stack.append((pred, iter(gates[pred].inputs)))
                    break
            else:
                state[node] = 2
                stack.pop()
    return False


def bit_position_reaches(netlist: Netlist) -> dict[int, set[int]]:
    """Map each net to the set of input bit positions that can reach it."""
    reach: list[set[int]] = [set() for _ in netlist.gates]
    for name, net in netlist.primary_inputs:
        if name != "C0":
            reach[net].add(int(name[1:]))
    for g in netlist.gates:
        for net in g.inputs:
            reach[g.output] |= reach[net]
    return dict(enumerate(reach))
