# Building accurate and approximate adders and simulating them
# ============================================================
#
# A 32-bit adder is split into an accurate upper part of m bits and an
# approximate lower part of k = 32 - m bits. The lower part has no carry
# chain at all: each sum bit is a single OR (or XOR) of the operand bits.

from approx_adders import AdderSpec, InputVector, build_adder, evaluate, topo_validate
from approx_adders.netlist import GateKind

# %% The accurate ripple-carry adder is 32 five-gate full adders.
rca = build_adder(AdderSpec(32, "rca"))
print("accurate RCA:", len(rca.logic_gates), "gates,", len(rca.blocks_named("FA")), "full adders")

# %% The carry lookahead version chains eight 4-bit sub-CLAs.
cla = build_adder(AdderSpec(32, "cla"))
print("accurate CLA:", len(cla.logic_gates), "gates,", len(cla.blocks_named("CLA")), "sub-CLAs")

# %% Replace the low 20 bits by OR gates. Three sub-CLAs remain.
clx5 = build_adder(AdderSpec(32, "cla", 20, "or"))
print("CLA, k=20:", len(clx5.blocks_named("CLA")), "sub-CLAs,",
      clx5.count(GateKind.OR2, "APX"), "OR2 gates in the approximate part")
assert topo_validate(clx5) == []

# %% Simulate one addition. The low part drops every carry, so the result
# can only be too small.
a, b = 0x0001_FFFF, 0x0000_0001
exact = evaluate(cla, InputVector(a, b)).value
approx = evaluate(clx5, InputVector(a, b)).value
print(f"{a:#x} + {b:#x}: exact {exact:#x}, approximate {approx:#x}, "
      f"error distance {exact - approx}")

# %% The structural netlist dump is one gate per line.
print(build_adder(AdderSpec(2, "rca")).to_text())
