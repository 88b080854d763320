# How wrong is an approximate adder?
# ==================================
#
# Per bit, the carry-free OR and XOR sums are each right in 4 of the 8
# rows of the full-adder truth table. Over whole words the picture depends
# on how many low bits are approximated.

from approx_adders import AdderSpec, VectorStream, measure, sweep
from approx_adders.error_metrics import format_table1

# %% The per-bit comparison.
print(format_table1())

# %% Exhaustive sweep at 8 bits: every one of the 65536 operand pairs.
for rep in sweep(8, "rca", ["or", "xor"], [0, 2, 4, 6], VectorStream.exhaustive()):
    print(f"k={rep.approx_bits} {rep.style:4s} ER={rep.error_rate:.4f} "
          f"MED={rep.mean_error_distance:7.3f} max={rep.max_error_distance}")

# %% At 32 bits enumeration is out of reach; use a seeded Monte Carlo stream.
# RCA and CLA give identical reports since their accurate parts compute
# the same function.
stream = VectorStream.montecarlo(100_000, seed=1)
for k in (4, 8, 12, 16, 20):
    r = measure(AdderSpec(32, "cla", k, "or"), stream)
    print(f"32-bit CLA k={k:2d}: ER={r.error_rate:.4f} NMED={r.normalized_med:.3e} "
          f"MRED={r.mean_relative_error:.3e}")
