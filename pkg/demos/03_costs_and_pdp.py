# Area, delay and power-delay product
# ===================================
#
# Area comes from a macro-level cell model (FA and 4-bit CLA cells plus one
# OR2 per approximated bit). Delay comes from an affine fit in the width of
# the accurate part. Power is reference data: the published measurements.

from approx_adders import (AdderSpec, Table2Reference, area_of, calibrate_delay, default_library,
                           pdp_report, reproduce_claims)
from approx_adders.cost_model import reference_specs

lib = default_library()
table2 = Table2Reference.load()
params = calibrate_delay(table2)

# %% The fitted delay models. The CLA gains exactly 0.09 ns per nibble.
for arch, p in params.items():
    print(f"{arch.name}: {p.d_stage:.4f} ns per {p.stage_width}-bit stage + {p.d_fixed:.4f} ns")

# %% One cost report per published design.
print(f"{'design':6s} {'area':>8s} {'delay':>6s} {'power':>6s} {'PDP':>7s} {'PDP red.':>8s}")
for spec in reference_specs():
    r = pdp_report(spec, table2, lib, params)
    print(f"{r.legend:6s} {r.area:8.2f} {r.delay_calibrated:6.3f} {r.power:6.2f} "
          f"{r.pdp:7.2f} {r.reductions['pdp']:7.1f}%")

# %% The same arithmetic behind every headline percentage.
for line in reproduce_claims(table2).lines()[:7]:
    print(line)

# %% Designs outside the published set still get area and delay, but no power.
r = pdp_report(AdderSpec(32, "rca", 10, "or"), table2, lib, params)
print(f"RCA k=10: area {r.area:.2f} um^2, delay {r.delay_calibrated:.3f} ns, power {r.power}")
