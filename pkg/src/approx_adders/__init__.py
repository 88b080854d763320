"""Accurate and approximate ripple-carry / carry-lookahead adders at gate level."""

__version__ = "0.1.0"

from .netlist import (AdderSpec, ApproxStyle, Architecture, Gate, GateKind, Netlist,
                      NetlistBuilder, SpecError, build_adder, build_cla4, build_clg4,
                      build_full_adder, topo_validate)
from .simulate import (InputVector, OutputWord, StreamGuardError, VectorStream,
                       behavioral_accurate, behavioral_approx, evaluate, stream_vectors)
from .error_metrics import ErrorReport, approx_sum_bit, measure, sweep, table1
from .cost_model import (CellLibrary, CellSpec, CostReport, DelayModelParams, Table2Reference,
                         area_of, calibrate_delay, calibrated_delay, default_library,
                         pdp_report, reproduce_claims, structural_delay)
