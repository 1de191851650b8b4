from skylink.genfun.family import (
    BumpPerturbation,
    CriticalPoint,
    CriticalSet,
    GenFamily,
    TrigPolynomial,
    critical_points,
    genfun_for_front,
)
from skylink.genfun.filtration import CriticalValueResult, FiltrationComplex, build_filtration, c_minus
from skylink.genfun.monotonicity import (
    MonotonicityReport,
    OrderingReport,
    graph_path_nonnegative,
    monotonicity_harness,
    ordering_check,
)

__all__ = [
    "BumpPerturbation",
    "CriticalPoint",
    "CriticalSet",
    "CriticalValueResult",
    "FiltrationComplex",
    "GenFamily",
    "MonotonicityReport",
    "OrderingReport",
    "TrigPolynomial",
    "build_filtration",
    "c_minus",
    "critical_points",
    "genfun_for_front",
    "graph_path_nonnegative",
    "monotonicity_harness",
    "ordering_check",
]
