"""Numerical lab for graph-based contextuality inequalities.

The package covers the full pipeline from the abstract exclusivity graph to a
simulated photonic test: graph family and bounds (`graphs`), the realizing
measurement vectors (`states`), beam-splitter circuits with calibrated
imperfections (`interferometer`), the resulting precision thresholds (`ofnc`),
damping channels under several encodings (`decoherence`), and a state-vector
simulation of the delay-based experiment (`photonic`).  `cli` exposes the whole
thing as a command-line tool.
"""
from __future__ import annotations

from .decoherence import (
    AMPLITUDE,
    PHASE,
    QUBIT_REGISTER,
    SINGLE_QUDIT,
    SYMMETRIC,
    Encoding,
    KrausChannel,
    NoiseSweepPoint,
    apply_noise,
    beta_under_noise,
    build_encoding,
    epsilon_th_curve,
    kraus_amplitude,
    kraus_phase,
    noise_threshold,
)
from .graphs import (
    ContextSet,
    ExclusivityGraph,
    build_graph,
    classical_bound,
    enumerate_contexts,
    independence_number,
    ofnc_penalty_denominator,
    penalty_denominator,
)
from .interferometer import (
    BeamSplitter,
    InterferometerCircuit,
    PathPermutation,
    builtin_circuit,
    builtin_circuits,
    circuit_from_dict,
    compose,
    synthesize,
)
from .ofnc import (
    DistanceCurve,
    OfncBound,
    ThresholdResult,
    delta_threshold,
    distance_curves,
    epsilon_bound,
    projector_distance,
)
from .photonic import (
    ContextRun,
    DelaySchedule,
    OrderInvarianceReport,
    PhotonState,
    beta_from_runs,
    compatibility_check,
    decode,
    make_schedule,
    run_context,
    sample,
)
from .states import (
    BoundsReport,
    MeasurementSet,
    beta_quantum_exact,
    beta_value,
    builtin_measurements,
    exclusivity_defect,
    per_vertex_exact,
)

__version__ = "0.1.0"

__all__ = [
    "AMPLITUDE",
    "PHASE",
    "QUBIT_REGISTER",
    "SINGLE_QUDIT",
    "SYMMETRIC",
    "BeamSplitter",
    "BoundsReport",
    "ContextRun",
    "ContextSet",
    "DelaySchedule",
    "DistanceCurve",
    "Encoding",
    "ExclusivityGraph",
    "InterferometerCircuit",
    "KrausChannel",
    "MeasurementSet",
    "NoiseSweepPoint",
    "OfncBound",
    "OrderInvarianceReport",
    "PathPermutation",
    "PhotonState",
    "ThresholdResult",
    "apply_noise",
    "beta_from_runs",
    "beta_quantum_exact",
    "beta_under_noise",
    "beta_value",
    "build_encoding",
    "build_graph",
    "builtin_circuit",
    "builtin_circuits",
    "builtin_measurements",
    "circuit_from_dict",
    "classical_bound",
    "compatibility_check",
    "compose",
    "decode",
    "delta_threshold",
    "distance_curves",
    "enumerate_contexts",
    "epsilon_bound",
    "epsilon_th_curve",
    "exclusivity_defect",
    "independence_number",
    "kraus_amplitude",
    "kraus_phase",
    "make_schedule",
    "noise_threshold",
    "ofnc_penalty_denominator",
    "penalty_denominator",
    "per_vertex_exact",
    "projector_distance",
    "run_context",
    "sample",
    "synthesize",
]
