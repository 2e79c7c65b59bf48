"""Ontologically-faithful-noncontextuality (OFNC) precision analysis.

An OFNC model lets a measurement's classical representation differ between
contexts by at most epsilon.  Refuting all such models needs
epsilon < (beta_Q - beta_cl) / sum_i(k_i - 1), and the realized measurements
must each stay within epsilon of their ideal projector in spectral norm:
Delta_i(delta) = || P_i - U_noisy^dag |0><0| U_noisy ||.  The threshold
delta_th is the largest splitter imperfection for which every vertex, under
every sign branch of the delta shifts, keeps Delta_i <= epsilon.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .interferometer import InterferometerCircuit, builtin_circuits, compose
from .states import builtin_measurements

_PROJ_TOL = 1e-10
_BISECT_TOL = 1e-7
_PROBE_POINTS = 50


@dataclass(frozen=True)
class OfncBound:
    """The precision bound epsilon = (beta_Q - beta_cl) / denominator."""

    epsilon: float | Fraction
    beta_quantum: float | Fraction
    beta_classical: float | Fraction
    denominator: int


@dataclass(frozen=True)
class DistanceCurve:
    """Delta_i(delta) samples for one vertex and one sign branch.

    `phi_branch` holds one flag per splitter in application order (0 means
    the shift is +delta, 1 means -delta); circuits without splitters get the
    empty branch and `permutation_only=True` (their curve is identically 0).
    """

    vertex: int
    phi_branch: tuple[int, ...]
    samples: tuple[tuple[float, float], ...]
    permutation_only: bool = False


@dataclass(frozen=True)
class ThresholdResult:
    delta_th: float
    epsilon_used: float
    binding_vertex: int
    binding_phi: tuple[int, ...]
    solver_tolerance: float


def projector_distance(p_ideal: np.ndarray, u_noisy: np.ndarray) -> float:
    """Spectral distance between P_ideal and the projector realized by U_noisy.

    The realized projector is U^dag |0><0| U (the measurement clicks when the
    rotated state exits on path 0).  Validates that P_ideal is a rank-one
    projector and that U_noisy has orthonormal rows.
    """
    p = np.asarray(p_ideal)
    u = np.asarray(u_noisy)
    if p.shape != u.shape or p.shape[0] != p.shape[1]:
        raise ValueError(f"shape mismatch: projector {p.shape}, unitary {u.shape}")
    if np.abs(p - p.conj().T).max() > _PROJ_TOL:
        raise ValueError("P_ideal is not Hermitian")
    if np.abs(p @ p - p).max() > _PROJ_TOL or abs(np.trace(p).real - 1.0) > _PROJ_TOL:
        raise ValueError("P_ideal is not a rank-one projector")
    if np.abs(u @ u.conj().T - np.eye(u.shape[0])).max() > _PROJ_TOL:
        raise ValueError("U_noisy rows are not orthonormal")
    realized = u.conj().T[:, :1] @ u[:1, :]
    return float(np.abs(np.linalg.eigvalsh(p - realized)).max())


def epsilon_bound(
    beta_q: float | Fraction, beta_cl: float | Fraction, denom: int
) -> OfncBound:
    """Bound on the OFNC precision; exact when fed exact rationals."""
    if denom == 0:
        raise ValueError(
            "penalty denominator is zero: no measurement repeats across contexts, "
            "so the faithfulness constraint is vacuous"
        )
    return OfncBound(
        epsilon=(beta_q - beta_cl) / denom,
        beta_quantum=beta_q,
        beta_classical=beta_cl,
        denominator=denom,
    )


def _vertex_distance(
    circuit: InterferometerCircuit,
    projector: np.ndarray,
    delta: float,
    branch: Sequence[int],
) -> float:
    phis = dict(enumerate(branch))
    return projector_distance(projector, compose(circuit, delta, phis))


def _all_branches(k: int) -> Iterable[tuple[int, ...]]:
    return itertools.product((0, 1), repeat=k)


def _max_distance(
    circuits: dict[int, InterferometerCircuit],
    projectors: dict[int, np.ndarray],
    delta: float,
) -> tuple[float, int, tuple[int, ...]]:
    """Worst Delta over every vertex and every sign-branch assignment."""
    best = (0.0, min(circuits), ())
    for vertex, circuit in circuits.items():
        k = circuit.splitter_count
        if k == 0:
            continue
        for branch in _all_branches(k):
            d = _vertex_distance(circuit, projectors[vertex], delta, branch)
            if d > best[0]:
                best = (d, vertex, branch)
    return best


def distance_curves(n: int, delta_grid: Sequence[float]) -> list[DistanceCurve]:
    """One curve per vertex and sign branch, sampled on delta_grid.

    The first splitter of each circuit is held at +delta and the remaining
    splitters enumerate both shift directions, which is the branch family
    whose curves are conventionally plotted; `delta_threshold` maximizes over
    all sign assignments regardless (flipping every sign is the same as
    negating delta).
    """
    ms = builtin_measurements(n)
    circuits = builtin_circuits(n)
    grid = [float(d) for d in delta_grid]
    curves = []
    for vertex in sorted(circuits):
        circuit = circuits[vertex]
        projector = ms.projector(vertex)
        k = circuit.splitter_count
        if k == 0:
            samples = tuple(
                (d, _vertex_distance(circuit, projector, d, ())) for d in grid
            )
            curves.append(DistanceCurve(vertex, (), samples, permutation_only=True))
            continue
        for tail in _all_branches(k - 1):
            branch = (0, *tail)
            samples = tuple(
                (d, _vertex_distance(circuit, projector, d, branch)) for d in grid
            )
            curves.append(DistanceCurve(vertex, branch, samples))
    return curves


def delta_threshold(n: int, epsilon: float) -> ThresholdResult:
    """Largest delta keeping max_i,phi Delta_i(delta) at or below epsilon.

    Probes the worst-branch curve on a grid first and refuses to bisect if it
    is not monotone there.
    """
    epsilon = float(epsilon)
    if epsilon <= 0:
        raise ValueError("epsilon must be positive: without a violation there is nothing to protect")
    ms = builtin_measurements(n)
    circuits = builtin_circuits(n)
    projectors = {v: ms.projector(v) for v in circuits}

    probe_hi = min(c.delta_validity() for c in circuits.values())
    grid = np.linspace(0.0, probe_hi, _PROBE_POINTS)
    values = [_max_distance(circuits, projectors, d)[0] for d in grid]
    if min(np.diff(values)) < -1e-12:
        raise ValueError("max distance curve is not monotone on the probed grid; refusing to bisect")

    above = [i for i, v in enumerate(values) if v > epsilon]
    if not above:
        raise ValueError(
            f"epsilon={epsilon} is never exceeded within the valid delta range "
            f"[0, {probe_hi:.4g}]; the threshold is unbounded there"
        )
    first = above[0]
    lo = float(grid[first - 1]) if first else 0.0
    hi = float(grid[first])
    while hi - lo > _BISECT_TOL:
        mid = 0.5 * (lo + hi)
        if _max_distance(circuits, projectors, mid)[0] <= epsilon:
            lo = mid
        else:
            hi = mid
    _, vertex, branch = _max_distance(circuits, projectors, hi)
    return ThresholdResult(
        delta_th=0.5 * (lo + hi),
        epsilon_used=epsilon,
        binding_vertex=vertex,
        binding_phi=branch,
        solver_tolerance=1e-6,
    )
