"""Damping channels, qudit encodings, and noise-threshold sweeps.

Two Kraus channels (amplitude damping with rate gamma, phase damping with
rate lambda) act on the test state under three encodings: the bare qudit, a
register of log2(d) qubits (noise hits every qubit independently), and a
symmetric (Dicke-state) register of d-1 qubits.  The inequality value beta
is evaluated with the measurement projectors lifted through the encoding
isometry; population that noise pushes out of the embedded subspace simply
stops contributing.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .graphs import classical_bound, penalty_denominator
from .states import MeasurementSet

_GRID_STEP = 1e-2
_BISECT_TOL = 1e-9

AMPLITUDE = "amplitude"
PHASE = "phase"
SINGLE_QUDIT = "single_qudit"
QUBIT_REGISTER = "qubit_register"
SYMMETRIC = "symmetric"


@dataclass(frozen=True)
class KrausChannel:
    model: str
    noise_param: float
    local_dim: int
    operators: tuple[np.ndarray, ...]

    def apply(self, rho: np.ndarray) -> np.ndarray:
        out = np.zeros_like(rho, dtype=complex)
        for k in self.operators:
            out += k @ rho @ k.conj().T
        return out


@dataclass(frozen=True)
class Encoding:
    """Embedding of the logical qudit into its physical carrier.

    `isometry` V maps logical basis states into the physical space
    (V^dag V = identity); `n_qubits` is None for the bare qudit.
    """

    kind: str
    logical_dim: int
    n_qubits: int | None
    isometry: np.ndarray

    @property
    def physical_dim(self) -> int:
        return self.isometry.shape[0]


@dataclass(frozen=True)
class NoiseSweepPoint:
    noise_param: float
    beta: float
    epsilon_th: float


def _check_param(param: float) -> float:
    param = float(param)
    if not 0.0 <= param <= 1.0:
        raise ValueError(f"noise parameter must lie in [0,1], got {param}")
    return param


def kraus_amplitude(d: int, gamma: float) -> KrausChannel:
    """Energy loss toward |0>: level |r> decays like r independent excitations."""
    if d < 2:
        raise ValueError("need dimension d >= 2")
    gamma = _check_param(gamma)
    ops = []
    for k in range(d):
        a = np.zeros((d, d))
        for r in range(k, d):
            a[r - k, r] = math.sqrt(math.comb(r, k)) * math.sqrt(
                (1.0 - gamma) ** (r - k) * gamma**k
            )
        ops.append(a)
    return KrausChannel(AMPLITUDE, gamma, d, tuple(ops))


def kraus_phase(d: int, lam: float) -> KrausChannel:
    """Dephasing: coherence between |r> and |s> decays with the level distance."""
    if d < 2:
        raise ValueError("need dimension d >= 2")
    lam = _check_param(lam)
    ops = [np.diag([(1.0 - lam) ** (r * r / 2.0) for r in range(d)])]
    for k in range(1, d):
        p = np.zeros((d, d))
        p[k, k] = math.sqrt(1.0 - (1.0 - lam) ** (k * k))
        ops.append(p)
    return KrausChannel(PHASE, lam, d, tuple(ops))


def _make_channel(model: str, dim: int, param: float) -> KrausChannel:
    if model == AMPLITUDE:
        return kraus_amplitude(dim, param)
    if model == PHASE:
        return kraus_phase(dim, param)
    raise ValueError(f"unknown noise model {model!r}")


def build_encoding(kind: str, d: int) -> Encoding:
    if d < 2:
        raise ValueError("need logical dimension d >= 2")
    if kind == SINGLE_QUDIT:
        return Encoding(kind, d, None, np.eye(d))
    if kind == QUBIT_REGISTER:
        n = d.bit_length() - 1
        if 2**n != d:
            raise ValueError(f"qubit register needs a power-of-two dimension, got d={d}")
        # |j> -> its binary digits, most-significant qubit first; in that
        # ordering the tensor basis index equals j, so V is the identity.
        return Encoding(kind, d, n, np.eye(d))
    if kind == SYMMETRIC:
        n = d - 1
        v = np.zeros((2**n, d))
        for r in range(d):
            occupied = [c for c in range(2**n) if bin(c).count("1") == r]
            for c in occupied:
                v[c, r] = 1.0 / math.sqrt(len(occupied))
        return Encoding(kind, d, n, v)
    raise ValueError(f"unknown encoding kind {kind!r}")


def apply_noise(
    ms: MeasurementSet, enc: Encoding, model: str, param: float
) -> np.ndarray:
    """Physical-space density matrix of the noisy test state."""
    if enc.logical_dim != ms.dim:
        raise ValueError(
            f"encoding dimension {enc.logical_dim} does not match measurement set dim {ms.dim}"
        )
    psi = enc.isometry @ ms.state
    rho = np.outer(psi, psi.conj())
    if enc.n_qubits is None:
        return _make_channel(model, ms.dim, param).apply(rho)
    local = _make_channel(model, 2, param)
    for q in range(enc.n_qubits):
        before = np.eye(2**q)
        after = np.eye(2 ** (enc.n_qubits - q - 1))
        lifted = tuple(np.kron(np.kron(before, k), after) for k in local.operators)
        rho = KrausChannel(model, param, enc.physical_dim, lifted).apply(rho)
    return rho


def beta_under_noise(
    ms: MeasurementSet, enc: Encoding, model: str, param: float
) -> float:
    """Inequality value with lifted projectors |V v_i><V v_i| on the noisy state."""
    rho = apply_noise(ms, enc, model, param)
    total = 0.0
    for v in ms.vectors.values():
        lifted = enc.isometry @ v
        total += float(np.real(lifted.conj() @ rho @ lifted))
    return total


def noise_threshold(ms: MeasurementSet, enc: Encoding, model: str) -> float:
    """First noise level where beta falls to the classical bound.

    A coarse grid locates the crossing (and surfaces any non-monotone
    stretch of the curve as a warning); bisection then pins it down to
    |beta - beta_cl| <= 1e-6.
    """
    beta_cl = float(classical_bound(ms.n))
    betas_at = lambda p: beta_under_noise(ms, enc, model, p)
    if betas_at(0.0) <= beta_cl:
        raise ValueError("no violation at zero noise; nothing to lose")

    grid = np.arange(0.0, 1.0 + _GRID_STEP / 2, _GRID_STEP)
    betas = np.array([betas_at(p) for p in grid])
    if np.diff(betas).max() > 1e-9:
        warnings.warn(
            f"beta({model}, {enc.kind}) is not monotone on the probed grid; "
            "threshold taken as the first crossing",
            stacklevel=2,
        )
    below = np.flatnonzero(betas <= beta_cl)
    if len(below) == 0:
        raise ValueError("beta never reaches the classical bound on [0,1]")
    hi_idx = below[0]
    lo, hi = float(grid[hi_idx - 1]), float(grid[hi_idx])
    while hi - lo > _BISECT_TOL:
        mid = 0.5 * (lo + hi)
        if betas_at(mid) > beta_cl:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def epsilon_th_curve(
    ms: MeasurementSet, enc: Encoding, model: str, grid: Sequence[float]
) -> list[NoiseSweepPoint]:
    """Residual OFNC precision budget epsilon_th along a noise grid.

    epsilon_th = max(0, (beta - beta_cl) / sum(k_i - 1)): the precision bound
    left once decoherence has eaten part of the violation; 0 at and beyond
    the noise threshold.
    """
    beta_cl = float(classical_bound(ms.n))
    denom = penalty_denominator(ms.n)
    points = []
    for param in grid:
        param = _check_param(param)
        beta = beta_under_noise(ms, enc, model, param)
        points.append(
            NoiseSweepPoint(param, beta, max(0.0, (beta - beta_cl) / denom))
        )
    return points
