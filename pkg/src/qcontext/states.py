"""Quantum states and rank-one measurement vectors for the n=5 and n=6 tests.

The vectors are stored as exact symbolic constants (integers and square
roots) and evaluated to floating point once, so tests can pin closed forms
and the squared overlaps stay exact rationals.  Density matrices are the
input currency of `beta_value` so the decoherence layer can reuse it on
mixed states unchanged.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np
import sympy as sp

from .graphs import build_graph, classical_bound

_HERM_TOL = 1e-10


def _exact_vectors(n: int) -> tuple[sp.Matrix, dict[int, sp.Matrix]]:
    r2, r3, r6 = sp.sqrt(2), sp.sqrt(3), sp.sqrt(6)
    if n == 5:
        eta = sp.Matrix([1, 1, 1]) / r3
        vectors = {
            1: sp.Matrix([1, -1, 1]) / r3,
            2: sp.Matrix([1, 1, 0]) / r2,
            3: sp.Matrix([0, 0, 1]),
            4: sp.Matrix([1, 0, 0]),
            5: sp.Matrix([0, 1, 1]) / r2,
        }
    elif n == 6:
        eta = sp.Matrix([r2, 1, 1, r2]) / r6
        vectors = {
            1: sp.Matrix([-r2, 1, 1, -r2]) / r6,
            2: sp.Matrix([1, 0, 0, 0]),
            3: sp.Matrix([0, 1, 1, r2]) / 2,
            4: sp.Matrix([0, -1, 1, 0]) / r2,
            5: sp.Matrix([r2, 1, 1, 0]) / 2,
            6: sp.Matrix([0, 0, 0, 1]),
        }
    else:
        raise ValueError(f"no published measurement vectors for n={n}")
    return eta, vectors


def _to_float(vec: sp.Matrix) -> np.ndarray:
    return np.array([float(x) for x in vec], dtype=float)


@dataclass(frozen=True)
class MeasurementSet:
    """State |eta> plus one unit vector per graph vertex, all real, dim d."""

    n: int
    dim: int
    state: np.ndarray
    vectors: dict[int, np.ndarray]

    def projector(self, vertex: int) -> np.ndarray:
        v = self.vectors[vertex]
        return np.outer(v, v.conj())

    def state_density(self) -> np.ndarray:
        return np.outer(self.state, self.state.conj())

    def as_dict(self) -> dict:
        def pairs(v: np.ndarray) -> list[list[float]]:
            return [[float(np.real(x)), float(np.imag(x))] for x in v]

        return {
            "n": self.n,
            "dim": self.dim,
            "state": pairs(self.state),
            "vectors": {str(i): pairs(v) for i, v in self.vectors.items()},
        }


@dataclass(frozen=True)
class BoundsReport:
    beta_classical: int
    beta_quantum: float
    per_vertex: dict[int, float]


@lru_cache(maxsize=None)
def builtin_measurements(n: int) -> MeasurementSet:
    """The published vector sets: d=3 for n=5, d=4 for n=6."""
    eta, vectors = _exact_vectors(n)
    return MeasurementSet(
        n=n,
        dim=len(eta),
        state=_to_float(eta),
        vectors={i: _to_float(v) for i, v in vectors.items()},
    )


def _check_density(rho: np.ndarray, dim: int) -> np.ndarray:
    rho = np.asarray(rho)
    if rho.shape != (dim, dim):
        raise ValueError(f"density matrix shape {rho.shape} does not match dimension {dim}")
    if np.abs(rho - rho.conj().T).max() > _HERM_TOL:
        raise ValueError("density matrix is not Hermitian")
    if abs(np.trace(rho).real - 1.0) > _HERM_TOL:
        raise ValueError("density matrix trace is not 1")
    if np.linalg.eigvalsh(rho).min() < -_HERM_TOL:
        raise ValueError("density matrix is not positive semidefinite")
    return rho


def beta_value(ms: MeasurementSet, rho: np.ndarray) -> BoundsReport:
    """Inequality value beta = sum_i Tr(|v_i><v_i| rho) plus the classical bound."""
    rho = _check_density(rho, ms.dim)
    per_vertex = {
        i: float(np.real(v.conj() @ rho @ v)) for i, v in ms.vectors.items()
    }
    return BoundsReport(
        beta_classical=classical_bound(ms.n),
        beta_quantum=sum(per_vertex.values()),
        per_vertex=per_vertex,
    )


@lru_cache(maxsize=None)
def per_vertex_exact(n: int) -> dict[int, Fraction]:
    """Exact squared overlaps |<v_i|eta>|^2 as rationals."""
    eta, vectors = _exact_vectors(n)
    out = {}
    for i, v in vectors.items():
        p = sp.simplify((v.T * eta)[0, 0] ** 2)
        p = sp.nsimplify(p, rational=True)
        if not p.is_Rational:
            raise RuntimeError(f"overlap for vertex {i} did not reduce to a rational: {p}")
        out[i] = Fraction(int(p.p), int(p.q))
    return out


def beta_quantum_exact(n: int) -> Fraction:
    """Exact quantum value of the inequality on the built-in state."""
    return sum(per_vertex_exact(n).values(), Fraction(0))


def exclusivity_defect(ms: MeasurementSet) -> float:
    """Largest |<v_i|v_j>| over graph edges; 0 means exact exclusivity."""
    g = build_graph(ms.n)
    worst = 0.0
    for a, b in g.edges:
        worst = max(worst, abs(float(ms.vectors[a].conj() @ ms.vectors[b])))
    return worst
