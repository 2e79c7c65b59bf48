"""Beam-splitter circuits that rotate a target vector onto the first path.

Each measurement vector |v_i> gets a small optical network U_i with
U_i |v_i> = +-|0>, built from two-mode splitters and path relabelings.  A
splitter with ideal transmission probability T carries a calibrated
imperfection delta: its transmission becomes T + (-1)^phi * delta with the
row amplitudes re-rooted, so every composed matrix stays orthogonal for any
delta within range.  The number of splitters a vector needs is its nonzero
component count minus one.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Mapping

import numpy as np

from .states import builtin_measurements

_SIGN_OK = (-1, 1)


@dataclass(frozen=True)
class BeamSplitter:
    """Two-mode splitter block [[s11*sqrt(T), s12*sqrt(1-T)], [s21*sqrt(1-T), s22*sqrt(T)]].

    The sign pattern must satisfy s11*s21 == -s12*s22 so the block is
    orthogonal.  `phi` picks the default direction of the delta shift:
    transmission becomes T + (-1)^phi * delta.
    """

    mode_a: int
    mode_b: int
    transmission: float
    pattern: tuple[tuple[int, int], tuple[int, int]] = ((1, 1), (1, -1))
    phi: int = 0

    def __post_init__(self) -> None:
        if self.mode_a == self.mode_b:
            raise ValueError("splitter needs two distinct modes")
        if not 0.0 < self.transmission < 1.0:
            raise ValueError(f"transmission must lie strictly in (0,1), got {self.transmission}")
        (s11, s12), (s21, s22) = self.pattern
        if any(s not in _SIGN_OK for s in (s11, s12, s21, s22)):
            raise ValueError(f"sign pattern entries must be +-1, got {self.pattern}")
        if s11 * s21 != -s12 * s22:
            raise ValueError(f"sign pattern {self.pattern} does not give an orthogonal block")
        if self.phi not in (0, 1):
            raise ValueError("phi flag must be 0 or 1")


@dataclass(frozen=True)
class PathPermutation:
    """Relabeling of paths: mode j is routed to targets[j]. No optical elements."""

    targets: tuple[int, ...]

    def __post_init__(self) -> None:
        if sorted(self.targets) != list(range(len(self.targets))):
            raise ValueError(f"{self.targets} is not a permutation of 0..{len(self.targets) - 1}")


Layer = BeamSplitter | PathPermutation


@dataclass(frozen=True)
class InterferometerCircuit:
    """Ordered layers (applied first-to-last) acting on `dim` photon paths.

    `result_sign` records whether the composed ideal matrix sends the target
    vector to +|0> or -|0>.
    """

    dim: int
    layers: tuple[Layer, ...] = ()
    target_vertex: int | None = None
    result_sign: int = 1

    @property
    def splitter_count(self) -> int:
        return sum(isinstance(l, BeamSplitter) for l in self.layers)

    def splitters(self) -> Iterator[tuple[int, BeamSplitter]]:
        """Yield (ordinal, splitter) in application order; ordinals skip permutations."""
        ordinal = 0
        for layer in self.layers:
            if isinstance(layer, BeamSplitter):
                yield ordinal, layer
                ordinal += 1

    def delta_validity(self) -> float:
        """Largest |delta| keeping every shifted transmission inside [0,1]."""
        limits = [min(bs.transmission, 1.0 - bs.transmission) for _, bs in self.splitters()]
        return min(limits) if limits else np.inf

    def as_dict(self) -> dict:
        layers = []
        for layer in self.layers:
            if isinstance(layer, BeamSplitter):
                layers.append(
                    {
                        "kind": "bs",
                        "a": layer.mode_a,
                        "b": layer.mode_b,
                        "T": layer.transmission,
                        "phi": layer.phi,
                        "pattern": [list(row) for row in layer.pattern],
                    }
                )
            else:
                layers.append({"kind": "perm", "map": list(layer.targets)})
        return {"dim": self.dim, "layers": layers, "target_vertex": self.target_vertex}


def circuit_from_dict(data: Mapping) -> InterferometerCircuit:
    layers: list[Layer] = []
    for entry in data["layers"]:
        if entry["kind"] == "bs":
            layers.append(
                BeamSplitter(
                    mode_a=entry["a"],
                    mode_b=entry["b"],
                    transmission=entry["T"],
                    pattern=tuple(tuple(row) for row in entry["pattern"]),
                    phi=entry.get("phi", 0),
                )
            )
        elif entry["kind"] == "perm":
            layers.append(PathPermutation(tuple(entry["map"])))
        else:
            raise ValueError(f"unknown layer kind {entry['kind']!r}")
    return InterferometerCircuit(
        dim=data["dim"], layers=tuple(layers), target_vertex=data.get("target_vertex")
    )


def _splitter_matrix(dim: int, bs: BeamSplitter, shifted_t: float) -> np.ndarray:
    t = np.sqrt(shifted_t)
    r = np.sqrt(1.0 - shifted_t)
    (s11, s12), (s21, s22) = bs.pattern
    m = np.eye(dim)
    m[bs.mode_a, bs.mode_a] = s11 * t
    m[bs.mode_a, bs.mode_b] = s12 * r
    m[bs.mode_b, bs.mode_a] = s21 * r
    m[bs.mode_b, bs.mode_b] = s22 * t
    return m


def _permutation_matrix(dim: int, perm: PathPermutation) -> np.ndarray:
    m = np.zeros((dim, dim))
    for src, dst in enumerate(perm.targets):
        m[dst, src] = 1.0
    return m


def compose(
    circuit: InterferometerCircuit,
    delta: float = 0.0,
    phis: Mapping[int, int] | None = None,
) -> np.ndarray:
    """Multiply out the circuit at imperfection `delta`.

    `phis` overrides the per-splitter shift direction, keyed by splitter
    ordinal in application order (0 is the first splitter the photon meets).
    A shifted transmission may touch 0 or 1 exactly (the splitter degenerates
    to a routing element); beyond that the parameters are unphysical.
    """
    phis = phis or {}
    matrix = np.eye(circuit.dim)
    ordinal = 0
    for layer in circuit.layers:
        if isinstance(layer, BeamSplitter):
            phi = phis.get(ordinal, layer.phi)
            if phi not in (0, 1):
                raise ValueError(f"phi for splitter {ordinal} must be 0 or 1, got {phi}")
            shifted = layer.transmission + (1 if phi == 0 else -1) * delta
            if shifted < -1e-12 or shifted > 1.0 + 1e-12:
                raise ValueError(
                    f"delta={delta} pushes splitter {ordinal} transmission to {shifted}, "
                    "outside [0,1]"
                )
            shifted = min(max(shifted, 0.0), 1.0)
            matrix = _splitter_matrix(circuit.dim, layer, shifted) @ matrix
            ordinal += 1
        else:
            matrix = _permutation_matrix(circuit.dim, layer) @ matrix
    return matrix


def synthesize(v: np.ndarray, dim: int) -> InterferometerCircuit:
    """Build a circuit sending the real unit vector v to +-|0>.

    Works pairwise from the highest-index nonzero component down: each
    splitter folds component j onto the next-lower nonzero component i with
    transmission w_i^2/(w_i^2 + w_j^2).  A basis vector needs no splitters,
    only (at most) a path swap.
    """
    if np.iscomplexobj(v):
        raise ValueError("only real vectors are supported")
    w = np.asarray(v, dtype=float).copy()
    if w.shape != (dim,):
        raise ValueError(f"vector length {w.shape} does not match dim={dim}")
    norm = np.linalg.norm(w)
    if norm < 1e-12:
        raise ValueError("cannot synthesize a circuit for the zero vector")
    if abs(norm - 1.0) > 1e-8:
        raise ValueError(f"input must be a unit vector, got norm {norm}")
    w /= norm

    layers: list[Layer] = []
    nonzero = [int(i) for i in np.flatnonzero(np.abs(w) > 1e-12)]
    while len(nonzero) >= 2:
        j = nonzero.pop()
        i = nonzero[-1]
        wi, wj = w[i], w[j]
        merged = float(np.hypot(wi, wj))
        t = float(wi * wi / (merged * merged))
        si, sj = int(np.sign(wi)), int(np.sign(wj))
        layers.append(
            BeamSplitter(
                mode_a=i,
                mode_b=j,
                transmission=t,
                pattern=((si, sj), (sj, -si)),
            )
        )
        w[i], w[j] = merged, 0.0

    survivor = nonzero[0]
    sign = 1 if w[survivor] > 0 else -1
    if survivor != 0:
        targets = list(range(dim))
        targets[0], targets[survivor] = targets[survivor], targets[0]
        layers.append(PathPermutation(tuple(targets)))
    return InterferometerCircuit(dim=dim, layers=tuple(layers), result_sign=sign)


# Hand-pinned circuits reproducing the published optical networks for every
# vertex, entry-for-entry (not merely up to sign).  Layers are listed in
# application order.
_FIXTURE_LAYERS: dict[tuple[int, int], tuple[Layer, ...]] = {
    (5, 1): (
        BeamSplitter(1, 2, 1 / 2, ((-1, 1), (1, 1))),
        BeamSplitter(0, 1, 1 / 3, ((1, 1), (1, -1))),
    ),
    (5, 2): (BeamSplitter(0, 1, 1 / 2, ((1, 1), (1, -1))),),
    (5, 3): (PathPermutation((2, 1, 0)),),
    (5, 4): (),
    (5, 5): (
        BeamSplitter(1, 2, 1 / 2, ((1, 1), (1, -1))),
        PathPermutation((2, 0, 1)),
    ),
    (6, 1): (
        BeamSplitter(2, 3, 1 / 3, ((-1, 1), (1, 1))),
        BeamSplitter(1, 2, 1 / 4, ((-1, 1), (1, 1))),
        BeamSplitter(0, 1, 1 / 3, ((-1, -1), (-1, 1))),
    ),
    (6, 2): (),
    (6, 3): (
        BeamSplitter(1, 2, 1 / 2, ((1, 1), (1, -1))),
        PathPermutation((3, 1, 2, 0)),
        BeamSplitter(0, 1, 1 / 2, ((1, 1), (1, -1))),
    ),
    (6, 4): (
        BeamSplitter(1, 2, 1 / 2, ((-1, 1), (1, 1))),
        PathPermutation((2, 0, 1, 3)),
    ),
    (6, 5): (
        BeamSplitter(1, 2, 1 / 2, ((1, 1), (1, -1))),
        BeamSplitter(0, 1, 1 / 2, ((1, 1), (-1, 1))),
    ),
    (6, 6): (PathPermutation((3, 1, 2, 0)),),
}


def builtin_circuit(n: int, vertex: int) -> InterferometerCircuit:
    """The pinned published circuit realizing measurement `vertex` of the n-set."""
    try:
        layers = _FIXTURE_LAYERS[(n, vertex)]
    except KeyError:
        raise ValueError(f"no built-in circuit for n={n}, vertex={vertex}") from None
    ms = builtin_measurements(n)
    circuit = InterferometerCircuit(dim=ms.dim, layers=layers, target_vertex=vertex)
    mapped = compose(circuit) @ ms.vectors[vertex]
    sign = 1 if mapped[0] > 0 else -1
    return InterferometerCircuit(
        dim=ms.dim, layers=layers, target_vertex=vertex, result_sign=sign
    )


def builtin_circuits(n: int) -> dict[int, InterferometerCircuit]:
    """All built-in circuits for the n-vertex set, keyed by vertex."""
    ms = builtin_measurements(n)
    return {vertex: builtin_circuit(n, vertex) for vertex in ms.vectors}
