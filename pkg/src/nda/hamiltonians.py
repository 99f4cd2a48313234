"""Hamiltonians (atomic units) and local energies.

Two families:

* ``coulomb_atom(Z, ee)``: fixed nucleus of charge Z at the origin,
  -Z/r_i attraction for each electron, optional 1/r_ij repulsion.
* ``harmonic_pair(omega, g0)``: two particles in an isotropic harmonic
  well, optional inverse-distance coupling g0/r_12.

``local_energy`` evaluates (H psi)/psi analytically and refuses to do so
within float noise of the node, where the ratio is meaningless.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Optional

import numpy as np

from .wavefunctions import WaveFunction, _as_batch

__all__ = [
    "HamiltonianSpec",
    "coulomb_atom",
    "harmonic_pair",
    "potential",
    "potential_batch",
    "local_energy",
    "NodeProximityError",
    "SingularPointError",
]

_MIN_DISTANCE = 1e-300


class SingularPointError(ValueError):
    """Configuration sits on a potential singularity (coincident charges)."""


class NodeProximityError(ValueError):
    """Local energy requested too close to the nodal set for float arithmetic."""


@dataclass(frozen=True)
class HamiltonianSpec:
    family: str  # "coulomb_atom" | "harmonic_pair"
    Z: float = 0.0
    ee: bool = True
    omega: float = 0.0
    g0: float = 0.0

    def __post_init__(self):
        if self.family not in ("coulomb_atom", "harmonic_pair"):
            raise ValueError(f"unknown hamiltonian family {self.family!r}")


def coulomb_atom(Z: float, ee: bool = True) -> HamiltonianSpec:
    if Z <= 0:
        raise ValueError("Z must be positive")
    return HamiltonianSpec(family="coulomb_atom", Z=float(Z), ee=bool(ee))


def harmonic_pair(omega: float, g0: float = 0.0) -> HamiltonianSpec:
    if omega <= 0:
        raise ValueError("omega must be positive")
    return HamiltonianSpec(family="harmonic_pair", omega=float(omega), g0=float(g0))


def potential_batch(h: HamiltonianSpec, x: np.ndarray,
                    n_particles: Optional[int] = None) -> np.ndarray:
    """Potential energy for an (m, 3N) batch; inf-free by construction or raises."""
    x = np.asarray(x, dtype=float)
    if x.ndim != 2 or x.shape[1] % 3 != 0:
        raise ValueError("batch must have shape (m, 3N)")
    n = x.shape[1] // 3 if n_particles is None else n_particles
    pos = x.reshape(x.shape[0], n, 3)
    v = np.zeros(x.shape[0])
    if h.family == "coulomb_atom":
        r = np.linalg.norm(pos, axis=2)
        if np.any(r < _MIN_DISTANCE):
            raise SingularPointError("electron at the nucleus")
        v -= h.Z * np.sum(1.0 / r, axis=1)
        if h.ee:
            for i, j in combinations(range(n), 2):
                rij = np.linalg.norm(pos[:, i] - pos[:, j], axis=1)
                if np.any(rij < _MIN_DISTANCE):
                    raise SingularPointError("coincident electrons")
                v += 1.0 / rij
        return v
    # harmonic_pair
    if n != 2:
        raise ValueError("harmonic_pair is a two-particle hamiltonian")
    v = 0.5 * h.omega ** 2 * np.sum(x * x, axis=1)
    if h.g0 != 0.0:
        r12 = np.linalg.norm(pos[:, 0] - pos[:, 1], axis=1)
        if np.any(r12 < _MIN_DISTANCE):
            raise SingularPointError("coincident particles")
        v += h.g0 / r12
    return v


def potential(h: HamiltonianSpec, R) -> float:
    """Potential energy at a single configuration (flat 3N vector or Configuration)."""
    coords = getattr(R, "coords", R)
    x = np.asarray(coords, dtype=float).reshape(1, -1)
    return float(potential_batch(h, x)[0])


def local_energy(h: HamiltonianSpec, model: WaveFunction, R) -> float:
    """(H psi)/psi = -lap(psi)/(2 psi) + V, guarded against node contamination."""
    x = _as_batch(model, R)
    psi = float(model.values(x)[0])
    grad = model.gradients(x)[0]
    gnorm = float(np.linalg.norm(grad))
    if abs(psi) < 1e-14 * gnorm:
        raise NodeProximityError(
            "configuration is within float noise of the nodal set "
            f"(|psi| = {abs(psi):.3e}, |grad psi| = {gnorm:.3e})"
        )
    lap = float(model.laplacians(x)[0])
    return -0.5 * lap / psi + float(potential_batch(h, x)[0])
