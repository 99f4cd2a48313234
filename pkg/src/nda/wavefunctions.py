"""Wave-function models: orbitals, Slater-determinant products, explicit pair forms.

All models expose a batched API (``values``, ``gradients``, ``laplacians``)
over arrays of shape ``(m, 3N)`` plus the scalar convenience operations
:func:`evaluate`, :func:`gradient`, :func:`laplacian` acting on a single
:class:`Configuration`.

Radial factors are kept unnormalized (e.g. the 2p radial part is
``exp(-Z r / 2)``): every quantity computed downstream is a ratio of
integrals, so overall normalization cancels.  Derivatives are analytic
throughout; nothing is differentiated numerically at runtime.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np

__all__ = [
    "Configuration",
    "Orbital",
    "WaveFunction",
    "DetBlock",
    "Term",
    "SlaterProduct",
    "Coupled2p2",
    "HarmonicPair",
    "Scaled",
    "evaluate",
    "gradient",
    "laplacian",
]


# --------------------------------------------------------------------------
# configurations


@dataclass(frozen=True)
class Configuration:
    """Positions of N particles as a flat length-3N coordinate vector (Bohr)."""

    coords: np.ndarray
    n_particles: int

    def __post_init__(self):
        coords = np.asarray(self.coords, dtype=float).reshape(-1)
        if coords.size != 3 * self.n_particles:
            raise ValueError(
                f"coords has length {coords.size}, expected {3 * self.n_particles}"
            )
        if not np.all(np.isfinite(coords)):
            raise ValueError("configuration coordinates must be finite")
        object.__setattr__(self, "coords", coords)

    @classmethod
    def from_array(cls, coords) -> "Configuration":
        coords = np.asarray(coords, dtype=float).reshape(-1)
        if coords.size % 3 != 0:
            raise ValueError("coordinate count is not a multiple of 3")
        return cls(coords=coords, n_particles=coords.size // 3)


def _as_batch(model: "WaveFunction", R) -> np.ndarray:
    if isinstance(R, Configuration):
        if R.n_particles != model.n_particles:
            raise ValueError(
                f"configuration has {R.n_particles} particles, "
                f"model expects {model.n_particles}"
            )
        x = R.coords
    else:
        x = np.asarray(R, dtype=float).reshape(-1)
        if x.size != 3 * model.n_particles:
            raise ValueError(
                f"coordinate vector has length {x.size}, "
                f"expected {3 * model.n_particles}"
            )
        if not np.all(np.isfinite(x)):
            raise ValueError("coordinates must be finite")
    return x[None, :]


# --------------------------------------------------------------------------
# orbitals
#
# Every orbital is a harmonic polynomial P(x) of degree l times a radial
# factor f(r), so
#
#   value     = P f
#   gradient  = f grad(P) + P f'(r) rhat
#   laplacian = P [ f'' + 2 (l+1) f' / r ]
#
# which follows from grad(P).r = l P (Euler) and laplacian(P) = 0.

_AXES = {"x": 0, "y": 1, "z": 2}

# real solid harmonics through l=2, as (poly, grad) closures
def _sh_1(xyz):
    return np.ones(xyz.shape[0])


def _sh_1_grad(xyz):
    return np.zeros_like(xyz)


def _make_axis_poly(axis: int):
    def poly(xyz):
        return xyz[:, axis]

    def grad(xyz):
        g = np.zeros_like(xyz)
        g[:, axis] = 1.0
        return g

    return poly, grad


def _sh2_table():
    # m -> (polynomial, gradient), all harmonic, unnormalized
    def xy(p):
        return p[:, 0] * p[:, 1]

    def xy_g(p):
        g = np.zeros_like(p)
        g[:, 0] = p[:, 1]
        g[:, 1] = p[:, 0]
        return g

    def yz(p):
        return p[:, 1] * p[:, 2]

    def yz_g(p):
        g = np.zeros_like(p)
        g[:, 1] = p[:, 2]
        g[:, 2] = p[:, 1]
        return g

    def zsq(p):
        return 2.0 * p[:, 2] ** 2 - p[:, 0] ** 2 - p[:, 1] ** 2

    def zsq_g(p):
        g = np.empty_like(p)
        g[:, 0] = -2.0 * p[:, 0]
        g[:, 1] = -2.0 * p[:, 1]
        g[:, 2] = 4.0 * p[:, 2]
        return g

    def zx(p):
        return p[:, 2] * p[:, 0]

    def zx_g(p):
        g = np.zeros_like(p)
        g[:, 0] = p[:, 2]
        g[:, 2] = p[:, 0]
        return g

    def xxyy(p):
        return p[:, 0] ** 2 - p[:, 1] ** 2

    def xxyy_g(p):
        g = np.zeros_like(p)
        g[:, 0] = 2.0 * p[:, 0]
        g[:, 1] = -2.0 * p[:, 1]
        return g

    return {-2: (xy, xy_g), -1: (yz, yz_g), 0: (zsq, zsq_g), 1: (zx, zx_g), 2: (xxyy, xxyy_g)}


_SH2 = _sh2_table()

_ORBITAL_KINDS = (
    "hydrogenic_1s",
    "hydrogenic_2s",
    "hydrogenic_2p",
    "hydrogenic_general",
    "gaussian_s",
    "gaussian_p",
)


@dataclass(frozen=True)
class Orbital:
    """One-particle orbital; ``scale`` is Z for hydrogenic kinds, omega for gaussian."""

    kind: str
    scale: float
    axis: Optional[str] = None
    n: Optional[int] = None
    l: Optional[int] = None
    m: Optional[int] = None

    def __post_init__(self):
        if self.kind not in _ORBITAL_KINDS:
            raise ValueError(f"unknown orbital kind {self.kind!r}")
        if self.scale <= 0:
            raise ValueError("orbital scale must be positive")
        if self.kind in ("hydrogenic_2p", "gaussian_p") and self.axis not in _AXES:
            raise ValueError("p orbital needs axis 'x', 'y' or 'z'")
        if self.kind == "hydrogenic_general":
            if self.n is None or self.l is None or self.m is None:
                raise ValueError("hydrogenic_general needs (n, l, m)")
            if self.l != self.n - 1:
                raise ValueError("hydrogenic_general is restricted to l = n - 1")
            if abs(self.m) > self.l:
                raise ValueError("|m| must not exceed l")
            if self.l > 2:
                raise ValueError(
                    "evaluable orbitals stop at l = 2; higher subshells are "
                    "reference-only (see reference.subshell_kin_nda)"
                )

    # radial factor and its first two derivatives, as arrays over r
    def _radial(self, r):
        s = self.scale
        if self.kind == "hydrogenic_1s":
            f = np.exp(-s * r)
            return f, -s * f, s * s * f
        if self.kind == "hydrogenic_2s":
            e = np.exp(-0.5 * s * r)
            f = (1.0 - 0.5 * s * r) * e
            fp = -s * (1.0 - 0.25 * s * r) * e
            fpp = s * s * (0.75 - 0.125 * s * r) * e
            return f, fp, fpp
        if self.kind in ("hydrogenic_2p",):
            f = np.exp(-0.5 * s * r)
            return f, -0.5 * s * f, 0.25 * s * s * f
        if self.kind == "hydrogenic_general":
            a = s / self.n
            f = np.exp(-a * r)
            return f, -a * f, a * a * f
        if self.kind in ("gaussian_s", "gaussian_p"):
            f = np.exp(-0.5 * s * r * r)
            fp = -s * r * f
            fpp = (s * s * r * r - s) * f
            return f, fp, fpp
        raise AssertionError(self.kind)

    def _poly(self):
        if self.kind in ("hydrogenic_1s", "hydrogenic_2s", "gaussian_s"):
            return _sh_1, _sh_1_grad, 0
        if self.kind in ("hydrogenic_2p", "gaussian_p"):
            p, g = _make_axis_poly(_AXES[self.axis])
            return p, g, 1
        if self.kind == "hydrogenic_general":
            if self.l == 0:
                return _sh_1, _sh_1_grad, 0
            if self.l == 1:
                axis = {-1: 1, 0: 2, 1: 0}[self.m]
                p, g = _make_axis_poly(axis)
                return p, g, 1
            p, g = _SH2[self.m]
            return p, g, 2
        raise AssertionError(self.kind)

    def value(self, xyz: np.ndarray) -> np.ndarray:
        r = np.linalg.norm(xyz, axis=1)
        poly, _, _ = self._poly()
        f, _, _ = self._radial(r)
        return poly(xyz) * f

    def grad(self, xyz: np.ndarray) -> np.ndarray:
        r = np.linalg.norm(xyz, axis=1)
        poly, polyg, _ = self._poly()
        f, fp, _ = self._radial(r)
        rinv = np.where(r > 0.0, 1.0 / np.maximum(r, 1e-300), 0.0)
        rhat = xyz * rinv[:, None]
        return f[:, None] * polyg(xyz) + (poly(xyz) * fp)[:, None] * rhat

    def lap(self, xyz: np.ndarray) -> np.ndarray:
        r = np.linalg.norm(xyz, axis=1)
        poly, _, l = self._poly()
        f, fp, fpp = self._radial(r)
        rinv = np.where(r > 0.0, 1.0 / np.maximum(r, 1e-300), 0.0)
        return poly(xyz) * (fpp + 2.0 * (l + 1) * fp * rinv)


# --------------------------------------------------------------------------
# model base class


class WaveFunction:
    """Base class; subclasses fill in the batched evaluators."""

    n_particles: int
    family: str  # "coulomb" | "harmonic"
    structure: str
    parameters: dict

    def values(self, x: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def gradients(self, x: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def laplacians(self, x: np.ndarray) -> np.ndarray:
        raise NotImplementedError


def evaluate(model: WaveFunction, R) -> float:
    """Amplitude of the model at one configuration (zero is legal: point on node)."""
    return float(model.values(_as_batch(model, R))[0])


def gradient(model: WaveFunction, R) -> np.ndarray:
    """Analytic gradient, flat length-3N vector."""
    return model.gradients(_as_batch(model, R))[0]


def laplacian(model: WaveFunction, R) -> float:
    """Analytic Laplacian (sum of all 3N second partials)."""
    return float(model.laplacians(_as_batch(model, R))[0])


# --------------------------------------------------------------------------
# determinant-assembled models


@dataclass(frozen=True)
class DetBlock:
    """One spin channel: orbitals occupied by the listed electron indices."""

    orbitals: Tuple[Orbital, ...]
    electrons: Tuple[int, ...]

    def __post_init__(self):
        if len(self.orbitals) != len(self.electrons):
            raise ValueError("block needs as many orbitals as electrons")


@dataclass(frozen=True)
class Term:
    coeff: float
    blocks: Tuple[DetBlock, ...]


def _block_matrix(block: DetBlock, x: np.ndarray) -> np.ndarray:
    m = x.shape[0]
    n = len(block.electrons)
    M = np.empty((m, n, n))
    for i, e in enumerate(block.electrons):
        xyz = x[:, 3 * e : 3 * e + 3]
        for j, orb in enumerate(block.orbitals):
            M[:, i, j] = orb.value(xyz)
    return M


def _det(M: np.ndarray) -> np.ndarray:
    n = M.shape[-1]
    if n == 1:
        return M[:, 0, 0]
    if n == 2:
        # explicit form keeps row swaps exact sign flips in floating point
        return M[:, 0, 0] * M[:, 1, 1] - M[:, 0, 1] * M[:, 1, 0]
    return np.linalg.det(M)


def _cofactors(M: np.ndarray) -> np.ndarray:
    """C[i, j] = d det / d M[i, j]; stable at the node (no matrix inverse)."""
    m, n, _ = M.shape
    if n == 1:
        return np.ones((m, 1, 1))
    if n == 2:
        C = np.empty_like(M)
        C[:, 0, 0] = M[:, 1, 1]
        C[:, 0, 1] = -M[:, 1, 0]
        C[:, 1, 0] = -M[:, 0, 1]
        C[:, 1, 1] = M[:, 0, 0]
        return C
    C = np.empty_like(M)
    rows = np.arange(n)
    for i in range(n):
        for j in range(n):
            minor = M[:, rows != i][:, :, rows != j]
            C[:, i, j] = (-1.0) ** (i + j) * np.linalg.det(minor)
    return C


class SlaterProduct(WaveFunction):
    """Sum of products of per-channel determinants over disjoint electron sets.

    Covers everything from a single orbital (1x1 determinant) through
    det-up x det-down products and their symmetry-coupled sums.
    """

    structure = "orbital_product_antisymmetrized"

    def __init__(self, terms: Sequence[Term], n_particles: int, family: str,
                 parameters: Optional[dict] = None):
        for t in terms:
            seen = [e for b in t.blocks for e in b.electrons]
            if len(set(seen)) != len(seen):
                raise ValueError("blocks within a term must use disjoint electrons")
            if any(e < 0 or e >= n_particles for e in seen):
                raise ValueError("electron index out of range")
        self.terms = tuple(terms)
        self.n_particles = n_particles
        self.family = family
        self.parameters = dict(parameters or {})

    def values(self, x: np.ndarray) -> np.ndarray:
        out = np.zeros(x.shape[0])
        for t in self.terms:
            prod = np.full(x.shape[0], t.coeff)
            for b in t.blocks:
                prod = prod * _det(_block_matrix(b, x))
            out = out + prod
        return out

    def _term_parts(self, t: Term, x: np.ndarray):
        dets = [(_det(_block_matrix(b, x))) for b in t.blocks]
        return dets

    def gradients(self, x: np.ndarray) -> np.ndarray:
        m = x.shape[0]
        out = np.zeros((m, 3 * self.n_particles))
        for t in self.terms:
            mats = [_block_matrix(b, x) for b in t.blocks]
            dets = [_det(M) for M in mats]
            for bi, b in enumerate(t.blocks):
                other = np.full(m, t.coeff)
                for bj, d in enumerate(dets):
                    if bj != bi:
                        other = other * d
                C = _cofactors(mats[bi])
                for i, e in enumerate(b.electrons):
                    xyz = x[:, 3 * e : 3 * e + 3]
                    row = np.zeros((m, 3))
                    for j, orb in enumerate(b.orbitals):
                        row += C[:, i, j][:, None] * orb.grad(xyz)
                    out[:, 3 * e : 3 * e + 3] += other[:, None] * row
        return out

    def laplacians(self, x: np.ndarray) -> np.ndarray:
        m = x.shape[0]
        out = np.zeros(m)
        for t in self.terms:
            mats = [_block_matrix(b, x) for b in t.blocks]
            dets = [_det(M) for M in mats]
            for bi, b in enumerate(t.blocks):
                other = np.full(m, t.coeff)
                for bj, d in enumerate(dets):
                    if bj != bi:
                        other = other * d
                C = _cofactors(mats[bi])
                lap_b = np.zeros(m)
                for i, e in enumerate(b.electrons):
                    xyz = x[:, 3 * e : 3 * e + 3]
                    for j, orb in enumerate(b.orbitals):
                        lap_b += C[:, i, j] * orb.lap(xyz)
                out += other * lap_b
        return out


# --------------------------------------------------------------------------
# explicit two-particle forms

_COUPLINGS = ("cross", "plus", "dot")


class Coupled2p2(WaveFunction):
    """Two electrons in the 2p subshell with an explicit angular coupling.

    coupling "cross": (x1 y2 - x2 y1) rho rho  (triplet P)
    coupling "plus" : (x1 y2 + x2 y1) rho rho  (a singlet D component)
    coupling "dot"  : (r1 . r2) rho rho        (singlet S)

    with rho(r) = exp(-Z r / 2).
    """

    structure = "explicit_form"
    family = "coulomb"
    n_particles = 2

    def __init__(self, coupling: str, Z: float = 1.0):
        if coupling not in _COUPLINGS:
            raise ValueError(f"coupling must be one of {_COUPLINGS}")
        if Z <= 0:
            raise ValueError("Z must be positive")
        self.coupling = coupling
        self.Z = float(Z)
        self.parameters = {"Z": self.Z, "coupling": coupling}

    def _ang(self, a: np.ndarray, b: np.ndarray):
        # returns A, dA/da, dA/db  (each gradient shape (m, 3))
        if self.coupling == "cross":
            A = a[:, 0] * b[:, 1] - b[:, 0] * a[:, 1]
            ga = np.stack([b[:, 1], -b[:, 0], np.zeros(len(A))], axis=1)
            gb = np.stack([-a[:, 1], a[:, 0], np.zeros(len(A))], axis=1)
        elif self.coupling == "plus":
            A = a[:, 0] * b[:, 1] + b[:, 0] * a[:, 1]
            ga = np.stack([b[:, 1], b[:, 0], np.zeros(len(A))], axis=1)
            gb = np.stack([a[:, 1], a[:, 0], np.zeros(len(A))], axis=1)
        else:
            A = np.sum(a * b, axis=1)
            ga = b.copy()
            gb = a.copy()
        return A, ga, gb

    def values(self, x: np.ndarray) -> np.ndarray:
        a, b = x[:, 0:3], x[:, 3:6]
        r1 = np.linalg.norm(a, axis=1)
        r2 = np.linalg.norm(b, axis=1)
        A, _, _ = self._ang(a, b)
        return A * np.exp(-0.5 * self.Z * (r1 + r2))

    def gradients(self, x: np.ndarray) -> np.ndarray:
        a, b = x[:, 0:3], x[:, 3:6]
        r1 = np.linalg.norm(a, axis=1)
        r2 = np.linalg.norm(b, axis=1)
        A, ga, gb = self._ang(a, b)
        rho = np.exp(-0.5 * self.Z * (r1 + r2))
        r1i = np.where(r1 > 0, 1.0 / np.maximum(r1, 1e-300), 0.0)
        r2i = np.where(r2 > 0, 1.0 / np.maximum(r2, 1e-300), 0.0)
        out = np.empty_like(x)
        out[:, 0:3] = rho[:, None] * (ga - (0.5 * self.Z * A * r1i)[:, None] * a)
        out[:, 3:6] = rho[:, None] * (gb - (0.5 * self.Z * A * r2i)[:, None] * b)
        return out

    def laplacians(self, x: np.ndarray) -> np.ndarray:
        a, b = x[:, 0:3], x[:, 3:6]
        r1 = np.linalg.norm(a, axis=1)
        r2 = np.linalg.norm(b, axis=1)
        A, ga, gb = self._ang(a, b)
        rho = np.exp(-0.5 * self.Z * (r1 + r2))
        Z = self.Z
        r1i = np.where(r1 > 0, 1.0 / np.maximum(r1, 1e-300), 0.0)
        r2i = np.where(r2 > 0, 1.0 / np.maximum(r2, 1e-300), 0.0)
        # per electron: A (f'' + 2 f'/r) + 2 f' rhat . grad_A, with f = exp(-Zr/2)
        lap1 = A * (0.25 * Z * Z - Z * r1i) - Z * r1i * np.sum(a * ga, axis=1)
        lap2 = A * (0.25 * Z * Z - Z * r2i) - Z * r2i * np.sum(b * gb, axis=1)
        return rho * (lap1 + lap2)


class HarmonicPair(WaveFunction):
    """Harmonically confined pair: Gaussian * (z1 - z2), optionally * (1 + beta r12).

    With beta = 1/4 and omega = 1/4 the correlated form is the interacting
    pair's exact eigenstate with energy 5/4.
    """

    structure_options = ("explicit_form", "product_with_factor")
    family = "harmonic"
    n_particles = 2

    def __init__(self, omega: float = 0.25, correlated: bool = False, beta: float = 0.25):
        if omega <= 0:
            raise ValueError("omega must be positive")
        self.omega = float(omega)
        self.correlated = bool(correlated)
        self.beta = float(beta)
        self.structure = "product_with_factor" if correlated else "explicit_form"
        self.parameters = {"omega": self.omega, "correlated": correlated, "beta": beta}

    def _parts(self, x: np.ndarray):
        G = np.exp(-0.5 * self.omega * np.sum(x * x, axis=1))
        B = x[:, 2] - x[:, 5]
        d = x[:, 0:3] - x[:, 3:6]
        r12 = np.linalg.norm(d, axis=1)
        return G, B, d, r12

    def values(self, x: np.ndarray) -> np.ndarray:
        G, B, _, r12 = self._parts(x)
        v = G * B
        if self.correlated:
            v = v * (1.0 + self.beta * r12)
        return v

    def _grad0(self, x, G, B):
        out = -self.omega * x * (G * B)[:, None]
        out[:, 2] += G
        out[:, 5] -= G
        return out

    def gradients(self, x: np.ndarray) -> np.ndarray:
        G, B, d, r12 = self._parts(x)
        g0 = self._grad0(x, G, B)
        if not self.correlated:
            return g0
        J = 1.0 + self.beta * r12
        ri = np.where(r12 > 0, 1.0 / np.maximum(r12, 1e-300), 0.0)
        gJ = np.concatenate([d * ri[:, None], -d * ri[:, None]], axis=1) * self.beta
        return g0 * J[:, None] + (G * B)[:, None] * gJ

    def laplacians(self, x: np.ndarray) -> np.ndarray:
        G, B, d, r12 = self._parts(x)
        S = np.sum(x * x, axis=1)
        lap0 = G * B * (self.omega ** 2 * S - 8.0 * self.omega)
        if not self.correlated:
            return lap0
        J = 1.0 + self.beta * r12
        ri = np.where(r12 > 0, 1.0 / np.maximum(r12, 1e-300), 0.0)
        g0 = self._grad0(x, G, B)
        gJ = np.concatenate([d * ri[:, None], -d * ri[:, None]], axis=1) * self.beta
        cross = 2.0 * np.sum(g0 * gJ, axis=1)
        lapJ = 4.0 * self.beta * ri
        return lap0 * J + cross + G * B * lapJ


class Scaled(WaveFunction):
    """Constant multiple of a base model (nda quantities are ratios)."""

    def __init__(self, c: float, base: WaveFunction):
        if c == 0:
            raise ValueError("scale must be nonzero")
        self.c = float(c)
        self.base = base
        self.n_particles = base.n_particles
        self.family = base.family
        self.structure = base.structure
        self.parameters = dict(base.parameters)

    def values(self, x):
        return self.c * self.base.values(x)

    def gradients(self, x):
        return self.c * self.base.gradients(x)

    def laplacians(self, x):
        return self.c * self.base.laplacians(x)
