"""Named catalog states: models, exact reference values, node parametrizations.

Each :class:`StateSpec` bundles a wave-function model with

* exact reference values (rationals where they exist, kept as
  :class:`fractions.Fraction` so identities can be checked exactly),
* the Hamiltonian it is an eigenstate of (noninteracting Coulomb atoms for
  the atomic entries; the harmonic pair for the trap entries),
* a normalized reference density ``g`` used by ratio and level-set
  estimators, and
* where the node is known analytically, a :class:`NodeParametrization`
  whose ``measure_map`` is exact for that geometry.

Surface measures (all verified against deterministic quadrature in the
test-suite):

==================  =========================================================
kind                parameters -> measure factor
==================  =========================================================
coordinate_plane    (s, phi) polar in the z=0 plane; dS = s ds dphi
equal_radii         (r, n1, n2); dS = sqrt(2) r^4 dr dn1 dn2
relative_plane      (x1, y1, x2, y2, z); dS = sqrt(2) dx1 dy1 dx2 dy2 dz
azimuth_lock        (branch, r1, t1, r2, t2, alpha): both azimuths locked to
                    a common angle; dS = sqrt(s1^2+s2^2) r1 r2 dr dtheta ...
perpendicular       one direction confined to the circle orthogonal to a
                    reference vector; coarea factor |grad g| / slope
paired_radial       two equal-radii sheets (one per spin channel) with the
                    other channel's electrons as free spectators
implicit_graph      node solved for one Cartesian coordinate; factor
                    |grad Psi| / |dPsi/du| (graph surface measure)
determinant_zero    implicit marker, no parametrization
==================  =========================================================
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from fractions import Fraction
from math import pi, sqrt
from typing import Callable, Optional

import numpy as np

from . import wavefunctions as wf
from .hamiltonians import HamiltonianSpec, coulomb_atom, harmonic_pair
from .reference import SubshellParams, subshell_kin_nda, subshell_pot_nda, \
    subshell_total, harmonic_reference

__all__ = [
    "ReferenceDensity",
    "NodeParametrization",
    "StateSpec",
    "catalog_list",
    "get_state",
    "subshell_family",
    "node_parametrization",
    "catalog_to_json",
]


# --------------------------------------------------------------------------
# reference densities (exactly normalized; used by ratio/level-set estimators)


def _uniform_sphere(rng: np.random.Generator, n: int) -> np.ndarray:
    v = rng.standard_normal((n, 3))
    return v / np.linalg.norm(v, axis=1, keepdims=True)


@dataclass(frozen=True)
class ReferenceDensity:
    """Product density g: exponentials exp(-a r) for Coulomb states,
    isotropic Gaussians exp(-omega r^2 / 2) for harmonic states."""

    family: str
    n_particles: int
    a: float = 0.0
    omega: float = 0.0

    def sample(self, rng: np.random.Generator, n: int) -> np.ndarray:
        cols = []
        for _ in range(self.n_particles):
            if self.family == "coulomb":
                r = rng.gamma(3.0, 1.0 / self.a, size=n)
                cols.append(_uniform_sphere(rng, n) * r[:, None])
            else:
                cols.append(rng.standard_normal((n, 3)) / sqrt(self.omega))
        return np.concatenate(cols, axis=1)

    def pdf(self, x: np.ndarray) -> np.ndarray:
        pos = x.reshape(x.shape[0], self.n_particles, 3)
        if self.family == "coulomb":
            r = np.linalg.norm(pos, axis=2)
            c = (self.a ** 3 / (8.0 * pi)) ** self.n_particles
            return c * np.exp(-self.a * np.sum(r, axis=1))
        c = (self.omega / (2.0 * pi)) ** (1.5 * self.n_particles)
        return c * np.exp(-0.5 * self.omega * np.sum(x * x, axis=1))


# --------------------------------------------------------------------------
# node parametrizations


@dataclass(frozen=True)
class NodeParametrization:
    """Exact parametrization of the nodal set.

    ``measure_map(params)`` maps an (m, n_params) array of surface
    parameters to configurations (m, 3N) on the node together with the local
    surface measure factor dS/dparams.  ``sample(rng, n)`` draws importance
    points so that mean(w * h(R)) estimates the surface integral of h.
    """

    kind: str
    description: str
    n_params: int
    measure_map: Optional[Callable] = None
    sample: Optional[Callable] = None


IMPLICIT_MARKER = NodeParametrization(
    kind="determinant_zero",
    description="node known only implicitly as the zero set of the model",
    n_params=0,
)


def node_parametrization(state: "StateSpec") -> NodeParametrization:
    """The state's analytic node parametrization, or the implicit marker."""
    if state.node_param is not None:
        return state.node_param
    return IMPLICIT_MARKER


# ---- gamma radial helpers (shape k, rate Z/2 unless noted)

def _gamma_pdf(r, shape, scale):
    from scipy.special import gammaln
    return np.exp((shape - 1) * np.log(r) - r / scale
                  - gammaln(shape) - shape * np.log(scale))


def _plane_param(Z: float) -> NodeParametrization:
    # single electron, node z = 0
    def measure_map(params):
        s, phi = params[:, 0], params[:, 1]
        coords = np.stack([s * np.cos(phi), s * np.sin(phi), np.zeros_like(s)], axis=1)
        return coords, s

    def sample(rng, n):
        s = rng.gamma(2.0, 2.0 / Z, size=n)
        phi = rng.uniform(0.0, 2.0 * pi, size=n)
        coords, factor = measure_map(np.stack([s, phi], axis=1))
        q = _gamma_pdf(s, 2.0, 2.0 / Z) / (2.0 * pi)
        return coords, factor / q

    return NodeParametrization(
        kind="coordinate_plane",
        description="z = 0 plane in polar coordinates (s, phi); dS = s ds dphi",
        n_params=2,
        measure_map=measure_map,
        sample=sample,
    )


def _equal_radii_param(Z: float) -> NodeParametrization:
    # two s-orbital electrons, node r1 = r2; params (r, n1(2), n2(2)) as angles
    def measure_map(params):
        r = params[:, 0]
        n1 = _angles_to_unit(params[:, 1], params[:, 2])
        n2 = _angles_to_unit(params[:, 3], params[:, 4])
        coords = np.concatenate([n1 * r[:, None], n2 * r[:, None]], axis=1)
        factor = sqrt(2.0) * r ** 4 * np.sin(params[:, 1]) * np.sin(params[:, 3])
        return coords, factor

    def sample(rng, n):
        r = rng.gamma(6.0, 2.0 / (3.0 * Z), size=n)
        n1 = _uniform_sphere(rng, n)
        n2 = _uniform_sphere(rng, n)
        coords = np.concatenate([n1 * r[:, None], n2 * r[:, None]], axis=1)
        factor = sqrt(2.0) * r ** 4
        q = _gamma_pdf(r, 6.0, 2.0 / (3.0 * Z)) / (4.0 * pi) ** 2
        return coords, factor / q

    return NodeParametrization(
        kind="equal_radii",
        description="r1 = r2 sheet; dS = sqrt(2) r^4 dr dn1 dn2",
        n_params=5,
        measure_map=measure_map,
        sample=sample,
    )


def _angles_to_unit(theta, phi):
    st = np.sin(theta)
    return np.stack([st * np.cos(phi), st * np.sin(phi), np.cos(theta)], axis=1)


def _relative_plane_param(omega: float) -> NodeParametrization:
    # harmonic pair, node z1 = z2; params (x1, y1, x2, y2, z)
    def measure_map(params):
        x1, y1, x2, y2, z = (params[:, i] for i in range(5))
        coords = np.stack([x1, y1, z, x2, y2, z], axis=1)
        return coords, np.full(len(z), sqrt(2.0))

    def sample(rng, n):
        xy = rng.standard_normal((n, 4)) / sqrt(omega)
        z = rng.standard_normal(n) / sqrt(2.0 * omega)
        params = np.concatenate([xy, z[:, None]], axis=1)
        coords, factor = measure_map(params)
        q = ((omega / (2.0 * pi)) ** 2 * sqrt(omega / pi)
             * np.exp(-0.5 * omega * np.sum(xy * xy, axis=1) - omega * z * z))
        return coords, factor / q

    return NodeParametrization(
        kind="relative_plane",
        description="z1 = z2 plane; dS = sqrt(2) dx1 dy1 dx2 dy2 dz",
        n_params=5,
        measure_map=measure_map,
        sample=sample,
    )


def _azimuth_lock_param(Z: float, coupling: str) -> NodeParametrization:
    # two 2p electrons; cross form (x1 y2 - x2 y1) vanishes when the azimuths
    # coincide mod pi, plus form (x1 y2 + x2 y1) when phi2 = -phi1 mod pi.
    # params: (branch, r1, theta1, r2, theta2, alpha)
    def measure_map(params):
        b, r1, t1, r2, t2, alpha = (params[:, i] for i in range(6))
        s1, z1 = r1 * np.sin(t1), r1 * np.cos(t1)
        s2, z2 = r2 * np.sin(t2), r2 * np.cos(t2)
        phi1 = alpha
        phi2 = alpha + b * pi if coupling == "cross" else -alpha + b * pi
        coords = np.stack([s1 * np.cos(phi1), s1 * np.sin(phi1), z1,
                           s2 * np.cos(phi2), s2 * np.sin(phi2), z2], axis=1)
        # dS in (s, z) coordinates is sqrt(s1^2+s2^2); polar substitution
        # (s,z) -> (r,theta) contributes r1 r2
        factor = np.sqrt(s1 ** 2 + s2 ** 2) * r1 * r2
        return coords, factor

    def sample(rng, n):
        b = rng.integers(0, 2, size=n).astype(float)
        r1 = rng.gamma(3.0, 2.0 / Z, size=n)
        r2 = rng.gamma(3.0, 2.0 / Z, size=n)
        t1 = rng.uniform(0.0, pi, size=n)
        t2 = rng.uniform(0.0, pi, size=n)
        alpha = rng.uniform(0.0, 2.0 * pi, size=n)
        params = np.stack([b, r1, t1, r2, t2, alpha], axis=1)
        coords, factor = measure_map(params)
        q = (0.5 * _gamma_pdf(r1, 3.0, 2.0 / Z) * _gamma_pdf(r2, 3.0, 2.0 / Z)
             / (pi * pi * 2.0 * pi))
        return coords, factor / q

    return NodeParametrization(
        kind="azimuth_lock",
        description="azimuths locked (two branches); dS = sqrt(s1^2+s2^2) "
                    "ds1 dz1 ds2 dz2 dalpha",
        n_params=6,
        measure_map=measure_map,
        sample=sample,
    )


def _orthonormal_frame(u: np.ndarray):
    """Two unit vectors spanning the plane orthogonal to each row of u."""
    ref = np.where((np.abs(u[:, 2]) < 0.9)[:, None],
                   np.tile([0.0, 0.0, 1.0], (len(u), 1)),
                   np.tile([1.0, 0.0, 0.0], (len(u), 1)))
    e1 = ref - np.sum(ref * u, axis=1, keepdims=True) * u
    e1 /= np.linalg.norm(e1, axis=1, keepdims=True)
    e2 = np.cross(u, e1)
    return e1, e2


def _perpendicular_param_2e(Z: float) -> NodeParametrization:
    # 1S_2p2: node is rhat1 . rhat2 = 0; params (r1, r2, theta2, phi2, chi)
    def measure_map(params):
        r1, r2, t2, p2, chi = (params[:, i] for i in range(5))
        n2 = _angles_to_unit(t2, p2)
        e1, e2 = _orthonormal_frame(n2)
        n1 = np.cos(chi)[:, None] * e1 + np.sin(chi)[:, None] * e2
        coords = np.concatenate([n1 * r1[:, None], n2 * r2[:, None]], axis=1)
        # coarea: |grad(r1.r2)| / slope * volume jacobian
        factor = np.sqrt(r1 ** 2 + r2 ** 2) * r1 * r2 * np.sin(t2)
        return coords, factor

    def sample(rng, n):
        r1 = rng.gamma(3.0, 2.0 / Z, size=n)
        r2 = rng.gamma(3.0, 2.0 / Z, size=n)
        n2 = _uniform_sphere(rng, n)
        chi = rng.uniform(0.0, 2.0 * pi, size=n)
        e1, e2 = _orthonormal_frame(n2)
        n1 = np.cos(chi)[:, None] * e1 + np.sin(chi)[:, None] * e2
        coords = np.concatenate([n1 * r1[:, None], n2 * r2[:, None]], axis=1)
        factor = np.sqrt(r1 ** 2 + r2 ** 2) * r1 * r2
        q = (_gamma_pdf(r1, 3.0, 2.0 / Z) * _gamma_pdf(r2, 3.0, 2.0 / Z)
             / (4.0 * pi * 2.0 * pi))
        return coords, factor / q

    return NodeParametrization(
        kind="perpendicular_directions",
        description="rhat1 . rhat2 = 0; dS = sqrt(r1^2+r2^2) r1 r2 "
                    "dr1 dr2 dn2 dchi",
        n_params=5,
        measure_map=measure_map,
        sample=sample,
    )


def _pair_vector(Z: float, ra, na, rb, nb):
    """v = phi_1s(ra) rho(rb) rb nb - phi_1s(rb) rho(ra) ra na  (each row 3-vec)."""
    beta = np.exp(-Z * ra - 0.5 * Z * rb) * rb
    alpha = np.exp(-Z * rb - 0.5 * Z * ra) * ra
    return beta[:, None] * nb - alpha[:, None] * na


def _perpendicular_param_4e(Z: float, model: wf.WaveFunction) -> NodeParametrization:
    # 1S_1s2_2p2: Psi = v_up . v_down with v as in _pair_vector; the node is
    # where the two channel vectors are orthogonal.  One down-channel
    # direction is solved onto the circle n . u = c -- always the one whose
    # radial coefficient (gamma for electron 3, delta for electron 4) is
    # larger, so |c| <= 1 holds for every draw and, crucially, the coarea
    # divisor max(gamma, delta) * |v_up| never carries the exponentially
    # small coefficient.  Solving a fixed electron instead makes the
    # importance weight grow like exp(+Z r / 2) in the opposite channel's
    # tail and the estimator's variance diverges.
    def _build(r1, n1, r2, n2, r3, r4, nf, chi):
        m = len(r1)
        v_up = _pair_vector(Z, r1, n1, r2, n2)
        vu = np.linalg.norm(v_up, axis=1)
        ok = vu > 1e-290
        u = np.where(ok[:, None], v_up / np.maximum(vu, 1e-290)[:, None],
                     np.tile([0.0, 0.0, 1.0], (m, 1)))
        gamma = np.exp(-Z * r4 - 0.5 * Z * r3) * r3
        delta = np.exp(-Z * r3 - 0.5 * Z * r4) * r4
        hi = np.maximum(gamma, delta)
        c = np.minimum(gamma, delta) * np.sum(nf * u, axis=1) \
            / np.maximum(hi, 1e-290)
        e1, e2 = _orthonormal_frame(u)
        sin_t = np.sqrt(np.maximum(1.0 - c * c, 0.0))
        ns = (c[:, None] * u
              + sin_t[:, None] * (np.cos(chi)[:, None] * e1
                                  + np.sin(chi)[:, None] * e2))
        solve3 = (gamma >= delta)[:, None]
        n3 = np.where(solve3, ns, nf)
        n4 = np.where(solve3, nf, ns)
        coords = np.concatenate([n1 * r1[:, None], n2 * r2[:, None],
                                 n3 * r3[:, None], n4 * r4[:, None]], axis=1)
        grad_norm = np.linalg.norm(model.gradients(coords), axis=1)
        slope = hi * vu  # |d(Psi)/d(cos angle between the solved dir and u)|
        jac = (r1 * r2 * r3 * r4) ** 2
        factor = np.where(ok, grad_norm / np.maximum(slope, 1e-290) * jac, 0.0)
        return coords, factor

    def measure_map(params):
        r1, t1, p1, r2, t2, p2, r3, r4, tf, pf, chi = (params[:, i] for i in range(11))
        coords, factor = _build(r1, _angles_to_unit(t1, p1),
                                r2, _angles_to_unit(t2, p2),
                                r3, r4, _angles_to_unit(tf, pf), chi)
        return coords, factor * np.sin(t1) * np.sin(t2) * np.sin(tf)

    def sample(rng, n):
        r = [rng.gamma(3.0, 2.0 / Z, size=n) for _ in range(4)]
        dirs = [_uniform_sphere(rng, n) for _ in range(3)]
        chi = rng.uniform(0.0, 2.0 * pi, size=n)
        coords, factor = _build(r[0], dirs[0], r[1], dirs[1], r[2], r[3],
                                dirs[2], chi)
        q = np.prod([_gamma_pdf(ri, 3.0, 2.0 / Z) for ri in r], axis=0) \
            / ((4.0 * pi) ** 3 * 2.0 * pi)
        return coords, factor / q

    return NodeParametrization(
        kind="perpendicular_directions",
        description="channel vectors orthogonal: v_up . v_down = 0; the "
                    "down-channel direction with the larger radial "
                    "coefficient is solved onto the circle n . u = c, so "
                    "every fiber meets the node exactly once",
        n_params=11,
        measure_map=measure_map,
        sample=sample,
    )


def _paired_radial_param(Z: float, model: wf.WaveFunction) -> NodeParametrization:
    # 1S_1s2_2s2: Psi = D(r1,r2) D(r3,r4) with radial 1s/2s determinants;
    # node = {r1 = r2} union {r3 = r4}; the off-sheet pair are spectators.
    def _build(b, r, na, nb, spect):
        m = len(r)
        sheet = np.concatenate([na * r[:, None], nb * r[:, None]], axis=1)
        coords = np.where((b < 0.5)[:, None],
                          np.concatenate([sheet, spect], axis=1),
                          np.concatenate([spect, sheet], axis=1))
        factor = sqrt(2.0) * r ** 4
        return coords, factor

    def measure_map(params):
        b, r, ta, pa, tb, pb = (params[:, i] for i in range(6))
        spect = params[:, 6:12]
        coords, factor = _build(b, r, _angles_to_unit(ta, pa),
                                _angles_to_unit(tb, pb), spect)
        return coords, factor * np.sin(ta) * np.sin(tb)

    def sample(rng, n):
        b = rng.integers(0, 2, size=n).astype(float)
        r = rng.gamma(6.0, 2.0 / (3.0 * Z), size=n)
        na, nb = _uniform_sphere(rng, n), _uniform_sphere(rng, n)
        rs = [rng.gamma(3.0, 2.0 / Z, size=n) for _ in range(2)]
        spect = np.concatenate(
            [_uniform_sphere(rng, n) * rs[i][:, None] for i in range(2)], axis=1)
        coords, factor = _build(b, r, na, nb, spect)
        # spectator pair is integrated over d^3r d^3r: its sampling density
        # in space is gamma_pdf(r) / (4 pi r^2) per electron
        q = (0.5 * _gamma_pdf(r, 6.0, 2.0 / (3.0 * Z)) / (4.0 * pi) ** 2
             * _gamma_pdf(rs[0], 3.0, 2.0 / Z) / (4.0 * pi * rs[0] ** 2)
             * _gamma_pdf(rs[1], 3.0, 2.0 / Z) / (4.0 * pi * rs[1] ** 2))
        return coords, factor / q

    return NodeParametrization(
        kind="paired_radial_sheets",
        description="two equal-radii sheets (one per spin channel), "
                    "dS = sqrt(2) r^4 dr dna dnb d^3r_s1 d^3r_s2 each",
        n_params=12,
        measure_map=measure_map,
        sample=sample,
    )


def _implicit_graph_param(Z: float, model: wf.WaveFunction) -> NodeParametrization:
    # 3P_1s2p: phi_1s(r1) rho(r2) z2 = phi_1s(r2) rho(r1) z1.  Multiplying by
    # exp(Z(r1+r2)) the node reads h(z2) = z2 exp(Z r2 / 2) = z1 exp(Z r1 / 2),
    # and h is strictly increasing in z2, so the node is a global graph
    # z2 = zeta(x1, y1, z1, x2, y2).
    def _solve_z2(x1, y1, z1, x2, y2):
        r1 = np.sqrt(x1 ** 2 + y1 ** 2 + z1 ** 2)
        s2sq = x2 ** 2 + y2 ** 2
        K = np.clip(z1 * np.exp(0.5 * Z * r1), -1e300, 1e300)
        # |root| <= min(|K|, (2/Z) log(1+|K|) + 1): h(b) >= b(1+|K|) >= |K|
        # for b >= 1, so the tighter bound still brackets without overflow
        b = np.minimum(np.abs(K), (2.0 / Z) * np.log1p(np.abs(K)) + 1.0)
        lo = np.where(K < 0.0, -b, 0.0)
        hi = np.where(K < 0.0, 0.0, b)
        for _ in range(90):  # bisection: deterministic, vectorized
            mid = 0.5 * (lo + hi)
            h = mid * np.exp(0.5 * Z * np.sqrt(s2sq + mid * mid))
            take_hi = h < K
            lo = np.where(take_hi, mid, lo)
            hi = np.where(take_hi, hi, mid)
        return 0.5 * (lo + hi)

    def _build(x1, y1, z1, x2, y2):
        z2 = _solve_z2(x1, y1, z1, x2, y2)
        coords = np.stack([x1, y1, z1, x2, y2, z2], axis=1)
        grads = model.gradients(coords)
        gnorm = np.linalg.norm(grads, axis=1)
        dz2 = np.abs(grads[:, 5])
        factor = gnorm / np.maximum(dz2, 1e-290)
        return coords, factor

    def measure_map(params):
        return _build(*(params[:, i] for i in range(5)))

    def sample(rng, n):
        r1 = rng.gamma(3.0, 2.0 / Z, size=n)
        n1 = _uniform_sphere(rng, n) * r1[:, None]
        s2 = rng.gamma(2.0, 2.0 / Z, size=n)
        p2 = rng.uniform(0.0, 2.0 * pi, size=n)
        x2, y2 = s2 * np.cos(p2), s2 * np.sin(p2)
        coords, factor = _build(n1[:, 0], n1[:, 1], n1[:, 2], x2, y2)
        jac = r1 ** 2 * s2
        q = (_gamma_pdf(r1, 3.0, 2.0 / Z) * _gamma_pdf(s2, 2.0, 2.0 / Z)
             / (4.0 * pi * 2.0 * pi))
        return coords, factor * jac / q

    return NodeParametrization(
        kind="implicit_graph",
        description="node solved for z2 (monotone 1D root); "
                    "dS = |grad Psi|/|dPsi/dz2| dx1 dy1 dz1 dx2 dy2",
        n_params=5,
        measure_map=measure_map,
        sample=sample,
    )


# --------------------------------------------------------------------------
# state specifications


@dataclass(frozen=True)
class StateSpec:
    """A named catalog entry with exact references where known."""

    name: str
    model: Optional[wf.WaveFunction]
    parameters: dict
    exact_total_energy: Optional[Fraction | float]
    exact_nda: Optional[dict]        # {"kin": ..., "pot": ...}
    node_param: Optional[NodeParametrization]
    exact_standard: Optional[dict] = None   # {"kin": ..., "pot": ...}
    reference_density: Optional[ReferenceDensity] = None
    proposal_step: float = 0.5

    def hamiltonian(self) -> HamiltonianSpec:
        """The Hamiltonian this state is catalogued with: noninteracting
        Coulomb atom for atomic entries; harmonic pair with the catalogued
        g0 for trap entries (harmonic_mixed pairs the noninteracting state
        with the interacting Hamiltonian on purpose)."""
        if "Z" in self.parameters:
            return coulomb_atom(float(self.parameters["Z"]), ee=False)
        return harmonic_pair(float(self.parameters["omega"]),
                             float(self.parameters.get("g0", 0.0)))


def _zsq(coef: Fraction, Z) -> Fraction | float:
    if isinstance(Z, (int, Fraction)):
        return coef * Fraction(Z) ** 2
    return float(coef) * Z ** 2


def _coulomb_density(Z, n, rate=0.75):
    # Per-electron radial decay a = rate * Z.  The rate is chosen per state so
    # that (i) the set {|Psi| < eps} is dominated by the nodal slab rather than
    # the large-r tail (needs a >= mean orbital decay rate) and (ii) |Psi|/g
    # keeps finite variance (needs a < twice the slowest orbital decay rate).
    return ReferenceDensity(family="coulomb", n_particles=n, a=rate * float(Z))


def _orb(kind, Z, **kw):
    return wf.Orbital(kind=kind, scale=float(Z), **kw)


def _det_state(Z, orbitals, electrons):
    term = wf.Term(coeff=1.0, blocks=(wf.DetBlock(orbitals=orbitals,
                                                  electrons=electrons),))
    n = len(electrons)
    return wf.SlaterProduct([term], n_particles=n, family="coulomb",
                            parameters={"Z": float(Z)})


def _build_2P_2p(Z):
    model = _det_state(Z, (_orb("hydrogenic_2p", Z, axis="z"),), (0,))
    return StateSpec(
        name="2P_2p", model=model, parameters={"Z": Z},
        exact_total_energy=_zsq(Fraction(-1, 8), Z),
        exact_nda={"kin": _zsq(Fraction(1, 24), Z), "pot": _zsq(Fraction(-1, 6), Z)},
        exact_standard={"kin": _zsq(Fraction(1, 8), Z), "pot": _zsq(Fraction(-1, 4), Z)},
        node_param=_plane_param(float(Z)),
        reference_density=_coulomb_density(Z, 1),
        proposal_step=4.0 / float(Z),
    )


def _build_3S_1s2s(Z):
    model = _det_state(Z, (_orb("hydrogenic_1s", Z), _orb("hydrogenic_2s", Z)), (0, 1))
    return StateSpec(
        name="3S_1s2s", model=model, parameters={"Z": Z},
        exact_total_energy=_zsq(Fraction(-5, 8), Z),
        exact_nda={"kin": _zsq(Fraction(10, 221), Z),
                   "pot": _zsq(Fraction(-1185, 1768), Z)},
        exact_standard={"kin": _zsq(Fraction(5, 8), Z), "pot": _zsq(Fraction(-5, 4), Z)},
        node_param=_equal_radii_param(float(Z)),
        reference_density=_coulomb_density(Z, 2, rate=0.875),
        proposal_step=2.0 / float(Z),
    )


def _build_3P_1s2p(Z):
    model = _det_state(Z, (_orb("hydrogenic_1s", Z),
                           _orb("hydrogenic_2p", Z, axis="z")), (0, 1))
    return StateSpec(
        name="3P_1s2p", model=model, parameters={"Z": Z},
        exact_total_energy=_zsq(Fraction(-5, 8), Z),
        exact_nda={"kin": _zsq(Fraction(1, 20), Z), "pot": _zsq(Fraction(-27, 40), Z)},
        exact_standard={"kin": _zsq(Fraction(5, 8), Z), "pot": _zsq(Fraction(-5, 4), Z)},
        node_param=_implicit_graph_param(float(Z), model),
        reference_density=_coulomb_density(Z, 2, rate=0.5),
        proposal_step=2.0 / float(Z),
    )


def _build_1S_1s2_2s2(Z):
    orbs = (_orb("hydrogenic_1s", Z), _orb("hydrogenic_2s", Z))
    term = wf.Term(coeff=1.0, blocks=(
        wf.DetBlock(orbitals=orbs, electrons=(0, 1)),
        wf.DetBlock(orbitals=orbs, electrons=(2, 3)),
    ))
    model = wf.SlaterProduct([term], n_particles=4, family="coulomb",
                             parameters={"Z": float(Z)})
    return StateSpec(
        name="1S_1s2_2s2", model=model, parameters={"Z": Z},
        exact_total_energy=_zsq(Fraction(-5, 4), Z),
        exact_nda={"kin": _zsq(Fraction(20, 221), Z),
                   "pot": _zsq(Fraction(-1185, 884), Z)},
        exact_standard={"kin": _zsq(Fraction(5, 4), Z), "pot": _zsq(Fraction(-5, 2), Z)},
        node_param=_paired_radial_param(float(Z), model),
        reference_density=_coulomb_density(Z, 4, rate=0.5),
        proposal_step=1.5 / float(Z),
    )


def _build_1S_1s2_2p2(Z):
    terms = []
    for axis in ("x", "y", "z"):
        orbs = (_orb("hydrogenic_1s", Z), _orb("hydrogenic_2p", Z, axis=axis))
        terms.append(wf.Term(coeff=1.0, blocks=(
            wf.DetBlock(orbitals=orbs, electrons=(0, 1)),
            wf.DetBlock(orbitals=orbs, electrons=(2, 3)),
        )))
    model = wf.SlaterProduct(terms, n_particles=4, family="coulomb",
                             parameters={"Z": float(Z)})
    return StateSpec(
        name="1S_1s2_2p2", model=model, parameters={"Z": Z},
        exact_total_energy=_zsq(Fraction(-5, 4), Z),
        exact_nda={"kin": _zsq(Fraction(1, 10), Z), "pot": _zsq(Fraction(-27, 20), Z)},
        exact_standard={"kin": _zsq(Fraction(5, 4), Z), "pot": _zsq(Fraction(-5, 2), Z)},
        node_param=_perpendicular_param_4e(float(Z), model),
        reference_density=_coulomb_density(Z, 4, rate=0.5),
        proposal_step=1.5 / float(Z),
    )


def _build_2p2(Z, coupling, name):
    model = wf.Coupled2p2(coupling=coupling, Z=float(Z))
    if coupling == "cross":
        node = _azimuth_lock_param(float(Z), "cross")
    elif coupling == "plus":
        node = _azimuth_lock_param(float(Z), "plus")
    else:
        node = _perpendicular_param_2e(float(Z))
    return StateSpec(
        name=name, model=model, parameters={"Z": Z},
        exact_total_energy=_zsq(Fraction(-1, 4), Z),
        exact_nda={"kin": _zsq(Fraction(1, 12), Z), "pot": _zsq(Fraction(-1, 3), Z)},
        exact_standard={"kin": _zsq(Fraction(1, 4), Z), "pot": _zsq(Fraction(-1, 2), Z)},
        node_param=node,
        reference_density=_coulomb_density(Z, 2),
        proposal_step=2.5 / float(Z),
    )


def _harmonic_density(omega):
    return ReferenceDensity(family="harmonic", n_particles=2, omega=float(omega))


def _build_harmonic(omega, which):
    om = float(omega)
    if which == "noninteracting":
        model = wf.HarmonicPair(omega=om, correlated=False)
        kin = omega / 2 if isinstance(omega, Fraction) else om / 2
        pot = 7 * omega / 2 if isinstance(omega, Fraction) else 3.5 * om
        return StateSpec(
            name="harmonic_noninteracting", model=model,
            parameters={"omega": omega, "g0": 0},
            exact_total_energy=4 * omega,
            exact_nda={"kin": kin, "pot": pot},
            exact_standard={"kin": 2 * omega, "pot": 2 * omega},
            node_param=_relative_plane_param(om),
            reference_density=_harmonic_density(om),
            proposal_step=1.25 / sqrt(om),
        )
    if which == "exact":
        if abs(om - 0.25) > 1e-12:
            raise ValueError("harmonic_exact is catalogued at omega = 1/4, g0 = 1")
        model = wf.HarmonicPair(omega=om, correlated=True, beta=0.25)
        ref = harmonic_reference("b_exact", om, 1.0)
        return StateSpec(
            name="harmonic_exact", model=model,
            parameters={"omega": omega, "g0": 1},
            exact_total_energy=Fraction(5, 4),
            exact_nda={"kin": ref["kin_nda"], "pot": ref["pot_nda"]},
            node_param=_relative_plane_param(om),
            reference_density=_harmonic_density(om),
            proposal_step=1.25 / sqrt(om),
        )
    # mixed: the noninteracting state paired with the interacting Hamiltonian
    if abs(om - 0.25) > 1e-12:
        raise ValueError("harmonic_mixed is catalogued at omega = 1/4, g0 = 1")
    model = wf.HarmonicPair(omega=om, correlated=False)
    ref = harmonic_reference("c_mixed", om, 1.0)
    return StateSpec(
        name="harmonic_mixed", model=model,
        parameters={"omega": omega, "g0": 1},
        exact_total_energy=None,   # not an eigenstate of the paired Hamiltonian
        exact_nda={"kin": ref["kin_nda"], "pot": ref["pot_nda"]},
        node_param=_relative_plane_param(om),
        reference_density=_harmonic_density(om),
        proposal_step=1.25 / sqrt(om),
    )


_ATOMIC_BUILDERS = {
    "2P_2p": _build_2P_2p,
    "3S_1s2s": _build_3S_1s2s,
    "3P_1s2p": _build_3P_1s2p,
    "1S_1s2_2s2": _build_1S_1s2_2s2,
    "1S_1s2_2p2": _build_1S_1s2_2p2,
    "3P_2p2": lambda Z: _build_2p2(Z, "cross", "3P_2p2"),
    "1S_2p2": lambda Z: _build_2p2(Z, "dot", "1S_2p2"),
    "1D_2p2": lambda Z: _build_2p2(Z, "plus", "1D_2p2"),
}

_HARMONIC_NAMES = ("harmonic_noninteracting", "harmonic_exact", "harmonic_mixed")


def get_state(name: str, Z=Fraction(1), omega=Fraction(1, 4), g0=1) -> StateSpec:
    """Build a catalog state by name (Z for atomic states, omega/g0 for traps)."""
    if name in _ATOMIC_BUILDERS:
        return _ATOMIC_BUILDERS[name](Z)
    if name in _HARMONIC_NAMES:
        return _build_harmonic(omega, name.split("_", 1)[1])
    m = re.fullmatch(r"subshell_k(\d+)_l(\d+)", name)
    if m:
        return subshell_family(int(m.group(1)), int(m.group(2)), Z)
    raise KeyError(f"unknown catalog state {name!r}")


def catalog_list(Z=Fraction(1), omega=Fraction(1, 4)) -> list:
    """All named catalog states (subshell entries come from subshell_family)."""
    states = [b(Z) for b in _ATOMIC_BUILDERS.values()]
    states += [_build_harmonic(omega, w) for w in ("noninteracting", "exact", "mixed")]
    return states


def subshell_family(k: int, l: int, Z=Fraction(1)) -> StateSpec:
    """k electrons filling the l = n-1 subshell.

    Reference values are exact rationals for every (k, l); an evaluable model
    is attached for the cases the sampled estimators actually exercise
    (k = 1 with l <= 2, and the k = 2, l = 1 pair, which is the 3P_2p2 form).
    Higher-l entries are reference-only.
    """
    p = SubshellParams(k=k, l=l, Z=Fraction(Z))
    model = None
    node = None
    if k == 1 and l <= 2:
        model = _det_state(Z, (_orb("hydrogenic_general", Z, n=l + 1, l=l, m=l),), (0,))
    elif k == 2 and l == 1:
        model = wf.Coupled2p2(coupling="cross", Z=float(Z))
        node = _azimuth_lock_param(float(Z), "cross")
    return StateSpec(
        name=f"subshell_k{k}_l{l}", model=model, parameters={"Z": Z, "k": k, "l": l},
        exact_total_energy=subshell_total(p),
        exact_nda={"kin": subshell_kin_nda(p), "pot": subshell_pot_nda(p)},
        exact_standard={"kin": Fraction(k, 2 * (l + 1) ** 2) * Fraction(Z) ** 2,
                        "pot": Fraction(-k, (l + 1) ** 2) * Fraction(Z) ** 2},
        node_param=node,
        reference_density=_coulomb_density(Z, max(k, 1), rate=1.5 / (l + 1))
        if model is not None else None,
        proposal_step=(4.0 if k == 1 else 2.5) / float(Z),
    )


def _ref_str(v) -> str:
    if isinstance(v, Fraction):
        return f"{v.numerator}/{v.denominator}"
    return repr(float(v))


def catalog_to_json(states=None) -> str:
    """Export the catalog (names, parameters, references as "p/q" strings)."""
    states = catalog_list() if states is None else states
    out = []
    for s in states:
        entry = {
            "name": s.name,
            "parameters": {key: _ref_str(v) for key, v in s.parameters.items()},
            "exact_total_energy": None if s.exact_total_energy is None
            else _ref_str(s.exact_total_energy),
            "exact_nda": None if s.exact_nda is None
            else {key: _ref_str(v) for key, v in s.exact_nda.items()},
            "exact_standard": None if s.exact_standard is None
            else {key: _ref_str(v) for key, v in s.exact_standard.items()},
            "node_kind": node_parametrization(s).kind,
        }
        out.append(entry)
    return json.dumps(out, indent=2)
