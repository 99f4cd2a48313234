"""Monte Carlo estimators for the nodal-surface energy decomposition.

Shared conventions:

* every chain owns an RNG stream derived from (seed, stream tag, chain
  index), so results depend only on the seed and the chain count, never on
  how chains are scheduled across workers;
* NDA_THREADS > 1 runs contiguous chain groups on a thread pool; grouping
  is purely a scheduling choice (all per-step array operations are
  elementwise across chains) and does not enter any arithmetic;
* chains are combined by a plain mean; the quoted stderr comes from
  across-chain scatter when n_chains >= 8 and from 50-block blocking
  otherwise.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Optional, Sequence, Tuple

import numpy as np

from .catalog import StateSpec, node_parametrization
from .hamiltonians import HamiltonianSpec, potential_batch
from .quadrature import quadrature_oracle

__all__ = [
    "SamplerConfig",
    "NdaEstimate",
    "estimate_pot_nda",
    "estimate_kin_nda_surface",
    "estimate_kin_nda_shell",
    "estimate_abs_norm",
    "estimate_standard_expectations",
    "quadrature_estimate",
    "quadrature_oracle",
    "metropolis_samples",
]

_CHUNK = 2048
_BLOCKS = 50
_MASK64 = (1 << 64) - 1

# stream tags keep the estimators' random streams disjoint for a given seed
_TAG_POT = 11
_TAG_STD = 12
_TAG_ABS = 13
_TAG_SURFACE = 14
_TAG_SHELL = 15
_TAG_TOPOLOGY = 16


@dataclass(frozen=True)
class SamplerConfig:
    """Monte Carlo budget and reproducibility knobs.

    burn_in defaults to 10% of steps_per_chain; proposal_step defaults to
    the per-state tuned half-width carried by the StateSpec.
    epsilon_ladder applies to the delta-shell estimator only; when omitted
    the ladder is derived from the sampled |Psi| scale.
    """

    n_chains: int = 8
    steps_per_chain: int = 200_000
    burn_in: Optional[int] = None
    proposal_step: Optional[float] = None
    seed: int = 20260801
    epsilon_ladder: Optional[Tuple[float, ...]] = None

    def __post_init__(self):
        if self.n_chains < 1:
            raise ValueError("n_chains must be >= 1")
        if self.steps_per_chain < 2:
            raise ValueError("steps_per_chain must be >= 2")
        if self.burn_in is not None and not (
                0 <= self.burn_in < self.steps_per_chain):
            raise ValueError("burn_in must satisfy 0 <= burn_in < steps_per_chain")
        if self.proposal_step is not None and not self.proposal_step > 0.0:
            raise ValueError("proposal_step must be positive")
        if self.epsilon_ladder is not None:
            ladder = tuple(float(e) for e in self.epsilon_ladder)
            if len(ladder) < 2:
                raise ValueError("epsilon_ladder needs >= 2 entries for extrapolation")
            if any(e <= 0.0 for e in ladder) or any(
                    b >= a for a, b in zip(ladder, ladder[1:])):
                raise ValueError("epsilon_ladder must be positive and strictly decreasing")
            object.__setattr__(self, "epsilon_ladder", ladder)

    def resolved_burn_in(self) -> int:
        if self.burn_in is not None:
            return self.burn_in
        return self.steps_per_chain // 10


@dataclass(frozen=True)
class NdaEstimate:
    """One scalar estimate.  status is "ok", "warning: ...", or "unconverged"."""

    mean: float
    stderr: float
    n_samples: int
    n_chains: int
    seed: int
    method: str
    status: str = "ok"


# --------------------------------------------------------------------------
# chain scheduling


def _rng(seed: int, tag: int, chain: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence((seed & _MASK64, tag, chain)))


def _worker_count() -> int:
    raw = os.environ.get("NDA_THREADS", "").strip()
    if not raw:
        return 1
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _run_chain_groups(task: Callable, n_chains: int) -> None:
    """Run task(chain_indices) over a contiguous partition of the chains."""
    workers = min(_worker_count(), n_chains)
    bounds = np.linspace(0, n_chains, workers + 1).astype(int)
    groups = [list(range(a, b)) for a, b in zip(bounds[:-1], bounds[1:]) if b > a]
    if len(groups) == 1:
        task(groups[0])
        return
    with ThreadPoolExecutor(max_workers=len(groups)) as pool:
        for fut in [pool.submit(task, g) for g in groups]:
            fut.result()


def _stderr_from_chains(chain_means: np.ndarray,
                        block_sums: Optional[np.ndarray] = None,
                        block_counts: Optional[np.ndarray] = None) -> float:
    """Across-chain scatter for >= 8 chains, else pooled 50-block blocking."""
    C = chain_means.size
    if C >= 8:
        return float(np.std(chain_means, ddof=1) / np.sqrt(C))
    if block_sums is None:
        if C < 2:
            return 0.0
        return float(np.std(chain_means, ddof=1) / np.sqrt(C))
    ok = block_counts > 0
    bm = block_sums[ok] / block_counts[ok]
    if bm.size < 2:
        return 0.0
    return float(np.std(bm, ddof=1) / np.sqrt(bm.size))


# --------------------------------------------------------------------------
# Metropolis engine


def _metropolis(model, power: int, state: StateSpec, cfg: SamplerConfig,
                tag: int, collect: Callable) -> float:
    """Metropolis chains with stationary density |Psi|^power.

    collect(chain_indices, kept_step_index, x, raw_values) is invoked for
    every post-burn-in step with the group's current configurations
    (len(chains), 3N).  Returns the global acceptance rate.
    """
    density = state.reference_density
    if density is None:
        raise ValueError(f"state {state.name!r} has no reference density "
                         "to initialize chains")
    dim = 3 * model.n_particles
    steps = cfg.steps_per_chain
    burn = cfg.resolved_burn_in()
    if cfg.proposal_step is not None:
        step = cfg.proposal_step
    else:
        # |Psi|^2 is roughly a factor sqrt(2) narrower than |Psi| in every
        # direction; halving the tuned |Psi| step keeps the walk near the
        # diffusive optimum for both densities (measured, not derived).
        step = state.proposal_step * (0.5 if power == 2 else 1.0)
    accepted = np.zeros(cfg.n_chains, dtype=np.int64)

    def run_group(chains):
        rngs = [_rng(cfg.seed, tag, c) for c in chains]
        x = np.concatenate([density.sample(rng, 1) for rng in rngs], axis=0)
        v = model.values(x)
        t = np.abs(v) if power == 1 else v * v
        acc_group = np.zeros(len(chains), dtype=np.int64)
        done = 0
        while done < steps:
            m = min(_CHUNK, steps - done)
            noise = np.stack([rng.uniform(-step, step, size=(m, dim))
                              for rng in rngs])
            unif = np.stack([rng.random(m) for rng in rngs])
            for j in range(m):
                xp = x + noise[:, j, :]
                vp = model.values(xp)
                tp = np.abs(vp) if power == 1 else vp * vp
                acc = unif[:, j] * t < tp
                if acc.any():
                    x[acc] = xp[acc]
                    v = np.where(acc, vp, v)
                    t = np.where(acc, tp, t)
                acc_group += acc
                g = done + j
                if g >= burn:
                    collect(chains, g - burn, x, v)
            done += m
        accepted[np.asarray(chains)] = acc_group

    _run_chain_groups(run_group, cfg.n_chains)
    return float(accepted.sum()) / (cfg.n_chains * steps)


def _acceptance_status(rate: float) -> str:
    if 0.1 <= rate <= 0.9:
        return "ok"
    return f"warning: acceptance rate {rate:.3f} outside [0.1, 0.9]"


def metropolis_samples(state: StateSpec, cfg: SamplerConfig, thin: int = 1,
                       power: int = 1, tag: int = _TAG_TOPOLOGY) -> np.ndarray:
    """Thinned |Psi|^power-distributed configurations, stacked over chains.

    Returns an (n_kept_total, 3N) array; used by the topology module.
    """
    model = state.model
    if model is None:
        raise ValueError(f"state {state.name!r} has no evaluable model")
    burn = cfg.resolved_burn_in()
    kept_per_chain = (cfg.steps_per_chain - burn + thin - 1) // thin
    out = np.empty((cfg.n_chains, kept_per_chain, 3 * model.n_particles))

    def collect(chains, j, x, v):
        if j % thin == 0:
            out[np.asarray(chains), j // thin] = x

    _metropolis(model, power, state, cfg, tag, collect)
    return out.reshape(-1, out.shape[-1])


# --------------------------------------------------------------------------
# potential-energy estimators


def estimate_pot_nda(state: StateSpec, h: Optional[HamiltonianSpec] = None,
                     cfg: Optional[SamplerConfig] = None) -> NdaEstimate:
    """E_pot^nda: the |Psi|-weighted average of the potential.

    Non-finite potential values (coincident particles) are rejected and
    counted; they carry zero measure and occur only at floating-point
    coincidences.
    """
    cfg = cfg or SamplerConfig()
    model = state.model
    if model is None:
        raise ValueError(f"state {state.name!r} has no evaluable model")
    if h is None:
        h = state.hamiltonian()
    C = cfg.n_chains
    n_keep = cfg.steps_per_chain - cfg.resolved_burn_in()
    bsum = np.zeros((C, _BLOCKS))
    bcnt = np.zeros((C, _BLOCKS), dtype=np.int64)
    rejected = np.zeros(C, dtype=np.int64)

    def collect(chains, j, x, v):
        V = potential_batch(h, x)
        ok = np.isfinite(V)
        idx = np.asarray(chains)
        b = j * _BLOCKS // n_keep
        bsum[idx, b] += np.where(ok, V, 0.0)
        bcnt[idx, b] += ok
        rejected[idx] += ~ok

    rate = _metropolis(model, 1, state, cfg, _TAG_POT, collect)
    counts = bcnt.sum(axis=1)
    if (counts == 0).any():
        raise RuntimeError("a chain collected no finite potential samples")
    chain_means = bsum.sum(axis=1) / counts
    return NdaEstimate(
        mean=float(chain_means.mean()),
        stderr=_stderr_from_chains(chain_means, bsum, bcnt),
        n_samples=int(counts.sum()),
        n_chains=C,
        seed=cfg.seed,
        method="metropolis_abs_psi",
        status=_acceptance_status(rate),
    )


def estimate_standard_expectations(state: StateSpec,
                                   h: Optional[HamiltonianSpec] = None,
                                   cfg: Optional[SamplerConfig] = None,
                                   thin: int = 4) -> dict:
    """Standard quantum expectations <T> and <V> over the density Psi^2.

    The kinetic part uses the local kinetic energy -lap(Psi)/(2 Psi).
    Node-proximal points (|Psi| < 1e-14 |grad Psi|) and non-finite
    potentials are rejected and counted; both components use the same
    retained sample set.  Extends the method enumeration with
    "metropolis_psi_squared".

    The integrand (a Laplacian plus a gradient per configuration) costs far
    more than a Metropolis step, while successive configurations are
    strongly correlated; evaluating it only every `thin`-th kept step cuts
    the dominant cost with a negligible loss of statistical power as long
    as `thin` stays below the chain's autocorrelation time (tens of steps
    for every catalog state).
    """
    cfg = cfg or SamplerConfig()
    if thin < 1:
        raise ValueError("thin must be a positive integer")
    model = state.model
    if model is None:
        raise ValueError(f"state {state.name!r} has no evaluable model")
    if h is None:
        h = state.hamiltonian()
    C = cfg.n_chains
    n_keep = cfg.steps_per_chain - cfg.resolved_burn_in()
    bsum = np.zeros((2, C, _BLOCKS))          # 0: kin, 1: pot
    bcnt = np.zeros((C, _BLOCKS), dtype=np.int64)
    rejected = np.zeros(C, dtype=np.int64)

    def collect(chains, j, x, v):
        if j % thin:
            return
        V = potential_batch(h, x)
        grads = model.gradients(x)
        laps = model.laplacians(x)
        gnorm = np.linalg.norm(grads, axis=1)
        ok = np.isfinite(V) & (np.abs(v) >= 1e-14 * gnorm)
        safe = np.where(ok, v, 1.0)
        tloc = -0.5 * laps / safe
        idx = np.asarray(chains)
        b = j * _BLOCKS // n_keep
        bsum[0, idx, b] += np.where(ok, tloc, 0.0)
        bsum[1, idx, b] += np.where(ok, V, 0.0)
        bcnt[idx, b] += ok
        rejected[idx] += ~ok

    rate = _metropolis(model, 2, state, cfg, _TAG_STD, collect)
    counts = bcnt.sum(axis=1)
    if (counts == 0).any():
        raise RuntimeError("a chain collected no valid samples")
    status = _acceptance_status(rate)
    out = {}
    for slot, name in ((0, "kin"), (1, "pot")):
        chain_means = bsum[slot].sum(axis=1) / counts
        out[name] = NdaEstimate(
            mean=float(chain_means.mean()),
            stderr=_stderr_from_chains(chain_means, bsum[slot], bcnt),
            n_samples=int(counts.sum()),
            n_chains=C,
            seed=cfg.seed,
            method="metropolis_psi_squared",
            status=status,
        )
    return out


# --------------------------------------------------------------------------
# reference-ratio (independent-sample) estimators


def _iid_chain_means(n_chains: int, n_per_chain: int, seed: int, tag: int,
                     evaluate: Callable) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Per-chain means of evaluate(rng, m) -> (m,) weights, drawn iid.

    Returns (chain_means, block_sums, block_counts) for the stderr rules.
    """
    bsum = np.zeros((n_chains, _BLOCKS))
    bcnt = np.zeros((n_chains, _BLOCKS), dtype=np.int64)

    def run_group(chains):
        for c in chains:
            rng = _rng(seed, tag, c)
            done = 0
            while done < n_per_chain:
                m = min(_CHUNK, n_per_chain - done)
                w = evaluate(rng, m)
                # block ids for this stretch of draws
                ids = (np.arange(done, done + m) * _BLOCKS) // n_per_chain
                np.add.at(bsum[c], ids, w)
                np.add.at(bcnt[c], ids, 1)
                done += m

    _run_chain_groups(run_group, n_chains)
    chain_means = bsum.sum(axis=1) / bcnt.sum(axis=1)
    return chain_means, bsum, bcnt


def estimate_abs_norm(state: StateSpec,
                      cfg: Optional[SamplerConfig] = None) -> NdaEstimate:
    """Integral of |Psi| by importance ratio against the reference density g."""
    cfg = cfg or SamplerConfig()
    model = state.model
    if model is None:
        raise ValueError(f"state {state.name!r} has no evaluable model")
    g = state.reference_density
    if g is None:
        raise ValueError(f"state {state.name!r} has no reference density")
    if g.n_particles != model.n_particles:
        raise ValueError("reference density particle count does not match the model")

    def evaluate(rng, m):
        x = g.sample(rng, m)
        return np.abs(model.values(x)) / g.pdf(x)

    chain_means, bsum, bcnt = _iid_chain_means(
        cfg.n_chains, cfg.steps_per_chain, cfg.seed, _TAG_ABS, evaluate)
    return NdaEstimate(
        mean=float(chain_means.mean()),
        stderr=_stderr_from_chains(chain_means, bsum, bcnt),
        n_samples=cfg.n_chains * cfg.steps_per_chain,
        n_chains=cfg.n_chains,
        seed=cfg.seed,
        method="reference_ratio",
    )


# --------------------------------------------------------------------------
# kinetic estimators


def estimate_kin_nda_surface(state: StateSpec,
                             cfg: Optional[SamplerConfig] = None) -> NdaEstimate:
    """E_kin^nda from the parametrized node: surface integral / volume integral.

    The numerator draws importance samples directly on the nodal set using
    the state's exact NodeParametrization; the denominator reuses
    estimate_abs_norm.  Errors combine in quadrature.
    """
    cfg = cfg or SamplerConfig()
    model = state.model
    if model is None:
        raise ValueError(f"state {state.name!r} has no evaluable model")
    param = node_parametrization(state)
    if param.kind == "determinant_zero" or param.sample is None:
        raise ValueError(
            f"state {state.name!r} has no explicit node parametrization; "
            "use the delta-shell estimator")

    def evaluate(rng, m):
        coords, w = param.sample(rng, m)
        grads = model.gradients(coords)
        return w * np.linalg.norm(grads, axis=1)

    num_means, nbs, nbc = _iid_chain_means(
        cfg.n_chains, cfg.steps_per_chain, cfg.seed, _TAG_SURFACE, evaluate)
    num = float(num_means.mean())
    num_err = _stderr_from_chains(num_means, nbs, nbc)

    den_est = estimate_abs_norm(state, cfg)
    if not np.isfinite(den_est.mean) or den_est.mean <= 0.0:
        raise ValueError("zero denominator: integral of |Psi| estimated <= 0")

    mean = num / den_est.mean
    rel = np.hypot(num_err / num if num != 0.0 else 0.0,
                   den_est.stderr / den_est.mean)
    return NdaEstimate(
        mean=mean,
        stderr=abs(mean) * float(rel),
        n_samples=cfg.n_chains * cfg.steps_per_chain + den_est.n_samples,
        n_chains=cfg.n_chains,
        seed=cfg.seed,
        method="surface_param",
    )


def estimate_kin_nda_shell(state: StateSpec,
                           cfg: Optional[SamplerConfig] = None) -> NdaEstimate:
    """E_kin^nda from a thin |Psi| < epsilon shell, extrapolated to zero width.

    Samples are drawn iid from the reference density g.  For each ladder
    epsilon the surface integral is estimated as the g-average of
    1{|Psi| < eps} |grad Psi|^2 / (2 eps g); a per-chain least-squares line
    in eps^2 is extrapolated to eps -> 0 and divided by the chain's
    integral-of-|Psi| estimate from the same draws.
    """
    cfg = cfg or SamplerConfig()
    model = state.model
    if model is None:
        raise ValueError(f"state {state.name!r} has no evaluable model")
    g = state.reference_density
    if g is None:
        raise ValueError(f"state {state.name!r} has no reference density")
    if cfg.n_chains < 2:
        raise ValueError("delta-shell stderr needs at least 2 chains")
    C, n = cfg.n_chains, cfg.steps_per_chain

    # pass over the samples once, retaining the three per-sample scalars
    absvals = np.empty((C, n))
    shell_w = np.empty((C, n))    # |grad Psi|^2 / g
    ratio_w = np.empty((C, n))    # |Psi| / g

    def run_group(chains):
        for c in chains:
            rng = _rng(cfg.seed, _TAG_SHELL, c)
            done = 0
            while done < n:
                m = min(_CHUNK, n - done)
                x = g.sample(rng, m)
                dens = g.pdf(x)
                av = np.abs(model.values(x))
                gr = model.gradients(x)
                absvals[c, done:done + m] = av
                shell_w[c, done:done + m] = np.sum(gr * gr, axis=1) / dens
                ratio_w[c, done:done + m] = av / dens
                done += m

    _run_chain_groups(run_group, C)

    if cfg.epsilon_ladder is not None:
        ladder = np.asarray(cfg.epsilon_ladder)
    else:
        # eps_0 set so the widest shell captures ~1% of the samples
        eps0 = float(np.mean(np.quantile(absvals, 0.01, axis=1)))
        if eps0 <= 0.0:
            raise RuntimeError("could not scale the epsilon ladder: |Psi| "
                               "quantile vanished")
        ladder = eps0 * 0.5 ** np.arange(4)

    hits_smallest = 0
    kin = np.empty(C)
    xs = ladder ** 2
    for c in range(C):
        ys = np.empty(ladder.size)
        for k, eps in enumerate(ladder):
            mask = absvals[c] < eps
            ys[k] = np.sum(shell_w[c][mask]) / (2.0 * eps * n)
            if k == ladder.size - 1:
                hits_smallest += int(mask.sum())
        # least-squares intercept of ys against eps^2
        xm, ym = xs.mean(), ys.mean()
        slope = np.sum((xs - xm) * (ys - ym)) / np.sum((xs - xm) ** 2)
        intercept = ym - slope * xm
        kin[c] = intercept / np.mean(ratio_w[c])

    status = "ok"
    if hits_smallest < 100:
        status = "unconverged"
    return NdaEstimate(
        mean=float(kin.mean()),
        stderr=float(np.std(kin, ddof=1) / np.sqrt(C)),
        n_samples=C * n,
        n_chains=C,
        seed=cfg.seed,
        method="delta_shell",
        status=status,
    )


# --------------------------------------------------------------------------
# deterministic wrapper


def quadrature_estimate(state: StateSpec, target: str) -> NdaEstimate:
    """quadrature_oracle result wrapped as a zero-error NdaEstimate."""
    value = quadrature_oracle(state, target)
    return NdaEstimate(
        mean=float(value), stderr=0.0, n_samples=0, n_chains=0, seed=0,
        method="quadrature",
    )
