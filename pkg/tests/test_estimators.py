"""Sampler correctness, reproducibility, and failure modes.

The statistical assertions run at small budgets with fixed seeds, so they are
deterministic; the 3-sigma margins quoted in comments were checked once at
much larger budgets.
"""

import dataclasses
import os

import numpy as np
import pytest

import nda.wavefunctions as wf
from nda.catalog import get_state
from nda.estimators import (SamplerConfig, estimate_abs_norm,
                            estimate_kin_nda_shell, estimate_kin_nda_surface,
                            estimate_pot_nda, estimate_standard_expectations,
                            metropolis_samples, quadrature_estimate)
from nda.quadrature import quadrature_oracle

FAST = SamplerConfig(n_chains=4, steps_per_chain=20_000, seed=7)


# ---------------------------------------------------------------- config


def test_sampler_config_validation():
    with pytest.raises(ValueError):
        SamplerConfig(n_chains=0)
    with pytest.raises(ValueError):
        SamplerConfig(steps_per_chain=1)
    with pytest.raises(ValueError):
        SamplerConfig(burn_in=20_000, steps_per_chain=20_000)
    with pytest.raises(ValueError):
        SamplerConfig(proposal_step=0.0)
    with pytest.raises(ValueError):
        SamplerConfig(epsilon_ladder=(1e-3,))
    with pytest.raises(ValueError):
        SamplerConfig(epsilon_ladder=(1e-4, 1e-3))  # must decrease
    with pytest.raises(ValueError):
        SamplerConfig(epsilon_ladder=(1e-3, -1e-4))


def test_burn_in_default_is_ten_percent():
    assert SamplerConfig(steps_per_chain=50_000).resolved_burn_in() == 5_000
    assert SamplerConfig(steps_per_chain=50_000, burn_in=123).resolved_burn_in() == 123


# ----------------------------------------------------- determinism


def test_same_seed_bitwise_identical():
    st = get_state("3P_2p2")
    a = estimate_pot_nda(st, cfg=FAST)
    b = estimate_pot_nda(st, cfg=FAST)
    assert a.mean == b.mean and a.stderr == b.stderr


def test_worker_count_does_not_change_results(monkeypatch):
    st = get_state("3S_1s2s")
    results = []
    for n in ("1", "3", "8"):
        monkeypatch.setenv("NDA_THREADS", n)
        p = estimate_pot_nda(st, cfg=FAST)
        k = estimate_kin_nda_surface(st, cfg=FAST)
        results.append((p.mean, p.stderr, k.mean, k.stderr))
    assert results[0] == results[1] == results[2]


def test_different_seeds_differ():
    st = get_state("2P_2p")
    a = estimate_pot_nda(st, cfg=FAST)
    b = estimate_pot_nda(st, cfg=dataclasses.replace(FAST, seed=8))
    assert a.mean != b.mean


def test_constant_rescaling_is_exact():
    """nda components are scale-free; abs_norm scales by |c| to the bit."""
    st = get_state("3S_1s2s")
    for c in (4.0, -4.0):  # powers of two keep float arithmetic exact
        sc = dataclasses.replace(st, model=wf.Scaled(c, st.model))
        assert estimate_pot_nda(st, cfg=FAST).mean == estimate_pot_nda(sc, cfg=FAST).mean
        assert (estimate_kin_nda_surface(st, cfg=FAST).mean
                == estimate_kin_nda_surface(sc, cfg=FAST).mean)
        assert (estimate_kin_nda_shell(st, cfg=FAST).mean
                == estimate_kin_nda_shell(sc, cfg=FAST).mean)
        a, b = estimate_abs_norm(st, cfg=FAST), estimate_abs_norm(sc, cfg=FAST)
        assert abs(c) * a.mean == b.mean


# ----------------------------------------------------- accuracy (small budget)


def test_pot_nda_hits_exact_value():
    st = get_state("2P_2p")
    est = estimate_pot_nda(st, cfg=FAST)
    assert est.status == "ok"
    assert abs(est.mean - (-1.0 / 6.0)) < 3 * est.stderr


def test_standard_expectations_hit_exact_values():
    st = get_state("2P_2p")
    out = estimate_standard_expectations(st, cfg=FAST)
    assert abs(out["kin"].mean - 0.125) < 3 * out["kin"].stderr
    assert abs(out["pot"].mean - (-0.25)) < 3 * out["pot"].stderr
    assert out["kin"].method == "metropolis_psi_squared"


def test_abs_norm_matches_quadrature():
    st = get_state("3S_1s2s")
    est = estimate_abs_norm(st, cfg=FAST)
    exact = quadrature_oracle(st, "abs_norm")
    assert abs(est.mean - exact) < 3 * est.stderr
    assert est.method == "reference_ratio"


def test_surface_and_shell_agree():
    st = get_state("2P_2p")
    surf = estimate_kin_nda_surface(st, cfg=FAST)
    shell = estimate_kin_nda_shell(st, cfg=FAST)
    tol = 3 * np.hypot(surf.stderr, shell.stderr)
    assert abs(surf.mean - shell.mean) < tol
    assert surf.method == "surface_param" and shell.method == "delta_shell"


def test_quadrature_estimate_wrapper():
    est = quadrature_estimate(get_state("3P_2p2"), "kin_nda")
    assert est.stderr == 0.0 and est.method == "quadrature"
    assert abs(est.mean - 1.0 / 12.0) < 1e-8


# ----------------------------------------------------- failure modes


def test_surface_requires_a_parametrization():
    st = dataclasses.replace(get_state("2P_2p"), node_param=None)
    with pytest.raises(ValueError):
        estimate_kin_nda_surface(st, cfg=FAST)


def test_shell_needs_two_chains():
    st = get_state("2P_2p")
    with pytest.raises(ValueError):
        estimate_kin_nda_shell(st, cfg=SamplerConfig(n_chains=1, steps_per_chain=1000))


def test_shell_flags_starved_ladder_as_unconverged():
    st = get_state("2P_2p")
    cfg = SamplerConfig(n_chains=2, steps_per_chain=500, seed=1)
    est = estimate_kin_nda_shell(st, cfg=cfg)
    assert est.status == "unconverged"


def test_explicit_epsilon_ladder_is_respected():
    st = get_state("2P_2p")
    cfg = dataclasses.replace(FAST, epsilon_ladder=(2e-2, 1e-2, 5e-3, 2.5e-3))
    est = estimate_kin_nda_shell(st, cfg=cfg)
    assert est.status in ("ok", "unconverged")
    assert abs(est.mean - 1.0 / 24.0) < 4 * est.stderr


def test_absurd_proposal_step_is_flagged():
    st = get_state("2P_2p")
    cfg = dataclasses.replace(FAST, proposal_step=200.0)
    est = estimate_pot_nda(st, cfg=cfg)
    assert est.status.startswith("warning: acceptance rate")


def test_missing_model_rejected():
    from nda.catalog import subshell_family
    st = subshell_family(1, 30)  # reference-only, no evaluable model
    with pytest.raises(ValueError):
        estimate_pot_nda(st, cfg=FAST)


# ----------------------------------------------------- topology sampler


def test_metropolis_samples_shape_and_support():
    st = get_state("3P_2p2")
    x = metropolis_samples(st, SamplerConfig(n_chains=4, steps_per_chain=2_000, seed=3),
                           thin=10)
    assert x.shape[1] == 6
    assert x.shape[0] == 4 * ((2_000 - 200) // 10)
    v = np.abs(st.model.values(x))
    assert np.all(v > 0.0)  # Metropolis on |psi| never lands exactly on the node
