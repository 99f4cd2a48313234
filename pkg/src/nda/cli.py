"""Command-line interface: estimates, table verification, topology checks.

Subcommands
    compute        estimate components for one state
    verify-tables  check every catalog state against its exact references
    domains        count nodal domains
    equiv          test node equivalence under a block transform
    catalog        list the built-in states

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 unconverged.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from dataclasses import asdict, dataclass
from datetime import datetime, timezone
from fractions import Fraction
from typing import Optional

import numpy as np

from . import __version__
from .catalog import catalog_list, catalog_to_json, get_state, node_parametrization
from .estimators import (NdaEstimate, SamplerConfig, estimate_abs_norm,
                         estimate_kin_nda_shell, estimate_kin_nda_surface,
                         estimate_pot_nda, estimate_standard_expectations,
                         quadrature_estimate)
from .quadrature import NotReducibleError
from .topology import TransformSpec, count_nodal_domains, test_node_equivalence

__all__ = ["main", "RunRecord"]


@dataclass
class RunRecord:
    """One CLI run, JSON-serializable without loss."""

    command: str
    state: str
    parameters: dict
    sampler_config: dict
    estimates: dict
    wall_time_s: float
    version: str
    timestamp: str

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2, sort_keys=True)

    @staticmethod
    def from_json(text: str) -> "RunRecord":
        return RunRecord(**json.loads(text))


# --------------------------------------------------------------------------
# helpers


def _fraction_or_none(x) -> Optional[Fraction]:
    if x is None:
        return None
    return Fraction(x)


def _exact_repr(x) -> Optional[dict]:
    f = _fraction_or_none(x)
    if f is None:
        return None
    # closed forms that are not small rationals (they carry sqrt(pi) etc.)
    # read better as plain floats
    if f.denominator > 10_000:
        return {"rational": f"{float(f):.12g}", "value": float(f)}
    return {"rational": f"{f.numerator}/{f.denominator}", "value": float(f)}


def _estimate_entry(est: NdaEstimate, exact=None) -> dict:
    entry = {
        "mean": est.mean,
        "stderr": est.stderr,
        "n_samples": est.n_samples,
        "n_chains": est.n_chains,
        "seed": est.seed,
        "method": est.method,
        "status": est.status,
    }
    if exact is not None:
        ex = float(exact)
        entry["exact"] = _exact_repr(exact)
        entry["sigma_deviation"] = (
            abs(est.mean - ex) / est.stderr if est.stderr > 0.0
            else (0.0 if abs(est.mean - ex) <= 1e-7 else float("inf")))
    return entry


def _print_table(state_name: str, estimates: dict, file=None) -> None:
    file = file if file is not None else sys.stdout
    header = f"{'component':<10} {'estimate':>14} {'stderr':>12} {'exact':>22} {'dev/sigma':>10}"
    print(header, file=file)
    print("-" * len(header), file=file)
    for comp, entry in estimates.items():
        exact = entry.get("exact")
        if exact is not None:
            if exact["rational"] == f"{exact['value']:.12g}":
                exact_txt = f"{exact['value']:.6g}"
            else:
                exact_txt = f"{exact['rational']} = {exact['value']:.6g}"
            dev = entry.get("sigma_deviation")
            dev_txt = f"{dev:.2f}" if dev is not None and np.isfinite(dev) else "-"
        else:
            exact_txt, dev_txt = "-", "-"
        print(f"{comp:<10} {entry['mean']:>14.6g} {entry['stderr']:>12.3g} "
              f"{exact_txt:>22} {dev_txt:>10}", file=file)
        if entry.get("status", "ok") != "ok":
            print(f"  note: {entry['status']}", file=file)


def _print_csv(state_name: str, estimates: dict, file=None) -> None:
    file = file if file is not None else sys.stdout
    writer = csv.writer(file)
    writer.writerow(["state", "component", "method", "mean", "stderr",
                     "exact", "sigma_deviation"])
    for comp, entry in estimates.items():
        exact = entry.get("exact")
        writer.writerow([
            state_name, comp, entry["method"],
            repr(entry["mean"]), repr(entry["stderr"]),
            "" if exact is None else repr(exact["value"]),
            "" if entry.get("sigma_deviation") is None
            else repr(entry["sigma_deviation"]),
        ])


def _emit(record: RunRecord, fmt: str, out: Optional[str]) -> None:
    if out:
        with open(out, "w") as fh:
            fh.write(record.to_json() + "\n")
        return
    if fmt == "json":
        print(record.to_json())
    elif fmt == "csv":
        _print_csv(record.state, record.estimates)
    else:
        print(f"state {record.state}  ({record.command}, v{record.version}, "
              f"{record.wall_time_s:.2f}s)")
        _print_table(record.state, record.estimates)


def _get_state_from_args(args) -> "StateSpec":
    kwargs = {}
    if getattr(args, "Z", None) is not None:
        kwargs["Z"] = Fraction(args.Z)
    if getattr(args, "omega", None) is not None:
        kwargs["omega"] = Fraction(args.omega)
    if getattr(args, "g0", None) is not None:
        kwargs["g0"] = float(args.g0)
    return get_state(args.state, **kwargs)


def _sampler_config(args, default_steps=200_000, default_chains=8) -> SamplerConfig:
    chains = args.chains if args.chains else default_chains
    if args.samples:
        steps = max(2, int(float(args.samples) / chains + 0.5))
    else:
        steps = args.steps if args.steps else default_steps
    return SamplerConfig(
        n_chains=chains,
        steps_per_chain=steps,
        burn_in=args.burn_in,
        proposal_step=args.step,
        seed=args.seed,
    )


# --------------------------------------------------------------------------
# compute


def _kin_estimate(state, cfg, method: str) -> NdaEstimate:
    if method == "quadrature":
        return quadrature_estimate(state, "kin_nda")
    if method == "shell":
        return estimate_kin_nda_shell(state, cfg)
    if method == "surface":
        return estimate_kin_nda_surface(state, cfg)
    # auto: prefer the exact node parametrization when available
    if node_parametrization(state).kind != "determinant_zero":
        return estimate_kin_nda_surface(state, cfg)
    return estimate_kin_nda_shell(state, cfg)


def cmd_compute(args) -> int:
    started = time.perf_counter()
    state = _get_state_from_args(args)
    cfg = _sampler_config(args)
    components = [c.strip() for c in args.components.split(",") if c.strip()]
    method = args.method

    estimates = {}
    std_cache = None
    for comp in components:
        if comp == "pot":
            est = (quadrature_estimate(state, "pot_nda") if method == "quadrature"
                   else estimate_pot_nda(state, None, cfg))
            exact = state.exact_nda.get("pot") if state.exact_nda else None
        elif comp == "kin":
            est = _kin_estimate(state, cfg, method)
            exact = state.exact_nda.get("kin") if state.exact_nda else None
        elif comp == "abs_norm":
            est = (quadrature_estimate(state, "abs_norm") if method == "quadrature"
                   else estimate_abs_norm(state, cfg))
            exact = None
        elif comp in ("kin_std", "pot_std"):
            if std_cache is None:
                std_cache = estimate_standard_expectations(state, None, cfg)
            est = std_cache["kin" if comp == "kin_std" else "pot"]
            exact = (state.exact_standard or {}).get(
                "kin" if comp == "kin_std" else "pot")
        else:
            print(f"error: unknown component {comp!r}", file=sys.stderr)
            return 2
        estimates[comp] = _estimate_entry(est, exact)

    if "kin" in estimates and "pot" in estimates:
        k, p = estimates["kin"], estimates["pot"]
        total = {
            "mean": k["mean"] + p["mean"],
            "stderr": float(np.hypot(k["stderr"], p["stderr"])),
            "n_samples": k["n_samples"] + p["n_samples"],
            "n_chains": cfg.n_chains,
            "seed": cfg.seed,
            "method": "sum",
            "status": "ok",
        }
        if state.exact_total_energy is not None:
            total["exact"] = _exact_repr(state.exact_total_energy)
            ex = float(state.exact_total_energy)
            total["sigma_deviation"] = (
                abs(total["mean"] - ex) / total["stderr"]
                if total["stderr"] > 0 else
                (0.0 if abs(total["mean"] - ex) <= 1e-7 else float("inf")))
        estimates["sum"] = total

    record = RunRecord(
        command="compute",
        state=state.name,
        parameters={k: str(v) for k, v in state.parameters.items()},
        sampler_config=asdict(cfg),
        estimates=estimates,
        wall_time_s=time.perf_counter() - started,
        version=__version__,
        timestamp=datetime.now(timezone.utc).isoformat(),
    )
    _emit(record, args.format, args.out)
    if any(e.get("status") == "unconverged" for e in estimates.values()):
        print("warning: at least one estimator is unconverged", file=sys.stderr)
        return 3
    return 0


# --------------------------------------------------------------------------
# verify-tables


def _verify_cells(state, cfg, method: str):
    """Yield (component, NdaEstimate, exact Fraction) for every known cell."""
    if method == "quadrature":
        for comp, key in (("kin_nda", "kin"), ("pot_nda", "pot")):
            exact = (state.exact_nda or {}).get(key)
            if exact is None:
                continue
            try:
                yield comp, quadrature_estimate(state, comp), exact
            except NotReducibleError:
                continue
        return
    if state.exact_standard:
        std = estimate_standard_expectations(state, None, cfg)
        for comp, key in (("kin_std", "kin"), ("pot_std", "pot")):
            exact = state.exact_standard.get(key)
            if exact is not None:
                yield comp, std[key], exact
    if state.exact_nda:
        pot_exact = state.exact_nda.get("pot")
        if pot_exact is not None:
            yield "pot_nda", estimate_pot_nda(state, None, cfg), pot_exact
        kin_exact = state.exact_nda.get("kin")
        if kin_exact is not None:
            if node_parametrization(state).kind != "determinant_zero":
                est = estimate_kin_nda_surface(state, cfg)
            else:
                est = estimate_kin_nda_shell(state, cfg)
            yield "kin_nda", est, kin_exact


def cmd_verify_tables(args) -> int:
    cfg = _sampler_config(args)
    names = [args.only] if args.only else [
        s.name for s in catalog_list()
        if s.model is not None and (s.exact_nda or s.exact_standard)]
    worst = 0.0
    failures = 0
    rows = []
    for name in names:
        state = get_state(name)
        if state.model is None:
            continue
        for comp, est, exact in _verify_cells(state, cfg, args.method):
            ex = float(exact)
            if est.stderr > 0.0:
                dev = abs(est.mean - ex) / est.stderr
                tag = "PASS" if dev <= 3.0 else ("MARGINAL" if dev <= 4.0 else "FAIL")
            else:
                dev = abs(est.mean - ex)
                tag = "PASS" if dev <= 1e-7 else "FAIL"
            worst = max(worst, dev)
            if tag == "FAIL":
                failures += 1
            line = (f"[{tag}] {name:<14} {comp:<8} mean={est.mean:+.6g} "
                    f"stderr={est.stderr:.2g} "
                    f"exact={_fmt_exact(exact)}={ex:+.6g}")
            if est.stderr > 0.0:
                line += f" dev={dev:.2f} sigma"
            rows.append(line)
            print(line)
    print(f"checked {len(rows)} cells; failures: {failures}")
    return 1 if failures else 0


# --------------------------------------------------------------------------
# topology commands


def cmd_domains(args) -> int:
    state = _get_state_from_args(args)
    report = count_nodal_domains(
        state, n_points=args.points, k_neighbors=args.k,
        segment_checks=args.checks, seed=args.seed)
    if args.format == "json":
        print(json.dumps(asdict(report), indent=2, sort_keys=True))
    else:
        print(f"state {state.name}: {report.n_domains} nodal domains "
              f"(n_points={report.n_points}, edges tested={report.n_edges_tested})")
        print(f"note: {report.confidence_note}")
    return 0


def _parse_flip(text: str, n_particles: int) -> TransformSpec:
    axis_names = {"x": 0, "y": 1, "z": 2}
    try:
        axis_txt, particle_txt = text.split(":")
        axis = axis_names[axis_txt.strip().lower()]
        particle = int(particle_txt) - 1            # 1-based on the CLI
    except (ValueError, KeyError):
        raise ValueError(f"cannot parse flip spec {text!r}; expected e.g. x:2")
    return TransformSpec.axis_flip(n_particles, axis, particle)


def cmd_equiv(args) -> int:
    state_a = get_state(args.a)
    state_b = get_state(args.b)
    n = state_a.model.n_particles
    if args.flip and args.transform:
        print("error: give either --flip or --transform, not both", file=sys.stderr)
        return 2
    if args.flip:
        t = _parse_flip(args.flip, n)
    else:
        if args.transform not in (None, "identity"):
            print(f"error: unknown transform {args.transform!r}", file=sys.stderr)
            return 2
        t = TransformSpec.identity(n)
    result = test_node_equivalence(state_a, state_b, t,
                                   n_points=args.points, seed=args.seed)
    if args.format == "json":
        print(json.dumps(result, indent=2, sort_keys=True))
    else:
        print(f"{args.a} vs {args.b}: {result['verdict']} "
              f"(agreement {result['agreement_fraction']:.6f} "
              f"over {result['n_points']} points)")
        if "warning" in result:
            print(f"warning: {result['warning']}")
    return 0


def _fmt_exact(v) -> str:
    """Small rationals as p/q; irrational closed forms as floats."""
    try:
        f = Fraction(v)
    except (TypeError, ValueError):
        return f"{float(v):.10g}"
    if f.denominator <= 10_000:
        return f"{f.numerator}/{f.denominator}"
    return f"{float(f):.10g}"


def cmd_catalog(args) -> int:
    states = catalog_list()
    if args.format == "json":
        print(catalog_to_json(states))
        return 0
    for s in states:
        n = s.model.n_particles if s.model is not None else 0
        family = s.model.family if s.model is not None else "-"
        refs = []
        if s.exact_total_energy is not None:
            refs.append(f"E={_fmt_exact(s.exact_total_energy)}")
        if s.exact_nda:
            pieces = [f"{key}={_fmt_exact(s.exact_nda[key])}"
                      for key in ("kin", "pot") if s.exact_nda.get(key) is not None]
            refs.append("nda[" + " ".join(pieces) + "]")
        print(f"{s.name:<24} n={n} family={family:<9} " + " ".join(refs))
    return 0


# --------------------------------------------------------------------------
# argument parsing


def _add_sampler_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--chains", type=int, default=None)
    p.add_argument("--steps", type=int, default=None,
                   help="Metropolis steps (or iid draws) per chain")
    p.add_argument("--samples", type=str, default=None,
                   help="total sample budget, e.g. 1e6 (overrides --steps)")
    p.add_argument("--burn-in", dest="burn_in", type=int, default=None)
    p.add_argument("--step", type=float, default=None,
                   help="Metropolis proposal half-width (Bohr)")
    p.add_argument("--seed", type=int, default=20260801)


def _add_output_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--format", choices=("table", "json", "csv"), default="table")
    p.add_argument("--out", type=str, default=None,
                   help="also write the JSON run record to this path")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nda",
        description="Nodal-surface and domain averages for few-electron "
                    "wave functions")
    sub = parser.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("compute", help="estimate components for one state")
    p.add_argument("--state", required=True)
    p.add_argument("--Z", default=None)
    p.add_argument("--omega", default=None)
    p.add_argument("--g0", default=None)
    p.add_argument("--components", default="kin,pot",
                   help="comma list: kin,pot,kin_std,pot_std,abs_norm")
    p.add_argument("--method", choices=("auto", "surface", "shell", "quadrature"),
                   default="auto")
    _add_sampler_flags(p)
    _add_output_flags(p)
    p.set_defaults(fn=cmd_compute)

    p = sub.add_parser("verify-tables",
                       help="check catalog states against exact references")
    p.add_argument("--only", default=None)
    p.add_argument("--method", choices=("mc", "quadrature"), default="mc")
    _add_sampler_flags(p)
    p.set_defaults(fn=cmd_verify_tables)

    p = sub.add_parser("domains", help="count nodal domains")
    p.add_argument("--state", required=True)
    p.add_argument("--Z", default=None)
    p.add_argument("--omega", default=None)
    p.add_argument("--g0", default=None)
    p.add_argument("--points", type=int, default=20_000)
    p.add_argument("--k", type=int, default=12)
    p.add_argument("--checks", type=int, default=16)
    p.add_argument("--seed", type=int, default=20260801)
    _add_output_flags(p)
    p.set_defaults(fn=cmd_domains)

    p = sub.add_parser("equiv", help="test node equivalence")
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    p.add_argument("--flip", default=None, help="axis:particle, e.g. x:2")
    p.add_argument("--transform", default=None, help="'identity'")
    p.add_argument("--points", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=20260801)
    _add_output_flags(p)
    p.set_defaults(fn=cmd_equiv)

    p = sub.add_parser("catalog", help="list built-in states")
    _add_output_flags(p)
    p.set_defaults(fn=cmd_catalog)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors already; normalize other codes
        return int(exc.code) if exc.code else 0
    try:
        return args.fn(args)
    except (KeyError, ValueError, NotReducibleError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
