"""Command-line interface.

Every subcommand writes machine-readable output (CSV for curves and
tables, JSON for scan reports) with a leading comment line that records
the canonical run configuration.  Exit codes: 0 success, 2 invalid
model/arguments, 3 resource budget exceeded, 4 eigensolver failure.

Ground states and analytic states are recomputed unless a cache
directory is given (--cache-dir or the CRITCHAINS_CACHE_DIR environment
variable), in which case vectors round-trip through the binary state
format.
"""

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import dataclass, fields
from datetime import datetime, timezone
from importlib import resources

import numpy as np

from .analytic import build_state
from .basis import SectorBasis
from .cache import load_state, save_state
from .eigensolve import lowest_k
from .errors import (ConvergenceError, CorruptStateError, InvalidModelError,
                     OutOfSectorError, ResourceError)
from .hamiltonian import (KINDS, OPT_KINDS, ModelSpec, build,
                          storage_estimate)
from .lattice import coupling_table
from .observables import (entropy_curve, g2_curve, match_excited,
                          normalized_spectrum, overlap)
from .optimize import optimize_u

__all__ = ["main", "RunConfig"]

_COMMANDS = ("coefficients", "ground", "entropy", "g2", "spectrum",
             "excited", "optimize-u", "analytic-state")

# Table-type commands compare against these bundled files under --reference.
_BUNDLED_REFERENCE = {
    "ground": "reference_ground_overlaps.csv",
    "excited": "reference_excited_overlaps.csv",
    "optimize-u": "reference_optimal_u.csv",
}


@dataclass(frozen=True)
class RunConfig:
    """Resolved parameters of one CLI invocation.

    The canonical text form is what output headers record; parsing it
    back yields an identical RunConfig.
    """

    command: str
    q: int
    n_sites: int
    kind: str = "exact"
    u: float = 1.0
    k: int = 8
    tol: float = 1e-10
    seed: int = 0
    bracket_lo: float = 0.1
    bracket_hi: float = 8.0
    max_gb: float = 3.0

    def canonical(self):
        return (f"command={self.command} q={self.q} n={self.n_sites} "
                f"kind={self.kind} u={self.u:.12g} k={self.k} "
                f"tol={self.tol:.12g} seed={self.seed} "
                f"bracket={self.bracket_lo:.12g},{self.bracket_hi:.12g} "
                f"max_gb={self.max_gb:.12g}")

    @classmethod
    def parse(cls, text):
        kv = dict(item.split("=", 1) for item in text.split())
        lo, hi = kv.pop("bracket").split(",")
        kv["bracket_lo"], kv["bracket_hi"] = lo, hi
        kv["n_sites"] = kv.pop("n")
        kwargs = {}
        for f in fields(cls):
            raw = kv[f.name]
            kwargs[f.name] = f.type(raw) if f.type is not str else raw
        return cls(**kwargs)


def _parser():
    top = argparse.ArgumentParser(
        prog="critchains",
        description="Critical ring lattice models: exact diagonalization, "
                    "overlaps, entropies, correlations and coupling scans.")
    sub = top.add_subparsers(dest="command", required=True)

    def common(p, kinds=True, needs_k=False, k_default=8):
        p.add_argument("--q", type=int, required=True,
                       help="model family label (2, 3, 4, ...)")
        p.add_argument("--n", type=int, required=True, dest="n_sites",
                       help="number of ring sites")
        if kinds:
            p.add_argument("--kind", choices=KINDS, default="exact",
                           help="model kind (default: exact)")
            p.add_argument("--u", type=float, default=None,
                           help="density coupling for -opt kinds "
                                "(default: tabulated optimum)")
        if needs_k:
            p.add_argument("--k", type=int, default=k_default,
                           help=f"number of eigenpairs (default {k_default})")
        p.add_argument("--tol", type=float, default=1e-10,
                       help="eigensolver residual tolerance")
        p.add_argument("--seed", type=int, default=None,
                       help="solver seed (default: derived from the model)")
        p.add_argument("--out", default=None,
                       help="output path (default: stdout)")
        p.add_argument("--cache-dir", default=None,
                       help="state-vector cache directory "
                            "(or CRITCHAINS_CACHE_DIR)")
        p.add_argument("--threads", type=int, default=None,
                       help="compute threads (default: hardware count)")
        p.add_argument("--reproducible", action="store_true",
                       help="omit timestamps for byte-identical reruns")
        p.add_argument("--max-gb", type=float, default=3.0,
                       help="memory budget in GiB (default 3)")

    p = sub.add_parser("coefficients",
                       help="coupling coefficients per separation")
    common(p, kinds=False)

    p = sub.add_parser("ground",
                       help="ground state energy, gap and overlap "
                            "with the analytic state")
    common(p, needs_k=True, k_default=2)
    p.add_argument("--reference", nargs="?", const="bundled", default=None,
                   help="compare against tabulated values "
                        "(optional path, default bundled)")

    p = sub.add_parser("entropy", help="block entanglement entropy curve")
    common(p)

    p = sub.add_parser("g2", help="connected density correlation curve")
    common(p)

    p = sub.add_parser("spectrum", help="low-lying normalized spectrum")
    common(p, needs_k=True)

    p = sub.add_parser("excited",
                       help="excited-state overlaps between a local kind "
                            "and the exact model")
    common(p, needs_k=True)
    p.add_argument("--reference", nargs="?", const="bundled", default=None,
                   help="compare against tabulated values "
                        "(optional path, default bundled)")

    p = sub.add_parser("optimize-u",
                       help="scan the free density coupling of an -opt kind")
    common(p)
    p.add_argument("--bracket", default="0.1,8.0",
                   help="scan bracket LO,HI (default 0.1,8.0)")
    p.add_argument("--coarse-step", type=float, default=0.1)
    p.add_argument("--scan-tol", type=float, default=1e-3,
                   help="golden-section interval width")
    p.add_argument("--reference", nargs="?", const="bundled", default=None,
                   help="compare against the tabulated optimal couplings")

    p = sub.add_parser("analytic-state",
                       help="write the analytic ground state as a binary "
                            "state file")
    common(p, kinds=False)
    return top


def _bundled_optimal_u(q, kind):
    with resources.files("critchains.data").joinpath(
            "reference_optimal_u.csv").open() as fh:
        for row in csv.DictReader(fh):
            if int(row["q"]) == q and row["kind"] == kind:
                return float(row["u"])
    raise InvalidModelError(
        f"no tabulated coupling for q={q} kind={kind}; pass --u explicitly")


def _resolve(args):
    """Fill defaults and build the RunConfig plus ModelSpec."""
    kind = getattr(args, "kind", "exact")
    u = getattr(args, "u", None)
    if u is None:
        if kind in OPT_KINDS and args.command != "optimize-u":
            u = _bundled_optimal_u(args.q, kind)
        else:
            u = 1.0  # placeholder for scans; fixed kinds pin u anyway
    lo, hi = 0.1, 8.0
    if getattr(args, "bracket", None):
        parts = args.bracket.split(",")
        if len(parts) != 2:
            raise InvalidModelError("--bracket expects LO,HI")
        lo, hi = float(parts[0]), float(parts[1])
    if args.command in ("coefficients",):
        spec = None  # any q >= 2, any N >= 2; no sector required
        if args.q < 2 or args.n_sites < 2:
            raise InvalidModelError("need q >= 2 and at least two sites")
        seed = 0 if args.seed is None else args.seed
    else:
        spec = ModelSpec(q=args.q, n_sites=args.n_sites, kind=kind, u=u)
        seed = spec.default_seed() if args.seed is None else args.seed
    cfg = RunConfig(
        command=args.command, q=args.q, n_sites=args.n_sites, kind=kind,
        u=u, k=getattr(args, "k", 8), tol=args.tol, seed=seed,
        bracket_lo=lo, bracket_hi=hi, max_gb=args.max_gb)
    return cfg, spec


def _fmt(value):
    if value is None:
        return ""
    if isinstance(value, (float, np.floating)):
        return f"{value:.12g}"
    return str(value)


class _Output:
    """Accumulates text output and writes it to --out or stdout."""

    def __init__(self, cfg, reproducible):
        self.buf = io.StringIO()
        self.buf.write(f"# config: {cfg.canonical()}\n")
        if not reproducible:
            stamp = datetime.now(timezone.utc).isoformat(timespec="seconds")
            self.buf.write(f"# generated: {stamp}\n")

    def csv(self, columns, rows):
        self.buf.write(",".join(columns) + "\n")
        for row in rows:
            self.buf.write(",".join(_fmt(v) for v in row) + "\n")

    def flush(self, path):
        text = self.buf.getvalue()
        if path is None:
            sys.stdout.write(text)
        else:
            with open(path, "w") as fh:
                fh.write(text)


def _budget_bytes(max_gb):
    return int(max_gb * 2**30)


def _check_feasible(spec, k, max_gb):
    """Refuse upfront if even matrix-free iteration cannot fit."""
    est = storage_estimate(spec)
    itemsize = 8 if spec.is_real else 16
    ncv = max(2 * k + 10, 28)
    lanczos = est["dimension"] * itemsize * (ncv + 6)
    if lanczos > _budget_bytes(max_gb):
        raise ResourceError(
            f"eigensolve needs about {lanczos / 2**30:.2f} GiB for "
            f"dimension {est['dimension']}, budget is {max_gb} GiB")


def _cache_path(cache_dir, role, spec):
    name = (f"{role}_q{spec.q}_n{spec.n_sites}_{spec.kind}"
            f"_u{spec.u:.12g}.cch")
    return os.path.join(cache_dir, name)


def _cached_vector(cache_dir, role, spec, compute):
    if not cache_dir:
        return compute()
    os.makedirs(cache_dir, exist_ok=True)
    path = _cache_path(cache_dir, role, spec)
    if os.path.exists(path):
        vector, _ = load_state(path, expected=spec)
        return vector
    vector = compute()
    save_state(path, np.asarray(vector, dtype=np.complex128), spec)
    return vector


def _analytic_vector(cfg, cache_dir):
    spec = ModelSpec(q=cfg.q, n_sites=cfg.n_sites, kind="exact", u=1.0)
    return _cached_vector(cache_dir, "analytic", spec,
                          lambda: build_state(cfg.n_sites, cfg.q))


def _load_reference(arg, command):
    if arg == "bundled":
        ref = resources.files("critchains.data").joinpath(
            _BUNDLED_REFERENCE[command])
        with ref.open() as fh:
            return list(csv.DictReader(fh))
    with open(arg) as fh:
        return list(csv.DictReader(fh))


def cmd_coefficients(args):
    cfg, _ = _resolve(args)
    hop, dens = coupling_table(cfg.q, cfg.n_sites)
    rows = [(d, hop[d].real, hop[d].imag, dens[d])
            for d in range(1, cfg.n_sites)]
    out = _Output(cfg, args.reproducible)
    out.csv(("distance", "re_c1", "im_c1", "c2"), rows)
    out.flush(args.out)
    return 0


def _solve(spec, cfg, k):
    _check_feasible(spec, k, cfg.max_gb)
    h = build(spec, max_bytes=_budget_bytes(cfg.max_gb))
    return lowest_k(h, k=k, tol=cfg.tol, seed=cfg.seed)


def cmd_ground(args):
    cfg, spec = _resolve(args)
    cache_dir = args.cache_dir or os.environ.get("CRITCHAINS_CACHE_DIR")
    k = max(cfg.k, 2)  # always report the gap
    res = _solve(spec, cfg, k)
    target = _analytic_vector(cfg, cache_dir)
    rep = overlap(res.vectors[:, 0], target, cfg.n_sites)
    row = [cfg.q, cfg.n_sites, cfg.kind, cfg.u, res.ground_energy, res.gap,
           rep.delta, rep.delta_per_site]
    cols = ["q", "n", "kind", "u", "energy", "gap", "delta",
            "delta_per_site"]
    if args.reference:
        ref_delta = None
        for entry in _load_reference(args.reference, "ground"):
            if (int(entry["q"]) == cfg.q and int(entry["n"]) == cfg.n_sites
                    and entry["kind"] == cfg.kind):
                ref_delta = float(entry["delta"])
                break
        cols += ["delta_ref", "delta_dev"]
        if ref_delta is None:
            row += [None, None]
        else:
            row += [ref_delta, abs(rep.delta - ref_delta)]
    out = _Output(cfg, args.reproducible)
    out.csv(cols, [row])
    out.flush(args.out)
    return 0


def _state_for_observable(cfg, spec, args):
    cache_dir = args.cache_dir or os.environ.get("CRITCHAINS_CACHE_DIR")
    if spec.kind == "exact":
        return _analytic_vector(cfg, cache_dir)

    def compute():
        res = _solve(spec, cfg, 1)
        return np.asarray(res.vectors[:, 0], dtype=np.complex128)

    return _cached_vector(cache_dir, "ground", spec, compute)


def cmd_entropy(args):
    cfg, spec = _resolve(args)
    v = _state_for_observable(cfg, spec, args)
    basis = SectorBasis.for_model(cfg.n_sites, cfg.q)
    curve = entropy_curve(v, basis)
    out = _Output(cfg, args.reproducible)
    out.csv(("block_length", "entropy"),
            list(zip(curve.lengths.tolist(), curve.entropies)))
    out.flush(args.out)
    return 0


def cmd_g2(args):
    cfg, spec = _resolve(args)
    v = _state_for_observable(cfg, spec, args)
    basis = SectorBasis.for_model(cfg.n_sites, cfg.q)
    curve = g2_curve(v, basis)
    out = _Output(cfg, args.reproducible)
    out.csv(("distance", "g2"),
            list(zip(curve.distances.tolist(), curve.values)))
    out.flush(args.out)
    return 0


def cmd_spectrum(args):
    cfg, spec = _resolve(args)
    res = _solve(spec, cfg, cfg.k)
    report = normalized_spectrum(res.energies)
    rows = [(m + 1, report.energies[m], report.normalized[m])
            for m in range(report.energies.size)]
    out = _Output(cfg, args.reproducible)
    out.csv(("state", "energy", "normalized"), rows)
    out.flush(args.out)
    return 0


def cmd_excited(args):
    cfg, spec = _resolve(args)
    exact_spec = ModelSpec(q=cfg.q, n_sites=cfg.n_sites, kind="exact", u=1.0)
    # two spare states on each side so a trailing degenerate multiplet is
    # never cut off mid-pair, which would misdirect the matching
    local = _solve(spec, cfg, cfg.k + 2)
    exact = _solve(exact_spec, cfg, cfg.k + 2)
    reports = match_excited(local, exact, cfg.n_sites)[:cfg.k]
    ref_rows = (_load_reference(args.reference, "excited")
                if args.reference else None)
    cols = ["state", "energy_local", "energy_exact", "delta",
            "delta_per_site"]
    if ref_rows is not None:
        cols += ["delta_ref", "delta_dev"]
    rows = []
    for m, rep in enumerate(reports):
        row = [m + 1, local.energies[m], exact.energies[m], rep.delta,
               rep.delta_per_site]
        if ref_rows is not None:
            ref_delta = None
            for entry in ref_rows:
                if (int(entry["q"]) == cfg.q
                        and int(entry["n"]) == cfg.n_sites
                        and entry["kind"] == cfg.kind
                        and int(entry["state"]) == m + 1):
                    ref_delta = float(entry["delta"])
                    break
            row += ([ref_delta, abs(rep.delta - ref_delta)]
                    if ref_delta is not None else [None, None])
        rows.append(row)
    out = _Output(cfg, args.reproducible)
    out.csv(cols, rows)
    out.flush(args.out)
    return 0


def cmd_optimize_u(args):
    cfg, spec = _resolve(args)
    result = optimize_u(cfg.q, cfg.n_sites, cfg.kind,
                        bracket=(cfg.bracket_lo, cfg.bracket_hi),
                        coarse_step=args.coarse_step, tol=args.scan_tol,
                        solver_tol=cfg.tol,
                        seed=None if args.seed is None else cfg.seed)
    payload = {
        "config": cfg.canonical(),
        "q": cfg.q,
        "n": cfg.n_sites,
        "kind": cfg.kind,
        "bracket": [result.bracket[0], result.bracket[1]],
        "best_u": result.best_u,
        "best_delta": result.best_delta,
        "on_boundary": result.on_boundary,
        "crossings": result.crossings,
        "n_evaluations": len(result.samples),
        "samples": [[u, d] for u, d in result.samples],
    }
    if args.reference:
        for entry in _load_reference(args.reference, "optimize-u"):
            if int(entry["q"]) == cfg.q and entry["kind"] == cfg.kind:
                payload["reference_u"] = float(entry["u"])
                payload["u_deviation"] = abs(result.best_u
                                             - float(entry["u"]))
                break
    if not args.reproducible:
        payload["generated"] = datetime.now(
            timezone.utc).isoformat(timespec="seconds")
    # JSON carries the config inside the payload; no comment header
    text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if args.out is None:
        sys.stdout.write(text)
    else:
        with open(args.out, "w") as fh:
            fh.write(text)
    return 0


def cmd_analytic_state(args):
    cfg, _ = _resolve(args)
    if args.out is None:
        raise InvalidModelError("analytic-state requires --out FILE")
    spec = ModelSpec(q=cfg.q, n_sites=cfg.n_sites, kind="exact", u=1.0)
    vector = build_state(cfg.n_sites, cfg.q)
    n_bytes = save_state(args.out, vector, spec)
    sys.stdout.write(f"# config: {cfg.canonical()}\n")
    sys.stdout.write(f"wrote {n_bytes} bytes to {args.out}\n")
    return 0


_DISPATCH = {
    "coefficients": cmd_coefficients,
    "ground": cmd_ground,
    "entropy": cmd_entropy,
    "g2": cmd_g2,
    "spectrum": cmd_spectrum,
    "excited": cmd_excited,
    "optimize-u": cmd_optimize_u,
    "analytic-state": cmd_analytic_state,
}


def _set_threads(threads):
    if threads is None:
        return
    import numba
    try:
        numba.set_num_threads(threads)
    except ValueError as exc:
        raise InvalidModelError(f"bad thread count {threads}: {exc}") from exc


def main(argv=None):
    args = _parser().parse_args(argv)
    try:
        _set_threads(args.threads)
        return _DISPATCH[args.command](args)
    except (InvalidModelError, OutOfSectorError, CorruptStateError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ResourceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except ConvergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
