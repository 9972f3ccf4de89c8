"""Command line front end: phi, check, volume, system."""
from __future__ import annotations

import argparse
import json
import math
import os
import re
import sys
import time

from .braid import BraidSyntaxError, build_diagram, parse_braid
from .dilog import DomainError
from .qdilog import PhiParams, QuadratureSpec, phi
from .solve import SolverConfig, report, solve_all

EXIT_OK, EXIT_FAIL, EXIT_DOMAIN, EXIT_NONHYPERBOLIC = 0, 1, 2, 3

# name -> (default, env var, help)
_DEFAULTS = {
    "gamma": (0.5, None, "phi: Planck-like parameter"),
    "semicircle_radius": (QuadratureSpec.semicircle_radius, "QDVOLUME_RADIUS", "phi: detour radius at 0"),
    "panel_tol": (QuadratureSpec.panel_tol, "QDVOLUME_PANEL_TOL", "phi: per-panel tolerance"),
    "tail_tol": (QuadratureSpec.tail_tol, "QDVOLUME_TAIL_TOL", "phi: truncated tail bound"),
    "check_tol": (1e-8, "QDVOLUME_CHECK_TOL", "check: residual threshold"),
    "starts": (SolverConfig.starts, "QDVOLUME_STARTS", "volume: starts per half-plane box"),
    "seed": (0, "QDVOLUME_SEED", "volume: RNG seed"),
    "newton_tol": (SolverConfig.newton_tol, "QDVOLUME_NEWTON_TOL", "volume: residual for convergence"),
    "max_iters": (SolverConfig.max_iters, "QDVOLUME_MAX_ITERS", "volume: Newton iterations per start"),
    "dedupe_tol": (SolverConfig.dedupe_tol, "QDVOLUME_DEDUPE_TOL", "volume: merge distance"),
    "classify_tol": (SolverConfig.classify_tol, "QDVOLUME_CLASSIFY_TOL", "volume: volume sign threshold"),
}


def defaults() -> dict:
    """Default table with env overrides applied."""
    out = {}
    for name, (val, env, _) in _DEFAULTS.items():
        raw = os.environ.get(env) if env else None
        if raw is not None:
            val = type(val)(float(raw)) if isinstance(val, int) else float(raw)
        out[name] = val
    return out


def parse_complex(text: str) -> complex:
    """'1.2', '0.3i', '1+2i', '-i', '2-0.5j'."""
    t = text.strip().replace(" ", "")
    if not t or re.search(r"[^0-9eE.+\-ij]", t):
        raise ValueError(f"bad complex number {text!r}")
    t = re.sub(r"(^|[+-])[ij]\b", r"\g<1>1j", t).replace("i", "j")
    try:
        z = complex(t)
    except ValueError:
        raise ValueError(f"bad complex number {text!r}") from None
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise ValueError(f"bad complex number {text!r}")
    return z


def _emit(obj, fmt, text_lines, out):
    if fmt == "json":
        out.write(json.dumps(obj, indent=1) + "\n")
    else:
        out.write("\n".join(text_lines) + "\n")


def cmd_phi(a, out) -> int:
    quad = QuadratureSpec(semicircle_radius=a.radius, panel_tol=a.panel_tol, tail_tol=a.tail_tol,
                          truncation=a.truncation)
    try:
        z = parse_complex(a.point)
        val, err = phi(PhiParams(a.gamma), quad, z, return_error=True)
    except (DomainError, ValueError) as e:
        sys.stderr.write(f"error: {e}\n")
        return EXIT_DOMAIN
    obj = {"gamma": a.gamma, "point": [z.real, z.imag], "re": val.real, "im": val.imag, "err": err}
    _emit(obj, a.format, [f"phi_{a.gamma!r}({a.point}) = {val.real!r} {val.imag:+}i",
                          f"error estimate {err!r}"], out)
    return EXIT_OK


def cmd_check(a, out) -> int:
    from .checks import classical_suite, quantum_suite
    res = {}
    if a.suite in ("classical", "all"):
        res.update({f"classical.{k}": v for k, v in classical_suite(seed=a.seed).items()})
    if a.suite in ("quantum", "all"):
        res.update({f"quantum.{k}": v for k, v in quantum_suite().items()})
    ok = all(v < a.tol for v in res.values())
    lines = [f"{'PASS' if v < a.tol else 'FAIL'}  {k:40s} {v:.3e}" for k, v in res.items()]
    lines.append(f"tolerance {a.tol:g}: {'all passed' if ok else 'FAILED'}")
    _emit({"tol": a.tol, "residuals": res, "passed": ok}, a.format, lines, out)
    return EXIT_OK if ok else EXIT_FAIL


def _solver_cfg(a) -> SolverConfig:
    return SolverConfig(starts=a.starts, newton_tol=a.newton_tol, max_iters=a.max_iters,
                        dedupe_tol=a.dedupe_tol, classify_tol=a.classify_tol)


def cmd_volume(a, out) -> int:
    from .glue import assemble
    try:
        w = parse_braid(a.braid)
    except BraidSyntaxError as e:
        sys.stderr.write(f"parse error: {e}\n")
        return EXIT_DOMAIN
    t0 = time.perf_counter()
    S = assemble(build_diagram(w))
    sols = solve_all(S, _solver_cfg(a), seed=a.seed)
    rep = report(S, sols, braid=a.braid)
    rep["seed"] = a.seed
    elapsed = time.perf_counter() - t0
    lines = [f"braid {a.braid!r}  strands {rep['n_strands']}  writhe {rep['writhe']}  "
             f"free variables {len(rep['free_vars'])}",
             f"{'#':>3} {'kind':9} {'volume':>18} {'volume_bw':>18} {'cs mod pi^2':>18} {'mult':>4}"]
    for i, s in enumerate(rep["solutions"]):
        lines.append(f"{i:>3} {s['kind']:9} {s['volume']:>18.12f} {s['volume_bw']:>18.12f} "
                     f"{s['cs_estimate']:>18.12f} {s['multiplicity']:>4}")
    if rep["principal_index"] is None:
        lines.append("no principal (geometric) solution found")
    else:
        p = rep["principal"]
        lines.append(f"principal #{rep['principal_index']}: volume {p['volume']!r}  "
                     f"volume_bw {p['volume_bw']!r}")
    if a.format == "text":
        lines.append(f"({elapsed:.2f} s)")
    _emit(rep, a.format, lines, out)
    return EXIT_OK if rep["principal_index"] is not None else EXIT_NONHYPERBOLIC


def cmd_system(a, out) -> int:
    from .glue import assemble
    try:
        w = parse_braid(a.braid)
    except BraidSyntaxError as e:
        sys.stderr.write(f"parse error: {e}\n")
        return EXIT_DOMAIN
    out.write(assemble(build_diagram(w)).dumps() + "\n")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    d = defaults()
    p = argparse.ArgumentParser(prog="qdvolume", description="Quantum dilogarithm and knot volume tools")
    p.add_argument("--show-defaults", action="store_true", help="print the default table and exit")
    sub = p.add_subparsers(dest="cmd")

    fmt = argparse.ArgumentParser(add_help=False)
    fmt.add_argument("--format", choices=("text", "json"), default="text")

    q = sub.add_parser("phi", parents=[fmt], help="evaluate Phi_gamma at a point")
    q.add_argument("--gamma", type=float, default=d["gamma"])
    q.add_argument("--point", required=True, help='complex number such as "1.2", "0.3i", "1+2i"')
    q.add_argument("--radius", type=float, default=d["semicircle_radius"])
    q.add_argument("--panel-tol", type=float, default=d["panel_tol"])
    q.add_argument("--tail-tol", type=float, default=d["tail_tol"])
    q.add_argument("--truncation", type=float, default=None)
    q.set_defaults(func=cmd_phi)

    c = sub.add_parser("check", parents=[fmt], help="run identity suites")
    c.add_argument("suite", choices=("classical", "quantum", "all"))
    c.add_argument("--tol", type=float, default=d["check_tol"])
    c.add_argument("--seed", type=int, default=d["seed"])
    c.set_defaults(func=cmd_check)

    for name, func, hlp in (("volume", cmd_volume, "saddle points and volume of a braid closure"),
                            ("system", cmd_system, "dump the saddle system as JSON")):
        v = sub.add_parser(name, parents=[fmt] if name == "volume" else [], help=hlp)
        v.add_argument("--braid", required=True)
        if name == "volume":
            v.add_argument("--seed", type=int, default=d["seed"])
            v.add_argument("--starts", type=int, default=d["starts"])
            v.add_argument("--newton-tol", type=float, default=d["newton_tol"])
            v.add_argument("--max-iters", type=int, default=d["max_iters"])
            v.add_argument("--dedupe-tol", type=float, default=d["dedupe_tol"])
            v.add_argument("--classify-tol", type=float, default=d["classify_tol"])
        v.set_defaults(func=func)
    return p


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    try:
        p = build_parser()
    except ValueError as e:
        sys.stderr.write(f"bad environment override: {e}\n")
        return EXIT_DOMAIN
    a = p.parse_args(argv)
    if a.show_defaults:
        for name, (_, env, hlp) in _DEFAULTS.items():
            out.write(f"{name:18s} {defaults()[name]!r:>10}  {env or '-':24s} {hlp}\n")
        return EXIT_OK
    if a.cmd is None:
        p.print_help(out)
        return EXIT_DOMAIN
    try:
        return a.func(a, out)
    except ValueError as e:   # bad solver settings and the like
        sys.stderr.write(f"error: {e}\n")
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
