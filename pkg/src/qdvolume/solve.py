"""Critical points of a SaddleSystem by multistart damped Newton.

The equations solved are exp(dV/dv_j) = 1, i.e. grad V in 2 pi i Z^k.  The
integer vector k absorbs the log branches and the dropped 2 pi i linear
terms; the reported critical value is V(v) - 2 pi i k.v.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, asdict
from typing import Optional

import numpy as np

from .dilog import bloch_wigner
from .glue import SaddleSystem

TWO_PI = 2 * math.pi
PI2 = math.pi ** 2


@dataclass(frozen=True)
class SolverConfig:
    starts: int = 128
    newton_tol: float = 1e-11
    max_iters: int = 100
    damping: float = 0.5
    start_re: tuple = (-2.0, 2.0)
    start_im: tuple = (0.0, math.pi)
    dedupe_tol: float = 1e-6
    step_cap: float = 1.0
    escape_re: float = 10.0
    second_pass: bool = True
    classify_tol: float = 1e-8

    def __post_init__(self):
        if self.starts < 0 or self.max_iters <= 0 or self.newton_tol <= 0:
            raise ValueError("solver counts and tolerances must be positive")
        if not 0 < self.damping < 1:
            raise ValueError("damping must lie in (0, 1)")
        if self.dedupe_tol <= self.newton_tol:
            raise ValueError("dedupe_tol must exceed newton_tol")


@dataclass
class SaddleSolution:
    v: np.ndarray
    critical_value: complex
    shapes: list
    volume: float
    volume_bw: float
    cs_estimate: float
    residual: float
    branch: np.ndarray               # k in grad V = 2 pi i k
    geometric: bool = False
    kind: str = "other"
    positively_oriented: bool = False
    branch_crossings: int = 0
    history: list = field(default_factory=list)
    multiplicity: int = 1

    def to_json(self) -> dict:
        return {
            "v": [[float(z.real), float(z.imag)] for z in self.v],
            "critical_value": [float(self.critical_value.real), float(self.critical_value.imag)],
            "volume": float(self.volume),
            "volume_bw": float(self.volume_bw),
            "cs_estimate": float(self.cs_estimate),
            "geometric": bool(self.geometric),
            "residual": float(self.residual),
            "kind": self.kind,
            "positively_oriented": bool(self.positively_oriented),
            "branch_crossings": int(self.branch_crossings),
            "multiplicity": int(self.multiplicity),
        }


def reduced_residual(g: np.ndarray):
    k = np.round(g.imag / TWO_PI)
    return g - 2j * math.pi * k, k


def newton(sys: SaddleSystem, v0, cfg: SolverConfig):
    """One damped Newton run; returns (v, k, residual history, crossings) or None."""
    v = np.array(v0, dtype=complex)
    g, H = sys.grad_hess(v)
    r, kk = reduced_residual(g)
    res = float(np.max(np.abs(r))) if r.size else 0.0
    hist = [res]
    crossings = 0
    phase = np.angle(1 - np.exp(sys.args(v)))
    polish = 0
    for _ in range(cfg.max_iters):
        if not math.isfinite(res):
            return None
        if res < cfg.newton_tol:
            # a couple of extra steps sharpen the point without changing it
            polish += 1
            if polish > 2 or res < 1e-14:
                break
        d = np.linalg.lstsq(H, -r, rcond=1e-13)[0]
        nd = float(np.max(np.abs(d)))
        if nd > cfg.step_cap:
            d *= cfg.step_cap / nd
        lam = 1.0
        while True:
            vn = v + lam * d
            gn, Hn = sys.grad_hess(vn)
            rn, kn = reduced_residual(gn)
            resn = float(np.max(np.abs(rn)))
            if math.isfinite(resn) and (resn < (1 - 1e-4 * lam) * res or (polish and resn <= res)):
                break
            lam *= cfg.damping
            if lam < 1e-6:
                return (v, kk, hist, crossings) if res < cfg.newton_tol else None
        v, g, H, r, kk, res = vn, gn, Hn, rn, kn, resn
        hist.append(res)
        ph = np.angle(1 - np.exp(sys.args(v)))
        crossings += int(np.sum(np.abs(ph - phase) > math.pi))
        phase = ph
        if sys.A.size and np.max(np.abs(sys.args(v).real)) > cfg.escape_re:
            return None
    if res >= cfg.newton_tol:
        return None
    return v, kk, hist, crossings


def make_solution(sys: SaddleSystem, v, kk, hist=(), crossings=0, cfg=SolverConfig()) -> SaddleSolution:
    v = np.asarray(v, dtype=complex)
    kk = np.asarray(kk, dtype=float)
    cv = sys.value(v) - 2j * math.pi * float(kk @ v.real) - 2j * math.pi * 1j * float(kk @ v.imag)
    shapes = sys.shapes(v)
    vbw = math.fsum(o * bloch_wigner(z) for o, z in shapes)
    g = sys.gradient(v)
    r, _ = reduced_residual(g)
    sol = SaddleSolution(v=v, critical_value=complex(cv), shapes=shapes, volume=float(cv.imag),
                         volume_bw=vbw, cs_estimate=float(math.remainder(-cv.real, PI2)),
                         residual=float(np.max(np.abs(r))) if r.size else 0.0,
                         branch=kk, branch_crossings=crossings, history=list(hist))
    sol.kind = classify(sol, cfg.classify_tol)
    sol.geometric = sol.kind == "geometric"
    sol.positively_oriented = all(o * bloch_wigner(z) > -cfg.classify_tol for o, z in shapes)
    return sol


def classify(sol: SaddleSolution, tol: float = 1e-8) -> str:
    """geometric, flat or other.

    geometric: positive volume, agreeing with the signed Bloch-Wigner sum.
    Per-term positivity is recorded separately (``positively_oriented``).
    """
    ds = [o * bloch_wigner(z) for o, z in sol.shapes]
    if all(abs(x) < tol for x in ds):
        return "flat"
    if sol.volume > tol and sol.volume_bw > tol and abs(sol.volume - sol.volume_bw) < 1e-6:
        return "geometric"
    return "other"


def _gauge_null(sys: SaddleSystem):
    """Unit vectors t with A t = 0 and M t = 0 (exact translation symmetries)."""
    if sys.k == 0:
        return np.zeros((0, 0))
    K = np.vstack([sys.A, sys.M]) if sys.A.size else sys.M
    _, s, vh = np.linalg.svd(K)
    rank = int(np.sum(s > 1e-9))
    return vh[rank:].T


def _same(a: SaddleSolution, b: SaddleSolution, null, tol) -> bool:
    d = a.v - b.v
    if null.size:
        d = d - null @ np.linalg.lstsq(null, d, rcond=None)[0]
    if np.max(np.abs(d), initial=0.0) < tol:
        return True
    # points on one connected critical set share the critical value
    # (real parts compared modulo pi^2, the branch ambiguity of the CS term)
    dre = math.remainder(a.critical_value.real - b.critical_value.real, PI2)
    dim = a.critical_value.imag - b.critical_value.imag
    return abs(complex(dre, dim)) < tol * max(1.0, abs(a.critical_value))


def solve_all(sys: SaddleSystem, cfg: SolverConfig = SolverConfig(), seed: int = 0) -> list:
    if sys.k == 0:
        return [make_solution(sys, np.zeros(0), np.zeros(0), cfg=cfg)]
    rng = np.random.default_rng(seed)
    boxes = [cfg.start_im]
    if cfg.second_pass:
        boxes.append((-cfg.start_im[1], -cfg.start_im[0]))
    null = _gauge_null(sys)
    found = []
    for lo, hi in boxes:
        for _ in range(cfg.starts):
            v0 = rng.uniform(*cfg.start_re, sys.k) + 1j * rng.uniform(lo, hi, sys.k)
            out = newton(sys, v0, cfg)
            if out is None:
                continue
            sol = make_solution(sys, *out, cfg=cfg)
            for f in found:
                if _same(f, sol, null, cfg.dedupe_tol):
                    f.multiplicity += 1
                    break
            else:
                found.append(sol)
    found.sort(key=lambda s: (-round(s.volume, 9), tuple(np.round(s.v.real, 9)),
                              tuple(np.round(s.v.imag, 9))))
    return found


def principal_index(sols) -> Optional[int]:
    best = None
    for i, s in enumerate(sols):
        if s.geometric and (best is None or s.volume > sols[best].volume):
            best = i
    return best


def report(sys: SaddleSystem, sols, braid=None) -> dict:
    """InvariantReport as a JSON-ready dict."""
    pi = principal_index(sols)
    d = sys.diagram
    out = {
        "braid": braid if braid is not None else (
            " ".join(str(x) for x in d.word.letters) if d is not None else None),
        "n_strands": d.word.n_strands if d is not None else None,
        "writhe": (sum(1 if x > 0 else -1 for x in d.word.letters) if d is not None else None),
        "free_vars": list(sys.names),
        "solutions": [s.to_json() for s in sols],
        "principal_index": pi,
        "cs_branch_dependent": True,
    }
    if pi is not None:
        p = sols[pi]
        out["principal"] = {"volume": p.volume, "volume_bw": p.volume_bw,
                            "volume_discrepancy": abs(p.volume - p.volume_bw),
                            "cs_estimate": p.cs_estimate}
    return out
