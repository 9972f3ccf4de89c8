"""Classical potential and linear momentum constraints of a crossing diagram.

A ``SaddleSystem`` is a potential over free variables v

    V(v) = sum_t s_t Li2(exp(a_t . v + c_t)) + v.M.v/2 + b.v + const

together with the integer map from v back to every segment momentum.
"""
from __future__ import annotations

import cmath
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from . import _kernels
from .braid import Diagram
from .dilog import bloch_wigner, li2

PI2_6 = math.pi ** 2 / 6


class InconsistentConstraints(ValueError):
    pass


# slot indices: p1..p4 = 0..3, p1'..p4' = 4..7
_POS = dict(
    eqs=[{0: 1, 2: 1, 1: -1, 4: -1}, {5: 1, 6: -1, 7: 1, 3: -1}],
    dilogs=[(1, 3, 2), (1, 6, 0), (-1, 7, 1), (-1, 5, 4)],   # (sign, plus slot, minus slot)
    quad=({4: 1, 0: -1}, {3: -1, 2: 1, 4: -1, 5: 1}),
)
_NEG = dict(
    eqs=[{7: 1, 1: -1, 2: 1, 3: -1}, {0: 1, 4: -1, 6: -1, 5: 1}],
    dilogs=[(1, 1, 0), (1, 3, 5), (-1, 2, 4), (-1, 7, 6)],
    quad=({0: 1, 4: -1}, {0: 1, 1: -1, 6: -1, 7: 1}),
)


def crossing_rules(sign: int) -> dict:
    """Delta relations, dilog terms and the quadratic pair for one crossing."""
    return _POS if sign > 0 else _NEG


@dataclass(frozen=True)
class LinearConstraintSet:
    n_vars: int
    rows: tuple       # tuples of ints, one relation each (= 0)
    labels: tuple = ()

    def eliminate(self):
        """Exact elimination; returns (free column ids, integer map E with x = E v)."""
        n = self.n_vars
        R = [[Fraction(x) for x in row] for row in self.rows]
        pivots = []
        r = 0
        for col in range(n):
            piv = next((i for i in range(r, len(R)) if R[i][col] != 0), None)
            if piv is None:
                continue
            R[r], R[piv] = R[piv], R[r]
            pv = R[r][col]
            R[r] = [x / pv for x in R[r]]
            for i in range(len(R)):
                if i != r and R[i][col] != 0:
                    f = R[i][col]
                    R[i] = [a - f * b for a, b in zip(R[i], R[r])]
            pivots.append(col)
            r += 1
            if r == len(R):
                break
        for row in R[r:]:
            if any(x != 0 for x in row):
                raise InconsistentConstraints("relations are inconsistent")
        free = [c for c in range(n) if c not in pivots]
        E = [[0] * len(free) for _ in range(n)]
        for j, c in enumerate(free):
            E[c][j] = 1
        for i, c in enumerate(pivots):
            for j, fc in enumerate(free):
                val = -R[i][fc]
                if val.denominator != 1:
                    raise InconsistentConstraints("non-integral elimination")
                E[c][j] = int(val)
        return free, np.array(E, dtype=np.int64).reshape(n, len(free))


@dataclass(frozen=True)
class Term:
    sign: int
    coeffs: tuple             # over free variables
    offset: complex = 0j
    origin: Optional[tuple] = None  # (crossing, term index) for braid systems
    seg: Optional[tuple] = None     # (plus segment, minus segment)


@dataclass
class SaddleSystem:
    names: list
    terms: list               # all terms; those with zero coefficients are constants
    M: np.ndarray
    b: np.ndarray
    const: complex = 0j
    seg_map: Optional[np.ndarray] = None   # segment momenta = seg_map @ v
    constraints: Optional[LinearConstraintSet] = None
    diagram: Optional[Diagram] = None
    quad_pairs: list = field(default_factory=list)

    def __post_init__(self):
        k = len(self.names)
        self.M = np.asarray(self.M, dtype=float).reshape(k, k)
        self.b = np.asarray(self.b, dtype=complex).reshape(k)
        act = [t for t in self.terms if any(self.coeffs_of(t))]
        self.active = act
        self.A = np.array([t.coeffs for t in act], dtype=float).reshape(len(act), k)
        self.c = np.array([t.offset for t in act], dtype=complex)
        self.s = np.array([t.sign for t in act], dtype=float)
        self.const_total = complex(self.const) + sum(
            t.sign * li2(cmath.exp(t.offset)) for t in self.terms if not any(self.coeffs_of(t)))

    @staticmethod
    def coeffs_of(t):
        return [x for x in t.coeffs if x != 0]

    @property
    def k(self) -> int:
        return len(self.names)

    def args(self, v) -> np.ndarray:
        return self.A @ np.asarray(v, dtype=complex) + self.c

    def value(self, v) -> complex:
        v = np.asarray(v, dtype=complex)
        out = self.const_total
        for s, l in zip(self.s, self.args(v)):
            out += s * li2(cmath.exp(l))
        return out + 0.5 * v @ self.M @ v + self.b @ v

    def gradient(self, v) -> np.ndarray:
        v = np.asarray(v, dtype=complex)
        return _kernels.grad(self.A, self.c, self.s, self.M, self.b, v)

    def grad_hess(self, v):
        v = np.asarray(v, dtype=complex)
        return _kernels.grad_hess(self.A, self.c, self.s, self.M, self.b, v)

    def hessian(self, v) -> np.ndarray:
        return self.grad_hess(v)[1]

    def shapes(self, v) -> list:
        """(orientation, z) per active term with z = 1 - e^l.

        The orientation is -s so that the signed Bloch-Wigner sum equals the
        imaginary part of the critical value.
        """
        return [(-int(s), complex(1 - cmath.exp(l))) for s, l in zip(self.s, self.args(v))]

    def volume_bw(self, v) -> float:
        return math.fsum(o * bloch_wigner(z) for o, z in self.shapes(v))

    def segment_values(self, v) -> np.ndarray:
        return self.seg_map @ np.asarray(v, dtype=complex)

    def dihedral_angles(self, v) -> list:
        """a1..a4 for every crossing, evaluated at the segment momenta.

        None for a crossing where the closure makes an angle degenerate
        (a denominator vanishes identically in the free variables).
        """
        if self.diagram is None:
            return []
        x = self.segment_values(v)
        out = []
        for cr in self.diagram.crossings:
            idx = list(cr.slots)
            if cr.sign < 0:
                p1, p2, p3, p4, q1, q2, q3, q4 = idx
                idx = [q2, q1, p1, p2, q3, q4, p4, p3]
            if self.seg_map is not None and _angles_degenerate(self.seg_map, idx):
                out.append(None)
                continue
            out.append(_angles(*[x[i] for i in idx]))
        return out

    def to_json(self) -> dict:
        def cx(z):
            return [float(complex(z).real), float(complex(z).imag)]
        d = {
            "free_vars": list(self.names),
            "terms": [{"sign": t.sign, "coeffs": [int(x) if float(x).is_integer() else float(x)
                                                  for x in t.coeffs],
                       "offset": cx(t.offset), "origin": list(t.origin) if t.origin else None,
                       "segments": list(t.seg) if t.seg else None,
                       "active": bool(any(self.coeffs_of(t)))} for t in self.terms],
            "quadratic": [[float(x) for x in row] for row in self.M],
            "linear": [cx(z) for z in self.b],
            "constant": cx(self.const_total),
        }
        if self.constraints is not None:
            d["constraints"] = {"n_segments": self.constraints.n_vars,
                                "rows": [list(r) for r in self.constraints.rows],
                                "labels": list(self.constraints.labels)}
        if self.seg_map is not None:
            d["segment_map"] = self.seg_map.tolist()
        if self.diagram is not None:
            dg = self.diagram
            d["braid"] = {"n_strands": dg.word.n_strands, "letters": list(dg.word.letters)}
            d["crossings"] = [{"sign": c.sign, "top": list(c.top), "bottom": list(c.bottom),
                               "lines": list(c.lines)} for c in dg.crossings]
            d["open_segments"] = list(dg.open_segments)
            d["pinned"] = list(dg.pinned)
        return d

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=1)

    @classmethod
    def from_json(cls, d) -> "SaddleSystem":
        terms = [Term(t["sign"], tuple(t["coeffs"]), complex(*t["offset"]),
                      tuple(t["origin"]) if t["origin"] else None,
                      tuple(t["segments"]) if t["segments"] else None) for t in d["terms"]]
        k = len(d["free_vars"])
        # const in the dump already includes the degenerate terms
        const = complex(*d["constant"]) - sum(
            t.sign * li2(cmath.exp(t.offset)) for t in terms if not any(x != 0 for x in t.coeffs))
        return cls(list(d["free_vars"]), terms, np.array(d["quadratic"], float).reshape(k, k),
                   np.array([complex(*z) for z in d["linear"]]), const,
                   seg_map=np.array(d["segment_map"], dtype=np.int64) if "segment_map" in d else None)


def _angles(p1, p2, p3, p4, q1, q2, q3, q4):
    E = cmath.exp(p1 - q1 + p4 - q4)
    u = cmath.exp(p1 - q3)
    t = cmath.exp(p2 - q4)
    return ((E - u) / (1 - u), (1 - u) / (1 - u / E), (1 - t / E) / (1 - t), (1 - t) / (E - t))


def _angles_degenerate(E, idx) -> bool:
    p1, p2, p3, p4, q1, q2, q3, q4 = (E[i] for i in idx)
    lu = p1 - q3
    lt = p2 - q4
    le = p1 - q1 + p4 - q4
    return any(not np.any(f) for f in (lu, lt, lu - le, lt - le))


def assemble(d: Diagram) -> SaddleSystem:
    nseg = len(d.segments)
    rows, labels = [], []
    for ci, cr in enumerate(d.crossings):
        sl = cr.slots
        for ei, eq in enumerate(crossing_rules(cr.sign)["eqs"]):
            row = [0] * nseg
            for slot, cf in eq.items():
                row[sl[slot]] += cf
            rows.append(tuple(row))
            labels.append(f"crossing {ci} relation {ei}")
    for s in d.pinned:
        row = [0] * nseg
        row[s] = 1
        rows.append(tuple(row))
        labels.append(f"pin segment {s}")
    cs = LinearConstraintSet(nseg, tuple(rows), tuple(labels))
    free, E = cs.eliminate()
    k = len(free)
    terms = []
    M = np.zeros((k, k))
    pairs = []
    for ci, cr in enumerate(d.crossings):
        rule = crossing_rules(cr.sign)
        sl = cr.slots
        for ti, (sg, plus, minus) in enumerate(rule["dilogs"]):
            a = E[sl[plus]] - E[sl[minus]]
            terms.append(Term(sg, tuple(int(x) for x in a), 0j, (ci, ti), (sl[plus], sl[minus])))
        f1, f2 = rule["quad"]
        u1 = sum(cf * E[sl[s]] for s, cf in f1.items())
        u2 = sum(cf * E[sl[s]] for s, cf in f2.items())
        M += np.outer(u1, u2) + np.outer(u2, u1)
        pairs.append(({sl[s]: cf for s, cf in f1.items()}, {sl[s]: cf for s, cf in f2.items()}))
    return SaddleSystem([f"x{f}" for f in free], terms, M, np.zeros(k), 0j,
                        seg_map=E, constraints=cs, diagram=d, quad_pairs=pairs)


# ---- systems written down directly -------------------------------------

def build_system(names: Sequence[str], dilogs, quad=(), linear=None, const=0j) -> SaddleSystem:
    """Build a system from explicit data.

    dilogs: (sign, {name: coeff}, offset) triples, each s Li2(exp(form + offset))
    quad:   ({name: coeff}, {name: coeff}) pairs, each the product of two forms
    linear: {name: complex}
    """
    idx = {n: i for i, n in enumerate(names)}
    k = len(names)

    def vec(form):
        out = np.zeros(k)
        for n, cf in form.items():
            out[idx[n]] += cf
        return out

    terms = [Term(int(s), tuple(vec(f)), complex(off)) for s, f, off in dilogs]
    M = np.zeros((k, k))
    for f1, f2 in quad:
        u1, u2 = vec(f1), vec(f2)
        M += np.outer(u1, u2) + np.outer(u2, u1)
    b = np.zeros(k, dtype=complex)
    for n, val in (linear or {}).items():
        b[idx[n]] += val
    return SaddleSystem(list(names), terms, M, b, complex(const))


def figure_eight_reduced() -> SaddleSystem:
    """Li2(e^-p) - Li2(e^p), the single-variable figure-eight potential."""
    return build_system(["p"], [(1, {"p": -1}, 0), (-1, {"p": 1}, 0)])


def pentagon_three_term(p1, p2, p3, p2p, p3p) -> SaddleSystem:
    """Three S elements glued along y, z, w with y = p1 + p2 and w = p2' - z.

    Each S element contributes -pi^2/6 + Li2(e^{b'-b}) + (b'-b) a for
    <a, b | S | a', b'>.  The only free variable is z.
    """
    p1, p2, p3, p2p, p3p = (complex(x) for x in (p1, p2, p3, p2p, p3p))
    y = p1 + p2
    dilogs = [
        (1, {"z": 1}, -p2),            # <p1,p2|S|y,z>: Li2(e^{z-p2})
        (1, {"z": -1}, p2p - p3),      # <y,p3|S|p1',w>: Li2(e^{w-p3})
        (1, {"z": 1}, p3p - p2p),      # <z,w|S|p2',p3'>: Li2(e^{p3'-w})
    ]
    # (z-p2) p1 + (w-p3) y + (p3'-w) z with w = p2' - z
    #   = z^2 + z (p1 - y - p2' + p3') + const
    quad = [({"z": 1}, {"z": 1})]
    lin = {"z": p1 - y + p3p - p2p}
    const = -3 * PI2_6 - p2 * p1 + (p2p - p3) * y
    return build_system(["z"], dilogs, quad, lin, const)


def pentagon_two_term(p1, p2, p3, p2p, p3p) -> complex:
    """Exponent of the two-element side of the pentagon relation."""
    p1, p2, p3, p2p, p3p = (complex(x) for x in (p1, p2, p3, p2p, p3p))
    return (-2 * PI2_6 + li2(cmath.exp(p3p - p3)) + li2(cmath.exp(p2p - p2 - p3))
            + p2 * (p3p - p3) + p1 * (p2p - p2 - p3))


# ---- exponentiated gradient audit ----------------------------------------

@dataclass(frozen=True)
class Condition:
    """prod (1 - e^{f_i})^{n_i} * sign * e^{g} = 1 with integer affine forms.

    Forms are dicts name -> int over a common symbol basis.
    """
    factors: tuple   # ((form as sorted tuple of (name, coeff)), exponent)
    sign: int
    mono: tuple      # sorted tuple of (name, coeff)

    @staticmethod
    def make(factors, sign=1, mono=None):
        f = {}
        for form, n in factors:
            key = _key(form)
            f[key] = f.get(key, 0) + n
        return Condition(tuple(sorted((k, n) for k, n in f.items() if n)), sign,
                         _key(mono or {}))

    def canonical(self) -> "Condition":
        # flip each factor so its first nonzero coefficient is positive:
        # 1 - e^f = -e^f (1 - e^{-f})
        sign = self.sign
        mono = dict(self.mono)
        out = []
        for key, n in self.factors:
            form = dict(key)
            lead = form[min(form)]
            if lead < 0:
                sign *= (-1) ** (n % 2)
                for nm, cf in form.items():
                    mono[nm] = mono.get(nm, 0) + n * cf
                form = {nm: -cf for nm, cf in form.items()}
            out.append((form, n))
        return Condition.make(out, sign, mono)

    def inverse(self) -> "Condition":
        return Condition.make([(dict(k), -n) for k, n in self.factors], self.sign,
                              {nm: -cf for nm, cf in self.mono})

    def equivalent(self, other: "Condition") -> bool:
        a = self.canonical()
        return a == other.canonical() or a == other.inverse().canonical()


def _key(form):
    return tuple(sorted((n, int(c)) for n, c in form.items() if c != 0))


def exponentiated_gradient(dilogs, quad=(), wrt=None, subs=None) -> Condition:
    """Condition exp(dV/d wrt) = 1 for a potential written over symbols.

    dilogs: (sign, form) pairs meaning s Li2(e^form); quad: (form, form)
    products.  Forms are dicts symbol -> int.  ``subs`` maps a symbol to a
    form and is applied before differentiating.
    """
    subs = subs or {}

    def expand(form):
        out = {}
        for nm, cf in form.items():
            for n2, c2 in (subs[nm].items() if nm in subs else [(nm, 1)]):
                out[n2] = out.get(n2, 0) + cf * c2
        return {n: c for n, c in out.items() if c != 0}

    factors = []
    mono = {}
    for s, form in dilogs:
        full = expand(form)
        a = full.get(wrt, 0)
        if a:
            # d/dx s Li2(e^f) = -s a log(1 - e^f)
            factors.append((full, -s * a))
    for f1, f2 in quad:
        f1, f2 = expand(f1), expand(f2)
        a1, a2 = f1.get(wrt, 0), f2.get(wrt, 0)
        for n, c in f2.items():
            mono[n] = mono.get(n, 0) + a1 * c
        for n, c in f1.items():
            mono[n] = mono.get(n, 0) + a2 * c
    return Condition.make(factors, 1, mono)
