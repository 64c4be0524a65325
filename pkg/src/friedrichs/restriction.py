"""Test-function restriction of pole contributions.

Near a pole every contribution to <f|e^{-iHt}|g> has the shape

    N * ( <f|1> - 2 pi i [Theta B f]^{+-} ) e ( <1|g> - 2 pi i [Theta B g]^{+-} )

evaluated at the pole, with e = exp(-i w t) and B(w) = lam v(w).  The T
operators keep only the Hardy part of the test functions f, g and e that
matches the pole: H- for z, H+ for its conjugate.  There are four shapes
(``RestrictionCase.tag``).  Each has a restricted form T_s and a complement
T_o, and T_s + T_o returns the original expression.

Two layers live here:

* ``t_restrict`` builds both parts for grid functions, so completeness and
  orthogonality can be checked numerically.
* ``restricted_survival``, ``restricted_emission`` and
  ``restricted_correlation`` evaluate the same expansions at the pole for
  the model's three scenarios.  Every test function there is a sum of
  exponentials, on which [.]^- keeps the terms exp(-i w tau) with tau > 0
  and [.]^+ those with tau < 0 (tau = 0 splits evenly).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ._quad import cos_cauchy
from .errors import DomainError, GridMismatchError, MissingConstituentError
from .hardy import SampledFunction, project
from .model import form_factor
from .spectral import ResonancePole

__all__ = [
    "ExpSum",
    "RestrictionCase",
    "Term",
    "Restricted",
    "CASE_TAGS",
    "t_restrict",
    "step",
    "restricted_survival",
    "restricted_emission",
    "restricted_correlation",
    "FreeFieldCorrelation",
    "free_field_correlation",
]

CASE_TAGS = ("E", "E_BRACKET_F", "E_BRACKET_G", "DOUBLE_BRACKET")
_SNAP = 1e-12


def step(s):
    """Heaviside step with step(0) = 1/2; |s| below 1e-12 counts as zero."""
    s = np.asarray(s, dtype=float)
    out = np.where(s > _SNAP, 1.0, np.where(s < -_SNAP, 0.0, 0.5))
    return out[()] if out.ndim == 0 else out


def _flip(sign: str) -> str:
    return "+" if sign == "-" else "-"


# ---------------------------------------------------------------------------
# sums of exponentials

@dataclass(frozen=True)
class ExpSum:
    """sum_k coef_k exp(-i w tau_k); coef and tau broadcast over trailing axes."""

    coef: np.ndarray
    tau: np.ndarray

    @classmethod
    def single(cls, tau, coef=1.0) -> "ExpSum":
        tau = np.asarray(tau, dtype=float)
        coef = np.broadcast_to(np.asarray(coef, dtype=complex), tau.shape)
        return cls(coef[None], tau[None])

    @classmethod
    def cosine(cls, x) -> "ExpSum":
        """cos(w x) = (exp(-i w x) + exp(i w x)) / 2."""
        x = np.asarray(x, dtype=float)
        half = np.full((2,) + x.shape, 0.5, dtype=complex)
        return cls(half, np.stack([x, -x]))

    def __mul__(self, other: "ExpSum") -> "ExpSum":
        c = self.coef[:, None] * other.coef[None, :]
        t = self.tau[:, None] + other.tau[None, :]
        shape = np.broadcast_shapes(c.shape, t.shape)
        c, t = np.broadcast_to(c, shape), np.broadcast_to(t, shape)
        return ExpSum(c.reshape((-1,) + shape[2:]), t.reshape((-1,) + shape[2:]))

    def project(self, sign: str) -> "ExpSum":
        keep = step(self.tau) if sign == "-" else step(-self.tau)
        return ExpSum(self.coef * keep, self.tau)

    def at(self, w: complex):
        return np.sum(self.coef * np.exp(-1j * w * self.tau), axis=0)


# ---------------------------------------------------------------------------
# grid-level restriction

@dataclass(frozen=True)
class RestrictionCase:
    """One of the four expressions, with grid test functions f, g.

    ``pole_side`` is 'z' (lower pole, H- kept) or 'z_cc' (upper pole, H+
    kept).  ``coupling`` holds Theta(w) lam v(w) on the grid.
    """

    tag: str
    t: float
    pole: ResonancePole
    f: SampledFunction | None = None
    g: SampledFunction | None = None
    pole_side: str = "z"
    coupling: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        if self.tag not in CASE_TAGS:
            raise ValueError(f"tag must be one of {CASE_TAGS}")
        if self.pole_side not in ("z", "z_cc"):
            raise ValueError("pole_side must be 'z' or 'z_cc'")
        need = {"E": (), "E_BRACKET_F": ("f",), "E_BRACKET_G": ("g",),
                "DOUBLE_BRACKET": ("f", "g")}[self.tag]
        for name in need:
            if getattr(self, name) is None:
                raise MissingConstituentError(f"case {self.tag} needs test function {name}")
        if self.f is not None and self.g is not None and not self.f.same_grid(self.g):
            raise GridMismatchError("f and g must share one grid")
        ref = self.f if self.f is not None else self.g
        if ref is not None:
            w = ref.grid
            pos = np.where(w > 0, w, 1.0)
            b = np.where(w > 0, self.pole.params.lam * form_factor(pos, self.pole.params), 0.0)
            object.__setattr__(self, "coupling", b)

    @property
    def sign(self) -> str:
        """Hardy class kept for this pole."""
        return "-" if self.pole_side == "z" else "+"

    @property
    def B_z(self) -> complex:
        w = self.pole.z if self.pole_side == "z" else self.pole.z_cc
        return complex(self.pole.params.lam * form_factor(w, self.pole.params))

    @property
    def B_z_c(self) -> complex:
        return self.B_z

    @property
    def grid(self) -> np.ndarray:
        ref = self.f if self.f is not None else self.g
        if ref is None:
            raise MissingConstituentError("case E carries no grid; pass a grid to evaluate")
        return ref.grid

    def e_part(self, sign: str | None, grid=None) -> np.ndarray:
        """exp(-i w t) or its Hardy part: [e]^- = Theta(t) e, [e]^+ = Theta(-t) e."""
        w = self.grid if grid is None else grid
        e = np.exp(-1j * w * self.t)
        if sign is None:
            return e
        return e * (step(self.t) if sign == "-" else step(-self.t))

    def original(self, grid=None) -> np.ndarray:
        """The unrestricted expression on the grid."""
        o = _flip(self.sign)
        e = self.e_part(None, grid)
        if self.tag == "E":
            return e
        b = self.coupling
        if self.tag == "E_BRACKET_F":
            return e * _proj(self.f, b * self.f.values, o)
        if self.tag == "E_BRACKET_G":
            return e * _proj(self.g, b * self.g.values, o)
        return _proj(self.f, b * self.f.values, o) * e * _proj(self.g, b * self.g.values, o)


def _proj(ref: SampledFunction, values, sign: str) -> np.ndarray:
    return project(ref.with_values(values), sign).values


@dataclass(frozen=True)
class Term:
    """system(w) * test(w).

    ``kind`` is 'bracket' when the test part is a single projection [X]^cls
    of test functions only; those are re-projected numerically.  'product'
    terms (e or a coupling bracket times test parts) follow the fixed rule:
    they are kept by T_cls and dropped by the other operator.
    """

    system: np.ndarray
    test: np.ndarray
    cls: str
    kind: str
    label: str

    def value(self) -> np.ndarray:
        return self.system * self.test


@dataclass(frozen=True)
class Restricted:
    """Output of a T operator: a list of signed terms on one grid."""

    sign: str
    terms: tuple
    grid: np.ndarray = field(repr=False)

    def values(self) -> np.ndarray:
        out = np.zeros(self.grid.shape, dtype=complex)
        for term in self.terms:
            out = out + term.value()
        return out

    def restrict(self, sign: str) -> "Restricted":
        """Apply T_sign to an already restricted expression."""
        terms = []
        ref = SampledFunction(self.grid, np.zeros_like(self.grid))
        for term in self.terms:
            if term.kind == "bracket":
                test = project(ref.with_values(term.test), sign).values
                terms.append(Term(term.system, test, sign, "bracket", f"[{term.label}]{sign}"))
            elif term.cls == sign:
                terms.append(term)
        return Restricted(sign, tuple(terms), self.grid)


def t_restrict(case: RestrictionCase, sign: str, grid=None) -> Restricted:
    """T_sign of the case expression.

    For the lower pole T_- is the physical restriction and T_+ its
    complement; for the upper pole the roles swap.
    """
    if sign not in ("+", "-"):
        raise ValueError("sign must be '+' or '-'")
    s = case.sign
    o = _flip(s)
    keep = sign == s
    if case.tag == "E":
        w = case.grid if grid is None else grid
        return Restricted(sign, (Term(np.ones_like(w), case.e_part(sign, w), sign, "product", "e"),), w)

    w = case.grid
    b = case.coupling
    e_s = case.e_part(s)
    e_o = case.e_part(o)
    P = lambda fn, vals, cls: _proj(fn, vals, cls)  # noqa: E731
    terms = []

    if case.tag in ("E_BRACKET_F", "E_BRACKET_G"):
        h = case.f if case.tag == "E_BRACKET_F" else case.g
        name = "f" if h is case.f else "g"
        bh = b * h.values
        if keep:
            terms.append(Term(b, P(h, e_s * h.values, s), s, "bracket", f"[e{s}{name}]{s}"))
            terms.append(Term(-e_s, P(h, bh, s), s, "product", f"e{s}[B{name}]{s}"))
        else:
            terms.append(Term(e_o, P(h, bh, o), o, "product", f"e{o}[B{name}]{o}"))
            terms.append(Term(b, P(h, e_s * h.values, o), o, "bracket", f"[e{s}{name}]{o}"))
        return Restricted(sign, tuple(terms), w)

    f, g = case.f, case.g
    fv, gv = f.values, g.values
    bb = b * b
    fe_o = P(f, fv * e_s, o)
    eg_o = P(g, e_s * gv, o)
    if keep:
        a_s, b_s = P(f, b * fv, s), P(g, b * gv, s)
        terms += [
            Term(bb, P(f, fv * e_s * gv, s), s, "bracket", f"[fe{s}g]{s}"),
            Term(-bb, P(f, fe_o * gv, s), s, "bracket", f"[[fe{s}]{o}g]{s}"),
            Term(-b, P(f, fv * e_s, s) * b_s, s, "product", f"[fe{s}]{s}[Bg]{s}"),
            Term(-bb, P(f, fv * eg_o, s), s, "bracket", f"[f[e{s}g]{o}]{s}"),
            Term(-b, a_s * P(g, e_s * gv, s), s, "product", f"[Bf]{s}[e{s}g]{s}"),
            Term(np.ones_like(w), a_s * e_s * b_s, s, "product", f"[Bf]{s}e{s}[Bg]{s}"),
        ]
    else:
        a_o, b_o = P(f, b * fv, o), P(g, b * gv, o)
        terms += [
            Term(np.ones_like(w), a_o * e_o * b_o, o, "product", f"[Bf]{o}e{o}[Bg]{o}"),
            Term(bb, P(f, fv * e_s * gv, o), o, "bracket", f"[fe{s}g]{o}"),
            Term(-bb, P(f, fe_o * gv, o), o, "bracket", f"[[fe{s}]{o}g]{o}"),
            Term(b, fe_o * b_o, o, "product", f"[fe{s}]{o}[Bg]{o}"),
            Term(-bb, P(f, eg_o * fv, o), o, "bracket", f"[[e{s}g]{o}f]{o}"),
            Term(b, eg_o * a_o, o, "product", f"[e{s}g]{o}[Bf]{o}"),
        ]
    return Restricted(sign, tuple(terms), w)


# ---------------------------------------------------------------------------
# scenario amplitudes at the pole

def restricted_survival(pole: ResonancePole, t):
    """Theta(t) N exp(-i z t) + Theta(-t) N_cc exp(-i z_cc t)."""
    t = np.asarray(t, dtype=float)
    out = (step(t) * pole.residue_N * np.exp(-1j * pole.z * t)
           + step(-t) * pole.residue_N_cc * np.exp(-1j * pole.z_cc * t))
    return out[()] if out.ndim == 0 else out


def _minus_at_pole(pole: ResonancePole, x):
    """[Theta(w) v(w) cos(w x)]^-(z) = C(z, |x|) / (2 pi i)."""
    return cos_cauchy(pole.z, np.abs(np.asarray(x, dtype=float)), pole.params) / (2j * math.pi)


def _check_positive_time(t):
    if not (np.ndim(t) == 0 and float(t) > 0):
        raise DomainError("restricted field amplitudes need a single time t > 0")
    return float(t)


def restricted_emission(pole: ResonancePole, t: float, x):
    """Restricted <x|e^{-iHt}|1> from the lower pole, t > 0.

    With f(w) = cos(w x)/sqrt(pi) the restricted expression is
    -2 pi i N lam ( v(z) [e f]^-(z) - e(z) [Theta v f]^-(z) ), i.e.

        -i sqrt(pi) lam N ( v(z) (Theta(t-|x|) e^{-iz(t-|x|)} + e^{-iz(t+|x|)})
                            - 2 e^{-izt} [Theta v cos(w x)]^-(z) ).
    """
    t = _check_positive_time(t)
    p = pole.params
    x = np.asarray(x, dtype=float)
    if p.lam == 0.0:
        return np.zeros(x.shape, dtype=complex)[()]
    z = pole.z
    a = np.abs(x)
    vz = form_factor(z, p)
    front = step(t - a) * np.exp(-1j * z * (t - a)) + np.exp(-1j * z * (t + a))
    k = _minus_at_pole(pole, a)
    out = -1j * math.sqrt(math.pi) * p.lam * pole.residue_N * (vz * front - 2.0 * np.exp(-1j * z * t) * k)
    return out[()] if np.ndim(out) == 0 else out


def restricted_correlation(pole: ResonancePole, t: float, x1, x2):
    """Restricted <x1|e^{-iHt}|x2> from the lower pole, t > 0.

    Six-term restriction of [Theta B f]^+ e [Theta B g]^+ with
    f = cos(w x1)/sqrt(pi), g = cos(w x2)/sqrt(pi), times N (-2 pi i)^2.
    """
    t = _check_positive_time(t)
    p = pole.params
    x1, x2 = np.broadcast_arrays(np.asarray(x1, dtype=float), np.asarray(x2, dtype=float))
    if p.lam == 0.0:
        return np.zeros(x1.shape, dtype=complex)[()]
    z = pole.z
    vz = form_factor(z, p)
    f = ExpSum.cosine(x1)
    g = ExpSum.cosine(x2)
    e = ExpSum.single(np.full(x1.shape, t))
    fe = f * e
    eg = e * g
    k1 = _minus_at_pole(pole, x1)
    k2 = _minus_at_pole(pole, x2)
    ez = np.exp(-1j * z * t)
    body = (
        vz * vz * ((fe * g).project("-").at(z)
                   - (fe.project("+") * g).project("-").at(z)
                   - (f * eg.project("+")).project("-").at(z))
        - vz * fe.project("-").at(z) * k2
        - vz * k1 * eg.project("-").at(z)
        + k1 * ez * k2
    )
    out = pole.residue_N * p.lam**2 * (2j * math.pi) ** 2 / math.pi * body
    return out[()] if np.ndim(out) == 0 else out


@dataclass(frozen=True)
class FreeFieldCorrelation:
    """<x1|e^{-iH0 t}|x2>: four deltas of weight 1/4 plus a smooth part.

    ``arguments`` are the delta arguments t +- x1 +- x2 with the sign of t
    absorbed, ``x1_positions`` the x1 values where each delta sits.
    ``smooth`` is -(i/pi) int_0^Omega cos(w x1) cos(w x2) sin(w t) dw and
    ``cutoff_sensitivity`` its change when Omega doubles.
    """

    arguments: np.ndarray
    x1_positions: np.ndarray
    weights: np.ndarray
    smooth: complex
    cutoff: float
    cutoff_sensitivity: float


def _smooth_free(t, x1, x2, omega):
    total = 0.0
    for s1 in (1.0, -1.0):
        for s2 in (1.0, -1.0):
            d = t + s1 * x1 + s2 * x2
            total += 0.0 if d == 0.0 else (1.0 - math.cos(omega * d)) / d
    return -1j * total / (4.0 * math.pi)


def free_field_correlation(t: float, x1: float, x2: float, omega_max: float = 24.0 * math.pi) -> FreeFieldCorrelation:
    t, x1, x2 = float(t), float(x1), float(x2)
    args = np.array([x1 - x2 - t, x1 + x2 - t, x1 - x2 + t, x1 + x2 + t])
    pos = np.array([x2 + t, -x2 + t, x2 - t, -x2 - t])
    smooth = _smooth_free(t, x1, x2, omega_max)
    sens = abs(_smooth_free(t, x1, x2, 2.0 * omega_max) - smooth)
    return FreeFieldCorrelation(args, pos, np.full(4, 0.25), smooth, omega_max, sens)
