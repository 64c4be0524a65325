"""Level-shift function, S-matrix, resonance pole and the continuum eigenstates.

The self-energy integral

    F(w) = int_0^inf v(w')^2 / (w - w') dw'

is evaluated by singularity subtraction on [0, Omega] plus a plain tail
integral on [Omega, inf).  With eta_I(w) = w - omega1 - lam^2 F(w), boundary
values on the positive axis follow from Plemelj:

    eta^{+-}(w) = w - omega1 - lam^2 PV F(w) +- i pi lam^2 v(w)^2.

Continuing eta from above through the cut gives the second sheet

    eta_II(w) = eta_I(w) + 2 pi i lam^2 v(w)^2,      Im w < 0,

whose zero near omega1 is the resonance pole z.
"""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate

from ._quad import cos_cauchy
from .errors import ConvergenceError, DomainError, QuadratureError, WrongBasinError
from .model import ModelParams, form_factor, form_factor_sq_derivative

__all__ = [
    "LevelShift",
    "ResonancePole",
    "LSState",
    "SeparationCoefficients",
    "eta",
    "s_matrix",
    "find_pole",
    "default_guess",
    "ls_state",
    "gamow_field",
    "separation_terms",
]

SHEETS = ("first", "second", "second-upper")


def _v2(w, M):
    u = 1.0 + (w / M) ** 2
    return 2.0 * w / (u * u)


@dataclass(frozen=True)
class LevelShift:
    """eta on both sheets for one set of model parameters.

    ``omega_split`` is where the subtracted near-field integral hands over to
    the tail integral; it defaults to 12 M and is pushed outward when the
    evaluation point sits close to it.
    """

    params: ModelParams
    epsabs: float = 1e-13
    epsrel: float = 1e-12
    omega_split: float | None = None
    limit: int = 400

    def _split(self, w) -> float:
        omega = self.omega_split if self.omega_split is not None else 12.0 * self.params.cutoff_M
        return max(omega, w.real + 5.0 * abs(w.imag) + 1.0)

    def _quad(self, fn, a, b, points=None):
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", integrate.IntegrationWarning)
            val, err = integrate.quad(
                fn, a, b, complex_func=True, points=points,
                epsabs=self.epsabs, epsrel=self.epsrel, limit=self.limit,
            )[:2]
        scale = max(abs(val), 1.0)
        # complex_func returns per-component error estimates
        err = abs(err[0]) + abs(err[1]) if isinstance(err, tuple) else abs(err)
        if not math.isfinite(abs(val)) or err > 1e3 * max(self.epsabs, self.epsrel * scale):
            raise QuadratureError(
                f"quadrature on [{a}, {b}] reached only {err:.2e} (requested {self.epsabs:.1e})"
            )
        return val

    # first sheet -------------------------------------------------------
    def self_energy(self, w: complex) -> complex:
        """F(w) on the physical sheet, w off [0, inf)."""
        w = complex(w)
        if w.imag == 0.0 and w.real >= 0.0:
            raise DomainError("the first-sheet integral is singular on [0, inf)")
        M = self.params.cutoff_M
        omega = self._split(w)
        vw = _v2(w, M)
        pts = [w.real] if 0.0 < w.real < omega else None
        near = self._quad(lambda s: (_v2(s, M) - vw) / (w - s), 0.0, omega, pts)
        log_term = vw * (cmath.log(w) - cmath.log(w - omega))
        tail = self._quad(lambda s: _v2(s, M) / (w - s), omega, math.inf)
        return near + log_term + tail

    def self_energy_derivative(self, w: complex) -> complex:
        """dF/dw = -int v^2/(w-w')^2 dw' with a first-order Taylor subtraction."""
        w = complex(w)
        if w.imag == 0.0 and w.real >= 0.0:
            raise DomainError("the first-sheet integral is singular on [0, inf)")
        M = self.params.cutoff_M
        omega = self._split(w)
        vw = _v2(w, M)
        dvw = form_factor_sq_derivative(w, self.params)
        pts = [w.real] if 0.0 < w.real < omega else None
        near = self._quad(
            lambda s: (_v2(s, M) - vw - dvw * (s - w)) / (w - s) ** 2, 0.0, omega, pts
        )
        analytic = vw * (1.0 / (w - omega) - 1.0 / w) - dvw * (cmath.log(w) - cmath.log(w - omega))
        tail = self._quad(lambda s: _v2(s, M) / (w - s) ** 2, omega, math.inf)
        return -(near + analytic + tail)

    def principal_value(self, omega_real: float) -> float:
        """PV int_0^inf v(w')^2 / (w - w') dw' for real w > 0."""
        w = float(omega_real)
        if w <= 0.0:
            raise DomainError("principal value needs a positive real energy")
        M = self.params.cutoff_M
        omega = self._split(complex(w))
        vw = _v2(w, M)
        near = self._quad(lambda s: (_v2(s, M) - vw) / (w - s), 0.0, omega, [w])
        log_term = vw * math.log(w / (omega - w))
        tail = self._quad(lambda s: _v2(s, M) / (w - s), omega, math.inf)
        return (near + log_term + tail).real

    # eta --------------------------------------------------------------
    def eta(self, w: complex, sheet: str = "first") -> complex:
        w = complex(w)
        p = self.params
        lam2 = p.lam**2
        _check_sheet(w, sheet, p)
        if lam2 == 0.0:
            return w - p.omega1
        value = w - p.omega1 - lam2 * self.self_energy(w)
        if sheet == "second":
            value += 2j * math.pi * lam2 * _v2(w, p.cutoff_M)
        elif sheet == "second-upper":
            value -= 2j * math.pi * lam2 * _v2(w, p.cutoff_M)
        return value

    def eta_derivative(self, w: complex, sheet: str = "first") -> complex:
        w = complex(w)
        p = self.params
        lam2 = p.lam**2
        _check_sheet(w, sheet, p)
        if lam2 == 0.0:
            return 1.0 + 0j
        value = 1.0 - lam2 * self.self_energy_derivative(w)
        jump = 2j * math.pi * lam2 * form_factor_sq_derivative(w, p)
        if sheet == "second":
            value += jump
        elif sheet == "second-upper":
            value -= jump
        return value

    def eta_boundary(self, omega_real: float, sign: str) -> complex:
        """eta^{+} or eta^{-} on the positive real axis via Plemelj splitting."""
        if sign not in ("+", "-"):
            raise ValueError("sign must be '+' or '-'")
        p = self.params
        w = float(omega_real)
        if w <= 0.0:
            raise DomainError("boundary values are defined for omega > 0")
        lam2 = p.lam**2
        if lam2 == 0.0:
            return complex(w - p.omega1)
        re = w - p.omega1 - lam2 * self.principal_value(w)
        im = math.pi * lam2 * _v2(w, p.cutoff_M)
        return complex(re, im if sign == "+" else -im)


def _check_sheet(w: complex, sheet: str, p: ModelParams):
    if sheet not in SHEETS:
        raise ValueError(f"sheet must be one of {SHEETS}, got {sheet!r}")
    if sheet == "first":
        if w.imag == 0.0 and w.real >= 0.0:
            raise DomainError("first sheet requires w off [0, inf); use eta_boundary on the cut")
    elif sheet == "second":
        if not (w.imag < 0.0 and abs(w.imag) < p.cutoff_M):
            raise DomainError("second sheet requires -M < Im w < 0")
    elif not (w.imag > 0.0 and abs(w.imag) < p.cutoff_M):
        raise DomainError("upper continuation requires 0 < Im w < M")


def _as_levelshift(ls) -> LevelShift:
    return ls if isinstance(ls, LevelShift) else LevelShift(ls)


def eta(w: complex, ls, sheet: str = "first") -> complex:
    """eta(w) on the requested sheet; ``ls`` is a LevelShift or ModelParams."""
    return _as_levelshift(ls).eta(w, sheet)


def s_matrix(omega_real: float, ls) -> complex:
    """S(omega) = eta^-(omega) / eta^+(omega)."""
    ls = _as_levelshift(ls)
    ep = ls.eta_boundary(omega_real, "+")
    return ep.conjugate() / ep


@dataclass(frozen=True)
class ResonancePole:
    """Second-sheet zero z of eta and its residue N = 1 / eta_II'(z)."""

    z: complex
    residue_N: complex
    params: ModelParams
    eta_residual: float = 0.0
    iterations: int = 0
    sheet: str = "second-from-above"

    @property
    def z_cc(self) -> complex:
        return self.z.conjugate()

    @property
    def residue_N_cc(self) -> complex:
        return self.residue_N.conjugate()

    @property
    def decay_rate(self) -> float:
        return -2.0 * self.z.imag


def default_guess(params: ModelParams) -> complex:
    """omega1 - i pi lam^2 v(omega1)^2, the golden-rule estimate."""
    return complex(params.omega1, -math.pi * params.lam**2 * _v2(params.omega1, params.cutoff_M))


def _muller(fn, x0, x1, x2, tol, max_iter):
    f0, f1, f2 = fn(x0), fn(x1), fn(x2)
    for it in range(max_iter):
        h1, h2 = x1 - x0, x2 - x1
        d1, d2 = (f1 - f0) / h1, (f2 - f1) / h2
        a = (d2 - d1) / (h2 + h1)
        b = a * h2 + d2
        disc = cmath.sqrt(b * b - 4 * a * f2)
        den = b + disc if abs(b + disc) > abs(b - disc) else b - disc
        step = -2 * f2 / den
        x0, x1, x2 = x1, x2, x2 + step
        f0, f1, f2 = f1, f2, fn(x2)
        if abs(step) < tol * max(1.0, abs(x2)):
            return x2, it + 1
    raise ConvergenceError(f"Muller iteration did not converge in {max_iter} steps")


def find_pole(ls, guess: complex | None = None, *, tol: float = 1e-10, max_iter: int = 50) -> ResonancePole:
    """Newton iteration on eta_II from ``guess``; Muller as fallback."""
    ls = _as_levelshift(ls)
    p = ls.params
    if p.lam == 0.0:
        return ResonancePole(complex(p.omega1, 0.0), 1.0 + 0j, p, 0.0, 0)
    z = default_guess(p) if guess is None else complex(guess)
    if not z.imag < 0.0:
        raise DomainError("the pole guess must lie in the lower half plane")

    def f(w):
        if not (-p.cutoff_M < w.imag < 0.0):
            raise ConvergenceError(f"iterate {w} left the second-sheet window")
        return ls.eta(w, "second")

    iterations = 0
    try:
        for iterations in range(1, max_iter + 1):
            step = f(z) / ls.eta_derivative(z, "second")
            z = z - step
            if abs(step) < 1e-14 * abs(z):
                break
        else:
            raise ConvergenceError("Newton iteration did not converge")
    except (ConvergenceError, ZeroDivisionError, OverflowError):
        start = default_guess(p) if guess is None else complex(guess)
        h = 1e-3 * max(abs(start.imag), 1e-6)
        z, iterations = _muller(f, start - h, start + h, start - 1j * h, 1e-15, max_iter)
    residual = abs(f(z))
    if residual >= tol:
        raise ConvergenceError(f"|eta_II(z)| = {residual:.2e} did not reach {tol:.1e}")
    if abs(z - p.omega1) > 1.0:
        raise WrongBasinError(f"converged to z={z}, farther than 1 from omega1={p.omega1}")
    N = 1.0 / ls.eta_derivative(z, "second")
    return ResonancePole(complex(z), complex(N), p, float(residual), iterations)


@dataclass(frozen=True)
class LSState:
    """Scattering eigenstate |F^{+-}_omega> expressed through its kernel.

    <1|F> = discrete_amp.  The field component is
    delta(w - w') + field_kernel(w') / (omega - w' +- i0), split by Plemelj into
    a principal-value part and an on-shell delta of weight ``onshell_weight``.
    """

    omega: float
    branch: str
    discrete_amp: complex
    eta_value: complex
    coupling: float

    def field_kernel(self, omega_prime, params: ModelParams):
        """lam v_omega lam v_w' / eta(omega), the coefficient of 1/(omega - w')."""
        vp = form_factor(np.asarray(omega_prime, dtype=float), params)
        return self.coupling * params.lam * vp / self.eta_value

    @property
    def onshell_weight(self) -> complex:
        sign = -1.0 if self.branch == "+" else 1.0
        return sign * 1j * math.pi * self.coupling**2 / self.eta_value


def ls_state(omega_real: float, branch: str, ls) -> LSState:
    ls = _as_levelshift(ls)
    p = ls.params
    if branch not in ("+", "-"):
        raise ValueError("branch must be '+' or '-'")
    e = ls.eta_boundary(omega_real, branch)
    lv = p.lam * float(form_factor(float(omega_real), p))
    return LSState(float(omega_real), branch, lv / e, e, lv)


def gamow_field(x, pole: ResonancePole, *, continued: bool = True):
    """<x|phi_z> for the decaying Gamow state.

    The direct integral N^{1/2} lam int_0^inf v cos(wx) / (sqrt(pi) (z - w)) dw
    is continued from above to the second-sheet point z, which adds
    -2 pi i v(z) cos(z x).  The continued field grows like exp(|Im z| |x|);
    ``continued=False`` returns the bare first-sheet integral instead.
    """
    p = pole.params
    x = np.asarray(x, dtype=float)
    if p.lam == 0.0:
        out = np.zeros(x.shape, dtype=complex)
        return out[()] if out.ndim == 0 else out
    z = pole.z
    integral = cos_cauchy(z, np.abs(x), p)
    if continued:
        integral = integral - 2j * math.pi * form_factor(z, p) * np.cos(z * x)
    out = cmath.sqrt(pole.residue_N) * p.lam / math.sqrt(math.pi) * integral
    return out[()] if np.ndim(out) == 0 else out


@dataclass(frozen=True)
class SeparationCoefficients:
    """A, A^c and B of the three-way decomposition at one energy."""

    omega: float
    eta_plus: complex
    coupling: float
    params: ModelParams = field(repr=False)

    @property
    def eta_minus(self) -> complex:
        return self.eta_plus.conjugate()

    @property
    def A(self) -> complex:
        return -1.0 / (2j * math.pi * self.eta_plus)

    @property
    def A_c(self) -> complex:
        return 1.0 / (2j * math.pi * self.eta_minus)

    def B(self, omega_prime):
        """lam v(w'), independent of omega for this model."""
        return self.params.lam * form_factor(np.asarray(omega_prime, dtype=float), self.params)

    def resolution_residual(self) -> float:
        """|A + A^c - |<1|F_omega>|^2|: the pole terms rebuild the |1> row."""
        density = self.coupling**2 / abs(self.eta_plus) ** 2
        return abs(self.A + self.A_c - density)

    def identity_residual(self) -> float:
        """<1|F>/<omega|V|F> against <F|1>/<F|V|omega>; both are 1/(lam v)."""
        amp = self.coupling / self.eta_plus
        lhs = amp / (self.coupling * amp)
        rhs = amp.conjugate() / (amp.conjugate() * self.coupling)
        return abs(lhs - rhs)


def separation_terms(omega_real: float, ls) -> SeparationCoefficients:
    ls = _as_levelshift(ls)
    p = ls.params
    if omega_real <= 0:
        raise DomainError("separation coefficients need omega > 0")
    e = ls.eta_boundary(omega_real, "+")
    lv = p.lam * float(form_factor(float(omega_real), p))
    return SeparationCoefficients(float(omega_real), e, lv, p)
