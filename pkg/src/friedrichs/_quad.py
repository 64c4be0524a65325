"""Contour-rotated quadrature for oscillatory Cauchy integrals of the form factor.

    C(y, a) = int_0^inf v(w) cos(w a) / (y - w) dw,      Im y != 0, a >= 0.

cos is split into exp(+iwa) and exp(-iwa).  Each half is moved onto a ray
w = exp(+-i theta) u on which it decays exponentially; the rays stay clear of
the form-factor poles at +-iM.  Crossing y while rotating adds a residue.
The ray integrals use an exp-sinh rule, which absorbs the sqrt(w) endpoint
behaviour at zero and the algebraic tail at infinity.
"""

from __future__ import annotations

import math

import numpy as np

from .model import ModelParams

_TAU_MAX = 4.5
_STEP = 1.0 / 24.0


def _exp_sinh_nodes(step=_STEP, tau_max=_TAU_MAX):
    tau = np.arange(-tau_max, tau_max + step / 2, step)
    u = np.exp(0.5 * math.pi * np.sinh(tau))
    w = step * 0.5 * math.pi * np.cosh(tau) * u
    keep = np.isfinite(u) & (u < 1e150)
    return u[keep], w[keep]


_NODES = _exp_sinh_nodes()


def _v(w, M):
    return math.sqrt(2.0) * np.sqrt(w) / (1.0 + (w / M) ** 2)


def _ray_angle(arg_y: float, sign: int) -> float:
    """Pick a rotation angle at least ~0.15 rad away from arg(y)."""
    for theta in (math.pi / 4, math.pi / 3, math.pi / 6):
        if abs(arg_y - sign * theta) > 0.15:
            return theta
    return math.pi / 4


def exp_cauchy(y: complex, a, params: ModelParams, sign: int):
    """int_0^inf v(w) exp(sign*i*w*a) / (y - w) dw for each a >= 0."""
    a = np.atleast_1d(np.asarray(a, dtype=float))
    y = complex(y)
    M = params.cutoff_M
    arg_y = math.atan2(y.imag, y.real)
    theta = _ray_angle(arg_y, sign)
    rot = complex(math.cos(sign * theta), math.sin(sign * theta))
    u, wts = _NODES
    w = rot * u
    base = _v(w, M) * rot * wts / (y - w)
    phase = np.exp(1j * sign * np.multiply.outer(a, w))
    total = phase @ base
    # the swept sector lies between the real axis and the ray
    if sign > 0 and 0.0 < arg_y < theta:
        total = total - 2j * math.pi * _v(y, M) * np.exp(1j * y * a)
    elif sign < 0 and -theta < arg_y < 0.0:
        total = total + 2j * math.pi * _v(y, M) * np.exp(-1j * y * a)
    return total


def cos_cauchy(y: complex, a, params: ModelParams):
    """C(y, a) for scalar complex y off the real axis and array a."""
    y = complex(y)
    if y.imag == 0.0:
        raise ValueError("cos_cauchy needs y off the real axis")
    a = np.abs(np.asarray(a, dtype=float))
    scalar = a.ndim == 0
    out = 0.5 * (exp_cauchy(y, a, params, +1) + exp_cauchy(y, a, params, -1))
    return out[0] if scalar else out
