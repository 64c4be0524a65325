"""Reference implementations that share no code with the package.

* self-energy in closed form (partial fractions, one principal log)
* Mueller root finder on that closed form
* QUADPACK Fourier-weight integrals for C(y, a)
* the Faddeeva function for Hardy parts of a Gaussian
"""

import cmath
import math

import numpy as np
from scipy import integrate, special


def v2(w, M):
    return 2.0 * w * M**4 / (w * w + M * M) ** 2


def self_energy(w, M):
    """int_0^inf v2(s)/(w - s) ds for w off [0, inf), in closed form.

    s / ((s^2+M^2)^2 (w-s)) = A/(w-s) + (A s + C)/(s^2+M^2) + (D s + E)/(s^2+M^2)^2
    with A = w/(w^2+M^2)^2; C, D, E follow from matching polynomial coefficients.
    """
    w = complex(w)
    A = w / (w * w + M * M) ** 2
    # match at five sample points: s - A (s^2+M^2)^2 - A s (s^2+M^2)(w-s) = C (s^2+M^2)(w-s) + (D s + E)(w-s)
    pts = np.array([0.3, 1.1, 2.7, 4.2, 6.9])
    q = pts * pts + M * M
    rhs = pts - A * q**2 - A * pts * q * (w - pts)
    mat = np.column_stack([q * (w - pts), pts * (w - pts), w - pts])
    (C, D, E), *_ = np.linalg.lstsq(mat.astype(complex), rhs.astype(complex), rcond=None)
    total = (A * cmath.log(-w / M) + C * math.pi / (2 * M) + D / (2 * M * M)
             + E * math.pi / (4 * M**3))
    return 2.0 * M**4 * total


def eta_first(w, omega1, lam, M):
    return w - omega1 - lam**2 * self_energy(w, M)


def eta_second(w, omega1, lam, M):
    """First-sheet values continued downward through the positive axis."""
    return eta_first(w, omega1, lam, M) + 2j * math.pi * lam**2 * v2(w, M)


def principal_value(omega, M):
    """PV int_0^inf v2(s)/(omega - s) ds.

    On the real axis the partial-fraction coefficients are real, so the two
    boundary values differ only through the imaginary part of the log.
    """
    return self_energy(complex(omega, 0.0), M).real


def mueller(fn, x0, x1, x2, tol=1e-14, max_iter=100):
    f0, f1, f2 = fn(x0), fn(x1), fn(x2)
    for _ in range(max_iter):
        h1, h2 = x1 - x0, x2 - x1
        d1, d2 = (f1 - f0) / h1, (f2 - f1) / h2
        a = (d2 - d1) / (h2 + h1)
        b = a * h2 + d2
        disc = cmath.sqrt(b * b - 4 * f2 * a)
        den = b + disc if abs(b + disc) > abs(b - disc) else b - disc
        dx = -2 * f2 / den
        x0, x1, x2 = x1, x2, x2 + dx
        f0, f1, f2 = f1, f2, fn(x2)
        if abs(dx) < tol * max(1.0, abs(x2)):
            return x2
    raise RuntimeError("Mueller iteration did not converge")


def pole(omega1=2.0, lam=0.1, M=5.0):
    """(z, N) from Mueller on the closed form; N from a central difference."""
    fn = lambda w: eta_second(w, omega1, lam, M)  # noqa: E731
    g = omega1 - 0.05j
    z = mueller(fn, g - 0.05, g + 0.05, g - 0.02j)
    h = 1e-5
    deriv = (fn(z + h) - fn(z - h)) / (2 * h)
    return z, 1.0 / deriv


def cos_cauchy(y, a, M):
    """int_0^inf v(s) cos(a s)/(y - s) ds by QUADPACK, y off the real axis."""
    v = lambda s: math.sqrt(2.0 * s) / (1.0 + (s / M) ** 2)  # noqa: E731
    re = lambda s: (v(s) / (y - s)).real  # noqa: E731
    im = lambda s: (v(s) / (y - s)).imag  # noqa: E731
    if a == 0:
        opts = dict(limit=500, epsabs=1e-13, epsrel=1e-12)
        return (integrate.quad(re, 0, np.inf, **opts)[0]
                + 1j * integrate.quad(im, 0, np.inf, **opts)[0])
    # split at 1 so the sqrt endpoint is handled by plain QAGS
    head = integrate.quad(lambda s: re(s) * math.cos(a * s), 0, 1, limit=500, epsabs=1e-14)[0] \
        + 1j * integrate.quad(lambda s: im(s) * math.cos(a * s), 0, 1, limit=500, epsabs=1e-14)[0]
    tail_re = integrate.quad(lambda s: re(s + 1), 0, np.inf, weight="cos", wvar=a, limlst=200)[0]
    tail_im = integrate.quad(lambda s: im(s + 1), 0, np.inf, weight="cos", wvar=a, limlst=200)[0]
    # shift: cos(a (s+1)) = cos(a s) cos a - sin(a s) sin a
    tail_re_s = integrate.quad(lambda s: re(s + 1), 0, np.inf, weight="sin", wvar=a, limlst=200)[0]
    tail_im_s = integrate.quad(lambda s: im(s + 1), 0, np.inf, weight="sin", wvar=a, limlst=200)[0]
    tail = (tail_re + 1j * tail_im) * math.cos(a) - (tail_re_s + 1j * tail_im_s) * math.sin(a)
    return head + tail


def gaussian_plus(omega):
    """[exp(-w^2)]^+ on the real axis: w(omega)/2 with w the Faddeeva function."""
    return special.wofz(np.asarray(omega, dtype=complex)) / 2.0
