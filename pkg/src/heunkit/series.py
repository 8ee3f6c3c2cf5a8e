"""Frobenius series around regular singular points.

``frobenius_series`` works on any rational-coefficient LinearODE: the
equation is cleared of denominators into A(s) w'' + B(s) w' + C(s) w = 0
with s the local variable, normalized so A has a double root at s = 0.
Writing w = s**rho * sum h_k s**k, the coefficient of s**(n+rho) gives

    sum_j a_j (n+2-j+rho)(n+1-j+rho) h_{n+2-j}
  + sum_j b_j (n+1-j+rho) h_{n+1-j}
  + sum_j c_j h_{n-j} = 0,

whose h_n coefficient is the indicial polynomial evaluated at rho + n.
Division by it fails exactly when the exponents differ by the integer n;
that is the logarithmic case and the builder refuses rather than return
a wrong series.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

from .errors import LogarithmicCase, NotRegular, OutsideRadius
from .ode import _indicial_roots
from .poly import Polynomial

INTEGER_TOL = 1e-9


@dataclass(frozen=True)
class LocalSeries:
    """w(z) = (z - center)**exponent * sum coeffs[k] (z - center)**k, with
    coeffs[0] = 1 and the stated convergence radius."""

    center: complex
    exponent: complex
    coeffs: tuple
    radius: float


class SeriesValue(NamedTuple):
    w: complex
    dw: complex
    tail: float


def _local_polynomials(ode, z0):
    """Clear denominators at z0: returns (A, B, C) with A = s^2 * (unit part).

    Raises NotRegular when the pole orders exceed the regular bounds.
    """
    p = ode.p.shifted(z0)
    q = ode.q.shifted(z0)

    def split_zero_root(poly, limit):
        mult = 0
        while mult < limit:
            scale = max(poly.scale(), 1e-300)
            if abs(poly(0j)) > 1e-12 * scale:
                break
            poly = poly.deflate(0j)
            mult += 1
        return mult, poly

    alpha, dp_unit = split_zero_root(p.den, 4)
    beta, dq_unit = split_zero_root(q.den, 5)
    if alpha > 1 or beta > 2:
        raise NotRegular(f"point {z0} is irregular (pole orders {alpha}, {beta})")
    if alpha == 0 and beta == 0:
        raise NotRegular(f"point {z0} is ordinary, not regular singular")

    def s_pow(k):
        return Polynomial((0j,) * k + (1.0 + 0j,))

    A = s_pow(2) * dp_unit * dq_unit
    B = s_pow(2 - alpha) * p.num * dq_unit
    C = s_pow(2 - beta) * q.num * dp_unit
    return A, B, C


def _series_radius(ode, z0):
    """Distance from z0 to the nearest other finite singular point."""
    best = math.inf
    for loc, _, _ in ode.finite_singular_points():
        d = abs(loc - z0)
        if d > 1e-9 * max(1.0, abs(z0)):
            best = min(best, d)
    return best


def local_exponents(ode, z0):
    """Indicial exponents read from the cleared local polynomials."""
    A, B, C = _local_polynomials(ode, z0)
    a2 = A.coeffs[2] if A.degree >= 2 else 0j
    b1 = B.coeffs[1] if B.degree >= 1 else 0j
    c0 = C.coeffs[0]
    # indicial polynomial a2*r*(r-1) + b1*r + c0
    return _indicial_roots(b1 / a2, c0 / a2), (A, B, C)


def frobenius_series(ode, z0, branch="first", n_terms=60):
    """Frobenius solution at a regular singular point of any rational ODE.

    branch="first" takes the exponent with the larger real part (the
    solution that always exists); "second" takes the other one and raises
    LogarithmicCase when the exponents differ by an integer.
    """
    z0 = complex(z0)
    (r1, r2), (A, B, C) = local_exponents(ode, z0)
    diff = r1 - r2
    integral = abs(diff.imag) <= INTEGER_TOL and \
        abs(diff.real - round(diff.real)) <= INTEGER_TOL
    if branch == "second":
        if integral:
            raise LogarithmicCase(
                f"exponents {r1}, {r2} differ by an integer; the second "
                "solution carries a logarithm")
        rho = r2
    elif branch == "first":
        rho = r1
    else:
        raise ValueError(f"branch must be 'first' or 'second', got {branch!r}")

    a = list(A.coeffs)
    b = list(B.coeffs)
    c = list(C.coeffs)
    a2 = a[2]
    b1 = b[1] if len(b) > 1 else 0j

    def indicial(x):
        return a2 * x * (x - 1.0) + b1 * x + (c[0] if c else 0j)

    scale = max(abs(v) for v in (a + b + c)) or 1.0
    h = [1.0 + 0j]
    for n in range(1, n_terms + 1):
        acc = 0j
        for j, aj in enumerate(a):
            if j < 3:
                continue
            m = n + 2 - j
            if 0 <= m < n:
                acc += aj * h[m] * (m + rho) * (m + rho - 1.0)
        for j, bj in enumerate(b):
            if j < 2:
                continue
            m = n + 1 - j
            if 0 <= m < n:
                acc += bj * h[m] * (m + rho)
        for j, cj in enumerate(c):
            if j < 1:
                continue
            m = n - j
            if 0 <= m < n:
                acc += cj * h[m]
        f = indicial(rho + n)
        if abs(f) <= 1e-12 * scale * max(1.0, n * n):
            raise LogarithmicCase(
                f"recurrence pivot vanishes at order {n}; exponents are "
                "resonant and this branch needs a logarithm")
        h.append(-acc / f)
    return LocalSeries(z0, rho, tuple(h), _series_radius(ode, z0))


def ratio_radius_estimate(series, window=12):
    """Diagnostic radius estimate from trailing coefficient ratios.

    Three-term recurrences make individual ratios noisy, so the median of
    the last `window` ratios is used. The stored LocalSeries radius comes
    from the exact distance to the nearest singular point; this estimate
    exists only to cross-check it.
    """
    coeffs = [c for c in series.coeffs if abs(c) > 0.0]
    if len(coeffs) < 4:
        return math.inf
    window = min(window, len(coeffs) - 1)
    ratios = sorted(abs(coeffs[k] / coeffs[k + 1])
                    for k in range(len(coeffs) - window - 1, len(coeffs) - 1))
    return ratios[len(ratios) // 2]


def eval_local(series, z):
    """Evaluate a LocalSeries and its derivative at z.

    Returns SeriesValue(w, dw, tail) where tail is the magnitude of the
    last retained term (a truncation estimate). Raises OutsideRadius when
    |z - center| >= radius.
    """
    s = complex(z) - series.center
    if abs(s) >= series.radius:
        raise OutsideRadius(
            f"|z - center| = {abs(s):.6g} >= radius {series.radius:.6g}")
    # Horner for S = sum h_k s^k and T = sum k h_k s^(k-1)
    S = 0j
    T = 0j
    for k in range(len(series.coeffs) - 1, -1, -1):
        S = S * s + series.coeffs[k]
        if k >= 1:
            T = T * s + k * series.coeffs[k]
    rho = series.exponent
    if s == 0:
        if rho == 0:
            dw = series.coeffs[1] if len(series.coeffs) > 1 else 0j
            return SeriesValue(series.coeffs[0], dw, 0.0)
        raise OutsideRadius(
            "evaluation exactly at the expansion center needs exponent 0")
    head = s ** rho
    w = head * S
    dw = head * (rho * S / s + T)
    n = len(series.coeffs) - 1
    tail = abs(series.coeffs[n]) * abs(s) ** n * abs(head)
    return SeriesValue(w, dw, tail)
