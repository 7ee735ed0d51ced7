"""Numeric kernels: exact-rational polynomials, Hermite polynomials,
adaptive quadrature, bracketed root finding and the inverse error function.
"""

from __future__ import annotations

import math
from fractions import Fraction

from .errors import QuadratureError


class RationalPolynomial:
    """Polynomial with exact rational coefficients, index = power."""

    __slots__ = ("coeffs",)

    def __init__(self, coefficients):
        coeffs = [Fraction(c) for c in coefficients]
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        self.coeffs = tuple(coeffs)

    @property
    def degree(self):
        # degree of the zero polynomial is -1 by convention
        return len(self.coeffs) - 1

    def __eq__(self, other):
        return isinstance(other, RationalPolynomial) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"RationalPolynomial({list(self.coeffs)})"

    def __add__(self, other):
        other = _as_poly(other)
        n = max(len(self.coeffs), len(other.coeffs))
        a = list(self.coeffs) + [Fraction(0)] * (n - len(self.coeffs))
        b = list(other.coeffs) + [Fraction(0)] * (n - len(other.coeffs))
        return RationalPolynomial([x + y for x, y in zip(a, b)])

    def __sub__(self, other):
        return self + (_as_poly(other) * Fraction(-1))

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return RationalPolynomial([c * other for c in self.coeffs])
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1 or 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return RationalPolynomial(out)

    __rmul__ = __mul__

    def compose(self, inner: "RationalPolynomial") -> "RationalPolynomial":
        """Return self(inner(x)) by Horner evaluation over polynomials."""
        result = RationalPolynomial([])
        for c in reversed(self.coeffs):
            result = result * inner + RationalPolynomial([c])
        return result

    def differentiate(self) -> "RationalPolynomial":
        return RationalPolynomial(
            [k * c for k, c in enumerate(self.coeffs)][1:]
        )

    def __call__(self, x):
        result = x * 0  # preserves Fraction vs float arithmetic
        for c in reversed(self.coeffs):
            result = result * x + (c if isinstance(x, Fraction) else float(c))
        return result


def _as_poly(value):
    if isinstance(value, RationalPolynomial):
        return value
    return RationalPolynomial([value])


def hermite(n: int) -> RationalPolynomial:
    """Physicist's Hermite polynomial H_n with exact integer coefficients.

    Uses the explicit sum H_n(x) = n! sum_k (-1)^k (2x)^(n-2k) / (k! (n-2k)!).
    """
    if n < 0:
        raise ValueError("Hermite order must be non-negative")
    coeffs = [Fraction(0)] * (n + 1)
    for k in range(n // 2 + 1):
        power = n - 2 * k
        coeffs[power] = Fraction(
            (-1) ** k * math.factorial(n) * 2**power,
            math.factorial(k) * math.factorial(power),
        )
    return RationalPolynomial(coeffs)


def _simpson(f_a, f_m, f_b, h):
    return h / 6.0 * (f_a + 4.0 * f_m + f_b)


def integrate(f, lower: float, upper: float, tol: float = 1e-10,
              initial_panels: int = 32, max_depth: int = 60) -> float:
    """Adaptive-Simpson estimate of the integral of ``f`` on [lower, upper].

    The interval is pre-split into ``initial_panels`` panels so narrow
    features cannot be missed by the first coarse estimate.  Raises
    QuadratureError (carrying the best estimate) if the depth budget is
    exhausted anywhere.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    if upper == lower:
        return 0.0
    if upper < lower:
        return -integrate(f, upper, lower, tol, initial_panels, max_depth)

    panel_tol = tol / initial_panels
    total = 0.0
    failed = False
    width = (upper - lower) / initial_panels
    for i in range(initial_panels):
        a = lower + i * width
        b = a + width
        m = 0.5 * (a + b)
        fa, fm, fb = f(a), f(m), f(b)
        whole = _simpson(fa, fm, fb, b - a)
        value, ok = _adaptive(f, a, b, fa, fm, fb, whole, panel_tol, max_depth)
        total += value
        failed = failed or not ok
    if failed:
        raise QuadratureError(
            f"quadrature did not converge to tol={tol} within depth {max_depth}",
            best_estimate=total,
        )
    return total


def _adaptive(f, a, b, fa, fm, fb, whole, tol, depth):
    m = 0.5 * (a + b)
    lm = 0.5 * (a + m)
    rm = 0.5 * (m + b)
    flm, frm = f(lm), f(rm)
    left = _simpson(fa, flm, fm, m - a)
    right = _simpson(fm, frm, fb, b - m)
    delta = left + right - whole
    if abs(delta) <= 15.0 * tol:
        return left + right + delta / 15.0, True
    if depth <= 0:
        return left + right + delta / 15.0, False
    lv, lok = _adaptive(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1)
    rv, rok = _adaptive(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
    return lv + rv, lok and rok


def bisect(f, a: float, b: float, tol: float = 1e-12, max_iter: int = 200) -> float:
    """Bisection on a sign-change bracket [a, b]; |f| <= tol or width <= tol."""
    fa, fb = f(a), f(b)
    if fa == 0.0:
        return a
    if fb == 0.0:
        return b
    if fa * fb > 0:
        raise ValueError("bisect requires a sign change on [a, b]")
    for _ in range(max_iter):
        m = 0.5 * (a + b)
        fm = f(m)
        if abs(fm) <= tol or (b - a) <= tol:
            return m
        if fa * fm < 0:
            b, fb = m, fm
        else:
            a, fa = m, fm
    return 0.5 * (a + b)


def find_roots(f, interval, grid_points: int = 4096, tol: float = 1e-12):
    """All roots of ``f`` on ``interval`` found by a sign-change grid scan
    refined by bisection.  Returns roots in ascending order; an empty list
    means no sign change was observed on the grid.
    """
    if grid_points < 2:
        raise ValueError("grid_points must be >= 2")
    lo, hi = interval
    xs = [lo + (hi - lo) * i / (grid_points - 1) for i in range(grid_points)]
    fs = [f(x) for x in xs]
    roots = []
    for i in range(grid_points - 1):
        f0, f1 = fs[i], fs[i + 1]
        if f0 == 0.0:
            if not roots or abs(roots[-1] - xs[i]) > tol:
                roots.append(xs[i])
        elif f0 * f1 < 0:
            r = bisect(f, xs[i], xs[i + 1], tol)
            if not roots or abs(roots[-1] - r) > tol:
                roots.append(r)
    if fs[-1] == 0.0 and (not roots or abs(roots[-1] - xs[-1]) > tol):
        roots.append(xs[-1])
    return roots


def inverse_erf(p: float) -> float:
    """Inverse error function on (-1, 1).

    Polynomial initial approximation (Giles-style, valid to single
    precision) followed by Newton steps on erf, giving <= 1e-12 relative
    error across the open interval.
    """
    if not -1.0 < p < 1.0:
        raise ValueError("inverse_erf argument must lie in (-1, 1)")
    if p == 0.0:
        return 0.0
    w = -math.log((1.0 - p) * (1.0 + p))
    if w < 5.0:
        w -= 2.5
        y = 2.81022636e-08
        for c in (3.43273939e-07, -3.5233877e-06, -4.39150654e-06,
                  0.00021858087, -0.00125372503, -0.00417768164,
                  0.246640727, 1.50140941):
            y = c + y * w
    else:
        w = math.sqrt(w) - 3.0
        y = -0.000200214257
        for c in (0.000100950558, 0.00134934322, -0.00367342844,
                  0.00573950773, -0.0076224613, 0.00943887047,
                  1.00167406, 2.83297682):
            y = c + y * w
    y *= p
    # Newton polish: y <- y - (erf(y) - p) / erf'(y)
    half_sqrt_pi = 0.5 * math.sqrt(math.pi)
    for _ in range(3):
        err = math.erf(y) - p
        y -= err * half_sqrt_pi * math.exp(y * y)
    return y
