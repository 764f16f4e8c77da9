"""Integer cubics: length, irreducibility, discriminant, depressed form and
a certified Mahler measure.

The Mahler measure is the only inexact quantity here. It is computed from
closed-form roots in multiprecision floating point, polished by Newton
steps, and certified by an exact rational evaluation of ``f`` and ``f'`` at
the polished roots: for a degree-n polynomial the disc of radius
``n * |f(z)| / |f'(z)|`` around ``z`` always holds a root, and pairwise
disjoint discs pin each root down individually.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

import mpmath

from .errors import CertificationError, PreconditionError

MEASURE_TOLERANCE = 1e-9
START_PRECISION = 64
MAX_PRECISION = 4096


@dataclass(frozen=True)
class CubicPoly:
    """The integer polynomial ``a*x^3 + b*x^2 + c*x + d`` with ``a >= 1``."""

    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        if self.a < 1:
            raise PreconditionError(f"leading coefficient must be >= 1, got {self.a}")

    @property
    def coeffs(self) -> tuple[int, int, int, int]:
        return (self.a, self.b, self.c, self.d)

    def __call__(self, x):
        return ((self.a * x + self.b) * x + self.c) * x + self.d

    def derivative(self, x):
        return (3 * self.a * x + 2 * self.b) * x + self.c

    def __str__(self) -> str:
        return format_poly(self.coeffs)

    @classmethod
    def parse(cls, text: str) -> CubicPoly:
        """Parse strings such as ``"2x^3 - x^2 + 2"`` or ``"x**3-2*x-2"``."""
        s = text.replace(" ", "").replace("**", "^").replace("*", "")
        if not s:
            raise ValueError("empty polynomial")
        if s[0] not in "+-":
            s = "+" + s
        coeffs = [0, 0, 0, 0]
        pos = 0
        for m in _TERM_RE.finditer(s):
            if m.start() != pos:
                raise ValueError(f"cannot parse polynomial {text!r}")
            pos = m.end()
            sign, num, var, exp = m.groups()
            if not num and not var:
                raise ValueError(f"cannot parse polynomial {text!r}")
            k = int(num) if num else 1
            deg = (int(exp) if exp else 1) if var else 0
            if deg > 3:
                raise ValueError(f"degree {deg} term in {text!r}")
            coeffs[3 - deg] += -k if sign == "-" else k
        if pos != len(s):
            raise ValueError(f"cannot parse polynomial {text!r}")
        return cls(*coeffs)


_TERM_RE = re.compile(r"([+-])(\d*)(x)?(?:\^(\d+))?")


def format_poly(coeffs) -> str:
    """Render coefficients (highest degree first) as ``x^3 - 2x^2 - x - 3``."""
    deg = len(coeffs) - 1
    parts = []
    for i, k in enumerate(coeffs):
        if k == 0:
            continue
        e = deg - i
        mag = abs(k)
        if e == 0:
            body = str(mag)
        else:
            body = ("" if mag == 1 else str(mag)) + ("x" if e == 1 else f"x^{e}")
        if not parts:
            parts.append(("-" if k < 0 else "") + body)
        else:
            parts.append(("- " if k < 0 else "+ ") + body)
    return " ".join(parts) if parts else "0"


@dataclass(frozen=True)
class DepressedForm:
    """``x^3 + A x + B`` together with ``Delta = B^2 + 4 A^3 / 27``."""

    A: Fraction
    B: Fraction
    Delta: Fraction


class MeasureValue(NamedTuple):
    value: float
    error_bound: float

    @property
    def lower(self) -> float:
        return self.value - self.error_bound

    @property
    def upper(self) -> float:
        return self.value + self.error_bound

    def overlaps(self, other: MeasureValue) -> bool:
        return self.lower <= other.upper and other.lower <= self.upper

    def certainly_less(self, other: MeasureValue) -> bool:
        return self.upper < other.lower

    @property
    def height(self) -> float:
        return math.log(self.value) / 3

    @property
    def height_error(self) -> float:
        # d/dM log(M)/3 = 1/(3M) <= 1/3 since M >= 1
        return self.error_bound / 3


def length(f: CubicPoly) -> int:
    return sum(abs(k) for k in f.coeffs)


def discriminant(f: CubicPoly) -> int:
    a, b, c, d = f.coeffs
    return b * b * c * c - 4 * a * c**3 - 4 * b**3 * d - 27 * a * a * d * d + 18 * a * b * c * d


def _divisors(n: int) -> list[int]:
    n = abs(n)
    small = [k for k in range(1, math.isqrt(n) + 1) if n % k == 0]
    return sorted(set(small + [n // k for k in small]))


def rational_roots(f: CubicPoly) -> list[Fraction]:
    """All rational roots of ``f``, by the rational root theorem."""
    a, b, c, d = f.coeffs
    if d == 0:
        return sorted({Fraction(0)} | _quadratic_rational_roots(a, b, c))
    roots = []
    for q in _divisors(a):
        for r in _divisors(d):
            if math.gcd(r, q) != 1:
                continue
            for s in (r, -r):
                # q^3 f(s/q), cleared of denominators
                if a * s**3 + b * s * s * q + c * s * q * q + d * q**3 == 0:
                    roots.append(Fraction(s, q))
    return sorted(roots)


def _quadratic_rational_roots(a: int, b: int, c: int) -> set[Fraction]:
    disc = b * b - 4 * a * c
    if disc < 0:
        return set()
    s = math.isqrt(disc)
    if s * s != disc:
        return set()
    return {Fraction(-b + s, 2 * a), Fraction(-b - s, 2 * a)}


def is_irreducible_cubic(f: CubicPoly) -> bool:
    """A cubic is reducible over Q exactly when it has a rational root."""
    if f.d == 0:
        return False
    return not rational_roots(f)


def depress(f: CubicPoly) -> DepressedForm:
    a, b, c, d = f.coeffs
    A = Fraction(3 * a * c - b * b, 3 * a * a)
    B = Fraction(27 * a * a * d - 9 * a * b * c + 2 * b**3, 27 * a**3)
    return DepressedForm(A, B, B * B + 4 * A**3 / 27)


def undepress(form: DepressedForm, a: int, b: int) -> tuple[Fraction, Fraction, Fraction, Fraction]:
    """Coefficients of ``a * g(x + b/(3a))`` where ``g = y^3 + A y + B``."""
    s = Fraction(b, 3 * a)
    A, B = form.A, form.B
    # (x+s)^3 + A(x+s) + B
    return (
        Fraction(a),
        a * 3 * s,
        a * (3 * s * s + A),
        a * (s**3 + A * s + B),
    )


# -- Mahler measure -------------------------------------------------------


def _closed_form_roots(f: CubicPoly) -> list:
    """Roots of ``f`` at the current mpmath precision (trig or Cardano)."""
    form = depress(f)
    A = mpmath.mpf(form.A.numerator) / form.A.denominator
    B = mpmath.mpf(form.B.numerator) / form.B.denominator
    shift = mpmath.mpf(f.b) / (3 * f.a)
    if form.Delta < 0:
        # three real roots, A < 0
        r = 2 * mpmath.sqrt(-A / 3)
        arg = (3 * B / (2 * A)) * mpmath.sqrt(-3 / A)
        arg = max(mpmath.mpf(-1), min(mpmath.mpf(1), arg))
        theta = mpmath.acos(arg) / 3
        ys = [r * mpmath.cos(theta - 2 * mpmath.pi * k / 3) for k in range(3)]
        return [mpmath.mpc(y - shift) for y in ys]
    s = mpmath.sqrt(mpmath.mpf(form.Delta.numerator) / form.Delta.denominator)
    w = (-B - s) / 2 if B > 0 else (-B + s) / 2
    u = mpmath.cbrt(w) if w >= 0 else -mpmath.cbrt(-w)
    v = -A / (3 * u)
    zeta = mpmath.mpc(-0.5, mpmath.sqrt(3) / 2)
    zeta2 = mpmath.conj(zeta)
    ys = [u + v, zeta * u + zeta2 * v, zeta2 * u + zeta * v]
    return [mpmath.mpc(y) - shift for y in ys]


def _mpf_to_fraction(x) -> Fraction:
    sign, man, exp, _ = mpmath.mpf(x)._mpf_
    q = Fraction(man) * Fraction(2) ** exp
    return -q if sign else q


def _exact_eval(coeffs, re: Fraction, im: Fraction) -> tuple[Fraction, Fraction]:
    pr, pi = Fraction(0), Fraction(0)
    for k in coeffs:
        pr, pi = pr * re - pi * im + k, pr * im + pi * re
    return pr, pi


def _upper_sqrt(q: Fraction) -> float:
    """A float not smaller than sqrt(q)."""
    return math.nextafter(math.nextafter(math.sqrt(float(q)), math.inf), math.inf) * (1 + 2**-50)


def _certify(f: CubicPoly, roots) -> tuple[list[float], list[Fraction], list[Fraction]] | None:
    """Inclusion radii for ``roots`` or None when discs are not disjoint."""
    coeffs = f.coeffs
    dcoeffs = (3 * f.a, 2 * f.b, f.c)
    pts, radii = [], []
    for z in roots:
        re, im = _mpf_to_fraction(z.real), _mpf_to_fraction(z.imag)
        fr, fi = _exact_eval(coeffs, re, im)
        gr, gi = _exact_eval(dcoeffs, re, im)
        den = gr * gr + gi * gi
        if den == 0:
            return None
        radii.append(_upper_sqrt(9 * (fr * fr + fi * fi) / den))
        pts.append((re, im))
    for i in range(3):
        for j in range(i + 1, 3):
            dr = pts[i][0] - pts[j][0]
            di = pts[i][1] - pts[j][1]
            reach = Fraction(radii[i]) + Fraction(radii[j])
            if dr * dr + di * di <= reach * reach:
                return None
    return radii, [p[0] for p in pts], [p[1] for p in pts]


def _repeated_root_measure(f: CubicPoly) -> MeasureValue:
    # a repeated root of an integer cubic is rational, so the measure is exact
    a, b, c, d = f.coeffs
    if b * b == 3 * a * c:
        r = s = Fraction(-b, 3 * a)
    else:
        r = Fraction(9 * a * d - b * c, 2 * (b * b - 3 * a * c))
        s = Fraction(-b, a) - 2 * r
    exact = a * max(1, abs(r)) ** 2 * max(1, abs(s))
    value = float(exact)
    return MeasureValue(value, abs(float(exact - Fraction(value))) + math.ulp(value))


def mahler_measure(f: CubicPoly, tol: float = MEASURE_TOLERANCE) -> MeasureValue:
    """Certified Mahler measure ``|a| * prod max(1, |root|)``."""
    if discriminant(f) == 0:
        return _repeated_root_measure(f)
    prec = START_PRECISION
    while prec <= MAX_PRECISION:
        with mpmath.workprec(prec):
            roots = _closed_form_roots(f)
            for _ in range(2):
                roots = [z - f(z) / f.derivative(z) for z in roots]
            cert = _certify(f, roots)
            if cert is not None:
                radii = cert[0]
                mods = [max(mpmath.mpf(1), abs(z)) for z in roots]
                value = f.a * mods[0] * mods[1] * mods[2]
                upper = f.a * (mods[0] + radii[0]) * (mods[1] + radii[1]) * (mods[2] + radii[2])
                rounding = value * mpmath.ldexp(1, 8 - prec)
                err = float(upper - value + rounding)
                fvalue = float(value)
                err += abs(fvalue - value) + math.ulp(fvalue)
                if err < tol:
                    return MeasureValue(fvalue, float(err))
        prec *= 2
    raise CertificationError(f"could not certify the Mahler measure of {f} to {tol}")


def height_of_root(f: CubicPoly) -> float:
    """Weil height of any root of the irreducible cubic ``f``."""
    return mahler_measure(f).height
