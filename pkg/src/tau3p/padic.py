"""Arithmetic in Q_p and in the unramified quadratic extension K = Q_p(sqrt(-3)).

Only odd primes p >= 5 are supported. Exact rationals are used wherever
possible; :class:`PadicNumber` carries capped relative precision for the
few quantities (square roots) that have no finite expansion.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational

from sympy.ntheory import isprime, sqrt_mod

from .errors import (
    PrecisionExhaustedError,
    PreconditionError,
    UnsupportedPrimeError,
    ZeroInputError,
)

DEFAULT_PRECISION = 12
MAX_PRECISION = 192


def check_prime(p: int) -> int:
    if p in (2, 3) or p < 2 or not isprime(p):
        raise UnsupportedPrimeError(f"p = {p} is not a prime >= 5")
    return p


def valuation(r, p: int) -> int:
    """The exponent of ``p`` in the nonzero rational ``r``."""
    r = Fraction(r)
    if r == 0:
        raise ZeroInputError("valuation of zero is undefined")
    return _vp(r.numerator, p) - _vp(r.denominator, p)


def _vp(n: int, p: int) -> int:
    n = abs(n)
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def split_rational(r, p: int) -> tuple[int, int]:
    """Return ``(v, u mod p)`` with ``r = p^v * unit`` and ``u`` the unit residue."""
    r = Fraction(r)
    if r == 0:
        raise ZeroInputError("zero has no unit part")
    num, den = r.numerator, r.denominator
    v = 0
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    return v, num * pow(den, -1, p) % p


def _is_power_residue(u: int, k: int, p: int) -> bool:
    """Whether the nonzero residue ``u`` is a k-th power in F_p."""
    return pow(u, (p - 1) // math.gcd(k, p - 1), p) == 1


def is_square_in_Qp(r, p: int) -> bool:
    v, u = split_rational(r, p)
    return v % 2 == 0 and _is_power_residue(u, 2, p)


def is_cube_in_Qp(r, p: int | None = None) -> bool:
    """Cube test for a nonzero rational or :class:`PadicNumber`.

    A unit is a cube in Q_p iff its residue is a cube mod p (p != 3), so
    one significant digit decides the question.
    """
    if isinstance(r, PadicNumber):
        if r.is_zero:
            raise ZeroInputError("zero is excluded from the cube test")
        v, u = r.valuation, r.unit % r.p
        p = r.p
    else:
        v, u = split_rational(r, p)
    return v % 3 == 0 and _is_power_residue(u, 3, p)


def is_square_in_K_not_Qp(r, p: int) -> bool:
    """For p = 2 mod 3: r is a square of Q_p(sqrt(-3)) but not of Q_p."""
    if p % 3 != 2:
        raise PreconditionError(f"p = {p} is not 2 mod 3")
    r = Fraction(r)
    return not is_square_in_Qp(r, p) and is_square_in_Qp(r / -3, p)


@dataclass(frozen=True)
class PadicNumber:
    """``p^valuation * unit`` known modulo ``p^(valuation + precision)``.

    ``unit`` is an integer in ``[1, p^precision)`` prime to p. Exact zero
    is represented with ``is_zero=True``.
    """

    p: int
    valuation: int
    unit: int
    precision: int
    is_zero: bool = False

    @classmethod
    def zero(cls, p: int) -> PadicNumber:
        return cls(p, 0, 0, 0, True)

    @classmethod
    def from_rational(cls, r, p: int, precision: int = DEFAULT_PRECISION) -> PadicNumber:
        r = Fraction(r)
        if r == 0:
            return cls.zero(p)
        num, den = r.numerator, r.denominator
        v = 0
        while num % p == 0:
            num //= p
            v += 1
        while den % p == 0:
            den //= p
            v -= 1
        mod = p**precision
        return cls(p, v, num * pow(den, -1, mod) % mod, precision)

    @property
    def digits(self) -> list[int]:
        """Base-p digits of the unit part, least significant first."""
        out, u = [], self.unit
        for _ in range(self.precision):
            u, d = divmod(u, self.p)
            out.append(d)
        return out

    @property
    def absolute_precision(self) -> float:
        return math.inf if self.is_zero else self.valuation + self.precision

    def _coerce(self, other) -> PadicNumber:
        if isinstance(other, PadicNumber):
            if other.p != self.p:
                raise ValueError("mixing p-adic numbers for different primes")
            return other
        if isinstance(other, (int, Rational)):
            return PadicNumber.from_rational(other, self.p, max(self.precision, 1))
        return NotImplemented

    def __neg__(self) -> PadicNumber:
        if self.is_zero:
            return self
        mod = self.p**self.precision
        return PadicNumber(self.p, self.valuation, -self.unit % mod, self.precision)

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self.is_zero:
            return other
        if other.is_zero:
            return self
        p = self.p
        cap = max(self.precision, other.precision)
        vmin = min(self.valuation, other.valuation)
        absprec = min(self.absolute_precision, other.absolute_precision)
        total = self.unit * p ** (self.valuation - vmin) + other.unit * p ** (other.valuation - vmin)
        total %= p ** (absprec - vmin)
        if total == 0:
            raise PrecisionExhaustedError(f"cancellation consumed all {absprec - vmin} digits")
        v = vmin + _vp(total, p)
        total //= p ** (v - vmin)
        prec = min(absprec - v, cap)
        return PadicNumber(p, v, total % p**prec, prec)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self.is_zero or other.is_zero:
            return PadicNumber.zero(self.p)
        prec = min(self.precision, other.precision)
        mod = self.p**prec
        return PadicNumber(self.p, self.valuation + other.valuation, self.unit * other.unit % mod, prec)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if other.is_zero:
            raise ZeroDivisionError("p-adic division by zero")
        if self.is_zero:
            return self
        prec = min(self.precision, other.precision)
        mod = self.p**prec
        unit = self.unit * pow(other.unit, -1, mod) % mod
        return PadicNumber(self.p, self.valuation - other.valuation, unit, prec)

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def agrees_with(self, r, digits: int | None = None) -> bool:
        """Whether this number equals the rational ``r`` to its own precision."""
        r = Fraction(r)
        if self.is_zero or r == 0:
            return self.is_zero and r == 0
        n = self.precision if digits is None else digits
        other = PadicNumber.from_rational(r, self.p, n)
        if other.valuation != self.valuation:
            return False
        mod = self.p**n
        return (self.unit - other.unit) % mod == 0

    def __repr__(self) -> str:
        if self.is_zero:
            return f"PadicNumber(0, p={self.p})"
        return f"PadicNumber(p={self.p}, v={self.valuation}, digits={self.digits}, N={self.precision})"


def canonical_sqrt_residue(u: int, p: int) -> int:
    """The square root of ``u`` mod p lying in ``1 .. (p-1)/2``."""
    root = sqrt_mod(u % p, p)
    if root is None or root == 0:
        raise PreconditionError(f"{u} is not a nonzero square mod {p}")
    return min(root, p - root)


def sqrt_in_Qp(r, p: int, precision: int = DEFAULT_PRECISION) -> PadicNumber:
    """Hensel-lifted square root of ``r``, canonical branch.

    The returned root has first unit digit in ``1 .. (p-1)/2``.
    """
    r = Fraction(r)
    if r == 0:
        raise ZeroInputError("square root of zero is excluded")
    if not is_square_in_Qp(r, p):
        raise PreconditionError(f"{r} is not a square in Q_{p}")
    x = PadicNumber.from_rational(r, p, precision)
    root = canonical_sqrt_residue(x.unit % p, p)
    # Newton on y^2 = unit, doubling the number of correct digits each pass
    k = 1
    while k < precision:
        k = min(2 * k, precision)
        mod = p**k
        root = (root + x.unit * pow(root, -1, mod)) * pow(2, -1, mod) % mod
    return PadicNumber(p, x.valuation // 2, root % p**precision, precision)


def cube_root_in_Qp(r, p: int, precision: int = DEFAULT_PRECISION) -> PadicNumber:
    """Some cube root of ``r`` in Q_p (Hensel lift of a residue cube root)."""
    r = Fraction(r)
    if not is_cube_in_Qp(r, p):
        raise PreconditionError(f"{r} is not a cube in Q_{p}")
    x = PadicNumber.from_rational(r, p, precision)
    u0 = x.unit % p
    root = next(t for t in range(1, p) if pow(t, 3, p) == u0)
    k = 1
    while k < precision:
        k = min(2 * k, precision)
        mod = p**k
        # y <- y - (y^3 - u) / (3 y^2)
        root = (root - (pow(root, 3, mod) - x.unit) * pow(3 * root * root, -1, mod)) % mod
    return PadicNumber(p, x.valuation // 3, root % p**precision, precision)


# -- the residue field F_{p^2} = F_p[t]/(t^2 + 3) ---------------------------


@dataclass(frozen=True)
class Fp2:
    """``x + y t`` with ``t^2 = -3``; a field exactly when p = 2 mod 3."""

    x: int
    y: int
    p: int

    def __mul__(self, other: Fp2) -> Fp2:
        p = self.p
        return Fp2(
            (self.x * other.x - 3 * self.y * other.y) % p,
            (self.x * other.y + self.y * other.x) % p,
            p,
        )

    def __pow__(self, n: int) -> Fp2:
        result, base = Fp2(1, 0, self.p), self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def is_one(self) -> bool:
        return self.x % self.p == 1 and self.y % self.p == 0

    def is_zero(self) -> bool:
        return self.x % self.p == 0 and self.y % self.p == 0


def is_kth_power_in_Fp2(z: Fp2, k: int) -> bool:
    """Exponent test in the cyclic group ``F_{p^2}^x`` of order p^2 - 1."""
    if z.is_zero():
        raise ZeroInputError("zero is excluded from the power test")
    n = z.p * z.p - 1
    return (z ** (n // math.gcd(k, n))).is_one()


def brute_force_cube_in_Fp2(z: Fp2) -> bool:
    """Exhaustive search for ``(c + d t)^3 = z`` over all residues c, d."""
    p = z.p
    for c in range(p):
        for d in range(p):
            # (c + d t)^3 = (c^3 - 9 c d^2) + (3 c^2 d - 3 d^3) t
            if (c**3 - 9 * c * d * d - z.x) % p == 0 and (3 * c * c * d - 3 * d**3 - z.y) % p == 0:
                return True
    return False


def _as_padic(v, p: int) -> PadicNumber:
    if isinstance(v, PadicNumber):
        return v
    return PadicNumber.from_rational(v, p)


@dataclass(frozen=True)
class QuadExtElem:
    """``x + y sqrt(-3)`` in K = Q_p(sqrt(-3)) for p = 2 mod 3."""

    x: PadicNumber
    y: PadicNumber

    @classmethod
    def of(cls, x, y, p: int) -> QuadExtElem:
        if p % 3 != 2:
            raise PreconditionError(f"Q_{p}(sqrt(-3)) is not unramified quadratic: p = 1 mod 3")
        return cls(_as_padic(x, p), _as_padic(y, p))

    @property
    def p(self) -> int:
        return self.x.p

    @property
    def is_zero(self) -> bool:
        return self.x.is_zero and self.y.is_zero

    @property
    def valuation(self) -> int:
        """Integer valuation: ``|z| = |x^2 + 3 y^2|^(1/2) = max(|x|, |y|)``."""
        if self.is_zero:
            raise ZeroInputError("valuation of zero is undefined")
        vals = [c.valuation for c in (self.x, self.y) if not c.is_zero]
        return min(vals)

    def norm_valuation(self) -> int:
        """``v_p(x^2 + 3 y^2)``, computed independently of :attr:`valuation`."""
        n = self.x * self.x + 3 * (self.y * self.y)
        return n.valuation

    def unit_residue(self) -> Fp2:
        """Image of ``p^(-v) z`` in ``Z_p[sqrt(-3)]/(p)``."""
        v = self.valuation
        p = self.p

        def digit(c: PadicNumber) -> int:
            if c.is_zero or c.valuation > v:
                return 0
            return c.unit % p

        return Fp2(digit(self.x), digit(self.y), p)


def is_kth_power_in_K(z: QuadExtElem, k: int) -> bool:
    """``x^k - z`` has a root in K iff k | v(z) and the unit residue is a k-th power."""
    if z.p % k == 0:
        raise PreconditionError(f"k = {k} must be prime to p")
    if z.is_zero:
        raise ZeroInputError("zero is excluded from the power test")
    return z.valuation % k == 0 and is_kth_power_in_Fp2(z.unit_residue(), k)


def is_cube_in_K(z: QuadExtElem) -> bool:
    return is_kth_power_in_K(z, 3)
