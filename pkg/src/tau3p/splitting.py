"""Complete splitting of an irreducible integer cubic over Q_p.

``splits_completely`` decides the question from the depressed form
``x^3 + A x + B`` and Cardano's radicals: whether ``Delta`` is a square and
whether ``(-B + C)/2`` is a cube, in Q_p when p = 1 mod 3 and in
Q_p(sqrt(-3)) when p = 2 mod 3.

``oracle_splits`` answers the same question by counting p-adic roots with
Hensel's lemma; it shares no code with the Cardano path and exists to
cross-check it.
"""

from __future__ import annotations

import enum
import logging
from dataclasses import dataclass
from fractions import Fraction

from .cubic import CubicPoly, DepressedForm, depress, discriminant
from .errors import (
    InconclusiveOracleError,
    PrecisionExhaustedError,
    PreconditionError,
    UnsupportedCaseError,
)
from .padic import (
    DEFAULT_PRECISION,
    MAX_PRECISION,
    PadicNumber,
    QuadExtElem,
    check_prime,
    is_cube_in_K,
    is_cube_in_Qp,
    is_square_in_Qp,
    sqrt_in_Qp,
    valuation,
)

logger = logging.getLogger(__name__)


class Branch(enum.Enum):
    ONE_MOD_THREE = "one_mod_three"
    TWO_MOD_THREE = "two_mod_three"


class Failure(enum.Enum):
    """Which criterion rejected the polynomial."""

    DELTA_NOT_SQUARE = "delta_not_square_in_Qp"
    DELTA_SQUARE_IN_QP = "delta_square_in_Qp"
    DELTA_NOT_SQUARE_IN_K = "delta_not_square_in_K"
    NOT_CUBE_IN_QP = "not_cube_in_Qp"
    NOT_CUBE_IN_K = "not_cube_in_K"


@dataclass(frozen=True)
class SplitVerdict:
    splits: bool
    branch: Branch
    failed: Failure | None = None

    def __bool__(self) -> bool:
        return self.splits


def _form(f: CubicPoly | DepressedForm) -> DepressedForm:
    return f if isinstance(f, DepressedForm) else depress(f)


def _cardano_numerator(form: DepressedForm, p: int, sign: int, precision: int) -> PadicNumber:
    """``(-B + sign * C)/2`` with C the canonical square root of Delta.

    The partner value ``(-B - sign * C)/2`` multiplies with it to ``-A^3/27``;
    a valuation mismatch against that product means silent cancellation.
    """
    A, B = form.A, form.B
    target = valuation(A**3 / 27, p)
    while True:
        try:
            C = sign * sqrt_in_Qp(form.Delta, p, precision)
            w = (C - B) / 2
            partner = (-C - B) / 2
            if w.valuation + partner.valuation == target:
                return w
            logger.debug("valuation cross-check failed at N=%d for %s", precision, form)
        except PrecisionExhaustedError:
            logger.debug("cancellation at N=%d for %s", precision, form)
        if precision >= MAX_PRECISION:
            raise PrecisionExhaustedError(
                f"(-B+C)/2 not resolved at {MAX_PRECISION} digits (p={p}, A={A}, B={B})"
            )
        precision = min(2 * precision, MAX_PRECISION)


def splits_1mod3(
    f: CubicPoly | DepressedForm, p: int, *, root_sign: int = 1, precision: int = DEFAULT_PRECISION
) -> SplitVerdict:
    """Criterion for p = 1 mod 3, where Q_p holds the cube roots of unity.

    ``root_sign=-1`` uses the other square root of Delta; the verdict does not
    depend on it.
    """
    check_prime(p)
    if p % 3 != 1:
        raise PreconditionError(f"p = {p} is not 1 mod 3")
    branch = Branch.ONE_MOD_THREE
    form = _form(f)
    if not is_square_in_Qp(form.Delta, p):
        return SplitVerdict(False, branch, Failure.DELTA_NOT_SQUARE)
    if form.A == 0:
        cube = is_cube_in_Qp(-form.B, p)
    else:
        cube = is_cube_in_Qp(_cardano_numerator(form, p, root_sign, precision))
    if not cube:
        return SplitVerdict(False, branch, Failure.NOT_CUBE_IN_QP)
    return SplitVerdict(True, branch)


def splits_2mod3(f: CubicPoly | DepressedForm, p: int) -> SplitVerdict:
    """Criterion for p = 2 mod 3, working in K = Q_p(sqrt(-3))."""
    check_prime(p)
    if p % 3 != 2:
        raise PreconditionError(f"p = {p} is not 2 mod 3")
    branch = Branch.TWO_MOD_THREE
    form = _form(f)
    delta = form.Delta
    if is_square_in_Qp(delta, p):
        return SplitVerdict(False, branch, Failure.DELTA_SQUARE_IN_QP)
    if not is_square_in_Qp(delta / -3, p):
        return SplitVerdict(False, branch, Failure.DELTA_NOT_SQUARE_IN_K)
    if form.B == 0:
        raise UnsupportedCaseError(f"B = 0 with Delta a non-square in Q_{p}: {f}")
    # C = b0 * sqrt(-3), so (-B + C)/2 has components -B/2 and b0/2
    b0 = sqrt_in_Qp(delta / -3, p)
    w = QuadExtElem.of(Fraction(-form.B, 2), b0 / 2, p)
    if not is_cube_in_K(w):
        return SplitVerdict(False, branch, Failure.NOT_CUBE_IN_K)
    # A cube of Q_p would need a zero sqrt(-3) component, which b0 != 0 rules out.
    if w.y.is_zero:
        logger.error("(-B+C)/2 landed in Q_%d for %s", p, f)
        raise UnsupportedCaseError(f"(-B+C)/2 lies in Q_{p} for {f}")
    return SplitVerdict(True, branch)


def splits_completely(f: CubicPoly | DepressedForm, p: int) -> SplitVerdict:
    check_prime(p)
    if p % 3 == 1:
        return splits_1mod3(f, p)
    return splits_2mod3(f, p)


# -- Hensel oracle ------------------------------------------------------------


def _vp_int(n: int, p: int, cap: int) -> int:
    """``v_p(n)`` for an integer, with ``cap`` standing in for infinity."""
    if n == 0:
        return cap
    v = 0
    while n % p == 0 and v < cap:
        n //= p
        v += 1
    return v


def _count_roots(coeffs: tuple[int, ...], p: int, kmax: int, positive_valuation: bool) -> int:
    """Number of roots in Z_p (or pZ_p) of the integer cubic ``coeffs``.

    Works through residue classes ``x + p^k Z_p``. A class is dropped once
    ``f`` cannot vanish on it and closed off once Hensel's lemma certifies
    exactly one root inside it; anything else is split into p subclasses.
    """
    a, b, c, d = coeffs

    def f(x):
        return ((a * x + b) * x + c) * x + d

    def df(x):
        return (3 * a * x + 2 * b) * x + c

    count = 0
    stack = [(0, 1)] if positive_valuation else [(x, 1) for x in range(p)]
    while stack:
        x, k = stack.pop()
        big = 4 * kmax + 8
        vf = _vp_int(f(x), p, big)
        if vf < k:
            continue  # f(y) = f(x) mod p^k on the whole class
        e = _vp_int(df(x), p, big)
        if e < k:
            # f(y) = f(x) + f'(x) t + O(p^(2k)), v(t) >= k > e
            if vf >= k + e:
                count += 1
            continue
        if k >= kmax:
            raise InconclusiveOracleError(f"class {x} mod {p}^{k} unresolved for {coeffs}")
        step = p**k
        stack.extend((x + j * step, k + 1) for j in range(p))
    return count


def count_roots_mod_p(f: CubicPoly, p: int) -> int:
    a, b, c, d = f.coeffs
    return sum(1 for x in range(p) if (((a * x + b) * x + c) * x + d) % p == 0)


def oracle_splits(f: CubicPoly, p: int) -> bool:
    """Independent check: does ``f`` have three roots in Q_p?"""
    check_prime(p)
    disc = discriminant(f)
    if disc == 0:
        raise PreconditionError(f"{f} has a repeated root")
    if (f.a * disc) % p:
        return count_roots_mod_p(f, p) == 3
    kmax = 2 * valuation(disc, p) + 2
    inside = _count_roots(f.coeffs, p, kmax, positive_valuation=False)
    # roots of negative valuation are inverses of roots of the reversal in pZ_p
    a, b, c, d = f.coeffs
    outside = _count_roots((d, c, b, a), p, kmax, positive_valuation=True)
    return inside + outside == 3
