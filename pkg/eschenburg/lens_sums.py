"""Trigonometric sums T, S, R, U of a 7-dimensional lens space and its
Kreck-Stolz invariants s1, s2, s3.

The sums are evaluated in multiprecision floating point and then certified:
45 times each sum is an integer, so once the working precision puts 45*value
within 2^-residual_bits of an integer, that integer over 45 is the exact value.
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd
import threading
from typing import Optional, Tuple

import numpy as np
from loguru import logger
from mpmath.ctx_mp import MPContext
from mpmath.libmp import BACKEND

from .config import settings
from .errors import LensParameterError, ParityViolation, PrecisionExhausted
from .exact_arith import QModZ, qmodz

DENOMINATOR = 45
ORACLE_MAX_P = 10_000

Params = Tuple[int, int, int, int]


@dataclass(frozen=True)
class LensSpace:
    """L_p(p1, p2, p3, p4) = S^7 / Z_p."""

    p: int
    params: Params

    def __post_init__(self) -> None:
        if self.p == 0:
            raise LensParameterError("lens order p must be nonzero")
        if len(self.params) != 4:
            raise LensParameterError(f"expected four lens parameters, got {self.params}")
        if any(q == 0 for q in self.params):
            raise LensParameterError(f"lens parameters must be nonzero: {self.params}")
        if any(gcd(self.p, q) != 1 for q in self.params):
            raise LensParameterError(
                f"lens parameters not coprime to p: L({self.p}; {self.params})"
            )

    @property
    def order(self) -> int:
        return abs(self.p)

    @property
    def even(self) -> bool:
        return sum(self.params) % 2 == 0

    def __str__(self) -> str:
        return f"L({self.p}; {', '.join(map(str, self.params))})"


@dataclass(frozen=True)
class CertifiedSums:
    T: Fraction
    S: Fraction
    R: Fraction
    U: Fraction

    @classmethod
    def zero(cls) -> "CertifiedSums":
        return cls(Fraction(0), Fraction(0), Fraction(0), Fraction(0))

    def as_tuple(self) -> Tuple[Fraction, Fraction, Fraction, Fraction]:
        return self.T, self.S, self.R, self.U

    def scaled(self, sign: int) -> "CertifiedSums":
        return CertifiedSums(sign * self.T, sign * self.S, sign * self.R, sign * self.U)

    def check_denominators(self, p: int) -> bool:
        bound = denominator_bound(p)
        return all(bound % v.denominator == 0 for v in self.as_tuple())


def denominator_bound(p: int) -> int:
    """Largest possible denominator of T, S, R, U for lens order p: 1, 9, 5 or 45."""
    bound = 1
    if p % 3 == 0:
        bound *= 9
    if p % 5 == 0:
        bound *= 5
    return bound


def _canonical(lens: LensSpace) -> Tuple[int, Tuple[int, ...], int]:
    """Reduce to order n > 0 and parameters in (0, n).

    The angle k*pi*p_j/p equals k*pi*q/n with q = sign(p)*p_j; q only matters mod 2n,
    and replacing q by 2n - q negates one cot/csc factor, hence all four sums.
    """
    n = lens.order
    direction = 1 if lens.p > 0 else -1
    sign = 1
    reduced = []
    for pj in lens.params:
        q = (direction * pj) % (2 * n)
        if q > n:
            q = 2 * n - q
            sign = -sign
        reduced.append(q)
    return n, tuple(sorted(reduced)), sign


_local = threading.local()


def _context(prec: int) -> MPContext:
    # one context per thread; building an MPContext is not cheap
    ctx = getattr(_local, "ctx", None)
    if ctx is None:
        ctx = _local.ctx = MPContext()
        logger.debug(f"mpmath context created, backend={BACKEND}")
    ctx.prec = prec
    return ctx


def _approximate(n: int, qs: Tuple[int, ...], prec: int):
    ctx = _context(prec)
    zero = ctx.mpf(0)
    one = ctx.mpf(1)

    cot_t = [zero] * n
    csc_t = [zero] * n
    cos_t = [one] * n
    for m in range(1, n):
        x = ctx.mpf(m) / n
        sin_x = ctx.sinpi(x)
        cot_t[m] = ctx.cospi(x) / sin_x
        csc_t[m] = one / sin_x
        cos_t[m] = ctx.cospi(2 * x)

    # terms k and n-k coincide when the parameter sum is even
    if sum(qs) % 2 == 0:
        ks = [(k, 2) for k in range(1, (n + 1) // 2)]
        if n % 2 == 0:
            ks.append((n // 2, 1))
    else:
        ks = [(k, 1) for k in range(1, n)]

    T = S = R = U = zero
    two_n = 2 * n
    for k, weight in ks:
        cot_prod = one
        csc_prod = one
        for q in qs:
            m = (k * q) % two_n
            if m > n:
                m -= n
                cot_prod *= cot_t[m]
                csc_prod *= -csc_t[m]
            else:
                cot_prod *= cot_t[m]
                csc_prod *= csc_t[m]
        T += weight * cot_prod
        S += weight * csc_prod
        R += weight * cos_t[k % n] * csc_prod
        U += weight * cos_t[(2 * k) % n] * csc_prod
    return ctx, (T, S, R, U)


def _round_certified(ctx, value, residual: float) -> Optional[Fraction]:
    scaled = value * DENOMINATOR
    nearest = ctx.nint(scaled)
    if abs(scaled - nearest) >= residual:
        return None
    return Fraction(int(nearest), DENOMINATOR)


def _certified_canonical(n: int, qs: Tuple[int, ...]) -> CertifiedSums:
    cfg = settings.lens
    prec = cfg.guard_bits + cfg.bits_per_log2_p * (n - 1).bit_length()
    residual = 2.0 ** (-cfg.residual_bits)

    for attempt in range(cfg.max_doublings + 1):
        ctx, approx = _approximate(n, qs, prec)
        values = [_round_certified(ctx, v, residual) for v in approx]
        if all(v is not None for v in values):
            T, S, R, U = values
            return CertifiedSums(T, S, R, U)  # type: ignore[arg-type]
        logger.debug(
            f"lens n={n} params={qs}: not certified at {prec} bits (attempt {attempt + 1})"
        )
        prec *= 2

    raise PrecisionExhausted(
        f"precision exhausted for lens order {n}, parameters {qs} at {prec // 2} bits"
    )


_certified_cached = lru_cache(maxsize=settings.lens.cache_size)(_certified_canonical)


def trig_sums(lens: LensSpace) -> CertifiedSums:
    """Exact T, S, R, U of a lens space."""
    if lens.order == 1:
        return CertifiedSums.zero()
    n, qs, sign = _canonical(lens)
    return _certified_cached(n, qs).scaled(sign)


def lens_s1(lens: LensSpace) -> QModZ:
    if lens.order == 1:
        return qmodz(0)
    sums = trig_sums(lens)
    return qmodz((sums.T + 14 * sums.S) / (2**5 * 7 * lens.p))


def _require_even(lens: LensSpace) -> None:
    if not lens.even:
        raise ParityViolation(f"parity violated: parameter sum of {lens} is odd")


def lens_s2(lens: LensSpace) -> QModZ:
    _require_even(lens)
    if lens.order == 1:
        return qmodz(0)
    sums = trig_sums(lens)
    return qmodz((sums.R - sums.S) / (2**4 * lens.p))


def lens_s3(lens: LensSpace) -> QModZ:
    _require_even(lens)
    if lens.order == 1:
        return qmodz(0)
    sums = trig_sums(lens)
    return qmodz((sums.U - sums.S) / (2**4 * lens.p))


def _oracle_products(lens: LensSpace):
    n = lens.order
    if n > ORACLE_MAX_P:
        raise LensParameterError(f"oracle is limited to |p| <= {ORACLE_MAX_P}, got {n}")
    k = np.arange(1, n, dtype=np.int64)
    direction = 1 if lens.p > 0 else -1
    q = np.array([direction * pj for pj in lens.params], dtype=np.int64)
    angles = np.pi * np.mod(np.outer(k, q), 2 * n) / n
    sines = np.sin(angles)
    cot_prod = (np.cos(angles) / sines).prod(axis=1)
    csc_prod = (1.0 / sines).prod(axis=1)
    return k, n, cot_prod, csc_prod


def oracle_trig_sums(lens: LensSpace) -> Tuple[float, float, float, float]:
    """Plain double-precision evaluation of the defining sums (no certification)."""
    if lens.order == 1:
        return 0.0, 0.0, 0.0, 0.0
    k, n, cot_prod, csc_prod = _oracle_products(lens)
    return (
        float(cot_prod.sum()),
        float(csc_prod.sum()),
        float((np.cos(2 * np.pi * k / n) * csc_prod).sum()),
        float((np.cos(4 * np.pi * k / n) * csc_prod).sum()),
    )


def oracle_exponential_sums(lens: LensSpace) -> Tuple[complex, complex]:
    """Sums of (e^{2 pi i k/|p|} - 1) and (e^{4 pi i k/|p|} - 1) times the csc product."""
    if lens.order == 1:
        return 0j, 0j
    k, n, _, csc_prod = _oracle_products(lens)
    first = ((np.exp(2j * np.pi * k / n) - 1) * csc_prod).sum()
    second = ((np.exp(4j * np.pi * k / n) - 1) * csc_prod).sum()
    return complex(first), complex(second)
