"""Exact rational scalars, directed-rounding bounds, and certified intervals.

All exact arithmetic in the package runs on ``gmpy2.mpq`` / ``mpz`` (fast
big rationals).  Where a real-valued answer is needed (square roots, logs,
k-th roots) we produce *two-sided rational bounds*: integer-sqrt based
bounds for algebraic operations, and outward-rounded ``mpmath.iv``
intervals for transcendental ones.  Nothing in this module trusts an
unrounded float.
"""

from __future__ import annotations

import os

import gmpy2
from gmpy2 import isqrt, mpq, mpz
from mpmath import iv, mp, mpf

from .errors import PrecisionExhausted

QQ = mpq
ZZ = mpz

DEFAULT_PREC_BITS = 192
MAX_PREC_BITS = 4096
#: default relative tolerance for residual-certified numeric claims
REL_TOL = mpq(1, 10**9)


def default_prec() -> int:
    """Working precision in bits, overridable via HYPERRED_PREC_BITS."""
    raw = os.environ.get("HYPERRED_PREC_BITS")
    if raw:
        try:
            return max(64, int(raw))
        except ValueError:
            pass
    return DEFAULT_PREC_BITS


def thread_cap() -> int:
    """Parallelism cap from HYPERRED_THREADS (default 1: serial)."""
    raw = os.environ.get("HYPERRED_THREADS")
    if raw:
        try:
            return max(1, int(raw))
        except ValueError:
            pass
    return 1


def escalating_precisions(start: int | None = None, cap: int = MAX_PREC_BITS):
    """Yield start, 2*start, ... up to cap (inclusive once)."""
    prec = start or default_prec()
    while True:
        yield min(prec, cap)
        if prec >= cap:
            return
        prec *= 2


def rational(x) -> mpq:
    """Coerce ints, strings like '3/4', Fractions, and mpq to mpq."""
    if isinstance(x, mpq.__class__ if not isinstance(mpq, type) else mpq):
        return x
    return mpq(x)


def mpf_from_q(q, prec: int | None = None) -> mpf:
    """Round an exact rational to an mpf at the given precision."""
    q = mpq(q)
    with mp.workprec(prec or mp.prec):
        return mp.mpf(int(q.numerator)) / mp.mpf(int(q.denominator))


def iv_from_q(q):
    """Smallest iv.mpf interval containing the exact rational q."""
    q = mpq(q)
    return iv.mpf(int(q.numerator)) / iv.mpf(int(q.denominator))


def q_from_mpf(x) -> mpq:
    """Exact rational value of a binary float / mpf / degenerate interval."""
    if hasattr(x, "_mpi_"):
        a, b = x._mpi_
        if a != b:
            raise ValueError("interval endpoint expected, got a wide interval")
        x = mp.make_mpf(a)
    if hasattr(x, "_mpf_"):
        sign, man, exp, _ = x._mpf_
        if man == 0:
            return mpq(0)
        v = mpq(int(man)) * (mpq(2) ** int(exp))
        return -v if sign else v
    return mpq(x)


# ---------------------------------------------------------------------------
# integer-sqrt based bounds (exact, no transcendental trust)
# ---------------------------------------------------------------------------

def _root_scale(q: mpq, k: int, bits: int) -> int:
    """Shift s making q*2^(k*s) >= 2^(k*bits): relative 2^-bits bounds."""
    lg = q.numerator.bit_length() - q.denominator.bit_length()  # ~floor(log2 q)
    return max(0, bits - lg // k + 2)


def sqrt_lower(q, bits: int = 96) -> mpq:
    """Rational lower bound for sqrt(q), q >= 0, within ~2^-bits relative."""
    q = mpq(q)
    if q < 0:
        raise ValueError("sqrt of negative rational")
    if q == 0:
        return mpq(0)
    s = _root_scale(q, 2, bits)
    scaled = (q.numerator << (2 * s)) // q.denominator
    return mpq(isqrt(scaled), mpz(1) << s)


def sqrt_upper(q, bits: int = 96) -> mpq:
    """Rational upper bound for sqrt(q), q >= 0, within ~2^-bits relative."""
    q = mpq(q)
    if q < 0:
        raise ValueError("sqrt of negative rational")
    if q == 0:
        return mpq(0)
    s = _root_scale(q, 2, bits)
    scaled = -((-q.numerator << (2 * s)) // q.denominator)  # ceil
    return mpq(isqrt(scaled) + 1, mpz(1) << s)


def kth_root_bounds(q, k: int, bits: int = 96) -> tuple[mpq, mpq]:
    """Two-sided rational bounds for q**(1/k), q >= 0, integer k >= 1.

    Exact (lo == hi) when q is the k-th power of a rational.
    """
    q = mpq(q)
    if q < 0:
        raise ValueError("k-th root of negative rational")
    if q == 0:
        return mpq(0), mpq(0)
    if k == 1:
        return q, q
    rn, en = gmpy2.iroot(q.numerator, k)
    rd, ed = gmpy2.iroot(q.denominator, k)
    if en and ed:
        v = mpq(rn, rd)
        return v, v
    s = _root_scale(q, k, bits)
    lo_scaled = (q.numerator << (k * s)) // q.denominator
    root, _ = gmpy2.iroot(lo_scaled, k)
    lo = mpq(root, mpz(1) << s)
    hi_scaled = -((-q.numerator << (k * s)) // q.denominator)
    root, exact = gmpy2.iroot(hi_scaled, k)
    hi = mpq(root if exact else root + 1, mpz(1) << s)
    return lo, hi


# ---------------------------------------------------------------------------
# exact rational intervals
# ---------------------------------------------------------------------------

class RatIval:
    """Closed interval [lo, hi] with exact rational endpoints."""

    __slots__ = ("lo", "hi")

    def __init__(self, lo, hi=None):
        lo = mpq(lo)
        hi = lo if hi is None else mpq(hi)
        if hi < lo:
            raise ValueError(f"empty interval [{lo}, {hi}]")
        self.lo = lo
        self.hi = hi

    def __repr__(self):
        return f"RatIval({self.lo}, {self.hi})"

    def __add__(self, other):
        other = _as_ival(other)
        return RatIval(self.lo + other.lo, self.hi + other.hi)

    __radd__ = __add__

    def __neg__(self):
        return RatIval(-self.hi, -self.lo)

    def __sub__(self, other):
        return self + (-_as_ival(other))

    def __rsub__(self, other):
        return _as_ival(other) + (-self)

    def __mul__(self, other):
        other = _as_ival(other)
        cands = (self.lo * other.lo, self.lo * other.hi,
                 self.hi * other.lo, self.hi * other.hi)
        return RatIval(min(cands), max(cands))

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _as_ival(other)
        if other.lo <= 0 <= other.hi:
            raise ZeroDivisionError("interval divisor straddles zero")
        cands = (self.lo / other.lo, self.lo / other.hi,
                 self.hi / other.lo, self.hi / other.hi)
        return RatIval(min(cands), max(cands))

    def mid(self) -> mpq:
        return (self.lo + self.hi) / 2

    def width(self) -> mpq:
        return self.hi - self.lo

    def contains(self, q) -> bool:
        q = mpq(q)
        return self.lo <= q <= self.hi

    def strictly_below(self, other) -> bool:
        return self.hi < _as_ival(other).lo

    def abs(self) -> "RatIval":
        if self.lo >= 0:
            return self
        if self.hi <= 0:
            return -self
        return RatIval(0, max(-self.lo, self.hi))

    def sqrt(self, bits: int = 96) -> "RatIval":
        if self.lo < 0:
            raise ValueError("sqrt of interval with negative part")
        return RatIval(sqrt_lower(self.lo, bits), sqrt_upper(self.hi, bits))


def _as_ival(x) -> RatIval:
    return x if isinstance(x, RatIval) else RatIval(mpq(x))


def log_ival(x: RatIval | mpq, prec: int | None = None) -> RatIval:
    """Certified enclosure of log(x) for a positive rational interval."""
    x = _as_ival(x)
    if x.lo <= 0:
        raise ValueError("log of nonpositive interval")
    old = iv.prec
    try:
        iv.prec = prec or default_prec()
        lo = iv.log(iv_from_q(x.lo))
        hi = iv.log(iv_from_q(x.hi))
        return RatIval(q_from_mpf(lo.a), q_from_mpf(hi.b))
    finally:
        iv.prec = old


def exp_ival(x: RatIval | mpq, prec: int | None = None) -> RatIval:
    """Certified enclosure of exp(x) for a rational interval."""
    x = _as_ival(x)
    old = iv.prec
    try:
        iv.prec = prec or default_prec()
        lo = iv.exp(iv_from_q(x.lo))
        hi = iv.exp(iv_from_q(x.hi))
        return RatIval(q_from_mpf(lo.a), q_from_mpf(hi.b))
    finally:
        iv.prec = old


def pow_ival(base, expo, prec: int | None = None) -> RatIval:
    """Certified enclosure of base**expo for positive rational base."""
    base = _as_ival(base)
    expo = mpq(expo)
    if expo.denominator == 1:
        e = int(expo)
        if e >= 0:
            out = RatIval(1)
            for _ in range(e):
                out = out * base
            return out
    return exp_ival(log_ival(base, prec) * RatIval(expo), prec)


# ---------------------------------------------------------------------------
# complex rational balls: (center re, center im, radius), radius certified
# ---------------------------------------------------------------------------

class CBall:
    """Disk in the complex plane with exact rational center and radius."""

    __slots__ = ("re", "im", "rad")

    def __init__(self, re, im=0, rad=0):
        self.re = mpq(re)
        self.im = mpq(im)
        self.rad = mpq(rad)
        if self.rad < 0:
            raise ValueError("negative radius")

    def __repr__(self):
        return f"CBall({self.re}, {self.im}, rad={self.rad})"

    def conj(self) -> "CBall":
        return CBall(self.re, -self.im, self.rad)

    def __add__(self, other):
        other = _as_ball(other)
        return CBall(self.re + other.re, self.im + other.im,
                     self.rad + other.rad)

    __radd__ = __add__

    def __neg__(self):
        return CBall(-self.re, -self.im, self.rad)

    def __sub__(self, other):
        return self + (-_as_ball(other))

    def __rsub__(self, other):
        return _as_ball(other) + (-self)

    def __mul__(self, other):
        other = _as_ball(other)
        re = self.re * other.re - self.im * other.im
        im = self.re * other.im + self.im * other.re
        a = abs_upper_center(self)
        b = abs_upper_center(other)
        rad = a * other.rad + b * self.rad + self.rad * other.rad
        return CBall(re, im, rad)

    __rmul__ = __mul__

    def abs2_center(self) -> mpq:
        return self.re * self.re + self.im * self.im


def _as_ball(x) -> CBall:
    if isinstance(x, CBall):
        return x
    return CBall(mpq(x))


def abs_upper_center(z: CBall, bits: int = 64) -> mpq:
    return sqrt_upper(z.abs2_center(), bits)


def abs_bounds(z: CBall, bits: int = 64) -> RatIval:
    """Certified |z| range over the whole disk."""
    c = z.abs2_center()
    hi = sqrt_upper(c, bits) + z.rad
    lo = sqrt_lower(c, bits) - z.rad
    return RatIval(max(mpq(0), lo), hi)


def dist_lower(z: CBall, w: CBall, bits: int = 64) -> mpq:
    """Certified lower bound for the distance between two disks."""
    d2 = (z.re - w.re) ** 2 + (z.im - w.im) ** 2
    return max(mpq(0), sqrt_lower(d2, bits) - z.rad - w.rad)


def require_precision(ok: bool, what: str):
    if not ok:
        raise PrecisionExhausted(what)
