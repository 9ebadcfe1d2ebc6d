"""Certified complex root isolation for the family polynomials.

Approximations come from a fast simultaneous solver (numpy eigenvalues,
escalating to mpmath's Durand-Kerner at higher working precision); the
certificate is exact: for approximations z_1..z_n of a monic degree-n
polynomial, the Weierstrass corrections W_i = f(z_i)/prod_{j!=i}(z_i-z_j)
give disks D(z_i, n|W_i|) whose union contains every root, a connected
component of k disks containing exactly k roots.  All disk data (centers,
radii, distances) is exact rational arithmetic, so disjointness — hence
"one root per disk" — is a certified statement, not a float heuristic.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np
from gmpy2 import mpq
from mpmath import mp
from mpmath.libmp.libhyper import NoConvergence

from .errors import PrecisionExhausted, RepeatedRoot
from .numeric import (CBall, RatIval, abs_bounds, mpf_from_q, q_from_mpf,
                      sqrt_lower, sqrt_upper)
from .polynomials import IntPoly, Poly, _as_poly


class CertifiedRoots:
    """Disjoint disks isolating the roots of a squarefree polynomial."""

    __slots__ = ("poly", "disks", "pairing", "real_flags")

    def __init__(self, poly: Poly, disks: list[CBall], pairing: list[int],
                 real_flags: list[bool]):
        self.poly = poly
        self.disks = disks
        self.pairing = pairing
        self.real_flags = real_flags

    def __len__(self):
        return len(self.disks)

    def __iter__(self):
        return iter(self.disks)

    def max_radius(self) -> mpq:
        return max((d.rad for d in self.disks), default=mpq(0))

    def abs_bounds(self) -> list[RatIval]:
        return [abs_bounds(d) for d in self.disks]


def _approx_roots(coeffs_desc_float, prec: int):
    """Root approximations as exact dyadic rationals (re, im) pairs."""
    n = len(coeffs_desc_float) - 1
    if prec <= 64:
        try:
            arr = np.roots(coeffs_desc_float)
            if np.all(np.isfinite(arr)):
                return [(mpq(float(z.real)), mpq(float(z.imag))) for z in arr]
        except Exception:
            pass
    with mp.workprec(prec + 32):
        zs = mp.polyroots([mp.mpf(c) if isinstance(c, float) else c
                           for c in coeffs_desc_float],
                          maxsteps=200, extraprec=64)
        return [(q_from_mpf(mp.re(z)), q_from_mpf(mp.im(z))) for z in zs]


def _approx_roots_exact(poly: Poly, prec: int):
    """Approximations straight from exact coefficients at high precision."""
    with mp.workprec(prec + 32):
        cs = []
        for c in reversed(poly.coeffs):
            cs.append(mp.mpf(int(c.numerator)) / mp.mpf(int(c.denominator)))
        zs = mp.polyroots(cs, maxsteps=300, extraprec=prec // 2 + 64)
        return [(q_from_mpf(mp.re(z)), q_from_mpf(mp.im(z))) for z in zs]


def _weierstrass_disks(poly: Poly, zs) -> list[CBall] | None:
    """Exact inclusion disks around approximations; None if degenerate."""
    n = poly.degree
    coeffs = poly.coeffs
    disks = []
    for i, (zr, zi) in enumerate(zs):
        ar, ai = mpq(0), mpq(0)
        for c in reversed(coeffs):
            ar, ai = ar * zr - ai * zi + c, ar * zi + ai * zr
        pr, pi = mpq(1), mpq(0)
        for j, (wr, wi) in enumerate(zs):
            if j == i:
                continue
            dr, di = zr - wr, zi - wi
            pr, pi = pr * dr - pi * di, pr * di + pi * dr
        denom = pr * pr + pi * pi
        if denom == 0:
            return None
        w2 = (ar * ar + ai * ai) / denom
        rad = n * sqrt_upper(w2, 64)
        disks.append(CBall(zr, zi, rad))
    return disks


def _disks_disjoint(disks) -> bool:
    n = len(disks)
    for i in range(n):
        for j in range(i + 1, n):
            dr = disks[i].re - disks[j].re
            di = disks[i].im - disks[j].im
            if dr * dr + di * di <= (disks[i].rad + disks[j].rad) ** 2:
                return False
    return True


def _conjugation_pairing(disks):
    """Involution matching each disk with the one holding the conjugate root."""
    n = len(disks)
    pairing = [-1] * n
    for i, d in enumerate(disks):
        matches = []
        for j, e in enumerate(disks):
            dr = d.re - e.re
            di = d.im + e.im  # conj(d) center vs e center
            if dr * dr + di * di <= (d.rad + e.rad) ** 2:
                matches.append(j)
        if len(matches) != 1:
            return None
        pairing[i] = matches[0]
    if any(pairing[pairing[i]] != i for i in range(n)):
        return None
    return pairing


@lru_cache(maxsize=4096)
def _certified_roots_cached(coeffs: tuple, rad_num: int, rad_den: int):
    poly = Poly(coeffs)
    target = mpq(rad_num, rad_den)
    n = poly.degree
    fl = None
    try:
        fl = [float(c) for c in reversed(poly.coeffs)]
    except OverflowError:
        pass
    for prec in (53, 128, 256, 512, 1024, 2048, 4096):
        try:
            if prec == 53 and fl is not None:
                zs = _approx_roots(fl, prec)
            else:
                zs = _approx_roots_exact(poly, prec)
        except (ZeroDivisionError, NoConvergence, ValueError):
            continue
        if len(zs) != n:
            continue
        disks = _weierstrass_disks(poly, zs)
        if disks is None:
            continue
        if any(d.rad > target for d in disks):
            continue
        if not _disks_disjoint(disks):
            continue
        pairing = _conjugation_pairing(disks)
        if pairing is None:
            continue
        real_flags = [pairing[i] == i for i in range(n)]
        return CertifiedRoots(poly, disks, pairing, real_flags)
    raise PrecisionExhausted(
        f"could not certify disjoint root disks for {poly} at radius {target}")


def complex_roots(f, target_radius=None) -> CertifiedRoots:
    """Certified isolating disks for the roots of a squarefree polynomial.

    Each true root lies in exactly one disk, all radii are at most
    target_radius, and the disk multiset is closed under conjugation.
    Raises RepeatedRoot on vanishing discriminant and PrecisionExhausted
    if certification fails below the precision ceiling.
    """
    poly = f.poly if isinstance(f, IntPoly) else _as_poly(f)
    if poly.degree < 1:
        raise ValueError("need a nonconstant polynomial")
    poly = poly.monic()
    if _discriminant_is_zero(f, poly):
        raise RepeatedRoot(f"{poly} has a repeated root")
    if target_radius is None:
        target_radius = _default_radius(poly)
    target = mpq(target_radius)
    if target <= 0:
        raise ValueError("target radius must be positive")
    return _certified_roots_cached(poly.coeffs, int(target.numerator),
                                   int(target.denominator))


def _discriminant_is_zero(f, poly: Poly) -> bool:
    if isinstance(f, IntPoly):
        return f.discriminant() == 0
    from .polynomials import resultant_std

    return resultant_std(poly, poly.derivative()) == 0


def _default_radius(poly: Poly) -> mpq:
    # 2^-64 * (1 + crude Ht_1 bound): Cauchy bound max(1, sum |c_i|)
    bnd = mpq(1) + sum(abs(c) for c in poly.coeffs[:-1])
    return mpq(1, 1 << 64) * (1 + bnd)


def ht1_bounds(f, bits: int = 64) -> RatIval:
    """Certified enclosure of Ht_1(f) = max_i |omega_i|.

    Repeated roots are allowed: the bound is computed on the squarefree
    part, which has the same root set.
    """
    poly = f.poly if isinstance(f, IntPoly) else _as_poly(f)
    poly = poly.monic()
    if _discriminant_is_zero(f, poly):
        poly = poly.squarefree_part()
        if poly.degree < 1:
            return RatIval(0, 0)
    # scale-relative coarse radius: plenty for the factor-2 height sandwich
    target = _default_radius(poly) * (1 << 32)
    roots = _certified_roots_cached(poly.coeffs, int(target.numerator),
                                    int(target.denominator))
    lo, hi = mpq(0), mpq(0)
    for b in roots.abs_bounds():
        lo = max(lo, b.lo)
        hi = max(hi, b.hi)
    return RatIval(lo, hi)


def ht1(f, bits: int = 64):
    """Ht_1(f) as an mpf from the certified enclosure."""
    return mpf_from_q(ht1_bounds(f, bits).mid())


def min_root_gap_bounds(f) -> RatIval:
    """Certified enclosure of min_{i<j} |omega_i - omega_j|."""
    poly = f.poly if isinstance(f, IntPoly) else _as_poly(f)
    if _discriminant_is_zero(f, poly.monic()):
        raise RepeatedRoot("min_root_gap needs a squarefree polynomial")
    roots = complex_roots(f)
    lo = None
    hi = None
    ds = roots.disks
    for i in range(len(ds)):
        for j in range(i + 1, len(ds)):
            dr, di = ds[i].re - ds[j].re, ds[i].im - ds[j].im
            d2 = dr * dr + di * di
            pair_hi = sqrt_upper(d2, 64) + ds[i].rad + ds[j].rad
            pair_lo = max(mpq(0), sqrt_lower(d2, 64) - ds[i].rad - ds[j].rad)
            if hi is None or pair_hi < hi:
                hi = pair_hi
            if lo is None or pair_lo < lo:
                lo = pair_lo
    return RatIval(lo, hi)


def min_root_gap(f):
    """Certified lower bound (mpf) for the minimal pairwise root distance."""
    return mpf_from_q(min_root_gap_bounds(f).lo)


def eval_abs_bounds(a: Poly, disk: CBall, bits: int = 64) -> RatIval:
    """Certified |a(omega)| range over a root disk."""
    val = _as_poly(a)(disk)
    return abs_bounds(val, bits)
