"""Jacobian arithmetic in Mumford representation for y^2 = f(x).

A divisor class of Mumford degree m is stored as the triple (U, V, R)
with U monic of degree m, V monic of degree 2g+1-m, deg R <= m-1 and
U V = f - R^2.  (R is the interpolation polynomial through the affine
points; V is determined by the identity.)  The group law is Cantor
composition and reduction on the pair (U, R); everything is exact
rational arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass

import gmpy2
from gmpy2 import mpq, mpz

from .errors import InvalidTriple, NotCoprime
from .numeric import RatIval, log_ival, mpf_from_q
from .polynomials import IntPoly, Poly, _as_poly, poly_norm


@dataclass(frozen=True)
class MumfordTriple:
    """(U, V, R) with U V = f - R^2; m = deg U is the Mumford degree."""

    U: Poly
    V: Poly
    R: Poly

    def __post_init__(self):
        object.__setattr__(self, "U", _as_poly(self.U))
        object.__setattr__(self, "V", _as_poly(self.V))
        object.__setattr__(self, "R", _as_poly(self.R))

    @property
    def degree(self) -> int:
        return self.U.degree

    def format_text(self) -> str:
        return " | ".join(_fmt_poly(p) for p in (self.U, self.V, self.R))

    @staticmethod
    def parse_text(text: str) -> "MumfordTriple":
        parts = text.split("|")
        if len(parts) != 3:
            raise ValueError("triple text needs three '|'-separated parts")
        return MumfordTriple(*(_parse_poly(s) for s in parts))


def _fmt_poly(p: Poly) -> str:
    if p.is_zero():
        return "0"
    return ",".join(str(c) for c in reversed(p.coeffs))


def _parse_poly(text: str) -> Poly:
    parts = [s.strip() for s in text.strip().split(",") if s.strip()]
    if not parts or parts == ["0"]:
        return Poly.zero()
    return Poly.from_descending([mpq(s) for s in parts])


@dataclass(frozen=True)
class JacobianPoint:
    """A divisor class on J_f in reduced Mumford representation."""

    curve: IntPoly
    triple: MumfordTriple

    def __post_init__(self):
        if not validate_triple(self.curve, self.triple):
            raise InvalidTriple(
                f"({self.triple.U} | {self.triple.V} | {self.triple.R}) "
                f"is not a Mumford triple for {self.curve}")

    @property
    def U(self) -> Poly:
        return self.triple.U

    @property
    def degree(self) -> int:
        return self.triple.degree

    def is_identity(self) -> bool:
        return self.triple.degree == 0

    def __eq__(self, other):
        return (isinstance(other, JacobianPoint)
                and self.curve == other.curve and self.triple == other.triple)

    def __hash__(self):
        return hash((self.curve, self.triple))


def identity_point(f: IntPoly) -> JacobianPoint:
    return JacobianPoint(f, MumfordTriple(Poly.one(), f.poly, Poly.zero()))


def validate_triple(f, t: MumfordTriple) -> bool:
    """Exact check of degrees, monicity and U V = f - R^2."""
    fp = f.poly if isinstance(f, IntPoly) else _as_poly(f)
    g = (fp.degree - 1) // 2
    U, V, R = t.U, t.V, t.R
    if U.is_zero() or not U.is_monic() or U.degree > g:
        return False
    if V.is_zero() or not V.is_monic() or V.degree != fp.degree - U.degree:
        return False
    if R.degree > U.degree - 1:
        return False
    return U * V == fp - R * R


def triple_from_ur(f, U: Poly, R: Poly) -> MumfordTriple:
    """Complete (U, R) to a triple via V = (f - R^2)/U."""
    fp = f.poly if isinstance(f, IntPoly) else _as_poly(f)
    V = (fp - R * R).exact_div(U)
    return MumfordTriple(U, V, R)


def point_from_xy(f: IntPoly, x0, y0) -> JacobianPoint:
    """Degree-1 divisor class of an affine point (x0, y0) on the curve."""
    x0, y0 = mpq(x0), mpq(y0)
    if f.poly(x0) != y0 * y0:
        raise InvalidTriple(f"({x0}, {y0}) is not on y^2 = {f}")
    U = Poly((-x0, 1))
    R = Poly((y0,))
    return JacobianPoint(f, triple_from_ur(f, U, R))


def _poly_xgcd(a: Poly, b: Poly):
    """(d, s, t) with s a + t b = d, d monic (or zero)."""
    r0, r1 = a, b
    s0, s1 = Poly.one(), Poly.zero()
    t0, t1 = Poly.zero(), Poly.one()
    while not r1.is_zero():
        q, r = divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if r0.is_zero():
        return r0, s0, t0
    lc = r0.leading()
    return r0.monic(), s0 * (1 / lc), t0 * (1 / lc)


def cantor_add(P: JacobianPoint, Q: JacobianPoint) -> JacobianPoint:
    """Group law [P + Q] by Cantor composition and reduction."""
    if P.curve != Q.curve:
        raise ValueError("points live on different curves")
    f = P.curve.poly
    g = P.curve.g
    u1, r1 = P.triple.U, P.triple.R
    u2, r2 = Q.triple.U, Q.triple.R

    d1, e1, e2 = _poly_xgcd(u1, u2)
    d, c1, c2 = _poly_xgcd(d1, r1 + r2)
    u3 = (u1 * u2).exact_div(d * d)
    num = c1 * (e1 * u1 * r2 + e2 * u2 * r1) + c2 * (r1 * r2 + f)
    v3 = num.exact_div(d) % u3

    while u3.degree > g:
        u3n = (f - v3 * v3).exact_div(u3).monic()
        v3 = (-v3) % u3n if u3n.degree > 0 else Poly.zero()
        u3 = u3n
    u3 = u3.monic()
    if u3.degree == 0:
        return identity_point(P.curve)
    return JacobianPoint(P.curve, triple_from_ur(P.curve, u3, v3))


def cantor_neg(P: JacobianPoint) -> JacobianPoint:
    """Hyperelliptic involution: (U, R) -> (U, -R)."""
    if P.is_identity():
        return P
    return JacobianPoint(P.curve, triple_from_ur(P.curve, P.triple.U,
                                                 (-P.triple.R) % P.triple.U))


def cantor_double(P: JacobianPoint) -> JacobianPoint:
    return cantor_add(P, P)


def h_dagger_exact(P: JacobianPoint) -> mpz:
    """exp of the height: max |coordinate| of the primitive integer vector
    (1 : u_1 : ... : u_m) cleared of denominators."""
    U = P.triple.U
    m = U.degree
    if m == 0:
        return mpz(1)
    den = mpz(1)
    for k in range(m):
        den = gmpy2.lcm(den, U[k].denominator)
    ints = [den] + [mpz(U[m - 1 - i] * den) for i in range(m)]
    g = mpz(0)
    for v in ints:
        g = gmpy2.gcd(g, v)
    return max(abs(v) for v in ints) // g


def h_dagger_ival(P: JacobianPoint, prec: int | None = None) -> RatIval:
    """Certified enclosure of h_dagger = log of the cleared coefficient max."""
    M = h_dagger_exact(P)
    if M == 1:
        return RatIval(0, 0)
    return log_ival(RatIval(mpq(M)), prec)


def h_dagger(P: JacobianPoint):
    """Logarithmic Weil height of [1 : u_1 : ... : u_m], as an mpf."""
    return mpf_from_q(h_dagger_ival(P).mid())


def descent_class(f: IntPoly, t: MumfordTriple) -> Poly:
    """Representative of the 2-descent class of (U, V, R) in A_f = Q[x]/(f).

    Factor U = U_0 U_1 with U_0 = gcd(U, f) and gcd(U_1, f) = 1 (unique
    as f is squarefree); the class is (-1)^deg(U) U_1 (U_0 - f/U_0),
    reduced mod f.  The identity triple maps to 1.
    """
    if f.discriminant() == 0:
        raise InvalidTriple("descent class needs a squarefree curve polynomial")
    fp = f.poly
    U = t.U
    if U.degree == 0:
        return Poly.one()
    U0 = U.gcd(fp)
    U1 = U.exact_div(U0)
    if not U1.gcd(fp).is_one():
        raise InvalidTriple("U has a repeated factor in common with f")
    rep = U1 * (U0 - fp.exact_div(U0))
    if U.degree % 2:
        rep = -rep
    return rep % fp


def descent_class_primitive(f: IntPoly, t: MumfordTriple) -> tuple[Poly, mpq]:
    """The descent representative together with its primitive integer form."""
    rep = descent_class(f, t)
    prim, content = rep.primitive()
    return prim, content


def norm_square_check(f: IntPoly, a: Poly) -> tuple[mpq, bool]:
    """(N(a), is N(a) a rational square), N(a) = prod a(omega_i)."""
    a = _as_poly(a)
    fp = f.poly
    if not a.gcd(fp).is_one():
        raise NotCoprime(f"gcd({a}, f) != 1")
    n = poly_norm(fp, a)
    is_sq = (n > 0 and gmpy2.is_square(n.numerator)
             and gmpy2.is_square(n.denominator))
    return n, is_sq


# ---------------------------------------------------------------------------
# bounded point search (the only general desk-scale source of points)
# ---------------------------------------------------------------------------

def search_points_g1(f: IntPoly, bound: int, max_points: int | None = None):
    """Rational points on y^2 = f for g = 1, x = a/b^2 with |a|, b^2 <= bound.

    Returns degree-1 JacobianPoints, deterministic search order (b, then a).
    """
    assert f.g == 1
    c2, c3 = f.c(2), f.c(3)
    out = []
    seen = set()
    b = 1
    while b * b <= bound:
        b4, b6 = mpz(b) ** 4, mpz(b) ** 6
        for a in range(-bound, bound + 1):
            num = mpz(a) ** 3 + c2 * a * b4 + c3 * b6
            if num < 0:
                continue
            if gmpy2.is_square(num):
                x0 = mpq(a, b * b)
                if x0 in seen:
                    continue
                seen.add(x0)
                y0 = mpq(gmpy2.isqrt(num), mpz(b) ** 3)
                out.append(point_from_xy(f, x0, y0))
                if max_points and len(out) >= max_points:
                    return out
        b += 1
    return out


def search_points_g2(f: IntPoly, bound: int, max_points: int | None = None):
    """Degree-1 divisor classes from rational points for g = 2 curves."""
    assert f.g == 2
    out = []
    seen = set()
    b = 1
    while b * b <= bound:
        for a in range(-bound, bound + 1):
            x0 = mpq(a, b * b)
            if x0 in seen:
                continue
            val = f.poly(x0)
            if val < 0:
                continue
            num, den = val.numerator, val.denominator
            if gmpy2.is_square(num) and gmpy2.is_square(den):
                seen.add(x0)
                y0 = mpq(gmpy2.isqrt(num), gmpy2.isqrt(den))
                out.append(point_from_xy(f, x0, y0))
                if max_points and len(out) >= max_points:
                    return out
        b += 1
    return out


def search_points(f: IntPoly, bound: int, max_points: int | None = None):
    if f.g == 1:
        return search_points_g1(f, bound, max_points)
    if f.g == 2:
        return search_points_g2(f, bound, max_points)
    raise ValueError("point search implemented for g in {1, 2}")
