"""Exact univariate polynomial arithmetic over the rationals.

Two layers live here:

* ``Poly`` — dense polynomials with exact rational coefficients and the
  usual Euclidean toolkit (divmod, gcd, resultants via integer
  subresultant remainder sequences, Newton polygons, slope-sign Hensel
  splitting at a prime).
* ``IntPoly`` — the family polynomials x^(2g+1) + c_2 x^(2g-1) + ... +
  c_(2g+1): monic, odd degree, zero second coefficient, integer c_i.
  These carry the discriminant and the height Ht(f) = max |c_i|^(1/i).

The resultant convention follows the product-over-roots normalisation
resultant(a, b) = lc(b)^deg(a) * prod_{b(beta)=0} a(beta), so that
resultant(a, f) for monic f is the norm of a down from Q[x]/(f).
"""

from __future__ import annotations

from typing import Iterable, Sequence

import gmpy2
from gmpy2 import mpq, mpz

from .errors import InsufficientPrecision, NoSplit
from .numeric import CBall, RatIval, kth_root_bounds

_MPQ_TYPES = (int, mpq, type(mpz(0)))


def _q(x) -> mpq:
    return x if isinstance(x, type(mpq(0))) else mpq(x)


class Poly:
    """Dense polynomial over Q, coefficients stored ascending by degree."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable):
        cs = [_q(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs = tuple(cs)

    # -- constructors ------------------------------------------------------

    @staticmethod
    def zero() -> "Poly":
        return Poly(())

    @staticmethod
    def one() -> "Poly":
        return Poly((1,))

    @staticmethod
    def x() -> "Poly":
        return Poly((0, 1))

    @staticmethod
    def monomial(k: int, c=1) -> "Poly":
        return Poly([0] * k + [c])

    @staticmethod
    def from_descending(coeffs: Sequence) -> "Poly":
        return Poly(list(reversed(list(coeffs))))

    # -- basic structure ---------------------------------------------------

    @property
    def degree(self) -> int:
        """Degree, with deg 0 = -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_one(self) -> bool:
        return self.coeffs == (mpq(1),)

    def leading(self) -> mpq:
        if not self.coeffs:
            raise ValueError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == 1

    def __getitem__(self, k: int) -> mpq:
        if 0 <= k < len(self.coeffs):
            return self.coeffs[k]
        return mpq(0)

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.coeffs == other.coeffs
        if isinstance(other, _MPQ_TYPES):
            return self == Poly((other,))
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def __bool__(self):
        return bool(self.coeffs)

    def __repr__(self):
        return f"Poly({self!s})"

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for k in range(self.degree, -1, -1):
            c = self[k]
            if c == 0:
                continue
            if k == 0:
                parts.append(str(c))
            else:
                xs = "x" if k == 1 else f"x^{k}"
                if c == 1:
                    parts.append(xs)
                elif c == -1:
                    parts.append(f"-{xs}")
                else:
                    parts.append(f"{c}*{xs}")
        out = " + ".join(parts)
        return out.replace("+ -", "- ")

    # -- ring operations ---------------------------------------------------

    def __add__(self, other):
        other = _as_poly(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return Poly([self[k] + other[k] for k in range(n)])

    __radd__ = __add__

    def __neg__(self):
        return Poly([-c for c in self.coeffs])

    def __sub__(self, other):
        return self + (-_as_poly(other))

    def __rsub__(self, other):
        return _as_poly(other) + (-self)

    def __mul__(self, other):
        if isinstance(other, _MPQ_TYPES):
            return Poly([c * other for c in self.coeffs])
        other = _as_poly(other)
        if self.is_zero() or other.is_zero():
            return Poly.zero()
        out = [mpq(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return Poly(out)

    __rmul__ = __mul__

    def __divmod__(self, other):
        other = _as_poly(other)
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        q = [mpq(0)] * max(0, self.degree - other.degree + 1)
        r = list(self.coeffs)
        dlc = other.leading()
        dd = other.degree
        while len(r) - 1 >= dd and any(c != 0 for c in r):
            while r and r[-1] == 0:
                r.pop()
            if len(r) - 1 < dd:
                break
            k = len(r) - 1 - dd
            f = r[-1] / dlc
            q[k] = f
            for j in range(dd + 1):
                r[k + j] -= f * other.coeffs[j]
            r.pop()
        return Poly(q), Poly(r)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def exact_div(self, other) -> "Poly":
        q, r = divmod(self, other)
        if not r.is_zero():
            raise ValueError(f"inexact polynomial division: remainder {r}")
        return q

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative power")
        out, base = Poly.one(), self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def monic(self) -> "Poly":
        if self.is_zero():
            return self
        lc = self.leading()
        return Poly([c / lc for c in self.coeffs])

    def derivative(self) -> "Poly":
        return Poly([k * self.coeffs[k] for k in range(1, len(self.coeffs))])

    def __call__(self, x):
        """Horner evaluation; works for mpq, CBall, mpf/mpc-like scalars."""
        if isinstance(x, CBall):
            acc = CBall(0)
            for c in reversed(self.coeffs):
                acc = acc * x + CBall(c)
            return acc
        acc = x * 0
        for c in reversed(self.coeffs):
            if hasattr(x, "_mpc_") or hasattr(x, "_mpf_") or isinstance(x, (complex, float)):
                acc = acc * x + _to_float_like(c, x)
            else:
                acc = acc * x + c
        return acc

    def compose(self, other: "Poly") -> "Poly":
        acc = Poly.zero()
        for c in reversed(self.coeffs):
            acc = acc * other + Poly((c,))
        return acc

    # -- integrality and content -------------------------------------------

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.coeffs)

    def denominator_lcm(self) -> mpz:
        d = mpz(1)
        for c in self.coeffs:
            d = gmpy2.lcm(d, c.denominator)
        return d

    def cleared(self) -> tuple[tuple, mpz]:
        """(integer coefficient tuple ascending, denominator) with den minimal."""
        d = self.denominator_lcm()
        return tuple(mpz(c * d) for c in self.coeffs), d

    def content(self) -> mpq:
        """Positive rational content; 0 for the zero polynomial."""
        if self.is_zero():
            return mpq(0)
        num = mpz(0)
        den = mpz(1)
        for c in self.coeffs:
            num = gmpy2.gcd(num, c.numerator)
            den = gmpy2.lcm(den, c.denominator)
        return mpq(num, den)

    def primitive(self) -> tuple["Poly", mpq]:
        """(primitive integer polynomial with positive lc, content)."""
        if self.is_zero():
            return self, mpq(0)
        c = self.content()
        if self.leading() < 0:
            c = -c
        return Poly([a / c for a in self.coeffs]), c

    def gcd(self, other: "Poly") -> "Poly":
        """Monic gcd in Q[x]."""
        a, b = self, _as_poly(other)
        while not b.is_zero():
            a, b = b, a % b
        return a.monic() if not a.is_zero() else a

    def squarefree_part(self) -> "Poly":
        if self.degree <= 0:
            return self.monic()
        return self.exact_div_gcd_safe(self.gcd(self.derivative()))

    def exact_div_gcd_safe(self, d: "Poly") -> "Poly":
        q, r = divmod(self, d)
        if not r.is_zero():
            raise ValueError("gcd division left a remainder")
        return q.monic()

    # -- p-adic structure ----------------------------------------------------

    def valuations(self, p: int) -> list:
        """v_p of each coefficient (None for zero coefficients)."""
        out = []
        for c in self.coeffs:
            out.append(None if c == 0 else padic_val(c, p))
        return out


def _as_poly(x) -> Poly:
    if isinstance(x, Poly):
        return x
    if isinstance(x, IntPoly):
        return x.poly
    if isinstance(x, _MPQ_TYPES):
        return Poly((x,))
    raise TypeError(f"cannot coerce {x!r} to Poly")


def _to_float_like(c: mpq, template):
    num, den = int(c.numerator), int(c.denominator)
    one = template * 0 + 1
    return (one * num) / den


def padic_val(c, p: int) -> int:
    """v_p of a nonzero rational."""
    c = _q(c)
    if c == 0:
        raise ValueError("valuation of zero")
    _, vn = gmpy2.remove(c.numerator, p) if c.numerator % p == 0 else (c.numerator, 0)
    _, vd = gmpy2.remove(c.denominator, p) if c.denominator % p == 0 else (c.denominator, 0)
    return int(vn) - int(vd)


# ---------------------------------------------------------------------------
# resultants and discriminants (integer subresultant PRS)
# ---------------------------------------------------------------------------

def _prem(A: list, B: list):
    """Pseudo-remainder of integer coefficient lists (ascending)."""
    dA, dB = len(A) - 1, len(B) - 1
    if dA < dB:
        raise ValueError("prem needs deg A >= deg B")
    lB = B[-1]
    R = list(A)
    for k in range(dA - dB, -1, -1):
        lead = R[dB + k]
        R = [c * lB for c in R]
        for j in range(dB + 1):
            R[j + k] -= lead * B[j]
        assert R[dB + k] == 0
        del R[dB + k]
    while R and R[-1] == 0:
        R.pop()
    return R


def _resultant_std_int(A: list, B: list) -> mpz:
    """Resultant of integer polynomials, standard convention.

    Res(A, B) = lc(A)^deg(B) * prod_{A(alpha)=0} B(alpha), computed by
    the subresultant pseudo-remainder sequence (Cohen, Alg. 3.3.7);
    exact integer arithmetic throughout.
    """
    if not A or not B:
        return mpz(0)
    dA, dB = len(A) - 1, len(B) - 1
    if dA == 0 and dB == 0:
        return mpz(1)
    if dA == 0:
        return A[0] ** dB
    if dB == 0:
        return B[0] ** dA
    s = 1
    if dA < dB:
        A, B, dA, dB = B, A, dB, dA
        if (dA & 1) and (dB & 1):
            s = -s
    g = mpz(1)
    h = mpz(1)
    while True:
        dA, dB = len(A) - 1, len(B) - 1
        delta = dA - dB
        if (dA & 1) and (dB & 1):
            s = -s
        R = _prem(A, B)
        if not R:
            return mpz(0)
        denom = g * h**delta
        A = B
        B = [c // denom for c in R]
        g = A[-1]
        if delta > 0:
            h = g**delta // h ** (delta - 1)
        if len(B) - 1 == 0:
            dA = len(A) - 1
            if dA > 0:
                res = B[0] ** dA // h ** (dA - 1)
            else:
                res = mpz(1)
            return mpz(s) * res


def resultant_std(a: Poly, b: Poly) -> mpq:
    """Standard resultant lc(a)^deg(b) * prod b(roots of a) over Q."""
    a, b = _as_poly(a), _as_poly(b)
    if a.is_zero() or b.is_zero():
        return mpq(0)
    ca, da = a.cleared()
    cb, db = b.cleared()
    r = _resultant_std_int(list(ca), list(cb))
    return mpq(r) / (mpq(da) ** b.degree * mpq(db) ** a.degree)


def resultant(a: Poly, b: Poly) -> mpq:
    """Spec convention: lc(b)^deg(a) * prod_{b(beta)=0} a(beta)."""
    a, b = _as_poly(a), _as_poly(b)
    if a.is_zero() and b.is_zero():
        raise ValueError("resultant of two zero polynomials")
    return resultant_std(b, a)


def poly_norm(f: Poly, a: Poly) -> mpq:
    """Norm of a mod f down to Q: prod a(omega_i) over the roots of monic f."""
    return resultant_std(f, a)


def discriminant_general(f: Poly) -> mpq:
    """(-1)^(n(n-1)/2) Res(f, f') / lc(f) for nonconstant f."""
    f = _as_poly(f)
    n = f.degree
    if n < 1:
        raise ValueError("discriminant needs degree >= 1")
    sign = -1 if (n * (n - 1) // 2) % 2 else 1
    return sign * resultant_std(f, f.derivative()) / f.leading()


# ---------------------------------------------------------------------------
# the family polynomials
# ---------------------------------------------------------------------------

class IntPoly:
    """Monic f = x^(2g+1) + c_2 x^(2g-1) + ... + c_(2g+1), integer c_i."""

    __slots__ = ("cs", "g", "_disc")

    def __init__(self, cs: Sequence):
        cs = tuple(mpz(c) for c in cs)
        if len(cs) < 2 or len(cs) % 2:
            raise ValueError("need c_2..c_(2g+1), an even count >= 2")
        self.cs = cs
        self.g = len(cs) // 2
        self._disc = None

    @staticmethod
    def from_coeffs(coeffs: Sequence) -> "IntPoly":
        """From ascending coefficient list of the full polynomial."""
        cs = [mpq(c) for c in coeffs]
        n = len(cs) - 1
        if n < 3 or n % 2 == 0:
            raise ValueError("family polynomials have odd degree >= 3")
        if cs[-1] != 1 or cs[-2] != 0:
            raise ValueError("family polynomials are monic with zero x^(2g) term")
        if any(c.denominator != 1 for c in cs):
            raise ValueError("family polynomials have integer coefficients")
        return IntPoly([cs[n - i] for i in range(2, n + 1)])

    @property
    def degree(self) -> int:
        return 2 * self.g + 1

    @property
    def poly(self) -> Poly:
        n = self.degree
        coeffs = [mpq(0)] * (n + 1)
        coeffs[n] = mpq(1)
        for i, c in enumerate(self.cs, start=2):
            coeffs[n - i] = mpq(c)
        return Poly(coeffs)

    def c(self, i: int) -> mpz:
        """The coefficient c_i, 2 <= i <= 2g+1."""
        return self.cs[i - 2]

    def __eq__(self, other):
        return isinstance(other, IntPoly) and self.cs == other.cs

    def __hash__(self):
        return hash(self.cs)

    def __repr__(self):
        return f"IntPoly({self!s})"

    def __str__(self):
        return str(self.poly)

    def __call__(self, x):
        return self.poly(x)

    def derivative(self) -> Poly:
        return self.poly.derivative()

    def discriminant(self) -> mpz:
        """Exact discriminant (-1)^(g(2g+1)) Res(f, f')."""
        if self._disc is None:
            if self.g == 1:
                p, q = self.cs
                self._disc = -4 * p**3 - 27 * q**2
            else:
                self._disc = mpz(discriminant_general(self.poly))
        return self._disc

    def height_bounds(self, bits: int = 96) -> RatIval:
        """Certified enclosure of Ht(f) = max_i |c_i|^(1/i)."""
        lo = mpq(0)
        hi = mpq(0)
        for i, c in enumerate(self.cs, start=2):
            if c == 0:
                continue
            blo, bhi = kth_root_bounds(abs(mpq(c)), i, bits)
            lo = max(lo, blo)
            hi = max(hi, bhi)
        return RatIval(lo, hi)

    def height_lt(self, X) -> bool:
        """Exact predicate Ht(f) < X: all |c_i|^(1/i) < X, i.e. |c_i| < X^i."""
        X = mpq(X)
        return all(abs(c) < X**i for i, c in enumerate(self.cs, start=2))

    def log_height_ival(self, bits: int = 96) -> RatIval:
        from .numeric import log_ival

        ht = self.height_bounds(bits)
        if ht.lo <= 0:
            raise ValueError("log Ht undefined: Ht(f) = 0")
        return log_ival(ht)

    # text format: "c2,c3,...,c_{2g+1}"

    def format_text(self) -> str:
        return ",".join(str(int(c)) for c in self.cs)

    @staticmethod
    def parse_text(text: str) -> "IntPoly":
        parts = [s.strip() for s in text.split(",") if s.strip()]
        if not parts:
            raise ValueError("empty polynomial text")
        return IntPoly([int(s) for s in parts])


def discriminant(f: IntPoly):
    return f.discriminant()


def height(f: IntPoly, bits: int = 96):
    """Ht(f) as an mpf rounded from a certified enclosure."""
    from .numeric import mpf_from_q

    return mpf_from_q(f.height_bounds(bits).mid(), bits)


# ---------------------------------------------------------------------------
# Newton polygons and slope-sign Hensel splits
# ---------------------------------------------------------------------------

class NewtonPolygon:
    """Lower convex hull of (i, v_p(a_i)) for a nonzero polynomial."""

    __slots__ = ("p", "vertices")

    def __init__(self, p: int, vertices: Sequence[tuple[int, int]]):
        self.p = p
        self.vertices = tuple((int(i), int(v)) for i, v in vertices)

    def slopes(self) -> list[tuple[mpq, int]]:
        """(slope, width) per hull segment, slopes weakly increasing."""
        out = []
        for (i0, v0), (i1, v1) in zip(self.vertices, self.vertices[1:]):
            out.append((mpq(v1 - v0, i1 - i0), i1 - i0))
        return out

    def min_vertex(self) -> tuple[int, int]:
        """Rightmost vertex attaining the minimal hull value."""
        best = None
        for i, v in self.vertices:
            if best is None or v < best[1] or (v == best[1] and i > best[0]):
                best = (i, v)
        return best

    def __repr__(self):
        return f"NewtonPolygon(p={self.p}, vertices={list(self.vertices)})"


def newton_polygon(h: Poly, p: int) -> NewtonPolygon:
    """Newton polygon of h at p; zero coefficients are skipped."""
    h = _as_poly(h)
    if h.is_zero():
        raise ValueError("Newton polygon of the zero polynomial")
    pts = [(i, padic_val(c, p)) for i, c in enumerate(h.coeffs) if c != 0]
    hull = [pts[0]]
    for pt in pts[1:]:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            # drop hull[-1] unless it lies strictly below chord hull[-2]..pt
            if (y2 - y1) * (pt[0] - x1) < (pt[1] - y1) * (x2 - x1):
                break
            hull.pop()
        hull.append(pt)
    return NewtonPolygon(p, hull)


def _poly_mod_int(coeffs: list, m) -> list:
    return [c % m for c in coeffs]


def _polymul_mod(a: list, b: list, m) -> list:
    if not a or not b:
        return []
    out = [mpz(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            out[i + j] = (out[i + j] + x * y) % m
    while out and out[-1] == 0:
        out.pop()
    return out


def _polyadd_mod(a: list, b: list, m) -> list:
    n = max(len(a), len(b))
    out = [( (a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) ) % m for i in range(n)]
    while out and out[-1] == 0:
        out.pop()
    return out


def _polysub_mod(a: list, b: list, m) -> list:
    n = max(len(a), len(b))
    out = [( (a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0) ) % m for i in range(n)]
    while out and out[-1] == 0:
        out.pop()
    return out


def _polydivmod_monic_mod(a: list, b: list, m) -> tuple[list, list]:
    """divmod by a monic b, coefficients mod m."""
    assert b and b[-1] == 1
    a = list(a)
    db = len(b) - 1
    q = [mpz(0)] * max(0, len(a) - db)
    while len(a) - 1 >= db:
        if a[-1] == 0:
            a.pop()
            continue
        k = len(a) - 1 - db
        f = a[-1] % m
        q[k] = f
        for j in range(db + 1):
            a[j + k] = (a[j + k] - f * b[j]) % m
        a.pop()
    while a and a[-1] == 0:
        a.pop()
    return q, a


def hensel_split(h: Poly, p: int, prec: int | None = None,
                 max_prec: int = 4096) -> tuple[Poly, Poly]:
    """Split h = h_plus * h_minus at p by Newton-polygon slope sign.

    h must be monic.  h_plus collects the roots of nonnegative valuation
    (p-integral coefficients), h_minus the roots of strictly negative
    valuation (Newton polygon strictly descending right to left).  Exact
    when the split is rational (trivial slope configurations); otherwise
    both factors are p-adic approximations with h == h_plus*h_minus and
    factor coefficients correct to absolute p-adic precision >= prec.

    Raises InsufficientPrecision if the lifted factorisation cannot be
    verified at precision prec after escalation up to max_prec digits.
    """
    h = _as_poly(h)
    if h.is_zero():
        raise ValueError("cannot split the zero polynomial")
    if not h.is_monic():
        raise ValueError("hensel_split needs a monic polynomial")
    if h.degree == 0:
        return h, Poly.one()

    # pull out x^k (roots of valuation +infinity: they belong to h_plus)
    k0 = 0
    while h[k0] == 0:
        k0 += 1
    core = Poly(h.coeffs[k0:])

    vmin = min(padic_val(c, p) for c in core.coeffs if c != 0)
    if vmin >= 0:
        return h, Poly.one()
    np_core = newton_polygon(core, p)
    kstar, _ = np_core.min_vertex()
    if kstar == 0:
        # every root of core has negative valuation
        return Poly.monomial(k0), core

    c = -vmin
    n = core.degree
    dminus = n - kstar

    # H = p^c * core is integral with H mod p of degree exactly kstar
    Hq = core * (mpq(p) ** c)
    Hc = [mpz(x) for x in Hq.cleared()[0]]
    assert Hq.is_integral()

    if prec is None:
        prec = _default_split_prec(core, p, kstar, c)

    while True:
        target = prec + c + 4
        ok, hplus, hminus = _lift_split(Hc, p, kstar, c, target)
        if ok:
            hp = Poly(hplus)
            hm = Poly(hminus)
            if _verify_split(core, hp, hm, p, prec):
                if k0:
                    hp = hp * Poly.monomial(k0)
                return hp, hm
        if prec * 2 > max_prec:
            raise InsufficientPrecision(
                f"hensel_split at p={p} failed at precision {prec}")
        prec *= 2


def _default_split_prec(core: Poly, p: int, kstar: int, c: int) -> int:
    """2*v_p(Res(h_plus0, h_minus0)) + 8 on the hull-slice initialisers."""
    try:
        lo = Poly(core.coeffs[: kstar + 1]).monic()
        hi = Poly(core.coeffs[kstar:]).monic()
        r = resultant_std(lo, hi)
        if r != 0:
            return 2 * abs(padic_val(r, p)) + 8
    except (ValueError, ZeroDivisionError):
        pass
    return 2 * c + 8


def _lift_split(Hc: list, p: int, kstar: int, c: int, digits: int):
    """Quadratic Hensel lift of H = A*B with A monic deg kstar, B-bar constant."""
    pk = mpz(p)
    Hbar = [x % pk for x in Hc]
    while Hbar and Hbar[-1] == 0:
        Hbar.pop()
    if len(Hbar) - 1 != kstar:
        return False, None, None
    lead = Hbar[-1]
    try:
        leadinv = gmpy2.invert(lead, pk)
    except ZeroDivisionError:
        return False, None, None
    A = [(x * leadinv) % pk for x in Hbar]
    A[-1] = mpz(1)
    B = [lead % pk]
    sigma = []          # sigma*A + tau*B == 1 (mod p), tau constant
    tau = [leadinv % pk]

    m = 1
    while m < digits:
        m2 = min(2 * m, digits + 2)
        mod = mpz(p) ** m2
        e = _polysub_mod(Hc, _polymul_mod(A, B, mod), mod)
        # A' = A + (tau*e mod A);  B' = B + (sigma*e + q*B)
        te = _polymul_mod(tau, e, mod)
        q, r = _polydivmod_monic_mod(te, A, mod)
        A2 = _polyadd_mod(A, r, mod)
        A2 += [mpz(0)] * (kstar + 1 - len(A2))
        A2[kstar] = mpz(1)
        B2 = _polyadd_mod(B, _polyadd_mod(_polymul_mod(sigma, e, mod),
                                          _polymul_mod(q, B, mod), mod), mod)
        # refresh the Bezout pair: sigma*A2 + tau*B2 = 1 + d
        d = _polysub_mod(_polyadd_mod(_polymul_mod(sigma, A2, mod),
                                      _polymul_mod(tau, B2, mod), mod),
                         [mpz(1)], mod)
        sd = _polymul_mod(sigma, d, mod)
        q2, r2 = _polydivmod_monic_mod(sd, A2, mod)
        sigma = _polysub_mod(sigma, r2, mod)
        tau = _polysub_mod(tau, _polyadd_mod(_polymul_mod(tau, d, mod),
                                             _polymul_mod(q2, B2, mod), mod), mod)
        A, B = A2, B2
        m = m2

    mod = mpz(p) ** m
    # normalise: h_plus = A (monic integральный), h_minus = B / p^c made monic
    A_poly = [_centered(x, mod) for x in A]
    B_poly = [mpq(_centered(x, mod), mpz(p) ** c) for x in B]
    hminus = Poly(B_poly)
    if hminus.degree != len(Hc) - 1 - kstar:
        return False, None, None
    lc = hminus.leading()
    if padic_val(lc, p) != 0:
        return False, None, None
    hminus = Poly([x / lc for x in hminus.coeffs])
    return True, A_poly, hminus.coeffs


def _centered(x, mod) -> mpz:
    x = x % mod
    if 2 * x > mod:
        x -= mod
    return mpz(x)


def _verify_split(core: Poly, hp: Poly, hm: Poly, p: int, prec: int) -> bool:
    if not hp.is_monic() or not hm.is_monic():
        return False
    if not all(padic_val(c, p) >= 0 for c in hp.coeffs if c != 0):
        return False
    if hm.degree > 0:
        slopes = newton_polygon(hm, p).slopes()
        if any(s <= 0 for s, _ in slopes):
            return False
    elif not hm.is_one():
        return False
    diff = core - hp * hm
    return all(padic_val(c, p) >= prec for c in diff.coeffs if c != 0)
