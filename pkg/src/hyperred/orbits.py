"""Integral orbit representatives for divisor classes.

A Mumford triple (U, V, R) on y^2 = f(x) determines the quadratic space
W_D: a free rank-2 module over Q[x] on generators "U" and "y-R" modulo
the relations y.(U) = R U + U (y-R) and y.(y-R) = V U - R (y-R), with
the Q-basis U, xU, ..., x^(v-1) U, (y-R), ..., x^(u-1) (y-R) and Gram

    (x^i U,     x^j U)     = (-1)^u     tau(x^(i+j) U)
    (x^i U,     x^j (y-R)) = (-1)^(u+1) tau(x^(i+j) R)
    (x^i (y-R), x^j (y-R)) = (-1)^(u+1) tau(x^(i+j) V)

(tau = coefficient of x^(2g) after reduction mod f).  Multiplication by
x is a self-adjoint operator with characteristic polynomial f.

local_lattice realises the prime-by-prime lattice construction: strip the
negative-valuation part of U by a slope Hensel split, then induct on the
Mumford degree through the divisor transport by (y+R)/U, with base case
the span of the standard basis for p-integral triples.  global_lattice
glues the local lattices into a Z-lattice with unimodular Gram, stable
under x, whose marked vector N.U is primitive; integral_orbit_rep then
normalises everything onto (W(Z), J) producing an integer self-adjoint
traceless matrix with characteristic polynomial f.

The construction path may pass through p-adic approximations, but every
property of the final output is re-verified by exact integer arithmetic
before it is returned.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product as iter_product

import gmpy2
from gmpy2 import mpq, mpz

from . import linalg as la
from .errors import InsufficientPrecision, InvalidTriple, NotCoprime
from .mumford import MumfordTriple, validate_triple
from .polynomials import IntPoly, Poly, hensel_split, padic_val
from .quadspace import (QuadSpace, SelfAdjointOp, is_self_adjoint,
                        normalize_unimodular, standard_split_gram,
                        standard_split_space, tau_gram)


# ---------------------------------------------------------------------------
# the two-generator presentation of W_D
# ---------------------------------------------------------------------------

class _PairRep:
    """Working presentation of W_D on generators (U-slot, (y-R)-slot).

    Holds possibly *approximate* triples during the p-adic recursion; no
    exact validation happens here.
    """

    def __init__(self, f: Poly, U: Poly, V: Poly, R: Poly):
        self.f = f
        self.U = U
        self.V = V
        self.R = R
        self.u = U.degree
        self.v = V.degree
        self.n = self.u + self.v

    def reduce(self, A: Poly, B: Poly) -> tuple[Poly, Poly]:
        """Canonical form deg A < v, deg B < u under the two relations."""
        U, V, R = self.U, self.V, self.R
        while True:
            if B.degree >= self.u and self.u > 0:
                q, B = divmod(B, U)
                A = A - q * R
            elif self.u == 0 and not B.is_zero():
                q, B = divmod(B, U)  # U is a unit multiple here
                A = A - q * R
            if A.degree >= self.v:
                q, A = divmod(A, V)
                B = B + q * R
                continue
            if B.degree < self.u or B.is_zero():
                break
        return A, B

    def coords(self, A: Poly, B: Poly):
        A, B = self.reduce(A, B)
        return ([A[i] for i in range(self.v)] + [B[j] for j in range(self.u)])

    def pair_of_basis(self, k: int) -> tuple[Poly, Poly]:
        if k < self.v:
            return Poly.monomial(k), Poly.zero()
        return Poly.zero(), Poly.monomial(k - self.v)

    def mulx_matrix(self):
        cols = []
        for k in range(self.n):
            A, B = self.pair_of_basis(k)
            cols.append(self.coords(A * Poly.x(), B * Poly.x()))
        return la.transpose(cols)

    def muly_matrix(self):
        cols = []
        for k in range(self.n):
            A, B = self.pair_of_basis(k)
            cols.append(self.coords(self.R * A + self.V * B,
                                    self.U * A - self.R * B))
        return la.transpose(cols)

    def gram_matrix(self):
        f, U, V, R = self.f, self.U, self.V, self.R
        from .quadspace import tau_coefficient

        sgn_u = mpq(1) if self.u % 2 == 0 else mpq(-1)
        n = self.n
        G = [[mpq(0)] * n for _ in range(n)]
        # precompute x^k * P mod f for the three payloads
        def taus(P):
            out = []
            cur = P % f
            for _ in range(2 * n):
                out.append(tau_coefficient(cur, f))
                cur = (cur * Poly.x()) % f
            return out

        tU, tR, tV = taus(U), taus(R), taus(V)
        for i in range(self.v):
            for j in range(self.v):
                G[i][j] = sgn_u * tU[i + j]
        for i in range(self.v):
            for j in range(self.u):
                val = -sgn_u * tR[i + j]
                G[i][self.v + j] = val
                G[self.v + j][i] = val
        for i in range(self.u):
            for j in range(self.u):
                G[self.v + i][self.v + j] = -sgn_u * tV[i + j]
        return G


@dataclass(frozen=True)
class DivisorSpace:
    """Exactly validated W_D with Gram, mulx, muly and the marked slot."""

    f: IntPoly
    triple: MumfordTriple
    gram: tuple
    mulx: tuple
    muly: tuple

    @property
    def rank(self) -> int:
        return len(self.gram)

    def space(self) -> QuadSpace:
        return QuadSpace(self.gram)

    def gram_rows(self):
        return [list(r) for r in self.gram]

    def mulx_rows(self):
        return [list(r) for r in self.mulx]

    def rep(self) -> _PairRep:
        return _PairRep(self.f.poly, self.triple.U, self.triple.V,
                        self.triple.R)

    def isotropic_block_basis(self):
        """Coordinates of the paper's g-dimensional isotropic L_D."""
        u, v = self.triple.U.degree, self.triple.V.degree
        a, b = u // 2, v // 2
        cols = []
        for i in range(b):
            e = [mpq(0)] * self.rank
            e[i] = mpq(1)
            cols.append(e)
        for j in range(a):
            e = [mpq(0)] * self.rank
            e[v + j] = mpq(1)
            cols.append(e)
        return cols

    def marked_coords(self, scale=1):
        e = [mpq(0)] * self.rank
        e[0] = mpq(scale)
        return e


def divisor_space(f: IntPoly, t: MumfordTriple) -> DivisorSpace:
    """Assemble and exactly verify the quadratic space of a divisor class."""
    if f.discriminant() == 0:
        raise InvalidTriple("divisor spaces need a squarefree curve")
    if not validate_triple(f, t):
        raise InvalidTriple("not a valid Mumford triple")
    rep = _PairRep(f.poly, t.U, t.V, t.R)
    G = rep.gram_matrix()
    X = rep.mulx_matrix()
    Y = rep.muly_matrix()
    n = rep.n
    sp = QuadSpace(tuple(tuple(r) for r in G))
    if not is_self_adjoint(X, sp):
        raise InvalidTriple("multiplication by x is not self-adjoint")
    if Poly(la.charpoly_coeffs(X)) != f.poly:
        raise InvalidTriple("char poly of mulx differs from f")
    if not sp.disc_is_square():
        raise InvalidTriple("discriminant of W_D is not a square")
    ds = DivisorSpace(f, t, tuple(tuple(r) for r in G),
                      tuple(tuple(r) for r in X), tuple(tuple(r) for r in Y))
    # the paper's isotropic subspace really is isotropic
    L = ds.isotropic_block_basis()
    for a in L:
        for b in L:
            if la.dot(a, la.mat_vec(G, b)) != 0:
                raise InvalidTriple("L_D fails isotropy")
    return ds


# ---------------------------------------------------------------------------
# local lattices (Hensel recursion)
# ---------------------------------------------------------------------------

def _min_valuation(p: int, poly: Poly) -> int:
    vals = [padic_val(c, p) for c in poly.coeffs if c != 0]
    return min(vals) if vals else 0


def _checked_quotient(num: Poly, d: Poly, p: int, prec: int) -> Poly:
    """num/d dropping a remainder that must vanish to order prec."""
    q, r = divmod(num, d)
    if not all(padic_val(c, p) >= prec for c in r.coeffs if c != 0):
        raise InsufficientPrecision(
            f"division remainder too large at p={p} (prec {prec})")
    return q


def _local_lattice_rep(rep: _PairRep, p: int, prec: int):
    """Basis columns of the T_D-stable Z_p-lattice of the existence lemma."""
    U, V, R = rep.U, rep.V, rep.R
    f = rep.f
    if _min_valuation(p, U) < 0:
        Uplus, Uminus = hensel_split(U, p, prec)
        maxneg = -_min_valuation(p, U)
        r = (maxneg + 1) // 2
        k = -padic_val(Uminus[0], p)
        if k != 2 * r:
            raise InsufficientPrecision(
                f"odd denominator exponent {k} for U_- at p={p}")
        Rp = R % Uplus if Uplus.degree > 0 else Poly.zero()
        S = (R - Rp).exact_div(Uplus)
        Vp = _checked_quotient(f - Rp * Rp, Uplus, p, prec)
        sub = _PairRep(f, Uplus, Vp, Rp)
        subbasis = _local_lattice_rep(sub, p, prec)
        # transport (A, B) -> (A U_- - B S, B) into the D_+ presentation
        cols = []
        for kk in range(rep.n):
            A, B = rep.pair_of_basis(kk)
            cols.append(sub.coords(A * Uminus - B * S, B))
        Phi = la.transpose(cols)
        M = la.mat_mul(la.inverse(Phi), subbasis)
        return la.mat_scale(M, mpq(1, mpz(p) ** r))
    s = -min(0, _min_valuation(p, R))
    if s > 0:
        Vplus, Vminus = hensel_split(V, p, prec)
        if Vplus.degree > max(0, rep.u - 2):
            raise InsufficientPrecision(
                f"V_+ degree {Vplus.degree} exceeds m-2 at p={p}")
        Rp = (-R) % Vplus if Vplus.degree > 0 else Poly.zero()
        R1 = (R + Rp).exact_div(Vplus)
        Vpp = _checked_quotient(f - Rp * Rp, Vplus, p, prec)
        sub = _PairRep(f, Vplus, Vpp, Rp)
        subbasis = _local_lattice_rep(sub, p, prec)
        # transport by (y+R)/U: (A, B) -> (A R_1 + B V_-, A)
        cols = []
        for kk in range(rep.n):
            A, B = rep.pair_of_basis(kk)
            cols.append(sub.coords(A * R1 + B * Vminus, A))
        Psi = la.transpose(cols)
        M = la.mat_mul(la.inverse(Psi), subbasis)
        return la.mat_scale(M, mpq(1, mpz(p) ** s))
    # integral triple: the standard basis is the lattice
    return la.identity(rep.n)


def local_lattice(space: DivisorSpace, p: int, prec: int = 64):
    """p-adically certified basis for the local lattice M_{D,p}.

    Returns rational basis columns in the W_D coordinates whose restricted
    Gram has v_p(det) = 0 and which contains p^r U saturated; precision
    escalates internally, InsufficientPrecision if the p-local determinant
    check never passes.
    """
    rep = space.rep()
    err = None
    while prec <= 4096:
        try:
            B = _local_lattice_rep(rep, p, prec)
            G = la.gram_of(B, space.gram_rows())
            d = la.det(G)
            if d != 0 and padic_val(d, p) == 0 and \
                    all(padic_val(x, p) >= 0 for row in G for x in row if x != 0):
                return B
        except InsufficientPrecision as e:
            err = e
        prec *= 2
    raise InsufficientPrecision(f"local lattice at p={p}: {err}")


# ---------------------------------------------------------------------------
# the glued global lattice
# ---------------------------------------------------------------------------

def _prime_factors(n: mpz):
    n = abs(mpz(n))
    out = []
    for p in (2, 3, 5, 7, 11, 13):
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
    q = mpz(17)
    while q * q <= n:
        if n % q == 0:
            out.append(int(q))
            while n % q == 0:
                n //= q
        q += 2
    if n > 1:
        out.append(int(n))
    return out


def _glue_at_prime(C, Bp, p):
    """Replace the p-part of lattice(C) by lattice(Bp), exactly."""
    T1 = la.mat_mul(la.inverse(Bp), C)
    T2 = la.mat_mul(la.inverse(C), Bp)
    k = 0
    for M in (T1, T2):
        for row in M:
            for x in row:
                if x != 0:
                    k = max(k, -padic_val(x, p))
    pk = mpq(mpz(p) ** k)
    inter = la.lattice_intersect(Bp, la.mat_scale(C, 1 / pk))
    return la.lattice_sum(la.mat_scale(C, pk), inter)


@dataclass(frozen=True)
class GlobalLattice:
    """Z-lattice M_D with x-stable unimodular structure and marked vector."""

    space: DivisorSpace
    basis: tuple          # columns, rational, in W_D coordinates
    N: int

    def basis_rows(self):
        return [list(r) for r in self.basis]

    def gram(self):
        return la.gram_of(self.basis_rows(), self.space.gram_rows())

    def mulx_in_basis(self):
        B = self.basis_rows()
        return la.mat_mul(la.inverse(B), la.mat_mul(self.space.mulx_rows(), B))

    def marked_in_basis(self):
        B = self.basis_rows()
        xi = la.solve(B, self.space.marked_coords(self.N))
        return xi

    def verify(self) -> bool:
        G = self.gram()
        if not la.is_integer_matrix(G) or abs(la.det(G)) != 1:
            return False
        X = self.mulx_in_basis()
        if not la.is_integer_matrix(X):
            return False
        xi = self.marked_in_basis()
        if any(mpq(c).denominator != 1 for c in xi):
            return False
        g = mpz(0)
        for c in xi:
            g = gmpy2.gcd(g, mpz(c))
        return g == 1


def global_lattice(f: IntPoly, t: MumfordTriple, prec: int = 64) -> GlobalLattice:
    """Glue the local lattices into the Z-lattice of the global theorem.

    Works for any valid Mumford triple; the least M with M U integral is
    verified to be a perfect square M = N^2, and the marked vector N.U is
    primitive in the result.  All output properties (integral unimodular
    Gram, x-stability, primitivity) are certified by exact arithmetic.
    """
    space = divisor_space(f, t)
    M = t.U.denominator_lcm()
    if not gmpy2.is_square(M):
        raise InvalidTriple(f"denominator {M} of U is not a square")
    N = gmpy2.isqrt(M)
    dens = mpz(1)
    for poly in (t.U, t.V, t.R):
        dens *= poly.denominator_lcm()
    primes = _prime_factors(dens)
    C = la.identity(space.rank)
    for p in primes:
        Bp = local_lattice(space, p, prec)
        C = _glue_at_prime(C, Bp, p)
    gl = GlobalLattice(space, tuple(tuple(r) for r in C), int(N))
    if not gl.verify():
        if prec < 2048:
            return global_lattice(f, t, prec * 4)
        raise InsufficientPrecision(
            f"global lattice verification failed for {t.format_text()}")
    return gl


# ---------------------------------------------------------------------------
# integral orbit representatives in V_f(Z)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class OrbitRep:
    """Integer representative (T, w) with T in V_f(Z), w primitive."""

    T: tuple             # integer matrix rows
    w: tuple             # integer vector
    f: IntPoly
    N: int
    lattice: GlobalLattice
    P: tuple             # isometry with t(P) J P = lattice Gram

    def operator(self) -> SelfAdjointOp:
        return SelfAdjointOp(self.T, standard_split_space(self.f.g))

    def T_rows(self):
        return [list(r) for r in self.T]

    def P_rows(self):
        return [list(r) for r in self.P]


def covariant_majorant_float(space: DivisorSpace, basis=None):
    """Float shadow of the reduction covariant of mulx, as an exact
    positive matrix usable for LLL steering (never for certification)."""
    import numpy as np
    from .quadspace import round_posdef

    X = np.array([[float(x) for x in row] for row in space.mulx_rows()])
    G = np.array([[float(x) for x in row] for row in space.gram_rows()])
    w, B = np.linalg.eig(X)
    d = np.array([B[:, i] @ G @ B[:, i] for i in range(len(X))])
    Binv = np.linalg.inv(B)
    H = (Binv.conj().T * np.abs(d)) @ Binv
    H = np.real(H + H.conj().T) / 2
    if basis is not None:
        Bm = np.array([[float(x) for x in row] for row in basis])
        H = Bm.T @ H @ Bm
    return round_posdef(H)


def integral_orbit_rep(f: IntPoly, t: MumfordTriple) -> OrbitRep:
    """Carry (W_D, M_D, mulx) onto (W(Z), J): an integral orbit representative."""
    gl = global_lattice(f, t)
    Q = gl.gram()
    Xc = gl.mulx_in_basis()
    # the paper's isotropic L_D meets the lattice in a full-rank isotropic
    # sublattice; its basis steers the hyperbolic splitting, and the float
    # covariant of mulx steers all size reduction
    B = gl.basis_rows()
    Lcols = la.transpose(gl.space.isotropic_block_basis())
    coords = la.mat_mul(la.inverse(B), Lcols)
    K = la.saturation(coords)
    try:
        maj = covariant_majorant_float(gl.space, B)
        _, Ured = la.lll_reduce_gram(la.gram_of(K, maj))
        K = la.mat_mul(K, Ured)
        cols = la.transpose(K)
        cols.sort(key=lambda h: la.dot(h, la.mat_vec(maj, h)))
        hints = cols
    except Exception:
        maj = None
        hints = la.transpose(K)
    P = normalize_unimodular(Q, isotropic_hints=hints, majorant=maj)
    Pinv = la.inverse(P)
    T = la.mat_mul(P, la.mat_mul(Xc, Pinv))
    w = la.mat_vec(P, gl.marked_in_basis())
    rep = OrbitRep(tuple(tuple(mpz(x) for x in row) for row in T),
                   tuple(mpz(x) for x in w), f, gl.N, gl,
                   tuple(tuple(x for x in row) for row in P))
    report = verify_orbit(rep.T_rows(), f)
    if not report.all_ok():
        raise InsufficientPrecision(f"orbit verification failed: {report}")
    return rep


@dataclass(frozen=True)
class OrbitReport:
    integral: bool
    self_adjoint: bool
    traceless: bool
    charpoly_matches: bool

    def all_ok(self) -> bool:
        return (self.integral and self.self_adjoint and self.traceless
                and self.charpoly_matches)

    def as_dict(self):
        return {
            "integral": self.integral,
            "self_adjoint": self.self_adjoint,
            "traceless": self.traceless,
            "charpoly_matches": self.charpoly_matches,
        }


def verify_orbit(T, f: IntPoly) -> OrbitReport:
    """Exact booleans: integrality, J-self-adjointness, trace 0, charpoly f."""
    Tm = [[mpq(x) for x in row] for row in T]
    n = len(Tm)
    g = (n - 1) // 2
    J = standard_split_gram(g)
    integral = la.is_integer_matrix(Tm)
    sa = la.mat_eq(la.mat_mul(J, Tm), la.mat_mul(la.transpose(Tm), J))
    tr = sum(Tm[i][i] for i in range(n)) == 0
    cp = Poly(la.charpoly_coeffs(Tm)) == f.poly
    return OrbitReport(integral, sa, tr, cp)


def orbit_record(rep: OrbitRep) -> dict:
    """Key-value serialisation of an orbit representative."""
    report = verify_orbit(rep.T_rows(), rep.f)
    return {
        "f": rep.f.format_text(),
        "g": rep.f.g,
        "T": [[int(x) for x in row] for row in rep.T],
        "marked_vector": [int(x) for x in rep.w],
        "N": int(rep.N),
        "verification": report.as_dict(),
    }


# ---------------------------------------------------------------------------
# distinguished-orbit detection (honest semidecision)
# ---------------------------------------------------------------------------

def _pair_with(J, T, u, v):
    return la.dot(u, la.mat_vec(J, v)), la.dot(u, la.mat_vec(J, la.mat_vec(T, v)))


def find_distinguished_subspace(T, bound: int = 3, candidates=None):
    """Search for a g-dim isotropic L with T L <= L^perp.

    Tries caller-provided candidate flags first, then bounded enumeration.
    Returns a basis (list of integer vectors) or None ("not found at
    bound" — absence is *not* a proof).
    """
    n = len(T)
    g = (n - 1) // 2
    J = standard_split_gram(g)
    Tm = [[mpq(x) for x in row] for row in T]

    def is_good(vecs):
        if la.rank(vecs) != g:
            return False
        for a in vecs:
            for b in vecs:
                jb, jtb = _pair_with(J, Tm, a, b)
                if jb != 0 or jtb != 0:
                    return False
        return True

    for cand in candidates or []:
        if is_good(cand):
            return cand

    if g == 1:
        for tup in iter_product(range(-bound, bound + 1), repeat=n):
            if all(x == 0 for x in tup):
                continue
            v = [mpq(x) for x in tup]
            if is_good([v]):
                return [v]
        return None
    if g == 2:
        iso = []
        for tup in iter_product(range(-bound, bound + 1), repeat=n):
            if all(x == 0 for x in tup):
                continue
            v = [mpq(x) for x in tup]
            jb, jtb = _pair_with(J, Tm, v, v)
            if jb == 0 and jtb == 0:
                iso.append(v)
        for u1 in iso:
            rows = [la.vec_mat(u1, J), la.vec_mat(u1, la.mat_mul(J, Tm)),
                    la.vec_mat(la.mat_vec(Tm, u1), J)]
            ker = la.integer_kernel(rows)
            if not ker or not ker[0]:
                continue
            kk = len(ker[0])
            for tup in iter_product(range(-bound, bound + 1), repeat=kk):
                if all(x == 0 for x in tup):
                    continue
                u2 = la.mat_vec(ker, [mpq(x) for x in tup])
                if is_good([u1, u2]):
                    return [u1, u2]
        return None
    raise ValueError("distinguished search implemented for g in {1, 2}")


def transported_standard_flag(rep: OrbitRep):
    """Image of span(1, x, ..., x^(g-1)) under the normalisation maps."""
    gl = rep.lattice
    n = gl.space.rank
    g = (n - 1) // 2
    B = gl.basis_rows()
    P = rep.P_rows()
    vecs = []
    for k in range(g):
        e = [mpq(0)] * n
        e[k] = mpq(1)
        xi = la.solve(B, e)
        vecs.append(la.mat_vec(P, xi))
    return vecs
