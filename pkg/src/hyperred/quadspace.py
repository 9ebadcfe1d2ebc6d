"""Exact quadratic-space linear algebra for the split odd orthogonal group.

The standard split space W of rank 2g+1 carries the anti-diagonal Gram
matrix J in the basis e_{-1},...,e_{-g}, e_0, e_g,...,e_1, so that
(e_i, e_j) = delta_{i,-j} and the adjoint of A is its flip along the
anti-diagonal.  The workhorses here are

* tau_gram        — the form tau(v w / U) on Q[x]/(f),
* normalize_unimodular — an exact isometry from any integral unimodular
  lattice of signature (g+1, g) onto (W(Z), J), built by splitting off
  hyperbolic planes around enumerated isotropic vectors,
* adapted_hyperbolic_basis — a Z-basis of W(Z) with Gram exactly J
  adapted to a prescribed isotropic-compatible flag.

All arithmetic is exact rational/integer; every return value satisfies an
exactly checked matrix identity before it leaves the function.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product as iter_product

from gmpy2 import mpq, mpz

from . import linalg as la
from .errors import BadFlag, NotCoprime, NotSplit, NotUnimodular
from .polynomials import IntPoly, Poly, _as_poly


# ---------------------------------------------------------------------------
# spaces and operators
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class QuadSpace:
    """Nondegenerate symmetric bilinear form on Q^rank."""

    gram: tuple

    def __post_init__(self):
        g = [[mpq(x) for x in row] for row in self.gram]
        if not la.is_symmetric(g):
            raise ValueError("Gram matrix must be symmetric")
        if la.det(g) == 0:
            raise ValueError("Gram matrix must be nondegenerate")
        object.__setattr__(self, "gram", tuple(tuple(r) for r in g))

    @property
    def rank(self) -> int:
        return len(self.gram)

    def gram_rows(self):
        return [list(r) for r in self.gram]

    def pair(self, v, w) -> mpq:
        return la.dot(v, la.mat_vec(self.gram_rows(), w))

    def det(self) -> mpq:
        return la.det(self.gram_rows())

    def disc(self) -> mpq:
        """(-1)^(N(N-1)/2) det(Gram); class mod squares is the discriminant."""
        n = self.rank
        sign = -1 if (n * (n - 1) // 2) % 2 else 1
        return sign * self.det()

    def disc_is_square(self) -> bool:
        d = self.disc()
        if d <= 0:
            return False
        return _is_rational_square(d)

    def signature(self) -> tuple[int, int]:
        return signature(self.gram_rows())


def _is_rational_square(q: mpq) -> bool:
    import gmpy2

    return q > 0 and gmpy2.is_square(q.numerator) and gmpy2.is_square(q.denominator)


def signature(Q) -> tuple[int, int]:
    """(positives, negatives) of a symmetric rational matrix, exactly.

    Congruence diagonalisation: symmetric pivoting with the classical fix
    (add row+column) when the diagonal vanishes.
    """
    M = [[mpq(x) for x in row] for row in Q]
    n = len(M)
    pos = neg = 0
    active = list(range(n))
    while active:
        k = next((i for i in active if M[i][i] != 0), None)
        if k is None:
            found = next(((a, b) for a in active for b in active
                          if a != b and M[a][b] != 0), None)
            if found is None:
                break  # zero block: degenerate input
            a, b = found
            for t in range(n):
                M[a][t] += M[b][t]
            for t in range(n):
                M[t][a] += M[t][b]
            continue
        d = M[k][k]
        if d > 0:
            pos += 1
        else:
            neg += 1
        active.remove(k)
        for i in active:
            f = M[i][k] / d
            if f == 0:
                continue
            for t in range(n):
                M[i][t] -= f * M[k][t]
            for t in range(n):
                M[t][i] -= f * M[t][k]
    return pos, neg


def standard_labels(g: int) -> list[int]:
    """Basis labels in order e_{-1},...,e_{-g}, e_0, e_g,...,e_1."""
    return [-i for i in range(1, g + 1)] + [0] + [i for i in range(g, 0, -1)]


def standard_split_gram(g: int):
    """The anti-diagonal Gram matrix J of rank 2g+1."""
    n = 2 * g + 1
    return [[mpq(1) if i + j == n - 1 else mpq(0) for j in range(n)]
            for i in range(n)]


def standard_split_space(g: int) -> QuadSpace:
    return QuadSpace(tuple(tuple(r) for r in standard_split_gram(g)))


@dataclass(frozen=True)
class StandardSplit:
    """The fixed split space (W, J) with its labelled basis."""

    g: int
    space: QuadSpace = field(init=False)
    labels: tuple = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "space", standard_split_space(self.g))
        object.__setattr__(self, "labels", tuple(standard_labels(self.g)))

    def position(self, label: int) -> int:
        return self.labels.index(label)


def is_self_adjoint(T, space: QuadSpace) -> bool:
    """Exact test G T = t(T) G."""
    G = space.gram_rows()
    Tm = [[mpq(x) for x in row] for row in T]
    return la.mat_eq(la.mat_mul(G, Tm), la.mat_mul(la.transpose(Tm), G))


def adjoint(T, space: QuadSpace):
    """G^-1 t(T) G, the adjoint for the ambient form."""
    G = space.gram_rows()
    return la.mat_mul(la.inverse(G), la.mat_mul(la.transpose([[mpq(x) for x in r] for r in T]), G))


@dataclass(frozen=True)
class SelfAdjointOp:
    """Self-adjoint operator on a quadratic space; traceless in V."""

    matrix: tuple
    space: QuadSpace

    def __post_init__(self):
        M = [[mpq(x) for x in row] for row in self.matrix]
        if len(M) != self.space.rank:
            raise ValueError("dimension mismatch")
        if not is_self_adjoint(M, self.space):
            raise ValueError("operator is not self-adjoint for the ambient form")
        object.__setattr__(self, "matrix", tuple(tuple(r) for r in M))

    @property
    def rank(self) -> int:
        return len(self.matrix)

    def rows(self):
        return [list(r) for r in self.matrix]

    def trace(self) -> mpq:
        return sum(self.matrix[i][i] for i in range(self.rank))

    def charpoly(self) -> Poly:
        return Poly(la.charpoly_coeffs(self.rows()))

    def charpoly_family(self) -> IntPoly:
        cs = la.charpoly_coeffs(self.rows())
        return IntPoly.from_coeffs(cs)

    def is_integral(self) -> bool:
        return la.is_integer_matrix(self.rows())


@dataclass(frozen=True)
class QuadLattice:
    """Lattice in a quadratic space, spanned by the columns of basis."""

    ambient: QuadSpace
    basis: tuple

    def __post_init__(self):
        B = [[mpq(x) for x in row] for row in self.basis]
        if len(B) != self.ambient.rank:
            raise ValueError("basis rows must match ambient rank")
        if la.det(B) == 0:
            raise ValueError("basis must be invertible")
        object.__setattr__(self, "basis", tuple(tuple(r) for r in B))

    def basis_rows(self):
        return [list(r) for r in self.basis]

    def restricted_gram(self):
        return la.gram_of(self.basis_rows(), self.ambient.gram_rows())

    def is_unimodular(self) -> bool:
        G = self.restricted_gram()
        return la.is_integer_matrix(G) and abs(la.det(G)) == 1


# ---------------------------------------------------------------------------
# the tau form on Q[x]/(f)
# ---------------------------------------------------------------------------

def poly_invmod(a: Poly, f: Poly) -> Poly:
    """Inverse of a modulo f in Q[x]; NotCoprime if gcd(a, f) != 1."""
    a = _as_poly(a) % _as_poly(f)
    f = _as_poly(f)
    r0, r1 = f, a
    s0, s1 = Poly.zero(), Poly.one()
    while not r1.is_zero():
        q, r = divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
    if r0.degree != 0:
        raise NotCoprime(f"gcd({a}, {f}) is not constant")
    return (s0 * (1 / r0.leading())) % f


def tau_coefficient(a: Poly, f: Poly) -> mpq:
    """tau(a) = coefficient of x^(2g) in a mod f (deg f = 2g+1)."""
    r = _as_poly(a) % f
    return r[f.degree - 1]


def tau_gram(f, U=Poly.one()) -> QuadSpace:
    """Quadratic space (W_U, tau(v w / U)) on the basis 1, x, ..., x^(2g).

    Requires gcd(U, f) = 1; U = 1 gives the anti-triangular Gram with
    unit anti-diagonal.
    """
    fp = f.poly if isinstance(f, IntPoly) else _as_poly(f)
    U = _as_poly(U)
    Uinv = poly_invmod(U, fp)
    n = fp.degree
    # powers x^k * Uinv mod f for k = 0..2n-2
    powers = []
    cur = Uinv % fp
    for _ in range(2 * n - 1):
        powers.append(cur)
        cur = (cur * Poly.x()) % fp
    G = [[tau_coefficient(powers[i + j], fp) for j in range(n)] for i in range(n)]
    return QuadSpace(tuple(tuple(r) for r in G))


def multiplication_matrix(a: Poly, f: Poly):
    """Matrix of multiplication by a on Q[x]/(f) in the power basis."""
    f = _as_poly(f)
    n = f.degree
    cols = []
    for j in range(n):
        r = (_as_poly(a) * Poly.monomial(j)) % f
        cols.append([r[i] for i in range(n)])
    return la.transpose(cols)


# ---------------------------------------------------------------------------
# normalising unimodular lattices onto (W(Z), J)
# ---------------------------------------------------------------------------

def _enumerate_isotropic(Q, bound: int):
    """Lexicographically smallest primitive isotropic vector with sup-norm
    <= bound, or None."""
    import gmpy2

    n = len(Q)
    best = None
    for tup in iter_product(range(-bound, bound + 1), repeat=n):
        if all(t == 0 for t in tup):
            continue
        v = [mpq(t) for t in tup]
        # quadratic form value
        s = mpq(0)
        for i in range(n):
            if tup[i] == 0:
                continue
            row = Q[i]
            s += v[i] * sum(row[j] * v[j] for j in range(n) if tup[j] != 0)
        if s != 0:
            continue
        g = mpz(0)
        for t in tup:
            g = gmpy2.gcd(g, mpz(t))
        if g != 1:
            continue
        if best is None or tup < best:
            best = tup
    return None if best is None else [mpq(t) for t in best]


def _find_isotropic(Q, max_bound: int = 16):
    bound = 1
    while bound <= max_bound:
        v = _enumerate_isotropic(Q, bound)
        if v is not None:
            return v
        bound *= 2
    raise NotSplit(f"no isotropic vector found up to sup-norm {max_bound}")


def round_posdef(arr, scale_bits: int = 24):
    """Round a float positive matrix to a symmetric exact one with a ridge."""
    import numpy as np

    n = len(arr)
    s = float(1 << scale_bits) / max(1.0, float(np.abs(np.array(arr)).max()))
    M = [[mpz(round(arr[i][j] * s)) for j in range(n)] for i in range(n)]
    for i in range(n):
        for j in range(i):
            M[i][j] = M[j][i]
        M[i][i] += 1
    return [[mpq(x) for x in row] for row in M]


def _abs_majorant(Q, scale_bits: int = 24):
    """Integer positive-definite stand-in for the eigenvalue-absolute form.

    Float eigendecomposition of Q gives V |L| t(V); only used to steer
    LLL, so rounding is harmless (all certification is exact downstream).
    """
    import numpy as np

    arr = np.array([[float(x) for x in row] for row in Q], dtype=float)
    w, v = np.linalg.eigh(arr)
    maj = (v * np.abs(w)) @ v.T
    return round_posdef(maj, scale_bits)


def _find_isotropic_reduced(Q):
    """Isotropic vector: direct search, then search on an LLL-aligned basis.

    The LLL majorant is the positive form with the same eigenvectors as Q
    and absolute eigenvalues (the float shadow of the reduction
    covariant); the exact identity checks downstream certify the result.
    """
    for bound in (1, 2):
        v = _enumerate_isotropic(Q, bound)
        if v is not None:
            return v
    try:
        M = _abs_majorant(Q)
        _, U = la.lll_reduce_gram(M)
        QR = la.gram_of(U, Q)
        vR = _find_isotropic(QR, max_bound=32)
        return la.mat_vec(U, vR)
    except NotSplit:
        pass
    return _find_isotropic(Q, max_bound=64)


def _bezout_vector(row):
    """Integer vector y with <row, y> = 1; row has gcd 1."""
    import gmpy2

    n = len(row)
    g = mpz(0)
    coeff = [mpz(0)] * n
    for i, r in enumerate(row):
        r = mpz(r)
        if r == 0:
            continue
        gg, s, t = gmpy2.gcdext(g, r)
        coeff = [c * s for c in coeff]
        coeff[i] = t
        g = gg
    if g != 1:
        raise NotUnimodular("pairing against a primitive vector is not surjective")
    return [mpq(c) for c in coeff]


def _primitive_part(v):
    import gmpy2

    den = mpz(1)
    for x in v:
        den = gmpy2.lcm(den, mpq(x).denominator)
    w = [mpz(mpq(x) * den) for x in v]
    g = mpz(0)
    for x in w:
        g = gmpy2.gcd(g, x)
    if g == 0:
        raise ValueError("zero vector")
    return [mpq(x, g) for x in w]


def _babai_shrink(Q, u, v, maj=None):
    """Reduce the dual vector v by the u-perp lattice in the majorant metric.

    Any z with (u, z) = 0 may be added to v; the isotropy defect is then
    repaired by a multiple of u.  Pure steering: exact asserts downstream.
    """
    import numpy as np

    n = len(Q)
    K = la.integer_kernel([la.vec_mat(u, Q)])
    if not K or not K[0]:
        return v
    if maj is None:
        maj = _abs_majorant(Q)
    GK = la.gram_of(K, maj)
    try:
        _, Ured = la.lll_reduce_gram(GK)
    except ZeroDivisionError:
        Ured = la.identity(len(K[0]))
    Kr = la.mat_mul(K, Ured)
    A = np.array([[float(x) for x in row] for row in la.gram_of(Kr, maj)])
    b = np.array([float(la.dot(col, la.mat_vec(maj, v)))
                  for col in la.transpose(Kr)])
    try:
        c = np.linalg.solve(A, -b)
    except np.linalg.LinAlgError:
        return v
    cz = [mpz(int(round(x))) for x in c]
    z = la.mat_vec(Kr, [mpq(x) for x in cz])
    return [a + b2 for a, b2 in zip(v, z)]


def _split_hyperbolic_basis(Q, hints=None, maj=None):
    """Basis columns S with t(S) Q S = J, for integral unimodular Q of
    signature (m+1, m).  hints: known isotropic lattice vectors (mutually
    orthogonal), the guaranteed fallback; maj: positive-definite exact
    matrix steering all reductions (defaults to the eigenvalue-absolute
    form of Q).  The pivot is a maj-short isotropic vector when the small
    search finds one, keeping the output representative reduced."""
    n = len(Q)
    if n == 1:
        if Q[0][0] == 1:
            return [[mpq(1)]]
        raise NotSplit("rank-1 residue is not +1")
    if maj is None:
        maj = _abs_majorant(Q)
    # re-express everything in a maj-LLL-reduced basis
    try:
        _, Ured = la.lll_reduce_gram(maj)
    except ZeroDivisionError:
        Ured = la.identity(n)
    Q = la.gram_of(Ured, Q)
    maj = la.gram_of(Ured, maj)
    Uinv = la.inverse(Ured)
    if hints:
        hints = [la.mat_vec(Uinv, h) for h in hints]
    u = None
    rest_hints = list(hints or [])
    for bound in (1, 2):
        cand = _enumerate_isotropic(Q, bound)
        if cand is not None:
            u = cand
            break
    if u is None and rest_hints:
        h = _primitive_part(rest_hints[0])
        if la.dot(h, la.mat_vec(Q, h)) == 0 and \
                all(mpq(x).denominator == 1 for x in h):
            u = h
            rest_hints = rest_hints[1:]
    if u is None:
        u = _find_isotropic_reduced(Q)
    row_u = la.vec_mat(u, Q)           # v -> (u, v)
    v = _bezout_vector(row_u)
    v = _babai_shrink(Q, u, v, maj)
    # make (v, v) even, borrowing an odd-norm vector from u-perp if needed
    qv = la.dot(v, la.mat_vec(Q, v))
    if qv.numerator % 2:
        z = _odd_perp_vector(Q, u, v)
        v = [a + b for a, b in zip(v, z)]
        qv = la.dot(v, la.mat_vec(Q, v))
    v = [a - qv / 2 * b for a, b in zip(v, u)]
    assert la.dot(v, la.mat_vec(Q, v)) == 0
    assert la.dot(u, la.mat_vec(Q, v)) == 1
    # orthogonal complement lattice of <u, v>, reduced in the majorant metric
    rows = [la.vec_mat(u, Q), la.vec_mat(v, Q)]
    ker = la.integer_kernel(rows)
    W = ker  # n x (n-2), integer columns
    try:
        _, Wred = la.lll_reduce_gram(la.gram_of(W, maj))
        W = la.mat_mul(W, Wred)
    except ZeroDivisionError:
        pass
    QW = la.gram_of(W, Q)
    inner_hints = []
    for h in rest_hints:
        # project into <u, v>^perp; stays isotropic when the hints come
        # from a common isotropic subspace ((h, u) = 0 there)
        alpha = la.dot(h, la.mat_vec(Q, v))
        beta = la.dot(h, la.mat_vec(Q, u))
        hp = [a - alpha * b - beta * c for a, b, c in zip(h, u, v)]
        if all(x == 0 for x in hp):
            continue
        # coordinates of hp in the W-sublattice
        try:
            rowsel = la._independent_rows(W)
            coords = la.solve([W[i] for i in rowsel], [hp[i] for i in rowsel])
            if la.mat_vec(W, coords) == hp:
                inner_hints.append(coords)
        except (ValueError, ZeroDivisionError):
            pass
    maj_inner = la.gram_of(W, maj)
    S_inner = _split_hyperbolic_basis(QW, inner_hints or None, maj_inner)
    inner_cols = la.mat_mul(W, S_inner)
    # order: v (e_{-1} slot), inner, u (e_1 slot); back to the caller's coords
    cols = [v] + la.transpose(inner_cols) + [u]
    return la.mat_mul(Ured, la.transpose(cols))


def _odd_perp_vector(Q, u, v):
    """Small z with (z, u) = 0, (z, v) arbitrary, (z, z) odd."""
    rows = [la.vec_mat(u, Q)]
    ker = la.integer_kernel(rows)  # rank n-1
    k = len(ker[0])
    for bound in (1, 2, 3):
        for tup in iter_product(range(-bound, bound + 1), repeat=k):
            if all(t == 0 for t in tup):
                continue
            z = la.mat_vec(ker, [mpq(t) for t in tup])
            qz = la.dot(z, la.mat_vec(Q, z))
            if qz.numerator % 2:
                return z
    raise NotSplit("no odd-norm vector orthogonal to the isotropic pivot")


def normalize_unimodular(lat, isotropic_hints=None, majorant=None) -> list:
    """Exact isometry P with t(P) J P = Gram(lat), det P = +1.

    lat is a QuadLattice or a raw restricted Gram matrix: integral,
    determinant +-1, signature (g+1, g).  The columns of P^-1 express a
    hyperbolic basis of the lattice; conjugating any lattice-level data by
    P^-1 carries it onto (W(Z), J).  isotropic_hints (lattice-coordinate
    vectors spanning a known isotropic subspace) short-circuit the
    enumeration; correctness never depends on them.
    """
    if isinstance(lat, QuadLattice):
        Q = lat.restricted_gram()
    else:
        Q = [[mpq(x) for x in row] for row in lat]
    n = len(Q)
    if n % 2 == 0:
        raise NotSplit("split odd spaces have odd rank")
    if not la.is_integer_matrix(Q) or abs(la.det(Q)) != 1:
        raise NotUnimodular("restricted Gram must be integral with det +-1")
    g = (n - 1) // 2
    if signature(Q) != (g + 1, g):
        raise NotSplit(f"signature {signature(Q)} != ({g+1}, {g})")
    if la.mat_eq(Q, standard_split_gram(g)):
        return la.identity(n)
    S = _split_hyperbolic_basis(Q, isotropic_hints, majorant)
    J = standard_split_gram(g)
    assert la.mat_eq(la.gram_of(S, Q), J)
    if la.det(S) != 1:
        # swap one hyperbolic pair: keeps J, flips the determinant
        for row in S:
            row[0], row[-1] = row[-1], row[0]
        assert la.mat_eq(la.gram_of(S, Q), J)
    P = la.inverse(S)
    assert la.mat_eq(la.mat_mul(la.transpose(P), la.mat_mul(J, P)), Q)
    return P


# ---------------------------------------------------------------------------
# flag-adapted hyperbolic bases (the G(Z) P(Q) = G(Q) construction)
# ---------------------------------------------------------------------------

def _saturated_chain_basis(flag_bases, n):
    """Integer vectors v_1..v_n with span(v_1..v_i) = saturation of F_i."""
    chain = []
    prev = None  # n x i matrix
    for i, F in enumerate(flag_bases, start=1):
        cols = la.transpose([[mpq(x) for x in v] for v in F])
        if len(F) != i:
            raise BadFlag(f"flag step {i} has {len(F)} vectors, expected {i}")
        sat = la.saturation(cols)
        if prev is None:
            newcol = [sat[r][0] for r in range(n)]
            chain.append(newcol)
            prev = [[chain[-1][r]] for r in range(n)]
            continue
        # express prev inside sat, complete to a basis of sat
        rowsel = la._independent_rows(sat)
        sq = [sat[r] for r in rowsel]
        T = la.transpose([la.solve(sq, [col[r] for r in rowsel])
                          for col in la.transpose(prev)])
        if not la.mat_eq(la.mat_mul(sat, T), prev):
            raise BadFlag("flag steps are not nested")
        if not la.is_integer_matrix(T):
            raise BadFlag("flag steps are not nested")
        D, U, V = la.smith_normal_form(T)
        if any(D[k][k] != 1 for k in range(len(T[0]))):
            raise BadFlag("previous step not saturated in the next")
        Uinv = la.inverse([[mpq(x) for x in row] for row in U])
        w = la.mat_vec(sat, [Uinv[r][i - 1] for r in range(i)])
        chain.append(w)
        prev = la.transpose(la.transpose(prev) + [w])
    return chain


def _hyperbolize(vectors, J):
    """Recursive pairing; input vectors v_1..v_n (v_n isotropic, flag order
    from the back), output basis with Gram exactly J of the same span."""
    n = len(vectors)
    pair = lambda a, b: la.dot(a, la.mat_vec(J, b))
    if n == 1:
        v = vectors[0]
        q = pair(v, v)
        if q != 1:
            raise BadFlag(f"rank-1 residue has norm {q}, not 1")
        return [v]
    u = vectors[-1]
    if pair(u, u) != 0:
        raise BadFlag("flag front vector is not isotropic")
    for vj in vectors[1:-1]:
        if pair(u, vj) != 0:
            raise BadFlag("perpendicularity F_i^perp = F_(2g+1-i) fails")
    w = vectors[0]
    d = pair(u, w)
    if abs(d) != 1:
        raise BadFlag("flag chain is not unimodularly paired")
    if d == -1:
        w = [-x for x in w]
    s = pair(w, w)
    if s.numerator % 2:
        z = _odd_inner_vector(vectors[1:-1], J)
        w = [a + b for a, b in zip(w, z)]
        s = pair(w, w)
    w = [a - s / 2 * b for a, b in zip(w, u)]
    assert pair(w, w) == 0 and pair(u, w) == 1
    inner = []
    for vj in vectors[1:-1]:
        c = pair(vj, w)
        inner.append([a - c * b for a, b in zip(vj, u)])
    got = _hyperbolize(inner, J)
    return [w] + got + [u]


def _odd_inner_vector(inner, J):
    """Combination of the inner vectors with odd J-norm (even-diagonal trick)."""
    pairJ = lambda a, b: la.dot(a, la.mat_vec(J, b))
    k = len(inner)
    for bound in (1, 2):
        for tup in iter_product(range(-bound, bound + 1), repeat=k):
            if all(t == 0 for t in tup):
                continue
            z = [sum(t * v[r] for t, v in zip(tup, inner)) for r in range(len(inner[0]))]
            if pairJ(z, z).numerator % 2:
                return z
    raise BadFlag("no odd-norm correction vector available")


def adapted_hyperbolic_basis(flag_bases, g: int | None = None):
    """Z-basis b_{-1},...,b_{-g}, b_0, b_g,...,b_1 of W(Z) adapted to a flag.

    flag_bases lists bases of F_1 <= F_2 <= ... <= F_2g (F_{2g+1} = W is
    implicit), each F_i given by i rational vectors in standard J
    coordinates.  Requires dim F_i = i and F_i^perp = F_{2g+1-i}; the
    output basis has (b_i, b_j) = delta_{i,-j} with F_i spanned by the
    last i basis vectors.  Raises BadFlag otherwise.
    """
    if not flag_bases:
        raise BadFlag("empty flag")
    n0 = len(flag_bases[0][0])
    if g is None:
        g = (n0 - 1) // 2
    n = 2 * g + 1
    if len(flag_bases) not in (2 * g, 2 * g + 1):
        raise BadFlag(f"need F_1..F_{2*g}, got {len(flag_bases)} steps")
    flag_bases = list(flag_bases)[: 2 * g]
    J = standard_split_gram(g)
    # perpendicularity checks F_i^perp = F_{2g+1-i}
    for i in range(1, 2 * g + 1):
        Fi = flag_bases[i - 1]
        Fperp = flag_bases[2 * g - i] if 2 * g - i >= 1 else None
        rows = [la.vec_mat([mpq(x) for x in v], J) for v in Fi]
        perp = la.kernel(rows)
        if len(perp) != n - i:
            raise BadFlag(f"dim F_{i}^perp != {n - i}")
        if Fperp is not None:
            M = [list(map(mpq, v)) for v in Fperp] + perp
            if la.rank(M) != n - i:
                raise BadFlag(f"F_{i}^perp != F_{2*g+1-i}")
    full = flag_bases + [[_unit(n, r) for r in range(n)]]
    chain = _saturated_chain_basis(full, n)
    ordered = list(reversed(chain))  # position n holds F_1
    basis = _hyperbolize(ordered, J)
    B = la.transpose(basis)
    assert la.mat_eq(la.gram_of(B, J), J)
    assert la.is_integer_matrix(B) and abs(la.det(B)) == 1
    # flag span check: F_i = span of last i output vectors
    for i in range(1, 2 * g + 1):
        M = [list(map(mpq, v)) for v in flag_bases[i - 1]] + basis[n - i:]
        if la.rank(M) != i:
            raise BadFlag("output basis does not span the flag")
    return basis


def _unit(n, r):
    return [mpq(1) if i == r else mpq(0) for i in range(n)]


# ---------------------------------------------------------------------------
# integral unipotent elements of G = SO(J)
# ---------------------------------------------------------------------------

def unipotent_generator(g: int, kind: str, i: int, j: int, a: int):
    """Integer matrices of root subgroups of SO(J).

    kind 'long': e_j -> e_j + a e_i, e_{-i} -> e_{-i} - a e_{-j} (i != +-j,
    both nonzero).  kind 'short': e_i -> e_i + a e_0 - a^2/2 e_{-i},
    e_0 -> e_0 - a e_{-i} (a even keeps it integral).
    """
    split = StandardSplit(g)
    n = 2 * g + 1
    M = la.identity(n)
    if kind == "long":
        if i == 0 or j == 0 or abs(i) == abs(j):
            raise ValueError("long roots need i != +-j, both nonzero")
        M[split.position(i)][split.position(j)] += mpq(a)
        M[split.position(-j)][split.position(-i)] -= mpq(a)
    elif kind == "short":
        if i == 0:
            raise ValueError("short roots need i != 0")
        if a % 2:
            raise ValueError("short-root parameter must be even for G(Z)")
        M[split.position(0)][split.position(i)] += mpq(a)
        M[split.position(-i)][split.position(i)] -= mpq(a * a, 2)
        M[split.position(-i)][split.position(0)] -= mpq(a)
    else:
        raise ValueError("kind must be 'long' or 'short'")
    J = standard_split_gram(g)
    assert la.mat_eq(la.gram_of(M, J), J)
    assert la.det(M) == 1
    return M


def random_unipotent_word(g: int, rng, length: int = 4):
    """Product of random integral unipotent generators of SO(J)."""
    n = 2 * g + 1
    out = la.identity(n)
    for _ in range(length):
        if g >= 2 and rng.random() < 0.5:
            i = rng.choice([k for k in range(-g, g + 1) if k != 0])
            j = rng.choice([k for k in range(-g, g + 1)
                            if k != 0 and abs(k) != abs(i)])
            M = unipotent_generator(g, "long", i, j, rng.choice([-2, -1, 1, 2]))
        else:
            i = rng.choice([k for k in range(-g, g + 1) if k != 0])
            M = unipotent_generator(g, "short", i, 0, rng.choice([-4, -2, 2, 4]))
        out = la.mat_mul(out, M)
    return out
