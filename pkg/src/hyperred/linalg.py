"""Exact linear algebra over Q and Z on plain list-of-list matrices.

Matrices are lists of rows; vectors are lists.  Lattices are represented
by matrices whose *columns* span them.  Everything here is exact: mpq
Gaussian elimination for field operations, integer HNF/Smith normal form
for lattice operations.  Sizes stay tiny (rank <= 2g+1 <= 9), so clarity
beats asymptotics throughout.
"""

from __future__ import annotations

import gmpy2
from gmpy2 import mpq, mpz


def mat_copy(A):
    return [list(row) for row in A]


def identity(n):
    return [[mpq(1) if i == j else mpq(0) for j in range(n)] for i in range(n)]


def zeros(n, m=None):
    m = n if m is None else m
    return [[mpq(0)] * m for _ in range(n)]


def transpose(A):
    return [list(col) for col in zip(*A)]


def mat_mul(A, B):
    n, k, m = len(A), len(B), len(B[0])
    out = [[mpq(0)] * m for _ in range(n)]
    for i in range(n):
        Ai = A[i]
        for t in range(k):
            a = Ai[t]
            if a == 0:
                continue
            Bt = B[t]
            row = out[i]
            for j in range(m):
                row[j] += a * Bt[j]
    return out


def mat_vec(A, v):
    return [sum((a * x for a, x in zip(row, v)), mpq(0)) for row in A]


def vec_mat(v, A):
    return mat_vec(transpose(A), v)


def mat_add(A, B):
    return [[a + b for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def mat_sub(A, B):
    return [[a - b for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def mat_scale(A, c):
    return [[a * c for a in row] for row in A]


def mat_eq(A, B) -> bool:
    return all(a == b for ra, rb in zip(A, B) for a, b in zip(ra, rb))


def is_symmetric(A) -> bool:
    n = len(A)
    return all(A[i][j] == A[j][i] for i in range(n) for j in range(i))


def is_integer_matrix(A) -> bool:
    return all(mpq(a).denominator == 1 for row in A for a in row)


def dot(u, v):
    return sum((a * b for a, b in zip(u, v)), mpq(0))


def gram_of(basis_cols, form):
    """Gram matrix t(B) * form * B for a column-basis matrix."""
    return mat_mul(transpose(basis_cols), mat_mul(form, basis_cols))


def det(A) -> mpq:
    """Exact determinant by fraction Gauss with partial pivoting."""
    n = len(A)
    M = [[mpq(x) for x in row] for row in A]
    sign = 1
    out = mpq(1)
    for k in range(n):
        piv = next((i for i in range(k, n) if M[i][k] != 0), None)
        if piv is None:
            return mpq(0)
        if piv != k:
            M[k], M[piv] = M[piv], M[k]
            sign = -sign
        out *= M[k][k]
        inv = 1 / M[k][k]
        for i in range(k + 1, n):
            f = M[i][k] * inv
            if f == 0:
                continue
            for j in range(k, n):
                M[i][j] -= f * M[k][j]
    return sign * out


def inverse(A):
    n = len(A)
    M = [[mpq(x) for x in row] + [mpq(1) if i == j else mpq(0) for j in range(n)]
         for i, row in enumerate(A)]
    for k in range(n):
        piv = next((i for i in range(k, n) if M[i][k] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        M[k], M[piv] = M[piv], M[k]
        inv = 1 / M[k][k]
        M[k] = [x * inv for x in M[k]]
        for i in range(n):
            if i == k or M[i][k] == 0:
                continue
            f = M[i][k]
            M[i] = [x - f * y for x, y in zip(M[i], M[k])]
    return [row[n:] for row in M]


def solve(A, b):
    """Solve A x = b for square invertible A."""
    return mat_vec(inverse(A), b)


def rank(A) -> int:
    if not A or not A[0]:
        return 0
    M = [[mpq(x) for x in row] for row in A]
    n, m = len(M), len(M[0])
    r = 0
    for c in range(m):
        piv = next((i for i in range(r, n) if M[i][c] != 0), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        inv = 1 / M[r][c]
        for i in range(r + 1, n):
            f = M[i][c] * inv
            if f:
                for j in range(c, m):
                    M[i][j] -= f * M[r][j]
        r += 1
        if r == n:
            break
    return r


def kernel(A):
    """Basis (list of vectors) of the rational right kernel of A."""
    if not A:
        return []
    n, m = len(A), len(A[0])
    M = [[mpq(x) for x in row] for row in A]
    pivots = []
    r = 0
    for c in range(m):
        piv = next((i for i in range(r, n) if M[i][c] != 0), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        inv = 1 / M[r][c]
        M[r] = [x * inv for x in M[r]]
        for i in range(n):
            if i != r and M[i][c] != 0:
                f = M[i][c]
                M[i] = [x - f * y for x, y in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
        if r == n:
            break
    free = [c for c in range(m) if c not in pivots]
    basis = []
    for fc in free:
        v = [mpq(0)] * m
        v[fc] = mpq(1)
        for i, pc in enumerate(pivots):
            v[pc] = -M[i][fc]
        basis.append(v)
    return basis


def charpoly_coeffs(T):
    """char poly det(xI - T) coefficients ascending, by Faddeev-LeVerrier."""
    n = len(T)
    cs = [mpq(0)] * (n + 1)
    cs[n] = mpq(1)
    M = identity(n)
    for k in range(1, n + 1):
        A = mat_mul(T, M)
        tr = sum(A[i][i] for i in range(n))
        c = -tr / k
        cs[n - k] = c
        M = [[A[i][j] + (c if i == j else 0) for j in range(n)] for i in range(n)]
    return cs


def adjugate_poly(T):
    """Matrices M_0..M_{n-1} with adj(xI - T) = sum_k M_k x^(n-1-k).

    Then (xI - T) * adj(xI - T) = charpoly(x) * I identically.
    """
    n = len(T)
    mats = [identity(n)]
    M = identity(n)
    for k in range(1, n):
        A = mat_mul(T, M)
        tr = sum(A[i][i] for i in range(n))
        c = -tr / k
        M = [[A[i][j] + (c if i == j else 0) for j in range(n)] for i in range(n)]
        mats.append(M)
    return mats


def commutant_dimension(T) -> int:
    """dim of {X : XT = TX}; equals n for regular semisimple T."""
    n = len(T)
    rows = []
    for i in range(n):
        for j in range(n):
            row = [mpq(0)] * (n * n)
            # (XT - TX)[i][j] as a linear form in X entries
            for k in range(n):
                row[i * n + k] += T[k][j]
                row[k * n + j] -= T[i][k]
            rows.append(row)
    return n * n - rank(rows)


# ---------------------------------------------------------------------------
# integer normal forms
# ---------------------------------------------------------------------------

def hnf_columns(A):
    """Column-style Hermite normal form of an integer matrix.

    Returns H with the same column lattice as A, lower triangular up to
    column permutation of pivots: pivot entries positive, entries to the
    right of each pivot zero, entries to the left reduced mod the pivot.
    Zero columns are dropped.
    """
    M = [[mpz(x) for x in row] for row in A]
    if not M:
        return []
    n, m = len(M), len(M[0])
    col = 0
    for row_i in range(n):
        if col >= m:
            break
        # euclidean elimination across columns col..m-1 on this row
        while True:
            nz = [j for j in range(col, m) if M[row_i][j] != 0]
            if not nz:
                break
            jmin = min(nz, key=lambda j: abs(M[row_i][j]))
            if jmin != col:
                for r in range(n):
                    M[r][col], M[r][jmin] = M[r][jmin], M[r][col]
            done = True
            for j in range(col + 1, m):
                if M[row_i][j] != 0:
                    q = M[row_i][j] // M[row_i][col]
                    for r in range(n):
                        M[r][j] -= q * M[r][col]
                    if M[row_i][j] != 0:
                        done = False
            if done:
                break
        if M[row_i][col] == 0:
            continue
        if M[row_i][col] < 0:
            for r in range(n):
                M[r][col] = -M[r][col]
        # reduce columns left of the pivot
        for j in range(col):
            q = M[row_i][j] // M[row_i][col]
            if q:
                for r in range(n):
                    M[r][j] -= q * M[r][col]
        col += 1
    keep = [j for j in range(m) if any(M[r][j] != 0 for r in range(n))]
    # order columns by pivot row for a canonical result
    def pivot_row(j):
        return next(r for r in range(n) if M[r][j] != 0)
    keep.sort(key=pivot_row)
    return [[M[r][j] for j in keep] for r in range(n)]


def smith_normal_form(A):
    """(D, U, V) with U A V = D diagonal, U, V unimodular integer.

    Extended-gcd 2x2 unimodular steps keep the coefficient growth tame.
    """
    M = [[mpz(x) for x in row] for row in A]
    n = len(M)
    m = len(M[0]) if M else 0
    U = [[mpz(1) if i == j else mpz(0) for j in range(n)] for i in range(n)]
    V = [[mpz(1) if i == j else mpz(0) for j in range(m)] for i in range(m)]

    def swap_rows(i, j):
        M[i], M[j] = M[j], M[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for r in range(n):
            M[r][i], M[r][j] = M[r][j], M[r][i]
        for r in range(m):
            V[r][i], V[r][j] = V[r][j], V[r][i]

    def row_gcd_step(t, i):
        """Unimodular rows (t, i) update making M[i][t] = 0."""
        a, b = M[t][t], M[i][t]
        if b == 0:
            return
        if a == 0:
            swap_rows(t, i)
            return
        g, x, y = gmpy2.gcdext(a, b)
        p, q = a // g, b // g
        rt = [x * u + y * v for u, v in zip(M[t], M[i])]
        ri = [-q * u + p * v for u, v in zip(M[t], M[i])]
        M[t], M[i] = rt, ri
        ut = [x * u + y * v for u, v in zip(U[t], U[i])]
        ui = [-q * u + p * v for u, v in zip(U[t], U[i])]
        U[t], U[i] = ut, ui

    def col_gcd_step(t, j):
        a, b = M[t][t], M[t][j]
        if b == 0:
            return
        if a == 0:
            swap_cols(t, j)
            return
        g, x, y = gmpy2.gcdext(a, b)
        p, q = a // g, b // g
        for r in range(n):
            ct, cj = M[r][t], M[r][j]
            M[r][t], M[r][j] = x * ct + y * cj, -q * ct + p * cj
        for r in range(m):
            ct, cj = V[r][t], V[r][j]
            V[r][t], V[r][j] = x * ct + y * cj, -q * ct + p * cj

    t = 0
    while t < min(n, m):
        piv = None
        for i in range(t, n):
            for j in range(t, m):
                if M[i][j] != 0:
                    if piv is None or abs(M[i][j]) < abs(M[piv[0]][piv[1]]):
                        piv = (i, j)
        if piv is None:
            break
        swap_rows(t, piv[0])
        swap_cols(t, piv[1])
        while True:
            for i in range(t + 1, n):
                row_gcd_step(t, i)
            for j in range(t + 1, m):
                col_gcd_step(t, j)
            if all(M[i][t] == 0 for i in range(t + 1, n)) and \
               all(M[t][j] == 0 for j in range(t + 1, m)):
                break
        # make the pivot divide the remaining block
        bad = None
        for i in range(t + 1, n):
            if any(M[i][j] % M[t][t] != 0 for j in range(t + 1, m)):
                bad = i
                break
        if bad is not None:
            M[t] = [u + v for u, v in zip(M[t], M[bad])]
            U[t] = [u + v for u, v in zip(U[t], U[bad])]
            continue
        if M[t][t] < 0:
            M[t] = [-x for x in M[t]]
            U[t] = [-x for x in U[t]]
        t += 1
    return M, U, V


# ---------------------------------------------------------------------------
# lattices as rational column-span matrices
# ---------------------------------------------------------------------------

def clear_denominators(B):
    """(integer matrix, d) with B = integer/d entrywise."""
    d = mpz(1)
    for row in B:
        for x in row:
            d = gmpy2.lcm(d, mpq(x).denominator)
    return [[mpz(mpq(x) * d) for x in row] for row in B], d


def lattice_canonical(B):
    """Canonical rational basis (column HNF) of the column span of B."""
    Bi, d = clear_denominators(B)
    H = hnf_columns(Bi)
    return [[mpq(x, d) for x in row] for row in H]


def lattice_sum(B1, B2):
    return lattice_canonical([r1 + r2 for r1, r2 in zip(B1, B2)])


def integer_kernel(A):
    """Basis of the integer kernel {x in Z^m : A x = 0} (columns)."""
    ker = kernel(A)
    if not ker:
        return [[] for _ in range(len(A[0]))]
    cols = transpose(ker)  # m x k rational
    sat = saturation(cols)
    return sat


def saturation(B):
    """Saturation of the column span of B inside Z^n (B full column rank)."""
    Bi, _ = clear_denominators(B)
    n = len(Bi)
    k = len(Bi[0])
    D, U, _ = smith_normal_form(Bi)
    # columns of U^-1 restricted to the first k coordinates span the saturation
    Uinv = inverse([[mpq(x) for x in row] for row in U])
    sat = [[Uinv[i][j] for j in range(k)] for i in range(n)]
    assert is_integer_matrix(sat)
    return [[mpq(x) for x in row] for row in sat]


def lattice_intersect(B1, B2):
    """Intersection of two full-rank rational lattices (column spans)."""
    n = len(B1)
    k1, k2 = len(B1[0]), len(B2[0])
    # solve B1 a = B2 b over Z: integer kernel of [B1 | -B2]
    Mjoin = [[B1[i][j] for j in range(k1)] + [-B2[i][j] for j in range(k2)]
             for i in range(n)]
    Mi, _ = clear_denominators(Mjoin)
    kerb = integer_kernel(Mi)
    if not kerb or not kerb[0]:
        return [[] for _ in range(n)]
    # columns of kerb are (a, b) pairs; intersection vectors are B1 * a
    cols = []
    kk = len(kerb[0])
    for j in range(kk):
        a = [kerb[i][j] for i in range(k1)]
        cols.append(mat_vec(B1, a))
    return lattice_canonical(transpose(cols))


def lattice_contains(B, v) -> bool:
    """Is vector v in the column lattice of (full-column-rank) B?"""
    # solve B x = v over Q, check integrality
    n, k = len(B), len(B[0])
    if n == k:
        x = solve(B, v)
    else:
        # least squares free exact solve via pivoting on independent rows
        rowsel = _independent_rows(B)
        sq = [B[i] for i in rowsel]
        x = solve(sq, [v[i] for i in rowsel])
        if mat_vec(B, x) != list(v):
            return False
    return all(mpq(c).denominator == 1 for c in x)


def _independent_rows(B):
    n, k = len(B), len(B[0])
    M = [[mpq(x) for x in row] for row in B]
    sel = []
    used = [False] * n
    r = 0
    for c in range(k):
        piv = None
        for i in range(n):
            if not used[i] and M[i][c] != 0:
                piv = i
                break
        if piv is None:
            continue
        used[piv] = True
        sel.append(piv)
        inv = 1 / M[piv][c]
        for i in range(n):
            if i != piv and not used[i] and M[i][c] != 0:
                f = M[i][c] * inv
                M[i] = [x - f * y for x, y in zip(M[i], M[piv])]
    if len(sel) != k:
        raise ValueError("matrix does not have full column rank")
    return sel


def lattice_index(B_sub, B_sup) -> mpq:
    """Index [sup : sub] = |det(sup^-1 sub)| for full-rank lattices."""
    M = mat_mul(inverse(B_sup), B_sub)
    return abs(det(M))


def is_primitive_vector(B, v) -> bool:
    """Is v primitive in the column lattice of B (v in B, v/p not for all p)?"""
    x = solve(B, v) if len(B) == len(B[0]) else None
    if x is None:
        rowsel = _independent_rows(B)
        x = solve([B[i] for i in rowsel], [v[i] for i in rowsel])
    if any(mpq(c).denominator != 1 for c in x):
        return False
    g = mpz(0)
    for c in x:
        g = gmpy2.gcd(g, mpz(c))
    return g == 1


# ---------------------------------------------------------------------------
# LLL reduction driven by an exact rational Gram matrix
# ---------------------------------------------------------------------------

def _gso_from_gram(G):
    """Exact Gram-Schmidt data (mu, B) from a positive-definite Gram."""
    n = len(G)
    mu = [[mpq(0)] * n for _ in range(n)]
    B = [mpq(0)] * n
    c = [[mpq(0)] * n for _ in range(n)]  # c[i][j] = <b_i, b*_j>
    for i in range(n):
        for j in range(i + 1):
            s = G[i][j]
            for k in range(j):
                s -= mu[j][k] * c[i][k]
            c[i][j] = s
            if j < i:
                if B[j] == 0:
                    raise ZeroDivisionError("degenerate Gram in GSO")
                mu[i][j] = s / B[j]
        B[i] = c[i][i]
    return mu, B


def lll_reduce_gram(G, delta=mpq(3, 4), max_loops=10000):
    """(G', U) with G' = t(U) G U LLL-reduced; G positive definite, exact.

    Textbook LLL with exact rational arithmetic; sizes here are tiny
    (rank <= 9), so GSO data is recomputed after structural changes.
    """
    n = len(G)
    G = [[mpq(x) for x in row] for row in G]
    U = identity(n)

    def col_swap(i, j):
        for r in range(n):
            U[r][i], U[r][j] = U[r][j], U[r][i]
        for r in range(n):
            G[r][i], G[r][j] = G[r][j], G[r][i]
        G[i], G[j] = G[j], G[i]

    def addmul(dst, src, q):
        if q == 0:
            return
        for r in range(n):
            U[r][dst] += q * U[r][src]
        # G update: G = t(E) G E for E = I + q e_src e_dst^T
        for r in range(n):
            G[r][dst] += q * G[r][src]
        for r in range(n):
            G[dst][r] += q * G[src][r]

    mu, B = _gso_from_gram(G)
    k = 1
    loops = 0
    while k < n:
        loops += 1
        if loops > max_loops:
            break
        # size reduction
        for j in range(k - 1, -1, -1):
            q = _nearest_int(mu[k][j])
            if q != 0:
                addmul(k, j, -q)
                mu, B = _gso_from_gram(G)
        if B[k] >= (delta - mu[k][k - 1] ** 2) * B[k - 1]:
            k += 1
        else:
            col_swap(k, k - 1)
            mu, B = _gso_from_gram(G)
            k = max(k - 1, 1)
    return G, U


def _nearest_int(q: mpq) -> mpz:
    num, den = q.numerator, q.denominator
    return (2 * num + den) // (2 * den)
