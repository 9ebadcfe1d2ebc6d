"""Euclidean lattice geometry: shortest vectors, covolumes, canonical plots.

Gram matrices come in two flavours:

* exact: positive-definite symmetric mpq matrices (test lattices, forms
  derived algebraically).  Everything is decided by exact rational
  arithmetic: Fincke-Pohst enumeration off an exact LDL decomposition,
  covolume^2 as exact Gram determinants, convex-hull tests as exact
  power comparisons.
* interval: a rational approximation plus an entrywise error radius (the
  numeric reduction covariant).  The same machinery runs on RatIval
  entries; ambiguous comparisons raise and the caller escalates
  precision.

The canonical plot of a lattice is the lower convex hull of
(rank, log covol) over all sublattices; minimal-covolume sublattices at
each rank are found by enumerating vectors below a *proven* radius: if
m_best bounds the minimal rank-k covolume from above and lambda_1 is the
minimum of the lattice, any minimal rank-k sublattice is spanned (up to
saturation) by vectors of norm^2 at most gamma_k^k m_best^2 /
lambda_1^(2k-2), by Minkowski's second theorem.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import gmpy2
from gmpy2 import mpq, mpz

from . import linalg as la
from .errors import PrecisionExhausted
from .numeric import RatIval, log_ival, sqrt_lower, sqrt_upper

#: gamma_k^k for the Hermite constants, k = 1..8
HERMITE_POW = [None, mpq(1), mpq(4, 3), mpq(2), mpq(4), mpq(8),
               mpq(64, 3), mpq(64), mpq(256)]


class AmbiguousComparison(Exception):
    """An interval comparison could not be decided; escalate precision."""


# ---------------------------------------------------------------------------
# interval-or-exact scalar helpers
# ---------------------------------------------------------------------------

def _ival(x) -> RatIval:
    return x if isinstance(x, RatIval) else RatIval(mpq(x))


def _strictly_less(a, b) -> bool:
    """a < b with certainty; raises AmbiguousComparison on overlap."""
    a, b = _ival(a), _ival(b)
    if a.hi < b.lo:
        return True
    if b.hi <= a.lo:
        return False
    raise AmbiguousComparison(f"cannot order [{a.lo},{a.hi}] vs [{b.lo},{b.hi}]")


def gram_ival(Hq, rad) -> list:
    """Interval Gram from a rational approximation and an error radius."""
    rad = mpq(rad)
    return [[RatIval(x - rad, x + rad) for x in row] for row in Hq]


# ---------------------------------------------------------------------------
# exact LDL and Fincke-Pohst enumeration
# ---------------------------------------------------------------------------

def ldl_exact(Q):
    """(L, D) with Q = L diag(D) t(L), L lower unipotent; Q must be
    positive definite (raises ValueError otherwise)."""
    n = len(Q)
    L = la.identity(n)
    D = [mpq(0)] * n
    for j in range(n):
        d = mpq(Q[j][j])
        for k in range(j):
            d -= L[j][k] * L[j][k] * D[k]
        if d <= 0:
            raise ValueError("Gram matrix is not positive definite")
        D[j] = d
        for i in range(j + 1, n):
            s = mpq(Q[i][j])
            for k in range(j):
                s -= L[i][k] * L[j][k] * D[k]
            L[i][j] = s / d
    return L, D


def enumerate_short(Q, C, limit: int = 200000):
    """All nonzero x in Z^n with t(x) Q x <= C, up to sign.

    Exact rational Fincke-Pohst; the sign is normalised so the last
    nonzero coordinate is positive.  Raises PrecisionExhausted when the
    candidate count exceeds limit (degenerate inputs).
    """
    n = len(Q)
    C = mpq(C)
    if C < 0:
        return []
    # LLL first for enumeration efficiency
    _, U = la.lll_reduce_gram([[mpq(x) for x in row] for row in Q])
    QR = la.gram_of(U, Q)
    L, D = ldl_exact(QR)
    out = []
    x = [0] * n

    def recurse(i, rem):
        if len(out) > limit:
            raise PrecisionExhausted("short-vector enumeration exploded")
        if i < 0:
            if any(x):
                out.append(list(x))
            return
        mu = sum(L[j][i] * x[j] for j in range(i + 1, n))
        bound = rem / D[i]
        r = sqrt_upper(bound, 64)
        lo = _ceil_q(-mu - r)
        hi = _floor_q(-mu + r)
        for xi in range(int(lo), int(hi) + 1):
            x[i] = xi
            d = D[i] * (xi + mu) ** 2
            if d <= rem:
                recurse(i - 1, rem - d)
        x[i] = 0

    recurse(n - 1, C)
    seen = {}
    for v in out:
        w = la.mat_vec(U, [mpq(c) for c in v])
        w = [mpz(c) for c in w]
        for c in reversed(w):
            if c != 0:
                if c < 0:
                    w = [-a for a in w]
                break
        key = tuple(int(c) for c in w)
        if key not in seen:
            seen[key] = w
    return list(seen.values())


def _ceil_q(q: mpq) -> mpz:
    return -((-q.numerator) // q.denominator)


def _floor_q(q: mpq) -> mpz:
    return q.numerator // q.denominator


def quad_value(Q, x):
    """t(x) Q x; works for exact or RatIval entries."""
    n = len(Q)
    total = None
    for i in range(n):
        if x[i] == 0:
            continue
        for j in range(n):
            if x[j] == 0:
                continue
            term = Q[i][j] * int(x[i]) * int(x[j])
            total = term if total is None else total + term
    if total is None:
        return mpq(0)
    return total


def shortest_vector_exact(Q):
    """(vector, min norm^2) over nonzero lattice vectors, exact Gram."""
    _, U = la.lll_reduce_gram([[mpq(x) for x in row] for row in Q])
    QR = la.gram_of(U, Q)
    C = min(QR[i][i] for i in range(len(Q)))
    cands = enumerate_short(Q, C)
    best, bestval = None, None
    for v in cands:
        val = quad_value(Q, v)
        if bestval is None or val < bestval or \
                (val == bestval and tuple(v) < tuple(best)):
            best, bestval = v, val
    return best, bestval


def shortest_vector_ival(Hq, rad, tol=mpq(1, 10**9)):
    """(vector, RatIval norm^2) under an interval Gram.

    Enumerates on the rational center with an inflated radius; the
    returned interval encloses the true minimum and the vector attains
    its upper endpoint.  AmbiguousComparison when the minimum cannot be
    pinned within relative tol.
    """
    n = len(Hq)
    G = gram_ival(Hq, rad)
    _, U = la.lll_reduce_gram([[mpq(x) for x in row] for row in Hq])
    QR = la.gram_of(U, Hq)
    C = min(QR[i][i] for i in range(n))
    # inflate: true norms differ from center norms by rad * (sum |x|)^2
    cands = enumerate_short(Hq, C * mpq(11, 10))
    best, bestval = None, None
    lo_all = None
    for v in cands:
        val = quad_value(G, v)
        if bestval is None or val.hi < bestval.hi:
            best, bestval = v, val
        if lo_all is None or val.lo < lo_all:
            lo_all = val.lo
    minval = RatIval(max(lo_all, mpq(0)), bestval.hi)
    if minval.hi - minval.lo > tol * minval.hi:
        raise AmbiguousComparison("shortest length not pinned within tol")
    return best, minval


# ---------------------------------------------------------------------------
# covolumes and sublattice operations (columns span sublattices of Z^n)
# ---------------------------------------------------------------------------

def covol2_exact(Q, cols) -> mpq:
    """Squared covolume det(t(B) Q B) of the sublattice spanned by cols."""
    return la.det(la.gram_of(cols, Q))


def covol2_ival(G, cols) -> RatIval:
    """Interval determinant of the restricted interval Gram (Leibniz)."""
    B = cols
    k = len(B[0])
    GB = [[None] * k for _ in range(k)]
    n = len(G)
    for a in range(k):
        for b in range(k):
            s = None
            for i in range(n):
                if B[i][a] == 0:
                    continue
                for j in range(n):
                    if B[j][b] == 0:
                        continue
                    t = G[i][j] * (int(B[i][a]) * int(B[j][b]))
                    s = t if s is None else s + t
            GB[a][b] = s if s is not None else RatIval(0)
    return _det_ival(GB)


def _det_ival(M) -> RatIval:
    n = len(M)
    if n == 0:
        return RatIval(1)
    if n == 1:
        return _ival(M[0][0])
    total = None
    for j in range(n):
        entry = _ival(M[0][j])
        if entry.lo == 0 and entry.hi == 0:
            continue
        minor = [row[:j] + row[j + 1:] for row in M[1:]]
        term = entry * _det_ival(minor)
        if j % 2:
            term = -term
        total = term if total is None else total + term
    return total if total is not None else RatIval(0)


def saturate_cols(cols):
    """Saturation of integer column span in Z^n."""
    return la.saturation(cols)


def sublattice_key(cols):
    """Canonical hashable key (HNF) of an integer column span."""
    H = la.lattice_canonical(cols)
    return tuple(tuple(int(x) for x in row) for row in H)


# ---------------------------------------------------------------------------
# minimal covolumes per rank and the canonical plot
# ---------------------------------------------------------------------------

def _min_covol2_at_rank(Q, k, m_best2, lam1_2, covol2_fn, limit=200000):
    """(min covol^2, minimiser saturated basis) at rank k.

    m_best2: exact-or-interval upper bound for the squared minimal
    covolume; lam1_2: lower bound for the squared lattice minimum.  The
    enumeration radius gamma_k^k m_best2 / lam1_2^(k-1) provably covers a
    generating set of minima vectors of any minimiser.
    """
    n = len(Q)
    if k == 0:
        return _ival(1) if isinstance(m_best2, RatIval) else mpq(1), []
    exact = not isinstance(Q[0][0], RatIval)
    ub = m_best2 if exact else m_best2.hi
    lam = lam1_2 if exact else lam1_2.lo
    R2 = HERMITE_POW[k] * ub / (lam ** (k - 1)) if k > 1 else ub
    centerQ = Q if exact else [[x.mid() for x in row] for row in Q]
    infl = mpq(1) if exact else mpq(101, 100)
    vecs = enumerate_short(centerQ, R2 * infl, limit)

    def ub_of(val):
        return val.hi if isinstance(val, RatIval) else val

    def lo_of(val):
        return val.lo if isinstance(val, RatIval) else val

    vals = sorted(((quad_value(Q, v), v) for v in vecs),
                  key=lambda t: ub_of(t[0]))
    # pruning slack: interval norms are compared by upper bound
    slack = mpq(1) if exact else mpq(1000001, 1000000)
    state = {"bound": HERMITE_POW[k] * ub * slack, "best_ub": ub,
             "best_basis": None, "lo_all": None}
    seen = set()

    def consider(sat):
        key = sublattice_key(sat)
        if key in seen:
            return
        seen.add(key)
        c2 = covol2_fn(Q, sat)
        if state["lo_all"] is None or lo_of(c2) < state["lo_all"]:
            state["lo_all"] = lo_of(c2)
        cur = ub_of(c2)
        if state["best_basis"] is None or cur < state["best_ub"] or \
                (exact and cur == state["best_ub"]
                 and key < sublattice_key(state["best_basis"])):
            if cur <= state["best_ub"]:
                state["best_ub"] = cur
                state["bound"] = HERMITE_POW[k] * cur * slack
            state["best_basis"] = sat

    def dfs(start, chosen, prod):
        if len(chosen) == k:
            cols = la.transpose([vals[i][1] for i in chosen])
            if la.rank(cols) == k:
                consider(saturate_cols(cols))
            return
        rem = k - len(chosen) - 1
        for i in range(start, len(vals)):
            nv = ub_of(vals[i][0])
            if prod * nv * (nv ** rem) > state["bound"]:
                break
            dfs(i + 1, chosen + [i], prod * nv)

    dfs(0, [], mpq(1))
    if state["best_basis"] is None:
        raise PrecisionExhausted(f"no rank-{k} sublattice found in radius")
    if exact:
        return state["best_ub"], state["best_basis"]
    return (RatIval(min(state["lo_all"], state["best_ub"]), state["best_ub"]),
            state["best_basis"])


@dataclass
class CanonicalPlot:
    """Lower convex hull of (rank, log covol) with its filtration."""

    rank: int
    vertices: list          # [(rank, covol2 exact-or-ival, log RatIval)]
    filtration: list        # saturated bases (columns) at the vertices
    min_covol2: list        # covol^2 per rank 0..n
    certified: bool

    def vertex_ranks(self):
        return [v[0] for v in self.vertices]

    def as_json(self):
        return {
            "vertices": [[int(r), float(log.mid())]
                         for r, _, log in self.vertices],
            "filtration": [[[int(x) for x in row] for row in basis]
                           for basis in self.filtration],
            "certified": self.certified,
        }


def _hull_vertices(points):
    """Indices of lower-hull vertices of (k, covol2) pairs.

    Strict convexity test by exact power comparison:
    (j - i) log c_k < (j - k) log c_i + (k - i) log c_j
    <=>  c_k^(j-i) < c_i^(j-k) c_j^(k-i)   (covol2 powers halve the logs).
    """
    def below_chord(i, k, j, strict=True):
        ci, ck, cj = points[i], points[k], points[j]
        lhs = _pow_ival(ck, j - i)
        rhs = _pow_ival(ci, j - k) * _pow_ival(cj, k - i)
        if isinstance(lhs, RatIval) or isinstance(rhs, RatIval):
            return _strictly_less(lhs, rhs)
        return lhs < rhs

    n = len(points) - 1
    hull = [0]
    for k in range(1, n + 1):
        while len(hull) >= 2:
            i, jmid = hull[-2], hull[-1]
            # drop jmid unless it is strictly below chord i..k
            if below_chord(i, jmid, k):
                break
            hull.pop()
        hull.append(k)
    return hull


def _pow_ival(x, e):
    if isinstance(x, RatIval):
        out = RatIval(1)
        for _ in range(e):
            out = out * x
        return out
    return mpq(x) ** e


def canonical_plot(Q, limit=200000) -> CanonicalPlot:
    """Canonical plot of Z^n under an exact or interval Gram matrix.

    The per-rank minimisation enumerates vectors below the Minkowski-
    certified radius, seeded by the LLL basis prefix covolumes; certified
    is True because the radius bound is proven before each search.
    """
    n = len(Q)
    exact = not isinstance(Q[0][0], RatIval)
    covol2_fn = covol2_exact if exact else covol2_ival
    centerQ = Q if exact else [[x.mid() for x in row] for row in Q]
    if exact:
        _, lam1_2 = shortest_vector_exact(Q)
    else:
        _, lam1_2 = shortest_vector_ival(
            centerQ, max(x.width() for row in Q for x in row) / 2)
    mins = [mpq(1) if exact else RatIval(1)]
    filts = [[]]
    _, U = la.lll_reduce_gram([[mpq(x) for x in row] for row in centerQ])
    prefix = U
    for k in range(1, n + 1):
        seed_cols = [row[:k] for row in prefix]
        sat = saturate_cols(seed_cols)
        m_best2 = covol2_fn(Q, sat)
        c2, basis = _min_covol2_at_rank(Q, k, m_best2, lam1_2, covol2_fn,
                                        limit)
        mins.append(c2)
        filts.append(basis)
    hull = _hull_vertices(mins)
    vertices = []
    filtration = []
    for k in hull:
        c2 = mins[k]
        iv = c2 if isinstance(c2, RatIval) else RatIval(c2)
        logv = log_ival(iv) * RatIval(mpq(1, 2))
        vertices.append((k, c2, logv))
        filtration.append(filts[k])
    # filtration nesting at the hull vertices
    for a, b in zip(filtration[1:], filtration[2:]):
        for col in la.transpose(a):
            if not la.lattice_contains(b, col):
                raise PrecisionExhausted("canonical filtration fails to nest")
    return CanonicalPlot(n, vertices, filtration, mins, True)


def brute_force_min_covol2(Q, k, limit=400000):
    """Independent oracle: minimal covol^2 at rank k by exhaustive
    enumeration below the proven radius, seeded from the standard basis."""
    n = len(Q)
    _, lam1_2 = shortest_vector_exact(Q)
    seed = saturate_cols([row[:k] for row in la.identity(n)])
    m_best2 = covol2_exact(Q, seed)
    # exhaustive: all k-subsets of all vectors below the proven radius
    R2 = HERMITE_POW[k] * m_best2 / (lam1_2 ** (k - 1)) if k > 1 else m_best2
    vecs = enumerate_short(Q, R2, limit)
    best = m_best2
    best_basis = seed
    for combo in combinations(range(len(vecs)), k):
        cols = la.transpose([vecs[i] for i in combo])
        if la.rank(cols) != k:
            continue
        prod = mpq(1)
        for i in combo:
            prod *= quad_value(Q, vecs[i])
        if prod > HERMITE_POW[k] * best:
            continue
        sat = saturate_cols(cols)
        c2 = covol2_exact(Q, sat)
        if c2 < best:
            best = c2
            best_basis = sat
    return best, best_basis


def submodularity_holds(Q, cols1, cols2) -> bool:
    """Exact check: covol^2(L1 cap L2) covol^2(L1 + L2) <= covol^2(L1) covol^2(L2)."""
    inter = la.lattice_intersect(cols1, cols2)
    summ = la.lattice_sum(cols1, cols2)
    lhs = covol2_exact(Q, inter) * covol2_exact(Q, summ)
    rhs = covol2_exact(Q, cols1) * covol2_exact(Q, cols2)
    return lhs <= rhs
