"""Exact matrix algebra over Z, F_q[t] and their fraction fields.

Matrices are immutable tuples of row tuples.  Algorithms that need ring
structure (Hermite/Smith forms, kernels, saturation) take one of the ring
objects from `rings`; fraction-field routines (rank, inverse, determinant
by elimination) work on Fraction / FqRationalFunction entries directly.
"""

from __future__ import annotations

import itertools

from .errors import (DimensionError, DomainError, RankDeficiencyError,
                     SingularityError)


def freeze(rows):
    return tuple(tuple(r) for r in rows)


def shape(M):
    return len(M), len(M[0]) if M else 0


def identity_rows(n, one, zero):
    return freeze([[one if i == j else zero for j in range(n)] for i in range(n)])


def transpose(M):
    return tuple(zip(*M)) if M else ()


def matmul(A, B, zero):
    if not A or not B:
        return ()
    n = len(B)
    if len(A[0]) != n:
        raise DimensionError("matmul shape mismatch")
    Bt = transpose(B)
    out = []
    for row in A:
        out_row = []
        for col in Bt:
            acc = zero
            for a, b in zip(row, col):
                acc = acc + a * b
            out_row.append(acc)
        out.append(tuple(out_row))
    return tuple(out)


def mat_sub(A, B):
    return freeze([[a - b for a, b in zip(ra, rb)] for ra, rb in zip(A, B)])


def scale_rows(M, c):
    return freeze([[c * x for x in row] for row in M])


def stack(A, B):
    return tuple(A) + tuple(B)


# ---------------------------------------------------------------------------
# determinants and minors
# ---------------------------------------------------------------------------

def det_ring(ring, M):
    """Fraction-free Bareiss determinant over an integral domain."""
    n, m = shape(M)
    if n != m:
        raise DimensionError("determinant of a non-square matrix")
    if n == 0:
        return ring.one()
    a = [list(row) for row in M]
    sign = False
    prev = ring.one()
    for k in range(n - 1):
        if ring.is_zero(a[k][k]):
            for i in range(k + 1, n):
                if not ring.is_zero(a[i][k]):
                    a[k], a[i] = a[i], a[k]
                    sign = not sign
                    break
            else:
                return ring.zero()
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = ring.sub(ring.mul(a[i][j], a[k][k]),
                               ring.mul(a[i][k], a[k][j]))
                a[i][j] = ring.exact_div(num, prev)
            a[i][k] = ring.zero()
        prev = a[k][k]
    d = a[n - 1][n - 1]
    return ring.neg(d) if sign else d


def det_field(M, zero, one):
    """Gaussian-elimination determinant over a field."""
    n, m = shape(M)
    if n != m:
        raise DimensionError("determinant of a non-square matrix")
    if n == 0:
        return one
    a = [list(row) for row in M]
    det = one
    negate = False
    for k in range(n):
        piv = None
        for i in range(k, n):
            if a[i][k] != zero:
                piv = i
                break
        if piv is None:
            return zero
        if piv != k:
            a[k], a[piv] = a[piv], a[k]
            negate = not negate
        det = det * a[k][k]
        inv_head = one / a[k][k]
        for i in range(k + 1, n):
            if a[i][k] != zero:
                f = a[i][k] * inv_head
                for j in range(k, n):
                    a[i][j] = a[i][j] - f * a[k][j]
    return -det if negate else det


def minors(M, m, det):
    """All m x m minors keyed by 1-based index tuples in lexicographic order.

    When the matrix has exactly m rows the keys are column subsets; otherwise
    each key is the concatenated (row subset, column subset) tuple.
    """
    nrows, ncols = shape(M)
    if m < 1 or m > min(nrows, ncols):
        raise DimensionError(f"minor order {m} out of range for {nrows}x{ncols}")
    out = {}
    row_sets = ([tuple(range(nrows))] if nrows == m
                else list(itertools.combinations(range(nrows), m)))
    col_sets = list(itertools.combinations(range(ncols), m))
    for rs in row_sets:
        for cs in col_sets:
            sub = freeze([[M[i][j] for j in cs] for i in rs])
            key = (tuple(c + 1 for c in cs) if nrows == m
                   else tuple(r + 1 for r in rs) + tuple(c + 1 for c in cs))
            out[key] = det(sub)
    return out


# ---------------------------------------------------------------------------
# Hermite normal form (row style, canonical)
# ---------------------------------------------------------------------------

def hnf(ring, rows, ncols=None):
    """Canonical row echelon form over a Euclidean domain.

    Pivots are the leading entries of their rows, normalized (positive /
    monic), with strictly increasing pivot columns and entries above each
    pivot reduced modulo it.  Zero rows are dropped, so the result is the
    canonical basis of the row module.
    """
    work = [list(r) for r in rows]
    if ncols is None:
        ncols = len(work[0]) if work else 0
    nrows = len(work)
    pivot_row = 0
    for col in range(ncols):
        while True:
            nz = [i for i in range(pivot_row, nrows)
                  if not ring.is_zero(work[i][col])]
            if len(nz) <= 1:
                break
            nz.sort(key=lambda i: ring.norm_key(work[i][col]))
            base = nz[0]
            for i in nz[1:]:
                q, _ = ring.divmod(work[i][col], work[base][col])
                if not ring.is_zero(q):
                    work[i] = [ring.sub(a, ring.mul(q, b))
                               for a, b in zip(work[i], work[base])]
                else:
                    work[i], work[base] = work[base], work[i]
                    base = i
        nz = [i for i in range(pivot_row, nrows)
              if not ring.is_zero(work[i][col])]
        if not nz:
            continue
        i0 = nz[0]
        work[pivot_row], work[i0] = work[i0], work[pivot_row]
        unit, normalized = ring.unit_normalize(work[pivot_row][col])
        if not ring.is_unit(unit):
            raise DomainError("unit normalization failed")  # pragma: no cover
        if normalized != work[pivot_row][col]:
            inv = _unit_inverse(ring, unit)
            work[pivot_row] = [ring.mul(inv, x) for x in work[pivot_row]]
        piv = work[pivot_row][col]
        for i in range(pivot_row):
            q, _ = ring.divmod(work[i][col], piv)
            if not ring.is_zero(q):
                work[i] = [ring.sub(a, ring.mul(q, b))
                           for a, b in zip(work[i], work[pivot_row])]
        pivot_row += 1
    return freeze(work[:pivot_row])


def _unit_inverse(ring, u):
    if hasattr(ring, "unit_inverse"):
        return ring.unit_inverse(u)
    # units of Z are +-1; units of F_q[t] are the nonzero constants
    from .fq import FqPolynomial, poly
    if isinstance(u, int):
        return u
    if isinstance(u, FqPolynomial):
        return poly(u.field, [u.field.inv(u.coeffs[0])])
    raise DomainError(f"cannot invert unit {u!r}")  # pragma: no cover


# ---------------------------------------------------------------------------
# Smith normal form with unimodular transforms
# ---------------------------------------------------------------------------

class _SNFState:
    def __init__(self, ring, M):
        self.ring = ring
        m, n = shape(M)
        one, zero = ring.one(), ring.zero()
        self.D = [list(r) for r in M]
        self.U = [list(r) for r in identity_rows(m, one, zero)]
        self.V = [list(r) for r in identity_rows(n, one, zero)]
        self.Vinv = [list(r) for r in identity_rows(n, one, zero)]
        self.m, self.n = m, n

    # maintain U*D*V = M; Vinv tracks V^{-1} for kernel extraction
    def swap_rows(self, i, j):
        self.D[i], self.D[j] = self.D[j], self.D[i]
        for row in self.U:
            row[i], row[j] = row[j], row[i]

    def swap_cols(self, i, j):
        for row in self.D:
            row[i], row[j] = row[j], row[i]
        self.V[i], self.V[j] = self.V[j], self.V[i]
        for row in self.Vinv:
            row[i], row[j] = row[j], row[i]

    def row_sub(self, i, j, q):
        """row_i -= q * row_j on D."""
        R = self.ring
        self.D[i] = [R.sub(a, R.mul(q, b)) for a, b in zip(self.D[i], self.D[j])]
        for row in self.U:
            row[j] = R.add(row[j], R.mul(q, row[i]))

    def col_sub(self, i, j, q):
        """col_i -= q * col_j on D."""
        R = self.ring
        for row in self.D:
            row[i] = R.sub(row[i], R.mul(q, row[j]))
        self.V[j] = [R.add(a, R.mul(q, b)) for a, b in zip(self.V[j], self.V[i])]
        for row in self.Vinv:
            row[i] = R.sub(row[i], R.mul(q, row[j]))

    def scale_row(self, i, unit):
        """row_i *= unit on D (unit invertible)."""
        R = self.ring
        inv = _unit_inverse(R, unit)
        self.D[i] = [R.mul(unit, x) for x in self.D[i]]
        for row in self.U:
            row[i] = R.mul(row[i], inv)


def snf(ring, M):
    """Smith normal form: returns (U, D, V) with U*D*V = M exactly.

    U and V are unimodular over the ring; D is diagonal with each diagonal
    entry normalized and dividing the next.
    """
    st = _SNFState(ring, M)
    m, n = st.m, st.n
    R = ring
    k = 0
    while k < min(m, n):
        piv = None
        best = None
        for i in range(k, m):
            for j in range(k, n):
                if not R.is_zero(st.D[i][j]):
                    key = R.norm_key(st.D[i][j])
                    if best is None or key < best:
                        best = key
                        piv = (i, j)
        if piv is None:
            break
        st.swap_rows(k, piv[0])
        st.swap_cols(k, piv[1])
        dirty = False
        for i in range(k + 1, m):
            if not R.is_zero(st.D[i][k]):
                q, r = R.divmod(st.D[i][k], st.D[k][k])
                st.row_sub(i, k, q)
                if not R.is_zero(r):
                    dirty = True
        for j in range(k + 1, n):
            if not R.is_zero(st.D[k][j]):
                q, r = R.divmod(st.D[k][j], st.D[k][k])
                st.col_sub(j, k, q)
                if not R.is_zero(r):
                    dirty = True
        if dirty:
            continue
        # divisibility: D[k][k] must divide every remaining entry
        fix = None
        for i in range(k + 1, m):
            for j in range(k + 1, n):
                if not R.is_zero(st.D[i][j]):
                    _, r = R.divmod(st.D[i][j], st.D[k][k])
                    if not R.is_zero(r):
                        fix = i
                        break
            if fix is not None:
                break
        if fix is not None:
            st.row_sub(k, fix, R.neg(R.one()))  # add row `fix` to row k
            continue
        k += 1
    for i in range(min(m, n)):
        if not R.is_zero(st.D[i][i]):
            unit, norm = R.unit_normalize(st.D[i][i])
            if norm != st.D[i][i]:
                st.scale_row(i, _unit_inverse(R, unit))
    return freeze(st.U), freeze(st.D), freeze(st.V), freeze(st.Vinv)


def smith_diagonal(ring, M):
    _, D, _, _ = snf(ring, M)
    return tuple(D[i][i] for i in range(min(shape(M))))


def kernel(ring, M):
    """Basis rows of the right kernel {x : M x = 0} over the ring."""
    m, n = shape(M)
    if n == 0:
        return ()
    if m == 0:
        return identity_rows(n, ring.one(), ring.zero())
    _, D, _, Vinv = snf(ring, M)
    rank = sum(1 for i in range(min(m, n)) if not ring.is_zero(D[i][i]))
    cols = transpose(Vinv)
    return freeze([cols[j] for j in range(rank, n)])


def left_kernel(ring, M):
    return kernel(ring, transpose(M))


def rank_over_field(ring, M):
    """Rank of a ring matrix over its fraction field."""
    lifted = freeze([[ring.to_field(x) for x in row] for row in M])
    return rank_field(lifted, ring.field_zero(), ring.field_one())


def saturate(ring, rows, ncols=None):
    """Basis (in HNF) of the saturation of the row span inside the free module.

    The saturation is the smallest direct summand containing the row span;
    rows must be independent over the fraction field.
    """
    rows = freeze(rows)
    if not rows:
        return ()
    m, n = shape(rows)
    if ncols is not None and ncols != n:
        raise DimensionError("ambient rank mismatch")
    _, D, V, _ = snf(ring, rows)
    rank = sum(1 for i in range(min(m, n)) if not ring.is_zero(D[i][i]))
    if rank != m:
        raise RankDeficiencyError("rows are dependent over the fraction field")
    return hnf(ring, V[:m])


def fractional_hnf(ring, rows):
    """Canonical HNF of a lattice given by fraction-field rows.

    Scales by a common denominator, runs the integral HNF, and scales back;
    canonical because the HNF commutes with normalized scalar scaling.
    """
    rows = freeze(rows)
    if not rows:
        return ()
    denom = ring.one()
    for row in rows:
        for x in row:
            d = _field_denominator(ring, x)
            g = ring.gcd(denom, d)
            denom = ring.exact_div(ring.mul(denom, d), g)
    _, denom = ring.unit_normalize(denom)
    denom_f = ring.to_field(denom)
    scaled = [[ring.from_field(denom_f * x) for x in row] for row in rows]
    H = hnf(ring, scaled)
    return freeze([[ring.to_field(x) / denom_f for x in row] for row in H])


def _field_denominator(ring, x):
    from fractions import Fraction as _F
    if isinstance(x, _F):
        return x.denominator
    return x.den  # FqRationalFunction


def completion_rows(ring, rows):
    """Extend a saturated basis to a unimodular square matrix (rows first)."""
    rows = freeze(rows)
    m, n = shape(rows)
    _, D, V, _ = snf(ring, rows)
    for i in range(m):
        if not ring.is_unit(D[i][i]):
            raise RankDeficiencyError("rows do not span a direct summand")
    return stack(rows, V[m:])


def lattice_intersect(ring, A, B):
    """HNF basis of the intersection of two row modules over the ring."""
    A, B = freeze(A), freeze(B)
    if not A or not B:
        return ()
    stacked = stack(A, B)
    rels = left_kernel(ring, stacked)
    zero = ring.zero()
    vecs = []
    for rel in rels:
        c = rel[:len(A)]
        v = [zero] * len(A[0])
        for coef, row in zip(c, A):
            for j, x in enumerate(row):
                v[j] = ring.add(v[j], ring.mul(coef, x))
        vecs.append(v)
    return hnf(ring, vecs)


# ---------------------------------------------------------------------------
# fraction-field linear algebra
# ---------------------------------------------------------------------------

def rank_field(M, zero, one):
    m, n = shape(M)
    a = [list(row) for row in M]
    rank = 0
    for col in range(n):
        piv = None
        for i in range(rank, m):
            if a[i][col] != zero:
                piv = i
                break
        if piv is None:
            continue
        a[rank], a[piv] = a[piv], a[rank]
        inv = one / a[rank][col]
        for i in range(rank + 1, m):
            if a[i][col] != zero:
                f = a[i][col] * inv
                for j in range(col, n):
                    a[i][j] = a[i][j] - f * a[rank][j]
        rank += 1
        if rank == m:
            break
    return rank


def inverse_field(M, zero, one):
    m, n = shape(M)
    if m != n:
        raise DimensionError("inverse of a non-square matrix")
    a = [list(row) + list(identity_rows(n, one, zero)[i]) for i, row in enumerate(M)]
    for col in range(n):
        piv = None
        for i in range(col, n):
            if a[i][col] != zero:
                piv = i
                break
        if piv is None:
            raise SingularityError("matrix is singular")
        a[col], a[piv] = a[piv], a[col]
        inv = one / a[col][col]
        a[col] = [x * inv for x in a[col]]
        for i in range(n):
            if i != col and a[i][col] != zero:
                f = a[i][col]
                a[i] = [x - f * y for x, y in zip(a[i], a[col])]
    return freeze([row[n:] for row in a])


def field_kernel(M, zero, one):
    """Basis rows of the right kernel over a field."""
    m, n = shape(M)
    a = [list(row) for row in M]
    pivots = []
    rank = 0
    for col in range(n):
        piv = None
        for i in range(rank, m):
            if a[i][col] != zero:
                piv = i
                break
        if piv is None:
            continue
        a[rank], a[piv] = a[piv], a[rank]
        inv = one / a[rank][col]
        a[rank] = [x * inv for x in a[rank]]
        for i in range(m):
            if i != rank and a[i][col] != zero:
                f = a[i][col]
                a[i] = [x - f * y for x, y in zip(a[i], a[rank])]
        pivots.append(col)
        rank += 1
    free = [j for j in range(n) if j not in pivots]
    basis = []
    for j in free:
        v = [zero] * n
        v[j] = one
        for r, pc in enumerate(pivots):
            v[pc] = -a[r][j]
        basis.append(tuple(v))
    return freeze(basis)


def inverse_unimodular(ring, U):
    """Inverse of a unimodular ring matrix, with integral entries."""
    lifted = freeze([[ring.to_field(x) for x in row] for row in U])
    inv = inverse_field(lifted, ring.field_zero(), ring.field_one())
    return freeze([[ring.from_field(x) for x in row] for row in inv])
