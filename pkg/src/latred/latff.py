"""Volume spaces over F_q[t]: integral log-volumes, diagonal bases, orbits.

A volume space is the free module V = F_q[t]^n together with a rank-n
lattice S over the valuation ring R = {f/g : deg f <= deg g} of F_q(t),
given by a basis matrix over F_q(t) whose columns span S.  Log-volumes are
integers: the volume of a submodule W is the largest (-nu) of the maximal
minors of the matrix expressing a basis of W in a basis of S.

Every volume space admits a diagonal shape: bases (w_i) of V and (b_i) of S
with w_i = t^{r_i} b_i and ascending integers r_1 <= ... <= r_n.  The
r-vector classifies the GL_n(F_q[t])-orbit of S, carries the canonical
filtration (chain breaks where r jumps, with instability r_{m+1} - r_m),
and makes all constrained volume minima explicit:

    min { logvol(X) : X <= W, rk X = k }  =  rho_1 + ... + rho_k

for the r-vector rho of the restricted space, and similarly above W through
the quotient space.

Short-vector searches never enumerate F_q[t]-points: the set of v in V with
logvol<v> <= D is an F_q-vector space cut out by linear conditions on the
Laurent tails of S^{-1} v, so a nullspace computation over F_q finds it.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

from . import filtration, gflinalg, matrices
from .errors import (DimensionError, DomainError, ProjectivityError,
                     RankDeficiencyError, ScaleError, SingularityError)
from .fq import FqRationalFunction, gf, poly, poly_one, poly_t
from .rings import poly_ring

ENUM_SPACE_LIMIT = 1 << 13


def _as_ratfunc_rows(q, rows):
    out = []
    for row in rows:
        out.append(tuple(FqRationalFunction.of(x) if not isinstance(x, FqRationalFunction)
                         else x for x in row))
    return tuple(out)


@dataclass(frozen=True)
class VolumeSpace:
    """Lattice over the infinite-place valuation ring inside F_q(t)^n.

    `basis` is an n x n matrix over F_q(t); its columns are an R-basis of
    the lattice S inside Q otimes V, written in the standard coordinates of
    V = F_q[t]^n.
    """

    q: int
    n: int
    basis: tuple

    def __post_init__(self):
        rows = _as_ratfunc_rows(self.q, self.basis)
        if len(rows) != self.n or any(len(r) != self.n for r in rows):
            raise DimensionError("basis matrix must be n x n")
        ring = poly_ring(self.q)
        d = matrices.det_field(rows, ring.field_zero(), ring.field_one())
        if d.is_zero():
            raise SingularityError("lattice basis is singular")
        object.__setattr__(self, "basis", rows)

    @staticmethod
    def standard(q, n):
        one = poly_one(q)
        zero = poly(q, [])
        rows = [[FqRationalFunction.of(one if i == j else zero) for j in range(n)]
                for i in range(n)]
        return VolumeSpace(q, n, rows)

    @staticmethod
    def from_columns(q, cols):
        n = len(cols)
        rows = [[FqRationalFunction.of(cols[j][i]) for j in range(n)] for i in range(n)]
        return VolumeSpace(q, n, rows)

    def column(self, j):
        return tuple(self.basis[i][j] for i in range(self.n))

    def det(self):
        ring = poly_ring(self.q)
        return matrices.det_field(self.basis, ring.field_zero(), ring.field_one())

    def scaled(self, lam):
        """The lattice lam * S for a nonzero scalar lam in F_q(t)."""
        lam = FqRationalFunction.of(lam)
        if lam.is_zero():
            raise SingularityError("scaling by zero")
        return VolumeSpace(self.q, self.n,
                           [[lam * x for x in row] for row in self.basis])

    def transformed(self, g_rows):
        """The lattice g(S) for g acting on V by the matrix with the given rows."""
        G = _as_ratfunc_rows(self.q, g_rows)
        ring = poly_ring(self.q)
        new = matrices.matmul(G, self.basis, ring.field_zero())
        return VolumeSpace(self.q, self.n, new)

    def inverse_basis(self):
        cached = getattr(self, "_inv_cache", None)
        if cached is None:
            ring = poly_ring(self.q)
            cached = matrices.inverse_field(self.basis, ring.field_zero(),
                                            ring.field_one())
            object.__setattr__(self, "_inv_cache", cached)
        return cached

    def contains_lattice(self, other):
        """Whether other's lattice is contained in this one (S' subset S)."""
        ring = poly_ring(self.q)
        coeffs = matrices.matmul(self.inverse_basis(), other.basis, ring.field_zero())
        return all(x.nu() >= 0 for row in coeffs for x in row)


@dataclass(frozen=True)
class FFSummand:
    """Saturated F_q[t]-submodule of F_q[t]^n in canonical HNF basis form."""

    q: int
    n: int
    basis: tuple

    def __post_init__(self):
        rows = matrices.freeze(self.basis)
        if any(len(r) != self.n for r in rows):
            raise DimensionError("basis row length != ambient rank")
        object.__setattr__(self, "basis", rows)

    @staticmethod
    def from_rows(q, n, rows):
        ring = poly_ring(q)
        rows = [r for r in rows if any(not ring.is_zero(x) for x in r)]
        if not rows:
            return FFSummand(q, n, ())
        return FFSummand(q, n, matrices.saturate(ring, rows, n))

    @staticmethod
    def zero(q, n):
        return FFSummand(q, n, ())

    @staticmethod
    def full(q, n):
        ring = poly_ring(q)
        return FFSummand(q, n, matrices.identity_rows(n, ring.one(), ring.zero()))

    @property
    def rank(self):
        return len(self.basis)

    def is_zero(self):
        return not self.basis

    def is_full(self):
        return self.rank == self.n

    def _ring(self):
        return poly_ring(self.q)

    def contains(self, other):
        if other.rank > self.rank:
            return False
        if not other.basis:
            return True
        ring = self._ring()
        stacked = matrices.stack(self.basis, other.basis)
        return matrices.rank_over_field(ring, stacked) == self.rank

    def meet(self, other):
        ring = self._ring()
        rows = matrices.lattice_intersect(ring, self.basis, other.basis)
        return FFSummand(self.q, self.n, rows)

    def join(self, other):
        ring = self._ring()
        rows = [r for r in self.basis + other.basis]
        if not rows:
            return FFSummand.zero(self.q, self.n)
        hull = matrices.hnf(ring, rows)
        return FFSummand(self.q, self.n, matrices.saturate(ring, hull, self.n))

    def apply(self, g_rows):
        if self.is_zero():
            return self
        ring = self._ring()
        img = matrices.matmul(self.basis, matrices.freeze(g_rows), ring.zero())
        return FFSummand.from_rows(self.q, self.n, img)

    def is_saturated_form(self):
        if self.is_zero():
            return True
        ring = self._ring()
        return matrices.saturate(ring, self.basis, self.n) == self.basis


# ---------------------------------------------------------------------------
# log-volume by the minor formula
# ---------------------------------------------------------------------------

def ff_logvol(vs, submodule):
    """Integer log-volume of a submodule (any independent basis rows).

    Expresses the rows in the lattice basis and maximizes -nu over the
    maximal minors of the coefficient matrix.
    """
    if isinstance(submodule, FFSummand):
        rows = submodule.basis
    else:
        rows = matrices.freeze(submodule)
    if not rows:
        return 0
    ring = poly_ring(vs.q)
    rows = _as_ratfunc_rows(vs.q, rows)
    m = len(rows)
    Hinv = vs.inverse_basis()
    lam = matrices.matmul(rows, matrices.transpose(Hinv), ring.field_zero())
    best = None
    for mn in matrices.minors(lam, m, lambda S: matrices.det_field(
            S, ring.field_zero(), ring.field_one())).values():
        if not mn.is_zero():
            val = -mn.nu()
            if best is None or val > best:
                best = val
    if best is None:
        raise RankDeficiencyError("submodule basis rows are dependent")
    return best


# ---------------------------------------------------------------------------
# restriction / quotient volume spaces
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SubQuotient:
    """Restriction to a saturated summand and the induced quotient space.

    `full_rows` is unimodular over F_q[t] with the summand's basis as its
    first rows; `res`/`quot` are volume spaces in those coordinates, and
    `quot_lift_cols` are ambient preimages in S of the quotient basis.
    """

    res: VolumeSpace
    quot: VolumeSpace
    full_rows: tuple
    quot_lift_cols: tuple


def sub_quotient(vs, w):
    """Split (V, S) along a saturated summand W into restriction and quotient.

    Log-volumes satisfy logvol(V) = logvol(res) + logvol(quot).
    """
    if not isinstance(w, FFSummand):
        w = FFSummand.from_rows(vs.q, vs.n, w)
    if not w.is_saturated_form():
        raise ProjectivityError("quotient by a non-saturated submodule")
    ring = poly_ring(vs.q)
    n, m = vs.n, w.rank
    if m == 0 or m == n:
        raise DimensionError("restriction needs a proper nonzero summand")
    full = matrices.completion_rows(ring, w.basis)
    full_rat = _as_ratfunc_rows(vs.q, full)
    Minv = matrices.inverse_field(matrices.transpose(full_rat),
                                  ring.field_zero(), ring.field_one())
    coords = matrices.matmul(Minv, vs.basis, ring.field_zero())
    cols = [list(col) for col in matrices.transpose(coords)]
    # valuation-ring column reduction: clear the bottom (n-m) rows
    available = list(range(n))
    pivots = []
    for i in range(n - 1, m - 1, -1):
        piv = None
        piv_nu = None
        for j in available:
            x = cols[j][i]
            if not x.is_zero():
                nv = x.nu()
                if piv is None or nv < piv_nu or (nv == piv_nu and j < piv):
                    piv, piv_nu = j, nv
        if piv is None:
            raise SingularityError("degenerate lattice basis")  # pragma: no cover
        for j in available:
            if j != piv and not cols[j][i].is_zero():
                f = cols[j][i] / cols[piv][i]
                cols[j] = [a - f * b for a, b in zip(cols[j], cols[piv])]
        available.remove(piv)
        pivots.append(piv)
    pivots.reverse()
    res_cols = [cols[j] for j in available]
    res_rows = [[res_cols[j][i] for j in range(m)] for i in range(m)]
    quot_rows = [[cols[pivots[j]][m + i] for j in range(n - m)] for i in range(n - m)]
    res = VolumeSpace(vs.q, m, res_rows)
    quot = VolumeSpace(vs.q, n - m, quot_rows)
    # ambient preimages of the quotient basis columns: Mfull^T . column
    fullT = matrices.transpose(full_rat)
    lifts = []
    for j in pivots:
        col = cols[j]
        amb = [sum((fullT[i][k] * col[k] for k in range(n)), ring.field_zero())
               for i in range(n)]
        lifts.append(tuple(amb))
    return SubQuotient(res=res, quot=quot, full_rows=full,
                       quot_lift_cols=tuple(lifts))


# ---------------------------------------------------------------------------
# short vectors as an F_q-vector space
# ---------------------------------------------------------------------------

def _logvol_solution_space(vs, D, gens=None):
    """Echelonized F_q-basis of {v : logvol<v> <= D}, v in the span of gens.

    gens defaults to the standard basis of V; rows are polynomial vectors.
    Returns a list of polynomial coordinate vectors (ambient coordinates).
    """
    ring = poly_ring(vs.q)
    F = gf(vs.q)
    n = vs.n
    if gens is None:
        gens = matrices.identity_rows(n, ring.one(), ring.zero())
        deg_slack = 0
    else:
        gens = matrices.freeze(gens)
        full = matrices.completion_rows(ring, gens)
        inv = matrices.inverse_unimodular(ring, full)
        deg_slack = max(max((x.degree for x in row), default=0) for row in inv)
        deg_slack = max(deg_slack, 0)
    k = len(gens)
    Hinv = vs.inverse_basis()
    d_prime = max(max((-x.nu() if not x.is_zero() else -10 ** 9) for x in row)
                  for row in vs.basis)
    dmax = D + max(d_prime, 0) + deg_slack
    if dmax < 0:
        return []
    ring_zero = ring.field_zero()
    # images of the generators under S^{-1}
    HG = []
    for g_row in gens:
        gcol = [FqRationalFunction.of(x) for x in g_row]
        img = [sum((Hinv[i][j] * gcol[j] for j in range(n)), ring_zero)
               for i in range(n)]
        HG.append(img)
    unknowns = [(j, d) for j in range(k) for d in range(dmax + 1)]
    rows = []
    for i in range(n):
        hi = max((-HG[j][i].nu() for j in range(k) if not HG[j][i].is_zero()),
                 default=None)
        if hi is None:
            continue
        kmax = hi + dmax
        if kmax <= D:
            continue
        coeff_cache = {}
        for j in range(k):
            if HG[j][i].is_zero():
                coeff_cache[j] = None
            else:
                coeff_cache[j] = HG[j][i].laurent_coefficients(D + 1 - dmax, kmax)
        base = D + 1 - dmax
        for kk in range(D + 1, kmax + 1):
            row = []
            for (j, d) in unknowns:
                cc = coeff_cache[j]
                if cc is None:
                    row.append(0)
                else:
                    idx = kk - d - base
                    row.append(cc[idx] if 0 <= idx < len(cc) else 0)
            if any(row):
                rows.append(row)
    null = gflinalg.nullspace(F, rows, ncols=len(unknowns))
    vectors = []
    for sol in null:
        pcoeffs = [[0] * (dmax + 1) for _ in range(k)]
        for (j, d), c in zip(unknowns, sol):
            pcoeffs[j][d] = c
        ps = [poly(F, cs) for cs in pcoeffs]
        vec = [ring.zero()] * n
        for j in range(k):
            if not ring.is_zero(ps[j]):
                for col in range(n):
                    g_entry = gens[j][col]
                    vec[col] = ring.add(vec[col], ring.mul(ps[j], g_entry))
        vectors.append(tuple(vec))
    return vectors


def short_vector_space_dim(vs, D, gens=None):
    """dim_Fq of {v : logvol<v> <= D, v in the span of gens} (default: all of V).

    A volume probe independent of the diagonal-basis induction: the dimension
    jumps read off the multiset of diagonal exponents.
    """
    return len(_logvol_solution_space(vs, D, gens=gens))


def shortest_vector(vs):
    """A primitive vector of minimal log-volume, with that minimum.

    Deterministic: the first vector of the echelonized solution space at the
    minimal feasible bound.
    """
    ring = poly_ring(vs.q)
    lv_total = ff_logvol(vs, matrices.identity_rows(vs.n, ring.one(), ring.zero()))
    d = lv_total // vs.n  # the minimum is at most the average slope
    basis = _logvol_solution_space(vs, d)
    if not basis:  # pragma: no cover - the average bound is always feasible
        raise DomainError("no vector at the average-slope bound")
    while True:
        lower = _logvol_solution_space(vs, d - 1)
        if not lower:
            break
        basis = lower
        d -= 1
    v = basis[0]
    content = ring.zero()
    for x in v:
        content = ring.gcd(content, x)
    if not ring.is_unit(content):  # pragma: no cover - minimality forces primitivity
        raise DomainError("shortest vector is imprimitive")
    return v, d


# ---------------------------------------------------------------------------
# diagonal bases
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DiagonalBasisResult:
    """Bases w (of V) and b (of S) with w_i = t^{r_i} b_i, r ascending."""

    space: VolumeSpace
    w: tuple  # rows over F_q[t]
    b: tuple  # rows over F_q(t)
    r: tuple  # ascending integers

    def chain_summand(self, m):
        """The canonical summand spanned by the m shortest diagonal vectors."""
        return FFSummand.from_rows(self.space.q, self.space.n, self.w[:m])

    def validate(self):
        vs = self.space
        ring = poly_ring(vs.q)
        n = vs.n
        t = poly_t(vs.q)
        if tuple(sorted(self.r)) != self.r:
            raise DomainError("r-vector is not ascending")
        for i in range(n):
            ri = self.r[i]
            scale = FqRationalFunction.of(t ** ri) if ri >= 0 \
                else FqRationalFunction(poly_one(vs.q), t ** (-ri))
            for a, bb in zip(self.w[i], self.b[i]):
                if FqRationalFunction.of(a) != scale * bb:
                    raise DomainError("w_i != t^{r_i} b_i")
        dw = matrices.det_ring(ring, self.w)
        if dw.is_zero() or dw.degree != 0:
            raise DomainError("w is not unimodular over F_q[t]")
        coeff = matrices.matmul(vs.inverse_basis(),
                                matrices.transpose(_as_ratfunc_rows(vs.q, self.b)),
                                ring.field_zero())
        if any(x.nu() < 0 for row in coeff for x in row):
            raise DomainError("b is not contained in the lattice")
        dk = matrices.det_field(coeff, ring.field_zero(), ring.field_one())
        if dk.nu() != 0:
            raise DomainError("b does not span the lattice over R")
        if sum(self.r) != ff_logvol(vs, matrices.identity_rows(
                n, ring.one(), ring.zero())):
            raise DomainError("sum of r-values != total log-volume")


def diagonal_basis(vs):
    """Diagonal shape of a volume space, by shortest-vector splitting.

    Finds a shortest primitive vector, splits off the saturated line it
    spans, recurses on the quotient, lifts, and clears the off-diagonal
    coefficients by Laurent-tail reduction.
    """
    ring = poly_ring(vs.q)
    n = vs.n
    t = poly_t(vs.q)
    if n == 1:
        lv = ff_logvol(vs, ((ring.one(),),))
        r1 = lv
        w = ((ring.one(),),)
        b = ((_t_power(vs.q, -r1),),)
        return DiagonalBasisResult(vs, w, b, (r1,))
    v, r1 = shortest_vector(vs)
    b1 = tuple(_t_power(vs.q, -r1) * FqRationalFunction.of(x) for x in v)
    line = FFSummand.from_rows(vs.q, n, [v])
    sq = sub_quotient(vs, line)
    inner = diagonal_basis(sq.quot)
    comp_rows = sq.full_rows[1:]
    quot_basis = sq.quot.basis
    quot_inv = sq.quot.inverse_basis()
    w_rows = [tuple(v)]
    b_rows = [b1]
    r_list = [r1]
    for i in range(n - 1):
        # lift the quotient diagonal vectors through the chosen splitting
        wbar = inner.w[i]
        w_i = [ring.zero()] * n
        for kidx in range(n - 1):
            if not ring.is_zero(wbar[kidx]):
                for col in range(n):
                    w_i[col] = ring.add(w_i[col],
                                        ring.mul(wbar[kidx], comp_rows[kidx][col]))
        bbar = inner.b[i]
        kappa = [sum((quot_inv[a][c] * bbar[c] for c in range(n - 1)),
                     ring.field_zero()) for a in range(n - 1)]
        if any(x.nu() < 0 for x in kappa):  # pragma: no cover
            raise DomainError("quotient basis coefficients not integral")
        b_i = [ring.field_zero()] * n
        for kidx in range(n - 1):
            if not kappa[kidx].is_zero():
                for col in range(n):
                    b_i[col] = b_i[col] + kappa[kidx] * sq.quot_lift_cols[kidx][col]
        r_i = inner.r[i]
        # w_i - t^{r_i} b_i lies on the split-off line; clear its coefficient
        scale = _t_power(vs.q, r_i)
        delta = [FqRationalFunction.of(a) - scale * bb for a, bb in zip(w_i, b_i)]
        s_i = _proportionality(delta, b1, ring)
        if not s_i.is_zero() and -s_i.nu() >= r1:
            head = s_i.truncate_at_infinity(r1)
            # subtract the integral multiple (head / t^{r1}) * w_1
            mult = (head / _t_power(vs.q, r1)).as_polynomial()
            for col in range(n):
                w_i[col] = ring.sub(w_i[col], ring.mul(mult, v[col]))
            s_i = s_i - head
        if r_i < r1:  # pragma: no cover - contradicts shortest choice
            raise DomainError("quotient produced a shorter vector")
        if not s_i.is_zero():
            if -s_i.nu() >= r1:  # pragma: no cover
                raise DomainError("tail reduction failed")
            shift = s_i / _t_power(vs.q, r_i)
            b_i = [bb + shift * b1c for bb, b1c in zip(b_i, b1)]
        w_rows.append(tuple(w_i))
        b_rows.append(tuple(b_i))
        r_list.append(r_i)
    order = sorted(range(n), key=lambda i: r_list[i])
    result = DiagonalBasisResult(
        vs,
        tuple(w_rows[i] for i in order),
        tuple(b_rows[i] for i in order),
        tuple(r_list[i] for i in order),
    )
    return result


def _t_power(q, k):
    t = poly_t(q)
    if k >= 0:
        return FqRationalFunction.of(t ** k)
    return FqRationalFunction(poly_one(q), t ** (-k))


def _proportionality(delta, b1, ring):
    """The scalar s with delta = s * b1 (delta known to lie on the line)."""
    s = None
    for d, c in zip(delta, b1):
        if not c.is_zero():
            cand = d / c
            if s is None:
                s = cand
            elif cand != s:  # pragma: no cover
                raise DomainError("vector not proportional to the line")
        elif not d.is_zero():  # pragma: no cover
            raise DomainError("vector not proportional to the line")
    if s is None:  # pragma: no cover
        raise DomainError("zero line vector")
    return s


# ---------------------------------------------------------------------------
# invariants, filtration and the oracle
# ---------------------------------------------------------------------------

def ff_invariants_and_filtration(vs):
    """The orbit r-vector and the canonical filtration report."""
    diag = diagonal_basis(vs)
    r = diag.r
    n = vs.n
    partial = [0]
    for x in r:
        partial.append(partial[-1] + x)
    minima = [filtration.GradedPoint(diag.chain_summand(m), m, Fraction(partial[m]))
              for m in range(n + 1)]
    report = filtration.canonical_plot(minima, n)
    chain = []
    c_values = {}
    for idx, pt in enumerate(report.path):
        chain.append(pt.id)
        m = pt.rank
        if 0 < m < n:
            c_values[pt.id] = Fraction(r[m] - r[m - 1])
    return r, filtration.FiltrationReport(minima=report.minima, path=report.path,
                                          chain=tuple(chain), c_values=c_values)


class FFOracle:
    """Lattice oracle for (summands of F_q[t]^n, rank, logvol(S))."""

    def __init__(self, vs):
        self.vs = vs
        self.top_rank = vs.n
        self._r1 = None
        self._rho_cache = {}

    def zero(self):
        return FFSummand.zero(self.vs.q, self.vs.n)

    def one(self):
        return FFSummand.full(self.vs.q, self.vs.n)

    def rank(self, w):
        return w.rank

    def logvol(self, w):
        return Fraction(ff_logvol(self.vs, w))

    def leq(self, a, b):
        return b.contains(a)

    def meet(self, a, b):
        return a.meet(b)

    def join(self, a, b):
        return a.join(b)

    def min_logvol_below(self, w, m):
        if m == 0:
            return Fraction(0)
        key = ("rho", w.basis)
        if key not in self._rho_cache:
            self._rho_cache[key] = restricted_r_vector(self.vs, w)
        return Fraction(sum(self._rho_cache[key][:m]))

    def min_logvol_above(self, w, m):
        if m == self.top_rank:
            return self.logvol(self.one())
        key = ("sigma", w.basis)
        if key not in self._rho_cache:
            self._rho_cache[key] = quotient_r_vector(self.vs, w)
        return self.logvol(w) + Fraction(sum(self._rho_cache[key][:m - w.rank]))

    def summands_of_rank_below(self, m, bound):
        if self._r1 is None:
            self._r1 = shortest_vector(self.vs)[1]
        return enumerate_ff_summands(self.vs, m, bound, r1=self._r1)


def restricted_r_vector(vs, w):
    """r-vector of the restriction of the lattice to a summand."""
    if w.rank == 0:
        return ()
    if w.is_full():
        return diagonal_basis(vs).r
    return diagonal_basis(sub_quotient(vs, w).res).r


def quotient_r_vector(vs, w):
    """r-vector of the quotient volume space along a summand."""
    if w.rank == 0:
        return diagonal_basis(vs).r
    if w.is_full():
        return ()
    return diagonal_basis(sub_quotient(vs, w).quot).r


def instability_ff(vs, w):
    """Exact instability number of a proper nonzero summand.

    Equals (first quotient r-value) - (last restricted r-value); both sides
    come from constrained per-rank minima.
    """
    return filtration.c_value(FFOracle(vs), w)


def enumerate_ff_summands(vs, m, bound, r1=None):
    """All rank-m summands with logvol <= bound (complete, test scale).

    Every low-volume summand is spanned by its own diagonal vectors, whose
    log-volumes are at least the global minimum r_1; so a pool of vectors
    below `bound - (m-1) * min(r_1, ...)` generates all candidates.
    """
    n = vs.n
    bound = math.floor(bound)
    if m == 0:
        return [FFSummand.zero(vs.q, n)]
    ring = poly_ring(vs.q)
    if m == n:
        full = FFSummand.full(vs.q, n)
        lv = ff_logvol(vs, full)
        return [full] if lv <= bound else []
    if r1 is None:
        r1 = shortest_vector(vs)[1]
    if m * r1 > bound:  # every rank-m volume is at least m * r1
        return []
    pool_bound = bound - (m - 1) * min(r1, 0) if m > 1 else bound
    space = _logvol_solution_space(vs, pool_bound)
    vectors = _projective_points(vs.q, space, ring)
    if len(vectors) > 700:
        raise ScaleError(f"{len(vectors)} candidate lines exceed brute desk scale")
    level = {}
    for v in vectors:  # rank 1: one saturated line per primitive direction
        content = ring.zero()
        for x in v:
            content = ring.gcd(content, x)
        prim = tuple(ring.exact_div(x, content) for x in v)
        sat = matrices.hnf(ring, (prim,))
        level[sat] = sat
    for _ in range(m - 1):
        nxt = {}
        for rows in level.values():
            for v in vectors:
                cand = list(rows) + [v]
                if matrices.rank_over_field(ring, matrices.freeze(cand)) != len(cand):
                    continue
                sat = matrices.saturate(ring, cand, n)
                nxt[sat] = sat
        level = nxt
    out = []
    for sat in level.values():
        if ff_logvol(vs, sat) <= bound:
            out.append(FFSummand(vs.q, n, sat))
    out.sort(key=lambda w: tuple(tuple(str(x) for x in row) for row in w.basis))
    return out


def _projective_points(q, basis, ring):
    """Nonzero F_q-combinations of the basis, one per scalar class."""
    if not basis:
        return []
    F = gf(q)
    k = len(basis)
    if q ** k > ENUM_SPACE_LIMIT:
        raise ScaleError("short-vector space too large to enumerate")
    n = len(basis[0])
    seen = []
    for coeffs in itertools.product(range(q), repeat=k):
        first = next((c for c in coeffs if c), None)
        if first != 1:  # one representative per projective class
            continue
        vec = [ring.zero()] * n
        for c, row in zip(coeffs, basis):
            if c:
                for j in range(n):
                    vec[j] = ring.add(vec[j], ring.mul(row[j], poly(F, [c])))
        seen.append(tuple(vec))
    return seen
