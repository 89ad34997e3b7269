"""S-arithmetic localizations: Z[T^-1]-modules, integral structures, volumes.

For a finite set T of normalized primes of Z (Z = the integers or F_q[t]),
two localizations appear:

    Z[T^-1]  - T inverted; the base ring of the localized modules,
    Z_T      - everything except T inverted; integral structures are rank-n
               Z_T-submodules B of Q^n.

Z[T^-1] is Euclidean (norm = the T-free part of an element), so the generic
normal-form machinery applies verbatim; localized summands carry canonical
Hermite bases over Z[T^-1].  Intersecting with an integral structure B is a
rank-preserving lattice isomorphism onto the summands of the plain Z-module
V cap B, which transports volumes and instability numbers to the localized
setting, and every invertible matrix over Q splits into a GL_n(Z[T^-1])
factor times a GL_n(Z_T) factor through the Smith form.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import latff, latz, matrices
from .errors import (BoundaryModuleError, DeterminantError, DimensionError,
                     DomainError, InvalidPlaceError, SingularityError)
from .fq import FqRationalFunction, poly_one
from .rings import ZZ, IntegerRing, fraction_prime_part, poly_ring, valuation


@dataclass(frozen=True)
class LocalizedContext:
    """Ground ring Z together with the finite normalized prime set T."""

    kind: str  # "Z" | "FF"
    T: tuple
    q: int | None = None

    def __post_init__(self):
        if self.kind not in ("Z", "FF"):
            raise DomainError(f"unknown localization kind {self.kind!r}")
        ring = self.base_ring()
        norm = []
        for p in self.T:
            _, pn = ring.unit_normalize(p)
            if not ring.is_prime(pn):
                raise InvalidPlaceError(f"{p} is not a prime of {ring.name}")
            norm.append(pn)
        if len(set(map(self._key, norm))) != len(norm):
            raise InvalidPlaceError("repeated primes in T")
        object.__setattr__(self, "T", tuple(sorted(norm, key=self._key)))

    @staticmethod
    def _key(p):
        if isinstance(p, int):
            return (0, p)
        return (p.degree, tuple(p.coeffs))

    @staticmethod
    def integers(T):
        return LocalizedContext("Z", tuple(T))

    @staticmethod
    def function_field(q, T):
        return LocalizedContext("FF", tuple(T), q=q)

    def base_ring(self):
        return ZZ if self.kind == "Z" else poly_ring(self.q)

    def field_zero(self):
        return self.base_ring().field_zero()

    def field_one(self):
        return self.base_ring().field_one()

    def t_part(self, x):
        """prod_{p in T} p^{nu_p(x)} of a nonzero field element."""
        return fraction_prime_part(x, self.T, ring=self.base_ring())

    def in_t_inverted(self, x):
        """Membership in Z[T^-1] (denominator supported in T)."""
        ring = self.base_ring()
        if ring.field_is_zero(x):
            return True
        den = x.denominator if isinstance(x, (int, Fraction)) else x.den
        if isinstance(x, int):
            return True
        reduced = den
        for p in self.T:
            v = ring.element_valuation(reduced, p)
            for _ in range(v):
                reduced = ring.exact_div(reduced, p)
        return ring.is_unit(reduced)

    def in_t_integral(self, x):
        """Membership in Z_T = Z[(P \\ T)^-1] (no T-primes downstairs)."""
        ring = self.base_ring()
        if ring.field_is_zero(x):
            return True
        return all(valuation(_lift(ring, x), p) >= 0 for p in self.T)

    def localized_ring(self):
        return LocalizedRing(self)


def _lift(ring, x):
    if isinstance(ring, IntegerRing):
        return Fraction(x)
    return FqRationalFunction.of(x)


class LocalizedRing:
    """Z[T^-1] as a Euclidean ring on fraction-field elements.

    The Euclidean norm of x is its T-free part; division produces canonical
    remainders (a T-free residue in the canonical system mod the divisor's
    T-free part), which makes Hermite forms over Z[T^-1] canonical.
    """

    def __init__(self, ctx):
        self.ctx = ctx
        self.base = ctx.base_ring()
        self.name = f"{self.base.name}[T^-1]"

    def zero(self):
        return self.base.field_zero()

    def one(self):
        return self.base.field_one()

    def is_zero(self, x):
        return self.base.field_is_zero(x)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def _split(self, x):
        """x = unit * m with m the normalized T-free part (a base-ring element)."""
        if self.is_zero(x):
            return self.one(), self.base.zero()
        tp = self.ctx.t_part(x)
        m_field = x / tp
        m = self.base.from_field(m_field)  # T-free by construction
        unit, m = self.base.unit_normalize(m)
        u = tp * self.base.to_field(unit)
        return u, m

    def unit_normalize(self, x):
        u, m = self._split(x)
        return u, self.base.to_field(m)

    def is_unit(self, x):
        if self.is_zero(x):
            return False
        _, m = self._split(x)
        return self.base.is_unit(m)

    def unit_inverse(self, u):
        return self.one() / u

    def norm_key(self, x):
        _, m = self._split(x)
        return self.base.norm_key(m)

    def divmod(self, a, b):
        if self.is_zero(b):
            raise ZeroDivisionError("division by zero in Z[T^-1]")
        _, d = self._split(b)
        if self.base.is_unit(d):
            return a / b, self.zero()
        r = self._canonical_residue(a, d)
        q = (a - r) / b
        return q, r

    def _canonical_residue(self, a, d):
        """Canonical representative of a mod d*Z[T^-1], d a T-free base element."""
        base = self.base
        if self.is_zero(a):
            return self.zero()
        if isinstance(base, IntegerRing):
            a = Fraction(a)
            tau = a.denominator  # supported in T by the ring invariant
            num = a.numerator
            r = (num * pow(tau, -1, d)) % d
            return Fraction(r)
        a = FqRationalFunction.of(a)
        tau = a.den
        inv = _poly_modinv(tau, d)
        r = (a.num * inv) % d
        return FqRationalFunction.of(r)

    def exact_div(self, a, b):
        q = a / b
        if not self.ctx.in_t_inverted(q):
            raise DomainError("inexact division in Z[T^-1]")
        return q

    def gcd(self, a, b):
        _, ma = self._split(a)
        _, mb = self._split(b)
        g = self.base.gcd(ma, mb)
        return self.base.to_field(g)

    # fraction field: the elements are already field elements
    def to_field(self, x):
        return x

    def field_zero(self):
        return self.zero()

    def field_one(self):
        return self.one()

    def field_is_zero(self, x):
        return self.is_zero(x)

    def from_field(self, x):
        if not self.ctx.in_t_inverted(x):
            raise DomainError(f"{x} is not in Z[T^-1]")
        return x

    def is_integral_field_elt(self, x):
        return self.ctx.in_t_inverted(x)

    def __repr__(self):
        return self.name


def _poly_modinv(a, m):
    """Inverse of a modulo m over F_q[t] (gcd(a, m) must be a unit)."""
    F = a.field
    r0, r1 = m, a % m
    x0, x1 = _zero_poly(F), poly_one(F.q)
    while not r1.is_zero():
        qq, rr = divmod(r0, r1)
        r0, r1 = r1, rr
        x0, x1 = x1, x0 - qq * x1
    if r0.degree != 0:
        raise DomainError("element not invertible modulo m")
    inv_lc = F.inv(r0.coeffs[0])
    return (x0 * inv_lc) % m


def _zero_poly(F):
    from .fq import poly
    return poly(F, [])


# ---------------------------------------------------------------------------
# integral structures and localized summands
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class IntegralStructure:
    """Rank-n Z_T-submodule of Q^n, spanned by the columns of `basis`."""

    ctx: LocalizedContext
    n: int
    basis: tuple

    def __post_init__(self):
        ring = self.ctx.base_ring()
        rows = matrices.freeze([[_lift(ring, x) for x in row] for row in self.basis])
        if len(rows) != self.n or any(len(r) != self.n for r in rows):
            raise DimensionError("integral structure must be n x n")
        d = matrices.det_field(rows, ring.field_zero(), ring.field_one())
        if ring.field_is_zero(d):
            raise SingularityError("integral structure basis is singular")
        object.__setattr__(self, "basis", rows)

    @staticmethod
    def standard(ctx, n):
        ring = ctx.base_ring()
        one, zero = ring.field_one(), ring.field_zero()
        return IntegralStructure(ctx, n, [[one if i == j else zero for j in range(n)]
                                          for i in range(n)])

    def scaled(self, factor):
        ring = self.ctx.base_ring()
        f = _lift(ring, ring.to_field(factor) if not isinstance(factor, (Fraction, FqRationalFunction)) else factor)
        return IntegralStructure(self.ctx, self.n,
                                 [[f * x for x in row] for row in self.basis])

    def right_multiplied(self, k_rows):
        """B . K for K integral over Z_T with T-unit determinant bounds checked by caller."""
        ring = self.ctx.base_ring()
        K = matrices.freeze([[_lift(ring, x) for x in row] for row in k_rows])
        new = matrices.matmul(self.basis, K, ring.field_zero())
        return IntegralStructure(self.ctx, self.n, new)


@dataclass(frozen=True)
class LocSummand:
    """Saturated Z[T^-1]-summand of Z[T^-1]^n in canonical Hermite form."""

    ctx: LocalizedContext
    n: int
    basis: tuple

    def __post_init__(self):
        ring = self.ctx.base_ring()
        rows = matrices.freeze([[_lift(ring, x) for x in row] for row in self.basis])
        if any(len(r) != self.n for r in rows):
            raise DimensionError("basis row length != ambient rank")
        object.__setattr__(self, "basis", rows)

    @staticmethod
    def from_rows(ctx, n, rows):
        ring = ctx.base_ring()
        loc = ctx.localized_ring()
        lifted = [[_lift(ring, x) for x in row] for row in rows]
        lifted = [r for r in lifted if any(not ring.field_is_zero(x) for x in r)]
        if not lifted:
            return LocSummand(ctx, n, ())
        for row in lifted:
            for x in row:
                if not ctx.in_t_inverted(x):
                    raise DomainError(f"entry {x} is not in Z[T^-1]")
        return LocSummand(ctx, n, matrices.saturate(loc, lifted, n))

    @staticmethod
    def zero(ctx, n):
        return LocSummand(ctx, n, ())

    @staticmethod
    def full(ctx, n):
        ring = ctx.base_ring()
        one, zero = ring.field_one(), ring.field_zero()
        return LocSummand(ctx, n, matrices.identity_rows(n, one, zero))

    @property
    def rank(self):
        return len(self.basis)

    def is_zero(self):
        return not self.basis

    def is_full(self):
        return self.rank == self.n

    def contains(self, other):
        if other.rank > self.rank:
            return False
        if not other.basis:
            return True
        ring = self.ctx.base_ring()
        stacked = matrices.stack(self.basis, other.basis)
        return matrices.rank_field(stacked, ring.field_zero(), ring.field_one()) \
            == self.rank

    def meet(self, other):
        loc = self.ctx.localized_ring()
        rows = matrices.lattice_intersect(loc, self.basis, other.basis)
        return LocSummand(self.ctx, self.n, rows)

    def join(self, other):
        loc = self.ctx.localized_ring()
        rows = [r for r in self.basis + other.basis]
        if not rows:
            return LocSummand.zero(self.ctx, self.n)
        hull = matrices.hnf(loc, rows)
        return LocSummand(self.ctx, self.n, matrices.saturate(loc, hull, self.n))


# ---------------------------------------------------------------------------
# intersection with integral structures
# ---------------------------------------------------------------------------

def full_intersection(ctx, B):
    """Z-basis rows (canonical) of Z[T^-1]^n cap B."""
    ring = ctx.base_ring()
    n = B.n
    denom = ring.one()
    for row in B.basis:
        for x in row:
            d = x.denominator if isinstance(x, Fraction) else x.den
            g = ring.gcd(denom, d)
            denom = ring.exact_div(ring.mul(denom, d), g)
    zB = [[ring.from_field(ring.to_field(denom) * x) for x in row] for row in B.basis]
    U, D, _, _ = matrices.snf(ring, zB)
    denf = ring.to_field(denom)
    gs = []
    for i in range(n):
        di = D[i][i]
        if ring.is_zero(di):  # pragma: no cover - B is invertible
            raise SingularityError("integral structure degenerated")
        gs.append(ctx.t_part(ring.to_field(di) / denf))
    rows = []
    for i in range(n):
        rows.append(tuple(gs[i] * ring.to_field(U[j][i]) for j in range(n)))
    return matrices.fractional_hnf(ring, rows)


def intersect_integral(w, B):
    """Canonical Z-basis rows of W cap B for a localized summand W.

    Saturation makes W the intersection of its Q-span with Z[T^-1]^n, so
    W cap B = (Q-span of W) cap (Z[T^-1]^n cap B).
    """
    ctx = w.ctx
    ring = ctx.base_ring()
    if w.is_zero():
        return ()
    L = full_intersection(ctx, B)
    if w.is_full():
        return L
    zero, one = ring.field_zero(), ring.field_one()
    K = matrices.field_kernel(w.basis, zero, one)  # annihilator of the Q-span
    M = matrices.matmul(L, matrices.transpose(K), zero)
    denom = ring.one()
    for row in M:
        for x in row:
            d = x.denominator if isinstance(x, Fraction) else x.den
            g = ring.gcd(denom, d)
            denom = ring.exact_div(ring.mul(denom, d), g)
    denf = ring.to_field(denom)
    Mi = [[ring.from_field(denf * x) for x in row] for row in M]
    coeffs = matrices.kernel(ring, matrices.transpose(matrices.freeze(Mi)))
    rows = []
    for c in coeffs:
        v = [zero] * w.n
        for ci, Lrow in zip(c, L):
            cf = ring.to_field(ci)
            for j in range(w.n):
                v[j] = v[j] + cf * Lrow[j]
        rows.append(tuple(v))
    return matrices.fractional_hnf(ring, rows)


def span_localized(ctx, n, z_rows):
    """The localized summand spanned over Z[T^-1] by Z-side basis rows."""
    return LocSummand.from_rows(ctx, n, z_rows)


# ---------------------------------------------------------------------------
# localized volumes and instability
# ---------------------------------------------------------------------------

def loc_logvol(w, x, B):
    """Log-volume of W cap B: ExactLog on the Z side, integer on the FF side."""
    rows = intersect_integral(w, B)
    if w.ctx.kind == "Z":
        if not isinstance(x, latz.InnerProduct):
            raise DomainError("integer-side localized volume needs an InnerProduct")
        return latz.gram_logvol(x, rows)
    if not isinstance(x, latff.VolumeSpace):
        raise DomainError("function-field localized volume needs a VolumeSpace")
    return latff.ff_logvol(x, rows)


def _transport(w, x, B):
    """Move (W, x) to the plain Z-side lattice V cap B in its own coordinates."""
    ctx = w.ctx
    ring = ctx.base_ring()
    n = w.n
    L = full_intersection(ctx, B)
    zero, one = ring.field_zero(), ring.field_one()
    Linv = matrices.inverse_field(L, zero, one)
    WB = intersect_integral(w, B)
    coords = matrices.matmul(WB, Linv, zero)
    int_rows = matrices.freeze([[ring.from_field(xx) for xx in row] for row in coords])
    if ctx.kind == "Z":
        G = matrices.matmul(matrices.matmul(L, x.gram, zero), matrices.transpose(L), zero)
        s_new = latz.InnerProduct(n, G)
        w_new = latz.ZSummand(n, matrices.hnf(ZZ, int_rows))
        return s_new, w_new
    LinvT = matrices.transpose(Linv)
    s_cols = matrices.matmul(LinvT, x.basis, zero)
    vs_new = latff.VolumeSpace(ctx.q, n, s_cols)
    w_new = latff.FFSummand(ctx.q, n, matrices.hnf(ring, int_rows))
    return vs_new, w_new


def loc_c(w, x, B):
    """Instability number of a localized summand at (x, B), computed on V cap B."""
    if w.is_zero() or w.is_full():
        raise BoundaryModuleError("c is undefined for the bottom and top element")
    xs, ws = _transport(w, x, B)
    if w.ctx.kind == "Z":
        return latz.instability_z(xs, ws)
    return latff.instability_ff(xs, ws)


# ---------------------------------------------------------------------------
# matrix factorizations
# ---------------------------------------------------------------------------

def _gl_membership(ctx, rows, side):
    """side='T-inverted': GL_n(Z[T^-1]); side='T-integral': GL_n(Z_T)."""
    ring = ctx.base_ring()
    member = ctx.in_t_inverted if side == "T-inverted" else ctx.in_t_integral
    if not all(member(x) for row in rows for x in row):
        return False
    d = matrices.det_field(rows, ring.field_zero(), ring.field_one())
    if ring.field_is_zero(d):
        return False
    return member(d) and member(_field_inv(ring, d))


def _field_inv(ring, x):
    return ring.field_one() / x


def factorize(A, ctx, mode="GL"):
    """Split an invertible matrix over Q into a Z[T^-1] and a Z_T factor.

    Returns (Bm, Cm) with A = Bm * Cm, Bm in GL_n(Z[T^-1]) and Cm in
    GL_n(Z_T); in SL mode both determinants are exactly 1.  Clears
    denominators, takes the Smith form, and splits each invariant factor
    into its T-part and its T-free part.
    """
    ring = ctx.base_ring()
    A = matrices.freeze([[_lift(ring, x) for x in row] for row in A])
    n = len(A)
    zero, one = ring.field_zero(), ring.field_one()
    detA = matrices.det_field(A, zero, one)
    if ring.field_is_zero(detA):
        raise SingularityError("factorization needs an invertible matrix")
    if mode not in ("GL", "SL"):
        raise DomainError(f"unknown factorization mode {mode!r}")
    if mode == "SL" and detA != one:
        raise DeterminantError("SL-mode factorization needs determinant 1")
    denom = ring.one()
    for row in A:
        for x in row:
            d = x.denominator if isinstance(x, Fraction) else x.den
            g = ring.gcd(denom, d)
            denom = ring.exact_div(ring.mul(denom, d), g)
    denf = ring.to_field(denom)
    mA = [[ring.from_field(denf * x) for x in row] for row in A]
    U, D, V, _ = matrices.snf(ring, mA)
    Uf = [[ring.to_field(x) for x in row] for row in U]
    Vf = [[ring.to_field(x) for x in row] for row in V]
    left = [list(row) for row in Uf]
    right = [list(row) for row in Vf]
    for i in range(n):
        di = ring.to_field(D[i][i]) / denf
        u_i = ctx.t_part(di)       # unit of Z[T^-1]
        v_i = di / u_i             # unit of Z_T
        for r in range(n):
            left[r][i] = left[r][i] * u_i
        right[i] = [v_i * xx for xx in right[i]]
    Bm, Cm = matrices.freeze(left), matrices.freeze(right)
    if mode == "SL":
        dB = matrices.det_field(Bm, zero, one)
        if dB != one:
            # det(B) is a unit of both rings, i.e. a unit of Z; push it into C
            fix = _field_inv(ring, dB)
            Bm = matrices.freeze([[x * fix if j == 0 else x
                                   for j, x in enumerate(row)] for row in Bm])
            Cm = matrices.freeze([[x * dB if i == 0 else x for x in row]
                                  for i, row in enumerate(Cm)])
    if not _gl_membership(ctx, Bm, "T-inverted"):
        raise DomainError("left factor fell outside GL_n(Z[T^-1])")  # pragma: no cover
    if not _gl_membership(ctx, Cm, "T-integral"):
        raise DomainError("right factor fell outside GL_n(Z_T)")  # pragma: no cover
    return Bm, Cm


def factorize_conjugated(A, ctx, conjugator):
    """Split A in SL_n(Q) as (SL_n(Z[T^-1]) factor) * (g SL_n(Z_T) g^-1 factor)."""
    ring = ctx.base_ring()
    zero, one = ring.field_zero(), ring.field_one()
    G = matrices.freeze([[_lift(ring, x) for x in row] for row in conjugator])
    B1, _ = factorize(G, ctx, mode="GL")
    B1inv = matrices.inverse_field(B1, zero, one)
    A = matrices.freeze([[_lift(ring, x) for x in row] for row in A])
    inner = matrices.matmul(matrices.matmul(B1inv, A, zero), B1, zero)
    P, Q = factorize(inner, ctx, mode="SL")
    Pc = matrices.matmul(matrices.matmul(B1, P, zero), B1inv, zero)
    Qc = matrices.matmul(matrices.matmul(B1, Q, zero), B1inv, zero)
    return Pc, Qc
