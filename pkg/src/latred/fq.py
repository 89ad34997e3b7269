"""Finite fields F_q, polynomials over them, and rational functions F_q(t).

Field elements are integers 0..q-1.  For prime q they are residues mod p;
for prime powers q = p^e (q <= 256) an element encodes a polynomial in a
fixed generator via base-p digits, and multiplication runs through exp/log
tables built once per field.

Polynomials are stored as ascending coefficient tuples with no trailing
zeros; the zero polynomial has an empty tuple.  Rational functions are kept
reduced with a monic denominator.  The degree valuation

    nu(p/q) = deg(q) - deg(p),    nu(0) = +infinity

is the one discrete valuation of F_q(t) that does not come from a monic
irreducible polynomial; expansions "at infinity" (Laurent series in 1/t)
are provided for it.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from math import inf

from .errors import DomainError, ZeroArgumentError


def _factor_small(n):
    fs = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            fs[d] = fs.get(d, 0) + 1
            n //= d
        d += 1
    if n > 1:
        fs[n] = fs.get(n, 0) + 1
    return fs


class GF:
    """Arithmetic context for F_q, q = p^e with q <= 2^16 (e > 1 needs q <= 256)."""

    def __init__(self, q):
        fs = _factor_small(q)
        if q < 2 or len(fs) != 1:
            raise DomainError(f"{q} is not a prime power")
        (p, e), = fs.items()
        if p > 2 ** 16 or (e > 1 and q > 256):
            raise DomainError(f"field size {q} out of supported range")
        self.q = q
        self.p = p
        self.e = e
        if e > 1:
            self._build_tables()

    def _poly_mul_mod(self, a, b, modulus):
        # a, b, modulus: ascending digit lists over F_p
        p = self.p
        prod = [0] * (len(a) + len(b) - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    prod[i + j] = (prod[i + j] + ai * bj) % p
        # reduce mod the monic modulus of degree e
        e = len(modulus) - 1
        for i in range(len(prod) - 1, e - 1, -1):
            c = prod[i]
            if c:
                prod[i] = 0
                for j in range(e):
                    prod[i - e + j] = (prod[i - e + j] - c * modulus[j]) % p
        prod = prod[:e]
        prod += [0] * (e - len(prod))
        return prod

    def _find_irreducible(self):
        # monic irreducible of degree e over F_p, by exhaustive root/factor probing
        p, e = self.p, self.e
        for tail in itertools.product(range(p), repeat=e):
            mod = list(tail) + [1]
            if self._is_irreducible(mod):
                return mod
        raise DomainError("no irreducible polynomial found")  # pragma: no cover

    def _is_irreducible(self, mod):
        p, e = self.p, self.e
        if mod[0] == 0:
            return False
        # check gcd(x^(p^k) - x, mod) over all k <= e/2 via repeated powering
        x = [0, 1] + [0] * (e - 2) if e >= 2 else [1]
        xe = x[:]
        for k in range(1, e // 2 + 1):
            for _ in range(self._int_log_pow(p)):
                xe = self._poly_mul_mod_pow(xe, mod)
            diff = [(a - b) % p for a, b in zip(xe, x + [0] * (e - len(x)))]
            if self._poly_gcd_nonunit(diff, mod):
                return False
        return True

    def _int_log_pow(self, p):
        return 1  # x -> x^p applied once per k

    def _poly_mul_mod_pow(self, a, mod):
        # a -> a^p mod `mod`, by square-and-multiply on the exponent p
        result = [1] + [0] * (len(a) - 1)
        base = a[:]
        n = self.p
        while n:
            if n & 1:
                result = self._poly_mul_mod(result, base, mod)
            base = self._poly_mul_mod(base, base, mod)
            n >>= 1
        return result

    def _poly_gcd_nonunit(self, a, mod):
        # True when gcd(a, mod) has positive degree
        p = self.p

        def deg(c):
            for i in range(len(c) - 1, -1, -1):
                if c[i]:
                    return i
            return -1

        a = a[:]
        b = mod[:]
        while True:
            da, db = deg(a), deg(b)
            if da < 0:
                return db > 0
            if db < 0:
                return da > 0
            if da < db:
                a, b = b, a
                da, db = db, da
            inv = pow(b[db], -1, p)
            c = (a[da] * inv) % p
            shift = da - db
            for i in range(db + 1):
                a[i + shift] = (a[i + shift] - c * b[i]) % p

    def _build_tables(self):
        p, e, q = self.p, self.e, self.q
        modulus = self._find_irreducible()
        self._modulus = tuple(modulus)

        def to_digits(x):
            ds = []
            for _ in range(e):
                ds.append(x % p)
                x //= p
            return ds

        def from_digits(ds):
            x = 0
            for d in reversed(ds):
                x = x * p + d
            return x

        def raw_mul(x, y):
            return from_digits(self._poly_mul_mod(to_digits(x), to_digits(y), modulus))

        # find a multiplicative generator and build exp/log tables
        for g in range(2, q):
            seen = set()
            acc = 1
            for _ in range(q - 1):
                acc = raw_mul(acc, g)
                seen.add(acc)
            if len(seen) == q - 1:
                break
        else:  # pragma: no cover
            raise DomainError("no generator found")
        exp = [1] * (q - 1)
        log = [0] * q
        acc = 1
        for i in range(1, q - 1):
            acc = raw_mul(acc, g)
            exp[i] = acc
            log[acc] = i
        self._exp = exp
        self._log = log

    # -- element arithmetic ------------------------------------------------
    def add(self, a, b):
        if self.e == 1:
            return (a + b) % self.p
        p = self.p
        out = 0
        mult = 1
        for _ in range(self.e):
            out += ((a % p + b % p) % p) * mult
            a //= p
            b //= p
            mult *= p
        return out

    def neg(self, a):
        if self.e == 1:
            return (-a) % self.p
        p = self.p
        out = 0
        mult = 1
        for _ in range(self.e):
            out += ((-(a % p)) % p) * mult
            a //= p
            mult *= p
        return out

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        if a == 0 or b == 0:
            return 0
        if self.e == 1:
            return (a * b) % self.p
        n = (self._log[a] + self._log[b]) % (self.q - 1)
        return self._exp[n]

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero in finite field")
        if self.e == 1:
            return pow(a, -1, self.p)
        return self._exp[(-self._log[a]) % (self.q - 1)]

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def __eq__(self, other):
        return isinstance(other, GF) and other.q == self.q

    def __hash__(self):
        return hash(("GF", self.q))

    def __repr__(self):
        return f"GF({self.q})"


@lru_cache(maxsize=None)
def gf(q):
    """Shared field context for F_q."""
    return GF(q)


@dataclass(frozen=True)
class FqPolynomial:
    """Polynomial over F_q in the variable t, ascending coefficients."""

    field: GF
    coeffs: tuple

    def __post_init__(self):
        cs = tuple(self.coeffs)
        while cs and cs[-1] == 0:
            cs = cs[:-1]
        object.__setattr__(self, "coeffs", cs)

    # -- basics ------------------------------------------------------------
    @property
    def degree(self):
        """Degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self):
        return not self.coeffs

    def is_unit(self):
        return self.degree == 0

    def leading(self):
        if self.is_zero():
            raise ZeroArgumentError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def monic(self):
        if self.is_zero():
            return self
        lc = self.leading()
        if lc == 1:
            return self
        inv = self.field.inv(lc)
        return FqPolynomial(self.field, tuple(self.field.mul(c, inv) for c in self.coeffs))

    def __bool__(self):
        return bool(self.coeffs)

    # -- ring operations ----------------------------------------------------
    def _check(self, other):
        if not isinstance(other, FqPolynomial) or other.field != self.field:
            raise TypeError("mixed polynomial fields")
        return other

    def __add__(self, other):
        other = self._check(other)
        F = self.field
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = F.add(out[i], c)
        return FqPolynomial(F, tuple(out))

    def __neg__(self):
        F = self.field
        return FqPolynomial(F, tuple(F.neg(c) for c in self.coeffs))

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):  # scalar from F_q
            F = self.field
            return FqPolynomial(F, tuple(F.mul(c, other % F.q) for c in self.coeffs))
        other = self._check(other)
        F = self.field
        if self.is_zero() or other.is_zero():
            return FqPolynomial(F, ())
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] = F.add(out[i + j], F.mul(a, b))
        return FqPolynomial(F, tuple(out))

    __rmul__ = __mul__

    def __divmod__(self, other):
        other = self._check(other)
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        F = self.field
        rem = list(self.coeffs)
        db = other.degree
        inv_lead = F.inv(other.leading())
        quot = [0] * max(len(rem) - db, 0)
        for i in range(len(rem) - 1, db - 1, -1):
            c = rem[i]
            if c:
                factor = F.mul(c, inv_lead)
                quot[i - db] = factor
                for j, bcoef in enumerate(other.coeffs):
                    rem[i - db + j] = F.sub(rem[i - db + j], F.mul(factor, bcoef))
        return FqPolynomial(F, tuple(quot)), FqPolynomial(F, tuple(rem))

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __truediv__(self, other):
        if isinstance(other, FqRationalFunction):
            return FqRationalFunction.of(self) / other
        return FqRationalFunction(self, self._check(other))

    def gcd(self, other):
        a, b = self, self._check(other)
        while not b.is_zero():
            a, b = b, a % b
        return a.monic() if not a.is_zero() else a

    def shift(self, k):
        """Multiply by t^k (k >= 0)."""
        if self.is_zero():
            return self
        return FqPolynomial(self.field, (0,) * k + self.coeffs)

    def __pow__(self, n):
        out = FqPolynomial(self.field, (1,))
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __str__(self):
        if self.is_zero():
            return "0"
        terms = []
        for i in range(self.degree, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            if i == 0:
                terms.append(str(c))
            elif i == 1:
                terms.append("t" if c == 1 else f"{c}*t")
            else:
                terms.append(f"t^{i}" if c == 1 else f"{c}*t^{i}")
        return "+".join(terms)

    __repr__ = __str__


def poly(field_or_q, coeffs):
    """Build a polynomial from an ascending list of F_q elements."""
    F = field_or_q if isinstance(field_or_q, GF) else gf(field_or_q)
    return FqPolynomial(F, tuple(c % F.q for c in coeffs))


def poly_t(field_or_q):
    return poly(field_or_q, [0, 1])


def poly_one(field_or_q):
    return poly(field_or_q, [1])


def monic_irreducibles(field_or_q, max_degree):
    """All monic irreducible polynomials of degree 1..max_degree, by trial division."""
    F = field_or_q if isinstance(field_or_q, GF) else gf(field_or_q)
    found = []
    for d in range(1, max_degree + 1):
        for tail in itertools.product(range(F.q), repeat=d):
            cand = poly(F, list(tail) + [1])
            if all(not (cand % p).is_zero() for p in found if 2 * p.degree <= d):
                found.append(cand)
    return found


def is_irreducible_poly(f):
    """Irreducibility by trial division (desk scale)."""
    if f.is_zero() or f.degree < 1:
        return False
    for p in monic_irreducibles(f.field, f.degree // 2):
        if (f % p).is_zero():
            return False
    return True


@dataclass(frozen=True)
class FqRationalFunction:
    """Reduced fraction of polynomials over F_q with a monic denominator."""

    num: FqPolynomial
    den: FqPolynomial

    def __post_init__(self):
        num, den = self.num, self.den
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        if num.field != den.field:
            raise TypeError("mixed fields in rational function")
        if num.is_zero():
            num, den = num, poly_one(num.field)
        else:
            g = num.gcd(den)
            if g.degree > 0:
                num, den = num // g, den // g
            lc = den.leading()
            if lc != 1:
                inv = den.field.inv(lc)
                num = num * inv
                den = den * inv
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    @staticmethod
    def of(x):
        if isinstance(x, FqRationalFunction):
            return x
        if isinstance(x, FqPolynomial):
            return FqRationalFunction(x, poly_one(x.field))
        raise TypeError(f"cannot coerce {x!r} into F_q(t)")

    @property
    def field(self):
        return self.num.field

    def is_zero(self):
        return self.num.is_zero()

    def __bool__(self):
        return not self.is_zero()

    def nu(self):
        """Degree valuation deg(den) - deg(num); +infinity at zero."""
        if self.is_zero():
            return inf
        return self.den.degree - self.num.degree

    def is_integral(self):
        """Whether the value lies in F_q[t] (denominator is 1)."""
        return self.den.degree == 0

    def as_polynomial(self):
        if not self.is_integral():
            raise DomainError(f"{self} is not a polynomial")
        return self.num

    def _coerce(self, other):
        if isinstance(other, FqRationalFunction):
            return other
        if isinstance(other, FqPolynomial):
            return FqRationalFunction.of(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return FqRationalFunction(self.num * other.den + other.num * self.den,
                                  self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return FqRationalFunction(-self.num, self.den)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            return FqRationalFunction(self.num * other, self.den)
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return FqRationalFunction(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if other.is_zero():
            raise ZeroDivisionError("division by zero rational function")
        return FqRationalFunction(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        return FqRationalFunction.of(other) / self

    def laurent_coefficient(self, k):
        """Coefficient of t^k in the Laurent expansion at infinity (in 1/t)."""
        if self.is_zero():
            return 0
        top = -self.nu()  # largest exponent with a (possibly) nonzero coefficient
        if k > top:
            return 0
        return self.laurent_coefficients(k, top)[0]

    def laurent_coefficients(self, lo, hi):
        """Coefficients of t^lo .. t^hi of the expansion at infinity, ascending."""
        F = self.field
        if self.is_zero() or hi < lo:
            return [0] * max(hi - lo + 1, 0)
        num, den = self.num, self.den
        dd = den.degree
        top = num.degree - dd
        out = {}
        # long division in descending powers of t; exponents may go negative
        rem = {i: c for i, c in enumerate(num.coeffs) if c}
        lead_inv = F.inv(den.leading())
        for k in range(top, lo - 1, -1):
            coef = F.mul(rem.get(k + dd, 0), lead_inv)
            out[k] = coef
            if coef:
                for j, dj in enumerate(den.coeffs):
                    if dj:
                        idx = k + j
                        rem[idx] = F.sub(rem.get(idx, 0), F.mul(coef, dj))
        return [out.get(k, 0) for k in range(lo, hi + 1)]

    def truncate_at_infinity(self, lo):
        """The part of the expansion with exponents >= lo, as a rational function.

        The result is sum_{k >= lo} c_k t^k, a Laurent polynomial; exact in the
        sense that self - result has valuation > -lo ... i.e. nu > -lo.
        """
        if self.is_zero():
            return self
        top = -self.nu()
        if top < lo:
            return FqRationalFunction(poly(self.field, []), poly_one(self.field))
        coeffs = self.laurent_coefficients(lo, top)
        p = poly(self.field, coeffs)  # polynomial in t, to be shifted by lo
        if lo >= 0:
            return FqRationalFunction.of(p.shift(lo))
        tpow = poly_t(self.field) ** (-lo)
        return FqRationalFunction(p, tpow)

    def __str__(self):
        if self.is_integral():
            return str(self.num)
        den = str(self.den)
        if "+" in den or "-" in den:
            den = f"({den})"
        num = str(self.num)
        if "+" in num or "-" in num:
            num = f"({num})"
        return f"{num}/{den}"

    __repr__ = __str__


def ratfunc(field_or_q, num_coeffs, den_coeffs=(1,)):
    F = field_or_q if isinstance(field_or_q, GF) else gf(field_or_q)
    return FqRationalFunction(poly(F, num_coeffs), poly(F, den_coeffs))
