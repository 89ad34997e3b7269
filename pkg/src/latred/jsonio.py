"""JSON encoding of the exact value types used at the CLI boundary.

Conventions:
    * rationals as strings "p/q" or "p",
    * F_q elements as integers 0..q-1,
    * polynomials over F_q as ascending coefficient arrays,
    * rational functions as strings like "t^2/(t^3+1)",
    * matrices as {"ring", "rows", "cols", "entries"} with row-major nested
      arrays (plus "q" for the function-field rings).
"""

from __future__ import annotations

import re
from fractions import Fraction

from .errors import ValidationError
from .exactmath import ExactMatrix
from .fq import FqRationalFunction, gf, poly
from .latff import FFSummand, VolumeSpace
from .latz import InnerProduct, ZSummand
from .logs import ExactLog
from .sarith import IntegralStructure, LocalizedContext, LocSummand


def rational_to_str(x):
    x = Fraction(x)
    return str(x)


def rational_from_str(s):
    try:
        return Fraction(str(s))
    except (ValueError, ZeroDivisionError) as exc:
        raise ValidationError(f"bad rational {s!r}: {exc}") from None


def ratio_to_str(x):
    """Always 'num/den', even for integers (used for squared-volume tags)."""
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


_TERM_RE = re.compile(r"^(?:(\d+)\*?)?(t(?:\^(\d+))?)?$")


def poly_from_str(q, s):
    F = gf(q)
    s = s.strip().replace(" ", "")
    if not s or s == "0":
        return poly(F, [])
    coeffs = {}
    for term in s.replace("-", "+-").split("+"):
        if not term:
            continue
        neg = term.startswith("-")
        if neg:
            term = term[1:]
        m = _TERM_RE.match(term)
        if not m or (m.group(1) is None and m.group(2) is None):
            raise ValidationError(f"bad polynomial term {term!r}")
        coeff = int(m.group(1)) if m.group(1) is not None else 1
        if m.group(2) is None:
            deg = 0
        else:
            deg = int(m.group(3)) if m.group(3) is not None else 1
        coeff %= F.q
        if neg:
            coeff = F.neg(coeff)
        coeffs[deg] = F.add(coeffs.get(deg, 0), coeff)
    top = max(coeffs) if coeffs else 0
    return poly(F, [coeffs.get(i, 0) for i in range(top + 1)])


def ratfunc_from_str(q, s):
    s = str(s).strip().replace(" ", "")
    depth = 0
    split_at = None
    for i, ch in enumerate(s):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch == "/" and depth == 0:
            split_at = i
            break
    if split_at is None:
        return FqRationalFunction.of(poly_from_str(q, _strip_parens(s)))
    num = poly_from_str(q, _strip_parens(s[:split_at]))
    den = poly_from_str(q, _strip_parens(s[split_at + 1:]))
    if den.is_zero():
        raise ValidationError("zero denominator in rational function")
    return FqRationalFunction(num, den)


def _strip_parens(s):
    while s.startswith("(") and s.endswith(")"):
        s = s[1:-1]
    return s


def poly_to_coeffs(p):
    return list(p.coeffs)


def poly_from_coeffs(q, coeffs):
    return poly(gf(q), list(coeffs))


def ratfunc_to_str(x):
    return str(FqRationalFunction.of(x))


# ---------------------------------------------------------------------------
# exact matrices
# ---------------------------------------------------------------------------

def matrix_to_json(M):
    if not isinstance(M, ExactMatrix):
        raise ValidationError("matrix_to_json expects an ExactMatrix")
    if M.ring == "Z":
        entries = [[int(x) for x in row] for row in M.entries]
    elif M.ring == "Q":
        entries = [[rational_to_str(x) for x in row] for row in M.entries]
    elif M.ring == "Fq[t]":
        entries = [[poly_to_coeffs(x) for x in row] for row in M.entries]
    else:
        entries = [[ratfunc_to_str(x) for x in row] for row in M.entries]
    out = {"ring": M.ring, "rows": M.rows, "cols": M.cols, "entries": entries}
    if M.q is not None:
        out["q"] = M.q
    return out


def matrix_from_json(doc):
    try:
        ring = doc["ring"]
        entries = doc["entries"]
        q = doc.get("q")
    except (KeyError, TypeError) as exc:
        raise ValidationError(f"bad matrix document: {exc}") from None
    rows = doc.get("rows", len(entries))
    cols = doc.get("cols", len(entries[0]) if entries else 0)
    if ring == "Z":
        ent = [[int(x) for x in row] for row in entries]
    elif ring == "Q":
        ent = [[rational_from_str(x) for x in row] for row in entries]
    elif ring == "Fq[t]":
        ent = [[poly_from_coeffs(q, x) for x in row] for row in entries]
    elif ring == "Fq(t)":
        ent = [[ratfunc_from_str(q, x) for x in row] for row in entries]
    else:
        raise ValidationError(f"unknown matrix ring {ring!r}")
    return ExactMatrix(ring, rows, cols, ent, q=q)


# ---------------------------------------------------------------------------
# module-level payloads
# ---------------------------------------------------------------------------

def inner_product_from_json(doc):
    try:
        n = int(doc["n"])
        gram = [[rational_from_str(x) for x in row] for row in doc["gram"]]
    except (KeyError, TypeError) as exc:
        raise ValidationError(f"bad inner product: {exc}") from None
    return InnerProduct(n, gram)


def inner_product_to_json(s):
    return {"n": s.n, "gram": [[rational_to_str(x) for x in row] for row in s.gram]}


def volume_space_from_json(doc):
    try:
        q = int(doc["q"])
        n = int(doc["n"])
        rows = [[ratfunc_from_str(q, x) for x in row] for row in doc["S_basis"]]
    except (KeyError, TypeError) as exc:
        raise ValidationError(f"bad volume space: {exc}") from None
    return VolumeSpace(q, n, rows)


def volume_space_to_json(vs):
    return {"q": vs.q, "n": vs.n,
            "S_basis": [[ratfunc_to_str(x) for x in row] for row in vs.basis]}


def z_summand_from_json(doc, n):
    try:
        basis = [[int(x) for x in row] for row in doc["basis"]]
    except (KeyError, TypeError) as exc:
        raise ValidationError(f"bad summand: {exc}") from None
    return ZSummand.from_rows(n, basis)


def z_summand_to_json(w):
    return {"rank": w.rank, "basis": [[int(x) for x in row] for row in w.basis]}


def ff_summand_from_json(doc, q, n):
    try:
        basis = [[poly_from_coeffs(q, x) for x in row] for row in doc["basis"]]
    except (KeyError, TypeError) as exc:
        raise ValidationError(f"bad summand: {exc}") from None
    return FFSummand.from_rows(q, n, basis)


def ff_summand_to_json(w):
    return {"rank": w.rank,
            "basis": [[poly_to_coeffs(x) for x in row] for row in w.basis]}


def summand_to_json(w):
    if isinstance(w, ZSummand):
        return z_summand_to_json(w)
    if isinstance(w, FFSummand):
        return ff_summand_to_json(w)
    if isinstance(w, LocSummand):
        return loc_summand_to_json(w)
    raise ValidationError(f"unknown summand type {type(w).__name__}")


def localized_context_from_json(doc):
    kind = doc.get("ring", "z").lower()
    if kind in ("z", "int", "integers"):
        return LocalizedContext.integers([int(p) for p in doc["T"]])
    q = int(doc["q"])
    primes = [poly_from_coeffs(q, c) for c in doc["T"]]
    return LocalizedContext.function_field(q, primes)


def integral_structure_from_json(ctx, doc):
    try:
        n = int(doc["n"])
        rows = doc["basis"]
    except (KeyError, TypeError) as exc:
        raise ValidationError(f"bad integral structure: {exc}") from None
    if ctx.kind == "Z":
        ent = [[rational_from_str(x) for x in row] for row in rows]
    else:
        ent = [[ratfunc_from_str(ctx.q, x) for x in row] for row in rows]
    return IntegralStructure(ctx, n, ent)


def loc_summand_from_json(ctx, n, doc):
    rows = doc["basis"]
    if ctx.kind == "Z":
        ent = [[rational_from_str(x) for x in row] for row in rows]
    else:
        ent = [[ratfunc_from_str(ctx.q, x) for x in row] for row in rows]
    return LocSummand.from_rows(ctx, n, ent)


def loc_summand_to_json(w):
    if w.ctx.kind == "Z":
        basis = [[rational_to_str(x) for x in row] for row in w.basis]
    else:
        basis = [[ratfunc_to_str(x) for x in row] for row in w.basis]
    return {"rank": w.rank, "basis": basis}


def vertex_from_json(ctx, doc):
    try:
        rows = doc["matrix"] if "matrix" in doc else doc["basis"]
    except TypeError as exc:
        raise ValidationError(f"bad vertex: {exc}") from None
    if ctx.kind == "p-adic":
        cols = [[rational_from_str(rows[i][j]) for i in range(ctx.n)]
                for j in range(ctx.n)]
    else:
        cols = [[ratfunc_from_str(ctx.q, rows[i][j]) for i in range(ctx.n)]
                for j in range(ctx.n)]
    from .building import canonical_vertex
    return canonical_vertex(cols, ctx)


def vertex_to_json(v):
    if v.ctx.kind == "p-adic":
        rows = [[rational_to_str(x) for x in row] for row in v.matrix]
    else:
        rows = [[ratfunc_to_str(x) for x in row] for row in v.matrix]
    return {"matrix": rows}


# ---------------------------------------------------------------------------
# exact values and filtration reports
# ---------------------------------------------------------------------------

def value_to_json(v, tag="c_sq_ratio", decimals=True):
    """Exact scalar payload; natural logs only as decimal annotations.

    An ExactLog value ln(arg)/m is emitted as {tag: arg'} with
    value = (1/2) ln(arg') whenever m divides 2, else with an explicit
    log-root pair.
    """
    if isinstance(v, ExactLog):
        arg, index = v.as_log_root()
        out = {}
        if index == 2:
            out[tag] = ratio_to_str(arg)
        elif index == 1:
            out[tag] = ratio_to_str(arg * arg)
        else:
            out["log_arg"] = ratio_to_str(arg)
            out["log_index"] = index
        if decimals:
            out["decimal"] = f"{v.to_float():.12g}"
        return out
    return rational_to_str(v)


def point_to_json(p):
    return {"rank": p.rank, "logvol": value_to_json(p.logvol, tag="vol_sq"),
            "summand": summand_to_json(p.id)}


def report_to_json(report):
    c_values = {}
    for w, c in report.c_values.items():
        c_values[str(w.rank)] = value_to_json(c)
    return {
        "minima": [point_to_json(p) for p in report.minima],
        "path": [point_to_json(p) for p in report.path],
        "chain": [summand_to_json(w) for w in report.chain],
        "c_values": c_values,
    }
