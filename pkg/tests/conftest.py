"""Shared random generators for the exact-arithmetic test suite."""

import random
from fractions import Fraction

import pytest

from latred.errors import LatredError
from latred.fq import FqRationalFunction, poly
from latred.latff import FFSummand, VolumeSpace
from latred.latz import InnerProduct, ZSummand
from latred import matrices
from latred.rings import ZZ, poly_ring


@pytest.fixture
def rng():
    return random.Random(20240817)


def random_spd(rng, n, spread=2):
    """Exact SPD Gram matrix A^T A + I with small integer A."""
    while True:
        A = [[rng.randint(-spread, spread) for _ in range(n)] for _ in range(n)]
        gram = [[Fraction(sum(A[k][i] * A[k][j] for k in range(n)) + (i == j))
                 for j in range(n)] for i in range(n)]
        try:
            return InnerProduct(n, gram)
        except LatredError:  # pragma: no cover - the +I shift keeps it SPD
            continue


def random_z_summand(rng, n, rank, spread=3):
    while True:
        rows = [[rng.randint(-spread, spread) for _ in range(n)] for _ in range(rank)]
        lifted = matrices.freeze([[Fraction(x) for x in r] for r in rows])
        if matrices.rank_field(lifted, Fraction(0), Fraction(1)) == rank:
            return ZSummand.from_rows(n, rows)


def random_unimodular_z(rng, n, steps=6, spread=2):
    g = [list(r) for r in matrices.identity_rows(n, 1, 0)]
    for _ in range(steps):
        i, j = rng.randrange(n), rng.randrange(n)
        if i != j:
            c = rng.randint(-spread, spread)
            for k in range(n):
                g[i][k] += c * g[j][k]
    return matrices.freeze(g)


def random_poly(rng, q, maxdeg):
    return poly(q, [rng.randrange(q) for _ in range(rng.randint(1, maxdeg + 1))])


def random_ratfunc(rng, q, maxdeg):
    num = random_poly(rng, q, maxdeg)
    while True:
        den = random_poly(rng, q, maxdeg)
        if not den.is_zero():
            return FqRationalFunction(num, den)


def random_volume_space(rng, q, n, maxdeg=2):
    """Random lattice basis with entry degrees bounded by maxdeg (num and den)."""
    ring = poly_ring(q)
    while True:
        rows = [[random_ratfunc(rng, q, maxdeg) if rng.random() < 0.85
                 else ring.field_zero() for _ in range(n)] for _ in range(n)]
        try:
            return VolumeSpace(q, n, rows)
        except LatredError:
            continue


def random_ff_summand(rng, q, n, rank, maxdeg=2):
    ring = poly_ring(q)
    while True:
        rows = [[random_poly(rng, q, maxdeg) if rng.random() < 0.8 else ring.zero()
                 for _ in range(n)] for _ in range(rank)]
        if matrices.rank_over_field(ring, matrices.freeze(rows)) == rank:
            return FFSummand.from_rows(q, n, rows)


def random_unimodular_poly(rng, q, n, steps=5, maxdeg=1):
    ring = poly_ring(q)
    g = [list(r) for r in matrices.identity_rows(n, ring.one(), ring.zero())]
    for _ in range(steps):
        i, j = rng.randrange(n), rng.randrange(n)
        if i != j:
            c = random_poly(rng, q, maxdeg)
            for k in range(n):
                g[i][k] = ring.add(g[i][k], ring.mul(c, g[j][k]))
    return matrices.freeze(g)


def random_invertible_rational(rng, n, num_max=9, den_max=9):
    while True:
        A = [[Fraction(rng.randint(-num_max, num_max), rng.randint(1, den_max))
              for _ in range(n)] for _ in range(n)]
        if matrices.det_field(matrices.freeze(A), Fraction(0), Fraction(1)) != 0:
            return matrices.freeze(A)
