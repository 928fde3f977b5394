"""Seeded generators for tensors, basis changes, frames, and forms.

Everything here is driven by a caller-supplied ``random.Random`` so test
suites and demos are reproducible bit-for-bit.
"""

from __future__ import annotations

import random
from fractions import Fraction

from . import algebra as alg
from .algebra import BasisChange, StructureTensor
from .exactla import Matrix, ONE, Q, ZERO, rank


def random_fraction(rng: random.Random, span: int = 4, denominators=(1, 1, 1, 2, 3)) -> Fraction:
    return Fraction(rng.randint(-span, span), rng.choice(denominators))


def random_matrix(rng: random.Random, rows: int, cols: int, span: int = 4) -> Matrix:
    return Matrix([[random_fraction(rng, span) for _ in range(cols)] for _ in range(rows)])


def random_invertible(rng: random.Random, n: int, span: int = 3) -> Matrix:
    while True:
        m = random_matrix(rng, n, n, span)
        if rank(m) == n:
            return m


def random_basis_change(rng: random.Random, n: int) -> BasisChange:
    return BasisChange.from_matrix(random_invertible(rng, n))


def random_symmetric(rng: random.Random, n: int, span: int = 4) -> Matrix:
    vals = {}
    for i in range(n):
        for j in range(i, n):
            vals[(i, j)] = random_fraction(rng, span)
    return Matrix([[vals[(min(i, j), max(i, j))] for j in range(n)] for i in range(n)], n, n)


def random_element(rng: random.Random, n: int, span: int = 4):
    return tuple(random_fraction(rng, span) for _ in range(n))


# Building blocks for random validated tensors.  Each is a small commutative
# associative algebra; direct sums of these scrambled by a random basis change
# stay valid while looking nothing like a canonical form.
def _blocks(max_dim: int) -> list[StructureTensor]:
    out = [
        StructureTensor(1, {}),                        # zero algebra
        alg.preset("truncpoly:0"),                     # unity alone
        StructureTensor(2, {(1, 1, 1): ONE, (2, 2, 2): ONE}),  # split torus Q x Q
        StructureTensor(2, {(1, 1, 2): ONE}),          # nilpotent generator
        alg.preset("truncpoly:1"),                     # dual numbers
        StructureTensor(2, {(2, 2, 1): Q(2), (1, 1, 1): ONE, (1, 2, 2): ONE, (2, 1, 2): ONE}),
        # ^ quadratic field Q[x]/(x^2 - 2): 1 = e1, x = e2
    ]
    if max_dim >= 3:
        out += [alg.preset("truncpoly-solvable:3"), alg.preset("truncpoly:2")]
    if max_dim >= 4:
        out += [alg.preset("truncpoly-solvable:4"), alg.preset("truncpoly:3")]
    return [b for b in out if b.n <= max_dim]


def random_validated_tensor(rng: random.Random, n: int) -> StructureTensor:
    """A validated tensor of dimension n: scrambled direct sum of small algebras."""
    parts: list[StructureTensor] = []
    left = n
    while left:
        choices = [b for b in _blocks(left) if b.n <= left]
        part = rng.choice(choices)
        parts.append(part)
        left -= part.n
    w = alg.direct_sum(parts)
    return alg.change_basis(w, random_basis_change(rng, n))


def noncommuting_symmetric_tensor(rng: random.Random, n: int) -> StructureTensor:
    """Symmetric tensor whose structure matrices fail to commute."""
    while True:
        entries = {}
        for i in range(1, n + 1):
            for j in range(i, n + 1):
                for k in range(1, n + 1):
                    v = Q(rng.randint(-2, 2))
                    if v:
                        entries[(i, j, k)] = v
                        entries[(j, i, k)] = v
        w = StructureTensor(n, entries)
        rep = alg.validate(w)
        if rep.symmetric and not rep.commuting:
            return w


def random_frame(rng: random.Random, ext_dim: int, scramble_middle: bool = True):
    """A seeded unity + pseudo-zero frame with invertible middle block.

    Draws a random middle algebra, solves for its invariant symmetric forms,
    and retries until a nondegenerate one appears; optionally scrambles the
    middle coordinates (which preserves the frame positions).
    """
    from . import coextend as coe
    from .exactla import invert
    from .errors import SingularMatrixError

    m = ext_dim - 2
    if m < 0:
        raise ValueError("frames need dimension at least 2")
    while True:
        wbar = random_validated_tensor(rng, m) if m else StructureTensor(0, {})
        forms = coe.invariant_forms(wbar)
        if m and not forms:
            continue
        g = None
        for _ in range(8):
            cand = Matrix.zeros(m, m)
            for b in forms:
                cand = cand + b.scale(Fraction(rng.randint(-5, 5)))
            try:
                invert(cand)
            except SingularMatrixError:
                continue
            g = cand
            break
        if m and g is None:
            continue
        if not m:
            g = Matrix.zeros(0, 0)
        frame = coe.build_frame(wbar, g)
        if not scramble_middle or m == 0:
            return frame
        block = random_invertible(rng, m)
        n = frame.w.n
        rows = [[ZERO] * n for _ in range(n)]
        rows[0][0] = ONE
        rows[n - 1][n - 1] = ONE
        for r in range(m):
            for c in range(m):
                rows[1 + r][1 + c] = block.data[r][c]
        bc = BasisChange.from_matrix(Matrix(rows, n, n))
        moved = alg.change_basis(frame.w, bc)
        return coe.frame_from_positions(moved, 1, n)


def random_quadratic_outsider(rng: random.Random, w: StructureTensor, basis: list[Matrix]) -> Matrix:
    """Seeded symmetric matrix outside the span of the given solution basis."""
    rows = [sum((list(b.data[r]) for r in range(w.n)), []) for b in basis]
    while True:
        c = random_symmetric(rng, w.n)
        flat = sum((list(c.data[r]) for r in range(w.n)), [])
        stacked = Matrix(rows + [flat]) if rows else Matrix([flat])
        if rank(stacked) == len(rows) + 1:
            return c
