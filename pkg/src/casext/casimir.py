"""Linear and quadratic Casimir solvers.

A linear Casimir coefficient vector p satisfies sum_i W^{ij}_k p_i = 0 for
all j, k (p spans the annihilator).  A quadratic one is a symmetric matrix C
with sum_i (W^{ji}_k C_{ir} - W^{ji}_r C_{ik}) = 0 for all j and k < r, or
equivalently W^{(j)} C = C (W^{(j)})^T for every structure matrix.  Both
encodings are implemented and cross-checked; solution bases are canonical
(null-space parametrization with unknowns ordered (i <= j) lexicographically,
equations ordered by j then k < r).
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from . import algebra as alg
from .algebra import StructureTensor
from .errors import NotCommonEigenvectorError
from .exactla import Matrix, ONE, ZERO, null_space, q


def sym_index_pairs(n: int) -> list[tuple[int, int]]:
    """Unknown ordering for symmetric matrices: (i, j) with i <= j, lexicographic, 1-based."""
    return [(i, j) for i in range(1, n + 1) for j in range(i, n + 1)]


def sym_to_vec(c: Matrix) -> tuple[Fraction, ...]:
    return tuple(c.data[i - 1][j - 1] for i, j in sym_index_pairs(c.rows))


def vec_to_sym(v: Sequence, n: int) -> Matrix:
    vals = dict(zip(sym_index_pairs(n), (q(x) for x in v)))
    return Matrix(
        [[vals[(min(i, j), max(i, j))] for j in range(1, n + 1)] for i in range(1, n + 1)],
        n,
        n,
    )


def linear_system(w: StructureTensor) -> Matrix:
    """Rows (j, k) of the annihilator conditions sum_i W^{ij}_k p_i = 0."""
    rows = []
    for j in range(1, w.n + 1):
        for k in range(1, w.n + 1):
            rows.append([w.entry(i, j, k) for i in range(1, w.n + 1)])
    return Matrix(rows, w.n * w.n, w.n)


def linear_casimirs(w: StructureTensor) -> list[tuple[Fraction, ...]]:
    """Canonical basis of linear Casimir coefficient vectors."""
    if w.n == 0:
        return []
    return null_space(linear_system(w)).columns()


def quadratic_system(w: StructureTensor) -> Matrix:
    """Index-form equations: for each j and each pair k < r,
    sum_i (W^{ji}_k C_{ir} - W^{ji}_r C_{ik}) = 0, acting on sym_to_vec unknowns."""
    n = w.n
    pairs = sym_index_pairs(n)
    col_of = {p: t for t, p in enumerate(pairs)}
    rows = []
    for j in range(1, n + 1):
        for k in range(1, n + 1):
            for r in range(k + 1, n + 1):
                row = [ZERO] * len(pairs)
                for i in range(1, n + 1):
                    a = w.entry(j, i, k)
                    if a:
                        row[col_of[(min(i, r), max(i, r))]] += a
                    b = w.entry(j, i, r)
                    if b:
                        row[col_of[(min(i, k), max(i, k))]] -= b
                rows.append(row)
    return Matrix(rows, len(rows), len(pairs))


def invariance_system(w: StructureTensor) -> Matrix:
    """Second, independent encoding: W^{(j)} C - C (W^{(j)})^T = 0 entrywise."""
    n = w.n
    pairs = sym_index_pairs(n)
    col_of = {p: t for t, p in enumerate(pairs)}
    mats = alg.structure_matrices(w)
    rows = []
    for m in mats:
        for k in range(1, n + 1):
            for r in range(1, n + 1):
                row = [ZERO] * len(pairs)
                for i in range(1, n + 1):
                    a = m.data[k - 1][i - 1]
                    if a:
                        row[col_of[(min(i, r), max(i, r))]] += a
                    b = m.data[r - 1][i - 1]
                    if b:
                        row[col_of[(min(i, k), max(i, k))]] -= b
                rows.append(row)
    return Matrix(rows, len(rows), len(pairs))


def quadratic_casimirs(w: StructureTensor) -> list[Matrix]:
    """Canonical basis of symmetric forms solving the quadratic condition."""
    if w.n == 0:
        return []
    basis = null_space(quadratic_system(w)).columns()
    return [vec_to_sym(v, w.n) for v in basis]


def is_quadratic_casimir(w: StructureTensor, c: Matrix) -> bool:
    """Re-substitution check of the invariance equations."""
    if c.rows != w.n or c.cols != w.n or not c.is_symmetric():
        return False
    for m in alg.structure_matrices(w):
        if m * c != c * m.transpose():
            return False
    return True


def is_linear_casimir(w: StructureTensor, p: Sequence) -> bool:
    return all(x == 0 for x in linear_system(w).apply(p))


def rank_one_casimir(w: StructureTensor, n_vec: Sequence) -> Matrix:
    """Outer product form n (x) n for a simultaneous eigenvector n."""
    v = tuple(q(x) for x in n_vec)
    if len(v) != w.n:
        raise ValueError("vector length mismatch")
    lead = next((t for t, x in enumerate(v) if x), None)
    if lead is None:
        raise NotCommonEigenvectorError("zero vector")
    for m in alg.structure_matrices(w):
        image = m.apply(v)
        lam = image[lead] / v[lead]
        if image != tuple(lam * x for x in v):
            raise NotCommonEigenvectorError(
                "vector is not a simultaneous eigenvector of the structure matrices"
            )
    c = Matrix([[a * b for b in v] for a in v], w.n, w.n)
    if not is_quadratic_casimir(w, c):
        raise AssertionError("rank-one form unexpectedly fails the invariance equations")
    return c
