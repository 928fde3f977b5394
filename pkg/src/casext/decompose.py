"""Splitting into ideal direct summands and canonical solvable bases.

Splitting strategy: the centroid of the algebra (all linear maps commuting
with every multiplication operator) contains each structure matrix and the
identity, and every generalized eigenspace of a centroid element is an ideal.
A seeded sequence of random centroid elements is tried; the finest split found
wins, and each resulting block is split recursively.  Eigenvalues are taken
over the rationals only: when a characteristic polynomial keeps a nonlinear
factor with no rational root, the corresponding invariant subspace stays
unsplit and the decomposition is flagged incomplete.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from . import algebra as alg
from .algebra import BasisChange, StructureTensor
from .errors import NotNilpotentError, UnclassifiableError
from .exactla import (
    Matrix,
    ONE,
    ZERO,
    char_poly,
    null_space,
    rank,
    rational_roots,
    rref,
)


@dataclass(frozen=True)
class Decomposition:
    basis_change: BasisChange
    block_dims: tuple[int, ...]
    blocks: tuple[StructureTensor, ...]
    complete: bool


@dataclass(frozen=True)
class Classification:
    kind: str  # "semisimple" | "solvable"
    scale: Fraction | None = None


def centroid_basis(w: StructureTensor) -> list[Matrix]:
    """Canonical basis of {phi : phi commutes with every structure matrix}."""
    n = w.n
    if n == 0:
        return []
    mats = alg.structure_matrices(w)
    rows = []
    for m in mats:
        # [phi, m] = 0, phi unknown row-major: n^2 equations per matrix
        for r in range(n):
            for c in range(n):
                row = [ZERO] * (n * n)
                for t in range(n):
                    row[r * n + t] += m.data[t][c]   # (phi m)[r][c]
                    row[t * n + c] -= m.data[r][t]   # (m phi)[r][c]
                rows.append(row)
    ns = null_space(Matrix(rows))
    out = []
    for col in ns.columns():
        m = Matrix([col[r * n : (r + 1) * n] for r in range(n)], n, n)
        out.append(_integerized(m))
    return out


def _integerized(m: Matrix) -> Matrix:
    """Scale to a content-free integer matrix (keeps centroid draws integral,
    so characteristic polynomials stay monic with integer coefficients)."""
    import math as _math

    den = _math.lcm(*(x.denominator for row in m.data for x in row)) if m.rows else 1
    scaled = m.scale(den)
    g = _math.gcd(*(int(x) for row in scaled.data for x in row)) if m.rows else 1
    return scaled.scale(Fraction(1, g)) if g > 1 else scaled


def _split_once(w: StructureTensor, rng: random.Random, attempts: int):
    """Best single-level split and whether every attempt had rational spectrum."""
    n = w.n
    basis = centroid_basis(w)
    best: list[Matrix] | None = None
    all_rational = True
    for _ in range(attempts):
        phi = Matrix.zeros(n, n)
        for b in basis:
            phi = phi + b.scale(Fraction(rng.randint(-9, 9)))
        roots, rem = rational_roots(char_poly(phi))
        pieces: list[Matrix] = []
        for r, mult in roots:
            gen = null_space((phi - Matrix.identity(n).scale(r)).power(mult))
            pieces.append(gen)
        if rem.degree >= 1:
            all_rational = False
            # the rootless factor's kernel is still an invariant complement
            pieces.append(null_space(rem.eval_matrix(phi)))
        if sum(p.cols for p in pieces) != n:
            continue  # defective draw; should not happen, skip defensively
        if best is None or len(pieces) > len(best):
            best = pieces
    if best is None:
        best = [Matrix.identity(n)]
    return best, all_rational


def decompose_ideals(w: StructureTensor, seed: int = 0, attempts: int = 8) -> Decomposition:
    """Split into ideal direct summands; blocks reassemble to w through the basis change."""
    n = w.n
    if n == 0:
        return Decomposition(BasisChange.identity(0), (), (), True)
    rng = random.Random(seed)
    pieces, all_rational = _split_once(w, rng, attempts)
    if len(pieces) == 1:
        # a leaf is "complete" only when no attempt met an irreducible
        # nonlinear factor, i.e. nothing rational-obstructed the analysis
        return Decomposition(BasisChange.identity(n), (n,), (w,), all_rational)
    cols = []
    dims = []
    for p in pieces:
        cols.extend(p.columns())
        dims.append(p.cols)
    # new basis vectors are the subspace columns: rows of the change matrix
    bc = BasisChange.from_matrix(Matrix.from_cols(cols, n).transpose())
    moved = alg.change_basis(w, bc)
    blocks = _slice_blocks(moved, dims)
    # recurse into each block with a derived deterministic seed
    final_blocks: list[StructureTensor] = []
    final_dims: list[int] = []
    local_changes: list[Matrix] = []
    complete = True
    for idx, block in enumerate(blocks):
        sub = decompose_ideals(block, seed=seed * 31 + idx + 1, attempts=attempts)
        complete = complete and sub.complete
        final_blocks.extend(sub.blocks)
        final_dims.extend(sub.block_dims)
        local_changes.append(sub.basis_change.a)
    combined = bc.then(BasisChange.from_matrix(_block_diag(local_changes)))
    return Decomposition(combined, tuple(final_dims), tuple(final_blocks), complete)


def _slice_blocks(w: StructureTensor, dims: list[int]) -> list[StructureTensor]:
    starts = []
    off = 0
    for d in dims:
        starts.append(off)
        off += d
    blocks = []
    for s, d in zip(starts, dims):
        entries = {}
        for (i, j, k), v in w.items():
            if s < i <= s + d and s < j <= s + d:
                if not (s < k <= s + d):
                    if v:
                        raise ValueError("subspaces are not ideals")
                    continue
                entries[(i - s, j - s, k - s)] = v
        blocks.append(StructureTensor(d, entries))
    return blocks


def _block_diag(mats: list[Matrix]) -> Matrix:
    n = sum(m.rows for m in mats)
    rows = [[ZERO] * n for _ in range(n)]
    off = 0
    for m in mats:
        for r in range(m.rows):
            for c in range(m.cols):
                rows[off + r][off + c] = m.data[r][c]
        off += m.rows
    return Matrix(rows, n, n)


def reassemble(d: Decomposition) -> StructureTensor:
    """Block-diagonal sum of the blocks, expressed back in the original basis."""
    summed = alg.direct_sum(list(d.blocks))
    return alg.change_basis(summed, d.basis_change.inverse())


def is_nilpotent_family(w: StructureTensor) -> bool:
    """True iff every structure matrix is nilpotent."""
    return all(m.power(w.n).is_zero() for m in alg.structure_matrices(w))


def canonical_solvable_basis(w: StructureTensor) -> tuple[BasisChange, StructureTensor]:
    """Basis from the descending power filtration A, A*A, A*(A*A), ...

    In the output tensor, e^i * e^j has support only on indices s > max(i, j)
    and every structure matrix is strictly lower triangular.
    """
    if not is_nilpotent_family(w):
        raise NotNilpotentError("structure matrices are not all nilpotent")
    n = w.n
    mats = alg.structure_matrices(w)
    # filtration subspaces as canonical column bases
    filtration = [Matrix.identity(n)]
    while filtration[-1].cols:
        prev = filtration[-1]
        products = []
        for m in mats:
            products.extend((m * prev).columns())
        filtration.append(_col_space(products, n))
    layers: list[tuple[Fraction, ...]] = []
    for depth in range(len(filtration) - 1):
        sub = filtration[depth + 1]
        # extend sub's basis to a basis of filtration[depth], keeping RREF pivot order
        chosen = list(sub.columns())
        base_rank = rank(Matrix.from_cols(chosen, n)) if chosen else 0
        for cand in filtration[depth].columns():
            trial = Matrix.from_cols(chosen + [cand], n)
            if rank(trial) > base_rank:
                chosen.append(cand)
                base_rank += 1
                layers.append(cand)
    bc = BasisChange.from_matrix(Matrix.from_cols(layers, n).transpose())
    out = alg.change_basis(w, bc)
    for (i, j, k), v in out.items():
        if v and k <= max(i, j):
            raise AssertionError("canonical support condition violated")
    return bc, out


def _col_space(cols, n: int) -> Matrix:
    if not cols:
        return Matrix.zeros(n, 0)
    r, _, rk = rref(Matrix.from_cols(cols, n).transpose())
    if rk == 0:
        return Matrix.zeros(n, 0)
    return Matrix([r.data[i] for i in range(rk)]).transpose()


def classify(w: StructureTensor) -> Classification:
    """Solvable (nilpotent family) or semisimple (unital); anything else errs."""
    if is_nilpotent_family(w):
        return Classification("solvable")
    unity = alg.find_unity(w)
    if unity is not None:
        return Classification("semisimple", ONE)
    raise UnclassifiableError(
        f"block of dimension {w.n} is neither a nilpotent family nor unital over the rationals"
    )
