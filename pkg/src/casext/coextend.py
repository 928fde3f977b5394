"""Reduction frames (unity + pseudo-zero) and coextension structures.

A frame is a basis of an (n+1)-dimensional algebra containing a unity u
(u * x = x) and a pseudo-zero z (z * x is z when x is the unity and 0
otherwise).  Labels: the unity plays role 0, the pseudo-zero plays role n,
and the remaining "middle" positions play roles 1 .. n-1 in ascending
internal order.  All internal storage is 1-based; every formula below is
written against the role labels and translated through the frame's mapping
exactly once.

When the middle block G, G[s][t] = W^{st}_z, is invertible, multiplication
transports through Psi(x) = T_x^* e_z to the dual space.  The inverse
gbar = G^{-1} and the tensor abar,

    abar^k_{ij} = sum_s gbar[i][s] * W^{sk}_j      (middle labels),

encode the induced commutative associative product there, and every
quadratic Casimir of the full algebra is determined by its pseudo-zero row
through C_{ij} = sum_k Ahat^k_{ij} C_{zk}.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import algebra as alg
from . import casimir as cas
from .algebra import StructureTensor
from .errors import (
    DegenerateCoextensionError,
    InconsistentLiftError,
    NotACasimirError,
)
from .exactla import Matrix, ONE, ZERO, SingularMatrixError, invert, null_space, q, solve

# re-exported for callers that catch the singular case explicitly
__all__ = [
    "ReductionFrame",
    "Coextension",
    "AffineFamily",
    "detect_frame",
    "frame_from_positions",
    "build_frame",
    "invariant_forms",
    "reduced_algebra",
    "build_coextension",
    "psi_matrix",
    "psi",
    "psi_inverse",
    "dual_product",
    "dual_product_via_transport",
    "coadjoint_matrix",
    "casimir_from_boundary",
    "reduce_casimir",
    "lift_casimir",
    "solvable_coextension",
]


@dataclass(frozen=True)
class ReductionFrame:
    w: StructureTensor
    unity_pos: int
    pseudo_zero_pos: int
    middle: tuple[int, ...]

    @property
    def size(self) -> int:
        """Number of role labels minus one (the pseudo-zero's role index)."""
        return self.w.n - 1


@dataclass(frozen=True)
class Coextension:
    """gbar is the exact inverse of the middle block; abar holds the induced
    dual product as a structure tensor on the middle labels."""

    gbar: Matrix
    abar: StructureTensor


@dataclass(frozen=True)
class AffineFamily:
    particular: Matrix
    homogeneous: tuple[Matrix, ...]

    def contains(self, c: Matrix) -> bool:
        from .exactla import rank

        n = c.rows
        flat = lambda m: sum((list(m.data[r]) for r in range(n)), [])
        rows = [flat(h) for h in self.homogeneous]
        target = [a - b for a, b in zip(flat(c), flat(self.particular))]
        if not rows:
            return all(x == 0 for x in target)
        return rank(Matrix(rows + [target])) == rank(Matrix(rows))


def frame_from_positions(w: StructureTensor, unity_pos: int, pseudo_zero_pos: int) -> ReductionFrame:
    """Validate the frame conditions at the given positions."""
    n = w.n
    if not (1 <= unity_pos <= n and 1 <= pseudo_zero_pos <= n) or unity_pos == pseudo_zero_pos:
        raise ValueError("invalid frame positions")
    if not alg.structure_matrix(w, unity_pos).is_identity():
        raise ValueError(f"position {unity_pos} is not a unity")
    zmat = alg.structure_matrix(w, pseudo_zero_pos)
    for k in range(n):
        for j in range(n):
            want = ONE if (k == pseudo_zero_pos - 1 and j == unity_pos - 1) else ZERO
            if zmat.data[k][j] != want:
                raise ValueError(f"position {pseudo_zero_pos} is not a pseudo-zero")
    middle = tuple(i for i in range(1, n + 1) if i not in (unity_pos, pseudo_zero_pos))
    for i in middle:
        for j in middle:
            if w.entry(i, j, unity_pos) != 0:
                raise ValueError("middle products leak onto the unity coordinate")
    return ReductionFrame(w, unity_pos, pseudo_zero_pos, middle)


def detect_frame(w: StructureTensor) -> ReductionFrame | None:
    """First basis positions acting as unity and pseudo-zero, if any."""
    for u in range(1, w.n + 1):
        if not alg.structure_matrix(w, u).is_identity():
            continue
        for z in range(1, w.n + 1):
            if z == u:
                continue
            try:
                return frame_from_positions(w, u, z)
            except ValueError:
                continue
    return None


def invariant_forms(w: StructureTensor) -> list[Matrix]:
    """Basis of symmetric forms g with g(a*b, c) = g(a, b*c)."""
    n = w.n
    pairs = cas.sym_index_pairs(n)
    col_of = {p: t for t, p in enumerate(pairs)}
    rows = []
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            for k in range(1, n + 1):
                row = [ZERO] * len(pairs)
                for m in range(1, n + 1):
                    a = w.entry(i, j, m)
                    if a:
                        row[col_of[(min(m, k), max(m, k))]] += a
                    b = w.entry(j, k, m)
                    if b:
                        row[col_of[(min(i, m), max(i, m))]] -= b
                rows.append(row)
    if not pairs:
        return []
    return [cas.vec_to_sym(v, n) for v in null_space(Matrix(rows)).columns()]


def build_frame(wbar: StructureTensor, g: Matrix) -> ReductionFrame:
    """Adjoin a unity and a pseudo-zero to an arbitrary algebra.

    g must be a symmetric invariant form on wbar; it becomes the pseudo-zero
    slice of the middle products.  Layout: unity at 1, middle at 2..m+1,
    pseudo-zero at m+2.
    """
    m = wbar.n
    if g.rows != m or g.cols != m or not g.is_symmetric():
        raise ValueError("g must be a symmetric m x m matrix")
    for i in range(1, m + 1):
        for j in range(1, m + 1):
            for k in range(1, m + 1):
                lhs = sum((wbar.entry(i, j, t) * g.data[t - 1][k - 1] for t in range(1, m + 1)), ZERO)
                rhs = sum((wbar.entry(j, k, t) * g.data[i - 1][t - 1] for t in range(1, m + 1)), ZERO)
                if lhs != rhs:
                    raise ValueError("g is not invariant for wbar")
    n = m + 2
    z = n
    entries: dict[tuple[int, int, int], Fraction] = {}
    for j in range(1, n + 1):
        entries[(1, j, j)] = ONE
        if j > 1:
            entries[(j, 1, j)] = ONE
    for (i, j, k), v in wbar.items():
        entries[(i + 1, j + 1, k + 1)] = v
    for i in range(1, m + 1):
        for j in range(1, m + 1):
            if g.data[i - 1][j - 1]:
                entries[(i + 1, j + 1, z)] = g.data[i - 1][j - 1]
    w = StructureTensor(n, entries)
    assert alg.validate(w).valid
    return frame_from_positions(w, 1, z)


def reduced_algebra(f: ReductionFrame) -> StructureTensor:
    """Restriction to the middle labels (quotient by unity and pseudo-zero)."""
    pos = {p: t + 1 for t, p in enumerate(f.middle)}
    entries = {
        (pos[i], pos[j], pos[k]): v
        for (i, j, k), v in f.w.items()
        if i in pos and j in pos and k in pos
    }
    return StructureTensor(len(f.middle), entries)


def middle_block(f: ReductionFrame) -> Matrix:
    """G[s][t] = W^{st}_z over the middle labels."""
    m = len(f.middle)
    return Matrix(
        [[f.w.entry(f.middle[s], f.middle[t], f.pseudo_zero_pos) for t in range(m)] for s in range(m)],
        m,
        m,
    )


def build_coextension(f: ReductionFrame) -> Coextension:
    """Invert the middle block and contract the dual product tensor."""
    g = middle_block(f)
    try:
        gbar = invert(g)
    except SingularMatrixError as exc:
        raise DegenerateCoextensionError("middle block of the pseudo-zero slice is singular") from exc
    m = len(f.middle)
    wbar = reduced_algebra(f)
    entries: dict[tuple[int, int, int], Fraction] = {}
    for i in range(1, m + 1):
        for j in range(1, m + 1):
            for k in range(1, m + 1):
                val = sum(
                    (gbar.data[i - 1][s - 1] * wbar.entry(s, k, j) for s in range(1, m + 1)),
                    ZERO,
                )
                if val:
                    entries[(i, j, k)] = val
    abar = StructureTensor(m, entries)
    rep = alg.validate(abar)
    if not rep.valid:
        raise AssertionError("transported dual product is not commutative associative")
    return Coextension(gbar, abar)


def psi_matrix(f: ReductionFrame) -> Matrix:
    """Matrix of x -> T_x^* e_z on full coordinates: entry [j][i] = W^{ji}_z."""
    n = f.w.n
    return Matrix(
        [[f.w.entry(j, i, f.pseudo_zero_pos) for i in range(1, n + 1)] for j in range(1, n + 1)],
        n,
        n,
    )


def psi(f: ReductionFrame, x: Sequence) -> tuple[Fraction, ...]:
    return psi_matrix(f).apply(x)


def psi_inverse(f: ReductionFrame, xi: Sequence) -> tuple[Fraction, ...]:
    try:
        return invert(psi_matrix(f)).apply(xi)
    except SingularMatrixError as exc:
        raise DegenerateCoextensionError("transport map is singular") from exc


def coadjoint_matrix(w: StructureTensor, x: Sequence) -> Matrix:
    """T_x^* acting on dual coordinate columns (transpose of multiplication by x)."""
    return alg.operator_matrix(w, x).transpose()


def dual_product(f: ReductionFrame, xi: Sequence, eta: Sequence) -> tuple[Fraction, ...]:
    """Product on the dual space, computed by the closed three-part formula."""
    n = f.w.n
    xi = tuple(q(v) for v in xi)
    eta = tuple(q(v) for v in eta)
    if len(xi) != n or len(eta) != n:
        raise ValueError("dual vectors must have full length")
    co = build_coextension(f)
    u0, z0 = f.unity_pos - 1, f.pseudo_zero_pos - 1
    mids = [p - 1 for p in f.middle]
    m = len(mids)
    out = [ZERO] * n
    out[u0] = (
        sum((co.gbar.data[i][j] * xi[mids[i]] * eta[mids[j]] for i in range(m) for j in range(m)), ZERO)
        + xi[z0] * eta[u0]
        + eta[z0] * xi[u0]
    )
    for k in range(m):
        acc = xi[z0] * eta[mids[k]] + eta[z0] * xi[mids[k]]
        for (i, j, kk), v in co.abar.items():
            if kk == k + 1:
                acc += v * xi[mids[i - 1]] * eta[mids[j - 1]]
        out[mids[k]] = acc
    out[z0] = xi[z0] * eta[z0]
    return tuple(out)


def dual_product_via_transport(f: ReductionFrame, xi: Sequence, eta: Sequence) -> tuple[Fraction, ...]:
    """Same product computed as Psi(Psi^{-1}(xi) * Psi^{-1}(eta))."""
    x = psi_inverse(f, xi)
    y = psi_inverse(f, eta)
    return psi(f, alg.multiply(f.w, x, y))


def _hat_fill(f: ReductionFrame, co: Coextension, u: Sequence[Fraction]) -> Matrix:
    """Full symmetric form from boundary values u = (C_{z0}, C_{z,middle...}, C_{zz})."""
    n = f.w.n
    m = len(f.middle)
    u0, z0 = f.unity_pos - 1, f.pseudo_zero_pos - 1
    mids = [p - 1 for p in f.middle]
    c = [[ZERO] * n for _ in range(n)]
    c[u0][z0] = c[z0][u0] = u[0]
    for i in range(m):
        c[z0][mids[i]] = c[mids[i]][z0] = u[1 + i]
    c[z0][z0] = u[m + 1]
    for i in range(m):
        for j in range(m):
            val = co.gbar.data[i][j] * u[0]
            for k in range(m):
                val += co.abar.entry(i + 1, j + 1, k + 1) * u[1 + k]
            c[mids[i]][mids[j]] = val
    return Matrix(c, n, n)


def _boundary_row_equations(f: ReductionFrame) -> list[tuple[int, int]]:
    m = len(f.middle)
    return [(s, i) for s in range(m) for i in range(m)]


def casimir_from_boundary(f: ReductionFrame) -> list[Matrix]:
    """Quadratic Casimirs of the full algebra from boundary values alone.

    Treats the pseudo-zero row (C_{z0}, C_{z,1}, ..., C_{z,m}, C_{zz}) as
    unknowns, fills the rest of the matrix through the coextension tensor,
    imposes the residual pseudo-zero-row invariance equations, and returns a
    basis of the consistent family.  Every output is re-verified against the
    full quadratic condition.
    """
    co = build_coextension(f)
    m = len(f.middle)
    nunk = m + 2
    w = f.w
    z = f.pseudo_zero_pos
    rows = []
    for s, i in _boundary_row_equations(f):
        row = [ZERO] * nunk
        # delta_i^s X_0 + sum_t W^{s t}_i X_t - sum_t W^{s t}_z C_{t i}(u) = 0
        if s == i:
            row[0] += ONE
        for t in range(m):
            row[1 + t] += w.entry(f.middle[s], f.middle[t], f.middle[i])
        for t in range(m):
            gst = w.entry(f.middle[s], f.middle[t], z)
            if gst:
                # C_{t i}(u) = gbar[t][i] u0 + sum_k abar^k_{ti} u_{1+k}
                row[0] -= gst * co.gbar.data[t][i]
                for k in range(m):
                    row[1 + k] -= gst * co.abar.entry(t + 1, i + 1, k + 1)
        rows.append(row)
    kernel = null_space(Matrix(rows, len(rows), nunk)) if rows else Matrix.identity(nunk)
    out = []
    for u in kernel.columns():
        c = _hat_fill(f, co, u)
        if not cas.is_quadratic_casimir(w, c):
            raise AssertionError("boundary construction produced a non-Casimir")
        out.append(c)
    return out


def reduce_casimir(f: ReductionFrame, c: Matrix) -> Matrix:
    """Middle-label restriction of a full Casimir; a Casimir of the reduced algebra."""
    if not cas.is_quadratic_casimir(f.w, c):
        raise NotACasimirError("form fails the quadratic invariance equations for the full algebra")
    m = len(f.middle)
    reduced = Matrix(
        [[c.data[f.middle[i] - 1][f.middle[j] - 1] for j in range(m)] for i in range(m)], m, m
    )
    if not cas.is_quadratic_casimir(reduced_algebra(f), reduced):
        raise AssertionError("restriction of a Casimir failed the reduced equations")
    return reduced


def lift_casimir(f: ReductionFrame, cbar: Matrix, c_nn) -> AffineFamily:
    """All full Casimirs restricting to cbar with the given corner value.

    Solves the boundary system for X = (C_{z0}, C_{z,1..m}); the result is the
    affine family particular + span(homogeneous).  Inconsistency is reported
    with the failing residual.
    """
    m = len(f.middle)
    wbar = reduced_algebra(f)
    if not cas.is_quadratic_casimir(wbar, cbar):
        raise NotACasimirError("cbar fails the quadratic invariance equations for the reduced algebra")
    c_nn = q(c_nn)
    w = f.w
    z = f.pseudo_zero_pos
    rows, rhs = [], []
    for s in range(m):
        for i in range(m):
            row = [ZERO] * (m + 1)
            if s == i:
                row[0] += ONE
            for t in range(m):
                row[1 + t] += w.entry(f.middle[s], f.middle[t], f.middle[i])
            rows.append(row)
            rhs.append(
                sum(
                    (
                        w.entry(f.middle[s], f.middle[t], z) * cbar.data[t][i]
                        for t in range(m)
                    ),
                    ZERO,
                )
            )
    sysm = Matrix(rows, len(rows), m + 1) if rows else Matrix.zeros(0, m + 1)
    x = solve(sysm, rhs) if rows else tuple([ZERO] * (m + 1))
    if x is None:
        residual = [str(v) for v in rhs]
        raise InconsistentLiftError(f"boundary system has no solution; rhs was {residual}")
    co_free = null_space(sysm) if rows else Matrix.identity(m + 1)

    def assemble(u_head, middle, corner):
        n = w.n
        u0, z0 = f.unity_pos - 1, f.pseudo_zero_pos - 1
        mids = [p - 1 for p in f.middle]
        c = [[ZERO] * n for _ in range(n)]
        c[u0][z0] = c[z0][u0] = u_head[0]
        for i in range(m):
            c[z0][mids[i]] = c[mids[i]][z0] = u_head[1 + i]
        c[z0][z0] = corner
        for i in range(m):
            for j in range(m):
                c[mids[i]][mids[j]] = middle.data[i][j]
        return Matrix(c, n, n)

    particular = assemble(x, cbar, c_nn)
    zero_mid = Matrix.zeros(m, m)
    homogeneous = tuple(assemble(h, zero_mid, ZERO) for h in co_free.columns())
    for form in (particular,) + homogeneous:
        if not cas.is_quadratic_casimir(w, form):
            raise AssertionError("lift produced a non-Casimir")
    return AffineFamily(particular, homogeneous)


def solvable_coextension(f: ReductionFrame) -> StructureTensor:
    """The dual product with the unity direction deleted: labels 0..m on
    internal indices 1..m+1, where index 1 spans a zero-product ideal."""
    co = build_coextension(f)
    m = len(f.middle)
    entries: dict[tuple[int, int, int], Fraction] = {}
    for (i, j, k), v in co.abar.items():
        entries[(i + 1, j + 1, k + 1)] = v
    for i in range(1, m + 1):
        for j in range(1, m + 1):
            g = co.gbar.data[i - 1][j - 1]
            if g:
                entries[(i + 1, j + 1, 1)] = g
    out = StructureTensor(m + 1, entries)
    assert alg.validate(out).valid
    return out
