"""Structure tensors and the equivalent commutative algebra.

A structure tensor stores the constants W^{ij}_k (1-based indices, sparse:
only nonzero entries are materialized).  The same constants define

* a bracket on n copies of any Lie algebra, component s of [x, y] being
  ``sum_{i,j} W^{ij}_s [x_i, y_j]``, and
* a bilinear product on an n-dimensional space, ``e^i * e^j = sum_s W^{ij}_s e^s``.

The bracket is a Lie bracket for every underlying Lie algebra exactly when
W is symmetric in its upper indices and all structure matrices commute, and
that in turn is exactly when the product is commutative and associative.

Conventions used throughout the package:

* ``structure_matrix(w, i)`` is the matrix of multiplication by e^i acting on
  coordinate columns: entry [k-1][j-1] equals W^{ij}_k.
* A ``BasisChange`` stores the matrix ``a`` whose row i' holds the
  coordinates of the new basis vector e^{i'} in the old basis.  Coordinate
  vectors of elements therefore transform by the inverse transpose.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .errors import NonRationalSpectrumError, NotUnityError
from .exactla import (
    Matrix,
    ONE,
    Q,
    ZERO,
    char_poly,
    hstack,
    invert,
    null_space,
    q,
    rational_roots,
    rref,
    solve,
)

Entry = tuple[int, int, int]


class StructureTensor:
    """Immutable sparse tensor W^{ij}_k on indices 1..n."""

    __slots__ = ("n", "w", "name")

    def __init__(self, n: int, entries: Mapping[Entry, Fraction] | Iterable[tuple[Entry, Fraction]],
                 name: str | None = None, symmetrize: bool = False):
        if n < 0:
            raise ValueError("dimension must be nonnegative")
        items = entries.items() if isinstance(entries, Mapping) else entries
        w: dict[Entry, Fraction] = {}
        for (i, j, k), v in items:
            if not (1 <= i <= n and 1 <= j <= n and 1 <= k <= n):
                raise ValueError(f"index ({i},{j},{k}) out of range 1..{n}")
            v = q(v)
            if v:
                w[(i, j, k)] = v
        if symmetrize:
            for (i, j, k), v in list(w.items()):
                w.setdefault((j, i, k), v)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "w", w)
        object.__setattr__(self, "name", name)

    def __setattr__(self, nm, value):
        raise AttributeError("StructureTensor is immutable")

    def entry(self, i: int, j: int, k: int) -> Fraction:
        return self.w.get((i, j, k), ZERO)

    def items(self):
        return self.w.items()

    def __eq__(self, other) -> bool:
        return isinstance(other, StructureTensor) and self.n == other.n and self.w == other.w

    def __hash__(self) -> int:
        return hash((self.n, tuple(sorted(self.w.items()))))

    def __repr__(self) -> str:
        label = f" {self.name!r}" if self.name else ""
        return f"StructureTensor(n={self.n}{label}, {len(self.w)} entries)"


@dataclass(frozen=True)
class Violation:
    indices: tuple[int, ...]
    lhs: Fraction
    rhs: Fraction


@dataclass(frozen=True)
class ValidationReport:
    symmetric: bool
    commuting: bool
    first_violation: Violation | None

    @property
    def valid(self) -> bool:
        return self.symmetric and self.commuting


@dataclass(frozen=True)
class BasisChange:
    """Invertible change of basis; row i' of ``a`` is e^{i'} in old coordinates."""

    a: Matrix
    a_inv: Matrix

    def __post_init__(self):
        if not (self.a * self.a_inv).is_identity():
            raise ValueError("a_inv is not the inverse of a")

    @staticmethod
    def from_matrix(a: Matrix) -> "BasisChange":
        return BasisChange(a, invert(a))

    @staticmethod
    def identity(n: int) -> "BasisChange":
        eye = Matrix.identity(n)
        return BasisChange(eye, eye)

    @property
    def n(self) -> int:
        return self.a.rows

    def inverse(self) -> "BasisChange":
        return BasisChange(self.a_inv, self.a)

    def then(self, second: "BasisChange") -> "BasisChange":
        """Composite change: apply self first, then ``second`` on the result."""
        return BasisChange(second.a * self.a, self.a_inv * second.a_inv)

    def new_coords(self, vec: Sequence) -> tuple[Fraction, ...]:
        """Coordinates of an element in the new basis, given old coordinates."""
        return self.a_inv.transpose().apply(vec)

    def old_coords(self, vec: Sequence) -> tuple[Fraction, ...]:
        return self.a.transpose().apply(vec)


def zero_vec(n: int) -> tuple[Fraction, ...]:
    return (ZERO,) * n


def basis_vec(n: int, i: int) -> tuple[Fraction, ...]:
    """Coordinate vector of e^i (1-based)."""
    return tuple(ONE if t == i - 1 else ZERO for t in range(n))


def structure_matrix(w: StructureTensor, i: int) -> Matrix:
    """Matrix of multiplication by e^i; entry [k-1][j-1] = W^{ij}_k."""
    if not 1 <= i <= w.n:
        raise ValueError(f"index {i} out of range 1..{w.n}")
    rows = [[ZERO] * w.n for _ in range(w.n)]
    for (a, j, k), v in w.items():
        if a == i:
            rows[k - 1][j - 1] = v
    return Matrix(rows, w.n, w.n)


def structure_matrices(w: StructureTensor) -> list[Matrix]:
    return [structure_matrix(w, i) for i in range(1, w.n + 1)]


def operator_matrix(w: StructureTensor, a: Sequence) -> Matrix:
    """Matrix of multiplication by the element with coordinates ``a``."""
    a = tuple(q(x) for x in a)
    if len(a) != w.n:
        raise ValueError("element length mismatch")
    rows = [[ZERO] * w.n for _ in range(w.n)]
    for (i, j, k), v in w.items():
        if a[i - 1]:
            rows[k - 1][j - 1] += a[i - 1] * v
    return Matrix(rows, w.n, w.n)


def validate(w: StructureTensor) -> ValidationReport:
    """Check upper-index symmetry and pairwise commutation of the structure matrices.

    The first violation (symmetry scanned first) is reported with both sides:
    for symmetry the tuple is (i, j, k); for commutation it is (i, s, q, p)
    with lhs = sum_k W^{sk}_i W^{qp}_k and rhs the same with s and q swapped.
    """
    violation = None
    symmetric = True
    for (i, j, k), v in sorted(w.items()):
        if i < j and w.entry(j, i, k) != v:
            symmetric = False
            violation = Violation((i, j, k), v, w.entry(j, i, k))
            break
        if i > j and w.entry(j, i, k) != v:
            symmetric = False
            violation = Violation((j, i, k), w.entry(j, i, k), v)
            break
    commuting = True
    mats = structure_matrices(w)
    for s in range(1, w.n + 1):
        for qq in range(s + 1, w.n + 1):
            sq = mats[s - 1] * mats[qq - 1]
            qs = mats[qq - 1] * mats[s - 1]
            if sq != qs:
                commuting = False
                if violation is None:
                    i0, p0 = next(
                        (r, c)
                        for r in range(w.n)
                        for c in range(w.n)
                        if sq.data[r][c] != qs.data[r][c]
                    )
                    violation = Violation((i0 + 1, s, qq, p0 + 1), sq.data[i0][p0], qs.data[i0][p0])
                break
        if not commuting:
            break
    return ValidationReport(symmetric, commuting, violation)


def multiply(w: StructureTensor, a: Sequence, b: Sequence) -> tuple[Fraction, ...]:
    """Product of two elements given by coordinate vectors."""
    a = tuple(q(x) for x in a)
    b = tuple(q(x) for x in b)
    if len(a) != w.n or len(b) != w.n:
        raise ValueError("element length mismatch")
    out = [ZERO] * w.n
    for (i, j, k), v in w.items():
        ai, bj = a[i - 1], b[j - 1]
        if ai and bj:
            out[k - 1] += v * ai * bj
    return tuple(out)


def change_basis(w: StructureTensor, bc: BasisChange) -> StructureTensor:
    """Transform the tensor to the new basis given by the rows of bc.a."""
    if bc.n != w.n:
        raise ValueError("basis change dimension mismatch")
    n = w.n
    p, pinv = bc.a, bc.a_inv
    out: dict[Entry, Fraction] = {}
    for (i, j, k), v in w.items():
        for ip in range(1, n + 1):
            vi = p.data[ip - 1][i - 1]
            if not vi:
                continue
            for jp in range(1, n + 1):
                vj = p.data[jp - 1][j - 1]
                if not vj:
                    continue
                for kp in range(1, n + 1):
                    vk = pinv.data[k - 1][kp - 1]
                    if not vk:
                        continue
                    key = (ip, jp, kp)
                    out[key] = out.get(key, ZERO) + v * vi * vj * vk
    result = StructureTensor(n, out)
    if __debug__ and n <= 8:
        at = p.transpose()
        at_inv = pinv.transpose()
        originals = structure_matrices(w)
        for ip in range(1, n + 1):
            expect = Matrix.zeros(n, n)
            for i in range(1, n + 1):
                c = p.data[ip - 1][i - 1]
                if c:
                    expect = expect + (at_inv * originals[i - 1] * at).scale(c)
            assert structure_matrix(result, ip) == expect
    return result


def annihilator(w: StructureTensor) -> Matrix:
    """Canonical basis (columns) of {p : a * p = 0 for every a}."""
    if w.n == 0:
        return Matrix.zeros(0, 0)
    stacked = Matrix([row for m in structure_matrices(w) for row in m.data])
    return null_space(stacked)


def find_unity(w: StructureTensor) -> tuple[Fraction, ...] | None:
    """The element u with u * e^i = e^i for all i, when it exists (then unique)."""
    if w.n == 0:
        return None
    rows, rhs = [], []
    for j in range(1, w.n + 1):
        for k in range(1, w.n + 1):
            rows.append([w.entry(i, j, k) for i in range(1, w.n + 1)])
            rhs.append(ONE if j == k else ZERO)
    return solve(Matrix(rows), rhs)


def common_eigenvectors(
    w: StructureTensor,
) -> list[tuple[tuple[Fraction, ...], tuple[Fraction, ...]]]:
    """Simultaneous eigenvectors with rational eigenvalue tuples.

    Iteratively intersects eigenspaces of the structure matrices.  Joint
    eigenspaces of dimension d contribute their d canonical basis vectors.
    Raises NonRationalSpectrumError when some structure matrix has no
    rational eigenvalue at all (no rational joint eigenline can exist);
    branches whose restricted spectrum turns irrational are dropped.
    """
    mats = structure_matrices(w)
    for m in mats:
        roots, _ = rational_roots(char_poly(m))
        if w.n and not roots:
            raise NonRationalSpectrumError("a structure matrix has no rational eigenvalue")
    branches: list[tuple[Matrix, tuple[Fraction, ...]]] = [(Matrix.identity(w.n), ())]
    for m in mats:
        refined = []
        for basis, lam in branches:
            restricted = _restrict(m, basis)
            roots, _ = rational_roots(char_poly(restricted))
            for r, _mult in roots:
                eig = null_space(restricted - Matrix.identity(restricted.rows).scale(r))
                if eig.cols:
                    refined.append((_canonical_columns(basis * eig), lam + (r,)))
        branches = refined
    out = []
    for basis, lam in branches:
        for colv in basis.columns():
            out.append((colv, lam))
    return out


def _restrict(m: Matrix, basis: Matrix) -> Matrix:
    """Matrix of m on the invariant subspace spanned by the basis columns."""
    if basis.cols == 0:
        return Matrix.zeros(0, 0)
    aug, pivots, _ = rref(hstack([basis, m * basis]))
    cols = []
    for j in range(basis.cols):
        cols.append([aug.data[r][basis.cols + j] for r in range(basis.cols)])
    if any(p >= basis.cols for p in pivots):
        raise ValueError("subspace is not invariant")
    return Matrix.from_cols(cols, basis.cols)


def _canonical_columns(basis: Matrix) -> Matrix:
    """Canonical column-space basis (RREF rows of the transpose)."""
    r, _, rk = rref(basis.transpose())
    return Matrix([r.data[i] for i in range(rk)]).transpose() if rk else Matrix.zeros(basis.rows, 0)


def adjoin_unity(w: StructureTensor) -> StructureTensor:
    """Extend by a new basis element at index 1 acting as identity."""
    n = w.n + 1
    entries: dict[Entry, Fraction] = {}
    for j in range(1, n + 1):
        entries[(1, j, j)] = ONE
        if j > 1:
            entries[(j, 1, j)] = ONE
    for (i, j, k), v in w.items():
        entries[(i + 1, j + 1, k + 1)] = v
    return StructureTensor(n, entries)


def strip_unity(w: StructureTensor, unity_pos: int) -> StructureTensor:
    """Delete the unity row/column/slices; inverse of adjoin_unity up to indexing."""
    if not 1 <= unity_pos <= w.n:
        raise ValueError(f"index {unity_pos} out of range 1..{w.n}")
    if not structure_matrix(w, unity_pos).is_identity():
        raise NotUnityError(f"basis element {unity_pos} is not a unity")

    def shift(t: int) -> int:
        return t if t < unity_pos else t - 1

    entries = {
        (shift(i), shift(j), shift(k)): v
        for (i, j, k), v in w.items()
        if unity_pos not in (i, j, k)
    }
    return StructureTensor(w.n - 1, entries)


def direct_sum(parts: Sequence[StructureTensor], name: str | None = None) -> StructureTensor:
    entries: dict[Entry, Fraction] = {}
    off = 0
    for part in parts:
        for (i, j, k), v in part.items():
            entries[(i + off, j + off, k + off)] = v
        off += part.n
    return StructureTensor(off, entries, name=name)


# ---------------------------------------------------------------------------
# presets and JSON serialization
# ---------------------------------------------------------------------------


def preset(name: str) -> StructureTensor:
    """Named algebra families.

    ``truncpoly:n``           polynomials mod t^{n+1}, basis 1, t, ..., t^n
    ``truncpoly-solvable:n``  its ideal t, ..., t^n (no constant term)
    """
    kind, _, arg = name.partition(":")
    try:
        n = int(arg)
    except ValueError:
        raise ValueError(f"unknown preset {name!r}") from None
    if kind == "truncpoly" and n >= 0:
        dim = n + 1
        entries = {
            (i, j, i + j - 1): ONE
            for i in range(1, dim + 1)
            for j in range(1, dim + 1)
            if i + j - 1 <= dim
        }
        return StructureTensor(dim, entries, name=name)
    if kind == "truncpoly-solvable" and n >= 1:
        entries = {
            (i, j, i + j): ONE
            for i in range(1, n + 1)
            for j in range(1, n + 1)
            if i + j <= n
        }
        return StructureTensor(n, entries, name=name)
    raise ValueError(f"unknown preset {name!r}")


def to_json(w: StructureTensor) -> dict:
    obj = {
        "n": w.n,
        "entries": [
            {"i": i, "j": j, "k": k, "v": str(v)} for (i, j, k), v in sorted(w.items())
        ],
    }
    if w.name:
        obj["name"] = w.name
    return obj


def from_json(obj: dict) -> StructureTensor:
    """Parse an algebra object; mirrored entries may be omitted."""
    n = int(obj["n"])
    entries = {}
    for e in obj.get("entries", []):
        entries[(int(e["i"]), int(e["j"]), int(e["k"]))] = q(e["v"])
    return StructureTensor(n, entries, name=obj.get("name"), symmetrize=True)


def load_algebra(path: str) -> StructureTensor:
    with open(path, "r", encoding="utf-8") as fh:
        return from_json(json.load(fh))
