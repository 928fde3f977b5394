"""Exact dense linear algebra over the rationals.

Scalars are ``fractions.Fraction`` throughout, so every result is exact and
every test can be a strict equality.  Matrices are immutable; all operations
return new values.  Null-space bases use the RREF free-variable
parametrization, which makes them canonical: two matrices with the same row
space produce the identical basis.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import SingularMatrixError

Q = Fraction

ZERO = Q(0)
ONE = Q(1)


def q(x) -> Fraction:
    """Coerce ints, strings like ``"p/q"``, or Fractions to Fraction."""
    return x if isinstance(x, Fraction) else Fraction(x)


class Matrix:
    """Immutable dense matrix of Fractions (row-major)."""

    __slots__ = ("rows", "cols", "data")

    def __init__(self, data: Iterable[Iterable], rows: int | None = None, cols: int | None = None):
        rows_t = tuple(tuple(q(x) for x in row) for row in data)
        if rows is None:
            rows = len(rows_t)
        if cols is None:
            cols = len(rows_t[0]) if rows_t else 0
        if len(rows_t) != rows or any(len(r) != cols for r in rows_t):
            raise ValueError("ragged or mis-sized matrix data")
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)
        object.__setattr__(self, "data", rows_t)

    def __setattr__(self, name, value):
        raise AttributeError("Matrix is immutable")

    @staticmethod
    def zeros(rows: int, cols: int) -> "Matrix":
        return Matrix([[ZERO] * cols for _ in range(rows)], rows, cols)

    @staticmethod
    def identity(n: int) -> "Matrix":
        return Matrix([[ONE if i == j else ZERO for j in range(n)] for i in range(n)], n, n)

    @staticmethod
    def from_cols(cols: Sequence[Sequence], nrows: int | None = None) -> "Matrix":
        cols = [tuple(q(x) for x in c) for c in cols]
        if nrows is None:
            if not cols:
                raise ValueError("nrows required for a matrix with no columns")
            nrows = len(cols[0])
        return Matrix([[c[r] for c in cols] for r in range(nrows)], nrows, len(cols))

    def col(self, j: int) -> tuple[Fraction, ...]:
        return tuple(row[j] for row in self.data)

    def columns(self) -> list[tuple[Fraction, ...]]:
        return [self.col(j) for j in range(self.cols)]

    def __getitem__(self, r: int) -> tuple[Fraction, ...]:
        return self.data[r]

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Matrix)
            and self.rows == other.rows
            and self.cols == other.cols
            and self.data == other.data
        )

    def __hash__(self) -> int:
        return hash((self.rows, self.cols, self.data))

    def __repr__(self) -> str:
        body = "; ".join(" ".join(str(x) for x in row) for row in self.data)
        return f"Matrix({self.rows}x{self.cols}: {body})"

    def __add__(self, other: "Matrix") -> "Matrix":
        self._same_shape(other)
        return Matrix(
            [[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(self.data, other.data)],
            self.rows,
            self.cols,
        )

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._same_shape(other)
        return Matrix(
            [[a - b for a, b in zip(r1, r2)] for r1, r2 in zip(self.data, other.data)],
            self.rows,
            self.cols,
        )

    def __neg__(self) -> "Matrix":
        return self.scale(-ONE)

    def scale(self, c) -> "Matrix":
        c = q(c)
        return Matrix([[c * x for x in row] for row in self.data], self.rows, self.cols)

    def __mul__(self, other):
        if isinstance(other, Matrix):
            if self.cols != other.rows:
                raise ValueError(f"shape mismatch {self.rows}x{self.cols} * {other.rows}x{other.cols}")
            ocols = other.columns()
            return Matrix(
                [[_dot(row, c) for c in ocols] for row in self.data], self.rows, other.cols
            )
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def apply(self, vec: Sequence) -> tuple[Fraction, ...]:
        """Matrix-vector product; vec indexed like columns."""
        v = tuple(q(x) for x in vec)
        if len(v) != self.cols:
            raise ValueError("vector length mismatch")
        return tuple(_dot(row, v) for row in self.data)

    def transpose(self) -> "Matrix":
        return Matrix(
            [[self.data[r][c] for r in range(self.rows)] for c in range(self.cols)],
            self.cols,
            self.rows,
        )

    def is_zero(self) -> bool:
        return all(x == 0 for row in self.data for x in row)

    def is_identity(self) -> bool:
        return self.rows == self.cols and self == Matrix.identity(self.rows)

    def is_symmetric(self) -> bool:
        return self.rows == self.cols and all(
            self.data[r][c] == self.data[c][r] for r in range(self.rows) for c in range(r)
        )

    def power(self, k: int) -> "Matrix":
        if self.rows != self.cols:
            raise ValueError("power of a non-square matrix")
        out = Matrix.identity(self.rows)
        for _ in range(k):
            out = out * self
        return out

    def trace(self) -> Fraction:
        return sum((self.data[i][i] for i in range(min(self.rows, self.cols))), ZERO)

    def _same_shape(self, other: "Matrix") -> None:
        if self.rows != other.rows or self.cols != other.cols:
            raise ValueError("shape mismatch")


def _dot(u: Sequence[Fraction], v: Sequence[Fraction]) -> Fraction:
    return sum((a * b for a, b in zip(u, v) if a and b), ZERO)


def hstack(mats: Sequence[Matrix]) -> Matrix:
    rows = mats[0].rows
    if any(m.rows != rows for m in mats):
        raise ValueError("row count mismatch")
    return Matrix(
        [sum((list(m.data[r]) for m in mats), []) for r in range(rows)],
        rows,
        sum(m.cols for m in mats),
    )


def vstack(mats: Sequence[Matrix]) -> Matrix:
    cols = mats[0].cols
    if any(m.cols != cols for m in mats):
        raise ValueError("column count mismatch")
    return Matrix([row for m in mats for row in m.data], sum(m.rows for m in mats), cols)


def rref(m: Matrix) -> tuple[Matrix, tuple[int, ...], int]:
    """Reduced row-echelon form, pivot columns (ascending), and rank."""
    a = [list(row) for row in m.data]
    pivots: list[int] = []
    pr = 0
    for pc in range(m.cols):
        if pr >= m.rows:
            break
        row = next((r for r in range(pr, m.rows) if a[r][pc] != 0), None)
        if row is None:
            continue
        a[pr], a[row] = a[row], a[pr]
        inv = ONE / a[pr][pc]
        a[pr] = [x * inv for x in a[pr]]
        for r in range(m.rows):
            if r != pr and a[r][pc] != 0:
                f = a[r][pc]
                a[r] = [x - f * y for x, y in zip(a[r], a[pr])]
        pivots.append(pc)
        pr += 1
    return Matrix(a, m.rows, m.cols), tuple(pivots), len(pivots)


def rank(m: Matrix) -> int:
    return rref(m)[2]


def null_space(m: Matrix) -> Matrix:
    """Canonical kernel basis; columns satisfy m * v = 0 exactly.

    Basis vectors come from the RREF free-variable parametrization: each free
    column contributes the vector with a 1 there and the negated pivot-row
    entries above.
    """
    r, pivots, _ = rref(m)
    free = [c for c in range(m.cols) if c not in pivots]
    cols = []
    for f in free:
        v = [ZERO] * m.cols
        v[f] = ONE
        for prow, pcol in enumerate(pivots):
            v[pcol] = -r.data[prow][f]
        cols.append(v)
    return Matrix.from_cols(cols, m.cols)


def invert(m: Matrix) -> Matrix:
    """Exact inverse; raises SingularMatrixError when rank < n."""
    if m.rows != m.cols:
        raise ValueError("inverse of a non-square matrix")
    n = m.rows
    aug, pivots, rk = rref(hstack([m, Matrix.identity(n)]))
    if rk < n or any(p >= n for p in pivots):
        raise SingularMatrixError(f"matrix of rank {rk} < {n} is not invertible")
    return Matrix([row[n:] for row in aug.data], n, n)


def solve(m: Matrix, rhs: Sequence) -> tuple[Fraction, ...] | None:
    """One exact solution of m x = rhs with free variables set to 0, or None."""
    b = [q(x) for x in rhs]
    if len(b) != m.rows:
        raise ValueError("rhs length mismatch")
    aug, pivots, _ = rref(hstack([m, Matrix.from_cols([b], m.rows)]))
    if m.cols in pivots:
        return None
    x = [ZERO] * m.cols
    for prow, pcol in enumerate(pivots):
        x[pcol] = aug.data[prow][m.cols]
    return tuple(x)


@dataclass(frozen=True)
class Polynomial1:
    """Univariate polynomial, coefficients ascending by degree.

    Normalized so the leading coefficient is nonzero; the zero polynomial is
    the empty tuple.
    """

    coefficients: tuple[Fraction, ...]

    def __init__(self, coefficients: Iterable):
        cs = [q(c) for c in coefficients]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coefficients", tuple(cs))

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def is_zero(self) -> bool:
        return not self.coefficients

    def __call__(self, x) -> Fraction:
        x = q(x)
        acc = ZERO
        for c in reversed(self.coefficients):
            acc = acc * x + c
        return acc

    def monic(self) -> "Polynomial1":
        if self.is_zero():
            return self
        lead = self.coefficients[-1]
        return Polynomial1([c / lead for c in self.coefficients])

    def mul(self, other: "Polynomial1") -> "Polynomial1":
        if self.is_zero() or other.is_zero():
            return Polynomial1([])
        out = [ZERO] * (len(self.coefficients) + len(other.coefficients) - 1)
        for i, a in enumerate(self.coefficients):
            if a:
                for j, b in enumerate(other.coefficients):
                    out[i + j] += a * b
        return Polynomial1(out)

    def deflate(self, root) -> "Polynomial1 | None":
        """Divide by (x - root); None when root is not an exact root."""
        root = q(root)
        cs = self.coefficients
        if not cs:
            return None
        out = [ZERO] * (len(cs) - 1)
        acc = ZERO
        for i in range(len(cs) - 1, 0, -1):
            acc = cs[i] + acc * root
            out[i - 1] = acc
        if cs[0] + acc * root != 0:
            return None
        return Polynomial1(out)

    def eval_matrix(self, m: Matrix) -> Matrix:
        """Evaluate at a square matrix (Horner)."""
        acc = Matrix.zeros(m.rows, m.rows)
        for c in reversed(self.coefficients):
            acc = acc * m + Matrix.identity(m.rows).scale(c)
        return acc


def char_poly(m: Matrix) -> Polynomial1:
    """Monic characteristic polynomial via the Faddeev-LeVerrier recursion."""
    if m.rows != m.cols:
        raise ValueError("characteristic polynomial of a non-square matrix")
    n = m.rows
    if n == 0:
        return Polynomial1([ONE])
    coeffs = [ZERO] * (n + 1)
    coeffs[n] = ONE
    ak = m
    for k in range(1, n + 1):
        ck = -ak.trace() / k
        coeffs[n - k] = ck
        if k < n:
            ak = m * (ak + Matrix.identity(n).scale(ck))
    return Polynomial1(coeffs)


def _divisors(n: int) -> list[int]:
    n = abs(n)
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d != n // d:
                large.append(n // d)
        d += 1
    return small + large[::-1]


def _poly_gcd_q(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    """Monic gcd of two polynomials over Q (coefficients ascending)."""

    def norm(c):
        c = list(c)
        while c and c[-1] == 0:
            c.pop()
        return c

    a, b = norm(a), norm(b)
    while b:
        lead = b[-1]
        b = [x / lead for x in b]
        # a mod b
        r = list(a)
        while len(r) >= len(b) and r:
            f = r[-1]
            if f:
                off = len(r) - len(b)
                for i, bc in enumerate(b):
                    r[off + i] -= f * bc
            r.pop()
        a, b = b, norm(r)
    if a:
        lead = a[-1]
        a = [x / lead for x in a]
    return a


def _poly_gcd_modp(a: list[int], b: list[int], p: int) -> list[int]:
    def norm(c):
        c = [x % p for x in c]
        while c and c[-1] == 0:
            c.pop()
        return c

    a, b = norm(a), norm(b)
    while b:
        inv = pow(b[-1], -1, p)
        b = [x * inv % p for x in b]
        r = list(a)
        while len(r) >= len(b) and r:
            f = r[-1]
            if f:
                off = len(r) - len(b)
                for i, bc in enumerate(b):
                    r[off + i] = (r[off + i] - f * bc) % p
            r.pop()
        a, b = b, norm(r)
    return a


def _eval_int_mod(coeffs: list[int], x: int, mod: int) -> int:
    acc = 0
    for c in reversed(coeffs):
        acc = (acc * x + c) % mod
    return acc


def _next_prime(n: int) -> int:
    def is_prime(m):
        if m < 2:
            return False
        d = 2
        while d * d <= m:
            if m % d == 0:
                return False
            d += 1
        return True

    n += 1
    while not is_prime(n):
        n += 1
    return n


def _integer_roots_monic(g: list[int]) -> list[int]:
    """All integer roots of a monic integer polynomial (coefficients ascending).

    Small constant terms use divisor enumeration; otherwise roots are found by
    Hensel-lifting the roots of the squarefree part modulo a prime, which
    avoids factoring huge constant coefficients.
    """
    while g and g[-1] == 0:
        g.pop()
    if len(g) <= 1:
        return []
    if len(g) == 2:
        return [-g[0]] if g[1] == 1 else []
    if g[0] == 0:
        roots = set(_integer_roots_monic([c for c in g[1:]]))
        roots.add(0)
        return sorted(roots)
    if abs(g[0]) < 10**9:
        return sorted(
            r for d in _divisors(g[0]) for r in (d, -d) if _eval_poly_int(g, r) == 0
        )
    # squarefree part over Q, then one good prime
    gq = [Fraction(c) for c in g]
    dgq = [i * c for i, c in enumerate(gq)][1:]
    sf = _poly_gcd_q(gq, dgq)
    quot = _poly_div_exact(gq, sf)
    den = math.lcm(*(c.denominator for c in quot))
    gsf = [int(c * den) for c in quot]  # monic*den integer polynomial
    dgsf = [i * c for i, c in enumerate(gsf)][1:]
    p = 30011
    while True:
        p = _next_prime(p)
        if gsf[-1] % p == 0:
            continue
        if len(_poly_gcd_modp(gsf, dgsf, p)) <= 1:
            break
    residues = [r for r in range(p) if _eval_int_mod(gsf, r, p) == 0]
    if not residues:
        return []
    bound = 1 + max(abs(c) for c in g[:-1])
    out = []
    for r0 in residues:
        modulus = p
        r = r0
        while modulus <= 2 * bound:
            modulus *= modulus
            fr = _eval_int_mod(gsf, r, modulus)
            dfr = _eval_int_mod(dgsf, r, modulus)
            r = (r - fr * pow(dfr, -1, modulus)) % modulus
        cand = r if r <= modulus // 2 else r - modulus
        if _eval_poly_int(g, cand) == 0:
            out.append(cand)
    return sorted(set(out))


def _eval_poly_int(coeffs: list[int], x: int) -> int:
    acc = 0
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def _poly_div_exact(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    """Exact quotient a / b for polynomials over Q (b divides a)."""
    r = list(a)
    out = [ZERO] * (len(a) - len(b) + 1)
    inv = ONE / b[-1]
    while len(r) >= len(b) and r:
        f = r[-1] * inv
        off = len(r) - len(b)
        out[off] = f
        for i, bc in enumerate(b):
            r[off + i] -= f * bc
        r.pop()
        while r and r[-1] == 0 and len(r) >= len(b):
            r.pop()
    return out


def rational_roots(p: Polynomial1) -> tuple[tuple[tuple[Fraction, int], ...], Polynomial1]:
    """All rational roots with multiplicities, plus the monic rootless remainder.

    The polynomial is scaled to an integer one and monicized (y = lead * x), so
    rational roots correspond to integer roots of a monic integer polynomial;
    every returned root satisfies p(r) = 0 exactly and the remainder has no
    rational root.
    """
    if p.is_zero():
        raise ValueError("rational_roots of the zero polynomial")
    work = p.monic()
    roots: list[tuple[Fraction, int]] = []
    # Zero roots come from trailing low-order zero coefficients.
    zmult = 0
    while work.degree >= 1 and work.coefficients[0] == 0:
        work = Polynomial1(work.coefficients[1:])
        zmult += 1
    if zmult:
        roots.append((ZERO, zmult))
    if work.degree >= 1:
        den = math.lcm(*(c.denominator for c in work.coefficients))
        ints = [int(c * den) for c in work.coefficients]
        g = math.gcd(*ints)
        if g > 1:
            ints = [c // g for c in ints]
        lead = ints[-1]
        d = len(ints) - 1
        monic = [c * lead ** (d - 1 - i) for i, c in enumerate(ints[:-1])] + [1]
        for y in _integer_roots_monic(monic):
            cand = Fraction(y, lead)
            mult = 0
            while True:
                deflated = work.deflate(cand)
                if deflated is None:
                    break
                work = deflated
                mult += 1
            if mult:
                roots.append((cand, mult))
    roots.sort(key=lambda rm: rm[0])
    return tuple(roots), work.monic()
