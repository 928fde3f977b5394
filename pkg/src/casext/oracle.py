"""Brute-force ground truth over a concrete semisimple Lie algebra.

The extension bracket is realized on n copies of a Lie algebra given by
structure constants c_{ab}^d ([x_a, x_b] = sum_d c_{ab}^d x_d), the Jacobi
identity is checked exhaustively on basis triples, and candidate Casimirs are
verified by expanding the Poisson bracket on the dual symbolically.

Polynomial conventions: variables are the canonical dual coordinates
xi^i_a = <x_a, xi^i> with i the extension index (1..n) and a the Lie index
(1..m).  The coordinate bracket is

    {xi^i_a, xi^j_b} = sum_{k,d} W^{ij}_k c_{ab}^d xi^k_d

extended by bilinearity and Leibniz.  Degree-1 candidates expand through the
canonical pairing; degree-2 ones use the exact inverse of the Killing form,
which is computed from the trace definition and checked for invariance and
nondegeneracy when a preset is built.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .algebra import StructureTensor
from .errors import SingularMatrixError
from .exactla import Matrix, ONE, ZERO, invert, q

Monomial = tuple[tuple[int, int], ...]  # sorted variable ids (i, a), repeats allowed


@dataclass(frozen=True)
class LiePreset:
    dim: int
    c: Mapping[tuple[int, int, int], Fraction]  # (a, b, d) -> c_{ab}^d
    killing: Matrix
    killing_inv: Matrix
    name: str = ""

    def bracket_entry(self, a: int, b: int, d: int) -> Fraction:
        return self.c.get((a, b, d), ZERO)


def ad_matrix(L_dim: int, c: Mapping, a: int) -> Matrix:
    """Matrix of ad_{x_a}: column b holds the coordinates of [x_a, x_b]."""
    rows = [[ZERO] * L_dim for _ in range(L_dim)]
    for (aa, b, d), v in c.items():
        if aa == a:
            rows[d - 1][b - 1] = v
    return Matrix(rows, L_dim, L_dim)


def make_lie_preset(dim: int, brackets: Mapping[tuple[int, int, int], Fraction] | Iterable,
                    name: str = "") -> LiePreset:
    """Validate structure constants and compute the Killing data.

    Missing mirrored entries (b, a, d) are completed antisymmetrically;
    conflicting explicit mirrors, Jacobi failures, and a degenerate Killing
    form are rejected.
    """
    items = brackets.items() if isinstance(brackets, Mapping) else brackets
    c: dict[tuple[int, int, int], Fraction] = {}
    for (a, b, d), v in items:
        if not all(1 <= t <= dim for t in (a, b, d)):
            raise ValueError(f"bracket index ({a},{b},{d}) out of range 1..{dim}")
        v = q(v)
        if v:
            c[(a, b, d)] = v
    for (a, b, d), v in list(c.items()):
        mirror = c.get((b, a, d))
        if mirror is None:
            if a == b:
                raise ValueError(f"[x_{a}, x_{a}] must vanish")
            c[(b, a, d)] = -v
        elif mirror != -v:
            raise ValueError(f"bracket constants not antisymmetric at ({a},{b},{d})")
    ads = [ad_matrix(dim, c, a) for a in range(1, dim + 1)]
    # Jacobi on basis triples: ad_[a,b] = [ad_a, ad_b]
    for a in range(1, dim + 1):
        for b in range(a + 1, dim + 1):
            lhs = ads[a - 1] * ads[b - 1] - ads[b - 1] * ads[a - 1]
            rhs = Matrix.zeros(dim, dim)
            for d in range(1, dim + 1):
                v = c.get((a, b, d), ZERO)
                if v:
                    rhs = rhs + ads[d - 1].scale(v)
            if lhs != rhs:
                raise ValueError(f"Jacobi identity fails on basis pair ({a},{b})")
    killing = Matrix(
        [[(ads[a] * ads[b]).trace() for b in range(dim)] for a in range(dim)], dim, dim
    )
    try:
        killing_inv = invert(killing)
    except SingularMatrixError as exc:
        raise ValueError("Killing form is degenerate; need a semisimple algebra") from exc
    # invariance K([x,y],z) + K(y,[x,z]) = 0 on all basis triples
    for x in range(1, dim + 1):
        for y in range(1, dim + 1):
            for z in range(1, dim + 1):
                t1 = sum(
                    (c.get((x, y, d), ZERO) * killing.data[d - 1][z - 1] for d in range(1, dim + 1)),
                    ZERO,
                )
                t2 = sum(
                    (c.get((x, z, d), ZERO) * killing.data[y - 1][d - 1] for d in range(1, dim + 1)),
                    ZERO,
                )
                if t1 + t2 != 0:
                    raise AssertionError("Killing form is not invariant")
    return LiePreset(dim, c, killing, killing_inv, name)


def preset_sl2() -> LiePreset:
    """Basis (h, e, f): [h,e] = 2e, [h,f] = -2f, [e,f] = h."""
    return make_lie_preset(
        3,
        {
            (1, 2, 2): Fraction(2),
            (1, 3, 3): Fraction(-2),
            (2, 3, 1): Fraction(1),
        },
        name="sl2",
    )


def lie_to_json(L: LiePreset) -> dict:
    return {
        "dim": L.dim,
        "brackets": [
            {"a": a, "b": b, "d": d, "v": str(v)}
            for (a, b, d), v in sorted(L.c.items())
            if a < b
        ],
    }


def lie_from_json(obj: dict) -> LiePreset:
    brackets = {
        (int(e["a"]), int(e["b"]), int(e["d"])): q(e["v"]) for e in obj.get("brackets", [])
    }
    return LiePreset(0, {}, Matrix.zeros(0, 0), Matrix.zeros(0, 0)) if not obj else make_lie_preset(
        int(obj["dim"]), brackets, name=obj.get("name", "")
    )


def load_lie(path: str) -> LiePreset:
    with open(path, "r", encoding="utf-8") as fh:
        return lie_from_json(json.load(fh))


def lie_bracket(L: LiePreset, u: Sequence, v: Sequence) -> tuple[Fraction, ...]:
    out = [ZERO] * L.dim
    for (a, b, d), cv in L.c.items():
        ua, vb = u[a - 1], v[b - 1]
        if ua and vb:
            out[d - 1] += cv * ua * vb
    return tuple(out)


def extension_bracket(w: StructureTensor, L: LiePreset, x, y):
    """Component s of the bracket is sum_{i,j} W^{ij}_s [x_i, y_j]."""
    if len(x) != w.n or len(y) != w.n:
        raise ValueError("extension elements need n Lie coordinate vectors")
    if any(len(c) != L.dim for c in list(x) + list(y)):
        raise ValueError("Lie coordinate vectors have wrong length")
    out = [[ZERO] * L.dim for _ in range(w.n)]
    for (i, j, s), v in w.items():
        br = lie_bracket(L, x[i - 1], y[j - 1])
        row = out[s - 1]
        for t in range(L.dim):
            if br[t]:
                row[t] += v * br[t]
    return tuple(tuple(row) for row in out)


def jacobi_check(w: StructureTensor, L: LiePreset):
    """Exhaustive Jacobi test on basis triples of the n*m dimensional extension.

    Returns (True, None) or (False, witness) with the first failing triple
    as ((i,a), (j,b), (k,c)) in 1-based labels.
    """
    n, m = w.n, L.dim
    basis = []
    for i in range(1, n + 1):
        for a in range(1, m + 1):
            el = tuple(
                tuple(ONE if (t == i and s == a) else ZERO for s in range(1, m + 1))
                for t in range(1, n + 1)
            )
            basis.append(((i, a), el))
    zero = tuple(tuple(ZERO for _ in range(m)) for _ in range(n))

    def add(p, r):
        return tuple(tuple(x + y for x, y in zip(pr, rr)) for pr, rr in zip(p, r))

    for t1 in range(len(basis)):
        for t2 in range(t1 + 1, len(basis)):
            for t3 in range(t2 + 1, len(basis)):
                (l1, e1), (l2, e2), (l3, e3) = basis[t1], basis[t2], basis[t3]
                acc = extension_bracket(w, L, extension_bracket(w, L, e1, e2), e3)
                acc = add(acc, extension_bracket(w, L, extension_bracket(w, L, e2, e3), e1))
                acc = add(acc, extension_bracket(w, L, extension_bracket(w, L, e3, e1), e2))
                if acc != zero:
                    return False, (l1, l2, l3)
    return True, None


class PoissonPolynomial:
    """Sparse polynomial in the dual coordinates xi^i_a."""

    __slots__ = ("n", "m", "terms")

    def __init__(self, n: int, m: int, terms: Mapping[Monomial, Fraction] | None = None):
        clean: dict[Monomial, Fraction] = {}
        for mono, coeff in (terms or {}).items():
            coeff = q(coeff)
            if coeff:
                clean[tuple(sorted(mono))] = clean.get(tuple(sorted(mono)), ZERO) + coeff
        clean = {mo: co for mo, co in clean.items() if co}
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, name, value):
        raise AttributeError("PoissonPolynomial is immutable")

    @staticmethod
    def variable(n: int, m: int, i: int, a: int) -> "PoissonPolynomial":
        if not (1 <= i <= n and 1 <= a <= m):
            raise ValueError(f"variable ({i},{a}) out of range")
        return PoissonPolynomial(n, m, {((i, a),): ONE})

    @staticmethod
    def zero(n: int, m: int) -> "PoissonPolynomial":
        return PoissonPolynomial(n, m, {})

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, PoissonPolynomial)
            and (self.n, self.m) == (other.n, other.m)
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.n, self.m, tuple(sorted(self.terms.items()))))

    def __add__(self, other: "PoissonPolynomial") -> "PoissonPolynomial":
        self._check(other)
        out = dict(self.terms)
        for mono, coeff in other.terms.items():
            out[mono] = out.get(mono, ZERO) + coeff
        return PoissonPolynomial(self.n, self.m, out)

    def __sub__(self, other: "PoissonPolynomial") -> "PoissonPolynomial":
        return self + other.scale(-ONE)

    def scale(self, c) -> "PoissonPolynomial":
        c = q(c)
        return PoissonPolynomial(self.n, self.m, {mo: c * co for mo, co in self.terms.items()})

    def __mul__(self, other: "PoissonPolynomial") -> "PoissonPolynomial":
        self._check(other)
        out: dict[Monomial, Fraction] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                mono = tuple(sorted(m1 + m2))
                out[mono] = out.get(mono, ZERO) + c1 * c2
        return PoissonPolynomial(self.n, self.m, out)

    def diff(self, var: tuple[int, int]) -> "PoissonPolynomial":
        out: dict[Monomial, Fraction] = {}
        for mono, coeff in self.terms.items():
            cnt = mono.count(var)
            if not cnt:
                continue
            reduced = list(mono)
            reduced.remove(var)
            key = tuple(reduced)
            out[key] = out.get(key, ZERO) + coeff * cnt
        return PoissonPolynomial(self.n, self.m, out)

    def variables(self) -> set[tuple[int, int]]:
        return {v for mono in self.terms for v in mono}

    def degree(self) -> int:
        return max((len(mono) for mono in self.terms), default=0)

    def _check(self, other: "PoissonPolynomial") -> None:
        if (self.n, self.m) != (other.n, other.m):
            raise ValueError("polynomials live on different spaces")

    def __repr__(self):
        if self.is_zero():
            return "0"
        bits = []
        for mono, coeff in sorted(self.terms.items()):
            vs = "*".join(f"xi{i}_{a}" for i, a in mono) or "1"
            bits.append(f"{coeff}*{vs}")
        return " + ".join(bits)


def poisson_bracket(w: StructureTensor, L: LiePreset, F: PoissonPolynomial,
                    G: PoissonPolynomial) -> PoissonPolynomial:
    """{F, G} via the coordinate table and the Leibniz rule."""
    n, m = w.n, L.dim
    if (F.n, F.m) != (n, m) or (G.n, G.m) != (n, m):
        raise ValueError("polynomial dimensions do not match the tensors")
    out = PoissonPolynomial.zero(n, m)
    fvars = F.variables()
    gvars = G.variables()
    for i, a in fvars:
        dF = F.diff((i, a))
        if dF.is_zero():
            continue
        for j, b in gvars:
            dG = G.diff((j, b))
            if dG.is_zero():
                continue
            table = PoissonPolynomial(n, m, {
                ((k, d),): w.entry(i, j, k) * L.bracket_entry(a, b, d)
                for k in range(1, n + 1)
                for d in range(1, m + 1)
                if w.entry(i, j, k) and L.bracket_entry(a, b, d)
            })
            if table.is_zero():
                continue
            out = out + dF * dG * table
    return out


def casimir_poly_linear(L: LiePreset, p: Sequence, y: Sequence) -> PoissonPolynomial:
    """Degree-1 candidate sum_{i,a} p_i y^a xi^i_a (canonical pairing)."""
    n = len(p)
    terms = {}
    for i in range(1, n + 1):
        pi = q(p[i - 1])
        if not pi:
            continue
        for a in range(1, L.dim + 1):
            ya = q(y[a - 1])
            if ya:
                terms[((i, a),)] = pi * ya
    return PoissonPolynomial(n, L.dim, terms)


def casimir_poly_quadratic(L: LiePreset, c: Matrix) -> PoissonPolynomial:
    """Degree-2 candidate (1/2) sum C_{ij} (K^{-1})^{ab} xi^i_a xi^j_b."""
    n = c.rows
    if not c.is_symmetric():
        raise ValueError("coefficient matrix must be symmetric")
    terms: dict[Monomial, Fraction] = {}
    half = Fraction(1, 2)
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            cij = c.data[i - 1][j - 1]
            if not cij:
                continue
            for a in range(1, L.dim + 1):
                for b in range(1, L.dim + 1):
                    kab = L.killing_inv.data[a - 1][b - 1]
                    if not kab:
                        continue
                    mono = tuple(sorted(((i, a), (j, b))))
                    terms[mono] = terms.get(mono, ZERO) + half * cij * kab
    return PoissonPolynomial(n, L.dim, terms)


def verify_casimir(w: StructureTensor, L: LiePreset, C: PoissonPolynomial):
    """True iff {C, xi^j_b} vanishes identically for every coordinate.

    Vanishing against all coordinates extends to all polynomials by the
    Leibniz rule.  Returns (flag, first failing coordinate or None).
    """
    for j in range(1, w.n + 1):
        for b in range(1, L.dim + 1):
            g = PoissonPolynomial.variable(w.n, L.dim, j, b)
            if not poisson_bracket(w, L, C, g).is_zero():
                return False, (j, b)
    return True, None
