import random
from fractions import Fraction as Q

import pytest

from casext import algebra as alg
from casext import casimir as cas
from casext import sampling
from casext.algebra import StructureTensor
from casext.errors import NotCommonEigenvectorError
from casext.exactla import Matrix, rank


def span_rows(forms, n):
    return [sum((list(f.data[r]) for r in range(n)), []) for f in forms]


def same_span(forms_a, forms_b, n):
    ra = span_rows(forms_a, n)
    rb = span_rows(forms_b, n)
    if not ra and not rb:
        return True
    da = rank(Matrix(ra)) if ra else 0
    db = rank(Matrix(rb)) if rb else 0
    dab = rank(Matrix(ra + rb)) if ra + rb else 0
    return da == db == dab


class TestLinear:
    def test_solvable_generator(self):
        w = alg.preset("truncpoly-solvable:2")
        assert cas.linear_casimirs(w) == [(Q(0), Q(1))]

    def test_unital_empty(self):
        for n in (0, 1, 2, 4):
            assert cas.linear_casimirs(alg.preset(f"truncpoly:{n}")) == []

    def test_zero_algebra_full(self):
        got = cas.linear_casimirs(StructureTensor(3, {}))
        assert len(got) == 3

    def test_matches_annihilator(self):
        rng = random.Random(61)
        for _ in range(10):
            w = sampling.random_validated_tensor(rng, rng.randint(1, 4))
            assert cas.linear_casimirs(w) == alg.annihilator(w).columns()

    def test_resubstitution(self):
        for n in range(2, 7):
            w = alg.preset(f"truncpoly-solvable:{n}")
            for p in cas.linear_casimirs(w):
                assert cas.is_linear_casimir(w, p)


class TestQuadratic:
    def test_solvable_generator_dimension_two(self):
        # hand elimination: C_11 = 0; C_12 and C_22 free
        w = alg.preset("truncpoly-solvable:2")
        basis = cas.quadratic_casimirs(w)
        assert len(basis) == 2
        for c in basis:
            assert c.data[0][0] == 0
        assert same_span(basis, [Matrix([[0, 1], [1, 0]]), Matrix([[0, 0], [0, 1]])], 2)

    def test_zero_algebra_all_symmetric(self):
        w = StructureTensor(3, {})
        assert len(cas.quadratic_casimirs(w)) == 6  # n(n+1)/2

    def test_outputs_satisfy_equations(self):
        rng = random.Random(67)
        for _ in range(8):
            w = sampling.random_validated_tensor(rng, rng.randint(1, 4))
            for c in cas.quadratic_casimirs(w):
                assert cas.is_quadratic_casimir(w, c)

    def test_two_encodings_agree(self):
        rng = random.Random(71)
        from casext.exactla import null_space

        for _ in range(8):
            w = sampling.random_validated_tensor(rng, rng.randint(1, 4))
            a = null_space(cas.quadratic_system(w)).columns()
            b = null_space(cas.invariance_system(w)).columns()
            assert a == b

    def test_equivariance_dimensions_and_spaces(self):
        rng = random.Random(73)
        w = alg.preset("truncpoly-solvable:3")
        base = cas.quadratic_casimirs(w)
        for _ in range(6):
            bc = sampling.random_basis_change(rng, 3)
            w2 = alg.change_basis(w, bc)
            moved = cas.quadratic_casimirs(w2)
            assert len(moved) == len(base)
            # C transforms twice-covariantly: C' = R C R^T with R = (a^{-1})^T
            r_mat = bc.a_inv.transpose()
            pushed = [r_mat * c * r_mat.transpose() for c in base]
            assert same_span(moved, pushed, 3)
            # linear Casimirs transform like elements
            lin = cas.linear_casimirs(w2)
            assert len(lin) == len(cas.linear_casimirs(w))

    def test_truncpoly2_dimension(self):
        # derived by hand: c00=c01=0, c11=c02, three free parameters
        basis = cas.quadratic_casimirs(alg.preset("truncpoly:2"))
        assert len(basis) == 3
        for c in basis:
            assert c.data[0][0] == 0 and c.data[0][1] == 0
            assert c.data[1][1] == c.data[0][2]


class TestRankOne:
    def test_solvable_generator(self):
        w = alg.preset("truncpoly-solvable:2")
        c = cas.rank_one_casimir(w, (0, 1))
        assert c == Matrix([[0, 0], [0, 1]])

    def test_scaling_quadratic(self):
        w = alg.preset("truncpoly-solvable:2")
        c = cas.rank_one_casimir(w, (0, 3))
        assert c == Matrix([[0, 0], [0, 9]])

    def test_non_eigenvector_rejected(self):
        w = alg.preset("truncpoly-solvable:2")
        with pytest.raises(NotCommonEigenvectorError):
            cas.rank_one_casimir(w, (1, 0))

    def test_lies_in_quadratic_span(self):
        for name in ("truncpoly-solvable:2", "truncpoly-solvable:4", "truncpoly:2"):
            w = alg.preset(name)
            basis = cas.quadratic_casimirs(w)
            for v, _lam in alg.common_eigenvectors(w):
                c = cas.rank_one_casimir(w, v)
                assert same_span(basis, basis + [c], w.n)
