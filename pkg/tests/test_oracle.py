import random
from fractions import Fraction as Q

import pytest

from casext import algebra as alg
from casext import casimir as cas
from casext import oracle as orc
from casext import sampling
from casext.algebra import StructureTensor
from casext.exactla import Matrix
from casext.oracle import PoissonPolynomial as P

SL2 = orc.preset_sl2()
NIL2 = StructureTensor(2, {(1, 1, 2): Q(1)})

H = (Q(1), Q(0), Q(0))
E = (Q(0), Q(1), Q(0))
F = (Q(0), Q(0), Q(1))


def so3():
    return orc.make_lie_preset(
        3, {(1, 2, 3): Q(1), (2, 3, 1): Q(1), (3, 1, 2): Q(1)}, name="so3"
    )


class TestPresets:
    def test_killing_values(self):
        assert SL2.killing.data[0][0] == 8  # K(h, h) from the trace definition
        assert SL2.killing.data[1][1] == 0  # K(e, e)
        assert SL2.killing == Matrix([[8, 0, 0], [0, 0, 4], [0, 4, 0]])

    def test_killing_inverse_exact(self):
        assert SL2.killing * SL2.killing_inv == Matrix.identity(3)

    def test_invariance_enforced(self):
        # K([x,y],z) + K(y,[x,z]) = 0 is asserted during construction
        assert orc.make_lie_preset(3, SL2.c).killing == SL2.killing

    def test_antisymmetry_completion(self):
        L = orc.make_lie_preset(3, {(1, 2, 2): Q(2), (1, 3, 3): Q(-2), (2, 3, 1): Q(1)})
        assert L.bracket_entry(2, 1, 2) == -2

    def test_jacobi_rejected(self):
        with pytest.raises(ValueError):
            orc.make_lie_preset(3, {(1, 2, 3): Q(1), (1, 3, 2): Q(1), (2, 3, 1): Q(1)})

    def test_degenerate_killing_rejected(self):
        # 2-dim solvable algebra [x1, x2] = x2 has degenerate Killing form
        with pytest.raises(ValueError):
            orc.make_lie_preset(2, {(1, 2, 2): Q(1)})

    def test_so3_loads(self):
        L = so3()
        assert L.killing == Matrix.identity(3).scale(-2)

    def test_json_round_trip(self):
        L2 = orc.lie_from_json(orc.lie_to_json(SL2))
        assert L2.c == SL2.c and L2.killing == SL2.killing


class TestExtensionBracket:
    def test_e_with_e_vanishes(self):
        x = (E, (Q(0),) * 3)
        assert orc.extension_bracket(NIL2, SL2, x, x) == ((Q(0),) * 3, (Q(0),) * 3)

    def test_h_with_e(self):
        x = (H, (Q(0),) * 3)
        y = (E, (Q(0),) * 3)
        got = orc.extension_bracket(NIL2, SL2, x, y)
        assert got == ((Q(0),) * 3, (Q(0), Q(2), Q(0)))  # (0, 2e)

    def test_antisymmetry(self):
        rng = random.Random(3)
        for _ in range(10):
            x = tuple(sampling.random_element(rng, 3) for _ in range(2))
            y = tuple(sampling.random_element(rng, 3) for _ in range(2))
            xy = orc.extension_bracket(NIL2, SL2, x, y)
            yx = orc.extension_bracket(NIL2, SL2, y, x)
            assert xy == tuple(tuple(-v for v in row) for row in yx)


class TestJacobi:
    def test_valid_tensor_passes(self):
        ok, witness = orc.jacobi_check(NIL2, SL2)
        assert ok and witness is None

    def test_zero_tensor_passes(self):
        ok, _ = orc.jacobi_check(StructureTensor(2, {}), SL2)
        assert ok

    def test_noncommuting_fails_with_witness(self):
        w = StructureTensor(2, {(1, 1, 2): Q(1), (2, 2, 1): Q(1)})
        assert not alg.validate(w).commuting
        ok, witness = orc.jacobi_check(w, SL2)
        assert not ok and witness is not None

    def test_scrambled_presets_pass(self):
        rng = random.Random(7)
        for _ in range(5):
            w = sampling.random_validated_tensor(rng, rng.randint(1, 3))
            ok, _ = orc.jacobi_check(w, SL2)
            assert ok


class TestPoissonBracket:
    def test_coordinate_table(self):
        f = P.variable(2, 3, 1, 1)  # xi^1_h
        g = P.variable(2, 3, 1, 2)  # xi^1_e
        got = orc.poisson_bracket(NIL2, SL2, f, g)
        assert got == P.variable(2, 3, 2, 2).scale(2)  # 2 xi^2_e

    def test_second_slot_central(self):
        for a in range(1, 4):
            for b in range(1, 4):
                f = P.variable(2, 3, 2, a)
                g = P.variable(2, 3, 2, b)
                assert orc.poisson_bracket(NIL2, SL2, f, g).is_zero()

    def test_self_bracket_vanishes(self):
        rng = random.Random(11)
        f = _random_poly(rng, 2, 3)
        assert orc.poisson_bracket(NIL2, SL2, f, f).is_zero()

    def test_antisymmetry_and_leibniz(self):
        rng = random.Random(13)
        f, g, h = (_random_poly(rng, 2, 3) for _ in range(3))
        br = lambda a, b: orc.poisson_bracket(NIL2, SL2, a, b)
        assert br(f, g) == br(g, f).scale(-1)
        assert br(f, g * h) == br(f, g) * h + g * br(f, h)

    def test_jacobi_identity(self):
        rng = random.Random(17)
        f, g, h = (_random_poly(rng, 2, 3, deg=1) for _ in range(3))
        br = lambda a, b: orc.poisson_bracket(NIL2, SL2, a, b)
        total = br(f, br(g, h)) + br(g, br(h, f)) + br(h, br(f, g))
        assert total.is_zero()


def _random_poly(rng, n, m, deg=2):
    terms = {}
    for _ in range(4):
        mono = tuple(
            sorted((rng.randint(1, n), rng.randint(1, m)) for _ in range(rng.randint(0, deg)))
        )
        terms[mono] = Q(rng.randint(-3, 3))
    return P(n, m, terms)


class TestCasimirPolynomials:
    def test_linear_variables_restricted(self):
        poly = orc.casimir_poly_linear(SL2, (Q(0), Q(1)), H)
        assert poly.variables() == {(2, 1)}

    def test_linear_zero(self):
        assert orc.casimir_poly_linear(SL2, (Q(0), Q(0)), H).is_zero()

    def test_linear_in_y(self):
        p = (Q(0), Q(1))
        y1 = orc.casimir_poly_linear(SL2, p, H)
        y2 = orc.casimir_poly_linear(SL2, p, E)
        combined = orc.casimir_poly_linear(SL2, p, tuple(a + b for a, b in zip(H, E)))
        assert combined == y1 + y2

    def test_quadratic_zero(self):
        assert orc.casimir_poly_quadratic(SL2, Matrix.zeros(2, 2)).is_zero()

    def test_quadratic_sl2_classic(self):
        # n = 1 unital tensor realizes the Poisson-Lie structure on sl2* itself
        poly = orc.casimir_poly_quadratic(SL2, Matrix([[1]]))
        assert poly.terms == {
            (((1, 1), (1, 1))): Q(1, 16),
            (((1, 2), (1, 3))): Q(1, 4),
        }
        w1 = StructureTensor(1, {(1, 1, 1): Q(1)})
        ok, _ = orc.verify_casimir(w1, SL2, poly)
        assert ok

    def test_quadratic_symmetric_required(self):
        with pytest.raises(ValueError):
            orc.casimir_poly_quadratic(SL2, Matrix([[0, 1], [0, 0]]))


class TestVerifyCasimir:
    def test_linear_solutions_verify(self):
        for n in (2, 3, 4):
            w = alg.preset(f"truncpoly-solvable:{n}")
            for p in cas.linear_casimirs(w):
                for y in (H, E, F):
                    poly = orc.casimir_poly_linear(SL2, p, y)
                    ok, _ = orc.verify_casimir(w, SL2, poly)
                    assert ok

    def test_quadratic_solutions_verify(self):
        for name in ("truncpoly-solvable:2", "truncpoly-solvable:3", "truncpoly:2"):
            w = alg.preset(name)
            for c in cas.quadratic_casimirs(w):
                poly = orc.casimir_poly_quadratic(SL2, c)
                ok, _ = orc.verify_casimir(w, SL2, poly)
                assert ok

    def test_non_solution_fails_with_witness(self):
        w = alg.preset("truncpoly-solvable:2")
        basis = cas.quadratic_casimirs(w)
        rng = random.Random(19)
        c = sampling.random_quadratic_outsider(rng, w, basis)
        poly = orc.casimir_poly_quadratic(SL2, c)
        ok, witness = orc.verify_casimir(w, SL2, poly)
        assert not ok and witness is not None

    def test_bracket_with_random_polynomial_vanishes(self):
        rng = random.Random(23)
        w = alg.preset("truncpoly-solvable:2")
        c = cas.quadratic_casimirs(w)[0]
        poly = orc.casimir_poly_quadratic(SL2, c)
        for _ in range(3):
            g = _random_poly(rng, 2, 3)
            assert orc.poisson_bracket(w, SL2, poly, g).is_zero()

    def test_so3_verdicts_match(self):
        L = so3()
        w = alg.preset("truncpoly-solvable:2")
        for c in cas.quadratic_casimirs(w):
            ok، = orc.verify_casimir(w, L, orc.casimir_poly_quadratic(L, c))
            assert ok،[0]
