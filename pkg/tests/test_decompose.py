import random
from fractions import Fraction as Q

import pytest

from casext import algebra as alg
from casext import decompose as dec
from casext import sampling
from casext.algebra import StructureTensor
from casext.errors import NotNilpotentError, UnclassifiableError
from casext.exactla import Matrix


def scrambled_sum(names, seed):
    rng = random.Random(seed)
    w = alg.direct_sum([alg.preset(nm) for nm in names])
    bc = sampling.random_basis_change(rng, w.n)
    return alg.change_basis(w, bc)


class TestCentroid:
    def test_contains_structure_matrices_and_identity(self):
        for name in ("truncpoly:2", "truncpoly-solvable:3"):
            w = alg.preset(name)
            basis = dec.centroid_basis(w)
            span_rows = [sum((list(b.data[r]) for r in range(w.n)), []) for b in basis]
            span = Matrix(span_rows)
            for m in alg.structure_matrices(w) + [Matrix.identity(w.n)]:
                flat = sum((list(m.data[r]) for r in range(w.n)), [])
                from casext.exactla import rank

                assert rank(Matrix(span_rows + [flat])) == rank(span)


class TestDecompose:
    def test_nilpotent_sum_recovered(self):
        w = scrambled_sum(["truncpoly-solvable:2", "truncpoly-solvable:1"], seed=5)
        d = dec.decompose_ideals(w)
        assert sorted(d.block_dims) == [1, 2]
        assert d.complete
        assert dec.reassemble(d) == w

    def test_irreducible_nilpotent_single_block(self):
        w = alg.preset("truncpoly-solvable:3")
        d = dec.decompose_ideals(w)
        assert d.block_dims == (3,)
        assert d.complete

    def test_zero_algebra_behavior(self):
        # Over the rationals the generic splitting element decides; frozen outcome
        # for the default seed.  Whatever the verdict, blocks must reassemble.
        w = StructureTensor(2, {})
        d = dec.decompose_ideals(w)
        assert sum(d.block_dims) == 2
        assert dec.reassemble(d) == w

    def test_mixed_sum(self):
        w = scrambled_sum(["truncpoly:1", "truncpoly-solvable:2"], seed=9)
        d = dec.decompose_ideals(w)
        assert sorted(d.block_dims) == [2, 2]
        assert dec.reassemble(d) == w
        assert all(alg.validate(b).valid for b in d.blocks)

    def test_three_blocks(self):
        w = scrambled_sum(["truncpoly:0", "truncpoly-solvable:2", "truncpoly:1"], seed=13)
        d = dec.decompose_ideals(w)
        assert sorted(d.block_dims) == [1, 2, 2]
        assert dec.reassemble(d) == w

    def test_rational_field_flagged_incomplete(self):
        # Q[x]/(x^2 - 2): no proper ideals over Q; irreducible factor obstructs
        w = StructureTensor(
            2, {(1, 1, 1): Q(1), (1, 2, 2): Q(1), (2, 1, 2): Q(1), (2, 2, 1): Q(2)}
        )
        d = dec.decompose_ideals(w)
        assert d.block_dims == (2,)
        assert not d.complete

    def test_blocks_are_ideals_in_moved_basis(self):
        w = scrambled_sum(["truncpoly:1", "truncpoly:0"], seed=21)
        d = dec.decompose_ideals(w)
        moved = alg.change_basis(w, d.basis_change)
        starts = []
        off = 0
        for dim in d.block_dims:
            starts.append((off, off + dim))
            off += dim
        for (i, j, k), v in moved.items():
            bi = next(t for t, (a, b) in enumerate(starts) if a < i <= b)
            bj = next(t for t, (a, b) in enumerate(starts) if a < j <= b)
            bk = next(t for t, (a, b) in enumerate(starts) if a < k <= b)
            if v:
                assert bi == bj == bk


class TestNilpotentFamily:
    def test_truncpoly_solvable(self):
        for n in (1, 2, 3, 5):
            assert dec.is_nilpotent_family(alg.preset(f"truncpoly-solvable:{n}"))

    def test_unital_not_nilpotent(self):
        assert not dec.is_nilpotent_family(alg.preset("truncpoly:2"))

    def test_zero_algebra(self):
        assert dec.is_nilpotent_family(StructureTensor(3, {}))


class TestCanonicalSolvableBasis:
    def test_already_canonical_identity_change(self):
        w = alg.preset("truncpoly-solvable:3")
        bc, out = dec.canonical_solvable_basis(w)
        assert bc.a.is_identity()
        assert out == w

    def test_scramble_recovers_support_condition(self):
        rng = random.Random(41)
        for n in (2, 3, 4):
            w = alg.preset(f"truncpoly-solvable:{n}")
            scr = alg.change_basis(w, sampling.random_basis_change(rng, n))
            _, out = dec.canonical_solvable_basis(scr)
            for (i, j, k), v in out.items():
                assert not v or k > max(i, j)
            assert alg.structure_matrix(out, n).is_zero()

    def test_idempotent(self):
        rng = random.Random(43)
        w = alg.change_basis(
            alg.preset("truncpoly-solvable:3"), sampling.random_basis_change(rng, 3)
        )
        _, out = dec.canonical_solvable_basis(w)
        bc2, out2 = dec.canonical_solvable_basis(out)
        assert bc2.a.is_identity()
        assert out2 == out

    def test_rejects_unital(self):
        with pytest.raises(NotNilpotentError):
            dec.canonical_solvable_basis(alg.preset("truncpoly:2"))


class TestClassify:
    def test_semisimple(self):
        c = dec.classify(alg.preset("truncpoly:2"))
        assert c.kind == "semisimple" and c.scale == 1

    def test_solvable(self):
        assert dec.classify(alg.preset("truncpoly-solvable:2")).kind == "solvable"

    def test_zero_algebra_solvable(self):
        assert dec.classify(StructureTensor(2, {})).kind == "solvable"

    def test_unclassifiable_mixture(self):
        w = alg.direct_sum([alg.preset("truncpoly-solvable:2"), alg.preset("truncpoly:0")])
        with pytest.raises(UnclassifiableError):
            dec.classify(w)
