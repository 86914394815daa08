import random
from fractions import Fraction

import pytest
from hypothesis import given

from ratmap import errors
from ratmap.cdga import (INFINITY, connectivity, differential_length, nilpotency, power_ideal,
                         split_basis, subquotient, validate_finite, validate_free)
from ratmap.gca import FreeAlgebra
from ratmap.library import (contractible_pair, cp, random_finite_algebra, random_rebase,
                            sphere_model, sphere_product, trivial_products, with_acyclic)

from conftest import seeds


# -- free models ------------------------------------------------------------------

def test_sphere_model_invariants():
    s8 = sphere_model(8)
    assert s8.minimal
    assert differential_length(s8) == 2
    assert connectivity(s8) == 7
    assert differential_length(sphere_model(5)) == INFINITY


def test_free_validation_errors():
    R = FreeAlgebra([("x", 2), ("y", 4)])
    with pytest.raises(errors.DegreeMismatch):
        validate_free(R.gens, {"y": R.gen("x") ** 2}, ring=R)
    Q = FreeAlgebra([("x", 3), ("y", 4)])
    with pytest.raises(errors.NotTriangular):
        validate_free(Q.gens, {"x": Q.gen("y")}, ring=Q)
    with pytest.raises(errors.NonPositiveDegreeGenerator):
        validate_free([("t", 0)], {})
    # d(z) = xy with dy = x^2 gives d^2 z = -x^3 != 0
    T = FreeAlgebra([("x", 2), ("y", 3), ("z", 4)])
    x, y = T.gen("x"), T.gen("y")
    with pytest.raises(errors.NotSquareZero):
        validate_free(T.gens, {"y": x * x, "z": x * y}, ring=T)


def test_non_minimal_rejected_by_dl():
    R = FreeAlgebra([("x", 3), ("y", 2)])
    m = validate_free(R.gens, {"y": R.gen("x")}, ring=R)
    assert not m.minimal
    with pytest.raises(errors.NotMinimal):
        differential_length(m)


# -- finite algebras ----------------------------------------------------------------

def test_finite_validation_errors():
    with pytest.raises(errors.NoUnit):
        validate_finite([("a", 0), ("b", 2)])
    with pytest.raises(errors.NotGradedCommutative):
        validate_finite([("a", 1), ("c", 2)], {("a", "a"): "c"})
    with pytest.raises(errors.NotGradedCommutative):
        validate_finite([("a", 1), ("b", 1), ("c", 2)], {("a", "b"): "c", ("b", "a"): "c"})
    with pytest.raises(errors.DegreeMismatch):
        validate_finite([("a", 2), ("b", 3)], {("a", "a"): "b"})
    with pytest.raises(errors.UnknownIdentifier):
        validate_finite([("a", 2)], {("a", "q"): "a"})
    with pytest.raises(errors.NotAssociative):
        validate_finite([("x", 2), ("y", 2), ("z", 4), ("w", 6)],
                        {("x", "x"): "z", ("y", "z"): "w"})
    with pytest.raises(errors.LeibnizFailure):
        validate_finite([("e", 1), ("b", 2), ("c", 3), ("f", 4)],
                        {("e", "b"): "c", ("b", "b"): "f"}, {"e": "b"})
    with pytest.raises(errors.NotSquareZero):
        validate_finite([("e", 1), ("b", 2), ("c", 3)], diff={"e": "b", "b": "c"})


def test_one_sided_product_is_completed():
    a = validate_finite([("a", 1), ("b", 3), ("c", 4)], {("a", "b"): "c"})
    i, j, k = a.index["a"], a.index["b"], a.index["c"]
    assert a.basis_product(j, i) == {k: -1}


def test_nilpotency_and_power_ideals():
    assert nilpotency(cp(3)) == 3
    assert nilpotency(sphere_product(5, 11)) == 2
    assert nilpotency(trivial_products([3, 3, 8])) == 1
    alg = cp(3)
    dims = [{n: len(v) for n, v in power_ideal(alg, k).items() if v} for k in (1, 2, 3, 4)]
    assert dims == [{2: 1, 4: 1, 6: 1}, {4: 1, 6: 1}, {6: 1}, {}]
    with pytest.raises(errors.InvalidParameter):
        power_ideal(alg, 0)


def test_nilpotency_brute_force():
    # longest nonzero product of basis elements, searched exhaustively
    for alg in (cp(3), sphere_product(2, 3, 4), with_acyclic(cp(2), 1)):
        best = 0
        layer = {(): {0: Fraction(1)}}
        for length in range(1, 8):
            nxt = {}
            for word, v in layer.items():
                for i in alg.positive:
                    w = alg.mul(v, {i: Fraction(1)})
                    if w:
                        nxt[word + (i,)] = w
            if not nxt:
                break
            best, layer = length, nxt
        assert nilpotency(alg) == best


# -- basis split ----------------------------------------------------------------------

def _check_split(alg):
    sp = split_basis(alg)
    sa = sp.algebra
    assert len(sa) == len(alg)
    for i in sa.positive:
        if sp.kinds[i] in ("h", "b"):
            assert not sa.d({i: Fraction(1)})
    for b, e in sp.partner.items():
        assert sa.d({e: Fraction(1)}) == {b: 1}
    assert sorted(sp.partner.values()) == sorted(i for i, k in sp.kinds.items() if k == "e")
    return sp


def test_split_of_contractible_pair():
    sp = _check_split(contractible_pair(2))
    assert sorted(sp.kinds.values()) == ["b", "e"]


@given(seeds)
def test_split_invariants_on_random_algebras(seed):
    rng = random.Random(seed)
    alg = random_rebase(random_finite_algebra(rng, 7), rng)
    _check_split(alg)


def test_subquotient_of_cp3():
    alg = cp(3)
    whole = {2: [{1: Fraction(1)}], 4: [{2: Fraction(1)}], 6: [{3: Fraction(1)}]}
    q = subquotient(alg, whole, power_ideal(alg, 2), "Q")
    assert [d for d in q.degrees] == [0, 2]
    f = subquotient(alg, power_ideal(alg, 2), power_ideal(alg, 3), "F")
    assert list(f.degrees) == [0, 4]
    assert not f.mul_table
