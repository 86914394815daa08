import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given

from ratmap.cdga import FiniteAlgebra, FreeModel
from ratmap.cohomology import cohomology, cup_length, freeness_check
from ratmap.library import (cp, free_product, heisenberg_model, minimal_models, random_finite_algebra,
                            random_rebase, sphere_cohomology, sphere_model, sphere_product,
                            trivial_products, with_acyclic)

from conftest import seeds


def _dense_betti(obj, N):
    """Betti numbers from sympy ranks of the dense differential matrices."""
    def basis(n):
        if isinstance(obj, FreeModel):
            return obj.ring.basis(n) if n >= 0 else []
        return obj.in_degree(n)

    def matrix(n):
        src, tgt = basis(n), basis(n + 1)
        pos = {m: i for i, m in enumerate(tgt)}
        rows = [[0] * len(src) for _ in tgt]
        for j, m in enumerate(src):
            if isinstance(obj, FreeModel):
                img = obj.d.on_monomial(m).terms
            else:
                img = obj.d({m: Fraction(1)})
            for t, c in img.items():
                rows[pos[t]][j] = c
        return sympy.Matrix(len(tgt), len(src), lambda i, j: rows[i][j])

    def rk(n):
        M = matrix(n)
        return M.rank() if M.rows and M.cols else 0

    return [len(basis(n)) - rk(n) - rk(n - 1) for n in range(N + 1)]


@pytest.mark.parametrize("model", minimal_models()[:10], ids=lambda m: m.name)
def test_betti_of_minimal_models_against_dense_oracle(model):
    assert cohomology(model, 16, products=False).betti == _dense_betti(model, 16)


@given(seeds)
def test_betti_of_random_algebras_against_dense_oracle(seed):
    rng = random.Random(seed)
    alg = random_rebase(random_finite_algebra(rng, 8), rng)
    assert cohomology(alg, products=False).betti == _dense_betti(alg, alg.top_degree)


def test_even_sphere_model_is_sphere():
    assert cohomology(sphere_model(8), 30).betti_dict() == {0: 1, 8: 1}


def test_acyclic_factor_does_not_change_cohomology():
    a = cohomology(cp(2)).betti
    b = cohomology(with_acyclic(cp(2), 1)).betti
    assert b[:len(a)] == a and not any(b[len(a):])


def test_freeness_verdicts():
    assert freeness_check(cohomology(free_product(sphere_model(3), sphere_model(5)), 12)).free
    assert freeness_check(cohomology(cp(2))).free  # invisible below degree 6
    v = freeness_check(cohomology(cp(2), 6))
    assert not v.free and v.failure_degree == 6 and v.generator_degrees == [2]
    v = freeness_check(cohomology(heisenberg_model(), 14))
    assert v.label == "NOT_FREE"


def test_indecomposables_of_product_of_spheres():
    rep = cohomology(sphere_product(2, 3))
    assert rep.betti == [1, 0, 1, 1, 0, 1]
    assert rep.indecomposable == [0, 0, 1, 1, 0, 0]


def _brute_cup(alg: FiniteAlgebra) -> int:
    # d = 0 here, so cohomology is the algebra itself and cup length is nilpotency
    best, layer = 0, [{0: Fraction(1)}]
    for length in range(1, 10):
        nxt = [alg.mul(v, {i: Fraction(1)}) for v in layer for i in alg.positive]
        nxt = [w for w in nxt if w]
        if not nxt:
            return best
        best, layer = length, nxt
    return best


@pytest.mark.parametrize("alg", [cp(3), sphere_product(5, 11), trivial_products([3, 3, 8]),
                                 sphere_product(2, 3, 4), sphere_cohomology(7)],
                         ids=lambda a: a.name)
def test_cup_length_brute_force(alg):
    assert cup_length(alg) == _brute_cup(alg)


def test_cup_length_ignores_acyclic_part():
    assert cup_length(with_acyclic(cp(2), 1)) == 2
    assert cup_length(with_acyclic(sphere_cohomology(3), 2)) == 1
