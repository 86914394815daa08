import random

import pytest
from hypothesis import given

from ratmap import errors
from ratmap.cdga import FreeModel
from ratmap.cohomology import cohomology, freeness_check
from ratmap.gca import FreeAlgebra, hilbert_coefficients
from ratmap.haefliger import HaefligerBuilder, build_map_model, square_zero_through, verify_morphism
from ratmap.library import (contractible_pair, cp, free_product, random_instance, sphere_model,
                            sphere_product, trivial_products)

from conftest import seeds


def test_product_of_spheres_into_s8():
    mm = build_map_model(sphere_product(5, 11), sphere_model(8), 14)
    assert [(z.name, z.degree) for z in mm.zgens] == [
        ("h_a__x8", 3), ("h_a__y15", 10), ("h_b__y15", 4)]
    assert mm.is_zero_differential()
    assert verify_morphism(sphere_product(5, 11), sphere_model(8), mm)


def test_untruncated_differential_by_hand():
    # φ(x)² has ab-component (a⊗z_a)(b⊗z_b) + (b⊗z_b)(a⊗z_a) = -2 ab⊗z_a z_b,
    # with |z_a| = 3, |z_b| = -3 and both Koszul signs negative
    mm = build_map_model(sphere_product(5, 11), sphere_model(8), 14)
    R = mm.full_ring
    k = R.index["h_ab__y15"]
    assert mm.full_diff[k] == (R.gen("h_a__x8") * R.gen("h_b__x8")).scale(-2)


def test_cp2_into_s6_by_hand():
    # φ(x6)² = x2 ⊗ z², z = h_x__x6 of degree 4; all degrees even so no signs
    mm = build_map_model(cp(2), sphere_model(6), 8)
    assert [(z.name, z.degree) for z in mm.zgens] == [
        ("h_x__x6", 4), ("h_x2__x6", 2), ("h_x__y11", 9), ("h_x2__y11", 7)]
    assert mm.D("h_x2__y11") == mm.ring.gen("h_x__x6") ** 2
    assert mm.D("h_x__y11") == 0
    v = freeness_check(cohomology(mm, 8))
    assert v.betti == [1, 0, 1, 0, 2, 0, 2, 0, 2]
    assert not v.free and v.failure_degree == 8


def test_truncation_rules():
    mm = build_map_model(contractible_pair(1), sphere_model(3), 6)
    kinds = {z.name: (z.kind, z.degree) for z in mm.zgens}
    assert kinds == {"e_e__x3": ("e", 2), "b_b__x3": ("b", 1)}
    assert mm.D("b_b__x3") == mm.ring.gen("e_e__x3").scale(-1) or \
        mm.D("b_b__x3") == mm.ring.gen("e_e__x3")
    mm = build_map_model(cp(3), free_product(sphere_model(3), sphere_model(9)), 4)
    assert all(z.degree <= 5 for z in mm.zgens)


def test_odd_target_gives_free_model():
    x, y = trivial_products([2, 3, 5]), free_product(sphere_model(7), sphere_model(9))
    mm = build_map_model(x, y, 10)
    assert mm.is_zero_differential()
    degs = [d for d in mm.degrees() if d <= 10]
    assert cohomology(mm, 10, products=False).betti == hilbert_coefficients(degs, 10)


def test_errors():
    with pytest.raises(errors.InvalidParameter):
        build_map_model(cp(2), sphere_model(4), -1)
    R = FreeAlgebra([("x", 3), ("y", 2)])
    bad = FreeModel("bad", R, {0: R.gen("y") * R.gen("y")})  # bypasses validation
    with pytest.raises(errors.UnsolvedPredecessor):
        build_map_model(sphere_product(2), bad, 4)


@given(seeds)
def test_closed_form_matches_solver(seed):
    x, y, _ = random_instance(random.Random(seed), budget=500)
    hb = HaefligerBuilder(x, y)
    for z in hb.zgens:
        s, o = z.dual.index, z.v.ordinal
        D = hb.solve_D(s, o)
        assert hb.closed_form(s, o) == D - D.word_component(1)


@given(seeds)
def test_soundness_on_random_instances(seed):
    x, y, N = random_instance(random.Random(seed), budget=800)
    mm = build_map_model(x, y, N)
    assert verify_morphism(x, y, mm)
    assert square_zero_through(mm, N)


def test_verify_detects_a_wrong_differential():
    x, y = cp(2), sphere_model(6)
    mm = build_map_model(x, y, 8)
    k = mm.ring.index["h_x2__y11"]
    mm.full_diff[mm.full_ring.index["h_x2__y11"]] = mm.full_ring.gen("h_x__x6") ** 2 * 2
    mm.model.diff[k] = mm.ring.gen("h_x__x6") ** 2 * 2
    assert not verify_morphism(x, y, mm)
