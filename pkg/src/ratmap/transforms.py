"""Changes of generators on free models."""
from __future__ import annotations

import random
from fractions import Fraction
from typing import Dict, Optional

from .cdga import FreeModel, validate_free
from .gca import Elem, FreeAlgebra, substitute


def random_triangular_automorphism(model: FreeModel, rng: random.Random,
                                   max_terms: int = 3) -> Dict[int, Elem]:
    """ψ(v) = λv + (same-degree earlier generators) + (decomposables in earlier generators).

    λ is a nonzero rational; ψ is invertible because it is triangular with
    nonzero diagonal, and it preserves the word-length filtration.
    """
    ring = model.ring
    psi: Dict[int, Elem] = {}
    for g in ring.gens:
        lam = Fraction(rng.choice([-3, -2, -1, 1, 2, 3]), rng.choice([1, 1, 2, 3]))
        u = ring.gen(g.ordinal).scale(lam)
        earlier = ring.gens[:g.ordinal]
        pool = []
        for h in earlier:
            if h.degree == g.degree:
                pool.append(((h.ordinal, 1),))
        if earlier:
            sub = FreeAlgebra([(h.name, h.degree) for h in earlier])
            pool += [m for m in sub.basis(g.degree) if sum(e for _, e in m) >= 2]
        for m in rng.sample(pool, min(len(pool), rng.randint(0, max_terms))):
            u = u + ring.monomial(m, Fraction(rng.randint(-4, 4), rng.randint(1, 3)))
        psi[g.ordinal] = u
    return psi


def invert_triangular(model: FreeModel, psi: Dict[int, Elem]) -> Dict[int, Elem]:
    """ψ⁻¹ on generators, solved in generator order."""
    ring = model.ring
    inv: Dict[int, Elem] = {}
    for g in ring.gens:
        u = psi[g.ordinal]
        lam = u.coeff(((g.ordinal, 1),))
        rest = u - ring.gen(g.ordinal).scale(lam)
        inv[g.ordinal] = (ring.gen(g.ordinal) - substitute(rest, inv, ring)).scale(1 / lam)
    return inv


def conjugate(model: FreeModel, psi: Dict[int, Elem], name: Optional[str] = None) -> FreeModel:
    """The model with differential ψ⁻¹∘d∘ψ, isomorphic to ``model`` via ψ."""
    ring = model.ring
    inv = invert_triangular(model, psi)
    diff = {}
    for g in ring.gens:
        du = model.d(psi[g.ordinal])
        val = substitute(du, inv, ring)
        if val:
            diff[g.ordinal] = val
    return validate_free(ring.gens, diff, name=name or model.name + "'", ring=ring)
