"""Built-in models of standard spaces and a few generic constructions.

Free models (targets) and finite cdgas (sources) are returned already
validated.  `REGISTRY` maps the names accepted by ``ratmap make`` to their
builders.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, List, Sequence, Tuple

from . import errors
from .cdga import FiniteAlgebra, FreeModel, rebase, validate_finite, validate_free
from .gca import FreeAlgebra, hilbert_coefficients, substitute
from .linalg import Reducer


def _check_positive(**kw) -> None:
    for k, v in kw.items():
        if not isinstance(v, int) or v < 1:
            raise errors.InvalidParameter(f"{k} must be a positive integer, got {v!r}")


# -- free models ---------------------------------------------------------------

def sphere_model(n: int) -> FreeModel:
    """Minimal model of Sⁿ: ∧(x) for odd n, ∧(x, y; dy = x²) for even n."""
    _check_positive(n=n)
    if n % 2:
        return validate_free([(f"x{n}", n)], {}, name=f"S{n}")
    ring = FreeAlgebra([(f"x{n}", n), (f"y{2 * n - 1}", 2 * n - 1)])
    return validate_free(ring.gens, {1: ring.gen(0) ** 2}, name=f"S{n}", ring=ring)


def truncated_model(degree: int, r: int, name: str = "") -> FreeModel:
    """∧(x, y; dy = x^r) with |x| = degree even; models ℚ[x]/x^r as a space."""
    _check_positive(degree=degree, r=r)
    if degree % 2 or r < 2:
        raise errors.InvalidParameter("need an even degree and r >= 2")
    ring = FreeAlgebra([(f"x{degree}", degree), (f"y{degree * r - 1}", degree * r - 1)])
    return validate_free(ring.gens, {1: ring.gen(0) ** r},
                         name=name or f"T{degree}_{r}", ring=ring)


def fibre_model(r: int) -> FreeModel:
    """∧(x₂, y_{2r-1}; dy = x^r), the model of ℂP^{r-1}; differential length r."""
    return truncated_model(2, r, name=f"E{r}")


def cp_model(n: int) -> FreeModel:
    _check_positive(n=n)
    return truncated_model(2, n + 1, name=f"CP{n}")


def hp_model(n: int) -> FreeModel:
    _check_positive(n=n)
    return truncated_model(4, n + 1, name=f"HP{n}")


def free_product(*models: FreeModel, name: str = "") -> FreeModel:
    """Tensor product of free models; clashing generator names get a numeric suffix."""
    gens: List[Tuple[str, int]] = []
    seen = set()
    offsets = []
    for m in models:
        offsets.append(len(gens))
        for g in m.gens:
            nm = g.name
            k = 1
            while nm in seen:
                k += 1
                nm = f"{g.name}_{k}"
            seen.add(nm)
            gens.append((nm, g.degree))
    ring = FreeAlgebra(gens)
    diff = {}
    for m, off in zip(models, offsets):
        images = {i: ring.gen(off + i) for i in range(len(m.gens))}
        for i, u in m.diff.items():
            diff[off + i] = substitute(u, images, ring)
    return validate_free(ring.gens, diff, name=name or "x".join(m.name for m in models), ring=ring)


def heisenberg_model() -> FreeModel:
    """∧(a₃, b₃, c₅; dc = ab)."""
    ring = FreeAlgebra([("a3", 3), ("b3", 3), ("c5", 5)])
    return validate_free(ring.gens, {2: ring.gen(0) * ring.gen(1)}, name="H335", ring=ring)


def two_cell_model() -> FreeModel:
    """∧(a₂, b₂, c₃, e₃; dc = a², de = ab); quadratic, differential length 2."""
    ring = FreeAlgebra([("a2", 2), ("b2", 2), ("c3", 3), ("e3", 3)])
    a, b = ring.gen(0), ring.gen(1)
    return validate_free(ring.gens, {2: a * a, 3: a * b}, name="Q2233", ring=ring)


# -- finite algebras -------------------------------------------------------------

def sphere_cohomology(n: int, label: str = "") -> FiniteAlgebra:
    _check_positive(n=n)
    return validate_finite([(label or f"s{n}", n)], name=f"H(S{n})")


def truncated_poly(degree: int, height: int, name: str = "", var: str = "x") -> FiniteAlgebra:
    """ℚ[x]/x^height with |x| = degree; basis x, x2, x3, ..."""
    _check_positive(degree=degree, height=height)
    if height < 2:
        raise errors.InvalidParameter("height must be >= 2")
    if degree % 2 and height > 2:
        raise errors.InvalidParameter("an odd generator squares to zero; use height 2")
    labels = [var if k == 1 else f"{var}{k}" for k in range(1, height)]
    basis = [(lab, degree * k) for k, lab in enumerate(labels, start=1)]
    table = {}
    for i in range(1, height):
        for j in range(i, height - i):
            table[(labels[i - 1], labels[j - 1])] = labels[i + j - 1]
    return validate_finite(basis, table, name=name or f"Q[{var}]/{var}^{height}")


def cp(n: int) -> FiniteAlgebra:
    _check_positive(n=n)
    return truncated_poly(2, n + 1, name=f"CP{n}")


def hp(n: int) -> FiniteAlgebra:
    _check_positive(n=n)
    return truncated_poly(4, n + 1, name=f"HP{n}")


def trivial_products(degrees: Sequence[int], name: str = "") -> FiniteAlgebra:
    """ℚ ⊕ (basis in the given degrees) with all products of positive elements zero."""
    if not degrees:
        raise errors.InvalidParameter("need at least one degree")
    for d in degrees:
        _check_positive(degree=d)
    basis = [(f"w{k}", d) for k, d in enumerate(degrees, start=1)]
    return validate_finite(basis, name=name or "W(" + ",".join(map(str, degrees)) + ")")


def tensor(a: FiniteAlgebra, b: FiniteAlgebra, name: str = "") -> FiniteAlgebra:
    """Graded tensor product with (a⊗b)(a'⊗b') = (-1)^{|b||a'|} aa'⊗bb'.

    Labels are ``la``, ``lb`` for the factors and ``la_lb`` for mixed terms.
    """
    pairs = ([(i, 0) for i in range(1, len(a))] + [(0, j) for j in range(1, len(b))]
             + [(i, j) for i in range(1, len(a)) for j in range(1, len(b))])
    pairs.sort(key=lambda p: a.degrees[p[0]] + b.degrees[p[1]])
    labels, degs = {}, {}
    for i, j in pairs:
        if j == 0:
            lab = a.labels[i]
        elif i == 0:
            lab = b.labels[j]
        else:
            lab = f"{a.labels[i]}_{b.labels[j]}"
        labels[(i, j)] = lab
        degs[(i, j)] = a.degrees[i] + b.degrees[j]
    if len(set(labels.values())) != len(labels):
        raise errors.InvalidParameter("tensor factors share basis labels")
    labels[(0, 0)] = "1"

    def expand(va, vb, c):
        out = {}
        for k, x in va.items():
            for l, y in vb.items():
                lab = labels[(k, l)]
                out[lab] = out.get(lab, 0) + c * x * y
        return {k: v for k, v in out.items() if v}

    table = {}
    for (i, j) in pairs:
        for (k, l) in pairs:
            pa, pb = a.basis_product(i, k), b.basis_product(j, l)
            if not pa or not pb:
                continue
            sign = -1 if (b.degrees[j] * a.degrees[k]) % 2 else 1
            vec = expand(pa, pb, sign)
            if vec:
                table[(labels[(i, j)], labels[(k, l)])] = vec
    diff = {}
    for (i, j) in pairs:
        vec = {}
        if i in a.diff:
            for lab, c in expand(a.diff[i], {j: Fraction(1)}, 1).items():
                vec[lab] = vec.get(lab, 0) + c
        if j in b.diff:
            for lab, c in expand({i: Fraction(1)}, b.diff[j], -1 if a.degrees[i] % 2 else 1).items():
                vec[lab] = vec.get(lab, 0) + c
        vec = {k: v for k, v in vec.items() if v}
        if vec:
            diff[labels[(i, j)]] = vec
    basis = [(labels[p], degs[p]) for p in pairs]
    return validate_finite(basis, table, diff, name=name or f"{a.name}x{b.name}")


def sphere_product(*ns: int) -> FiniteAlgebra:
    """H*(S^{n1} × S^{n2} × ...) with generators labelled a, b, c, ...

    Mixed products are labelled by concatenation (``ab``), so S⁵×S¹¹ has
    basis 1, a, b, ab.
    """
    if not ns:
        raise errors.InvalidParameter("need at least one sphere")
    for n in ns:
        _check_positive(n=n)
    letters = "abcdefgh"
    if len(ns) > len(letters):
        raise errors.InvalidParameter("at most 8 spheres")
    out = None
    for k, n in enumerate(ns):
        s = validate_finite([(letters[k], n)], name=f"S{n}")
        out = s if out is None else tensor(out, s)
    labels = [lab.replace("_", "") for lab in out.labels]
    name = "x".join(f"S{n}" for n in ns)
    return FiniteAlgebra(name, labels, out.degrees, out.mul_table, out.diff)


def contractible_pair(degree: int) -> FiniteAlgebra:
    """ℚ ⊕ span(e, b) with de = b, |e| = degree; acyclic in positive degrees."""
    _check_positive(degree=degree)
    return validate_finite([("e", degree), ("b", degree + 1)], diff={"e": "b"},
                           name=f"C{degree}")


def with_acyclic(alg: FiniteAlgebra, degree: int) -> FiniteAlgebra:
    """alg ⊗ contractible_pair(degree): same cohomology, nonzero differential."""
    return tensor(alg, contractible_pair(degree), name=f"{alg.name}xC{degree}")


# -- random instances ------------------------------------------------------------

def random_finite_algebra(rng: random.Random, max_degree: int = 6) -> FiniteAlgebra:
    """A small random cdga built as a tensor product of basic pieces.

    Pieces are sphere cohomologies, truncated polynomial algebras and
    contractible pairs; an optional trivial-products factor adds wedges.
    """
    pieces: List[FiniteAlgebra] = []
    budget = max_degree
    names = iter("pqrstuvw")
    while budget > 0 and len(pieces) < 3:
        kind = rng.choice(["sphere", "poly", "pair"])
        var = next(names)
        if kind == "sphere":
            n = rng.randint(1, min(budget, 5))
            pieces.append(validate_finite([(var, n)], name=f"S{n}"))
            budget -= n
        elif kind == "poly" and budget >= 4:
            pieces.append(truncated_poly(2, rng.randint(2, min(3, budget // 2 + 1)), var=var))
            budget -= pieces[-1].top_degree
        else:
            d = rng.randint(1, 3)
            if 2 * d + 1 > budget + 2:
                break
            pieces.append(validate_finite([(var + "e", d), (var + "b", d + 1)],
                                          diff={var + "e": var + "b"}, name=f"C{d}"))
            budget -= 2 * d + 1
    if not pieces:
        pieces.append(validate_finite([("p", 2)], name="S2"))
    out = pieces[0]
    for p in pieces[1:]:
        out = tensor(out, p)
    return out


def random_rebase(alg: FiniteAlgebra, rng: random.Random) -> FiniteAlgebra:
    """The same cdga in a random homogeneous basis (unit kept), labels ``u1, u2, ...``."""
    vecs = [{0: Fraction(1)}]
    degrees = [0]
    for n, idx in sorted(alg.by_degree.items()):
        if n == 0:
            continue
        while True:
            block = [{i: Fraction(rng.randint(-2, 2)) for i in idx} for _ in idx]
            block = [{i: c for i, c in v.items() if c} for v in block]
            red = Reducer()
            if all(v and red.add(v) is None for v in block):
                break
        vecs += block
        degrees += [n] * len(idx)
    labels = [alg.unit_label] + [f"u{k}" for k in range(1, len(vecs))]
    return rebase(alg, vecs, labels, degrees, name=alg.name + "'")


def random_target(rng: random.Random) -> FreeModel:
    return rng.choice([
        lambda: sphere_model(rng.choice([3, 4, 5, 6, 7, 8])),
        lambda: fibre_model(rng.choice([2, 3])),
        lambda: free_product(sphere_model(3), sphere_model(4)),
        heisenberg_model,
    ])()


def random_instance(rng: random.Random, budget: int = 3000, n_range=(4, 10)):
    """A random (source, target, N) whose mapping model has at most ``budget``
    monomials through degree N; N is the largest value in ``n_range`` that fits."""
    from .haefliger import build_map_model

    while True:
        x = random_finite_algebra(rng, rng.randint(4, 8))
        if rng.random() < 0.5:
            x = random_rebase(x, rng)
        y = random_target(rng)
        degs = build_map_model(x, y, n_range[1]).degrees()
        for N in range(n_range[1], n_range[0] - 1, -1):
            if sum(hilbert_coefficients([d for d in degs if d <= N + 1], N)) <= budget:
                return x, y, N


# -- registry ----------------------------------------------------------------------

@dataclass(frozen=True)
class Entry:
    kind: str                     # "cdga" or "algebra"
    build: Callable
    arity: str                    # description of the arguments
    summary: str


REGISTRY: Dict[str, Entry] = {
    "sphere": Entry("cdga", sphere_model, "N", "minimal model of the N-sphere"),
    "fibre": Entry("cdga", fibre_model, "R", "∧(x2, y_{2R-1}; dy = x^R)"),
    "cp-model": Entry("cdga", cp_model, "N", "minimal model of CP^N"),
    "hp-model": Entry("cdga", hp_model, "N", "minimal model of HP^N"),
    "heisenberg": Entry("cdga", heisenberg_model, "", "∧(a3, b3, c5; dc = ab)"),
    "sphere-cohomology": Entry("algebra", sphere_cohomology, "N", "H*(S^N)"),
    "cp": Entry("algebra", cp, "N", "H*(CP^N) = Q[x]/x^{N+1}"),
    "hp": Entry("algebra", hp, "N", "H*(HP^N)"),
    "truncated": Entry("algebra", truncated_poly, "DEG HEIGHT", "Q[x]/x^HEIGHT, |x| = DEG"),
    "trivial": Entry("algebra", trivial_products, "D1 D2 ...", "all positive products zero"),
    "spheres": Entry("algebra", sphere_product, "N1 N2 ...", "H*(S^N1 x S^N2 x ...)"),
    "pair": Entry("algebra", contractible_pair, "D", "acyclic pair de = b"),
}


def make(name: str, args: Sequence[int]):
    entry = REGISTRY.get(name)
    if entry is None:
        raise errors.InvalidParameter(f"unknown library entry {name!r}; known: {', '.join(sorted(REGISTRY))}")
    if name in ("trivial",):
        return entry.build(list(args))
    if name == "spheres":
        return entry.build(*args)
    try:
        return entry.build(*args)
    except TypeError as exc:
        raise errors.InvalidParameter(f"{name} takes arguments {entry.arity or '(none)'}") from exc


def minimal_models() -> List[FreeModel]:
    """Library minimal models used by the invariance and H(r) suites."""
    return [
        sphere_model(3), sphere_model(5), sphere_model(4), sphere_model(6), sphere_model(8),
        fibre_model(2), fibre_model(3), fibre_model(4), fibre_model(5),
        hp_model(2), heisenberg_model(), two_cell_model(),
        free_product(sphere_model(3), sphere_model(5)),
        free_product(sphere_model(4), sphere_model(6)),
        free_product(sphere_model(4), fibre_model(3)),
    ]


def source_algebras() -> List[FiniteAlgebra]:
    return [
        sphere_cohomology(2), sphere_cohomology(3), sphere_cohomology(4),
        trivial_products([3, 3, 8]), trivial_products([2, 3]), trivial_products([2, 2, 4]),
        cp(2), sphere_product(2, 4), sphere_product(5, 11), cp(3),
        with_acyclic(sphere_cohomology(3), 2), with_acyclic(cp(2), 1),
    ]
