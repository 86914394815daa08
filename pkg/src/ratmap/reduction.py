"""Freeness, H(r) and tower computations on top of the mapping-space models.

* `kill_acyclic` divides a map model by the contractible ideal spanned by
  the b/e generator pairs over a prefix of V.
* `freeness_pipeline` decides freeness of the cohomology, choosing between
  the cup-length/differential-length criterion, the obstruction witness and
  a direct degree-bounded computation.
* `hn_check` tests the canonical H(r)-type morphism on a minimal model.
* `postnikov_tower` splits the source algebra along powers of its
  augmentation ideal and checks that every piece gives a zero-differential
  model.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations_with_replacement
from typing import Dict, List, Optional, Tuple

from . import errors
from .cdga import (INFINITY, FiniteAlgebra, FreeModel, connectivity, differential_length,
                   dimension, nilpotency, power_ideal, subquotient)
from .cohomology import cohomology, cup_length, freeness_check
from .gca import Elem, FreeAlgebra, substitute
from .haefliger import MapModel, build_map_model
from .linalg import Vec


# ---------------------------------------------------------------------------
# killing contractible pairs
# ---------------------------------------------------------------------------

@dataclass
class KillResult:
    model: MapModel
    quasi_iso: bool
    betti_before: List[int]
    betti_after: List[int]
    killed: List[str]
    # True when D(b⊗v) ≡ ±e⊗v modulo the ideal spanned by the pairs themselves
    literal_ideal_stable: bool


def kill_acyclic(mm: MapModel, k: Optional[int] = None, N: Optional[int] = None,
                 strict: bool = False, check: bool = True) -> KillResult:
    """Quotient by the ideal generated by b⊗v_s and D(b⊗v_s) for the first ``k`` generators of V.

    On the quotient, e⊗v_s is eliminated through D(b⊗v_s) = c·e⊗v_s + P,
    i.e. replaced by -P/c.  When P already lies in the ideal this is the
    ideal generated by the b⊗v_s and e⊗v_s themselves; with ``strict`` a
    NotDifferentialIdeal is raised otherwise.
    """
    N = mm.bound if N is None else N
    nv = len(mm.y.gens) if mm.y is not None else max((z.v.ordinal for z in mm.zgens), default=-1) + 1
    k = nv if k is None else k
    ring = mm.ring
    in_prefix = [z.v.ordinal < k and z.kind in ("b", "e") for z in mm.zgens]
    index = {(z.dual.index, z.v.ordinal): i for i, z in enumerate(mm.zgens)}
    partner_e: Dict[int, int] = {}
    if mm.split is not None:
        for b_idx, e_idx in mm.split.partner.items():
            for i, z in enumerate(mm.zgens):
                if z.dual.index == b_idx and in_prefix[i]:
                    j = index.get((e_idx, z.v.ordinal))
                    if j is not None:
                        partner_e[j] = i
    keep = [i for i in range(len(mm.zgens)) if not in_prefix[i]]
    newpos = {i: n for n, i in enumerate(keep)}
    new_ring = FreeAlgebra([(mm.zgens[i].name, mm.zgens[i].degree) for i in keep])

    literal = True
    killed_set = {i for i in range(len(mm.zgens)) if in_prefix[i]}
    zero_killed = {i: ring.gen(i) for i in range(len(mm.zgens)) if i not in killed_set}
    for i in sorted(killed_set):
        val = substitute(mm.diff.get(i, ring.zero()), zero_killed, ring)
        if val:
            literal = False
            break
    if strict and not literal:
        raise errors.NotDifferentialIdeal(
            "the ideal generated by the b- and e-generators is not stable under D")

    images: Dict[int, Elem] = {}
    for i, z in enumerate(mm.zgens):
        if i in newpos:
            images[i] = new_ring.gen(newpos[i])
        elif i in partner_e:
            b = partner_e[i]
            Db = mm.diff.get(b, ring.zero())
            c = Db.coeff(((i, 1),))
            if not c:
                raise errors.NotDifferentialIdeal(
                    f"D({mm.zgens[b].name}) has no linear term on {z.name}")
            rest = Db - ring.gen(i).scale(c)
            images[i] = substitute(rest, images, new_ring).scale(-1 / c)
        # b-kind and partnerless generators go to zero
    diff = {}
    for i in keep:
        u = mm.diff.get(i)
        if u:
            val = substitute(u, images, new_ring)
            if val:
                diff[newpos[i]] = val
    reduced = MapModel([mm.zgens[i] for i in keep],
                       FreeModel(mm.model.name + "/I", new_ring, diff),
                       mm.bound, mm.provenance, mm.split, mm.y)
    killed = [mm.zgens[i].name for i in sorted(killed_set)]
    if check:
        before = cohomology(mm, N, products=False).betti
        after = cohomology(reduced, N, products=False).betti
    else:
        before = after = []
    return KillResult(reduced, before == after, before, after, killed, literal)


# ---------------------------------------------------------------------------
# witnesses and the freeness pipeline
# ---------------------------------------------------------------------------

def _power_word(labels: List[str]) -> List[str]:
    counts = Counter(labels)
    return [lab if k == 1 else f"{lab}^{k}" for lab, k in counts.items()]


@dataclass
class Witness:
    y: str
    r: int
    omega: List[str]            # factors h_1, ..., h_m as powers of split-basis labels
    omega_vec: str              # ω written in the original basis
    omega_degree: int
    omega_dual: Dict[str, Fraction]
    obstruction_degree: int
    generator: str              # the Z-generator ω'⊗y (up to the scalar in omega_dual)
    component: str              # word-length-r part of D(ω'⊗y)

    def as_dict(self) -> dict:
        return {"y": self.y, "r": self.r, "omega": "*".join(self.omega),
                "omega_degree": self.omega_degree,
                "omega_dual": {k: str(v) for k, v in self.omega_dual.items()},
                "degree": self.obstruction_degree, "generator": self.generator,
                "component": self.component}


def nonfree_witness(x: FiniteAlgebra, y: FreeModel, cup: Optional[int] = None) -> Witness:
    """Data of the obstruction to freeness when cup₀(x) ≥ dl(y) and dim(x) ≤ conn(y)."""
    dl = differential_length(y)
    cup = cup_length(x) if cup is None else cup
    if not (cup >= dl and dimension(x) <= connectivity(y)):
        raise errors.NoWitness(
            f"need cup >= dl and dim <= conn (cup={cup}, dl={_fmt(dl)}, "
            f"dim={dimension(x)}, conn={connectivity(y)})")
    cands = []
    for v in y.gens:
        u = y.dgen(v.ordinal)
        if u:
            r = min(u.word_lengths())
            if r <= cup:
                cands.append((v.degree, v.ordinal, r))
    if not cands:
        raise errors.NoWitness("no generator with a low word-length differential")
    _, ordinal, r = min(cands)
    v = y.gens[ordinal]

    mm0 = build_map_model(x, y, 0)
    split = mm0.split
    sa = split.algebra
    hs = [i for i in sa.positive if split.kinds[i] == "h"]
    rep = cohomology(sa, products=False)
    best = None
    for m in range(r, cup + 1):
        for combo in combinations_with_replacement(hs, m):
            deg = sum(sa.degrees[i] for i in combo)
            if deg > sa.top_degree:
                continue
            # maximal degree first, then the longest factorization
            if best is not None and (deg, m) <= (best[0], len(best[1])):
                continue
            w = {0: Fraction(1)}
            for i in combo:
                w = sa.mul(w, {i: Fraction(1)})
            if not w:
                continue
            local = {sa.in_degree(deg).index(i): c for i, c in w.items()}
            if rep.is_zero_class(deg, local):
                continue
            best = (deg, combo, w)
    if best is None:
        raise errors.NoWitness("no nonzero product of length >= r")
    deg, combo, w = best
    pivot = next(i for i in sorted(w) if split.kinds[i] == "h")
    c = w[pivot]
    omega_dual = {sa.labels[pivot]: 1 / c}
    obstruction = v.degree - deg
    mm = build_map_model(x, y, obstruction + 1, split)
    prefix = sum(1 for g in y.gens if g.degree < v.degree)
    reduced = kill_acyclic(mm, prefix, check=False).model
    name = next(z.name for z in reduced.zgens
                if z.dual.index == pivot and z.v.ordinal == ordinal)
    comp = reduced.D(name).word_component(r).scale(1 / c)
    if not comp:
        raise errors.NoWitness(f"word-length-{r} component of D({name}) vanishes")
    src_vec = {}
    for i, a in w.items():
        for j, b in split_vector(split, i).items():
            src_vec[j] = src_vec.get(j, 0) + a * b
    return Witness(v.name, r, _power_word([sa.labels[i] for i in combo]),
                   x.vec_str({k: t for k, t in src_vec.items() if t}), deg,
                   omega_dual, obstruction, name, str(comp))


def split_vector(split, i: int) -> Vec:
    vecs = [{0: Fraction(1)}]
    sa = split.algebra
    order = {"h": split.h, "e": split.e, "b": split.b}
    counters = {"h": 0, "e": 0, "b": 0}
    for j in sa.positive:
        kind = split.kinds[j]
        vecs.append(order[kind][counters[kind]])
        counters[kind] += 1
    return vecs[i]


@dataclass
class FreenessReport:
    branch: str                 # "cup<dl", "converse", "direct"
    verdict: str                # "FREE", "NOT_FREE", "FREE (degree-bounded)", ...
    free: bool
    degree_bounded: bool
    max_degree: int
    cup: int
    dl: object
    conn: int
    dim: int
    generator_degrees: List[int] = field(default_factory=list)
    failure_degree: Optional[int] = None
    witness: Optional[Witness] = None
    diagnostics: List[str] = field(default_factory=list)
    betti: List[int] = field(default_factory=list)


def freeness_pipeline(x: FiniteAlgebra, y: FreeModel, N: int) -> FreenessReport:
    cup = cup_length(x)
    dl = differential_length(y)
    conn, dim = connectivity(y), dimension(x)
    mm = build_map_model(x, y, N)
    rep = FreenessReport("", "", False, False, N, cup, dl, conn, dim)
    if cup < dl:
        res = kill_acyclic(mm, N=N, check=False)
        red = res.model
        if red.is_zero_differential(N):
            rep.branch = "cup<dl"
            rep.free = True
            rep.verdict = "FREE"
            rep.generator_degrees = sorted(z.degree for z in red.zgens if z.degree <= N)
            return rep
        rep.diagnostics.append("reduced differential is not zero; falling back to direct computation")
    elif dim <= conn:
        rep.branch = "converse"
        rep.verdict = "NOT_FREE"
        rep.witness = nonfree_witness(x, y, cup)
        fv = freeness_check(cohomology(mm, N), N)
        rep.betti = fv.betti
        rep.failure_degree = fv.failure_degree
        rep.generator_degrees = fv.generator_degrees
        if fv.free:
            rep.diagnostics.append(f"no failure visible through degree {N}; the witness lies beyond")
        return rep
    rep.branch = "direct"
    rep.degree_bounded = True
    fv = freeness_check(cohomology(mm, N), N)
    rep.free = fv.free
    rep.verdict = "FREE" if fv.free else "NOT_FREE"
    rep.generator_degrees = fv.generator_degrees
    rep.failure_degree = fv.failure_degree
    rep.betti = fv.betti
    return rep


# ---------------------------------------------------------------------------
# H(r) test
# ---------------------------------------------------------------------------

@dataclass
class HnStructure:
    r: int
    ring: FreeAlgebra                  # Λ(V' ⊕ V'')
    quotient_diff: Dict[int, Elem]     # d'+d'' reduced modulo word length >= r
    phi: Dict[int, Elem]               # v -> v' + v''
    obstruction: Dict[str, Elem]       # v -> φ(dv) - D(φ(v)) mod I_r, nonzero entries only

    @property
    def is_morphism(self) -> bool:
        return not self.obstruction

    @property
    def zero_differential(self) -> bool:
        return not any(self.quotient_diff.values())


def truncate_word_length(u: Elem, r: int) -> Elem:
    return Elem(u.ring, {m: c for m, c in u.terms.items() if FreeAlgebra.word_length(m) < r})


def hn_structure(y: FreeModel, r: int) -> HnStructure:
    if r < 1:
        raise errors.InvalidParameter("r must be >= 1")
    if not y.minimal:
        raise errors.NotMinimal(f"{y.name} is not minimal")
    gens = [(g.name + "_L", g.degree) for g in y.gens] + [(g.name + "_R", g.degree) for g in y.gens]
    ring = FreeAlgebra(gens)
    n = len(y.gens)
    left = {i: ring.gen(i) for i in range(n)}
    right = {i: ring.gen(n + i) for i in range(n)}
    qdiff = {}
    for i, u in y.diff.items():
        qdiff[i] = truncate_word_length(substitute(u, left, ring), r)
        qdiff[n + i] = truncate_word_length(substitute(u, right, ring), r)
    phi = {i: left[i] + right[i] for i in range(n)}
    obstruction = {}
    for v in y.gens:
        lhs = truncate_word_length(substitute(y.dgen(v.ordinal), phi, ring), r)
        rhs = qdiff.get(v.ordinal, ring.zero()) + qdiff.get(n + v.ordinal, ring.zero())
        diff = lhs - rhs
        if diff:
            obstruction[v.name] = diff
    return HnStructure(r, ring, qdiff, phi, obstruction)


def hn_check(y: FreeModel, r: int) -> bool:
    return hn_structure(y, r).is_morphism


def m_h(y: FreeModel):
    """Largest n admitting an H(n)-structure on the rationalization: dl - 1."""
    dl = differential_length(y)
    return dl - 1


# ---------------------------------------------------------------------------
# Postnikov tower
# ---------------------------------------------------------------------------

@dataclass
class TowerStage:
    label: str                 # "base" or "fiber k"
    algebra: FiniteAlgebra
    exponent: Tuple[int, int]  # (lower, upper) power-ideal exponents bounding the piece
    dims: Dict[int, int]
    zero_differential: bool
    z_degrees: List[int]

    @property
    def trivial(self) -> bool:
        return not any(self.dims.values())


@dataclass
class TowerReport:
    m: int
    m_eff: int
    r: int
    s: int
    ideal_exponents: List[int]         # I_k = (A⁺)^{e_k}, k = 0..s
    ideal_dims: List[Dict[int, int]]
    stages: List[TowerStage]
    stage_models: List[MapModel]       # models of A/I_k, k = s..0
    achieved: int
    hypothesis_dim_le_conn: bool
    composes: bool

    @property
    def all_zero(self) -> bool:
        return all(st.zero_differential for st in self.stages if not st.trivial)

    @property
    def nontrivial_fibers(self) -> int:
        return sum(1 for st in self.stages if st.label != "base" and not st.trivial)

    @property
    def agrees_with_s(self) -> bool:
        return self.achieved == self.s


def _int_log(m: int, r: int) -> int:
    s = 0
    while r ** (s + 1) <= m:
        s += 1
    return s


def postnikov_tower(x: FiniteAlgebra, y: FreeModel, N: int) -> TowerReport:
    dl = differential_length(y)
    if dl == INFINITY:
        raise errors.PreconditionFailed("target model has zero differential (dl = inf)")
    if not x.positive:
        raise errors.PreconditionFailed("source algebra has no positive-degree part")
    r = int(dl)
    m = nilpotency(x)
    m_eff = m + 1
    s = _int_log(m_eff, r)
    exps = [m_eff // r ** k + 1 for k in range(s + 1)]
    ideals = [power_ideal(x, e) for e in exps]
    whole = {}
    for i in x.positive:
        whole.setdefault(x.degrees[i], []).append({i: Fraction(1)})
    pieces = [("base", subquotient(x, whole, ideals[s], f"{x.name}/I{s}"), (exps[s], 1))]
    for k in range(s, 0, -1):
        pieces.append((f"fiber {k}", subquotient(x, ideals[k], ideals[k - 1], f"I{k}/I{k - 1}"),
                       (exps[k - 1], exps[k])))
    stages = []
    for label, alg, ex in pieces:
        dims = {n: len(alg.in_degree(n)) for n in sorted(alg.by_degree) if n > 0}
        if not alg.positive:
            stages.append(TowerStage(label, alg, ex, dims, True, []))
            continue
        mm = build_map_model(alg, y, N)
        red = kill_acyclic(mm, N=N, check=False).model
        stages.append(TowerStage(label, alg, ex, dims, red.is_zero_differential(N),
                                 sorted(z.degree for z in red.zgens if z.degree <= N)))
    stage_models = []
    for k in range(s, -1, -1):
        q = subquotient(x, whole, ideals[k], f"{x.name}/I{k}")
        stage_models.append(build_map_model(q, y, N) if q.positive else None)
    total: Dict[int, int] = {}
    for st in stages:
        for n, c in st.dims.items():
            total[n] = total.get(n, 0) + c
    expect = {n: len(x.in_degree(n)) for n in sorted(x.by_degree) if n > 0}
    composes = {n: c for n, c in total.items() if c} == {n: c for n, c in expect.items() if c}
    achieved = sum(1 for st in stages if not st.trivial)
    return TowerReport(m, m_eff, r, s, exps,
                       [{n: len(v) for n, v in sorted(I.items()) if v} for I in ideals],
                       stages, stage_models, achieved,
                       dimension(x) <= connectivity(y), composes)


def _fmt(v) -> str:
    return "inf" if v == INFINITY else str(v)
