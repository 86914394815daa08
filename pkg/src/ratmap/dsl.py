"""Text format for model files.

    file   ::= kind IDENT "{" item* "}"         kind ::= "cdga" | "algebra"
    item   ::= "gen" IDENT ":" INT ";"
             | "d" IDENT "=" poly ";"
             | "mul" IDENT "*" IDENT "=" poly ";"
             | "unit" IDENT ";"
    poly   ::= "0" | term (("+" | "-") term)*
    term   ::= ["-"] factor ("*" factor)* | rat "*" factor ("*" factor)*
    factor ::= IDENT ["^" INT]
    rat    ::= ["-"] INT ["/" INT]

Keywords are only recognised at the start of an item, so a generator may be
called ``d``.  ``#`` starts a comment that runs to the end of the line.
In ``algebra`` files ``gen`` declares basis elements and every right-hand
side must be a linear combination of them.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Tuple, Union

from . import errors
from .cdga import FiniteAlgebra, FreeModel, validate_finite, validate_free
from .gca import Elem, FreeAlgebra

Factor = Tuple[str, int]
Term = Tuple[Fraction, Tuple[Factor, ...]]
Poly = Tuple[Term, ...]
Pos = Tuple[int, int]

_TOKEN = re.compile(r"""
    (?P<ws>[ \t\r]+) | (?P<nl>\n) | (?P<comment>\#[^\n]*)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<int>[0-9]+)
  | (?P<sym>[{}:;=*+^/-])
""", re.VERBOSE)

KINDS = ("cdga", "algebra")


@dataclass(frozen=True)
class Token:
    kind: str      # "ident", "int", "sym", "eof"
    text: str
    line: int
    col: int

    def describe(self) -> str:
        return "end of input" if self.kind == "eof" else repr(self.text)


def tokenize(text: str) -> List[Token]:
    out: List[Token] = []
    line, start, pos = 1, 0, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise errors.DSLSyntaxError(f"unexpected character {text[pos]!r}", line, pos - start + 1)
        kind = m.lastgroup
        if kind == "nl":
            line, start = line + 1, m.end()
        elif kind not in ("ws", "comment"):
            out.append(Token(kind, m.group(), line, pos - start + 1))
        pos = m.end()
    out.append(Token("eof", "", line, pos - start + 1))
    return out


@dataclass
class ModelFile:
    kind: str
    name: str
    gens: List[Tuple[str, int]] = field(default_factory=list)
    diffs: List[Tuple[str, Poly]] = field(default_factory=list)
    muls: List[Tuple[str, str, Poly]] = field(default_factory=list)
    unit: Optional[str] = None
    # source positions keyed by ("gen", g), ("d", g), ("mul", a, b), ("unit", u) or ("ident", first use)
    positions: Dict[tuple, Pos] = field(default_factory=dict, compare=False, repr=False)


class _Parser:
    def __init__(self, text: str):
        self.toks = tokenize(text)
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def fail(self, expected: Tuple[str, ...], message: str = "") -> None:
        t = self.tok
        raise errors.DSLSyntaxError(message or f"unexpected {t.describe()}", t.line, t.col, expected)

    def sym(self, s: str) -> Token:
        if self.tok.kind == "sym" and self.tok.text == s:
            self.i += 1
            return self.toks[self.i - 1]
        self.fail((repr(s),))

    def at_sym(self, s: str) -> bool:
        return self.tok.kind == "sym" and self.tok.text == s

    def ident(self) -> Token:
        if self.tok.kind == "ident":
            self.i += 1
            return self.toks[self.i - 1]
        self.fail(("identifier",))

    def integer(self) -> int:
        if self.tok.kind == "int":
            self.i += 1
            return int(self.toks[self.i - 1].text)
        self.fail(("integer",))

    # -- grammar ----------------------------------------------------------------
    def file(self) -> ModelFile:
        t = self.tok
        if t.kind != "ident" or t.text not in KINDS:
            self.fail(tuple(repr(k) for k in KINDS))
        self.i += 1
        name = self.ident().text
        mf = ModelFile(t.text, name)
        self.sym("{")
        while not self.at_sym("}"):
            self.item(mf)
        self.sym("}")
        if self.tok.kind != "eof":
            self.fail(("end of input",))
        return mf

    def item(self, mf: ModelFile) -> None:
        t = self.tok
        if t.kind != "ident" or t.text not in ("gen", "d", "mul", "unit"):
            self.fail(("'gen'", "'d'", "'mul'", "'unit'", "'}'"))
        self.i += 1
        if t.text == "gen":
            g = self.ident()
            self.sym(":")
            deg = self.integer()
            mf.gens.append((g.text, deg))
            mf.positions[("gen", g.text)] = (g.line, g.col)
        elif t.text == "d":
            g = self.ident()
            mf.positions.setdefault(("ident", g.text), (g.line, g.col))
            self.sym("=")
            mf.diffs.append((g.text, self.poly(mf)))
            mf.positions[("d", g.text)] = (g.line, g.col)
        elif t.text == "mul":
            a = self.ident()
            self.sym("*")
            b = self.ident()
            self.sym("=")
            mf.muls.append((a.text, b.text, self.poly(mf)))
            mf.positions[("mul", a.text, b.text)] = (a.line, a.col)
            for tok in (a, b):
                mf.positions.setdefault(("ident", tok.text), (tok.line, tok.col))
        else:
            g = self.ident()
            mf.unit = g.text
            mf.positions[("unit", g.text)] = (g.line, g.col)
        self.sym(";")

    def poly(self, mf: ModelFile) -> Poly:
        t = self.tok
        if t.kind == "int" and t.text.strip("0") == "" and self.toks[self.i + 1].text == ";":
            self.i += 1
            return ()
        terms = [self.term(mf)]
        while self.at_sym("+") or self.at_sym("-"):
            sign = -1 if self.tok.text == "-" else 1
            self.i += 1
            c, factors = self.term(mf)
            terms.append((sign * c, factors))
        return tuple(terms)

    def term(self, mf: ModelFile) -> Term:
        coeff = Fraction(1)
        if self.at_sym("-") and self.toks[self.i + 1].kind == "ident":
            self.i += 1
            coeff = Fraction(-1)
        elif self.tok.kind == "int" or self.at_sym("-"):
            coeff = self.rat()
            self.sym("*")
        factors = [self.factor(mf)]
        while self.at_sym("*"):
            self.i += 1
            factors.append(self.factor(mf))
        return coeff, tuple(factors)

    def factor(self, mf: ModelFile) -> Factor:
        g = self.ident()
        mf.positions.setdefault(("ident", g.text), (g.line, g.col))
        exp = 1
        if self.at_sym("^"):
            self.i += 1
            exp = self.integer()
        return g.text, exp

    def rat(self) -> Fraction:
        sign = 1
        if self.at_sym("-"):
            self.i += 1
            sign = -1
        num = self.integer()
        den = 1
        if self.at_sym("/"):
            self.i += 1
            t = self.tok
            den = self.integer()
            if den == 0:
                raise errors.DSLSyntaxError("zero denominator", t.line, t.col)
        return sign * Fraction(num, den)


def parse(text: str) -> ModelFile:
    return _Parser(text).file()


# -- printing -------------------------------------------------------------------

def format_rat(c: Fraction) -> str:
    c = Fraction(c)
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def format_poly(p: Poly) -> str:
    if not p:
        return "0"
    out = ""
    for c, factors in p:
        word = "*".join(g if e == 1 else f"{g}^{e}" for g, e in factors)
        sign, c = ("-", -c) if c < 0 else ("+", c)
        body = word if c == 1 else f"{format_rat(c)}*{word}"
        if not out:
            out = body if sign == "+" else "-" + body
        else:
            out += f" {sign} {body}"
    return out


def print_model(mf: ModelFile) -> str:
    lines = [f"{mf.kind} {mf.name} {{"]
    if mf.unit is not None:
        lines.append(f"  unit {mf.unit};")
    lines += [f"  gen {g}:{d};" for g, d in mf.gens]
    lines += [f"  mul {a}*{b} = {format_poly(p)};" for a, b, p in mf.muls]
    lines += [f"  d {g} = {format_poly(p)};" for g, p in mf.diffs]
    lines.append("}")
    return "\n".join(lines) + "\n"


def ident_name(s: str) -> str:
    out = re.sub(r"[^A-Za-z0-9_]+", "_", s).strip("_") or "M"
    return out if re.match(r"[A-Za-z_]", out) else "M" + out


def _elem_poly(u: Elem) -> Poly:
    ring = u.ring
    terms = []
    for m in sorted(u.terms):
        terms.append((u.terms[m], tuple((ring.gens[i].name, e) for i, e in m)))
    return tuple(terms)


def _vec_poly(alg: FiniteAlgebra, v) -> Poly:
    return tuple((v[i], ((alg.labels[i], 1),)) for i in sorted(v))


def from_free(model: FreeModel, name: Optional[str] = None) -> ModelFile:
    mf = ModelFile("cdga", ident_name(name or model.name))
    mf.gens = [(g.name, g.degree) for g in model.gens]
    mf.diffs = [(model.gens[i].name, _elem_poly(u)) for i, u in sorted(model.diff.items())]
    return mf


def from_finite(alg: FiniteAlgebra, name: Optional[str] = None) -> ModelFile:
    mf = ModelFile("algebra", ident_name(name or alg.name))
    if alg.unit_label != "1":
        mf.unit = alg.unit_label
    mf.gens = [(alg.labels[i], alg.degrees[i]) for i in alg.positive]
    for (i, j), v in sorted(alg.mul_table.items()):
        if i <= j:
            mf.muls.append((alg.labels[i], alg.labels[j], _vec_poly(alg, v)))
    mf.diffs = [(alg.labels[i], _vec_poly(alg, v)) for i, v in sorted(alg.diff.items())]
    return mf


def dump(obj, name: Optional[str] = None) -> str:
    if isinstance(obj, FreeModel):
        return print_model(from_free(obj, name))
    if isinstance(obj, FiniteAlgebra):
        return print_model(from_finite(obj, name))
    model = getattr(obj, "model", None)
    if isinstance(model, FreeModel):
        return print_model(from_free(model, name))
    raise TypeError(f"cannot print {type(obj).__name__}")


# -- conversion -------------------------------------------------------------------

def _unknown(mf: ModelFile, ident: str, where: str) -> errors.UnknownIdentifier:
    line, col = mf.positions.get(("ident", ident), (0, 0))
    prefix = f"{line}:{col}: " if line else ""
    return errors.UnknownIdentifier(f"{prefix}unknown identifier {ident!r} in {where}")


def _duplicates(mf: ModelFile) -> None:
    seen = set()
    for g, _ in mf.gens:
        if g in seen:
            line, col = mf.positions.get(("gen", g), (0, 0))
            raise errors.ModelError(f"{line}:{col}: generator {g!r} declared twice")
        seen.add(g)
    ds = [g for g, _ in mf.diffs]
    for g in ds:
        if ds.count(g) > 1:
            raise errors.ModelError(f"differential of {g!r} given twice")


def to_free(mf: ModelFile) -> FreeModel:
    if mf.kind != "cdga":
        raise errors.ModelError(f"{mf.name} is an algebra file, not a cdga file")
    if mf.muls or mf.unit is not None:
        raise errors.ModelError("'mul' and 'unit' items are only allowed in algebra files")
    _duplicates(mf)
    ring = FreeAlgebra(mf.gens)
    diff = {}
    for g, p in mf.diffs:
        if g not in ring.index:
            raise _unknown(mf, g, "a 'd' item")
        terms = []
        for c, factors in p:
            mono = ring.one()
            for f, e in factors:
                if f not in ring.index:
                    raise _unknown(mf, f, f"d {g}")
                mono = mono * ring.gen(f) ** e
            terms.append(mono.scale(c))
        u = ring.zero()
        for t in terms:
            u = u + t
        diff[g] = u
    return validate_free(mf.gens, diff, name=mf.name, ring=ring)


def _linear(mf: ModelFile, p: Poly, labels: set, where: str) -> Dict[str, Fraction]:
    out: Dict[str, Fraction] = {}
    for c, factors in p:
        if len(factors) != 1 or factors[0][1] != 1:
            raise errors.ModelError(f"{where}: algebra right-hand sides must be linear in basis elements")
        lab = factors[0][0]
        if lab not in labels:
            raise _unknown(mf, lab, where)
        out[lab] = out.get(lab, 0) + c
    return {k: v for k, v in out.items() if v}


def to_finite(mf: ModelFile) -> FiniteAlgebra:
    if mf.kind != "algebra":
        raise errors.ModelError(f"{mf.name} is a cdga file, not an algebra file")
    _duplicates(mf)
    labels = {g for g, _ in mf.gens} | {mf.unit or "1"}
    table = {}
    for a, b, p in mf.muls:
        for lab in (a, b):
            if lab not in labels:
                raise _unknown(mf, lab, f"mul {a}*{b}")
        if (a, b) in table:
            raise errors.ModelError(f"product {a}*{b} given twice")
        table[(a, b)] = _linear(mf, p, labels, f"mul {a}*{b}")
    diff = {}
    for g, p in mf.diffs:
        if g not in labels:
            raise _unknown(mf, g, "a 'd' item")
        diff[g] = _linear(mf, p, labels, f"d {g}")
    return validate_finite(mf.gens, table, diff, unit=mf.unit, name=mf.name)


def load(text: str) -> Union[FreeModel, FiniteAlgebra]:
    mf = parse(text)
    return to_free(mf) if mf.kind == "cdga" else to_finite(mf)


def load_file(path) -> Union[FreeModel, FiniteAlgebra]:
    with open(path, encoding="utf-8") as fh:
        return load(fh.read())
