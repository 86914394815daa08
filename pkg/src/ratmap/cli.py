"""Command-line front end: ``ratmap <command> ...``.

Exit status: 0 on success, 2 when an input is not a valid model, 3 when a
valid input falls outside the hypotheses of the requested computation.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

from . import dsl, errors, library
from .cdga import (INFINITY, FiniteAlgebra, FreeModel, connectivity, differential_length,
                   dimension, nilpotency)
from .cohomology import cohomology, cup_length
from .haefliger import build_map_model
from .reduction import freeness_pipeline, hn_structure, postnikov_tower

EXIT_OK, EXIT_INVALID, EXIT_PRECONDITION = 0, 2, 3


def num(v) -> Any:
    """JSON form of an exact number: ints stay ints, fractions and ∞ become strings."""
    if v is None:
        return None
    if v == INFINITY:
        return "inf"
    if isinstance(v, Fraction):
        return v.numerator if v.denominator == 1 else f"{v.numerator}/{v.denominator}"
    return v


@dataclass
class Report:
    command: str
    inputs: List[Dict[str, str]] = field(default_factory=list)
    invariants: Dict[str, Any] = field(default_factory=dict)
    verdict: Optional[str] = None
    generators: List[Any] = field(default_factory=list)
    witness: Optional[Dict[str, Any]] = None
    tower: Optional[Dict[str, Any]] = None
    timings_ms: Dict[str, float] = field(default_factory=dict)
    details: Dict[str, Any] = field(default_factory=dict)
    lines: List[str] = field(default_factory=list)
    as_json: bool = field(default=False, repr=False)

    def to_json(self) -> Dict[str, Any]:
        inv = {k: num(self.invariants.get(k)) for k in ("dl", "cup", "conn", "dim", "nilpotency")}
        out = {
            "command": self.command,
            "inputs": self.inputs,
            "invariants": inv,
            "verdict": self.verdict,
            "generators": self.generators,
            "witness": self.witness,
            "tower": self.tower,
            "timings_ms": self.timings_ms,
        }
        if self.details:
            out["details"] = self.details
        return out

    def human(self) -> str:
        return "\n".join(self.lines) + "\n"


# -- loading -------------------------------------------------------------------

def _load(path: str, report: Report):
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise errors.ModelError(f"cannot read {path}: {exc.strerror}") from exc
    obj = dsl.load(text)
    report.inputs.append({
        "path": path,
        "kind": "cdga" if isinstance(obj, FreeModel) else "algebra",
        "name": obj.name,
        "sha256": hashlib.sha256(text.encode()).hexdigest(),
    })
    return obj


def _need(obj, kind, path: str):
    if not isinstance(obj, kind):
        want = "a cdga (free model)" if kind is FreeModel else "an algebra"
        raise errors.ModelError(f"{path} must be {want} file")
    return obj


def _fmt(v) -> str:
    return "inf" if v == INFINITY else str(v)


def _degrees(ds: Sequence[int]) -> str:
    return ", ".join(map(str, ds)) if ds else "(none)"


# -- commands --------------------------------------------------------------------

def cmd_validate(args, rep: Report) -> None:
    obj = _load(args.file, rep)
    rep.verdict = "VALID"
    if isinstance(obj, FreeModel):
        rep.details = {"generators": len(obj.gens), "minimal": obj.minimal}
        rep.lines.append(f"VALID cdga {obj.name}: {len(obj.gens)} generators, "
                         f"{'minimal' if obj.minimal else 'not minimal'}")
    else:
        rep.details = {"dimension": len(obj)}
        rep.lines.append(f"VALID algebra {obj.name}: {len(obj)} basis elements")


def _algebra_invariants(x: FiniteAlgebra) -> Dict[str, Any]:
    return {"cup": cup_length(x), "nilpotency": nilpotency(x), "dim": dimension(x)}


def _model_invariants(y: FreeModel) -> Dict[str, Any]:
    return {"dl": differential_length(y), "conn": connectivity(y)}


def cmd_invariants(args, rep: Report) -> None:
    for path in args.files:
        obj = _load(path, rep)
        if isinstance(obj, FreeModel):
            inv = _model_invariants(obj)
            rep.lines.append(f"{obj.name}: dl = {_fmt(inv['dl'])}, conn = {inv['conn']}")
        else:
            inv = _algebra_invariants(obj)
            rep.lines.append(f"{obj.name}: cup = {inv['cup']}, nilpotency = {inv['nilpotency']}, "
                             f"dim = {inv['dim']}")
        for k, v in inv.items():
            if k in rep.invariants and rep.invariants[k] != v:
                raise errors.PreconditionFailed(f"several inputs define {k}; pass one of each kind")
            rep.invariants[k] = v
    rep.verdict = "OK"


def cmd_cohomology(args, rep: Report) -> None:
    obj = _load(args.file, rep)
    N = args.max_degree
    if N is None:
        if isinstance(obj, FreeModel):
            raise errors.InvalidParameter("--max-degree is required for cdga files")
        N = obj.top_degree
    if N < 0:
        raise errors.InvalidParameter("--max-degree must be >= 0")
    cr = cohomology(obj, N)
    rep.verdict = "OK"
    rep.details = {"max_degree": N, "betti": cr.betti,
                   "representatives": {str(n): cr.rep_labels(n) for n in range(N + 1) if cr.betti[n]}}
    rep.lines.append(f"cohomology of {obj.name} through degree {N}")
    for n in range(N + 1):
        if cr.betti[n]:
            rep.lines.append(f"  H^{n}: dim {cr.betti[n]}  [{', '.join(cr.rep_labels(n))}]")
    rep.lines.append("betti = " + " ".join(map(str, cr.betti)))


def _pair(args, rep: Report):
    x = _need(_load(args.x, rep), FiniteAlgebra, args.x)
    y = _need(_load(args.y, rep), FreeModel, args.y)
    if args.max_degree < 0:
        raise errors.InvalidParameter("--max-degree must be >= 0")
    return x, y


def cmd_map_model(args, rep: Report) -> None:
    x, y = _pair(args, rep)
    mm = build_map_model(x, y, args.max_degree)
    rep.verdict = "OK"
    rep.lines.append(f"model of map({x.name}, {y.name}) exact through degree {args.max_degree}")
    for i, z in enumerate(mm.zgens):
        d = mm.diff.get(i)
        entry = {"name": z.name, "degree": z.degree, "differential": str(d) if d else "0"}
        rep.generators.append(entry)
        rep.lines.append(f"  {z.name} : {z.degree}   D = {entry['differential']}")
    if args.emit:
        Path(args.emit).write_text(dsl.dump(mm.model, f"map_{x.name}_{y.name}"), encoding="utf-8")
        rep.details = {"emitted": args.emit}
        rep.lines.append(f"wrote {args.emit}")


def cmd_freeness(args, rep: Report) -> None:
    x, y = _pair(args, rep)
    fr = freeness_pipeline(x, y, args.max_degree)
    rep.invariants = {"dl": fr.dl, "cup": fr.cup, "conn": fr.conn, "dim": fr.dim,
                      "nilpotency": nilpotency(x)}
    rep.verdict = fr.verdict
    rep.generators = list(fr.generator_degrees)
    rep.details = {"branch": fr.branch, "degree_bounded": fr.degree_bounded,
                   "max_degree": fr.max_degree, "failure_degree": fr.failure_degree,
                   "diagnostics": fr.diagnostics}
    if fr.free:
        rep.lines.append(f"FREE; generators at degrees {_degrees(fr.generator_degrees)}")
    else:
        rep.lines.append(f"NOT_FREE; first failure at degree {_fmt(fr.failure_degree)}")
    rep.lines.append(f"branch: {fr.branch}" + (f" (degree-bounded through {fr.max_degree})"
                                               if fr.degree_bounded else ""))
    rep.lines.append(f"cup = {fr.cup}, dl = {_fmt(fr.dl)}, conn = {fr.conn}, dim = {fr.dim}")
    if fr.witness is not None:
        w = fr.witness
        rep.witness = {"y": w.y, "r": w.r, "omega": "*".join(w.omega), "degree": w.obstruction_degree}
        rep.lines.append(f"witness: y = {w.y}, r = {w.r}, omega = {'*'.join(w.omega)}, "
                         f"degree = {w.obstruction_degree}")
    for d in fr.diagnostics:
        rep.lines.append(f"note: {d}")


def cmd_hn(args, rep: Report) -> None:
    y = _need(_load(args.y, rep), FreeModel, args.y)
    dl = differential_length(y)
    rep.invariants = {"dl": dl, "conn": connectivity(y)}
    mh = dl - 1 if dl != INFINITY else INFINITY
    rep.details = {"m_H": num(mh)}
    rep.verdict = "OK"
    rep.lines.append(f"dl = {_fmt(dl)}; m_H of rationalization = {_fmt(mh)}")
    if args.r is not None:
        hs = hn_structure(y, args.r)
        rep.verdict = "TRUE" if hs.is_morphism else "FALSE"
        rep.details.update({"r": args.r, "is_morphism": hs.is_morphism,
                            "obstruction": {k: str(v) for k, v in hs.obstruction.items()}})
        rep.lines.append(f"H(r) test at r = {args.r}: {'true' if hs.is_morphism else 'false'}")
        for k, v in hs.obstruction.items():
            rep.lines.append(f"  obstruction on {k}: {v}")


def cmd_postnikov(args, rep: Report) -> None:
    x, y = _pair(args, rep)
    tr = postnikov_tower(x, y, args.max_degree)
    rep.invariants = {"dl": differential_length(y), "cup": cup_length(x), "conn": connectivity(y),
                      "dim": dimension(x), "nilpotency": tr.m}
    stages = [{"label": st.label, "dims": {str(k): v for k, v in st.dims.items()},
               "zero_differential": st.zero_differential, "generators": st.z_degrees}
              for st in tr.stages]
    rep.tower = {"stages": stages, "s": tr.s, "achieved": tr.achieved}
    rep.details = {"m_eff": tr.m_eff, "ideal_exponents": tr.ideal_exponents,
                   "agrees_with_s": tr.agrees_with_s, "dim_le_conn": tr.hypothesis_dim_le_conn,
                   "all_zero": tr.all_zero}
    rep.verdict = "ZERO_DIFFERENTIAL" if tr.all_zero else "NONZERO_DIFFERENTIAL"
    rep.lines.append(f"tower for map({x.name}, {y.name}): r = {tr.r}, m = {tr.m}, "
                     f"m_eff = {tr.m_eff}, s = {tr.s}, achieved = {tr.achieved}")
    for st in tr.stages:
        dims = ", ".join(f"{k}:{v}" for k, v in st.dims.items()) or "0"
        rep.lines.append(f"  {st.label}: dims {{{dims}}}, reduced D "
                         f"{'= 0' if st.zero_differential else '!= 0'}")
    rep.lines.append("achieved stage count " + ("agrees with" if tr.agrees_with_s else "differs from")
                     + f" s = {tr.s}")
    if not tr.hypothesis_dim_le_conn:
        rep.lines.append("note: dim > conn, outside the hypothesis of the tower statement")


def cmd_make(args, rep: Report) -> None:
    obj = library.make(args.name, args.args)
    text = dsl.dump(obj)
    rep.verdict = "OK"
    rep.details = {"model": text}
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
        rep.lines.append(f"wrote {args.output}")
    else:
        rep.lines.append(text.rstrip("\n"))


# -- argument parsing --------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    # SUPPRESS keeps a subparser from resetting a flag given before the command
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS,
                        help="emit a JSON report")
    p = argparse.ArgumentParser(prog="ratmap", parents=[common],
                                description="Rational models of mapping spaces.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("validate", parents=[common], help="check a model file")
    s.add_argument("file")
    s.set_defaults(func=cmd_validate)

    s = sub.add_parser("invariants", parents=[common], help="dl, conn / cup, nilpotency, dim")
    s.add_argument("files", nargs="+")
    s.set_defaults(func=cmd_invariants)

    s = sub.add_parser("cohomology", parents=[common], help="Betti numbers and representatives")
    s.add_argument("file")
    s.add_argument("--max-degree", type=int)
    s.set_defaults(func=cmd_cohomology)

    for name, func, helptext in [("map-model", cmd_map_model, "mapping-space model"),
                                 ("freeness", cmd_freeness, "is the cohomology free?"),
                                 ("postnikov", cmd_postnikov, "power-ideal tower")]:
        s = sub.add_parser(name, parents=[common], help=helptext)
        s.add_argument("x", help="source algebra file")
        s.add_argument("y", help="target cdga file")
        s.add_argument("--max-degree", type=int, required=True)
        if name == "map-model":
            s.add_argument("--emit", metavar="FILE", help="write the model as a cdga file")
        s.set_defaults(func=func)

    s = sub.add_parser("hn", parents=[common], help="differential length and the H(r) test")
    s.add_argument("y")
    s.add_argument("--r", type=int)
    s.set_defaults(func=cmd_hn)

    s = sub.add_parser("make", parents=[common], help="print a library model")
    s.add_argument("name", choices=sorted(library.REGISTRY))
    s.add_argument("args", nargs="*", type=int)
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_make)
    return p


def run(argv: Optional[Sequence[str]] = None) -> tuple:
    """Execute a command; returns (exit code, report or None, error message or None)."""
    args = build_parser().parse_args(argv)
    rep = Report(args.command, as_json=getattr(args, "json", False))
    t0 = time.perf_counter()
    try:
        args.func(args, rep)
    except errors.ModelError as exc:
        return EXIT_INVALID, rep, f"invalid input: {exc}"
    except errors.PreconditionError as exc:
        return EXIT_PRECONDITION, rep, f"precondition failed: {exc}"
    rep.timings_ms["total"] = round((time.perf_counter() - t0) * 1000, 3)
    return EXIT_OK, rep, None


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    code, rep, err = run(argv)
    as_json = rep.as_json
    if err is not None:
        if as_json:
            print(json.dumps({"command": rep.command, "error": err, "exit_code": code}))
        else:
            print(err, file=sys.stderr)
        return code
    if as_json:
        print(json.dumps(rep.to_json(), indent=2))
    else:
        sys.stdout.write(rep.human())
    return code


if __name__ == "__main__":
    sys.exit(main())
