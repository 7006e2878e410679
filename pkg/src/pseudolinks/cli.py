"""Command-line front end.

Errors are reported as one JSON object on stderr with a nonzero exit code:
2 for usage errors, 3 for unreadable or invalid input, 4 for evaluation
errors, 1 when a verification or equivalence check fails.
"""
from __future__ import annotations

import argparse
import json
import random
import sys

from . import bracket as B
from .diagram import (DiagramError, DocumentError, Surface, forget_tags, from_document, serialize,
                      to_document, validate)
from .fixtures import fixture_document, fixture_names, load_fixture
from .generate import random_diagram
from .mixed import (H_KIND, MixedDiagram, annular_to_o_mixed, h_mixed_bracket, mixed_from_document,
                    mixed_normalized_bracket, mixed_to_document, mixed_writhe, o_mixed_bracket,
                    toroidal_to_h_mixed, validate_mixed)
from .moves import FULL, REGULAR, random_walk
from .poly import PolyError, parse_canonical, render_canonical, render_jones, to_json

VARIANTS = [v.value.replace("_", "-") for v in B.Variant]
WALK_CAP = 12


class CliError(Exception):
    def __init__(self, code: int, kind: str, message: str) -> None:
        super().__init__(message)
        self.code, self.kind, self.message = code, kind, message


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise CliError(2, "usage", message)


def _read_document(args) -> dict:
    if getattr(args, "fixture", None):
        try:
            return fixture_document(args.fixture)
        except KeyError as exc:
            raise CliError(3, "input", str(exc)) from None
    if not args.input:
        raise CliError(2, "usage", "one of --input or --fixture is required")
    try:
        text = sys.stdin.read() if args.input == "-" else open(args.input, encoding="utf-8").read()
    except OSError as exc:
        raise CliError(3, "input", str(exc)) from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise CliError(3, "syntax", str(exc)) from None


def _diagram(doc: dict):
    try:
        if isinstance(doc, dict) and "kind" in doc and "fixed_components" in doc:
            m = mixed_from_document(doc)
            bad = validate_mixed(m)
        else:
            m = from_document(doc)
            bad = validate(m)
    except DocumentError as exc:
        raise CliError(3, exc.kind, str(exc)) from None
    if bad:
        raise CliError(3, "validation", "; ".join(f"{v.code} {list(v.ids)}: {v.message}" for v in bad))
    return m


def _render(p, fmt: str, jones: bool) -> str:
    if fmt == "json":
        return json.dumps(to_json(p))
    return render_jones(p) if jones else render_canonical(p)


def cmd_compute(args) -> int:
    if args.jones and not args.normalize:
        raise CliError(2, "usage", "--jones requires --normalize")
    d = _diagram(_read_document(args))
    if isinstance(d, MixedDiagram):
        p = _mixed_compute(d, args)
    else:
        variant = B.Variant(args.variant.replace("-", "_")) if args.variant else B.default_variant(d)
        if variant.surface != d.surface:
            raise CliError(2, "usage", f"variant {args.variant} needs a diagram on the {variant.surface.value}")
        fn = B.normalized_bracket if args.normalize else B.bracket
        p = fn(d, variant, threads=args.threads, max_crossings=args.max_crossings)
    print(_render(p, args.format, args.jones))
    return 0


def _mixed_compute(m: MixedDiagram, args):
    name = args.variant or ("annular" if m.kind == "O" else "toroidal")
    if m.kind == "O":
        table = {"annular": False, "annular-universal": True}
        if name not in table:
            raise CliError(2, "usage", "O-mixed diagrams take annular variants")
        p = o_mixed_bracket(m, universal=table[name], threads=args.threads)
    else:
        table = {"toroidal": "plain", "toroidal-universal": "universal", "toroidal-reduced": "reduced"}
        if name not in table:
            raise CliError(2, "usage", "H-mixed diagrams take toroidal variants")
        p = h_mixed_bracket(m, table[name], threads=args.threads)
    return B.normalize(p, mixed_writhe(m)) if args.normalize else p


def _corpus(args) -> list[tuple[str, object]]:
    if args.input or args.fixture:
        d = _diagram(_read_document(args))
        if isinstance(d, MixedDiagram):
            raise CliError(2, "usage", "verify takes plain diagrams")
        return [(args.fixture or args.input, d)]
    names = [n for n in fixture_names() if load_fixture(n).n_crossings <= 6]
    return [(n, load_fixture(n)) for n in names]


def verify_report(corpus, moves: str, trials: int, seed: int, max_steps: int) -> dict:
    allowed = REGULAR if moves == "regular" else FULL
    fn = B.bracket if moves == "regular" else B.normalized_bracket
    rng = random.Random(seed)
    baseline = {name: fn(d) for name, d in corpus}
    failures = []
    for t in range(trials):
        name, d = corpus[t % len(corpus)]
        walk_seed = rng.getrandbits(32)
        steps = rng.randint(1, max_steps)
        walk = random_walk(d, walk_seed, steps, allowed, max_crossings=WALK_CAP)
        got = fn(walk.diagram)
        if got != baseline[name]:
            failures.append({"trial": t, "input": name, "walk_seed": walk_seed, "steps": steps,
                             "expected": render_canonical(baseline[name]),
                             "got": render_canonical(got), "trace": walk.trace_json()})
    return {"moves": moves, "trials": trials, "seed": seed, "max_steps": max_steps,
            "passed": trials - len(failures), "failed": len(failures), "failures": failures}


def cmd_verify(args) -> int:
    if args.trials < 0 or args.max_steps < 1:
        raise CliError(2, "usage", "need --trials >= 0 and --max-steps >= 1")
    report = verify_report(_corpus(args), args.moves, args.trials, args.seed, args.max_steps)
    print(json.dumps(report, sort_keys=True))
    return 1 if report["failed"] else 0


def cmd_convert(args) -> int:
    d = _diagram(_read_document(args))
    if isinstance(d, MixedDiagram):
        raise CliError(2, "usage", "convert takes plain diagrams")
    need = {"o-mixed": Surface.ANNULUS, "h-mixed": Surface.TORUS}.get(args.to)
    if need is not None and d.surface != need:
        raise CliError(2, "usage", f"--to {args.to} needs a diagram on the {need.value}")
    checks = {}
    if args.to == "planar-forgetful":
        out = forget_tags(d)
        doc = to_document(out)
        if args.check:
            checks = _forgetful_checks(d, out)
    else:
        m = annular_to_o_mixed(d) if args.to == "o-mixed" else toroidal_to_h_mixed(d)
        doc = mixed_to_document(m)
        if args.check:
            checks = _mixed_checks(d, m)
    print(json.dumps(doc, sort_keys=True))
    if args.check:
        ok = all(checks.values())
        print(json.dumps({"check": "pass" if ok else "fail", "details": checks}, sort_keys=True),
              file=sys.stderr)
        return 0 if ok else 1
    return 0


def _forgetful_checks(d, flat) -> dict:
    p = B.bracket(d)
    if d.surface == Surface.PLANE:
        return {"planar": p == B.bracket(flat)}
    if d.surface == Surface.ANNULUS:
        return {"planar": B.specialize_annular_to_planar(p) == B.bracket(flat)}
    classes = {(v.p, v.q) for v in p.variables() if v.name == "s_pq"}
    if not classes <= {(1, 0), (0, 1)}:
        return {}
    return {"planar": B.specialize_toroidal(p, "plane") == B.bracket(flat)}


def _mixed_checks(d, m: MixedDiagram) -> dict:
    if m.kind == H_KIND:
        pairs = [("plain", B.Variant.TOROIDAL), ("universal", B.Variant.TOROIDAL_UNIVERSAL),
                 ("reduced", B.Variant.TOROIDAL_REDUCED)]
        out = {name: h_mixed_bracket(m, name) == B.bracket(d, v) for name, v in pairs}
    else:
        out = {"plain": o_mixed_bracket(m) == B.bracket(d, B.Variant.ANNULAR),
               "universal": o_mixed_bracket(m, True) == B.bracket(d, B.Variant.ANNULAR_UNIVERSAL)}
    out["normalized"] = mixed_normalized_bracket(m) == B.normalized_bracket(d)
    return out


def cmd_gen(args) -> int:
    g = args.generator
    if g == "torus-class":
        try:
            d = B.torus_class_diagram(args.p, args.q, args.k, args.target)
        except (PolyError, DiagramError, ValueError) as exc:
            raise CliError(2, "usage", str(exc)) from None
    else:
        try:
            d = random_diagram(args.surface, args.n_crossings, args.n_pre, args.seed,
                               max_crossings=args.max_crossings)
        except ValueError as exc:
            raise CliError(2, "usage", str(exc)) from None
    print(serialize(d))
    return 0


SELFCHECKS = [
    ("pseudo_trefoil", "planar",
     "-1*A^3*V^2 + 1*A^-1*V*H - 1*A^-3*V*H - 1*A^-3*H^2 + 1*A^-5*V*H"),
    ("annular_pseudo_trefoil", "annular",
     "-1*A^3*V^2*s^2 - 1*A^-1*V^2*s^2 + 1*A^-1*V^2 + 2*A^-1*V*H - 1*A^-3*V*H - 1*A^-3*H^2 "
     "+ 1*A^-5*V*H"),
    ("torus_trefoil_left", "toroidal",
     "-1*A^3*V^2*s_{0,1}^2 - 1*A^-1*V^2*s_{0,1}^2 + 1*A^-1*V^2 + 2*A^-1*V*H - 1*A^-3*V*H "
     "- 1*A^-3*H^2 + 1*A^-5*V*H"),
    ("torus_trefoil_right", "toroidal",
     "-1*A^2*V*H*s_{1,0} + 1*V^2*s_{1,2} + 1*V*H*s_{1,0} + 1*H^2*s_{1,0} - 1*A^-2*V*H*s_{1,0}"),
    ("torus_pair_coherent", "toroidal", "1*V*s_{1,1} + 1*H*s_{-1,1}"),
    ("torus_pair_reversed", "toroidal", "1*V*s_{-1,1} + 1*H*s_{1,1}"),
]


def cmd_selfcheck(args) -> int:
    failed = 0
    for name, variant, want in SELFCHECKS:
        got = B.bracket(load_fixture(name), B.Variant(variant))
        ok = got == parse_canonical(want)
        failed += not ok
        line = {"fixture": name, "variant": variant, "status": "pass" if ok else "fail"}
        if not ok:
            line.update(expected=render_canonical(parse_canonical(want)), got=render_canonical(got))
        print(json.dumps(line, sort_keys=True))
    return 1 if failed else 0


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="pseudolinks", description="Pseudo bracket invariants of pseudo link diagrams.")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add_input(p):
        p.add_argument("--input", help="diagram document path, or - for stdin")
        p.add_argument("--fixture", help="name of a shipped fixture")

    p = sub.add_parser("compute", help="evaluate a bracket")
    add_input(p)
    p.add_argument("--variant", choices=VARIANTS)
    p.add_argument("--normalize", action="store_true")
    p.add_argument("--jones", action="store_true")
    p.add_argument("--format", choices=["text", "json"], default="text")
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--max-crossings", type=int, default=B.DEFAULT_MAX_CROSSINGS)
    p.set_defaults(fn=cmd_compute)

    p = sub.add_parser("verify", help="random isotopy walks must keep the invariant")
    add_input(p)
    p.add_argument("--corpus", choices=["builtin"], default="builtin")
    p.add_argument("--moves", choices=["regular", "full"], required=True)
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--max-steps", type=int, default=12)
    p.set_defaults(fn=cmd_verify)

    p = sub.add_parser("convert", help="convert to a mixed or planar representation")
    add_input(p)
    p.add_argument("--to", choices=["o-mixed", "h-mixed", "planar-forgetful"], required=True)
    p.add_argument("--check", action="store_true")
    p.set_defaults(fn=cmd_convert)

    p = sub.add_parser("gen", help="generate a diagram document")
    gsub = p.add_subparsers(dest="generator", required=True, parser_class=_Parser)
    t = gsub.add_parser("torus-class")
    t.add_argument("p", type=int)
    t.add_argument("q", type=int)
    t.add_argument("k", type=int)
    t.add_argument("target", choices=["annulus", "plane"])
    r = gsub.add_parser("random")
    r.add_argument("surface", choices=[s.value for s in Surface])
    r.add_argument("n_crossings", type=int)
    r.add_argument("n_pre", type=int)
    r.add_argument("seed", type=int)
    r.add_argument("--max-crossings", type=int, default=B.DEFAULT_MAX_CROSSINGS)
    p.set_defaults(fn=cmd_gen)

    p = sub.add_parser("selfcheck", help="compare shipped fixtures with known values")
    p.set_defaults(fn=cmd_selfcheck)
    return ap


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        if getattr(args, "threads", 1) < 1:
            raise CliError(2, "usage", "--threads must be positive")
        return args.fn(args)
    except CliError as exc:
        err = {"error": exc.kind, "message": exc.message}
        code = exc.code
    except (B.LoopError, B.CrossingCapError, PolyError, DiagramError) as exc:
        err = {"error": type(exc).__name__, "message": str(exc)}
        code = 4
    print(json.dumps(err, sort_keys=True), file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
