"""Command-line interface: ``k2forge <command> FILE [options]``.

FILE is a path to an algebra file, ``-`` for standard input, or
``corpus:NAME`` for a built-in corpus algebra.

Exit codes: 0 = K2 (conclusive), 10 = K2 through the stated bounds,
20 = not K2, 1 = input error, 2 = internal invariant violation.  Commands
that do not produce a verdict exit with 0 on success.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
import time
from dataclasses import asdict, dataclass, field as dc_field
from fractions import Fraction

from . import catalog
from .constructors import (
    ConstructionError,
    commutative_complete_intersection,
    ore_extension,
    parse_map,
    quotient_by_normal,
    tensor_product,
    twist,
)
from .dsl import AlgebraFile, DSLError, format_file, parse
from .exactlin import field_from_spec
from .freealg import Presentation
from .gbasis import DegreeBoundError, complete, default_degree_bound
from .k2core import K2_CONCLUSIVE, K2_UP_TO_BOUND, NOT_K2, k2_check, k2_module_check
from .monomial import monomial_k2_check
from .resolution import betti_table, resolve_cyclic, resolve_trivial, verify

EXIT_CODES = {K2_CONCLUSIVE: 0, K2_UP_TO_BOUND: 10, NOT_K2: 20}
EXIT_INPUT = 1
EXIT_INTERNAL = 2


class InputError(Exception):
    pass


class InvariantError(Exception):
    pass


# ---------------------------------------------------------------------------
# reports


@dataclass
class Report:
    algebra: str
    field: str
    bounds: dict | None = None
    verdict: str | None = None
    semantics: str | None = None
    engine: str | None = None
    witness: dict | None = None
    betti: list | None = None
    hilbert: list | None = None
    levels: list | None = None
    checks: dict | None = None
    certificate: dict | None = None
    timings: dict = dc_field(default_factory=dict)  # human output only

    def to_dict(self) -> dict:
        d = asdict(self)
        d.pop("timings")
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "Report":
        return cls(**json.loads(text))


def _num(F, c):
    v = F.lift(c)
    if isinstance(v, Fraction):
        return v.numerator if v.denominator == 1 else f"{v.numerator}/{v.denominator}"
    return int(v)


def _bounds_dict(n_max, d_max):
    return {"n_max": n_max, "d_max": d_max}


def render(report: Report) -> str:
    lines = [f"algebra   {report.algebra} over {report.field}"]
    if report.engine:
        lines.append(f"engine    {report.engine}")
    if report.bounds:
        lines.append(f"bounds    n_max={report.bounds.get('n_max')} d_max={report.bounds.get('d_max')}")
    if report.verdict:
        lines.append(f"verdict   {report.verdict} ({report.semantics})")
    if report.witness:
        lines.append("witness   " + ", ".join(f"{k}={v}" for k, v in sorted(report.witness.items())))
    if report.hilbert is not None:
        lines.append("hilbert   " + " ".join(str(h) for h in report.hilbert))
    if report.levels is not None:
        for i, level in enumerate(report.levels, 1):
            lines.append(f"S_{i:<7} {{{', '.join(level)}}}")
        lines.append(f"S_{len(report.levels) + 1:<7} {{}}")
    if report.betti:
        lines.append("betti     (n, internal degree, dim)")
        by_n: dict = {}
        for n, m, c in report.betti:
            by_n.setdefault(n, []).append(f"{m}^{c}" if c > 1 else f"{m}")
        for n in sorted(by_n):
            lines.append(f"  Q^{n}: " + " ".join(by_n[n]))
    if report.checks:
        lines.append("checks    " + " ".join(f"{k}={v}" for k, v in sorted(report.checks.items())))
    if report.timings:
        lines.append("time      " + " ".join(f"{k}={v:.2f}s" for k, v in sorted(report.timings.items())))
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# input


_FIELD_LINE = re.compile(r"^\s*field\b[^\n]*$", re.M)


def _field_line(spec: str) -> str:
    F = field_from_spec(spec)
    return "field Q" if F.spec == "q" else f"field GF {F.p}"


def read_text(source: str) -> str:
    if source == "-":
        return sys.stdin.read()
    if source.startswith("corpus:"):
        name = source.split(":", 1)[1]
        if name not in catalog.CORPUS:
            raise InputError(f"unknown corpus algebra {name!r}; known: {', '.join(catalog.names())}")
        return catalog.CORPUS[name]
    try:
        with open(source, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {source}: {exc.strerror}") from None


def load(source: str, field_spec: str | None = None) -> AlgebraFile:
    text = read_text(source)
    if field_spec:
        try:
            text = _field_line(field_spec) + "\n" + _FIELD_LINE.sub("", text)
        except ValueError as exc:
            raise InputError(str(exc)) from None
    try:
        return parse(text)
    except DSLError as exc:
        raise InputError(f"{source}:{exc.line}:{exc.col}: {exc.message}") from None


def _d_max(args, P: Presentation) -> int:
    d = args.d_max if args.d_max is not None else default_degree_bound(P)
    if d < P.max_degree():
        raise InputError(f"--d-max {d} is below the largest relation degree {P.max_degree()}")
    return d


# ---------------------------------------------------------------------------
# commands


def _monomial_report(P: Presentation, field_spec: str, certify: bool) -> Report:
    v = monomial_k2_check(P)
    fmt = P.alphabet.plain_word
    witness = None
    if not v.is_k2:
        b, a = v.witness
        witness = {"n": v.failure_level + 1, "level": v.failure_level, "b": fmt(b), "a": fmt(a),
                   "vector": None}
    cert = None
    if certify:
        cert = {"annihilators": {fmt(b): [[fmt(a), in_r, single] for a, in_r, single in diag]
                                 for b, diag in sorted(v.levels.diagnostics.items())}}
    return Report(P.name, field_spec, None, K2_CONCLUSIVE if v.is_k2 else NOT_K2, "conclusive",
                  "monomial", witness, None, None, v.levels.as_words(), None, cert)


def _general(P: Presentation, args, field_spec: str, module_gens: list[str] | None = None):
    timings = {}
    d_max = _d_max(args, P)
    t = time.perf_counter()
    g = complete(P, d_max)
    timings["groebner"] = time.perf_counter() - t
    t = time.perf_counter()
    if module_gens:
        res = resolve_cyclic(g, [P.poly(m) for m in module_gens], args.n_max, d_max)
    else:
        res = resolve_trivial(g, args.n_max, d_max)
    timings["resolution"] = time.perf_counter() - t
    return g, res, d_max, timings


def _checks(res, g) -> dict:
    v = verify(res, g)
    checks = {k: bool(v[k]) for k in ("d2zero", "exact", "minimal")}
    if not all(checks.values()):
        raise InvariantError("resolution failed verification: " + "; ".join(v.get("problems", [])[:3]))
    return checks


def cmd_check(args) -> tuple[Report, int]:
    af = load(args.file, args.field)
    P = af.presentation
    field_spec = P.field.spec
    module_gens = args.module.split(",") if args.module else None
    if P.is_monomial() and not args.force_general and not module_gens:
        rep = _monomial_report(P, field_spec, args.certify)
        return rep, EXIT_CODES[rep.verdict]
    g, res, d_max, timings = _general(P, args, field_spec, module_gens)
    t = time.perf_counter()
    k2 = k2_module_check(res, g) if module_gens else k2_check(res, g)
    timings["rank_tests"] = time.perf_counter() - t
    witness = None
    F = P.field
    if k2.witness:
        n, vec = k2.witness
        witness = {"n": n, "vector": [_num(F, c) for c in vec]}
    checks = _checks(res, g) if args.verify else None
    cert = None
    if args.certify:
        cert = {
            "ranks": {str(n): list(rr) for n, rr in sorted(k2.ranks.items())},
            "terminated": res.terminated,
            "termination_certified": res.termination_certified,
            "groebner_complete": g.is_complete,
        }
        if k2.witness_matrix is not None:
            m = k2.witness_matrix
            cert["witness_rows"] = [[_num(F, m.matrix.row(i).get(j, F.zero)) for j in range(m.matrix.ncols)]
                                    for i in range(m.rows)]
            cert["witness_columns"] = [list(map(str, c)) for c in m.columns]
    engine = "general-module" if module_gens else "general"
    rep = Report(P.name, field_spec, _bounds_dict(args.n_max, d_max), k2.verdict, k2.semantics, engine,
                 witness, [list(b) for b in k2.betti], g.hilbert_prefix(d_max), None, checks, cert, timings)
    return rep, EXIT_CODES[k2.verdict]


def cmd_monomial(args) -> tuple[Report, int]:
    af = load(args.file, args.field)
    P = af.presentation
    if not P.is_monomial():
        raise InputError("the monomial engine needs monomial relations (use 'check' instead)")
    rep = _monomial_report(P, P.field.spec, args.certify)
    return rep, EXIT_CODES[rep.verdict]


def cmd_resolve(args) -> tuple[Report, int]:
    af = load(args.file, args.field)
    P = af.presentation
    module_gens = args.module.split(",") if args.module else None
    g, res, d_max, timings = _general(P, args, P.field.spec, module_gens)
    checks = _checks(res, g) if args.verify else None
    cert = {"matrices": {str(n): [[str(p) for p in row] for row in res.matrix(n)]
                         for n in range(1, res.length + 1)},
            "terminated": res.terminated,
            "termination_certified": res.termination_certified}
    rep = Report(P.name, P.field.spec, _bounds_dict(args.n_max, d_max), None, None,
                 "general-module" if module_gens else "general", None,
                 [list(b) for b in betti_table(res)], g.hilbert_prefix(d_max), None, checks, cert, timings)
    return rep, 0


def cmd_betti(args) -> tuple[Report, int]:
    rep, code = cmd_resolve(args)
    rep.certificate = None
    return rep, code


def cmd_hilbert(args) -> tuple[Report, int]:
    af = load(args.file, args.field)
    P = af.presentation
    d_max = _d_max(args, P)
    g = complete(P, d_max)
    return Report(P.name, P.field.spec, _bounds_dict(None, d_max), hilbert=g.hilbert_prefix(d_max)), 0


# construction directives -----------------------------------------------


def _options(rest: str) -> dict[str, str]:
    """``key=value; key=value`` (values may contain commas and arrows)."""
    out = {}
    for part in rest.split(";"):
        part = part.strip()
        if not part:
            continue
        if "=" not in part:
            raise InputError(f"construction option {part!r} should look like key=value")
        k, v = part.split("=", 1)
        out[k.strip()] = v.strip()
    return out


def apply_directive(P: Presentation, kind: str, rest: str, bound: int | None, field_spec: str | None) -> Presentation:
    opts = _options(rest)
    try:
        if kind == "ore":
            sigma = parse_map(opts["sigma"]) if "sigma" in opts else None
            delta = parse_map(opts["delta"]) if "delta" in opts else None
            return ore_extension(P, sigma, delta, opts.get("var", "z"), bound, opts.get("name"))
        if kind == "tensor":
            if "with" not in opts:
                raise InputError("tensor needs with=FILE (or with=corpus:NAME)")
            other = load(opts["with"], field_spec or P.field.spec).presentation
            sigma = parse_map(opts["sigma"]) if "sigma" in opts else None
            return tensor_product(P, other, sigma, bound, opts.get("name"))
        if kind == "twist":
            if "sigma" not in opts:
                raise InputError("twist needs sigma=x->..., y->...")
            return twist(P, parse_map(opts["sigma"]), bound, opts.get("name"))
        if kind == "quotient":
            if "g" not in opts:
                raise InputError("quotient needs g=POLY")
            rep = quotient_by_normal(P, opts["g"], bound, opts.get("name"))
            if not rep.normal:
                raise ConstructionError(f"g is not normal: {rep.normality_witness}")
            if not rep.regular:
                side, e, elt = rep.regularity_witness
                raise ConstructionError(f"g is not regular: {side} multiplication kills {elt} (degree {e})")
            if not rep.hilbert_consistent:
                raise InvariantError("Hilbert series of the quotient is inconsistent: " + "; ".join(rep.notes))
            return rep.presentation
        if kind == "ci":
            if "forms" not in opts:
                raise InputError("ci needs forms=f1, f2, ...")
            forms = [f.strip() for f in opts["forms"].split(",") if f.strip()]
            return commutative_complete_intersection(P.alphabet.names, forms, P.field, bound,
                                                     opts.get("name", P.name))
    except (ConstructionError, DSLError, KeyError) as exc:
        raise InputError(f"{kind}: {exc}") from None
    raise InputError(f"unknown construction {kind!r} (ore, tensor, twist, quotient, ci)")


def cmd_construct(args) -> tuple[str, int]:
    af = load(args.file, args.field)
    P = af.presentation
    if args.directive:
        kind, _, rest = args.directive.strip().partition(" ")
        directives = [(kind, rest, 0)]
    else:
        directives = af.constructs
    if not directives:
        raise InputError("no construction given (use --directive or 'construct' lines in the file)")
    for kind, rest, _ in directives:
        P = apply_directive(P, kind, rest, args.d_max, args.field)
    text = format_file(AlgebraFile(P, P.field.spec))
    return text, 0


def cmd_list(args) -> tuple[str, int]:
    return "\n".join(catalog.names()) + "\n", 0


# ---------------------------------------------------------------------------
# entry point


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="k2forge", description="K2 checks for graded algebras given by generators and relations.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, verdict=True):
        sp.add_argument("file", help="algebra file, '-' for stdin, or corpus:NAME")
        sp.add_argument("--field", help="q or gf:PRIME (overrides the file; default gf:32003)")
        sp.add_argument("--json", metavar="PATH", help="write the machine-readable report ('-' for stdout)")

    for name, help_ in [("check", "general K2 pipeline (monomial input uses the combinatorial engine)"),
                        ("resolve", "minimal resolution with its matrices"),
                        ("betti", "betti table of the minimal resolution"),
                        ("hilbert", "Hilbert series prefix"),
                        ("monomial", "combinatorial K2 test for monomial algebras"),
                        ("construct", "build a new algebra file from a construction")]:
        sp = sub.add_parser(name, help=help_)
        common(sp)
        sp.add_argument("--n-max", type=int, default=6, help="cohomological bound (default 6)")
        sp.add_argument("--d-max", type=int, help="internal degree bound (default 2*maxreldeg+4)")
        if name in ("check", "monomial"):
            sp.add_argument("--certify", action="store_true", help="include witness and certificate data")
        if name in ("check", "resolve", "betti"):
            sp.add_argument("--verify", action="store_true", help="independently verify the resolution")
            sp.add_argument("--module", help="resolve A/(A m1 + ...) for comma-separated m1,... instead of K")
        if name == "check":
            sp.add_argument("--force-general", action="store_true", help="use the general engine on monomial input")
        if name == "construct":
            sp.add_argument("--directive", help="e.g. 'quotient g=y^3' or 'ore sigma=x->x; delta=y->y^2'")
            sp.add_argument("-o", "--output", help="write the resulting algebra file here")
    sub.add_parser("list", help="list the built-in corpus algebras")
    return p


COMMANDS = {
    "check": cmd_check,
    "monomial": cmd_monomial,
    "resolve": cmd_resolve,
    "betti": cmd_betti,
    "hilbert": cmd_hilbert,
    "construct": cmd_construct,
    "list": cmd_list,
}


def _emit_json(path: str, text: str):
    if path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        out, code = COMMANDS[args.command](args)
    except (InputError, DegreeBoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ValueError as exc:  # invalid presentations, bounds, constructions
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (InvariantError, AssertionError, RuntimeError) as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    if isinstance(out, Report):
        if getattr(args, "json", None):
            _emit_json(args.json, out.to_json())
        if getattr(args, "json", None) != "-":
            sys.stdout.write(render(out))
    else:
        if getattr(args, "output", None):
            with open(args.output, "w", encoding="utf-8") as fh:
                fh.write(out)
        else:
            sys.stdout.write(out)
    return code


if __name__ == "__main__":
    sys.exit(main())
