"""Command-line pipelines over workspace documents.

Every command prints a table and, with ``--out``, writes a JSON report.  The
exit status is 0 iff every verdict passes, 1 if some verdict fails, 2 for
document or input errors and 3 when a computation exceeds the budget.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import time

import numpy as np

from . import bang, corpus, document, fincat, homalg, subdivision
from . import diagram as dg
from .field import Field
from .ralg import ground_algebra

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_BUDGET = 0, 1, 2, 3


def digest(obj) -> str:
    """Short content hash of JSON-able data or an array."""
    if isinstance(obj, np.ndarray):
        data = json.dumps([str(x) for x in obj.flat] + list(obj.shape)).encode()
    else:
        data = json.dumps(obj, sort_keys=True, default=str).encode()
    return hashlib.sha256(data).hexdigest()[:16]


class Report:
    def __init__(self, command: str, args):
        self.command = command
        self.inputs = {}
        self.seed = getattr(args, "seed", None)
        self.field = None
        self.results = {}
        self.verdicts = []
        self.witnesses = {}
        self._t0 = time.perf_counter()

    def verdict(self, name: str, ok: bool, detail: str = "") -> bool:
        self.verdicts.append({"check": name, "ok": bool(ok), "detail": detail})
        return ok

    @property
    def ok(self) -> bool:
        return all(v["ok"] for v in self.verdicts)

    def to_dict(self) -> dict:
        return {
            "command": self.command, "inputs": self.inputs, "seed": self.seed, "field": self.field,
            "results": self.results, "verdicts": self.verdicts, "witnesses": self.witnesses,
            "ok": self.ok, "wall_clock_s": round(time.perf_counter() - self._t0, 4),
        }

    def table(self) -> str:
        lines = [f"{self.command}  field={self.field}  seed={self.seed}"]
        for k, v in self.inputs.items():
            lines.append(f"  input  {k}: {v}")
        for k, v in self.results.items():
            lines.append(f"  {k:<28} {json.dumps(v, default=str)}")
        for v in self.verdicts:
            mark = "PASS" if v["ok"] else "FAIL"
            lines.append(f"  [{mark}] {v['check']}" + (f"  ({v['detail']})" if v["detail"] else ""))
        for k, v in self.witnesses.items():
            lines.append(f"  digest {k}: {v}")
        lines.append(f"  {'ok' if self.ok else 'FAILED'} in {time.perf_counter() - self._t0:.2f}s")
        return "\n".join(lines)


# -- input helpers ----------------------------------------------------------------------------------


def _cap(s: str) -> tuple[int, int]:
    try:
        a, b = s.split(",")
        return int(a), int(b)
    except ValueError:
        raise argparse.ArgumentTypeError("cap must look like OBJECTS,MORPHISMS (e.g. 64,512)") from None


def _field(args) -> Field:
    return Field.from_name(args.field) if args.field else Field()


def _load(args, rep: Report):
    with open(args.document) as fh:
        raw = fh.read()
    try:
        doc = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise document.DocumentError(f"{args.document}:{exc.lineno}:{exc.colno}", exc.msg) from None
    if args.field and isinstance(doc, dict):
        doc["field"] = args.field
    ws = document.parse(doc, args.cap)
    rep.inputs["document"] = f"{args.document} sha256:{hashlib.sha256(raw.encode()).hexdigest()[:16]}"
    rep.field = ws.field.name
    return ws


def _pick(table: dict, name: str | None, kind: str, where: str = ""):
    if name is None:
        if len(table) == 1:
            return next(iter(table.items()))
        raise document.DocumentError(where or kind, f"several {kind}s in the document; name one with --{kind}")
    if name not in table:
        raise document.DocumentError(where or kind, f"undefined {kind} {name!r}")
    return name, table[name]


def _builtin_diagram(name: str, F: Field):
    C = document.BUILTIN_CATEGORIES[name]()
    return dg.constant_diagram(C, ground_algebra(F), name=f"k on {C.name}")


def _diagram_for(args, rep: Report, ws, seed_kind: str):
    """(name, diagram, workspace or None) from a document, a builtin category or a seeded random instance."""
    if args.document:
        name, A = _pick(ws.diagrams, args.diagram, "diagram")
        rep.inputs["diagram"] = name
        return name, A
    F = _field(args)
    rep.field = F.name
    if args.category:
        rep.inputs["diagram"] = f"constant k on {args.category}"
        return args.category, _builtin_diagram(args.category, F)
    rng = np.random.default_rng(args.seed)
    if seed_kind == "interval":
        C = fincat.interval()
    else:
        C = corpus.random_delta(rng, max_objects=4, max_morphisms=12, poset=(seed_kind == "poset"))
        while len(C.objects) < 2:
            C = corpus.random_delta(rng, max_objects=4, max_morphisms=12, poset=(seed_kind == "poset"))
    A = corpus.random_diagram(C, F, rng)
    rep.inputs["diagram"] = f"random on {C.name} ({len(C.objects)} objects, {len(C.morphisms)} morphisms)"
    rep.inputs["algebra_dims"] = {fincat.label(o): A.algebras[o].dim for o in C.objects}
    return "random", A


def _bimodule_for(args, rep: Report, ws, A):
    if not args.document or not getattr(args, "bimodule", None):
        rep.inputs["bimodule"] = "regular"
        return dg.regular_bimodule(A)
    name, (dname, X) = _pick(ws.bimodules, args.bimodule, "bimodule")
    if ws.diagrams[dname] is not A:
        raise document.DocumentError(f"/bimodules/{name}", "bimodule lives over a different diagram")
    rep.inputs["bimodule"] = name
    return X


# -- commands ---------------------------------------------------------------------------------------------


def cmd_validate(args, rep: Report):
    ws = _load(args, rep)
    for sec in ("categories", "functors", "algebras", "diagrams", "modules", "bimodules", "maps", "complexes"):
        rep.results[sec] = sorted(getattr(ws, sec))
    rt = document.workspaces_equal(ws, document.parse(document.emit(ws), args.cap))
    rep.verdict("every entity satisfies its laws", True)
    rep.verdict("emit/parse round-trip", not rt, "; ".join(rt[:3]))


def cmd_subdivide(args, rep: Report):
    if args.document:
        ws = _load(args, rep)
        name, C = _pick(ws.categories, args.category, "category")
    else:
        if not args.category:
            raise document.DocumentError("category", "give a document or a builtin --category")
        name, C = args.category, fincat.validate_category(document.BUILTIN_CATEGORIES[args.category](), args.cap)
        rep.field = None
    rep.inputs["category"] = name
    levels = [{"objects": len(C.objects), "morphisms": len(C.morphisms), "delta": fincat.is_delta(C), "poset": fincat.is_poset(C)}]
    for t in range(1, args.times + 1):
        n = len(subdivision.simplices(C))
        if n > args.cap[0]:
            raise fincat.CapExceeded([f"level {t} would have {n} objects, cap is {args.cap[0]}"])
        C = subdivision.subdivide(C)
        if len(C.morphisms) > args.cap[1]:
            raise fincat.CapExceeded([f"level {t} has {len(C.morphisms)} morphisms, cap is {args.cap[1]}"])
        lvl = {"objects": len(C.objects), "morphisms": len(C.morphisms), "delta": fincat.is_delta(C), "poset": fincat.is_poset(C)}
        levels.append(lvl)
        rep.verdict(f"level {t} is a delta", lvl["delta"])
        if t >= 2:
            rep.verdict(f"level {t} is a poset", lvl["poset"])
        rep.verdict(f"level {t} satisfies the category laws", not fincat.check_laws(C))
    rep.results["levels"] = levels
    rep.witnesses["category"] = digest(C.relabeled().to_dict())
    if args.emit:
        em = document.Emitter(_field(args))
        em.category(f"{name}^({args.times})", C)
        _write(args.emit, document.dumps(em.doc))


def cmd_bang(args, rep: Report):
    ws = _load(args, rep)
    name, A = _diagram_for(args, rep, ws, "poset")
    Ab = bang.bang_algebra(A)
    rep.results["dim"] = Ab.dim
    rep.results["pairs"] = [[fincat.label(i), fincat.label(j)] for i, j in Ab.pairs]
    rep.verdict("algebra laws (associativity, unit)", not Ab.algebra.violations())
    rep.verdict("agrees with the matrix model", bang.matrix_model_check(Ab, samples=10, seed=args.seed))
    rep.witnesses["structure_constants"] = digest(Ab.algebra.mult)
    if args.emit:
        em = document.Emitter(ws.field)
        em.algebra(Ab.algebra, f"{name}!")
        _write(args.emit, document.dumps(em.doc))


def cmd_ext(args, rep: Report):
    ws = _load(args, rep)
    mods = ws.modules
    sname, M = _pick(mods, args.source, "source")
    tname, N = _pick(mods, args.target, "target")
    if M.diagram is not N.diagram:
        raise document.DocumentError("target", "source and target live over different diagrams")
    rep.inputs.update(source=sname, target=tname, diagram=ws.name_of(M.diagram))
    methods = ["natural", "minimal"] if args.method == "both" else [args.method]
    dims = {m: homalg.ext_diagram(M.diagram, M, N, args.max_degree, m, args.budget) for m in methods}
    for m, v in dims.items():
        rep.results[f"ext[{m}]"] = v
    if len(methods) == 2:
        rep.verdict("both resolutions give the same dimensions", dims["natural"] == dims["minimal"])
    rep.witnesses["ext"] = digest(dims)


def cmd_hochschild(args, rep: Report):
    if args.document:
        ws = _load(args, rep)
        name, B = _pick(ws.algebras, args.algebra, "algebra")
    else:
        F = _field(args)
        rep.field = F.name
        name, B = args.builtin, document.builtin_algebra(F, args.builtin)
    rep.inputs["algebra"] = name
    std = homalg.hochschild_algebra(B, None, args.max_degree, args.budget)
    rel = homalg.hochschild_relative(B, None, None, args.max_degree, args.budget)
    rep.results["hochschild[standard]"] = std
    rep.results["hochschild[normalized]"] = rel
    rep.verdict("standard and normalized complexes agree", std == rel)
    rep.witnesses["hochschild"] = digest(std)


def cmd_diagcoh(args, rep: Report):
    ws = _load(args, rep) if args.document else None
    name, A = _diagram_for(args, rep, ws, "delta")
    X = _bimodule_for(args, rep, ws, A)
    dims = {m: homalg.diagram_cohomology(A, X, args.max_degree, m, args.budget) for m in ("natural", "minimal")}
    for m, v in dims.items():
        rep.results[f"H[{m}]"] = v
    rep.verdict("both resolutions give the same dimensions", dims["natural"] == dims["minimal"])
    rep.witnesses["cohomology"] = digest(dims["minimal"])


def cmd_compare(args, rep: Report):
    ws = _load(args, rep) if args.document else None
    rep.inputs["kind"] = args.kind
    if args.kind == "invariance":
        name, A = _diagram_for(args, rep, ws, "interval")
        pairs = _module_pairs(args, rep, ws, A)
        sub = dg.subdivide_diagram(A)
        for label, M, N in pairs:
            lhs = homalg.ext_diagram(A, M, N, args.max_degree, budget=args.budget)
            rhs = homalg.ext_diagram(sub.primed, sub.module(M), sub.module(N), args.max_degree, budget=args.budget)
            rep.results[f"ext_A({label})"] = lhs
            rep.results[f"ext_A'({label}')"] = rhs
            rep.verdict(f"Ext over A and A' agree for {label}", lhs == rhs)
            rep.witnesses[label] = digest([lhs, rhs])
        return
    if args.kind == "scct":
        name, A = _diagram_for(args, rep, ws, "poset")
        X = _bimodule_for(args, rep, ws, A)
        r = bang.scct_compare(A, X, args.max_degree, args.route, args.budget)
        _comparison(rep, r)
        return
    name, A = _diagram_for(args, rep, ws, "delta")
    X = _bimodule_for(args, rep, ws, A)
    for r in bang.gcct_pipeline(A, X, args.max_degree, args.double, args.route, args.budget):
        _comparison(rep, r)


def _module_pairs(args, rep: Report, ws, A) -> list:
    if ws is None:
        rng = np.random.default_rng([args.seed, 1])
        M, N = corpus.random_module(A, rng), corpus.random_module(A, rng)
        rep.inputs["modules"] = {"M": _dims(M), "N": _dims(N)}
        return [("M,N", M, N), ("M,M", M, M)]
    mods = {n: M for n, M in ws.modules.items() if M.diagram is A}
    if args.source or args.target:
        sname, M = _pick(mods, args.source, "source")
        tname, N = _pick(mods, args.target, "target")
        return [(f"{sname},{tname}", M, N)]
    if not mods:
        raise document.DocumentError("modules", "no modules over the chosen diagram")
    return [(f"{a},{b}", mods[a], mods[b]) for a in mods for b in mods]


def _dims(M) -> dict:
    return {fincat.label(i): M.dim(i) for i in M.base.objects}


def _comparison(rep: Report, r: bang.ComparisonReport):
    tag = r.kind + (f"[{r.variant}]" if r.variant else "")
    rep.results[f"{tag} diagram side"] = r.diagram_side
    rep.results[f"{tag} bang side"] = r.algebra_side
    rep.results[f"{tag} details"] = dict(r.extra, route=r.route)
    rep.verdict(f"{tag}: diagram cohomology equals Hochschild cohomology of the bang algebra", r.agree)
    rep.witnesses[tag] = digest([r.diagram_side, r.algebra_side])


def cmd_gen_corpus(args, rep: Report):
    F = _field(args)
    rep.field = F.name
    entries = corpus.canonical_corpus(F, random_count=args.count, seed=args.seed)
    doc = document.corpus_document(entries, F)
    text = document.dumps(doc)
    ws = document.parse(json.loads(text), args.cap)
    rep.results["entries"] = [e.name for e in entries]
    rep.results["deltas"] = sum(fincat.is_delta(e.base) for e in entries)
    rep.verdict("corpus document parses back", len(ws.diagrams) == len(entries))
    rep.witnesses["document"] = digest(text)
    _write(args.path, text)


def cmd_nerve_dot(args, rep: Report):
    if args.document:
        ws = _load(args, rep)
        name, C = _pick(ws.categories, args.category, "category")
    else:
        if not args.category:
            raise document.DocumentError("category", "give a document or a builtin --category")
        name, C = args.category, document.BUILTIN_CATEGORIES[args.category]()
    for _ in range(args.times):
        C = subdivision.subdivide(C)
    rep.inputs["category"] = name
    rep.results["objects"] = len(C.objects)
    rep.results["morphisms"] = len(C.morphisms)
    text = fincat.to_dot(C.relabeled(), name=f"{name}{chr(39) * args.times}")
    rep.witnesses["dot"] = digest(text)
    _write(args.dot, text)


def _write(path: str, text: str) -> None:
    if path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


# -- parser ---------------------------------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--max-degree", type=int,
                        help="highest cohomological degree (default 3 for ext and compare invariance, else 2)")
    common.add_argument("--field", help="F<p> or Q; overrides the document's field (default F101)")
    common.add_argument("--seed", type=int, default=2024)
    common.add_argument("--cap", type=_cap, default=fincat.DEFAULT_CAP, help="OBJECTS,MORPHISMS limit for categories")
    common.add_argument("--budget", type=int, help="largest dense matrix, in entries (env PRESHEAFCOH_BUDGET)")
    common.add_argument("--out", help="write the JSON report here")
    common.add_argument("--json", action="store_true", help="print the JSON report instead of the table")

    p = argparse.ArgumentParser(prog="presheafcoh", description="Cohomology of diagrams of algebras over small categories.")
    sub = p.add_subparsers(dest="command", required=True)
    builtins = sorted(document.BUILTIN_CATEGORIES)

    s = sub.add_parser("validate", parents=[common], help="parse and check every entity of a document")
    s.add_argument("document")
    s.set_defaults(func=cmd_validate)

    s = sub.add_parser("subdivide", parents=[common], help="subdivide a category and report its structure")
    s.add_argument("document", nargs="?")
    s.add_argument("--category", help=f"category name in the document, or a builtin: {', '.join(builtins)}")
    s.add_argument("--times", type=int, default=1)
    s.add_argument("--emit", help="write the subdivided category as a document")
    s.set_defaults(func=cmd_subdivide)

    s = sub.add_parser("bang", parents=[common], help="assemble the bang algebra of a diagram over a poset")
    s.add_argument("document")
    s.add_argument("--diagram")
    s.add_argument("--category", help=argparse.SUPPRESS)
    s.add_argument("--emit", help="write the algebra as a document")
    s.set_defaults(func=cmd_bang)

    s = sub.add_parser("ext", parents=[common], help="Ext dimensions between two modules over a diagram")
    s.add_argument("document")
    s.add_argument("--source")
    s.add_argument("--target")
    s.add_argument("--method", choices=["natural", "minimal", "both"], default="both")
    s.set_defaults(func=cmd_ext)

    s = sub.add_parser("hochschild", parents=[common], help="Hochschild cohomology of a single algebra")
    s.add_argument("document", nargs="?")
    s.add_argument("--algebra")
    s.add_argument("--builtin", default="k[x]/x^2", help="k, k^n, k[x]/x^n, Mn or Tn when no document is given")
    s.set_defaults(func=cmd_hochschild)

    for cmd, func, hlp in [("diagcoh", cmd_diagcoh, "cohomology of a diagram with coefficients in a bimodule")]:
        s = sub.add_parser(cmd, parents=[common], help=hlp)
        s.add_argument("document", nargs="?")
        s.add_argument("--diagram")
        s.add_argument("--bimodule")
        s.add_argument("--category", choices=builtins, help="constant k on a builtin category instead of a document")
        s.set_defaults(func=func)

    s = sub.add_parser("compare", parents=[common], help="compare two routes to the same invariant on a document or a seeded instance")
    s.add_argument("kind", choices=["invariance", "scct", "gcct"])
    s.add_argument("document", nargs="?")
    s.add_argument("--diagram")
    s.add_argument("--bimodule")
    s.add_argument("--source")
    s.add_argument("--target")
    s.add_argument("--category", choices=builtins, help="constant k on a builtin category instead of a document")
    s.add_argument("--double", action="store_true", help="also run the comparison on the second subdivision")
    s.add_argument("--route", choices=["auto", "standard", "relative"], default="auto")
    s.set_defaults(func=cmd_compare)

    s = sub.add_parser("gen-corpus", parents=[common], help="write the canonical corpus as one document")
    s.add_argument("path", nargs="?", default="-")
    s.add_argument("--count", type=int, default=14, help="number of random entries")
    s.set_defaults(func=cmd_gen_corpus)

    s = sub.add_parser("nerve-dot", parents=[common], help="DOT graph of a category (optionally subdivided)")
    s.add_argument("document", nargs="?")
    s.add_argument("--category")
    s.add_argument("--times", type=int, default=0)
    s.add_argument("--dot", default="-", help="output path (default stdout)")
    s.set_defaults(func=cmd_nerve_dot)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    saved = os.environ.get("PRESHEAFCOH_BUDGET")
    if args.budget is not None:
        os.environ["PRESHEAFCOH_BUDGET"] = str(args.budget)
    try:
        return _run(args)
    finally:
        if saved is None:
            os.environ.pop("PRESHEAFCOH_BUDGET", None)
        else:
            os.environ["PRESHEAFCOH_BUDGET"] = saved


def _run(args) -> int:
    if args.max_degree is None:
        ext_like = args.command == "ext" or (args.command == "compare" and args.kind == "invariance")
        args.max_degree = 3 if ext_like else 2
    rep = Report(args.command + (f" {args.kind}" if args.command == "compare" else ""), args)
    if args.command in ("ext", "hochschild", "diagcoh", "compare"):
        rep.inputs["max_degree"] = args.max_degree
    quiet_table = args.command in ("nerve-dot", "gen-corpus") and getattr(args, "dot", getattr(args, "path", None)) == "-"
    try:
        args.func(args, rep)
    except document.DocumentError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (fincat.CategoryError, subdivision.NotADelta, bang.NotAPoset, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except homalg.BudgetExceeded as exc:
        print(f"error: {exc} (raise --budget or PRESHEAFCOH_BUDGET)", file=sys.stderr)
        return EXIT_BUDGET
    report = rep.to_dict()
    if args.out:
        with open(args.out, "w") as fh:
            json.dump(report, fh, indent=1, sort_keys=True)
            fh.write("\n")
    out = sys.stderr if quiet_table else sys.stdout
    print(json.dumps(report, indent=1, sort_keys=True) if args.json else rep.table(), file=out)
    return EXIT_OK if rep.ok else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
