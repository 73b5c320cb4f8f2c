"""Command-line front end.

Exit codes: 0 success or verdict true, 1 verdict false, 2 input error,
3 undecided because a projective dimension reached the cap.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor

from . import fileio
from .fileio import InputError, dumps
from .modcat import (
    DEFAULT_CAP,
    AtLeast,
    ext1_dim,
    hom_basis,
    min_resolution,
    pd_to_json,
    projective,
    radical_top,
    trace,
)
from .presentation import validate_basic
from .strat import (
    check_certificate,
    delta_filtration,
    is_standardly_stratified,
    standard_modules,
)

EXIT_OK, EXIT_FALSE, EXIT_INPUT, EXIT_CAP = 0, 1, 2, 3

VERBS = (
    "basis", "validate", "projectives", "hom", "trace", "resolve", "ext1", "standards", "filtration",
    "check-ss", "build-tri", "split-tri", "triple", "functor", "verify-a", "verify-b", "verify-c",
    "verify-pd", "corpus", "recheck",
)


def _default_seed() -> int:
    try:
        return int(os.environ.get("STRATKIT_SEED", "0"))
    except ValueError:
        return 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "text"), default="text")
    common.add_argument("--output", "-o", help="write the report here instead of stdout")
    common.add_argument("--field", help="override the field of every algebra file (Q, p or GF(p))")
    common.add_argument("--cap", type=int, default=DEFAULT_CAP, help="projective dimension cap")
    common.add_argument("--seed", type=int, default=None, help="defaults to $STRATKIT_SEED or 0")

    parser = argparse.ArgumentParser(prog="stratkit", description="Standardly stratified triangular algebras.")
    sub = parser.add_subparsers(dest="verb", required=True)

    def verb(name, help_):
        return sub.add_parser(name, parents=[common], help=help_)

    p = verb("basis", "basis of each component e_j A e_i")
    p.add_argument("--algebra", required=True)
    p = verb("validate", "check that the algebra is basic")
    p.add_argument("--algebra", required=True)
    p = verb("projectives", "indecomposable projectives and their tops")
    p.add_argument("--algebra", required=True)
    for name, help_ in (("hom", "basis of Hom(source, target)"), ("ext1", "dimension of Ext^1(source, target)")):
        p = verb(name, help_)
        p.add_argument("--algebra", required=True)
        p.add_argument("--source", required=True)
        p.add_argument("--target", required=True)
    p = verb("trace", "trace of a family of modules in a module")
    p.add_argument("--algebra", required=True)
    p.add_argument("--family", nargs="+", required=True)
    p.add_argument("--module", required=True)
    p = verb("resolve", "minimal projective resolution")
    p.add_argument("--algebra", required=True)
    p.add_argument("--module", required=True)
    p = verb("standards", "standard modules for an ordered partition")
    p.add_argument("--algebra", required=True)
    p.add_argument("--partition", required=True)
    p = verb("filtration", "decide Δ-filterability of a module")
    p.add_argument("--algebra", required=True)
    p.add_argument("--partition", required=True)
    p.add_argument("--module", required=True)
    p = verb("check-ss", "decide whether (A, partition) is standardly stratified")
    p.add_argument("--algebra", required=True)
    p.add_argument("--partition", required=True)
    p = verb("recheck", "replay a filtration certificate")
    p.add_argument("--algebra", required=True)
    p.add_argument("--partition", required=True)
    p.add_argument("--module", required=True)
    p.add_argument("--certificate", required=True)

    def tri_args(p, partitions=False):
        p.add_argument("--t", required=True, help="algebra T")
        p.add_argument("--u", required=True, help="algebra U")
        p.add_argument("--m", required=True, help="U-T-bimodule")
        if partitions:
            p.add_argument("--pa", required=True, help="ordered partition of U")
            p.add_argument("--pb", required=True, help="ordered partition of T")

    p = verb("build-tri", "assemble Λ = [[T,0],[M,U]]")
    tri_args(p)
    p = verb("split-tri", "recover T, U and M from Λ and a bipartition")
    p.add_argument("--algebra", required=True)
    p.add_argument("--bipartition", required=True)
    p = verb("triple", "a Λ-module as a triple (Y, φ, X)")
    p.add_argument("--algebra", required=True)
    p.add_argument("--bipartition", required=True)
    p.add_argument("--module", required=True)
    p = verb("functor", "apply a change-of-rings functor")
    p.add_argument("--algebra", required=True, help="Λ")
    p.add_argument("--bipartition", required=True)
    p.add_argument("--module", required=True, help="module over Λ (restrict) or over T/U (inflate)")
    p.add_argument("--which", required=True, choices=("restrict-T", "restrict-U", "inflate-T", "inflate-U"))
    p = verb("verify-a", "check the stratification equivalence for Λ")
    tri_args(p, partitions=True)
    p = verb("verify-b", "check the projective dimension bounds for Λ")
    tri_args(p)
    p.add_argument("--pa", help="ordered partition of U (seeds the catalog)")
    p.add_argument("--pb", help="ordered partition of T (seeds the catalog)")
    p = verb("verify-c", "check F(Δ) = P<∞ on a catalog")
    tri_args(p, partitions=True)
    p = verb("verify-pd", "check projective dimension transfer along inflations")
    tri_args(p)
    p.add_argument("--pa")
    p.add_argument("--pb")
    p = verb("corpus", "generate a seeded corpus and run the verifiers")
    p.add_argument("--count", type=int, default=20)
    p.add_argument("--primes", default="2", help="comma-separated primes")
    p.add_argument("--theorems", default="A,B,C,pd")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--max-dim", type=int, default=4, help="bound on every component dimension")
    return parser


class Context:
    def __init__(self, args):
        self.args = args
        self.field = fileio.parse_field(args.field) if args.field else None
        self.seed = args.seed if args.seed is not None else _default_seed()

    def algebra(self, path):
        return fileio.load_algebra(path, self.field)

    def module(self, a, path):
        return fileio.load_module(a, path)

    def partition(self, a, path):
        return fileio.load_partition(a, path)

    def triangular(self):
        from .triangular import build_triangular
        T = self.algebra(self.args.t)
        U = self.algebra(self.args.u)
        if T.field != U.field:
            raise InputError("T and U are over different fields", self.args.u)
        M = fileio.load_bimodule(U, T, self.args.m)
        return build_triangular(T, U, M)


# verbs -----------------------------------------------------------------------


def cmd_basis(ctx):
    a = ctx.algebra(ctx.args.algebra)
    comps = []
    for s in range(a.n):
        for t in range(a.n):
            xs = a.component(s, t)
            if xs:
                comps.append({"source": a.vertices[s], "target": a.vertices[t], "basis": [a.labels[x] for x in xs]})
    return {"dim": a.dim, "vertices": list(a.vertices), "components": comps, "structure": a.to_json()}, EXIT_OK


def cmd_validate(ctx):
    a = ctx.algebra(ctx.args.algebra)
    rep = validate_basic(a, seed=ctx.seed)
    return rep.to_json(), EXIT_OK if rep.basic else EXIT_FALSE


def cmd_projectives(ctx):
    a = ctx.algebra(ctx.args.algebra)
    out = []
    for v in range(a.n):
        p = projective(a, v)
        rt = radical_top(p)
        out.append({"vertex": a.vertices[v], "dims": list(p.dims), "radical_dims": list(rt.rad.dims),
                    "top_dims": list(rt.top.dims), "module": p.to_json()})
    return {"projectives": out}, EXIT_OK


def cmd_hom(ctx):
    a = ctx.algebra(ctx.args.algebra)
    m, n = ctx.module(a, ctx.args.source), ctx.module(a, ctx.args.target)
    maps = hom_basis(m, n)
    return {"dim": len(maps), "basis": [f.to_json() for f in maps]}, EXIT_OK


def cmd_ext1(ctx):
    a = ctx.algebra(ctx.args.algebra)
    m, n = ctx.module(a, ctx.args.source), ctx.module(a, ctx.args.target)
    return {"dim": ext1_dim(m, n)}, EXIT_OK


def cmd_trace(ctx):
    a = ctx.algebra(ctx.args.algebra)
    fam = [ctx.module(a, p) for p in ctx.args.family]
    m = ctx.module(a, ctx.args.module)
    tr = trace(fam, m)
    return {"dims": list(tr.dims), "subspaces": tr.to_json()}, EXIT_OK


def cmd_resolve(ctx):
    a = ctx.algebra(ctx.args.algebra)
    m = ctx.module(a, ctx.args.module)
    res, pd = min_resolution(m, ctx.args.cap)
    terms = [[a.vertices[v] for v in s] for s in res.summands]
    doc = {"pd": pd_to_json(pd), "pd_text": str(pd), "terms": terms, "verified": res.verify(),
           "syzygy_dims": [list(s.dims) for s in res.syzygies]}
    code = EXIT_CAP if isinstance(pd, AtLeast) and not pd.infinite else EXIT_OK
    return doc, code


def cmd_standards(ctx):
    a = ctx.algebra(ctx.args.algebra)
    p = ctx.partition(a, ctx.args.partition)
    fam = standard_modules(a, p)
    out = []
    for l, lvl in enumerate(p.levels):
        for v in lvl:
            out.append({"vertex": a.vertices[v], "level": l, "dims": list(fam.deltas[v].dims),
                        "trace_dims": list(fam.traces[v].dims), "module": fam.deltas[v].to_json()})
    return {"partition": p.names(a), "standards": out}, EXIT_OK


def cmd_filtration(ctx):
    a = ctx.algebra(ctx.args.algebra)
    p = ctx.partition(a, ctx.args.partition)
    m = ctx.module(a, ctx.args.module)
    fam = standard_modules(a, p)
    res = delta_filtration(m, fam, seed=ctx.seed)
    return res.to_json(), EXIT_OK if res.filtered else EXIT_FALSE


def cmd_check_ss(ctx):
    a = ctx.algebra(ctx.args.algebra)
    p = ctx.partition(a, ctx.args.partition)
    v = is_standardly_stratified(a, p)
    return v.to_json(a), EXIT_OK if v.holds else EXIT_FALSE


def cmd_recheck(ctx):
    a = ctx.algebra(ctx.args.algebra)
    p = ctx.partition(a, ctx.args.partition)
    m = ctx.module(a, ctx.args.module)
    fam = standard_modules(a, p)
    doc = fileio.load_json(ctx.args.certificate)
    if "certificates" in doc and "filtered" not in doc:
        raise InputError("pass a single module certificate, not a stratification report", ctx.args.certificate)
    cert = fileio.certificate_from_doc(m, fam, doc, ctx.args.certificate)
    ok = check_certificate(cert, fam)
    return {"valid": ok, "multiplicities": {a.vertices[v]: c for v, c in sorted(cert.multiplicities().items())}}, \
        EXIT_OK if ok else EXIT_FALSE


def cmd_build_tri(ctx):
    tri = ctx.triangular()
    return {"bipartition": {"T": list(tri.bipartition.t_side), "U": list(tri.bipartition.u_side)},
            "algebra": tri.lam.to_json()}, EXIT_OK


def _split(ctx):
    from .triangular import TriangularityError, split_triangular
    lam = ctx.algebra(ctx.args.algebra)
    bp = fileio.load_bipartition(ctx.args.bipartition)
    try:
        return split_triangular(lam, bp)
    except TriangularityError as exc:
        raise InputError(str(exc), ctx.args.bipartition) from None


def cmd_split_tri(ctx):
    tri = _split(ctx)
    return {"T": tri.T.to_json(), "U": tri.U.to_json(), "M": tri.M.to_json()}, EXIT_OK


def cmd_triple(ctx):
    from .triangular import to_triple
    tri = _split(ctx)
    L = ctx.module(tri.lam, ctx.args.module)
    tr = to_triple(tri, L)
    return {"Y": tr.Y.to_json(), "X": tr.X.to_json(), "tensor_dims": list(tr.tensor.module.dims),
            "phi": {tri.U.vertices[i]: b.to_json() for i, b in enumerate(tr.phi.blocks)},
            "phi_is_homomorphism": tr.verify()}, EXIT_OK


def cmd_functor(ctx):
    from . import triangular as tr_
    tri = _split(ctx)
    which = ctx.args.which
    side = {"restrict-T": tri.lam, "restrict-U": tri.lam, "inflate-T": tri.T, "inflate-U": tri.U}[which]
    m = ctx.module(side, ctx.args.module)
    fn = {"restrict-T": tr_.restrict_T, "restrict-U": tr_.restrict_U,
          "inflate-T": tr_.inflate_T, "inflate-U": tr_.inflate_U}[which]
    out = fn(tri, m)
    return {"functor": which, "module": out.to_json()}, EXIT_OK


def _report_code(reports) -> int:
    verdicts = [r.verdict for r in reports]
    if "fail" in verdicts:
        return EXIT_FALSE
    if "inconclusive" in verdicts:
        return EXIT_CAP
    if "hypothesis-violated" in verdicts:
        return EXIT_FALSE
    return EXIT_OK


def _instance(ctx, tri, need_partitions=False):
    from .corpus import Instance
    from .strat import OrderedPartition
    args = ctx.args
    pA = ctx.partition(tri.U, args.pa) if getattr(args, "pa", None) else OrderedPartition.single(tri.U)
    pB = ctx.partition(tri.T, args.pb) if getattr(args, "pb", None) else OrderedPartition.single(tri.T)
    return Instance(0, ctx.seed, tri, pA, pB)


def _describe(ctx, inst):
    a = ctx.args
    return {"T": a.t, "U": a.u, "M": a.m, "pA": inst.pA.names(inst.tri.U), "pB": inst.pB.names(inst.tri.T),
            "seed": ctx.seed, "cap": a.cap}


def cmd_verify_a(ctx):
    from .theorems import verify_theorem_A
    tri = ctx.triangular()
    inst = _instance(ctx, tri)
    rep = verify_theorem_A(tri, inst.pA, inst.pB, _describe(ctx, inst))
    return rep.to_json(), _report_code([rep])


def cmd_verify_b(ctx):
    from .corpus import build_catalog
    from .theorems import verify_theorem_B
    tri = ctx.triangular()
    inst = _instance(ctx, tri)
    rep = verify_theorem_B(tri, build_catalog(inst), ctx.args.cap, _describe(ctx, inst))
    return rep.to_json(), _report_code([rep])


def cmd_verify_c(ctx):
    from .corpus import build_catalog
    from .theorems import verify_theorem_C
    tri = ctx.triangular()
    inst = _instance(ctx, tri)
    rep = verify_theorem_C(tri, inst.pA, inst.pB, build_catalog(inst), ctx.args.cap, _describe(ctx, inst))
    return rep.to_json(), _report_code([rep])


def cmd_verify_pd(ctx):
    from .corpus import build_catalog
    from .theorems import verify_pd_transfer
    tri = ctx.triangular()
    inst = _instance(ctx, tri)
    rep = verify_pd_transfer(tri, build_catalog(inst), ctx.args.cap, _describe(ctx, inst))
    return rep.to_json(), _report_code([rep])


def _corpus_job(job):
    from .corpus import CorpusSpec, random_instance
    from .theorems import verify_instance
    import random as _random
    spec_kwargs, k, cap, which = job
    spec = CorpusSpec(**spec_kwargs)
    s = spec.seed * 1_000_003 + k
    inst = random_instance(_random.Random(s), spec, index=k, seed=s)
    reps = verify_instance(inst, cap, which)
    slim = []
    for r in reps:
        doc = r.to_json()
        doc["certificates"] = len(r.certificates)
        slim.append(doc)
    return slim


def cmd_corpus(ctx):
    from .corpus import CorpusSpec
    args = ctx.args
    try:
        primes = tuple(int(p) for p in args.primes.split(","))
        spec = CorpusSpec(seed=ctx.seed, count=args.count, primes=primes, max_component_dim=args.max_dim)
        spec.validate()
    except ValueError as exc:
        raise InputError(str(exc), "--primes/--count") from None
    names = {"A": "A", "B": "B", "C": "C", "PD": "pd"}
    which = tuple(names[w.strip().upper()] for w in args.theorems.split(",") if w.strip().upper() in names)
    if not which:
        raise InputError("no known theorem selected", "--theorems")
    jobs = [(dict(spec.__dict__), k, args.cap, which) for k in range(spec.count)]
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as ex:
            results = list(ex.map(_corpus_job, jobs))
    else:
        results = [_corpus_job(j) for j in jobs]
    reports = [r for rs in results for r in rs]
    summary: dict = {}
    for r in reports:
        summary.setdefault(r["theorem"], {}).setdefault(r["verdict"], 0)
        summary[r["theorem"]][r["verdict"]] += 1

    class _R:
        def __init__(self, v):
            self.verdict = v

    code = _report_code([_R(r["verdict"]) for r in reports if r["verdict"] != "hypothesis-violated"])
    return {"spec": spec.to_json(), "summary": summary, "reports": reports}, code


COMMANDS = {
    "basis": cmd_basis, "validate": cmd_validate, "projectives": cmd_projectives, "hom": cmd_hom,
    "trace": cmd_trace, "resolve": cmd_resolve, "ext1": cmd_ext1, "standards": cmd_standards,
    "filtration": cmd_filtration, "check-ss": cmd_check_ss, "build-tri": cmd_build_tri,
    "split-tri": cmd_split_tri, "triple": cmd_triple, "functor": cmd_functor, "verify-a": cmd_verify_a,
    "verify-b": cmd_verify_b, "verify-c": cmd_verify_c, "verify-pd": cmd_verify_pd, "corpus": cmd_corpus,
    "recheck": cmd_recheck,
}


def render_text(verb: str, doc) -> str:
    lines = []
    if verb == "check-ss":
        lines.append(f"standardly stratified: {str(doc['standardly_stratified']).lower()}")
        if "counterexample" in doc:
            ce = doc["counterexample"]
            lines.append(f"counterexample: projective {ce['projective']} at level {ce['level']}: {ce['reason']}")
    elif verb in ("verify-a", "verify-b", "verify-c", "verify-pd"):
        lines.append(f"theorem {doc['theorem']}: {doc['verdict']}")
        for k, v in doc["quantities"].items():
            if k != "table":
                lines.append(f"  {k}: {json.dumps(v, ensure_ascii=False)}")
    elif verb == "corpus":
        for th, counts in doc["summary"].items():
            lines.append(f"{th}: " + ", ".join(f"{v}={c}" for v, c in sorted(counts.items())))
    else:
        for k, v in doc.items():
            lines.append(f"{k}: {v if isinstance(v, str) else json.dumps(v, ensure_ascii=False)}")
    return "\n".join(lines) + "\n"


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code not in (0, None) else EXIT_OK
    try:
        ctx = Context(args)
        doc, code = COMMANDS[args.verb](ctx)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    text = dumps(doc) if args.format == "json" else render_text(args.verb, doc)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
