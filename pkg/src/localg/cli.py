"""Command-line front end.

Exit codes: 0 for a true verdict or plain success, 1 for a false verdict
(with a certificate path when one was produced), 2 when a symbolic backend
could not decide, 64 for usage errors, 65 for malformed JSON (the message
points at the failing file), 66 for missing or empty inputs.

Human-readable tables go to stdout; machine documents are written to the
--out path and are never mixed into the table output.  All scalars are
exact: rationals serialize as "p/q" strings, prime-field scalars as
integers.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Optional

from .fields import Field
from .linalg import Subspace, vec
from .core import (
    BackendUnsupported,
    LocalitySpace,
    UndecidedError,
    Verdict,
    closure,
    is_locality_space,
    polar,
)
from .certs import Certificate
from . import quotients as q
from . import tensor as tn
from . import lie as lie_mod
from . import forests as fr
from . import conjlab

EXIT_TRUE = 0
EXIT_FALSE = 1
EXIT_UNKNOWN = 2
EXIT_USAGE = 64
EXIT_BADJSON = 65
EXIT_NOINPUT = 66

SCHEMA = 1


class CliError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _load_json(path: str):
    if not os.path.exists(path):
        raise CliError(EXIT_NOINPUT, f"input file not found: {path}")
    try:
        with open(path) as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise CliError(EXIT_BADJSON, f"{path}: malformed JSON at line {exc.lineno} column {exc.colno}")


def _space_from(doc) -> LocalitySpace:
    try:
        return LocalitySpace.from_json(doc)
    except (KeyError, ValueError, TypeError) as exc:
        raise CliError(EXIT_BADJSON, f"bad space document: {exc}")


def _subspace_from(space: LocalitySpace, rows) -> Subspace:
    return Subspace.span(space.field, space.dim, rows)


def _verdict_exit(v: Verdict) -> int:
    if v.is_true:
        return EXIT_TRUE
    if v.is_false:
        return EXIT_FALSE
    return EXIT_UNKNOWN


def _emit(args, doc: dict, table: str) -> None:
    print(table)
    if getattr(args, "out", None):
        doc = dict(doc)
        doc["localg_schema"] = SCHEMA
        with open(args.out, "w") as fh:
            json.dump(doc, fh, indent=1, sort_keys=True)
            fh.write("\n")


# ---------------------------------------------------------------------------
# command handlers
# ---------------------------------------------------------------------------


def cmd_space(args) -> int:
    doc = _load_json(args.file)
    space = _space_from(doc)
    if args.action == "check":
        v = is_locality_space(space)
        _emit(args, {"is_locality": v.value}, f"is_locality: {v.value}")
        return _verdict_exit(v)
    if args.action == "closure":
        try:
            closed = closure(space)
        except UndecidedError as exc:
            _emit(args, {"closure": "unknown", "reason": str(exc)}, f"closure: unknown ({exc})")
            return EXIT_UNKNOWN
        out = closed.to_json()
        npairs = len(closed.relation.pairs) if closed.kind == "pairs" else None
        _emit(args, {"space": out, "pair_count": npairs}, f"closure computed; pair count: {npairs}")
        return EXIT_TRUE
    if args.action == "polar":
        vecs = json.loads(args.vectors) if args.vectors else []
        p = polar(space, [vec(space.field, v) for v in vecs])
        table = f"polar of {len(vecs)} vectors: is_subspace={p.is_subspace}"
        _emit(args, {"polar": p.to_json()}, table)
        return EXIT_TRUE if p.is_subspace else EXIT_FALSE
    raise CliError(EXIT_USAGE, f"unknown space action {args.action}")


def cmd_quotient(args) -> int:
    doc = _load_json(args.file)
    space = _space_from(doc["space"])
    w = _subspace_from(space, doc["w"])
    qv = q.is_locality_quotient(space, w)
    out = {
        "quotient_dim": qv.quotient.dim,
        "quotient_relation": qv.quotient.space.relation.to_json(),
        "is_locality": qv.verdict.value,
    }
    if qv.certificate is not None:
        out["certificate"] = qv.certificate.to_json()
    _emit(args, out, f"quotient dim {qv.quotient.dim}; is_locality: {qv.verdict.value}")
    return _verdict_exit(qv.verdict)


def cmd_compat(args) -> int:
    doc = _load_json(args.file)
    space = _space_from(doc["space"])
    w = _subspace_from(space, doc["w"])
    res = q.is_compatible(space, w)
    out = {"compatible": res.verdict.value}
    table = f"compatible: {res.verdict.value}"
    if res.certificate is not None:
        out["certificate"] = res.certificate.to_json()
        if getattr(args, "cert_out", None):
            with open(args.cert_out, "w") as fh:
                json.dump(res.certificate.to_json(), fh, indent=1, sort_keys=True)
            table += f"\ncertificate written to {args.cert_out}"
    _emit(args, out, table)
    return _verdict_exit(res.verdict)


def cmd_complement(args) -> int:
    doc = _load_json(args.file)
    space = _space_from(doc["space"])
    w = _subspace_from(space, doc["w"])
    res = q.strong_complement(space, w)
    out = {"status": res.status}
    if res.complement is not None:
        out["complement"] = res.complement.to_json()
    _emit(args, out, f"strong complement: {res.status}")
    if res.status == "found":
        return EXIT_TRUE
    if res.status == "none":
        return EXIT_FALSE
    return EXIT_UNKNOWN


def cmd_tensor(args) -> int:
    space = _space_from(_load_json(args.space))
    subs_doc = _load_json(args.subspaces) if args.subspaces else {"subspaces": []}
    subs = [_subspace_from(space, rows) for rows in subs_doc.get("subspaces", [])]
    full = Subspace.full(space.field, space.dim)
    if args.action == "dim":
        factors = subs if subs else [full, full]
        t = tn.loc_tensor(space, factors)
        _emit(args, {"dim": t.dim}, f"dim: {t.dim}")
        return EXIT_TRUE
    if args.action == "alt-dim":
        v1 = subs[0] if subs else full
        v2 = subs[1] if len(subs) > 1 else full
        alt = tn.alt_tensor(space.to_pairs() if space.kind != "pairs" else space, v1, v2)
        _emit(args, {"dim": alt.dim}, f"dim: {alt.dim}")
        return EXIT_TRUE
    if args.action == "assoc":
        ok = tn.associativity_check(space.to_pairs() if space.kind != "pairs" else space, args.m, args.n)
        _emit(args, {"associative": ok}, f"associative: {ok}")
        return EXIT_TRUE if ok else EXIT_FALSE
    if args.action == "distrib":
        if len(subs) < 3:
            raise CliError(EXIT_USAGE, "distrib needs subspaces V1, V2, W")
        rep = tn.distributivity_check(space, subs[0], subs[1], subs[2])
        out = {
            "hypothesis": rep.hypothesis.value,
            "conclusion": rep.conclusion.value,
            "status": rep.status,
            "detail": rep.detail,
        }
        _emit(args, out, f"status: {rep.status} (hypothesis {rep.hypothesis.value}, conclusion {rep.conclusion.value})")
        return EXIT_TRUE if rep.status == "holds" else EXIT_FALSE
    raise CliError(EXIT_USAGE, f"unknown tensor action {args.action}")


def cmd_lie(args) -> int:
    doc = _load_json(args.file)
    L = lie_mod.LocLieAlgebra.from_json(doc)
    if args.action == "check":
        res = lie_mod.jacobi_check(L)
        out = {"jacobi": res.jacobi.value, "polar_stable": res.polar_stable.value}
        _emit(args, out, f"jacobi: {res.jacobi.value}; polar_stable: {res.polar_stable.value}")
        return _verdict_exit(res.jacobi)
    if args.action == "extend":
        res = lie_mod.bracket_extension(L)
        fmt = L.field.format_scalar
        out = {"feasible": res.feasible}
        if res.obstruction:
            out["obstruction"] = {
                "triple": list(res.obstruction["triple"]),
                "constant": [fmt(c) for c in res.obstruction["constant"]],
            }
        _emit(args, out, f"extension feasible: {res.feasible}")
        return EXIT_TRUE if res.feasible else EXIT_FALSE
    raise CliError(EXIT_USAGE, f"unknown lie action {args.action}")


def cmd_uea(args) -> int:
    doc = _load_json(args.file)
    L = lie_mod.LocLieAlgebra.from_json(doc)
    env = lie_mod.trunc_env_algebra(L, args.degree)
    if args.action == "build":
        _emit(args, {"dims": env.dims()}, f"dims: {env.dims()}")
        return EXIT_TRUE
    if args.action == "prim":
        prim = env.primitives()
        equal = prim == env.iota
        out = {"primitive_dim": prim.rank, "degree_one_dim": env.iota.rank, "equal": equal}
        _emit(args, out, f"primitives: dim {prim.rank}; degree-one image: dim {env.iota.rank}; equal: {equal}")
        return EXIT_TRUE if equal else EXIT_FALSE
    raise CliError(EXIT_USAGE, f"unknown uea action {args.action}")


def cmd_gl(args) -> int:
    omega = fr.LabelSet.from_json(_load_json(args.omega))
    forests = [fr.Forest.from_json(_load_json(p)) for p in args.forests]
    if args.action == "product":
        if len(forests) != 2:
            raise CliError(EXIT_USAGE, "product needs exactly two forests")
        prod = fr.gl_product(fr.GLElement.of(forests[0]), fr.GLElement.of(forests[1]), omega)
        out = {"terms": [[str(c), f.to_json()] for f, c in sorted(prod.coeffs.items())]}
        _emit(args, out, f"product: {prod!r}")
        return EXIT_TRUE
    if args.action == "coprod":
        d = fr.gl_coproduct(fr.GLElement.of(forests[0]))
        out = {"terms": [[str(c), l.to_json(), r.to_json()] for (l, r), c in sorted(d.coeffs.items())]}
        _emit(args, out, f"coproduct has {len(d.coeffs)} terms")
        return EXIT_TRUE
    if args.action == "antipode":
        s = fr.antipode(fr.GLElement.of(forests[0]), omega)
        out = {"terms": [[str(c), f.to_json()] for f, c in sorted(s.coeffs.items())]}
        _emit(args, out, f"antipode: {s!r}")
        return EXIT_TRUE
    if args.action == "mm":
        terms = fr.mm_decompose(forests[0], omega)
        out = {
            "terms": [[str(c), [t.to_json() for t in trees]] for c, trees in terms],
            "term_count": len(terms),
        }
        _emit(args, out, f"decomposition into {len(terms)} tree products")
        return EXIT_TRUE
    raise CliError(EXIT_USAGE, f"unknown gl action {args.action}")


def cmd_fuzz(args) -> int:
    seed = args.seed if args.seed is not None else int(os.environ.get("LOCALG_SEED", "0"))
    config = {"p": args.field, "dim": args.dim, "trials": args.trials, "seed": seed, "cap": args.cap}
    report = conjlab.fuzz(args.statement, config)
    doc = report.to_json()
    table = (
        f"statement {report.statement}: {report.trials} trials, {report.found} corrected, "
        f"{report.skipped} skipped, {len(report.counterexamples)} counterexamples"
    )
    _emit(args, doc, table)
    return EXIT_TRUE if not report.counterexamples else EXIT_FALSE


def cmd_certify(args) -> int:
    doc = _load_json(args.file)
    try:
        cert = Certificate.from_json(doc)
    except (KeyError, ValueError) as exc:
        raise CliError(EXIT_BADJSON, f"bad certificate document: {exc}")
    ok = cert.replay()
    _emit(args, {"kind": cert.kind, "replays": ok}, f"certificate {cert.kind}: replay {'confirmed' if ok else 'FAILED'}")
    return EXIT_TRUE if ok else EXIT_FALSE


def cmd_fixtures(args) -> int:
    from . import fixtures as fx

    directory = args.dir or fx.default_dir()
    if not os.path.isdir(directory) or not any(f.endswith(".json") for f in os.listdir(directory)):
        print(f"no fixtures found under {directory}")
        return EXIT_NOINPUT
    results = fx.run_corpus(directory)
    width = max(len(r["name"]) for r in results)
    bad = 0
    for r in results:
        status = "pass" if r["ok"] else "FAIL"
        print(f"{r['name']:<{width}}  {status:<4}  [{r['source']}]  {r['note']}")
        if not r["ok"]:
            bad += 1
    print(f"{len(results) - bad}/{len(results)} fixtures pass")
    return EXIT_TRUE if bad == 0 else EXIT_FALSE


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="localg", description="exact computer algebra for partial-independence structures")
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("space", help="relation-level checks")
    sp.add_argument("action", choices=["check", "closure", "polar"])
    sp.add_argument("file")
    sp.add_argument("--vectors", help="JSON list of vectors for polar")
    sp.add_argument("--out")
    sp.set_defaults(fn=cmd_space)

    qp = sub.add_parser("quotient", help="quotient relation and its verdict")
    qp.add_argument("file")
    qp.add_argument("--out")
    qp.set_defaults(fn=cmd_quotient)

    cp = sub.add_parser("compat", help="correction compatibility of a subspace")
    cp.add_argument("file")
    cp.add_argument("--out")
    cp.add_argument("--cert-out", dest="cert_out")
    cp.set_defaults(fn=cmd_compat)

    mp = sub.add_parser("complement", help="search for an independence-preserving complement")
    mp.add_argument("file")
    mp.add_argument("--out")
    mp.set_defaults(fn=cmd_complement)

    tp = sub.add_parser("tensor", help="restricted tensor products")
    tp.add_argument("action", choices=["dim", "alt-dim", "assoc", "distrib"])
    tp.add_argument("--space", required=True)
    tp.add_argument("--subspaces")
    tp.add_argument("--m", type=int, default=1)
    tp.add_argument("--n", type=int, default=1)
    tp.add_argument("--out")
    tp.set_defaults(fn=cmd_tensor)

    lp = sub.add_parser("lie", help="partial Lie brackets")
    lp.add_argument("action", choices=["check", "extend"])
    lp.add_argument("file")
    lp.add_argument("--out")
    lp.set_defaults(fn=cmd_lie)

    up = sub.add_parser("uea", help="truncated enveloping algebra")
    up.add_argument("action", choices=["build", "prim"])
    up.add_argument("file")
    up.add_argument("--degree", type=int, default=3)
    up.add_argument("--out")
    up.set_defaults(fn=cmd_uea)

    gp = sub.add_parser("gl", help="decorated forest algebra")
    gp.add_argument("action", choices=["product", "coprod", "antipode", "mm"])
    gp.add_argument("forests", nargs="+")
    gp.add_argument("--omega", required=True)
    gp.add_argument("--out")
    gp.set_defaults(fn=cmd_gl)

    fp = sub.add_parser("fuzz", help="conjecture stress testing")
    fp.add_argument("--statement", type=int, choices=[1, 2, 3], required=True)
    fp.add_argument("--field", type=int, choices=[2, 3], default=2)
    fp.add_argument("--dim", type=int, choices=[2, 3], default=2)
    fp.add_argument("--trials", type=int, default=100)
    fp.add_argument("--seed", type=int)
    fp.add_argument("--cap", type=int, default=6)
    fp.add_argument("--out")
    fp.set_defaults(fn=cmd_fuzz)

    yp = sub.add_parser("certify", help="replay a certificate")
    yp.add_argument("file")
    yp.add_argument("--out")
    yp.set_defaults(fn=cmd_certify)

    xp = sub.add_parser("fixtures", help="run the packaged example corpus")
    xp.add_argument("--dir")
    xp.set_defaults(fn=cmd_fixtures)

    return p


def main(argv: Optional[list] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0,) else 0
    try:
        return args.fn(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except (BackendUnsupported, UndecidedError) as exc:
        print(f"undecided: {exc}", file=sys.stderr)
        return EXIT_UNKNOWN
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NOINPUT


if __name__ == "__main__":
    sys.exit(main())
