"""Command line entry point: ``banachlat <command> ...``.

Exit codes: 0 success, 2 unreadable input, 3 a mathematical precondition
failed (the witness is printed), 4 an internal certificate failed.
"""
from __future__ import annotations

import argparse
import sys
from fractions import Fraction

from . import documents as docs
from .amalgam import AmalgamationError, amalgamate, amalgamate_c_embeddings
from .branching import build_dyadic_tree, check_tree, two_generator, verify_reconstruction
from .documents import DocumentError, q, qmat, qvec
from .embeddings import embed_into_grid, renorm_for_isometry
from .fraisse import TaskRejected, build_chain, chain_step, distance, homogeneity_probe, next_task
from .lattices import LatticeError, certify_embedding, check_homomorphism
from .polyhedra import LPError, PolyhedronError
from .terms import to_json


class Precondition(Exception):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


def _rational(text: str) -> Fraction:
    try:
        return docs.parse_q(text.strip(), "argument")
    except DocumentError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _vector(text: str) -> tuple:
    body = text.strip()
    if body.startswith("[") and body.endswith("]"):
        body = body[1:-1]
    parts = [p.strip() for p in body.split(",")] if body.strip() else []
    return tuple(docs.parse_q(p, f"vector[{i}]") for i, p in enumerate(parts))


def _emit(doc: dict, out: str | None) -> None:
    text = docs.dumps(doc)
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _cert_body(cert) -> dict:
    return docs.certificate_doc(cert)


# -- commands -------------------------------------------------------------------

def cmd_norm(args) -> int:
    lat = docs.read(args.lattice, "lattice")
    x = _vector(args.vector)
    if len(x) != lat.dim:
        raise Precondition(f"vector has {len(x)} entries, lattice has dimension {lat.dim}")
    print(q(lat.norm(x)))
    return 0


def cmd_check_map(args) -> int:
    f = docs.read(args.map, "map")
    hom = check_homomorphism(f)
    body = {"homomorphism": hom.ok, "witness": None if hom.ok else [q(w) if isinstance(w, Fraction) else w
                                                                for w in hom.witness]}
    if hom.ok:
        cert = certify_embedding(f)
        body["certificate"] = _cert_body(cert)
        body["isometric"] = cert.is_isometric()
    else:
        body["certificate"] = None
        body["isometric"] = False
    _emit(docs.report_doc("check-map", body), args.output)
    return 0 if hom.ok else 3


def cmd_embed(args) -> int:
    lat = docs.read(args.lattice, "lattice")
    funcs = None
    if args.functionals:
        try:
            funcs = [int(s) for s in args.functionals.split(",")]
        except ValueError:
            raise DocumentError("--functionals", "expected comma separated indices") from None
        if any(not 0 <= k < len(lat.dual_oep) for k in funcs):
            raise Precondition("functional index out of range", len(lat.dual_oep))
    _emit(docs.map_doc(embed_into_grid(lat, funcs, compact=args.compact)), args.output)
    return 0


def cmd_amalgamate(args) -> int:
    f1 = docs.read(args.f1, "map")
    f2 = docs.read(args.f2, "map")
    c = args.c
    if args.mode:
        res = amalgamate_c_embeddings(f1, c, f2, c, args.mode)
    else:
        res = amalgamate(f1, f2, c)
    for cert in res.certificates:
        limit = c * c if args.mode == "one_isometric" else c
        if cert.constant > limit:
            raise AmalgamationError("emitted certificate exceeds the promised constant")
    _emit(docs.pushout_doc(res, f1, f2), args.output)
    return 0


def cmd_renorm(args) -> int:
    f = docs.read(args.map, "map")
    _emit(docs.lattice_doc(renorm_for_isometry(f, args.c)), args.output)
    return 0


def _upper_body(w) -> dict:
    return {"strategy": w.strategy, "value": q(w.value), "Z": docs.lattice_doc(w.Z),
            "phi1": qmat(w.phi1.matrix), "phi2": qmat(w.phi2.matrix)}


def cmd_distance(args) -> int:
    a = docs.read(args.a, "tuple")
    b = docs.read(args.b, "tuple")
    if len(a) != len(b):
        raise Precondition("tuples have different lengths", (len(a), len(b)))
    d = distance(a, b, args.budget, args.depth)
    lw = d.lower_witness
    body = {
        "lower": q(d.lower), "upper": q(d.upper),
        "lower_witness": None if lw is None else {
            "term": to_json(lw.term), "norm_a": q(lw.norm_a), "norm_b": q(lw.norm_b), "lipschitz": q(lw.lip)},
        "upper_witness": _upper_body(d.upper_witness),
    }
    _emit(docs.report_doc("distance", body), args.output)
    return 0


def cmd_chain(args) -> int:
    if args.chain_cmd == "build":
        catalogue = [docs.read(p, "lattice") for p in args.catalogue]
        state = build_chain(catalogue, args.steps, args.seed)
        _emit(docs.chain_doc(state), args.output)
        return 0
    state = docs.read(args.chain, "chain")
    if args.chain_cmd == "step":
        for _ in range(args.steps):
            if not state.queue:
                state.queue.append(next_task(state))
            state = chain_step(state)
        _emit(docs.chain_doc(state), args.output)
        return 0
    a = docs.read(args.a, "tuple")
    b = docs.read(args.b, "tuple")
    rep = homogeneity_probe(state, a, args.stage_a, b, args.stage_b, args.eps, args.max_steps)
    body = {"success": rep.success, "steps": rep.steps, "stage": rep.stage,
            "distance": None if rep.distance is None else q(rep.distance),
            "embedding": None if rep.embedding is None else docs.map_doc(rep.embedding),
            "upper": None if rep.bound.upper is None else q(rep.bound.upper),
            "lower": None if rep.bound.lower is None else q(rep.bound.lower),
            "reason": rep.reason}
    _emit(docs.report_doc("chain probe", body), args.output)
    return 0


def cmd_tree(args) -> int:
    _emit(docs.tree_doc(build_dyadic_tree(args.depth)), args.output)
    return 0


def cmd_two_gen(args) -> int:
    tree = docs.read(args.tree, "tree")
    chk = check_tree(tree)
    if not chk.ok:
        raise Precondition("tree invariants fail", [str(p) for p in chk.problems])
    gens = two_generator(tree)
    body = {
        "u": qvec(gens.u), "v": qvec(gens.v),
        "coefficients": [{"node": list(k), "a": q(a)} for k, a in sorted(gens.coeffs.items())
                         if len(k) == tree.depth],
        "recoverers": [{"node": list(r.node), "term": to_json(r.term), "multiple": q(r.multiple)}
                       for r in gens.recoverers],
    }
    if args.verify:
        rec = verify_reconstruction(tree, gens)
        body["verified"] = rec.ok
        if not rec.ok:
            _emit(docs.report_doc("two-gen", body), args.output)
            return 4
    _emit(docs.report_doc("two-gen", body), args.output)
    return 0


def cmd_selftest(args) -> int:
    from .selftest import run

    failures = run(verbose=not args.quiet)
    return 0 if not failures else 4


# -- parser ---------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="banachlat", description="Exact finite Banach lattice constructions.")
    sub = p.add_subparsers(dest="command", required=True)

    def output(sp):
        sp.add_argument("-o", "--output", help="write the document here instead of stdout")

    sp = sub.add_parser("norm", help="exact norm of a vector")
    sp.add_argument("lattice")
    sp.add_argument("vector", help='e.g. "[1/2, -1/2]"')
    sp.set_defaults(func=cmd_norm)

    sp = sub.add_parser("check-map", help="homomorphism verdict and embedding certificate")
    sp.add_argument("map")
    output(sp)
    sp.set_defaults(func=cmd_check_map)

    sp = sub.add_parser("embed", help="isometric embedding into a grid")
    sp.add_argument("lattice")
    sp.add_argument("--functionals", help="comma separated indices into the dual order extreme points")
    sp.add_argument("--compact", action="store_true", help="drop cells with zero coefficient")
    output(sp)
    sp.set_defaults(func=cmd_embed)

    sp = sub.add_parser("amalgamate", help="pushout of two embeddings of the same lattice")
    sp.add_argument("f1")
    sp.add_argument("f2")
    sp.add_argument("--c", type=_rational, default=Fraction(1))
    sp.add_argument("--mode", choices=("balanced", "one_isometric"))
    output(sp)
    sp.set_defaults(func=cmd_amalgamate)

    sp = sub.add_parser("renorm", help="equivalent norm making a map isometric")
    sp.add_argument("map")
    sp.add_argument("--c", type=_rational, required=True)
    output(sp)
    sp.set_defaults(func=cmd_renorm)

    sp = sub.add_parser("distance", help="certified interval for the tuple distance")
    sp.add_argument("a")
    sp.add_argument("b")
    sp.add_argument("--budget", type=int, default=24)
    sp.add_argument("--depth", type=int, default=1)
    output(sp)
    sp.set_defaults(func=cmd_distance)

    sp = sub.add_parser("chain", help="build, extend or probe a chain of lattices")
    csub = sp.add_subparsers(dest="chain_cmd", required=True)
    b = csub.add_parser("build")
    b.add_argument("catalogue", nargs="+", help="lattice documents")
    b.add_argument("--steps", type=int, default=10)
    b.add_argument("--seed", type=int, required=True)
    output(b)
    s = csub.add_parser("step")
    s.add_argument("chain")
    s.add_argument("--steps", type=int, default=1)
    output(s)
    pr = csub.add_parser("probe")
    pr.add_argument("chain")
    pr.add_argument("a")
    pr.add_argument("b")
    pr.add_argument("--stage-a", type=int, required=True)
    pr.add_argument("--stage-b", type=int, required=True)
    pr.add_argument("--eps", type=_rational, required=True)
    pr.add_argument("--max-steps", type=int, default=3)
    output(pr)
    sp.set_defaults(func=cmd_chain)

    sp = sub.add_parser("tree", help="dyadic tree document")
    sp.add_argument("--depth", type=int, required=True)
    output(sp)
    sp.set_defaults(func=cmd_tree)

    sp = sub.add_parser("two-gen", help="two generators and leaf recoverers of a tree")
    sp.add_argument("tree")
    sp.add_argument("--verify", action="store_true")
    output(sp)
    sp.set_defaults(func=cmd_two_gen)

    sp = sub.add_parser("selftest", help="run the invariant suite")
    sp.add_argument("--quiet", action="store_true")
    sp.set_defaults(func=cmd_selftest)
    return p


def _witness_text(w) -> str:
    try:
        return repr(tuple(q(a) for a in w))
    except (TypeError, ValueError):
        return repr(w)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (DocumentError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (AmalgamationError, LPError) as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return 4
    except (Precondition, TaskRejected, LatticeError, PolyhedronError) as exc:
        print(f"precondition failed: {exc}", file=sys.stderr)
        witness = getattr(exc, "witness", None)
        if witness is not None:
            print(f"witness: {_witness_text(witness)}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
