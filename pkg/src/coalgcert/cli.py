"""Command-line front end.

Subcommands: certify, distinguish, minimize, check, translate, stats, gen.
Exit codes: 0 success, 2 malformed input, 3 internal verification failure,
4 request incompatible with the model (wrong mode or logic for the functor).
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import asdict, dataclass

from .certdag import (
    CertError, build_certificates, distinguish, expand, render_node,
    reachable, serialize,
)
from .coalgebra import (
    ModelError, desugar_composite, parse_coalgebra, pretty_model, quotient,
)
from .functor import Composite, FunctorError, is_cancellative, pretty_functor
from .logic import EvalError, check_certificates, eval_ref, parse_formula
from .oracle import GeneratorSpec, generate, naive_bisimilarity, partition_key
from .refiner import refine, replay_trace
from .translate import (
    TranslateError, default_logic, eval_ds, parse_ds, pretty_ds, translate,
    translate_ref,
)

OK, INPUT_ERROR, VERIFY_ERROR, INCOMPATIBLE = 0, 2, 3, 4


class CliFailure(Exception):
    def __init__(self, code, message):
        super().__init__(message)
        self.code = code


@dataclass
class RunReport:
    functor: str
    n: int
    m: int
    mode: str
    iterations: int
    new_blocks: int
    visited_edges: int
    blocks: int
    dag_nodes: int
    dag_edges: int
    dag_height: int
    dag_allocs: int
    refine_ms: float
    certify_ms: float

    def lines(self):
        return ["%s: %s" % (k, v) for k, v in asdict(self).items()]


def _load(path):
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as e:
        raise CliFailure(INPUT_ERROR, str(e))
    try:
        return parse_coalgebra(text)
    except (ModelError, FunctorError) as e:
        raise CliFailure(INPUT_ERROR, "cannot parse %s: %s" % (path, e))


def _prepare(c, mode):
    """Unfold composition if needed; returns (coalgebra, visible state ids)."""
    if isinstance(c.functor, Composite):
        des = desugar_composite(c)
        visible = list(range(des.original))
        c = des.coalgebra
    else:
        visible = list(range(c.n))
    if mode == "cancellative" and not is_cancellative(c.functor):
        raise CliFailure(INCOMPATIBLE,
                         "functor %s is not cancellative; use --mode generic"
                         % pretty_functor(c.functor))
    return c, visible


def _run(c, mode):
    t0 = time.perf_counter()
    result = refine(c, mode=mode)
    t1 = time.perf_counter()
    certs = build_certificates(c, result)
    t2 = time.perf_counter()
    return result, certs, (t1 - t0) * 1000.0, (t2 - t1) * 1000.0


def _visible_blocks(certs, visible):
    vis = set(visible)
    return [bid for bid, states in zip(certs.block_ids, certs.blocks)
            if states[0] in vis]


def _verify(c, mode, result, certs):
    bad = check_certificates(certs, c)
    if bad:
        raise CliFailure(VERIFY_ERROR,
                         "certificate extensions do not match blocks: %r"
                         % bad[:3])
    want = partition_key(naive_bisimilarity(c))
    if partition_key(result.blocks) != want:
        raise CliFailure(VERIFY_ERROR, "partition differs from the oracle")
    cross = refine(c, mode="naive")
    if partition_key(cross.blocks) != want:
        raise CliFailure(VERIFY_ERROR, "naive cross-check disagrees")
    if replay_trace(result.trace) != result.block_of:
        raise CliFailure(VERIFY_ERROR, "trace replay mismatch")


def _emit(text, out):
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_certify(args):
    c0 = _load(args.model)
    c, visible = _prepare(c0, args.mode)
    result, certs, rms, cms = _run(c, args.mode)
    if args.verify:
        _verify(c, args.mode, result, certs)
    ids = _visible_blocks(certs, visible)
    if args.json:
        nodes = reachable(certs.dag, [certs.delta[b] for b in ids])
        payload = {
            "functor": pretty_functor(c.functor),
            "mode": args.mode,
            "blocks": [{"id": b,
                        "states": [c.states[s]
                                   for s in certs.blocks[certs.block_ids.index(b)]]}
                       for b in ids],
            "dag": [{"id": nid,
                     "node": render_node(certs.dag, nid, c.functor)}
                    for nid in nodes],
            "certificates": {str(b): "#%d" % certs.delta[b][0] for b in ids},
        }
        _emit(json.dumps(payload, indent=2, sort_keys=True) + "\n", args.out)
    else:
        _emit(serialize(certs, restrict_blocks=ids), args.out)
    return OK


def cmd_distinguish(args):
    c0 = _load(args.model)
    c, _visible = _prepare(c0, args.mode)
    idx = c.state_index()
    for name in (args.x, args.y):
        if name not in idx:
            raise CliFailure(INPUT_ERROR, "unknown state %r" % name)
    result, certs, _, _ = _run(c, args.mode)
    ref = distinguish(certs, idx[args.x], idx[args.y])
    if ref is None:
        print("equivalent")
        return OK
    ext = eval_ref(certs.dag, ref, c)
    if idx[args.x] not in ext or idx[args.y] in ext:
        raise CliFailure(VERIFY_ERROR, "distinguishing formula check failed")
    if args.logic:
        _require_logic(c, args.logic)
        phi = translate_ref(certs, ref, args.logic)
        ds_ext = eval_ds(phi, c)
        if idx[args.x] not in ds_ext or idx[args.y] in ds_ext:
            raise CliFailure(VERIFY_ERROR, "translated formula check failed")
        print(pretty_ds(phi))
    else:
        print(expand(certs.dag, ref, c.functor))
    return OK


def cmd_minimize(args):
    c = _load(args.model)
    if isinstance(c.functor, Composite):
        raise CliFailure(INCOMPATIBLE,
                         "minimize does not support composed functors")
    result = refine(c, mode=args.mode)
    q = quotient(c, result.blocks)
    _emit(pretty_model(q), args.out)
    return OK


def cmd_check(args):
    c0 = _load(args.model)
    c, visible = _prepare(c0, "generic")
    try:
        dag, ref = parse_formula(args.formula, c.functor)
        ext = eval_ref(dag, ref, c)
    except EvalError:
        logic = args.logic or default_logic(c.functor)
        if logic is None:
            raise CliFailure(INPUT_ERROR,
                             "cannot parse formula %r" % args.formula)
        try:
            phi = parse_ds(args.formula, logic)
            ext = eval_ds(phi, c)
        except TranslateError as e:
            raise CliFailure(INPUT_ERROR, str(e))
    names = sorted(c.states[s] for s in ext if s in set(visible))
    print(" ".join(names))
    return OK


def cmd_translate(args):
    c0 = _load(args.model)
    c, visible = _prepare(c0, args.mode)
    _require_logic(c, args.logic)
    if args.mode == "cancellative" and args.logic in ("hm", "prob"):
        raise CliFailure(INCOMPATIBLE,
                         "logic %r needs certificates from generic mode"
                         % args.logic)
    result, certs, _, _ = _run(c, args.mode)
    ids = _visible_blocks(certs, visible)
    formulas = translate(certs, args.logic, blocks=ids)
    lines = []
    for bid in ids:
        states = certs.blocks[certs.block_ids.index(bid)]
        lines.append("block %d (%s): %s"
                     % (bid, " ".join(c.states[s] for s in states),
                        pretty_ds(formulas[bid])))
    _emit("\n".join(lines) + "\n", args.out)
    return OK


def cmd_stats(args):
    c0 = _load(args.model)
    c, _visible = _prepare(c0, args.mode)
    result, certs, rms, cms = _run(c, args.mode)
    nodes, edges = certs.dag.size()
    report = RunReport(
        functor=pretty_functor(c.functor), n=c.n, m=c.m, mode=args.mode,
        iterations=result.stats["iterations"],
        new_blocks=result.stats["new_blocks"],
        visited_edges=result.stats["visited_edges"],
        blocks=len(result.blocks), dag_nodes=nodes, dag_edges=edges,
        dag_height=certs.dag.height(), dag_allocs=certs.dag.allocs,
        refine_ms=round(rms, 3), certify_ms=round(cms, 3))
    if args.json:
        print(json.dumps(asdict(report), sort_keys=True))
    else:
        print("\n".join(report.lines()))
    return OK


def cmd_gen(args):
    try:
        spec = GeneratorSpec(functor=args.functor, n=args.n, seed=args.seed,
                             density=args.density)
        c = generate(spec)
    except (FunctorError, ValueError) as e:
        raise CliFailure(INPUT_ERROR, str(e))
    _emit(pretty_model(c), args.out)
    return OK


def _require_logic(c, logic):
    want = default_logic(c.functor)
    if want != logic:
        raise CliFailure(
            INCOMPATIBLE,
            "logic %r does not fit functor %s%s"
            % (logic, pretty_functor(c.functor),
               "" if want is None else " (expected --logic %s)" % want))


def build_parser():
    p = argparse.ArgumentParser(
        prog="coalgcert",
        description="behavioural equivalence with certificates for "
                    "coalgebras of configurable set functors")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, mode=True):
        sp.add_argument("model", help="model file")
        if mode:
            sp.add_argument("--mode", choices=("generic", "cancellative",
                                               "naive"), default="generic")

    sp = sub.add_parser("certify", help="partition + certificate dag")
    common(sp)
    sp.add_argument("--verify", action="store_true",
                    help="cross-check against the oracle and naive mode")
    sp.add_argument("--json", action="store_true")
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_certify)

    sp = sub.add_parser("distinguish",
                        help="formula separating two states, if any")
    common(sp)
    sp.add_argument("x")
    sp.add_argument("y")
    sp.add_argument("--logic", choices=("hm", "weighted", "signature", "prob"))
    sp.set_defaults(func=cmd_distinguish)

    sp = sub.add_parser("minimize", help="quotient by behavioural equivalence")
    common(sp)
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_minimize)

    sp = sub.add_parser("check", help="states satisfying a formula")
    common(sp, mode=False)
    sp.add_argument("formula")
    sp.add_argument("--logic", choices=("hm", "weighted", "signature", "prob"))
    sp.set_defaults(func=cmd_check)

    sp = sub.add_parser("translate",
                        help="certificates in a domain-specific logic")
    common(sp)
    sp.add_argument("--logic", required=True,
                    choices=("hm", "weighted", "signature", "prob"))
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_translate)

    sp = sub.add_parser("stats", help="run report")
    common(sp)
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(func=cmd_stats)

    sp = sub.add_parser("gen", help="seeded random model")
    sp.add_argument("--functor", required=True)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--density", type=float, default=0.15)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_gen)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CliFailure as e:
        print("error: %s" % e, file=sys.stderr)
        return e.code
    except (ModelError, FunctorError, EvalError, TranslateError,
            CertError) as e:
        print("error: %s" % e, file=sys.stderr)
        return INPUT_ERROR


if __name__ == "__main__":
    sys.exit(main())
