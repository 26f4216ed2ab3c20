"""Command line interface.

Subcommands: field, groups, blocks, params, verify, lemma, conjecture.
Exit codes: 0 success, 1 a verification check failed, 2 usage or domain
error.  Exports are deterministic: the same arguments produce the same
bytes for any --threads value.
"""

from __future__ import annotations

import argparse
import sys
import time

from . import __version__, closed_forms, exports, kernels
from .construction import (blocks_through_pair, collect_wk, enumerate_wk,
                           group_set, sample_pair_contexts)
from .field import build_field, poly_str
from .reporting import FAIL, PASS, VerificationReport
from .verifier import (conjecture_probe, verify_balance, verify_cardinalities,
                       verify_lemma_relations)

_AUTO_COUNT_K = 6  # blocks defaults to counting at k >= 6, m >= 7
_AUTO_COUNT_M = 7


def _parse_pairs(text: str) -> tuple[str, int]:
    if text == "all":
        return "all", 0
    if text.startswith("sample:"):
        n = int(text.split(":", 1)[1])
        if n < 1:
            raise ValueError(f"sample size must be >= 1, got {n}")
        return "sample", n
    raise ValueError(f"--pairs must be 'all' or 'sample:N', got {text!r}")


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="gf2gdd",
        description="group divisible designs over GF(2^m): build, count, verify")
    p.add_argument("--version", action="version", version=f"gf2gdd {__version__}")
    sub = p.add_subparsers(dest="cmd", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--m", type=int, required=True, help="field degree, 3..20")
    common.add_argument("--poly", type=lambda s: int(s, 0), default=None,
                        help="modulus override as a bitmask, e.g. 0x13")
    common.add_argument("--notation", choices=("power", "hex", "poly"),
                        default="power", help="element display style")
    common.add_argument("--threads", type=int, default=None,
                        help="worker threads; default: available cores")
    common.add_argument("--seed", type=int, default=0, help="RNG seed for sampling")
    common.add_argument("--json", metavar="PATH", help="write a JSON export")
    common.add_argument("--csv", metavar="PATH", help="write a CSV export")
    common.add_argument("--manifest", metavar="PATH", help="write a run manifest")

    withk = argparse.ArgumentParser(add_help=False, parents=[common])
    withk.add_argument("--k", type=int, required=True, help="block size")

    sub.add_parser("field", parents=[common],
                   help="show the field construction")
    sub.add_parser("groups", parents=[common],
                   help="list the groups {a, a+1}")
    b = sub.add_parser("blocks", parents=[withk],
                       help="enumerate the blocks of size k")
    b.add_argument("--count-only", action="store_true",
                   help="skip materializing the block list")
    sub.add_parser("params", parents=[withk],
                   help="closed-form parameters and identities")
    v = sub.add_parser("verify", parents=[withk],
                       help="verify pair balance against the closed form")
    v.add_argument("--pairs", default="sample:8",
                   help="'all' or 'sample:N' (default sample:8)")
    v.add_argument("--frobenius", action="store_true",
                   help="sampled mode: count one pair per squaring orbit")
    le = sub.add_parser("lemma", parents=[withk],
                        help="marker-set relations over sampled pair contexts")
    le.add_argument("--pairs", default="sample:1",
                    help="'sample:N' pair contexts (default sample:1)")
    c = sub.add_parser("conjecture", parents=[withk],
                       help="probe pair counts in the conjectured regime k >= 8")
    c.add_argument("--pairs", default="sample:2",
                   help="'sample:N' probed pairs (default sample:2)")
    return p


def _print_report(rep: VerificationReport) -> None:
    for c in rep.checks:
        if c.status == PASS:
            print(f"  [pass] {c.name}: {c.observed!r}")
        elif c.status == FAIL:
            print(f"  [FAIL] {c.name}: observed={c.observed!r} "
                  f"expected={c.expected!r} witness={c.witness!r}")
        else:
            print(f"  [skip] {c.name}: {c.witness}")
    for note in rep.notes:
        print(f"  note: {note}")


def _finish(args, ctx, doc: dict, started: float, k: int | None,
            rep: VerificationReport | None = None) -> int:
    code = 0
    if rep is not None and not rep.ok():
        code = 1
    if args.json:
        exports.write_json(args.json, doc)
    if args.manifest:
        man = exports.RunManifest(
            command=[str(a) for a in (sys.argv[1:] if args._argv is None else args._argv)],
            m=ctx.m, modulus=format(ctx.modulus, "#x"), alpha=format(ctx.alpha, "#x"),
            k=k, seed=args.seed, threads=args.threads, backend=kernels.BACKEND,
            duration_s=round(time.perf_counter() - started, 6),
            digest=exports.digest(doc))
        exports.write_manifest(args.manifest, man)
    return code


def _cmd_field(args, ctx, started) -> int:
    print(f"GF(2^{args.m}), modulus {poly_str(ctx.modulus)} ({ctx.modulus:#x})")
    x_is_alpha = "x" if ctx.alpha == 2 else "a non-x generator"
    print(f"generator g = {poly_str(ctx.alpha)} ({ctx.alpha:#x}), {x_is_alpha}, "
          f"order {ctx.size - 1}")
    table = None
    if args.m <= 8:
        table = {}
        for i in range(ctx.size - 1):
            a = ctx.exp_table[i]
            print(f"  g^{i:<3d} = {poly_str(a):<{3 * args.m}} = {a:#x}")
            table[f"g^{i}"] = format(a, "#x")
    doc = exports.build_document(ctx, extra={"elements": table} if table else None)
    if args.csv:
        exports.write_csv(args.csv, ctx, [[a] for a in ctx.x_elements()],
                          args.notation, meta={"m": args.m, "modulus": f"{ctx.modulus:#x}"})
    return _finish(args, ctx, doc, started, None)


def _cmd_groups(args, ctx, started) -> int:
    groups = group_set(ctx)
    print(f"{len(groups)} groups over X, |X| = {ctx.size - 2}")
    for g in groups:
        print("  " + ",".join(ctx.format_element(x, args.notation) for x in g))
    doc = exports.build_document(ctx, groups=groups)
    if args.csv:
        exports.write_csv(args.csv, ctx, groups, args.notation,
                          meta={"m": args.m, "modulus": f"{ctx.modulus:#x}",
                                "notation": args.notation})
    return _finish(args, ctx, doc, started, None)


def _cmd_blocks(args, ctx, started) -> int:
    k = args.k
    params = closed_forms.design_params(ctx.m, k)
    count_only = args.count_only
    if not count_only and (k >= _AUTO_COUNT_K and ctx.m >= _AUTO_COUNT_M
                           and not (args.json or args.csv)):
        print(f"note: k={k}, m={ctx.m} is large; counting only "
              f"(pass --json/--csv to materialize)")
        count_only = True
    if not count_only and ctx.m > 16:
        print("note: block lists are capped at m=16; counting only")
        count_only = True
    tag = " (conjectured)" if params.conjectured else ""
    if count_only:
        if args.csv:
            print("note: --csv ignored in count-only mode", file=sys.stderr)
        n = enumerate_wk(ctx, k, threads=args.threads)
        print(f"blocks: {n}, expected b = {params.b}{tag}")
        doc = exports.build_document(ctx, k=k, params=params.as_dict(),
                                     extra={"block_count": n})
        return _finish(args, ctx, doc, started, k)
    blocks = collect_wk(ctx, k, threads=args.threads)
    print(f"blocks: {len(blocks)}, expected b = {params.b}{tag}")
    for row in blocks.tolist():
        print("  " + ",".join(ctx.format_element(x, args.notation) for x in row))
    doc = exports.build_document(ctx, k=k, groups=group_set(ctx), blocks=blocks,
                                 params=params.as_dict())
    if args.csv:
        exports.write_csv(args.csv, ctx, blocks.tolist(), args.notation,
                          meta={"m": args.m, "k": k, "modulus": f"{ctx.modulus:#x}",
                                "notation": args.notation})
    return _finish(args, ctx, doc, started, k)


def _cmd_params(args, ctx, started) -> int:
    k = args.k
    params = closed_forms.design_params(ctx.m, k)
    tag = " (conjectured)" if params.conjectured else ""
    print(f"m={ctx.m} k={k}{tag}")
    print(f"  lambda = {params.lambda_}")
    print(f"  r      = {params.r}")
    print(f"  b      = {params.b}")
    rep = VerificationReport(title="closed-form-identities")
    for name, ok, lhs, rhs in closed_forms.consistency_identities(ctx.m, k):
        rep.record(name, lhs, rhs)
    _print_report(rep)
    doc = exports.build_document(ctx, k=k, params=params.as_dict(), report=rep)
    return _finish(args, ctx, doc, started, k, rep)


def _cmd_verify(args, ctx, started) -> int:
    k = args.k
    policy, n = _parse_pairs(args.pairs)
    rep = verify_balance(ctx, k, policy=policy, pairs=n or 8, seed=args.seed,
                         threads=args.threads, use_frobenius=args.frobenius)
    _print_report(rep)
    lam = rep.lambda_observed
    tag = " (conjectured)" if rep.conjectured else ""
    if rep.ok():
        print(f"balance OK: lambda = {lam}{tag}, {rep.pairs_tested} pairs verified")
    else:
        print(f"balance FAILED after {rep.pairs_tested} pairs, see witnesses above")
    doc = exports.build_document(ctx, k=k,
                                 params=closed_forms.design_params(ctx.m, k).as_dict(),
                                 report=rep)
    return _finish(args, ctx, doc, started, k, rep)


def _cmd_lemma(args, ctx, started) -> int:
    k = args.k
    policy, n = _parse_pairs(args.pairs)
    if policy != "sample":
        raise ValueError("lemma checks run on sampled pair contexts; use --pairs sample:N")
    rep = VerificationReport(title="marker-relations")
    for pc in sample_pair_contexts(ctx, n, args.seed):
        tag = f"({ctx.format_element(pc.u, 'hex')},{ctx.format_element(pc.v, 'hex')})"
        sub = verify_lemma_relations(ctx, k, pc, threads=args.threads)
        if k >= 4:
            sub.merge(verify_cardinalities(ctx, k, pc, threads=args.threads))
        for c in sub.checks:
            c.name = f"{tag} {c.name}"
        sub.pairs_tested = 1
        rep.merge(sub)
    _print_report(rep)
    print(("all marker relations hold" if rep.ok() else "marker relations FAILED")
          + f" over {rep.pairs_tested} pair contexts")
    doc = exports.build_document(ctx, k=k, report=rep)
    return _finish(args, ctx, doc, started, k, rep)


def _cmd_conjecture(args, ctx, started) -> int:
    k = args.k
    policy, n = _parse_pairs(args.pairs)
    if policy != "sample":
        raise ValueError("the conjectured regime is probed by sampling; use --pairs sample:N")
    rep = conjecture_probe(ctx, k, pair_budget=n, seed=args.seed, threads=args.threads)
    _print_report(rep)
    status = "agree with" if rep.ok() else "CONTRADICT"
    print(f"{rep.pairs_tested} sampled pairs {status} the conjectured "
          f"lambda = {closed_forms.lambda_closed(ctx.m, k)}")
    doc = exports.build_document(ctx, k=k,
                                 params=closed_forms.design_params(ctx.m, k).as_dict(),
                                 report=rep)
    return _finish(args, ctx, doc, started, k, rep)


_HANDLERS = {
    "field": _cmd_field,
    "groups": _cmd_groups,
    "blocks": _cmd_blocks,
    "params": _cmd_params,
    "verify": _cmd_verify,
    "lemma": _cmd_lemma,
    "conjecture": _cmd_conjecture,
}


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    args._argv = argv
    started = time.perf_counter()
    try:
        ctx = build_field(args.m, args.poly)
        return _HANDLERS[args.cmd](args, ctx, started)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
