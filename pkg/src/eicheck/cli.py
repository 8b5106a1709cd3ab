"""Command-line interface: decide hereditarity, run the oracle, sweep the
corpus, and check normaliser finiteness, all from declarative job files.

Reports are JSON with sorted keys and no volatile fields, so identical
inputs produce byte-identical output; timings go to stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

from .bass_serre import normaliser_finiteness
from .category import decide_hereditary, opposite, skeletalise
from .constructions import (decide_orbit_hereditary, decide_quillen_hereditary,
                            decide_transporter_hereditary, orbit_category,
                            quillen_category, transporter_category)
from .corpus import generate_corpus
from .groups import CoefficientField
from .jobfile import InputError, JobSpec, parse_file
from .oracle import (induced_projective_check, is_hereditary_oracle,
                     omega_verify, oracle_gldim)
from .quiver import build_free_category

EXIT_OK = 0
EXIT_DISAGREEMENT = 1
EXIT_INPUT_ERROR = 2


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        report, failed = args.func(args)
    except (InputError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    payload = json.dumps(report, sort_keys=True, indent=2) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(payload)
    else:
        sys.stdout.write(payload)
    return EXIT_DISAGREEMENT if failed else EXIT_OK


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="eicheck",
        description="hereditarity of finite EI category algebras, with oracle verification")
    sub = parser.add_subparsers(required=True)

    def add(name, fn, with_file=True):
        p = sub.add_parser(name)
        if with_file:
            p.add_argument("file", help="TOML job file")
        p.add_argument("--char", help="comma-separated characteristics (overrides job)")
        p.add_argument("--side", choices=["left", "right", "both"])
        p.add_argument("--oracle", dest="oracle", action="store_true", default=None)
        p.add_argument("--no-oracle", dest="oracle", action="store_false")
        p.add_argument("--target", help="restrict to one declared input")
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--limit-dim", type=int, default=None)
        p.add_argument("--out", help="write the JSON report to this path")
        p.set_defaults(func=fn)
        return p

    add("check", _cmd_check)
    add("transporter", _cmd_transporter)
    orb = add("orbit", _cmd_orbit)
    orb.add_argument("--group", required=True)
    orb.add_argument("--family", required=True)
    qui = add("quillen", _cmd_quillen)
    qui.add_argument("--group", required=True)
    qui.add_argument("--family", required=True)
    add("normaliser", _cmd_normaliser)
    orc = add("oracle", _cmd_oracle)
    orc.add_argument("--op", choices=["gldim", "hereditary", "omega", "induced"],
                     default="hereditary")
    orc.add_argument("--max", type=int, default=3, help="gldim search bound")
    add("corpus", _cmd_corpus, with_file=False)
    add("verify-all", _cmd_verify_all, with_file=False)
    return parser


def _chars(args, spec: JobSpec | None):
    if args.char:
        return [CoefficientField(int(c)) for c in args.char.split(",")]
    if spec is not None:
        return [CoefficientField(c) for c in spec.chars]
    return [CoefficientField(c) for c in (0, 2, 3, 5)]


def _sides(args, spec: JobSpec | None):
    side = args.side or (spec.side if spec else "both")
    return ["left", "right"] if side == "both" else [side]


def _resolved_categories(spec: JobSpec, args):
    """Named categories: declared ones plus free categories of quivers."""
    limit = args.limit_dim or spec.limit_dim
    out = []
    for name in sorted(spec.categories):
        out.append((name, skeletalise(spec.categories[name])[0]))
    for name in sorted(spec.quivers):
        out.append((name, build_free_category(spec.quivers[name], limit)))
    if args.target:
        out = [(n, c) for n, c in out if n == args.target]
        if not out:
            raise InputError(f"target {args.target!r} is not a category or quiver")
    return out


def _decide_and_verify(cat, k, sides, with_oracle):
    items = []
    disagree = False
    opposed = None
    for side in sides:
        verdict = decide_hereditary(cat, k, side)
        item = {"side": side, "decider": verdict.to_json()}
        if with_oracle:
            if side == "right":
                if opposed is None:
                    opposed = opposite(cat)
                work = opposed
            else:
                work = cat
            oracle_verdict = is_hereditary_oracle(work, k)
            item["oracle"] = "hereditary" if oracle_verdict else "not-hereditary"
            item["agree"] = oracle_verdict == verdict.hereditary
            disagree = disagree or not item["agree"]
        items.append(item)
    return items, disagree


def _cmd_check(args):
    spec = parse_file(args.file)
    with_oracle = spec.oracle if args.oracle is None else args.oracle
    rows = []
    failed = False
    for name, cat in _resolved_categories(spec, args):
        for k in _chars(args, spec):
            items, disagree = _decide_and_verify(cat, k, _sides(args, spec), with_oracle)
            failed = failed or disagree
            rows.append({"input": name, "char": k.characteristic, "results": items})
    return _report("check", rows, failed), failed


def run_job(spec: JobSpec, chars=None, sides=None, with_oracle=None):
    """Process every declared input of a job: categories and quivers through
    the hereditarity decision (with oracle agreement), group posets through
    the transporter decider, graph-of-groups queries through the normaliser
    check.  Returns (report, failed)."""
    chars = chars or [CoefficientField(c) for c in spec.chars]
    sides = sides or (["left", "right"] if spec.side == "both" else [spec.side])
    with_oracle = spec.oracle if with_oracle is None else with_oracle
    rows = []
    failed = False
    for name in sorted(spec.categories):
        cat = skeletalise(spec.categories[name])[0]
        for k in chars:
            items, disagree = _decide_and_verify(cat, k, sides, with_oracle)
            failed = failed or disagree
            rows.append({"input": name, "kind": "category",
                         "char": k.characteristic, "results": items})
    for name in sorted(spec.quivers):
        cat = build_free_category(spec.quivers[name], spec.limit_dim)
        for k in chars:
            items, disagree = _decide_and_verify(cat, k, sides, with_oracle)
            failed = failed or disagree
            rows.append({"input": name, "kind": "quiver",
                         "char": k.characteristic, "results": items})
    for name in sorted(spec.gposets):
        p = spec.gposets[name]
        cat = skeletalise(transporter_category(p))[0]
        for k in chars:
            verdict = decide_transporter_hereditary(p, k)
            row = {"input": name, "kind": "gposet", "char": k.characteristic,
                   "decider": verdict.to_json()}
            if with_oracle:
                agree = is_hereditary_oracle(cat, k) == verdict.hereditary
                row["agree"] = agree
                failed = failed or not agree
            rows.append(row)
    for name in sorted(spec.gogs):
        gog, base, queries = spec.gogs[name]
        for i, q in enumerate(queries):
            res = normaliser_finiteness(gog, q.vertex, q.subgroup)
            row = {"input": name, "kind": "gog", "query": i, "verdict": res.verdict}
            if res.is_infinite:
                row["witness"] = res.witness.display(gog)
            else:
                row["normaliser_order"] = res.normaliser_order
            rows.append(row)
    return _report("run-job", rows, failed), failed


def _cmd_transporter(args):
    spec = parse_file(args.file)
    with_oracle = spec.oracle if args.oracle is None else args.oracle
    names = sorted(spec.gposets)
    if args.target:
        names = [n for n in names if n == args.target]
    rows = []
    failed = False
    for name in names:
        p = spec.gposets[name]
        cat = skeletalise(transporter_category(p))[0]
        for k in _chars(args, spec):
            verdict = decide_transporter_hereditary(p, k)
            row = {"input": name, "char": k.characteristic,
                   "decider": verdict.to_json()}
            if with_oracle:
                oracle_verdict = is_hereditary_oracle(cat, k)
                row["oracle"] = "hereditary" if oracle_verdict else "not-hereditary"
                row["agree"] = oracle_verdict == verdict.hereditary
                failed = failed or not row["agree"]
            rows.append(row)
    return _report("transporter", rows, failed), failed


def _family_for(spec, args):
    if args.family not in spec.families:
        raise InputError(f"unknown family {args.family!r}")
    gname, fam = spec.families[args.family]
    if gname != args.group:
        raise InputError(f"family {args.family!r} is declared over group {gname!r}")
    if args.group not in spec.groups:
        raise InputError(f"unknown group {args.group!r}")
    return spec.groups[args.group], fam


def _cmd_orbit(args):
    spec = parse_file(args.file)
    grp, fam = _family_for(spec, args)
    with_oracle = spec.oracle if args.oracle is None else args.oracle
    rows = []
    failed = False
    cat = orbit_category(grp, fam) if with_oracle else None
    for k in _chars(args, spec):
        verdict = decide_orbit_hereditary(grp, fam, k)
        row = {"group": args.group, "family": args.family,
               "char": k.characteristic, "decider": verdict.to_json()}
        if with_oracle:
            oracle_verdict = is_hereditary_oracle(cat, k)
            row["oracle"] = "hereditary" if oracle_verdict else "not-hereditary"
            row["agree"] = oracle_verdict == verdict.hereditary
            failed = failed or not row["agree"]
        rows.append(row)
    return _report("orbit", rows, failed), failed


def _cmd_quillen(args):
    spec = parse_file(args.file)
    grp, fam = _family_for(spec, args)
    with_oracle = spec.oracle if args.oracle is None else args.oracle
    rows = []
    failed = False
    cat = quillen_category(grp, fam) if with_oracle else None
    for k in _chars(args, spec):
        verdict = decide_quillen_hereditary(grp, fam, k)
        row = {"group": args.group, "family": args.family,
               "char": k.characteristic, "decider": verdict.to_json()}
        if with_oracle:
            oracle_verdict = is_hereditary_oracle(cat, k)
            row["oracle"] = "hereditary" if oracle_verdict else "not-hereditary"
            row["agree"] = oracle_verdict == verdict.hereditary
            failed = failed or not row["agree"]
        rows.append(row)
    return _report("quillen", rows, failed), failed


def _cmd_normaliser(args):
    spec = parse_file(args.file)
    names = sorted(spec.gogs)
    if args.target:
        names = [n for n in names if n == args.target]
    rows = []
    for name in names:
        gog, base, queries = spec.gogs[name]
        for i, q in enumerate(queries):
            res = normaliser_finiteness(gog, q.vertex, q.subgroup)
            row = {"input": name, "query": i, "vertex": q.vertex,
                   "subgroup": list(q.subgroup.members), "verdict": res.verdict}
            if res.is_infinite:
                row["witness"] = {"edges": list(res.witness.edges),
                                  "labels": list(res.witness.labels),
                                  "display": res.witness.display(gog)}
            else:
                row["normaliser_order"] = res.normaliser_order
                row["normaliser"] = list(res.normaliser.members)
                row["centre"] = res.centre_kind
            rows.append(row)
    return _report("normaliser", rows, False), False


def _cmd_oracle(args):
    spec = parse_file(args.file)
    rows = []
    failed = False
    for name, cat in _resolved_categories(spec, args):
        for k in _chars(args, spec):
            row = {"input": name, "char": k.characteristic, "op": args.op}
            if args.op == "gldim":
                res = oracle_gldim(cat, k, args.max)
                row["gldim"] = res.display()
            elif args.op == "hereditary":
                row["hereditary"] = is_hereditary_oracle(cat, k)
            elif args.op == "omega":
                rep = omega_verify(cat, k)
                row.update({"dim_algebra": rep.dim_algebra,
                            "dim_tensor_square": rep.dim_tensor_square,
                            "dim_omega": rep.dim_omega,
                            "unfactorisable_tensor_dim": rep.unfactorisable_tensor_dim,
                            "ok": rep.ok})
                failed = failed or not rep.ok
            elif args.op == "induced":
                if decide_hereditary(cat, k, "left").hereditary:
                    rep = induced_projective_check(cat, k)
                    row["checks"] = [{"label": c.label, "expected": list(c.expected),
                                      "got": list(c.got), "ok": c.ok}
                                     for c in rep.checks]
                    row["ok"] = rep.ok
                    failed = failed or not rep.ok
                else:
                    row["skipped"] = "not hereditary"
            rows.append(row)
    return _report("oracle", rows, failed), failed


def _cmd_corpus(args):
    seed = args.seed if args.seed is not None else 0
    limit = args.limit_dim or 300
    corpus = generate_corpus(seed=seed, max_dim=limit)
    rows = [{"name": name, "objects": cat.n_objects, "dim": cat.n_morphisms}
            for name, cat in corpus]
    report = _report("corpus", rows, False)
    report["seed"] = seed
    report["count"] = len(rows)
    return report, False


def _cmd_verify_all(args):
    seed = args.seed if args.seed is not None else 0
    limit = args.limit_dim or 300
    chars = _chars(args, None)
    sides = ["left", "right"] if args.side in (None, "both") else [args.side]
    corpus = generate_corpus(seed=seed, max_dim=limit)
    rows = []
    failed = False
    t0 = time.time()
    for name, cat in corpus:
        opposed = None
        for k in chars:
            for side in sides:
                verdict = decide_hereditary(cat, k, side)
                if side == "right":
                    if opposed is None:
                        opposed = opposite(cat)
                    work = opposed
                else:
                    work = cat
                oracle_verdict = is_hereditary_oracle(work, k)
                agree = oracle_verdict == verdict.hereditary
                failed = failed or not agree
                rows.append({"input": name, "char": k.characteristic, "side": side,
                             "decider": verdict.verdict,
                             "oracle": "hereditary" if oracle_verdict else "not-hereditary",
                             "agree": agree})
    print(f"verify-all: {len(rows)} cases in {time.time() - t0:.1f}s", file=sys.stderr)
    report = _report("verify-all", rows, failed)
    report["seed"] = seed
    return report, failed


def _report(command, rows, failed):
    return {
        "schema": "eicheck-report/1",
        "command": command,
        "items": rows,
        "summary": {"total": len(rows), "failed": bool(failed)},
    }


if __name__ == "__main__":
    sys.exit(main())
