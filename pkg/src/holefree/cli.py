"""Command-line interface.

Exit codes: 0 pass, 1 mathematical violation, 2 usage or parse error,
3 a search cap was exceeded. Reports are JSON; ``--out`` writes them to a
file, otherwise a short summary goes to stdout.
"""

from __future__ import annotations

import argparse
import csv
import logging
import sys
from pathlib import Path

from holefree import __version__, bounds
from holefree import embed as E
from holefree import io as hio
from holefree.goodset import GoodCaps, minimal_good_q, to_binary_almost_net, verify_good
from holefree.holes import HoleCaps, count_holes, is_hole_free, max_hole
from holefree.netgen import (MAX_SOBOL_DIM, AlmostNetParams, minimal_t, sequence_to_net, sobol_points,
                             vdc_points, verify_almost_net, verify_net)
from holefree.pipeline import (EXIT_CAP, EXIT_PASS, EXIT_USAGE, EXIT_VIOLATION, PipelineConfig,
                               read_config, run_pipeline, verify_bundle)


def _emit(report: dict, out: str | None) -> None:
    if out:
        hio.write_json(out, report)


def _int_range(text: str) -> tuple[int, int]:
    lo, sep, hi = text.partition("..")
    try:
        a = int(lo)
        b = int(hi) if sep else a
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected N or LO..HI, got {text!r}") from None
    if a > b:
        raise argparse.ArgumentTypeError(f"empty range {text!r}")
    return a, b


# ---------------------------------------------------------------- net

def cmd_net_gen(args) -> int:
    digits = args.digits
    if args.kind == "vdc":
        if args.s != 1:
            raise ValueError("--s must be 1 for the van der Corput sequence")
        X = vdc_points(args.m, digits)
    elif args.kind == "sobol":
        X = sobol_points(args.s, args.m, digits)
    else:
        if not 2 <= args.s <= MAX_SOBOL_DIM + 1:
            raise ValueError(f"--s must lie in 2..{MAX_SOBOL_DIM + 1} for lifted nets")
        seq = sobol_points(args.s - 1, args.m)
        X = sequence_to_net(seq, bounds.KNOWN_SEQUENCE_T.get(args.s - 1, 0), args.m, digits)
    hio.write_json(args.out, hio.net_to_json(X, args.m))
    print(f"wrote {len(X)} points (s={args.s}, m={args.m}) to {args.out}")
    return EXIT_PASS


def cmd_net_verify(args) -> int:
    X, s, m = hio.net_from_json(hio.read_json(args.input))
    almost = [args.T, args.eps, args.n]
    if any(v is not None for v in almost):
        if any(v is None for v in almost):
            raise ValueError("--T, --eps and --n must be given together")
        params = AlmostNetParams(args.T, hio.parse_fraction(args.eps, "--eps"), args.n)
        chk = verify_almost_net(X, params)
        mode, what = "almost-net", f"({args.T}, {args.eps})-almost net with n={args.n}"
    else:
        if args.t is None:
            raise ValueError("give --t, or --T/--eps/--n for an almost net")
        chk = verify_net(X, args.t, m, s)
        mode, what = "net", f"({args.t}, {m}, {s})-net"
    report = {"mode": mode, "s": s, "m": m, "t": args.t, "result": "pass" if chk.ok else "violation",
              "boxes_checked": chk.boxes_checked}
    if not chk.ok:
        report["box"] = {"ks": list(chk.box.ks), "bs": list(chk.box.bs)}
        report["count"] = chk.count
        print(f"violation: box ks={chk.box.ks} bs={chk.box.bs} holds {chk.count} points")
    else:
        print(f"pass: {what}, {chk.boxes_checked} boxes checked")
    _emit(report, args.out)
    return EXIT_PASS if chk.ok else EXIT_VIOLATION


def cmd_net_minimal_t(args) -> int:
    X, s, m = hio.net_from_json(hio.read_json(args.input))
    t = minimal_t(X, m, s)
    print("none" if t is None else t)
    _emit({"mode": "minimal-t", "s": s, "m": m, "result": t}, args.out)
    return EXIT_PASS if t is not None else EXIT_VIOLATION


# ---------------------------------------------------------------- good sets

def _good_caps(args) -> GoodCaps:
    return GoodCaps(args.max_dm, args.max_subsets)


def cmd_good_build(args) -> int:
    X, s, m = hio.net_from_json(hio.read_json(args.net))
    params = AlmostNetParams(args.T, hio.parse_fraction(args.eps, "--eps"), args.n)
    Y = to_binary_almost_net(X, params, s)
    hio.write_json(args.out, hio.good_to_json(Y))
    bad = Y.invariant_violations(limit=5)
    for line in bad:
        print(f"violation: {line}")
    print(f"wrote {len(Y)} keys (d={Y.d}, m={Y.m}) to {args.out}")
    return EXIT_VIOLATION if bad else EXIT_PASS


def cmd_good_verify(args) -> int:
    Y = hio.good_from_json(hio.read_json(args.input))
    res = verify_good(Y, args.q, _good_caps(args), args.method)
    report = {"mode": "good", "q": args.q, "result": res.status, "reason": res.reason,
              "prefixes": list(res.prefixes) if res.prefixes is not None else None,
              "Z": [list(z) for z in res.Z] if res.Z else None, "tuples_checked": res.tuples_checked}
    print(f"{res.status}: q={args.q}" + (f" ({res.reason})" if res.reason else ""))
    _emit(report, args.out)
    return {"pass": EXIT_PASS, "violation": EXIT_VIOLATION}.get(res.status, EXIT_CAP)


def cmd_good_minimal_q(args) -> int:
    Y = hio.good_from_json(hio.read_json(args.input))
    q = minimal_good_q(Y, _good_caps(args), args.q_max)
    print("none" if q is None else q)
    _emit({"mode": "minimal-q", "result": q}, args.out)
    return EXIT_PASS if q is not None else EXIT_CAP


# ---------------------------------------------------------------- embedding

def cmd_embed(args) -> int:
    Y = hio.good_from_json(hio.read_json(args.input))
    base = None if args.base == "auto" else int(args.base)
    sched = E.build_schedule(Y.d, Y.m, base, args.growth)
    code = EXIT_PASS
    if args.certify is not None:
        cert = E.certify_embedding(Y, args.certify, sched, HoleCaps.from_env(), args.max_escalations)
        sched = cert.schedule
        print(f"{cert.status}: ell={cert.ell}, attempts " +
              ", ".join(f"B={b}:{s}" for b, s in cert.attempts))
        code = {"certified": EXIT_PASS, "escalate": EXIT_VIOLATION}.get(cert.status, EXIT_CAP)
    pts = [p.coords for p in E.embed(Y, sched)]
    hio.write_json(args.out, hio.points_to_json(pts, sched, Y.keys))
    if args.csv:
        Path(args.csv).write_text(hio.points_csv(pts), encoding="utf-8")
    print(f"wrote {len(pts)} points (B={sched.base}, {sched.growth}) to {args.out}")
    return code


def cmd_perturb(args) -> int:
    pts, _, keys = hio.points_from_json(hio.read_json(args.input))
    out, rep = E.perturb_to_general_position(pts, args.seed, args.max_retries, args.check_ell,
                                             HoleCaps.from_env())
    extra = {"perturbation": {"seed": args.seed, "attempts": rep.attempts,
                              "bound": hio.fraction_str(rep.bound),
                              "max_offset": hio.fraction_str(rep.max_offset)}}
    hio.write_json(args.out, hio.points_to_json(out, None, keys, extra))
    print(f"perturbed {len(out)} points in {rep.attempts} attempt(s)"
          + (f"; {args.check_ell}-hole-free: {rep.hole_free_after}" if args.check_ell else ""))
    status = rep.hole_free_after or "pass"
    return {"pass": EXIT_PASS, "violation": EXIT_VIOLATION}.get(status, EXIT_CAP)


# ---------------------------------------------------------------- holes

def _load_points(path):
    pts, _, _ = hio.points_from_json(hio.read_json(path))
    return pts


def cmd_holes_max(args) -> int:
    pts = _load_points(args.input)
    rep = max_hole(pts, args.cap_size, args.algo, HoleCaps.from_env())
    cap_size = len(pts) if args.cap_size is None else args.cap_size
    budget_hit = rep.search_caps_hit and rep.hole_size < cap_size
    result = str(rep.hole_size) if not rep.search_caps_hit else f">={rep.hole_size}"
    report = hio.hole_report("max", rep.hole_size, result, rep.witness_subset, rep.search_caps_hit,
                             rep.predicate_calls, algo=rep.algo, verified_empty=rep.verified_empty)
    print(f"largest hole: {result} (algo {rep.algo}, witness {list(rep.witness_subset)})")
    _emit(report, args.out)
    return EXIT_CAP if budget_hit else EXIT_PASS


def cmd_holes_count(args) -> int:
    pts = _load_points(args.input)
    k = count_holes(pts, args.ell)
    print(k)
    _emit(hio.hole_report("count", args.ell, str(k), None, False, 0), args.out)
    return EXIT_PASS


def cmd_holes_free(args) -> int:
    pts = _load_points(args.input)
    res = is_hole_free(pts, args.ell, HoleCaps.from_env())
    print(f"{res.status}: ell={args.ell}" + (f" witness {list(res.witness)}" if res.witness else "")
          + (f" ({res.detail})" if res.detail else ""))
    _emit(hio.hole_report("free", args.ell, res.status, res.witness, res.status == "cap_exceeded",
                          res.predicate_calls, vacuous=res.vacuous), args.out)
    return {"pass": EXIT_PASS, "violation": EXIT_VIOLATION}.get(res.status, EXIT_CAP)


# ---------------------------------------------------------------- bounds

def cmd_bounds_table(args) -> int:
    lo, hi = args.d
    rows = bounds.bounds_table(lo, hi)
    header = ["d", "t", "net_bound", "valtr_bound", "2^(7d)", "pass"]
    table = [[str(r.d), str(r.t_used), str(r.h_upper), str(r.valtr_upper), str(r.two_pow_7d),
              "yes" if r.passes else "no"] for r in rows]
    if args.csv:
        w = csv.writer(sys.stdout, lineterminator="\n")
        w.writerow(header + ["note"])
        for r, line in zip(rows, table):
            w.writerow(line + [r.note])
    else:
        widths = [max(len(x) for x in col) for col in zip(header, *table)]
        for line in [header] + table:
            print("  ".join(x.rjust(w) for x, w in zip(line, widths)))
        for r in rows:
            if r.note:
                print(f"note d={r.d}: {r.note}")
    return EXIT_PASS if all(r.passes for r in rows) else EXIT_VIOLATION


def cmd_bounds_theorem1(args) -> int:
    rows = bounds.theorem1_check(args.d_max)
    bad = [d for d, _, basic, _ in rows if not basic]
    refined = sum(1 for *_, r in rows if r)
    print(f"h-bound < 2^(7d) for {len(rows) - len(bad)}/{len(rows)} values 3 <= d <= {args.d_max}; "
          f"refined exponent holds for {refined}")
    if bad:
        print(f"fails for d = {bad}")
    return EXIT_PASS if not bad else EXIT_VIOLATION


# ---------------------------------------------------------------- pipeline

PIPELINE_FLAGS = ("d", "n", "T", "eps", "base", "growth", "seed", "max_predicate_calls", "max_subsets",
                  "good_max_dm", "good_max_subsets", "max_escalations", "max_retries")


def cmd_pipeline(args) -> int:
    values: dict[str, str] = {}
    out = args.out
    if args.config:
        try:
            values.update(read_config(args.config))
        except OSError as exc:
            raise hio.FormatError(args.config, f"cannot read file ({exc.strerror})") from None
        out = out or values.pop("out", None)
        values.pop("out", None)
    for key in PIPELINE_FLAGS:
        v = getattr(args, key)
        if v is not None:
            values[key] = v
    if not out:
        raise ValueError("out: no output directory (use --out or out = DIR in the config)")
    cfg = PipelineConfig.from_mapping(values)
    code, report = run_pipeline(cfg, out)
    if code == EXIT_PASS:
        s = report["summary"]
        print(f"pass: {s['points']} points in R^{s['d']}, q={s['q']} (minimal {s['minimal_q']})")
        print(f"guarantee: {s['guarantee']}")
    else:
        print(f"{report['status']} in stage {report['failed_stage']}; see {Path(out) / 'report.json'}")
    return code


def cmd_verify_bundle(args) -> int:
    code, checks = verify_bundle(args.bundle)
    for c in checks:
        print(f"{c['status']:>12}  {c['check']}" + (f"  ({c['detail']})" if c["detail"] else ""))
    return code


# ---------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="holefree", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("-v", "--verbose", action="count", default=0)
    sub = p.add_subparsers(dest="command", required=True)

    net = sub.add_parser("net", help="generate and verify digital nets").add_subparsers(dest="action",
                                                                                      required=True)
    g = net.add_parser("gen", help="write a net file")
    g.add_argument("--kind", choices=("vdc", "sobol", "lifted"), default="sobol")
    g.add_argument("--s", type=int, required=True)
    g.add_argument("--m", type=int, required=True)
    g.add_argument("--digits", type=int, default=None, help="stored digits per coordinate (default m)")
    g.add_argument("--out", required=True)
    g.set_defaults(func=cmd_net_gen)
    v = net.add_parser("verify", help="check the (t, m, s)-net or almost-net property")
    v.add_argument("--in", dest="input", required=True)
    v.add_argument("--t", type=int)
    v.add_argument("--T", type=int)
    v.add_argument("--eps")
    v.add_argument("--n", type=int)
    v.add_argument("--out")
    v.set_defaults(func=cmd_net_verify)
    mt = net.add_parser("minimal-t", help="smallest t for which the file is a net")
    mt.add_argument("--in", dest="input", required=True)
    mt.add_argument("--out")
    mt.set_defaults(func=cmd_net_minimal_t)

    good = sub.add_parser("good", help="binary almost nets and q-goodness").add_subparsers(
        dest="action", required=True)
    b = good.add_parser("build", help="round an almost net to injective bitstring keys")
    b.add_argument("--net", required=True)
    b.add_argument("--T", type=int, default=1)
    b.add_argument("--eps", default="0")
    b.add_argument("--n", type=int, required=True)
    b.add_argument("--out", required=True)
    b.set_defaults(func=cmd_good_build)
    for name, func in (("verify", cmd_good_verify), ("minimal-q", cmd_good_minimal_q)):
        c = good.add_parser(name)
        c.add_argument("--in", dest="input", required=True)
        if name == "verify":
            c.add_argument("--q", type=int, required=True)
            c.add_argument("--method", choices=("interval", "subsets"), default="interval")
        else:
            c.add_argument("--q-max", type=int, default=None)
        c.add_argument("--max-dm", type=int, default=GoodCaps.max_dm)
        c.add_argument("--max-subsets", type=int, default=GoodCaps.max_subsets)
        c.add_argument("--out")
        c.set_defaults(func=func)

    e = sub.add_parser("embed", help="map keys to exact integer points")
    e.add_argument("--in", dest="input", required=True)
    e.add_argument("--base", default="auto")
    e.add_argument("--growth", choices=E.GROWTHS, default="squaring")
    e.add_argument("--certify", type=int, metavar="Q", help="certify (2^(d-1) Q + 1)-hole-freeness")
    e.add_argument("--max-escalations", type=int, default=3)
    e.add_argument("--out", required=True)
    e.add_argument("--csv")
    e.set_defaults(func=cmd_embed)

    pt = sub.add_parser("perturb", help="move points into general position")
    pt.add_argument("--in", dest="input", required=True)
    pt.add_argument("--seed", type=int, default=0)
    pt.add_argument("--max-retries", type=int, default=8)
    pt.add_argument("--check-ell", type=int)
    pt.add_argument("--out", required=True)
    pt.set_defaults(func=cmd_perturb)

    holes = sub.add_parser("holes", help="hole searches on a point file").add_subparsers(
        dest="action", required=True)
    hm = holes.add_parser("max")
    hm.add_argument("--algo", choices=("auto", "dp2d", "brute", "naive"), default="auto")
    hm.add_argument("--cap-size", type=int)
    hm.set_defaults(func=cmd_holes_max)
    hc = holes.add_parser("count")
    hc.set_defaults(func=cmd_holes_count)
    hf = holes.add_parser("free")
    hf.set_defaults(func=cmd_holes_free)
    for c in (hc, hf):
        c.add_argument("--ell", type=int, required=True)
    for c in (hm, hc, hf):
        c.add_argument("--in", dest="input", required=True)
        c.add_argument("--out")

    bd = sub.add_parser("bounds", help="closed-form hole bounds").add_subparsers(dest="action",
                                                                               required=True)
    bt = bd.add_parser("table")
    bt.add_argument("--d", type=_int_range, default=(3, 10), help="N or LO..HI")
    bt.add_argument("--csv", action="store_true")
    bt.set_defaults(func=cmd_bounds_table)
    b1 = bd.add_parser("theorem1")
    b1.add_argument("--d-max", type=int, default=64)
    b1.set_defaults(func=cmd_bounds_theorem1)

    pl = sub.add_parser("pipeline", help="run every stage and write a certificate bundle")
    pl.add_argument("--config", help="key = value file; flags override it")
    for key in PIPELINE_FLAGS:
        pl.add_argument(f"--{key.replace('_', '-')}", dest=key)
    pl.add_argument("--out")
    pl.set_defaults(func=cmd_pipeline)

    vb = sub.add_parser("verify-bundle", help="re-check a bundle from its files")
    vb.add_argument("bundle")
    vb.set_defaults(func=cmd_verify_bundle)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.WARNING - 10 * min(args.verbose, 2),
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except ValueError as exc:  # includes io.FormatError
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
