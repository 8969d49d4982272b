"""Command-line interface: verify catalog examples, analyze presentations, run the Lie lab."""

from __future__ import annotations

import argparse
import json
import sys
from collections import OrderedDict
from concurrent.futures import ProcessPoolExecutor

from . import lie
from .catalog import (analyze_presentation, catalog, find_example, p_power, spec_from_file,
                      verify)
from .formats import ParseError, format_pcp, parse_fp
from .nq import InfiniteLayerError, epimorphism_check, nilpotent_quotient
from .properties import EngelPolicyError

EXIT_OK, EXIT_DISCREPANCY, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _read(path: str) -> str:
    try:
        with open(path) as fh:
            return fh.read()
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e.strerror}")


def _emit(obj, out=None) -> None:
    text = json.dumps(obj, indent=2)
    if out:
        with open(out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _resolve(target: str):
    try:
        return find_example(target)
    except KeyError:
        pass
    if target.endswith(".fp"):
        _read(target)
        return spec_from_file(target)
    names = ", ".join(e.name for e in catalog())
    raise UsageError(f"unknown example {target!r}; known: {names}")


def cmd_verify(args) -> int:
    spec = _resolve(args.target)
    rep = verify(spec, args.seed, engel_samples=args.engel_samples,
                 identity_samples=args.identity_samples)
    _emit(rep.to_dict(), args.report)
    for d in rep.discrepancies:
        print(f"DISCREPANCY {rep.name}: {d}", file=sys.stderr)
    return EXIT_OK if rep.ok else EXIT_DISCREPANCY


def _verify_one(job):
    name, seed, kw = job
    return verify(find_example(name), seed, **kw)


def cmd_verify_all(args) -> int:
    kw = dict(engel_samples=args.engel_samples, identity_samples=args.identity_samples)
    jobs = [(e.name, args.seed, kw) for e in catalog()]
    if args.jobs > 1:
        with ProcessPoolExecutor(args.jobs) as ex:
            reports = list(ex.map(_verify_one, jobs))
    else:
        reports = [_verify_one(j) for j in jobs]
    reports.sort(key=lambda r: r.name)
    _emit([r.to_dict() for r in reports], args.report)
    for r in reports:
        status = "PASS" if r.ok else "FAIL"
        print(f"{status} {r.name}", file=sys.stderr)
        for d in r.discrepancies:
            print(f"  {d}", file=sys.stderr)
    return EXIT_OK if all(r.ok for r in reports) else EXIT_DISCREPANCY


def cmd_analyze(args) -> int:
    F = parse_fp(_read(args.file))
    res = nilpotent_quotient(F, args.class_bound)
    P = res.presentation
    out = OrderedDict([("file", args.file), ("seed", args.seed), ("p", P.p),
                       ("nq_status", res.status),
                       ("relators_hold", epimorphism_check(F, P, res.images).ok)])
    out.update(analyze_presentation(P, args.file, args.seed, args.engel, args.policy,
                                    args.engel_samples, args.identity_samples))
    _emit(out, args.report)
    return EXIT_OK


def cmd_nq(args) -> int:
    F = parse_fp(_read(args.file))
    res = nilpotent_quotient(F, args.class_bound)
    text = format_pcp(res.presentation)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    P = res.presentation
    print(f"order {p_power(P.p, P.log_order())}, layers {list(res.layer_exponents)}, "
          f"status {res.status}", file=sys.stderr)
    return EXIT_OK


def cmd_lie(args) -> int:
    try:
        cert = lie.certify_scale(args.scale, torsion=args.torsion, reading=args.reading,
                                 printed_f6=args.printed_f6)
    except lie.CertificationError as e:
        print(f"DISCREPANCY lie: {e}", file=sys.stderr)
        return EXIT_DISCREPANCY
    out = OrderedDict([
        ("scale", cert.scale), ("reading", cert.reading),
        ("L_dimension", cert.L_dimension), ("L_gamma5_dimension", cert.L_gamma5_dimension),
        ("L_well_defined", cert.L_well_defined), ("K_rank", cert.K_rank),
        ("power_containment", cert.power_containment),
        ("power_containment_holds", cert.power_containment_holds),
        ("torsion", cert.torsion), ("g2_order", cert.g2_order),
        ("witness_nonzero", cert.witness_nonzero), ("class", cert.nilpotency_class),
        ("multilinear_relators_vanish", cert.multilinear_relators_vanish),
        ("partial_linearizations_vanish", cert.partial_linearizations_vanish),
        ("quotient_invariants", cert.quotient_invariants),
        ("relations", OrderedDict((r.label, r.holds) for r in cert.relations)),
        ("flags", cert.flags), ("failures", cert.failures)])
    _emit(out, args.report)
    return EXIT_OK if cert.certified else EXIT_DISCREPANCY


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return v


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="engelkit", description=__doc__)
    ap.add_argument("--seed", type=int, default=0, help="seed for all sampling (default 0)")
    sub = ap.add_subparsers(dest="command", required=True)

    def sampling(p):
        p.add_argument("--engel-samples", type=int, default=10000)
        p.add_argument("--identity-samples", type=int, default=500)
        p.add_argument("--report", help="write the JSON report here instead of stdout")

    p = sub.add_parser("verify", help="verify one catalog example or .fp file")
    p.add_argument("target", help="catalog name or path to a .fp file")
    sampling(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("verify-all", help="verify the whole catalog")
    p.add_argument("--jobs", type=_positive, default=1)
    sampling(p)
    p.set_defaults(func=cmd_verify_all)

    p = sub.add_parser("analyze", help="nilpotent quotient plus property deciders")
    p.add_argument("file")
    p.add_argument("--class-bound", type=_positive, default=6)
    p.add_argument("--engel", type=_positive, default=3)
    p.add_argument("--policy", default="grid", help="grid, exhaustive or random:k")
    sampling(p)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("nq", help="write the class-bounded nilpotent quotient as .pcp")
    p.add_argument("file")
    p.add_argument("-o", "--output")
    p.add_argument("--class-bound", type=_positive, default=6)
    p.set_defaults(func=cmd_nq)

    p = sub.add_parser("lie", help="certify the Lie ring construction")
    p.add_argument("--scale", type=int, choices=(5, 16), required=True)
    p.add_argument("--torsion", type=_positive, help="torsion exponent imposed in J")
    p.add_argument("--reading", choices=("ideal", "span"), default="ideal")
    p.add_argument("--printed-f6", action="store_true",
                   help="use the printed sixth 2-adic word instead of the corrected one")
    p.add_argument("--report")
    p.set_defaults(func=cmd_lie)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK
    try:
        return args.func(args)
    except ParseError as e:
        print(f"parse error: {e}", file=sys.stderr)
    except (UsageError, InfiniteLayerError, EngelPolicyError) as e:
        print(f"error: {e}", file=sys.stderr)
    return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
