"""Command-line front end.

Exit codes: 0 all pass, 1 verification failure, 2 invalid input,
3 precision exhaustion.  Numeric output is locale-independent ('.'
separator, single-newline line endings); large integers always print as
exact decimal strings.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from dataclasses import replace
from fractions import Fraction

from . import bounds
from .arith import bt_bound, is_prime, pi_sum, primes_in_range
from .balls import (
    BallReal,
    DomainError,
    EnclosureError,
    PrecisionExhausted,
    cert_le,
)
from .cache import (
    CSV_COLUMNS,
    Cache,
    hminus_payload,
    payload_to_csv_row,
)
from .classnumber import hminus
from .config import RunConfig, load_config
from .lfunc import DEFAULT_C, siegel_scan


def _config_from_args(args) -> RunConfig:
    cfg = load_config(args.config) if getattr(args, "config", None) \
        else RunConfig()
    overrides = {}
    if getattr(args, "prec", None):
        overrides["prec_bits"] = args.prec
    if getattr(args, "cache", None):
        overrides["cache_path"] = args.cache
    if getattr(args, "format", None):
        overrides["output_format"] = args.format
    if getattr(args, "jobs", None):
        overrides["jobs"] = args.jobs
    if getattr(args, "c", None):
        overrides["c"] = Fraction(args.c)
    if overrides:
        cfg = replace(cfg, **overrides)
    return cfg.validate()


def _ball_str(b: BallReal) -> str:
    from .cache import _decimal_string

    return (f"{_decimal_string(b.mid, b.prec)}"
            f" (+/- {_decimal_string(b.rad, 64)})")


def _out_stream(args):
    path = getattr(args, "out", None)
    if path:
        return open(path, "w", encoding="utf-8", newline=""), True
    return sys.stdout, False


# ------------------------------------------------------------------ hminus


def cmd_hminus(args) -> int:
    cfg = _config_from_args(args)
    rec = hminus(args.p, method=args.method,
                 prec=args.prec if args.prec else None,
                 oracle_ceiling=cfg.oracle_ceiling)
    siegel = siegel_scan(args.p, c=cfg.c or DEFAULT_C, prec=cfg.prec_bits)
    print(f"p={rec.p} h_minus={rec.h_minus} method={rec.method} "
          f"precision_bits={rec.precision_bits} "
          f"certified={'true' if rec.certified else 'false'}")
    print(f"log_G={_ball_str(rec.log_g)}")
    print(f"log_ratio={_ball_str(rec.log_ratio)}")
    print(f"siegel={'present' if siegel.present else 'absent'}")
    cache = Cache(cfg.resolved_cache_path())
    cache.append("hminus", rec.p, hminus_payload(rec, siegel),
                 cfg.fingerprint())
    return 0 if rec.certified else 3


# -------------------------------------------------------------------- scan


def _scan_payload(p: int, oracle_ceiling: int, prec_bits: int,
                  c: Fraction | None) -> dict:
    rec = hminus(p, oracle_ceiling=oracle_ceiling)
    siegel = siegel_scan(p, c=c or DEFAULT_C, prec=prec_bits)
    return hminus_payload(rec, siegel)


def cmd_scan(args) -> int:
    cfg = _config_from_args(args)
    primes = [p for p in primes_in_range(args.p_from, args.p_to) if p >= 3]
    cache = Cache(cfg.resolved_cache_path())
    fp = cfg.fingerprint()
    known = cache.load(fp)

    payloads: dict[int, dict] = {}
    missing = []
    for p in primes:
        hit = known.get(("hminus", p))
        if hit is not None:
            payloads[p] = hit
            cache.n_cached += 1
        else:
            missing.append(p)

    if missing and cfg.jobs > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
            futs = {p: pool.submit(_scan_payload, p, cfg.oracle_ceiling,
                                   cfg.prec_bits, cfg.c) for p in missing}
            for p in missing:
                payloads[p] = futs[p].result()
                cache.n_computed += 1
                cache.append("hminus", p, payloads[p], fp)
    else:
        for p in missing:
            payloads[p] = _scan_payload(p, cfg.oracle_ceiling, cfg.prec_bits,
                                        cfg.c)
            cache.n_computed += 1
            cache.append("hminus", p, payloads[p], fp)

    stream, owned = _out_stream(args)
    try:
        if cfg.output_format == "csv":
            writer = csv.writer(stream, lineterminator="\n")
            writer.writerow(CSV_COLUMNS)
            for p in primes:
                writer.writerow(payload_to_csv_row(p, payloads[p]))
        else:
            for p in primes:
                stream.write(json.dumps({"p": p, **payloads[p]},
                                        sort_keys=True) + "\n")
    finally:
        if owned:
            stream.close()

    if getattr(args, "figures", False) and args.out:
        from .figures import scan_figure

        rows = [(p, float(payloads[p]["log_ratio"]["mid"])) for p in primes]
        scan_figure(rows, args.out + ".png")
    print(f"# computed={cache.n_computed} cached={cache.n_cached}",
          file=sys.stderr)
    return 0


# ------------------------------------------------------------------ verify


def cmd_verify(args) -> int:
    cfg = _config_from_args(args)
    kwargs = dict(c=cfg.c, prec=cfg.prec_bits, nu_values=cfg.nu_values,
                  force_beta=args.force_beta)
    if cfg.x_grid is not None:
        kwargs["x_grid"] = list(cfg.x_grid)
    if args.X:
        kwargs["X"] = args.X
    if args.sigma:
        kwargs["sigma"] = Fraction(args.sigma)
    reports = bounds.verify(args.bound, args.p_from, args.p_to, **kwargs)

    stream, owned = _out_stream(args)
    try:
        if cfg.output_format == "csv" and args.out:
            writer = csv.writer(stream, lineterminator="\n")
            writer.writerow(["bound_id", "p", "parameters", "lhs_mid",
                             "rhs_mid", "passed", "notes"])
            for r in reports:
                writer.writerow([
                    r.bound_id, r.p, json.dumps(r.parameters, sort_keys=True),
                    "" if r.lhs is None else str(r.lhs.mid),
                    "" if r.rhs is None else str(r.rhs.mid),
                    "true" if r.passed else "false", r.notes])
        else:
            for r in reports:
                status = "PASS" if r.passed else "FAIL"
                lhs = "-" if r.lhs is None else str(r.lhs.mid)
                rhs = "-" if r.rhs is None else str(r.rhs.mid)
                line = (f"{r.bound_id} p={r.p} {json.dumps(r.parameters, sort_keys=True)} "
                        f"lhs={lhs} rhs={rhs} {status}")
                if r.notes:
                    line += f"  [{r.notes}]"
                stream.write(line + "\n")
    finally:
        if owned:
            stream.close()

    if getattr(args, "figures", False) and args.out:
        from .figures import crossover_figure, verify_figure

        if args.bound in ("cor33", "cor33_crossover"):
            rep = bounds.cor33_crossover(args.p_from, args.p_to,
                                         cfg.prec_bits)
            crossover_figure(rep.outcomes, args.out + ".png", cfg.prec_bits)
        else:
            verify_figure(reports, args.out + ".png")
    return 0 if all(r.passed for r in reports) else 1


# ------------------------------------------------------------------ siegel


def cmd_siegel(args) -> int:
    cfg = _config_from_args(args)
    if args.p is not None:
        ps = [args.p]
    elif args.p_from is not None and args.p_to is not None:
        ps = [p for p in primes_in_range(args.p_from, args.p_to) if p >= 3]
    else:
        raise DomainError("need --p or both --from and --to")
    c = Fraction(args.c) if args.c else (cfg.c or DEFAULT_C)
    any_present = False
    for p in ps:
        rep = siegel_scan(p, c=c, prec=cfg.prec_bits)
        any_present = any_present or rep.present
        beta = "" if rep.beta is None else f" beta={_ball_str(rep.beta)}"
        print(f"p={p} siegel={'present' if rep.present else 'absent'} "
              f"method={rep.method} certified="
              f"{'true' if rep.certified else 'false'}{beta}")
    return 1 if any_present else 0


# ---------------------------------------------------------------------- pi


def cmd_pi(args) -> int:
    cfg = _config_from_args(args)
    cls = {"+1": 1, "1": 1, "-1": -1}.get(args.cls)
    if cls is None:
        raise DomainError(f"class must be +1 or -1, got {args.cls!r}")
    if not is_prime(args.p) or args.p < 3:
        raise DomainError(f"p = {args.p} must be an odd prime")
    if args.x < args.p - 1:
        raise DomainError(
            f"x = {args.x} below the smallest admissible value {args.p - 1}")
    val = pi_sum(args.p, cls, args.x)
    print(f"Pi(x={args.x}, p={args.p}, class={'+1' if cls == 1 else '-1'}) "
          f"= {val.value} ~= {float(val.value):.6f} [{val.terms} terms]")
    if args.x > args.p and args.p > 500:
        b = bt_bound(args.p, args.x, cfg.prec_bits)
        lhs = BallReal.from_fraction(val.value, cfg.prec_bits)
        ok = cert_le(lhs, b)
        print(f"bound 2x/((p-1)log(x/p)) = {float(b.mid):.6f} "
              f"{'PASS' if ok else 'FAIL'}")
        return 0 if ok else 1
    print("bound omitted: requires x > p and p > 500")
    return 0


# ------------------------------------------------------------------ report


def cmd_report(args) -> int:
    import os

    cfg = _config_from_args(args)
    os.makedirs(args.out, exist_ok=True)
    scan_args = argparse.Namespace(
        config=getattr(args, "config", None), prec=None, cache=args.cache,
        format="csv", jobs=None, c=None, p_from=args.p_from, p_to=args.p_to,
        out=os.path.join(args.out, "scan.csv"), figures=False)
    rc = cmd_scan(scan_args)
    if rc:
        return rc

    from .figures import scan_figure

    rows = []
    with open(os.path.join(args.out, "scan.csv"), encoding="utf-8") as fh:
        for row in csv.DictReader(fh):
            rows.append((int(row["p"]), float(row["log_ratio"])))
    scan_figure(rows, os.path.join(args.out, "scan.png"))
    print(f"report written to {args.out}: scan.csv, scan.png")
    return 0


# -------------------------------------------------------------------- main


def _add_common(sp, out=True):
    sp.add_argument("--config", help="key=value config file")
    sp.add_argument("--prec", type=int, help="working precision bits")
    sp.add_argument("--cache", help="cache file path")
    if out:
        sp.add_argument("--out", help="output file")
        sp.add_argument("--format", choices=["csv", "jsonl"])
        sp.add_argument("--figures", action="store_true",
                        help="render PNG figures next to --out")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="kummer",
        description="Exact relative class numbers h_p^- and certified "
                    "verification of the explicit bounds they satisfy.")
    sub = ap.add_subparsers(dest="command")

    p1 = sub.add_parser("hminus", help="compute h_p^- for one prime")
    p1.add_argument("--p", type=int, required=True)
    p1.add_argument("--method", choices=["auto", "analytic", "maillet",
                                         "both"], default="auto")
    _add_common(p1, out=False)
    p1.set_defaults(func=cmd_hminus)

    p2 = sub.add_parser("scan", help="compute h_p^- for a prime range")
    p2.add_argument("--from", dest="p_from", type=int, required=True)
    p2.add_argument("--to", dest="p_to", type=int, required=True)
    p2.add_argument("--jobs", type=int)
    _add_common(p2)
    p2.set_defaults(func=cmd_scan)

    p3 = sub.add_parser("verify", help="verify one bound over a prime range")
    p3.add_argument("--bound", required=True,
                    choices=["lemma21", "lemma22", "lemma23", "thm31",
                             "thm11", "eq2", "cor33"])
    p3.add_argument("--from", dest="p_from", type=int, required=True)
    p3.add_argument("--to", dest="p_to", type=int, required=True)
    p3.add_argument("--c", help="override the constant c")
    p3.add_argument("--X", type=int, help="truncation for eq2")
    p3.add_argument("--sigma", help="evaluation point for eq2")
    p3.add_argument("--force-beta", action="store_true",
                    help="evaluate bounds with 1_beta = 1")
    _add_common(p3)
    p3.set_defaults(func=cmd_verify)

    p4 = sub.add_parser("siegel", help="scan for real zeros near s = 1")
    p4.add_argument("--p", type=int)
    p4.add_argument("--from", dest="p_from", type=int)
    p4.add_argument("--to", dest="p_to", type=int)
    p4.add_argument("--c", help="zero-free-region constant")
    _add_common(p4, out=False)
    p4.set_defaults(func=cmd_siegel)

    p5 = sub.add_parser("pi", help="prime-power sum in a residue class")
    p5.add_argument("--p", type=int, required=True)
    p5.add_argument("--x", type=int, required=True)
    p5.add_argument("--class", dest="cls", required=True)
    _add_common(p5, out=False)
    p5.set_defaults(func=cmd_pi)

    p6 = sub.add_parser("report",
                        help="scan a range and render CSV plus figures")
    p6.add_argument("--from", dest="p_from", type=int, required=True)
    p6.add_argument("--to", dest="p_to", type=int, required=True)
    p6.add_argument("--out", required=True, help="output directory")
    p6.add_argument("--config", help="key=value config file")
    p6.add_argument("--cache", help="cache file path")
    p6.set_defaults(func=cmd_report)

    return ap


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    if not getattr(args, "func", None):
        parser.print_help()
        return 2
    try:
        return args.func(args)
    except PrecisionExhausted as e:
        print(f"error: precision exhausted: {e}", file=sys.stderr)
        return 3
    except EnclosureError as e:
        print(f"error: enclosure not certified: {e}", file=sys.stderr)
        return 3
    except (DomainError, ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
