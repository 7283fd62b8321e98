"""Command line front end.

Two commands: `tensor` builds the tensor square (or higher powers) of one
presented group and reports orders and invariants; `verify` sweeps the
identity harness over a corpus and writes JSON, CSV, and figures.

Reports from `tensor` are cached one JSON file per key under
$TENSORIA_CACHE_DIR (default ~/.cache/tensoria); the key hashes the
presentation text, the operation, its parameters, the limits, and the
tool version, so a hit can never cross versions or settings.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys

from . import __version__
from .coset_enum import EnumLimits
from .errors import LimitExceeded, SizeLimitError
from .homology import h2_cross_check
from .presentation import ParseError, parse_presentation
from .permgrp import realize
from .tensor import TensorPowerTower, delta_subgroup, exterior_product
from .verify import (VERIFY_LIMITS, builtin_corpus, format_table,
                     load_corpus, results_to_csv, results_to_json,
                     run_suite, summarize)

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_LIMIT = 2


def _cache_dir() -> str:
    env = os.environ.get("TENSORIA_CACHE_DIR")
    if env:
        return env
    return os.path.join(os.path.expanduser("~"), ".cache", "tensoria")


def cache_key(text: str, operation: str, params: dict,
              limits: EnumLimits) -> str:
    payload = json.dumps({
        "presentation": text,
        "operation": operation,
        "params": params,
        "limits": {"max_cosets": limits.max_cosets,
                   "scan_budget": limits.scan_budget},
        "version": __version__,
    }, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(payload.encode()).hexdigest()


def cache_get(key: str) -> dict | None:
    path = os.path.join(_cache_dir(), key + ".json")
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except (OSError, ValueError):
        return None


def cache_put(key: str, report: dict) -> None:
    path = os.path.join(_cache_dir(), key + ".json")
    try:
        os.makedirs(_cache_dir(), exist_ok=True)
        tmp = path + ".tmp"
        with open(tmp, "w", encoding="utf-8") as fh:
            json.dump(report, fh, indent=2, sort_keys=True)
            fh.write("\n")
        os.replace(tmp, path)
    except OSError:
        pass  # caching is best-effort, never fatal


def _resolve_source(src: str) -> tuple[str, str]:
    for entry in builtin_corpus():
        if entry.gid == src:
            return entry.gid, entry.text
    return "g", src


def _tensor_report(name: str, text: str, power: int, exterior: bool,
                   h2: bool, limits: EnumLimits) -> dict:
    pres = parse_presentation(text)
    pg = realize(pres, name=name)
    tower = TensorPowerTower(pg, limits=limits)
    report: dict = {
        "input": text,
        "version": __version__,
        "limits": {"max_cosets": limits.max_cosets,
                   "scan_budget": limits.scan_budget},
        "group": {"name": pg.name, "order": pg.order()},
        "levels": {},
    }
    for n in range(2, power + 1):
        t = tower.level(n)
        report["levels"][str(n)] = {
            "order": t.order,
            "ambient_order": t.ambient_order,
            "abelian_invariants": t.tensor_abelianization().serialize(),
            "lambda_image": len(set(t.lam_g_idx)),
            "lambda_kernel": t.lam_g_idx.count(0),
        }
    square = tower.level(2)
    report["delta"] = delta_subgroup(square).order()
    if exterior:
        ex = exterior_product(square)
        report["exterior"] = {
            "order": ex.group.order(),
            "kernel": ex.kernel.order(),
            "fibre_tensors": ex.fibre_count,
        }
    if h2:
        report["h2"] = h2_cross_check(square).to_json()
    return report


def _print_tensor_text(report: dict) -> None:
    g = report["group"]
    print(f"group {g['name']}: order {g['order']}")
    for n in sorted(report["levels"], key=int):
        lv = report["levels"][n]
        print(f"  power {n}: order {lv['order']}, "
              f"invariants {lv['abelian_invariants']}, "
              f"ker lambda {lv['lambda_kernel']}, "
              f"image {lv['lambda_image']}, "
              f"ambient {lv['ambient_order']}")
    print(f"  delta subgroup: order {report['delta']}")
    if "exterior" in report:
        ex = report["exterior"]
        print(f"  exterior: order {ex['order']}, kernel {ex['kernel']}, "
              f"fibre tensors {ex['fibre_tensors']}")
    if "h2" in report:
        h2 = report["h2"]
        print(f"  h2: wedge {h2['wedge']}, cocycles {h2['cocycles']}, "
              f"agree {h2['agree']}")


def cmd_tensor(args: argparse.Namespace) -> int:
    name, text = _resolve_source(args.source)
    limits = EnumLimits(max_cosets=args.max_cosets) if args.max_cosets \
        else EnumLimits()
    params = {"power": args.power, "exterior": args.exterior,
              "h2": args.h2, "name": name}
    key = cache_key(text, "tensor", params, limits)
    report = None if args.no_cache else cache_get(key)
    if report is None:
        try:
            report = _tensor_report(name, text, args.power, args.exterior,
                                    args.h2, limits)
        except ParseError as e:
            print(f"input error: {e}", file=sys.stderr)
            return EXIT_INPUT
        except (LimitExceeded, SizeLimitError) as e:
            print(f"limit exceeded: {e}", file=sys.stderr)
            return EXIT_LIMIT
        except ValueError as e:
            print(f"input error: {e}", file=sys.stderr)
            return EXIT_INPUT
        if not args.no_cache:
            cache_put(key, report)
    if args.json:
        print(json.dumps(report, indent=2, sort_keys=True))
    else:
        _print_tensor_text(report)
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    if args.corpus == "builtin":
        corpus = builtin_corpus()
    else:
        try:
            corpus = load_corpus(args.corpus)
        except (OSError, ValueError, KeyError) as e:
            print(f"corpus error: {e}", file=sys.stderr)
            return EXIT_INPUT
    limits = EnumLimits(max_cosets=args.max_cosets) if args.max_cosets \
        else VERIFY_LIMITS
    results = run_suite(args.suite, corpus, limits, jobs=args.jobs)
    outdir = args.out
    try:
        os.makedirs(outdir, exist_ok=True)
        with open(os.path.join(outdir, "results.json"), "w",
                  encoding="utf-8") as fh:
            fh.write(results_to_json(results))
        with open(os.path.join(outdir, "summary.csv"), "w",
                  encoding="utf-8") as fh:
            fh.write(results_to_csv(results))
    except OSError as e:
        print(f"output error: {e}", file=sys.stderr)
        return EXIT_INPUT
    from .figures import render_all
    render_all(results, outdir)
    print(format_table(results), end="")
    counts = summarize(results)
    return EXIT_OK if counts["fail"] == 0 else 1


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="tensoria",
        description="tensor products of finite presented groups")
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    t = sub.add_parser("tensor", help="build tensor powers of one group")
    t.add_argument("source",
                   help="presentation text like '< a, b | a^2, ... >' "
                        "or a builtin corpus name like V4")
    t.add_argument("--power", type=int, default=2, metavar="N",
                   help="highest tensor power to build (default 2)")
    t.add_argument("--exterior", action="store_true",
                   help="also build the exterior square")
    t.add_argument("--h2", action="store_true",
                   help="also cross-check the multiplier both ways")
    t.add_argument("--max-cosets", type=int, default=None, metavar="M",
                   help="enumeration coset cap")
    t.add_argument("--json", action="store_true",
                   help="machine-readable report on stdout")
    t.add_argument("--no-cache", action="store_true",
                   help="skip the report cache")
    t.set_defaults(fn=cmd_tensor)

    v = sub.add_parser("verify", help="run the identity harness")
    v.add_argument("--corpus", default="builtin", metavar="PATH",
                   help="'builtin' or a JSON corpus file")
    v.add_argument("--suite", default="all",
                   choices=["identity", "schur-baer", "all"])
    v.add_argument("--out", default="verify-out", metavar="DIR",
                   help="directory for results.json, summary.csv, figures")
    v.add_argument("--jobs", type=int, default=1, metavar="K",
                   help="worker threads across groups")
    v.add_argument("--max-cosets", type=int, default=None, metavar="M",
                   help="enumeration coset cap")
    v.set_defaults(fn=cmd_verify)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "tensor" and args.power < 2:
        print("input error: --power must be at least 2", file=sys.stderr)
        return EXIT_INPUT
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())
