"""Command-line interface: verify, sweep, catalog, selftest.

Exit codes: 0 when every verdict is holds/equality, 2 when any verdict is
inconclusive (or a sweep row is excluded), 3 when any verdict is violated.
"""

from __future__ import annotations

import argparse
import json
import sys

from .catalog import get_manifold, list_catalog
from .selftest import run_selftest
from .verifier import (
    sharpness_sweep,
    verify_cor_B,
    verify_gwx,
    verify_thm_R,
    verify_thm_main,
    write_sweep_csv,
)

_EXIT = {"holds": 0, "equality": 0, "inconclusive": 2, "excluded": 2, "violated": 3}


def _exit_code(verdicts) -> int:
    return max((_EXIT.get(v, 2) for v in verdicts), default=0)


def _cmd_verify(args) -> int:
    manifold = get_manifold(args.case)
    if args.theorem == "thm_main":
        if args.r is None:
            raise SystemExit("verify --theorem thm_main requires --r")
        reports = [verify_thm_main(manifold, args.r, resolution=args.resolution)]
    elif args.theorem == "thm_R":
        reports = list(verify_thm_R(manifold, resolution=args.resolution))
    elif args.theorem == "cor_B":
        reports = [verify_cor_B(manifold, resolution=args.resolution)]
    elif args.theorem == "gwx":
        if args.k is None:
            raise SystemExit("verify --theorem gwx requires --k")
        reports = [verify_gwx(manifold, args.k, resolution=args.resolution)]
    else:
        raise SystemExit(f"unknown theorem {args.theorem}")

    payload = reports[0].to_json() if len(reports) == 1 else [r.to_json() for r in reports]
    if args.out:
        with open(args.out, "w") as fh:
            json.dump(payload, fh, indent=2)
    for rep in reports:
        ratio = f"{rep.ratio:.6g}" if rep.verdict not in ("equality",) else "-"
        print(
            f"{rep.case} {rep.theorem}: {rep.verdict}"
            f" (lhs={rep.lhs:.6g}, rhs={rep.rhs if rep.rhs is not None else 'n/a'},"
            f" ratio={ratio})"
        )
    return _exit_code(r.verdict for r in reports)


def _cmd_sweep(args) -> int:
    rows = sharpness_sweep(
        n=args.base,
        f_name=args.f,
        t_min=args.t_min,
        t_max=args.t_max,
        steps=args.steps,
        resolution=args.resolution,
    )
    if args.out:
        write_sweep_csv(rows, args.out)
    ratios = [r["ratio_i"] for r in rows if r["ratio_i"] is not None]
    for row in rows:
        print(
            f"t={row['t']:.4g}: {row['verdict']}"
            + (f" ratio_i={row['ratio_i']:.4g}" if row["ratio_i"] is not None else "")
        )
    if ratios:
        print(f"max ratio over sweep: {max(ratios):.6g}")
    return _exit_code(row["verdict"] for row in rows)


def _cmd_catalog(args) -> int:
    if args.list:
        for entry in list_catalog():
            m = entry.get("m")
            print(
                f"{entry['name']:24s} n={entry['n']}"
                + (f" m={m}" if m else "      ")
                + f"  {entry.get('class', '')}"
            )
    return 0


def _cmd_selftest(args) -> int:
    return 0 if run_selftest(verbose=True) else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="almost-schur",
        description="Verify almost-Schur curvature inequalities on catalog manifolds",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="verify one inequality on a catalog manifold")
    p.add_argument("--case", required=True, help="catalog manifold name")
    p.add_argument(
        "--theorem", required=True, choices=["thm_main", "thm_R", "cor_B", "gwx"]
    )
    p.add_argument("--r", type=int, default=None, help="mean-curvature order")
    p.add_argument("--k", type=int, default=None, help="Lovelock order")
    p.add_argument("--resolution", type=int, default=None, help="base nodes per axis")
    p.add_argument("--out", default=None, help="write the report JSON here")
    p.set_defaults(fn=_cmd_verify)

    p = sub.add_parser("sweep", help="conformal sharpness sweep on a round sphere")
    p.add_argument("--base", type=int, default=4, help="sphere dimension")
    p.add_argument("--f", default="height", help="conformal direction (function id)")
    p.add_argument("--t-min", type=float, default=0.01, dest="t_min")
    p.add_argument("--t-max", type=float, default=0.1, dest="t_max")
    p.add_argument("--steps", type=int, default=10)
    p.add_argument("--resolution", type=int, default=None)
    p.add_argument("--out", default=None, help="write the sweep CSV here")
    p.set_defaults(fn=_cmd_sweep)

    p = sub.add_parser("catalog", help="inspect the manifold catalog")
    p.add_argument("--list", action="store_true")
    p.set_defaults(fn=_cmd_catalog)

    p = sub.add_parser("selftest", help="run the invariant suite")
    p.set_defaults(fn=_cmd_selftest)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())
