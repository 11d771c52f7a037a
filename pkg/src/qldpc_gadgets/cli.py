"""Command-line interface.

Exit status: 0 when everything checked passes, 1 when a verification
fails, 2 for usage errors (including an unknown catalogue entry).
"""

from __future__ import annotations

import argparse
import csv
import io
import sys
from typing import Sequence

from . import __version__
from .bridge import synthesize_product_measurement
from .css import LogicalError
from .distance import isd_search, min_weight_logical
from .expansion import augment_to_expander, gadget_cheeger
from .fileio import dumps_json, format_parity_checks, gadget_to_dict
from .gadget import attach, build_gadget, relocate, verify_gadget
from .gb import SEED_NAMES, CatalogError, catalog_code, shift_qubit_permutation
from .orbits import complete_seed_set_check, verify_sector_coverage
from .overhead import overhead_row, rate_ratio_series


class UsageError(Exception):
    pass


def _entry(r: int):
    try:
        return catalog_code(r)
    except CatalogError as exc:
        raise UsageError(exc.args[0]) from None


def _gadget(args):
    entry = _entry(args.r)
    g = build_gadget(entry.code, entry.seeds[args.seed])
    if args.shift:
        g = relocate(entry.code, g, shift_qubit_permutation(entry.l, args.shift % entry.l))
    return entry, g


def _emit(args, payload: dict, text: str) -> None:
    if getattr(args, "json", False):
        sys.stdout.write(dumps_json(payload))
    else:
        print(text)


# subcommands ------------------------------------------------------------------


def cmd_code_build(args) -> int:
    entry = _entry(args.r)
    out = format_parity_checks(entry.code, args.format)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(out)
    else:
        sys.stdout.write(out)
    return 0


def cmd_code_params(args) -> int:
    entry = _entry(args.r)
    code = entry.code
    n, k_expected, d_expected = entry.params
    payload = {"r": args.r, "n": code.n, "k": code.k, "k_expected": k_expected,
               "d_conjectured": d_expected}
    ok = code.k == k_expected
    if args.distance_budget:
        for kind in ("X", "Z"):
            res = min_weight_logical(code, kind, args.distance_budget)
            payload[f"lightest_{kind.lower()}_within_budget"] = res.weight if res else None
            ok &= res is None or res.weight >= d_expected
    if args.isd_iterations:
        for kind in ("X", "Z"):
            res = isd_search(code, kind, d_expected, args.isd_iterations, seed=args.seed)
            payload[f"isd_{kind.lower()}_weight"] = res.best.weight if res.best else None
    text = "\n".join(f"{key}: {val}" for key, val in payload.items())
    _emit(args, payload, text)
    return 0 if ok else 1


def cmd_gadget_build(args) -> int:
    entry, g = _gadget(args)
    payload = {
        "r": args.r, "seed": args.seed, "shift": args.shift,
        "kappa": g.num_kappa, "chi": g.num_chi, "gauge": g.num_gauge,
        "physical_qubits": g.physical_qubits, "gadget": gadget_to_dict(g),
    }
    text = (f"r={args.r} seed={args.seed} shift={args.shift}: {g.num_kappa} gadget qubits, "
            f"{g.num_chi} chi checks, {g.num_gauge} gauge checks, {g.physical_qubits} physical qubits")
    _emit(args, payload, text)
    return 0


def cmd_gadget_verify(args) -> int:
    entry = _entry(args.r)
    names = SEED_NAMES if args.seed == "all" else (args.seed,)
    results = {}
    ok = True
    lines = []
    for name in names:
        args.seed = name
        _, g = _gadget(args)
        rep = verify_gadget(entry.code, g)
        deformed = attach(entry.code, g)
        k_ok = deformed.merged.k == entry.code.k - 1
        in_stab = deformed.merged.contains(deformed.measured_operator)
        passed = rep.passed and k_ok and in_stab
        ok &= passed
        results[name] = dict(rep.to_dict(), k_deformed=deformed.merged.k, seed_is_stabilizer=in_stab)
        lines.append(f"{name}: {'pass' if passed else 'FAIL'}"
                     + "".join(f"\n  {a.name}: {a.detail}" for a in rep.failures()))
    _emit(args, {"r": args.r, "passed": ok, "gadgets": results}, "\n".join(lines))
    return 0 if ok else 1


def cmd_cheeger(args) -> int:
    entry, g = _gadget(args)
    h = gadget_cheeger(g)
    payload = {"r": args.r, "seed": args.seed, "h": str(h.value), "witness": list(h.witness)}
    text = f"h = {h.value} (witness {list(h.witness)})"
    ok = True
    if args.augment:
        res = augment_to_expander(g, 1, policy=args.policy, code=entry.code)
        payload.update(added_edges=[list(e) for e in res.added_edges],
                       added_qubits=res.added_qubit_count, h_after=str(res.achieved_h),
                       optimal=res.optimal)
        text += (f"\nadded {len(res.added_edges)} edges ({res.added_qubit_count} qubits), "
                 f"h = {res.achieved_h}")
        ok = res.achieved_h >= 1
    _emit(args, payload, text)
    return 0 if ok else 1


def _targets(spec: str) -> list[tuple[str, int]]:
    out = []
    for item in spec.split(","):
        name, _, shift = item.strip().partition(":")
        if name not in SEED_NAMES:
            raise UsageError(f"unknown seed {name!r}")
        try:
            out.append((name, int(shift or 0)))
        except ValueError:
            raise UsageError(f"bad shift in {item!r}") from None
    return out


def cmd_bridge(args) -> int:
    entry = _entry(args.r)
    pm = synthesize_product_measurement(entry, _targets(args.targets))
    payload = pm.to_dict()
    text = "\n".join(f"{key}: {val}" for key, val in payload.items())
    _emit(args, payload, text)
    return 0 if pm.ok else 1


def cmd_orbit_verify(args) -> int:
    entry = _entry(args.r)
    cov = verify_sector_coverage(entry)
    comp = complete_seed_set_check(entry) if cov.passed else None
    ok = cov.passed and comp is not None and comp.passed
    payload = {
        "r": args.r,
        "sectors": [
            {"seed": s.name, "orbit_size": s.orbit_size, "part": s.part,
             "logical_qubits": list(s.qubits), "covered": s.covered, "problems": s.problems}
            for s in cov.results
        ],
        "complete": None if comp is None else {
            "method": comp.method, "reachable": comp.reachable, "expected": comp.expected,
            "passed": comp.passed,
        },
        "passed": ok,
    }
    lines = [f"{s.name}: orbit {s.orbit_size}, {'covered' if s.covered else 'NOT covered'}"
             for s in cov.results]
    if comp is not None:
        lines.append(f"complete seed set: {comp.reachable}/{comp.expected} ({comp.method})")
    _emit(args, payload, "\n".join(lines))
    return 0 if ok else 1


_TABLE_FIELDS = ("r", "code", "code_block", "gadget", "augmentation", "bridge", "total",
                 "per_logical", "surface_factor")


def cmd_report_table1(args) -> int:
    rows = []
    for r in args.r or (5, 6, 7, 8):
        _entry(r)
        rep = overhead_row(r, policy=args.policy)
        rows.append(rep)
    if args.json:
        sys.stdout.write(dumps_json({"rows": [rep.to_dict() for rep in rows]}))
    elif args.csv:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(_TABLE_FIELDS)
        for rep in rows:
            w.writerow([rep.r, f"[[{rep.n},{rep.k},{rep.d}]]", rep.code_block_qubits,
                        rep.gadget_qubits, rep.augmentation_qubits, rep.bridge_qubits,
                        rep.total_qubits, rep.per_logical, rep.surface_factor])
        sys.stdout.write(buf.getvalue())
    else:
        for rep in rows:
            print(f"[[{rep.n},{rep.k},{rep.d}]]  block {rep.code_block_qubits}  "
                  f"gadgets {rep.gadget_column()}  bridges {rep.bridge_qubits}  "
                  f"total {rep.total_qubits}  per logical {rep.per_logical}  "
                  f"factor {rep.surface_factor}")
    return 0


def cmd_report_fig1(args) -> int:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(("r", "d", "ratio"))
    for r, d, ratio in rate_ratio_series(range(5, args.r_max + 1)):
        w.writerow((r, d, f"{ratio:.6f}"))
    sys.stdout.write(buf.getvalue())
    return 0


# parser -----------------------------------------------------------------------


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qldpc-gadgets", description="Logical measurement gadgets for QLDPC codes")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    def seed_args(sp, allow_all=False):
        sp.add_argument("--r", type=int, required=True)
        sp.add_argument("--seed", required=True, choices=SEED_NAMES + (("all",) if allow_all else ()))
        sp.add_argument("--shift", type=int, default=0)
        sp.add_argument("--json", action="store_true")

    code = sub.add_parser("code").add_subparsers(dest="action", required=True)
    b = code.add_parser("build")
    b.add_argument("--r", type=int, required=True)
    b.add_argument("--format", choices=("json", "alist"), default="json")
    b.add_argument("--output")
    b.set_defaults(func=cmd_code_build)
    pr = code.add_parser("params")
    pr.add_argument("--r", type=int, required=True)
    pr.add_argument("--distance-budget", type=int, default=0)
    pr.add_argument("--isd-iterations", type=int, default=0)
    pr.add_argument("--seed", type=int, default=0, help="random seed for the ISD search")
    pr.add_argument("--json", action="store_true")
    pr.set_defaults(func=cmd_code_params)

    gadget = sub.add_parser("gadget").add_subparsers(dest="action", required=True)
    gb = gadget.add_parser("build")
    seed_args(gb)
    gb.set_defaults(func=cmd_gadget_build)
    gv = gadget.add_parser("verify")
    seed_args(gv, allow_all=True)
    gv.set_defaults(func=cmd_gadget_verify)

    ch = sub.add_parser("cheeger")
    seed_args(ch)
    ch.add_argument("--augment", action="store_true")
    ch.add_argument("--policy", choices=("optimal", "greedy"), default="optimal")
    ch.set_defaults(func=cmd_cheeger)

    br = sub.add_parser("bridge")
    br.add_argument("--r", type=int, required=True)
    br.add_argument("--targets", required=True, help="comma list of seed:shift, e.g. x1:0,z1:3")
    br.add_argument("--json", action="store_true")
    br.set_defaults(func=cmd_bridge)

    orbit = sub.add_parser("orbit").add_subparsers(dest="action", required=True)
    ov = orbit.add_parser("verify")
    ov.add_argument("--r", type=int, required=True)
    ov.add_argument("--json", action="store_true")
    ov.set_defaults(func=cmd_orbit_verify)

    report = sub.add_parser("report").add_subparsers(dest="action", required=True)
    t1 = report.add_parser("table1")
    fmt = t1.add_mutually_exclusive_group()
    fmt.add_argument("--json", action="store_true")
    fmt.add_argument("--csv", action="store_true")
    t1.add_argument("--r", type=int, action="append", help="restrict to these rows")
    t1.add_argument("--policy", choices=("optimal", "greedy"), default="optimal")
    t1.set_defaults(func=cmd_report_table1)
    f1 = report.add_parser("fig1")
    f1.add_argument("--csv", action="store_true", required=True)
    f1.add_argument("--r-max", type=int, default=11)
    f1.set_defaults(func=cmd_report_fig1)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = _parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except LogicalError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
