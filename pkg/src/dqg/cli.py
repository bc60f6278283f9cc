"""Command line: ``dqg check`` runs suites on an instance file, ``dqg example`` writes one."""

from __future__ import annotations

import argparse
import json
import sys
import time

from dqg import builders, checks, io
from dqg.base import Group, InvalidInstance, NotApplicable, cyclic_group, symmetric_group_3

EXIT_OK, EXIT_FAIL, EXIT_INVALID = 0, 1, 2


def _group(name: str) -> Group:
    name = name.lower()
    if name in ("s3", "sym3"):
        return symmetric_group_3()
    if name.startswith("z") and name[1:].isdigit() and int(name[1:]) >= 1:
        return cyclic_group(int(name[1:]))
    raise InvalidInstance(f"unknown group {name!r}; use zN or s3")


def _cyclic_action(points, generator, order: int):
    """Powers of the generator permutation, given as the images of the points in order."""
    index = {p: i for i, p in enumerate(points)}
    if generator is None:
        gen = [1, 0] + list(range(2, len(points))) if len(points) >= 2 else [0]
    else:
        if len(generator) != len(points):
            raise InvalidInstance("--generator needs one image per point")
        try:
            gen = [index[p] for p in generator]
        except KeyError as exc:
            raise InvalidInstance(f"--generator names unknown point {exc}") from None
    rows = [list(range(len(points)))]
    for _ in range(order - 1):
        rows.append([gen[x] for x in rows[-1]])
    return tuple(tuple(r) for r in rows)


def build_example(args):
    if args.kind == "pair":
        return builders.example_pair(points=args.points or ("1", "2"), weight=args.weight)
    if args.kind == "crossed":
        points = tuple(args.points or ("1", "2", "3"))
        if args.group and not args.group.lower().startswith("z"):
            raise InvalidInstance("the crossed builder takes a cyclic group from the command line")
        group = _group(args.group or "z2")
        action = _cyclic_action(points, args.generator, len(group))
        weight = args.weight or (("1", "4", "1") if len(points) == 3 else None)
        if weight is None:
            weight = ("1",) * len(points)
        return builders.example_crossed(points=points, group=group, action=action, weight=weight)
    if args.kind == "group":
        return builders.example_group_algebra(_group(args.group or "z2"))
    return builders.example_sweedler()


def _format_text(inst, results, dims, elapsed: float) -> str:
    lines = [f"instance {inst.name}: dim A = {inst.dim}  ({inst.description})"]
    width = max((len(r.check_id) for r in results), default=10)
    for r in results:
        line = f"  {r.status.upper():4} {r.check_id:<{width}}  [{r.mode}] {r.anchor}"
        if r.status != "pass":
            line += f"\n         witness: {checks._jsonable(r.witness)}"
        lines.append(line)
    if dims:
        lines.append("  quotient dimensions (ambient -> quotient):")
        for name, (amb, q) in dims.items():
            lines.append(f"    {name}: {amb} -> {q}")
    counts = {s: sum(r.status == s for r in results) for s in ("pass", "fail", "n/a")}
    lines.append(f"  {counts['pass']} pass, {counts['fail']} fail, {counts['n/a']} n/a in {elapsed:.2f}s")
    return "\n".join(lines)


def _quotient_dims(inst, suite: str) -> dict:
    if suite not in ("fundamental", "all"):
        return {}
    from dqg.fundamental import rtp_dimensions
    try:
        return rtp_dimensions(inst)
    except (NotApplicable, InvalidInstance, ValueError):
        return {}


def cmd_check(args) -> int:
    try:
        chosen = checks.select(args.suite)
    except KeyError:
        print(f"error: unknown suite {args.suite!r}; choose from {', '.join(checks.SUITES)} or all",
              file=sys.stderr)
        return EXIT_INVALID
    try:
        inst = io.load_instance(args.file)
    except InvalidInstance as exc:
        if args.json:
            print(json.dumps({"file": str(args.file), "valid": False, "errors": exc.problems}, indent=1))
        else:
            print(f"invalid instance {args.file}:", file=sys.stderr)
            for p in exc.problems:
                print(f"  - {p}", file=sys.stderr)
        return EXIT_INVALID
    t = time.perf_counter()
    results = checks.run_suite(inst, checks=chosen, tol=args.tol)
    elapsed = time.perf_counter() - t
    dims = _quotient_dims(inst, args.suite)
    ok = checks.passed(results)
    if args.json:
        report = {
            "instance": inst.name,
            "dim": inst.dim,
            "suite": args.suite,
            "tol": args.tol,
            "passed": ok,
            "results": [r.to_json() for r in results],
            "quotient_dimensions": {k: list(v) for k, v in dims.items()},
        }
        print(json.dumps(report, indent=1))
    else:
        print(_format_text(inst, results, dims, elapsed))
    if args.figures:
        from dqg.figures import report_figures
        for path in report_figures(inst, results, args.figures):
            print(f"wrote {path}", file=sys.stderr)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_example(args) -> int:
    try:
        inst = build_example(args)
    except InvalidInstance as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    if args.emit:
        io.emit_instance(inst, args.emit)
        print(f"wrote {args.emit}: {inst.name}, dim A = {inst.dim}", file=sys.stderr)
    else:
        print(io.dumps(inst))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="dqg", description="Exact checks for finite measured Hopf *-algebroids.")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("check", help="run check suites on an instance file")
    c.add_argument("file")
    c.add_argument("--suite", default="all", help=f"one of {', '.join(checks.SUITES)}, all")
    c.add_argument("--json", action="store_true", help="machine-readable report")
    c.add_argument("--tol", type=float, default=1e-9, help="tolerance of the numeric checks")
    c.add_argument("--figures", metavar="DIR", help="write the status matrix and Gram heatmap here")
    c.set_defaults(func=cmd_check)

    e = sub.add_parser("example", help="build an example instance")
    e.add_argument("kind", choices=("pair", "crossed", "group", "sweedler"))
    e.add_argument("--points", nargs="+", help="point names of the base")
    e.add_argument("--weight", nargs="+", help="weights as p/q strings, one per point")
    e.add_argument("--group", help="zN or s3 (crossed accepts zN only)")
    e.add_argument("--generator", nargs="+", help="crossed: images of the points under the generator")
    e.add_argument("--emit", metavar="FILE", help="write the instance here instead of stdout")
    e.set_defaults(func=cmd_example)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
