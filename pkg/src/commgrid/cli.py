"""Command-line front end.

Exit codes: 0 success (verdicts are printed, not signalled), 1 selfcheck
failure, 2 invalid input, 3 unsupported combination, 4 internal
inconsistency.
"""
from __future__ import annotations

import argparse
import re
import sys
from pathlib import Path

from .ar import multiplicity
from .bruteforce import DecompositionError, UnsupportedField, decompose
from .errors import InternalInconsistency
from .intervals import (
    RebaseError,
    Staircase,
    classify,
    count_by_size,
    count_intervals,
    enumerate_intervals,
    interval_rep,
    rebase,
    thin_decompose,
)
from .io import parse_module, write_module, dumps
from .oracle import UnsupportedQuiver, interval_decomposable, label, s_decomposable, interval_candidates
from .quiver import vertex_name
from .rep import is_thin

OK, FAILED, INVALID, UNSUPPORTED, INCONSISTENT = 0, 1, 2, 3, 4


class Unsupported(Exception):
    pass


def _shape(text: str) -> tuple[int, int]:
    m = re.fullmatch(r"(\d+)x(\d+)", text.strip())
    if not m or int(m.group(1)) < 1 or int(m.group(2)) < 1:
        raise argparse.ArgumentTypeError(f"expected MxN with positive M and N, got {text!r}")
    return int(m.group(1)), int(m.group(2))


def _yes(b: bool) -> str:
    return "yes" if b else "no"


def _require_2d(m, what: str):
    if not m.quiver.is_2d_equioriented:
        raise Unsupported(f"{what} needs an equioriented 2D grid, got {m.quiver}")


# --- subcommands ----------------------------------------------------------------


def cmd_count(args) -> int:
    m, n = args.shape
    if args.by_size:
        for h in range(1, m + 1):
            for w in range(1, n + 1):
                print(f"{h}x{w}\t{count_by_size(m, n, h, w)}")
        print(f"total\t{count_intervals(m, n)}")
    else:
        print(count_intervals(m, n))
    return OK


def cmd_enum(args) -> int:
    m, n = args.shape
    for st in enumerate_intervals(m, n):
        if args.size and st.size != args.size:
            continue
        if args.format == "dimvec":
            print(st.display(m, n))
            print()
        else:
            print(st)
    return OK


def cmd_classify(args) -> int:
    for k, v in classify(parse_module(args.file)).as_dict().items():
        print(f"{k}: {str(v).lower()}")
    return OK


def cmd_rebase(args) -> int:
    m = parse_module(args.file)
    try:
        out, basis = rebase(m)
    except RebaseError as exc:
        print(f"rebase failed: {exc}")
        return OK
    if args.output:
        write_module(out, args.output)
    else:
        sys.stdout.write(dumps(out))
    for v in sorted(basis):
        print(f"scalar {vertex_name(v)}: {basis[v]}", file=sys.stdout if args.output else sys.stderr)
    return OK


def cmd_thin(args) -> int:
    m = parse_module(args.file)
    _require_2d(m, "thin-decompose")
    if not is_thin(m):
        raise ValueError("thin-decompose needs a thin module (every dimension at most 1)")
    for st in thin_decompose(m):
        print(st)
    return OK


def cmd_multiplicity(args) -> int:
    m = parse_module(args.file)
    _require_2d(m, "multiplicity with a staircase")
    st = Staircase.parse(args.interval)
    print(multiplicity(interval_rep(m.quiver, st, m.field), m))
    return OK


def cmd_oracle(args) -> int:
    m = parse_module(args.file)
    if args.set_dir:
        files = sorted(Path(args.set_dir).glob("*.json"))
        cands = [parse_module(f) for f in files]
        names = {c: f.stem for c, f in zip(cands, files)}
        verdict = s_decomposable(m, cands, workers=args.workers)
    elif m.quiver.is_2d_equioriented:
        names = {}
        verdict = interval_decomposable(m, workers=args.workers)
    else:
        if len(m.quiver.vertices) > 16:
            raise Unsupported("interval enumeration on non-2D grids is capped at 16 vertices")
        names = {}
        verdict = s_decomposable(m, interval_candidates(m), workers=args.workers)
    print(f"decomposable: {_yes(verdict.decomposable)}")
    print("multiplicities:")
    for member, d in verdict.nonzero().items():
        print(f"  {names.get(member) or label(member)}\t{d}")
    print(f"dim accounted: {verdict.dim_accounted} / {verdict.dim_total}")
    print(f"hom identity holds: {_yes(verdict.condition3_holds)}")
    return OK


def cmd_decompose(args) -> int:
    m = parse_module(args.file)
    dec = decompose(m, args.seed)
    out_dir = Path(args.out_dir) if args.out_dir else None
    if out_dir:
        out_dir.mkdir(parents=True, exist_ok=True)
    print(f"summands: {len(dec.summands)}")
    for k, (rep, mult) in enumerate(dec.summands, start=1):
        dims = " ".join(f"{vertex_name(v)}:{d}" for v, d in rep.dims.items() if d)
        line = f"summand {k}: multiplicity {mult}, dims {dims}"
        if out_dir:
            path = out_dir / f"summand_{k}.json"
            write_module(rep, path)
            line += f", file {path}"
        print(line)
    return OK


def cmd_selfcheck(args) -> int:
    from .selfcheck import run

    results = run()
    for name, ok, detail in results:
        print(f"{'PASS' if ok else 'FAIL'} {name}" + (f" ({detail})" if detail else ""))
    failed = sum(not ok for _, ok, _ in results)
    print(f"{len(results) - failed}/{len(results)} checks passed")
    return FAILED if failed else OK


# --- parser ------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="commgrid", description="Persistence modules over commutative grids.")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("count-intervals", help="count interval subquivers of an MxN grid")
    c.add_argument("--shape", type=_shape, required=True)
    c.add_argument("--by-size", action="store_true")
    c.set_defaults(run=cmd_count)

    c = sub.add_parser("enum-intervals", help="list staircases of an MxN grid")
    c.add_argument("--shape", type=_shape, required=True)
    c.add_argument("--size", type=_shape, help="keep only staircases with this HxW bounding box")
    c.add_argument("--format", choices=["staircase", "dimvec"], default="staircase")
    c.set_defaults(run=cmd_enum)

    c = sub.add_parser("classify", help="thin / pre-interval / interval flags")
    c.add_argument("file")
    c.set_defaults(run=cmd_classify)

    c = sub.add_parser("rebase", help="turn a pre-interval module into an interval module")
    c.add_argument("file")
    c.add_argument("-o", "--output")
    c.set_defaults(run=cmd_rebase)

    c = sub.add_parser("thin-decompose", help="interval summands of a thin module")
    c.add_argument("file")
    c.set_defaults(run=cmd_thin)

    c = sub.add_parser("multiplicity", help="multiplicity of an interval module as a summand")
    c.add_argument("file")
    c.add_argument("--interval", required=True, help='staircase such as "1..2: [2,3];[1,2]"')
    c.set_defaults(run=cmd_multiplicity)

    c = sub.add_parser("oracle", help="decide decomposability over a candidate set")
    c.add_argument("file")
    group = c.add_mutually_exclusive_group()
    group.add_argument("--set", choices=["intervals"], default="intervals")
    group.add_argument("--set-dir", help="directory of candidate module files")
    c.add_argument("--workers", type=int, default=1)
    c.set_defaults(run=cmd_oracle)

    c = sub.add_parser("decompose", help="brute-force decomposition over a prime field")
    c.add_argument("file")
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--out-dir")
    c.set_defaults(run=cmd_decompose)

    c = sub.add_parser("selfcheck", help="run the bundled fixture checks")
    c.set_defaults(run=cmd_selfcheck)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.run(args)
    except (Unsupported, UnsupportedField, UnsupportedQuiver, DecompositionError) as exc:
        print(f"unsupported: {exc}", file=sys.stderr)
        return UNSUPPORTED
    except InternalInconsistency as exc:
        print(f"internal inconsistency: {exc}", file=sys.stderr)
        return INCONSISTENT
    except (ValueError, OSError) as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return INVALID


if __name__ == "__main__":
    sys.exit(main())
