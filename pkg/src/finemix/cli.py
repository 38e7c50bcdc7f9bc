"""Command-line front end.

Reads JSON from --input (default stdin), writes JSON or rendered text to
--output (default stdout).  Exit codes: 0 success, 1 domain error with a
JSON diagnostic on stderr, 2 usage error.

Input kinds are detected by their keys: a system carries "perms", a
subdivision "cells", a tiling "triangles".  All numbers are 1-indexed.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional

from . import lozenge, render, subdivision, systems, verify
from .errors import DomainError, UnsupportedDimension
from .lozenge import LozengeTiling
from .subdivision import FineMixedSubdivision
from .systems import SystemOfPermutations


def _read_json(path: Optional[str]) -> dict:
    if path in (None, "-"):
        return json.load(sys.stdin)
    with open(path) as handle:
        return json.load(handle)


def _write(text: str, path: Optional[str]) -> None:
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w") as handle:
            handle.write(text)


def _write_json(data, path: Optional[str]) -> None:
    _write(json.dumps(data, indent=2, sort_keys=True) + "\n", path)


def _load(data: dict):
    if "perms" in data:
        return SystemOfPermutations.from_json(data)
    if "cells" in data:
        return FineMixedSubdivision.from_json(data)
    if "triangles" in data:
        return LozengeTiling.from_json(data)
    raise DomainError(
        "input is not a system, subdivision, or tiling JSON object"
    )


def _as_system(obj) -> SystemOfPermutations:
    if isinstance(obj, SystemOfPermutations):
        return obj
    if isinstance(obj, FineMixedSubdivision):
        return subdivision.system_of_permutations(obj)
    return lozenge.extract_system(obj)


def _parse_palette(text: Optional[str]) -> dict:
    if not text:
        return {}
    palette = {}
    for part in text.split(","):
        key, _, value = part.partition("=")
        palette[int(key)] = value
    return palette


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------

def _cmd_validate(args) -> int:
    obj = _load(_read_json(args.input))
    if isinstance(obj, FineMixedSubdivision):
        subdivision.validate(obj)
        kind = "subdivision"
    elif isinstance(obj, LozengeTiling):
        subdivision.validate(lozenge.to_subdivision(obj))
        kind = "tiling"
    else:
        kind = "system"  # reversal and shape already checked on load
    _write_json({"ok": True, "kind": kind, "n": obj.n}, args.output)
    return 0


def _cmd_perms(args) -> int:
    obj = _load(_read_json(args.input))
    _write_json(_as_system(obj).to_json(), args.output)
    return 0


def _cmd_acyclic(args) -> int:
    system = _as_system(_load(_read_json(args.input)))
    witness = systems.acyclicity_witness(system)
    if witness is None:
        _write_json({"acyclic": True}, args.output)
        return 0
    i, j, cycle = witness
    diagnostic = {
        "acyclic": False,
        "colors": [i, j],
        "cycle": list(cycle),
    }
    print(json.dumps(diagnostic, sort_keys=True), file=sys.stderr)
    _write_json(diagnostic, args.output)
    return 1


def _cmd_dual(args) -> int:
    obj = _load(_read_json(args.input))
    if isinstance(obj, LozengeTiling):
        obj = lozenge.to_subdivision(obj)
    if isinstance(obj, FineMixedSubdivision):
        _write_json(subdivision.dual(obj).to_json(), args.output)
    else:
        _write_json(systems.dual(obj).to_json(), args.output)
    return 0


def _cmd_delete(args) -> int:
    obj = _load(_read_json(args.input))
    if isinstance(obj, LozengeTiling):
        obj = lozenge.to_subdivision(obj)
    if isinstance(obj, FineMixedSubdivision):
        result = subdivision.delete_color(obj, args.index)
    else:
        result = systems.delete_color(obj, args.index)
    data = result.to_json()
    data["color_map"] = {str(k): v for k, v in sorted(result.color_map.items())}
    _write_json(data, args.output)
    return 0


def _cmd_contract(args) -> int:
    obj = _load(_read_json(args.input))
    if isinstance(obj, LozengeTiling):
        obj = lozenge.to_subdivision(obj)
    if isinstance(obj, FineMixedSubdivision):
        result = subdivision.contract_letter(obj, args.index)
    else:
        result = systems.contract_letter(obj, args.index)
    data = result.to_json()
    data["letter_map"] = {str(k): v for k, v in sorted(result.letter_map.items())}
    _write_json(data, args.output)
    return 0


def _cmd_positions(args) -> int:
    obj = _load(_read_json(args.input))
    if isinstance(obj, (FineMixedSubdivision, LozengeTiling)):
        sub = obj if isinstance(obj, FineMixedSubdivision) else lozenge.to_subdivision(obj)
        positions = subdivision.simplices(sub)
        system = subdivision.system_of_permutations(sub)
    else:
        system = obj
        positions = systems.simplex_positions(system)
    table = systems.table_of_positions(system)
    _write_json(
        {
            "positions": [list(x) for x in positions],
            "table": [[sorted(entry) for entry in row] for row in table.rows],
        },
        args.output,
    )
    return 0


def _cmd_spread(args) -> int:
    data = _read_json(args.input)
    if "positions" in data:
        positions = [tuple(x) for x in data["positions"]]
    else:
        obj = _load(data)
        if isinstance(obj, (FineMixedSubdivision, LozengeTiling)):
            sub = obj if isinstance(obj, FineMixedSubdivision) else lozenge.to_subdivision(obj)
            positions = subdivision.simplices(sub)
        else:
            positions = systems.simplex_positions(obj)
    witness = systems.spread_out_witness(positions)
    if witness is None:
        _write_json({"spread_out": True}, args.output)
        return 0
    k, m = witness
    diagnostic = {"spread_out": False, "witness": {"k": k, "m": list(m)}}
    print(json.dumps(diagnostic, sort_keys=True), file=sys.stderr)
    _write_json(diagnostic, args.output)
    return 1


def _cmd_realize2d(args) -> int:
    system = _as_system(_load(_read_json(args.input)))
    _write_json(lozenge.realize(system).to_json(), args.output)
    return 0


def _cmd_realize_n3(args) -> int:
    system = _as_system(_load(_read_json(args.input)))
    _write_json(verify.realize_n3(system).to_json(), args.output)
    return 0


def _cmd_enumerate(args) -> int:
    n, d = args.n, args.d
    _apply_scale_cap(args, n, d)
    if args.kind == "systems":
        stream = (s.to_json() for s in systems.enumerate_acyclic_systems(n, d))
    elif args.kind == "subdivisions":
        stream = (
            s.to_json()
            for s in verify.enumerate_subdivisions(n, d, method=args.method)
        )
    elif args.kind == "tilings":
        if d != 3:
            raise UnsupportedDimension("tilings need d = 3")
        stream = (t.to_json() for t in lozenge.enumerate_tilings(n))
    else:
        raise DomainError(f"unknown enumeration kind {args.kind!r}")
    count = 0
    items = []
    out_lines = []
    for item in stream:
        count += 1
        if args.format == "jsonl":
            out_lines.append(json.dumps(item, sort_keys=True))
        else:
            items.append(item)
        if args.limit and count >= args.limit:
            break
    if args.format == "jsonl":
        _write("\n".join(out_lines) + ("\n" if out_lines else ""), args.output)
    else:
        _write_json({"count": count, "items": items}, args.output)
    print(f"enumerated {count} {args.kind}", file=sys.stderr)
    return 0


def _cmd_verify(args) -> int:
    _apply_scale_cap(args, args.n, args.d)
    if args.weak:
        report = verify.weak_conjecture_search(args.n, args.d, workers=args.workers)
    else:
        report = verify.check_all_theorems(args.n, args.d, workers=args.workers)
    _write(report.canonical_bytes().decode() + "\n", args.output)
    print(
        f"verify(n={args.n}, d={args.d}): "
        + ("all passed" if report.all_passed() else "FAILURES")
        + f" in {report.wall_time_ms:.0f} ms",
        file=sys.stderr,
    )
    return 0 if report.all_passed() else 1


def _cmd_render(args) -> int:
    obj = _load(_read_json(args.input))
    spec = render.RenderSpec(
        format=args.format or "svg",
        scale=args.scale,
        palette=_parse_palette(args.palette),
        show_dual=args.show_dual,
    )
    if isinstance(obj, FineMixedSubdivision):
        raise UnsupportedDimension(
            "render takes a tiling or a d=3 system; convert subdivisions first"
        )
    _write(render.render(obj, spec), args.output)
    return 0


def _apply_scale_cap(args, n: int, d: int) -> None:
    cap = getattr(args, "seed_scale", None)
    if cap:
        cap_n, cap_d = (int(x) for x in cap.split(","))
        if n > cap_n or d > cap_d:
            raise DomainError(
                f"(n, d) = ({n}, {d}) exceeds the --seed-scale cap ({cap_n}, {cap_d})"
            )


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="finemix",
        description="Fine mixed subdivisions, systems of permutations, lozenge tilings.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def io_args(p):
        p.add_argument("--input", "-i", help="input JSON file (default stdin)")
        p.add_argument("--output", "-o", help="output file (default stdout)")

    for name, fn in [
        ("validate", _cmd_validate),
        ("perms", _cmd_perms),
        ("acyclic", _cmd_acyclic),
        ("dual", _cmd_dual),
        ("positions", _cmd_positions),
        ("spread", _cmd_spread),
        ("realize2d", _cmd_realize2d),
        ("realize-n3", _cmd_realize_n3),
    ]:
        p = sub.add_parser(name)
        io_args(p)
        p.set_defaults(func=fn)

    for name, fn in [("delete", _cmd_delete), ("contract", _cmd_contract)]:
        p = sub.add_parser(name)
        p.add_argument("index", type=int, help="1-indexed color / letter")
        io_args(p)
        p.set_defaults(func=fn)

    p = sub.add_parser("enumerate")
    p.add_argument("--kind", choices=["systems", "subdivisions", "tilings"],
                   default="systems")
    p.add_argument("-n", type=int, required=True)
    p.add_argument("-d", type=int, required=True)
    p.add_argument("--method", choices=["auto", "lozenge", "cayley"], default="auto")
    p.add_argument("--limit", type=int, default=0, help="stop after this many items")
    p.add_argument("--format", choices=["json", "jsonl"], default="json")
    p.add_argument("--workers", type=int, default=1,
                   help="accepted for symmetry with verify; output order is "
                        "canonical either way")
    p.add_argument("--seed-scale", help="refuse runs beyond this 'n,d' cap")
    io_args(p)
    p.set_defaults(func=_cmd_enumerate)

    p = sub.add_parser("verify")
    p.add_argument("-n", type=int, required=True)
    p.add_argument("-d", type=int, required=True)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--weak", action="store_true",
                   help="run the spread-out conjecture search instead")
    p.add_argument("--seed-scale", help="refuse runs beyond this 'n,d' cap")
    io_args(p)
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("render")
    p.add_argument("--format", choices=["svg", "ascii"], default="svg")
    p.add_argument("--scale", type=int, default=48)
    p.add_argument("--palette", help="comma list like '1=#ff0000,2=#00ff00'")
    p.add_argument("--show-dual", action="store_true",
                   help="overlay the edge permutation labels")
    io_args(p)
    p.set_defaults(func=_cmd_render)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except DomainError as exc:
        print(json.dumps(exc.to_json(), sort_keys=True), file=sys.stderr)
        return 1
    except json.JSONDecodeError as exc:
        print(json.dumps({"error": "BadJSON", "message": str(exc)}), file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
