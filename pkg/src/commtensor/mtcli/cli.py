"""mt <command> [flags] <files...>

Exit codes: 0 pass, 1 fail (with witness), 2 truncated, 3 usage error.
"""
from __future__ import annotations

import argparse
import json
import random
import sys

from ..finkit import DEFAULT_CAP
from .commands import COMMANDS, EXIT, UsageError, run
from .dsl import SpecError

USAGE_EXIT = 3
RESULT_WIDTH = 400


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(USAGE_EXIT)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="mt", description="Commuting tensor products: categories, profunctors, multicategories.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("files", nargs="*", help="spec files, optionally file.spec:NAME")
    p.add_argument("--budget", type=int, default=None, help="word-length / tree-size budget")
    p.add_argument("--trunc", type=int, default=None, help="arity truncation for sequences and multicategories")
    p.add_argument("--cap", type=int, default=DEFAULT_CAP, help="enumeration cap")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--json", action="store_true", help="emit the report as JSON")
    p.add_argument("--commuting", action="store_true", help="tensor: the commuting tensor (the default)")
    p.add_argument("--target-size", type=int, default=2, help="bv-tensor: size of the algebra carrier")
    return p


def render_text(rep) -> str:
    d = rep.as_dict()
    lines = [f"{d['command']}: {d['status']}  ({rep.timing:.3f}s)"]
    for c in d["checks"]:
        extra = {k: v for k, v in c.items() if k not in ("name", "status")}
        lines.append(f"  [{c['status']:>9}] {c['name']}" + (f"  {json.dumps(extra, sort_keys=True)}" if extra else ""))
    if d["result"]:
        text = json.dumps(d["result"], sort_keys=True)
        if len(text) > RESULT_WIDTH:
            text = text[:RESULT_WIDTH] + " ... (use --json for the full report)"
        lines.append("  result: " + text)
    return "\n".join(lines)


def main(argv=None) -> int:
    args = build_parser().parse_intermixed_args(argv)
    random.seed(args.seed)
    try:
        rep = run(args.command, args.files, args)
    except (UsageError, SpecError) as exc:
        print(f"mt: {exc}", file=sys.stderr)
        return USAGE_EXIT
    if args.json:
        print(json.dumps(rep.as_dict(), sort_keys=True, indent=2))
    else:
        print(render_text(rep))
    return EXIT[rep.status]


if __name__ == "__main__":
    sys.exit(main())
