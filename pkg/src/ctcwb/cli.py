"""Command-line front end.

Subcommands: `parse` (echo a definition file in canonical syntax), `lts`
(export the step transition system of a term), `equiv` (decide one of the
eight equivalences between two terms), `laws` (run the randomised law
corpus), and `abp` (check the bundled alternating-bit case study against
its buffer specification).

Exit codes: 0 for equivalent / all laws pass, 1 for inequivalent / law
failure, 2 for input errors, 3 when a state or event bound is exceeded.
The environment variable CTC_MAX_STATES overrides the default state cap.
"""

from __future__ import annotations

import argparse
import sys

from .abp import build_abp
from .equiv import CHECKERS, check
from .errors import CtcError, StateBoundExceeded
from .laws import DEFAULT_KINDS, FAMILIES, KIND_TOKENS, run_corpus
from .semantics import build_lts, lts_dot, lts_struct, lts_text, max_states_default
from .syntax import parse_program, parse_term, pretty_program


def _load(path: str):
    with open(path, encoding="utf-8") as fh:
        return parse_program(fh.read())


def _cmd_parse(ns) -> int:
    env = _load(ns.file)
    sys.stdout.write(pretty_program(env))
    return 0


def _cmd_lts(ns) -> int:
    env = _load(ns.file)
    term = parse_term(ns.term)
    env.check_closed([term])
    lts = build_lts(term, env, ns.max_states or max_states_default())
    render = {"text": lts_text, "dot": lts_dot, "struct": lts_struct}[ns.format]
    sys.stdout.write(render(lts))
    return 0


def _cmd_equiv(ns) -> int:
    env = _load(ns.file)
    a = parse_term(ns.a)
    b = parse_term(ns.b)
    env.check_closed([a, b])
    res = check(ns.kind, a, b, env, ns.strength, ns.depth, ns.max_states)
    print(res.render())
    return 0 if res.equivalent else 1


def _cmd_laws(ns) -> int:
    report = run_corpus(ns.seed, ns.count, ns.depth, tuple(ns.kinds), tuple(ns.families))
    sys.stdout.write(report.render())
    return 0 if not report.failures else 1


def _cmd_abp(ns) -> int:
    model = build_abp(ns.capacity)
    res = check(
        ns.kind, model.system, model.spec, model.env, ns.strength, ns.depth,
        ns.max_states,
    )
    if ns.kind in ("hp", "hhp"):
        res.note = (
            "verdict holds for behaviour up to the stated depth; the "
            "unbounded claim is not decided here"
        )
    print(f"capacity {ns.capacity}: " + res.render())
    return 0 if res.equivalent else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ctc",
        description="workbench for a calculus with multiset transition steps",
    )
    sub = parser.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("parse", help="parse a definition file and echo it")
    p.add_argument("file")
    p.set_defaults(fn=_cmd_parse)

    p = sub.add_parser("lts", help="export the step transition system of a term")
    p.add_argument("file")
    p.add_argument("term")
    p.add_argument("--format", choices=("text", "dot", "struct"), default="text")
    p.add_argument("--max-states", type=int, default=None)
    p.set_defaults(fn=_cmd_lts)

    p = sub.add_parser("equiv", help="decide an equivalence between two terms")
    p.add_argument("file")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("--kind", choices=tuple(CHECKERS), required=True)
    p.add_argument("--strength", choices=("strong", "weak"), required=True)
    p.add_argument("--depth", type=int, default=6)
    p.add_argument("--max-states", type=int, default=None)
    p.set_defaults(fn=_cmd_equiv)

    p = sub.add_parser("laws", help="run the randomised law corpus")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--count", type=int, default=100)
    p.add_argument("--depth", type=int, default=3)
    p.add_argument(
        "--kinds",
        nargs="+",
        default=list(DEFAULT_KINDS),
        metavar="KIND",
        help=f"subset of: {', '.join(KIND_TOKENS)}",
    )
    p.add_argument(
        "--families",
        nargs="+",
        default=list(FAMILIES),
        metavar="FAMILY",
        help=f"subset of: {', '.join(FAMILIES)}",
    )
    p.set_defaults(fn=_cmd_laws)

    p = sub.add_parser("abp", help="check the alternating-bit study")
    p.add_argument("--capacity", type=int, default=1)
    p.add_argument("--kind", choices=tuple(CHECKERS), required=True)
    p.add_argument("--strength", choices=("strong", "weak"), required=True)
    p.add_argument("--depth", type=int, default=6)
    p.add_argument("--max-states", type=int, default=None)
    p.set_defaults(fn=_cmd_abp)

    return parser


def main(argv=None) -> int:
    ns = build_parser().parse_args(argv)
    try:
        return ns.fn(ns)
    except StateBoundExceeded as e:
        print(f"error: {e}", file=sys.stderr)
        return 3
    except (CtcError, ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
