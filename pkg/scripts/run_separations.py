#!/usr/bin/env python3
"""Show how the equivalence flavours and strengths behave on classic pairs.

Under maximal-step semantics the picture differs from interleaving
calculi, and each example illustrates one facet:

  * concurrency vs interleaving - a parallel pair can only fire both
    actions together, so every flavour (even step) tells it apart from the
    sum of its sequencings;
  * cause swap - causality is induced by the step layering of a run, so
    swapping which component a later action syntactically depends on does
    not change any behaviour: equivalent under every flavour;
  * silent prefix - separates the strengths: strongly inequivalent,
    weakly equivalent;
  * absorbed branch - a silent choice that can discard a branch is
    absorbed weakly but visible strongly.
"""

import sys

from ctcwb.equiv import check
from ctcwb.syntax import parse_term

EXAMPLES = [
    ("concurrency vs interleaving",
     "a.nil || b.nil", "a.b.nil + b.a.nil"),
    ("cause swap",
     "a.c.nil || b.nil", "a.nil || b.c.nil"),
    ("silent prefix",
     "tau.a.nil", "a.nil"),
    ("absorbed branch",
     "a.(b.nil + tau.c.nil) + a.c.nil", "a.(b.nil + tau.c.nil)"),
]


def main() -> int:
    for title, left, right in EXAMPLES:
        p, q = parse_term(left), parse_term(right)
        print(f"{title}:")
        print(f"  {left}   vs   {right}")
        for strength in ("strong", "weak"):
            row = []
            for kind in ("step", "pomset", "hp", "hhp"):
                res = check(kind, p, q, None, strength, depth=6)
                row.append(f"{kind}={'eq' if res.equivalent else 'NEQ'}")
            print(f"    {strength:6s}: " + "  ".join(row))
        print()
    return 0


if __name__ == "__main__":
    sys.exit(main())
