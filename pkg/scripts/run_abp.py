#!/usr/bin/env python3
"""Verify the alternating-bit protocol against its buffer specification.

Runs the full battery for a given channel capacity: state counts,
deadlock-freedom, and the equivalence verdicts across flavours.
"""

import argparse
import sys
import time

from ctcwb.abp import build_abp
from ctcwb.equiv import check
from ctcwb.semantics import build_lts, saturate_weak


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--capacity", type=int, default=1)
    ap.add_argument("--depth", type=int, default=6)
    ap.add_argument("--max-states", type=int, default=100000)
    ns = ap.parse_args()

    m = build_abp(ns.capacity)
    lts = build_lts(m.system, m.env, ns.max_states)
    deadlocks = sum(1 for i in range(len(lts.states)) if not lts.outgoing(i))
    sat = saturate_weak(lts)
    print(f"capacity {ns.capacity}: {len(lts.states)} states, "
          f"{deadlocks} deadlocks, {len(sat.states)} after silent saturation")

    failures = 0
    battery = [
        ("step", "weak", True),
        ("step", "strong", False),
        ("pomset", "weak", True),
        ("hp", "weak", True),
    ]
    for kind, strength, expect in battery:
        t0 = time.monotonic()
        res = check(kind, m.system, m.spec, m.env, strength,
                    depth=ns.depth, max_states=2 * ns.max_states)
        dt = time.monotonic() - t0
        ok = res.equivalent == expect
        failures += not ok
        want = "equivalent" if expect else "inequivalent"
        print(f"  {strength} {kind}: {'equivalent' if res.equivalent else 'inequivalent'}"
              f" (expected {want}) [{dt:.2f}s]")
    if deadlocks:
        failures += 1
    return 0 if failures == 0 else 1


if __name__ == "__main__":
    sys.exit(main())
