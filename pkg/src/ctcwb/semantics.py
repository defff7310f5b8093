"""Step-labelled operational semantics and transition-system construction.

Composition follows the negative-premise reading: a component may move on
its own only when the other side has no transition at all, so when both
sides are active every transition combines one move from each, with
complementary action occurrences paired off into silent actions.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field

from .errors import NonTerminatingTauClosure, StateBoundExceeded, UnboundConstant
from .syntax import pretty
from .terms import (
    TAU,
    Action,
    Const,
    DefEnv,
    MultiPrefix,
    Nil,
    Par,
    Prefix,
    Process,
    Relabel,
    Restrict,
    Step,
    Sum,
)

DEFAULT_MAX_STATES = 100_000


def max_states_default() -> int:
    v = os.environ.get("CTC_MAX_STATES")
    return int(v) if v else DEFAULT_MAX_STATES


def combine(s: Step, t: Step) -> Step:
    """Join the moves of two parallel components: every complementary pair
    across the two steps synchronises into one silent action, the rest is
    multiset union."""
    left = s.counts()
    right = t.counts()
    taus = 0
    for a in list(left):
        if a.is_tau:
            continue
        comp = a.complement()
        m = min(left[a], right.get(comp, 0))
        if m:
            left[a] -= m
            right[comp] -= m
            taus += m
    out: list[Action] = []
    for a, n in left.items():
        out.extend([a] * n)
    for a, n in right.items():
        out.extend([a] * n)
    out.extend([TAU] * taus)
    return Step.of(out)


class StepSemantics:
    """Strong step transitions of closed terms over a defining environment."""

    def __init__(self, env: DefEnv | None = None):
        self.env = env or DefEnv()
        self._memo: dict[Process, frozenset[tuple[Step, Process]]] = {}

    def steps(self, p: Process) -> frozenset[tuple[Step, Process]]:
        hit = self._memo.get(p)
        if hit is not None:
            return hit
        out = self._steps(p)
        self._memo[p] = out
        return out

    def _steps(self, p: Process) -> frozenset[tuple[Step, Process]]:
        if isinstance(p, Nil):
            return frozenset()
        if isinstance(p, Prefix):
            return frozenset({(Step.of([p.action]), p.body)})
        if isinstance(p, MultiPrefix):
            return frozenset({(p.step, p.body)})
        if isinstance(p, Sum):
            return self.steps(p.left) | self.steps(p.right)
        if isinstance(p, Par):
            ls = self.steps(p.left)
            rs = self.steps(p.right)
            if not rs:
                return frozenset((s, Par(q, p.right)) for s, q in ls)
            if not ls:
                return frozenset((s, Par(p.left, q)) for s, q in rs)
            return frozenset(
                (combine(s, t), Par(q1, q2)) for s, q1 in ls for t, q2 in rs
            )
        if isinstance(p, Restrict):
            out = set()
            for s, q in self.steps(p.body):
                if all(a.is_tau or a.base not in p.labels for a in s):
                    out.add((s, Restrict(q, p.labels)))
            return frozenset(out)
        if isinstance(p, Relabel):
            return frozenset(
                (p.fn.apply_step(s), Relabel(q, p.fn)) for s, q in self.steps(p.body)
            )
        if isinstance(p, Const):
            return self.steps(self.env.lookup(p.name))
        raise TypeError(p)

    # --- weak transitions on terms ---

    def tau_closure(self, p: Process, bound: int | None = None) -> list[Process]:
        """All terms reachable through silent steps (labels erasing to
        nothing), including p itself, in deterministic discovery order."""
        bound = bound or max_states_default()
        seen = {p}
        order = [p]
        frontier = [p]
        while frontier:
            nxt = []
            for q in frontier:
                for s, r in sorted(
                    self.steps(q), key=lambda t: (t[0].sort_key(), pretty(t[1]))
                ):
                    if len(s.observable()) == 0 and r not in seen:
                        seen.add(r)
                        order.append(r)
                        nxt.append(r)
                        if len(seen) > bound:
                            raise NonTerminatingTauClosure(bound)
            frontier = nxt
        return order

    def weak_steps(
        self, p: Process, bound: int | None = None
    ) -> frozenset[tuple[Step, Process]]:
        """Observable weak transitions: silent closure, one strong step with
        a non-empty observable erasure, silent closure again. Labels are the
        erased steps."""
        out = set()
        for q in self.tau_closure(p, bound):
            for s, r in self.steps(q):
                obs = s.observable()
                if len(obs) == 0:
                    continue
                for r2 in self.tau_closure(r, bound):
                    out.add((obs, r2))
        return frozenset(out)


@dataclass
class Lts:
    """A finite step-labelled transition system with state 0 initial."""

    states: list[Process]
    transitions: list[tuple[int, Step, int]]
    index: dict[Process, int] = field(default_factory=dict)

    def __post_init__(self):
        if not self.index:
            self.index = {p: i for i, p in enumerate(self.states)}

    def outgoing(self, i: int) -> list[tuple[Step, int]]:
        return sorted(
            [(s, j) for (src, s, j) in self.transitions if src == i],
            key=lambda t: (t[0].sort_key(), t[1]),
        )


def build_lts(p: Process, env: DefEnv | None = None, max_states: int | None = None) -> Lts:
    sem = StepSemantics(env)
    bound = max_states or max_states_default()
    states = [p]
    index = {p: 0}
    transitions: list[tuple[int, Step, int]] = []
    frontier = [0]
    while frontier:
        nxt = []
        for i in frontier:
            for s, q in sorted(
                sem.steps(states[i]), key=lambda t: (t[0].sort_key(), pretty(t[1]))
            ):
                j = index.get(q)
                if j is None:
                    j = len(states)
                    if j >= bound:
                        raise StateBoundExceeded(bound)
                    index[q] = j
                    states.append(q)
                    nxt.append(j)
                transitions.append((i, s, j))
        frontier = nxt
    return Lts(states, transitions, index)


def saturate_weak(lts: Lts) -> Lts:
    """The weak transition system over the same states: observable labels
    with silent steps absorbed, plus an empty-step edge to every silently
    reachable state (the empty self-loop standing for silent closure)."""
    n = len(lts.states)
    eps: list[set[int]] = [set() for _ in range(n)]
    silent: list[list[int]] = [[] for _ in range(n)]
    obs: list[list[tuple[Step, int]]] = [[] for _ in range(n)]
    for i, s, j in lts.transitions:
        o = s.observable()
        if len(o) == 0:
            silent[i].append(j)
        else:
            obs[i].append((o, j))
    for i in range(n):
        stack = [i]
        eps[i].add(i)
        while stack:
            x = stack.pop()
            for y in silent[x]:
                if y not in eps[i]:
                    eps[i].add(y)
                    stack.append(y)
    weak: set[tuple[int, Step, int]] = set()
    empty = Step()
    for i in range(n):
        for j in eps[i]:
            weak.add((i, empty, j))
    for i in range(n):
        for x in eps[i]:
            for o, y in obs[x]:
                for j in eps[y]:
                    weak.add((i, o, j))
    return Lts(list(lts.states), sorted(weak, key=lambda t: (t[0], t[1].sort_key(), t[2])), dict(lts.index))


# --- exports ---


def lts_text(lts: Lts) -> str:
    lines = [f"state {i} {pretty(p)}" for i, p in enumerate(lts.states)]
    for i, s, j in lts.transitions:
        lines.append(f"trans {i} {s.render()} {j}")
    return "\n".join(lines) + "\n"


def lts_dot(lts: Lts) -> str:
    lines = ["digraph lts {", "  rankdir=LR;", '  node [shape=circle];']
    for i, p in enumerate(lts.states):
        label = pretty(p).replace("\\", "\\\\").replace('"', '\\"')
        shape = ' shape=doublecircle' if i == 0 else ""
        lines.append(f'  s{i} [label="{label}"{shape}];')
    for i, s, j in lts.transitions:
        lines.append(f'  s{i} -> s{j} [label="{s.render()}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def lts_struct(lts: Lts) -> str:
    return json.dumps(
        {
            "initial": 0,
            "states": [{"id": i, "term": pretty(p)} for i, p in enumerate(lts.states)],
            "transitions": [
                {"source": i, "step": [a.render() for a in s], "target": j}
                for i, s, j in lts.transitions
            ],
        },
        indent=2,
    ) + "\n"
