"""Bounded event-structure unfoldings of terms.

Events are prefix occurrences (or synchronised pairs of them) discovered
by running the decorated term through its step semantics: every run fires
maximal steps exactly as the transition rules do, with each way of pairing
complementary occurrences across a composition giving its own silent
event. Causality is induced by the steps: the events of one step are
pairwise concurrent and caused by everything the run fired before, since
the maximal-progress rules never let an enabled occurrence wait. An
occurrence firing with different partners, or out of a different run
history, is a different event; conflict is derived — two causally
unrelated events conflict when no run fires them both.

Configurations are the downward-closed conflict-free sets of collected
events; they are queried implicitly, so single events may extend a
configuration even when the step rules would only fire them inside a
larger step.

The weak unfolding erases silent events the way weak transitions erase
silent steps: it explores silent-step closures between observable steps
and keeps only observable events, with causality and depth counted over
observable steps. Terms with silent loops still have finite weak
unfoldings because closure states recur.

Exploration is bounded by run depth (the number of steps) and an event
budget.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import combinations, permutations
from typing import Iterable

from .errors import StateBoundExceeded, UnguardedRecursion
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
    Sum,
)

Config = frozenset  # of event ids


@dataclass(frozen=True)
class Event:
    eid: int
    label: Action
    causes: frozenset[int]  # all causal ancestors, transitively closed
    depth: int

    @property
    def is_tau(self) -> bool:
        return self.label.is_tau


# --- decorated terms: pending structure between fired steps.  They carry
# no history, so recurring process states are structurally equal. ---


@dataclass(frozen=True)
class _DNil:
    pass


@dataclass(frozen=True)
class _DPre:
    action: Action
    body: Process


@dataclass(frozen=True)
class _DMulti:
    actions: tuple[Action, ...]
    body: Process


@dataclass(frozen=True)
class _DSum:
    left: object
    right: object


@dataclass(frozen=True)
class _DPar:
    left: object
    right: object


@dataclass(frozen=True)
class _DRes:
    inner: object
    labels: frozenset[str]


@dataclass(frozen=True)
class _DRel:
    inner: object
    fn: object


@dataclass(frozen=True)
class _Move:
    key: tuple  # tree path of the occurrence within its originating state
    label: Action


class Unfolding:
    """The bounded unfolding of one term."""

    def __init__(
        self,
        p: Process,
        env: DefEnv | None,
        depth: int,
        max_events: int,
        weak: bool = False,
    ):
        self.env = env or DefEnv()
        self.depth = depth
        self.max_events = max_events
        self.weak = weak
        self.events: dict[int, Event] = {}
        self._keys: dict[tuple, int] = {}
        self._co: dict[int, set[int]] = {}
        self._steps_cache: dict[object, list] = {}
        self._closure_cache: dict[object, tuple] = {}
        # set when exploration stopped at the depth bound with runs still
        # open, i.e. the structure is a proper truncation
        self.truncated = False
        self.root = self._deco(p)
        if weak:
            self._explore_weak()
        else:
            self._explore()
        self._conflicts = self._derive_conflicts()

    # --- decoration ---

    def _deco(self, p: Process, seen: frozenset[str] = frozenset()):
        if isinstance(p, Nil):
            return _DNil()
        if isinstance(p, Prefix):
            return _DPre(p.action, p.body)
        if isinstance(p, MultiPrefix):
            return _DMulti(p.step.actions, p.body)
        if isinstance(p, Sum):
            return _DSum(self._deco(p.left, seen), self._deco(p.right, seen))
        if isinstance(p, Par):
            return _DPar(self._deco(p.left, seen), self._deco(p.right, seen))
        if isinstance(p, Restrict):
            return _DRes(self._deco(p.body, seen), p.labels)
        if isinstance(p, Relabel):
            return _DRel(self._deco(p.body, seen), p.fn)
        if isinstance(p, Const):
            if p.name in seen:
                raise UnguardedRecursion(p.name)
            return self._deco(self.env.lookup(p.name), seen | {p.name})
        raise TypeError(p)

    # --- decorated maximal steps, mirroring the transition rules.  A
    # decorated step is (moves fired together, residual decorated term) ---

    def _dsteps(self, d, path: str = "") -> list[tuple[tuple[_Move, ...], object]]:
        if isinstance(d, _DNil):
            return []
        if isinstance(d, _DPre):
            m = _Move(("e", path), d.action)
            return [((m,), self._deco(d.body))]
        if isinstance(d, _DMulti):
            moves = tuple(
                _Move(("e", f"{path}.{i}"), a) for i, a in enumerate(d.actions)
            )
            return [(moves, self._deco(d.body))]
        if isinstance(d, _DSum):
            return self._dsteps(d.left, path + "+L") + self._dsteps(d.right, path + "+R")
        if isinstance(d, _DPar):
            ls = self._dsteps(d.left, path + "|L")
            rs = self._dsteps(d.right, path + "|R")
            if not rs:
                return [(ms, _DPar(b, d.right)) for ms, b in ls]
            if not ls:
                return [(ms, _DPar(d.left, b)) for ms, b in rs]
            out = []
            for lmoves, lb in ls:
                for rmoves, rb in rs:
                    for pairing in _pairings(lmoves, rmoves):
                        moves = [
                            _Move(("s", ml.key, mr.key), TAU) for ml, mr in pairing
                        ]
                        paired = {m.key for p in pairing for m in p}
                        moves.extend(m for m in lmoves + rmoves if m.key not in paired)
                        out.append((tuple(moves), _DPar(lb, rb)))
            return out
        if isinstance(d, _DRes):
            out = []
            for ms, b in self._dsteps(d.inner, path + "\\"):
                if all(m.label.is_tau or m.label.base not in d.labels for m in ms):
                    out.append((ms, _DRes(b, d.labels)))
            return out
        if isinstance(d, _DRel):
            return [
                (
                    tuple(_Move(m.key, d.fn.apply(m.label)) for m in ms),
                    _DRel(b, d.fn),
                )
                for ms, b in self._dsteps(d.inner, path + "$")
            ]
        raise TypeError(d)

    # --- exploration ---

    def _event_for(self, key: tuple, label: Action, hist: frozenset[int], gen: int) -> Event:
        eid = self._keys.get(key)
        if eid is not None:
            return self.events[eid]
        eid = len(self.events)
        if eid >= self.max_events:
            raise StateBoundExceeded(self.max_events, "events")
        ev = Event(eid, label, hist, gen)
        self.events[eid] = ev
        self._keys[key] = eid
        self._co[eid] = {eid}
        return ev

    def _note_co(self, hist: frozenset[int]):
        for a in hist:
            self._co[a].update(hist)

    def _explore(self):
        root = (frozenset(), self.root)
        seen = {root}
        frontier = [root]
        budget = max(self.max_events * 16, 4096)
        gen = 0
        while frontier and gen < self.depth:
            gen += 1
            nxt = []
            for hist, d in frontier:
                options = sorted(
                    self._dsteps(d), key=lambda t: tuple(m.key for m in t[0])
                )
                for moves, nd in options:
                    skey = tuple(sorted(m.key for m in moves))
                    evs = [
                        self._event_for((m.key, skey, hist), m.label, hist, gen)
                        for m in moves
                    ]
                    hist2 = hist | {e.eid for e in evs}
                    self._note_co(hist2)
                    state = (hist2, nd)
                    if state not in seen:
                        if len(seen) >= budget:
                            raise StateBoundExceeded(budget, "run states")
                        seen.add(state)
                        nxt.append(state)
            frontier = nxt
        self.truncated = bool(frontier)

    # --- weak exploration: silent closures between observable steps ---

    def _steps_sorted(self, d) -> list:
        if d not in self._steps_cache:
            self._steps_cache[d] = sorted(
                self._dsteps(d), key=lambda t: tuple(m.key for m in t[0])
            )
        return self._steps_cache[d]

    def closure_states(self, d) -> tuple:
        """Every state reachable from d through silent steps, d included."""
        if d not in self._closure_cache:
            budget = max(self.max_events * 16, 4096)
            self._closure_cache[d] = tuple(self._tau_closure([d], budget))
        return self._closure_cache[d]

    def weak_moves(self, hist: frozenset, dcommit) -> list:
        """Observable step options from a silent commitment point of a weak
        unfolding: (observable event ids of the step, residual state).
        Options whose events lie beyond the explored depth are omitted."""
        out = []
        for d in self.closure_states(dcommit):
            for moves, nd in self._steps_sorted(d):
                obs = [m for m in moves if not m.label.is_tau]
                if not obs:
                    continue
                skey = tuple(sorted(m.key for m in moves))
                eids = [self._keys.get((m.key, skey, d, hist)) for m in obs]
                if None in eids:
                    continue
                out.append((tuple(eids), nd))
        return out

    def _tau_closure(self, ds: Iterable, budget: int) -> list:
        seen = set(ds)
        frontier = list(seen)
        while frontier:
            nxt = []
            for d in frontier:
                for moves, nd in self._dsteps(d):
                    if any(not m.label.is_tau for m in moves):
                        continue
                    if nd not in seen:
                        if len(seen) >= budget:
                            raise StateBoundExceeded(budget, "silent-closure states")
                        seen.add(nd)
                        nxt.append(nd)
            frontier = nxt
        return sorted(seen, key=_dkey)

    def _explore_weak(self):
        budget = max(self.max_events * 16, 4096)
        root = (frozenset(), self.root)
        seen = {root}
        frontier = [root]
        gen = 0
        while frontier and gen < self.depth:
            gen += 1
            nxt = []
            for hist, d0 in frontier:
                for d in self.closure_states(d0):
                    for moves, nd in self._steps_sorted(d):
                        obs = [m for m in moves if not m.label.is_tau]
                        if not obs:
                            continue
                        skey = tuple(sorted(m.key for m in moves))
                        # the closure state is part of the identity: the
                        # same label offered after different silent
                        # commitments is a different event
                        evs = [
                            self._event_for((m.key, skey, d, hist), m.label, hist, gen)
                            for m in obs
                        ]
                        hist2 = hist | {e.eid for e in evs}
                        self._note_co(hist2)
                        state = (hist2, nd)
                        if state not in seen:
                            if len(seen) >= budget:
                                raise StateBoundExceeded(budget, "run states")
                            seen.add(state)
                            nxt.append(state)
            frontier = nxt
        self.truncated = bool(frontier)

    def _derive_conflicts(self) -> set[tuple[int, int]]:
        out = set()
        for a in self.events:
            for b in self.events:
                if a < b and b not in self._co[a] and not self.le(a, b) and not self.le(b, a):
                    out.add((a, b))
        return out

    # --- queries ---

    def label(self, eid: int) -> Action:
        return self.events[eid].label

    def le(self, a: int, b: int) -> bool:
        return a == b or a in self.events[b].causes

    def observable(self, cfg: Config) -> frozenset[int]:
        return frozenset(e for e in cfg if not self.events[e].is_tau)

    def conflicts(self) -> set[tuple[int, int]]:
        return self._conflicts

    def compatible(self, a: int, b: int) -> bool:
        pair = (min(a, b), max(a, b))
        return pair not in self._conflicts

    def enabled(self, cfg: Config) -> list[int]:
        out = []
        for e, ev in self.events.items():
            if e in cfg or not ev.causes <= cfg:
                continue
            if all(self.compatible(e, c) for c in cfg):
                out.append(e)
        return out

    def succ(self, cfg: Config) -> list[tuple[int, Config]]:
        return [(e, cfg | {e}) for e in self.enabled(cfg)]

    def configurations(self, limit: int | None = None) -> list[Config]:
        seen = {frozenset()}
        frontier = [frozenset()]
        while frontier:
            nxt = []
            for c in frontier:
                for _e, c2 in self.succ(c):
                    if c2 not in seen:
                        if limit is not None and len(seen) >= limit:
                            raise StateBoundExceeded(limit, "configurations")
                        seen.add(c2)
                        nxt.append(c2)
            frontier = nxt
        return sorted(seen, key=lambda c: (len(c), sorted(c)))

    def pomset_transitions(
        self, cfg: Config, max_size: int, weak: bool = False
    ) -> list[tuple["Pomset", Config]]:
        """Extensions of cfg by up to max_size events (observable events
        when weak, with silent events absorbed freely), as pomsets."""
        seen = {cfg}
        frontier = [cfg]
        found: list[Config] = []
        while frontier:
            nxt = []
            for c in frontier:
                for _e, c2 in self.succ(c):
                    if c2 in seen:
                        continue
                    diff = c2 - cfg
                    size = len(self.observable(diff)) if weak else len(diff)
                    if size > max_size:
                        continue
                    seen.add(c2)
                    if size >= 1:
                        found.append(c2)
                    nxt.append(c2)
            frontier = nxt
        out = []
        for c2 in found:
            diff = c2 - cfg
            visible = self.observable(diff) if weak else diff
            if not visible:
                continue
            out.append((self.pomset_of(visible), c2))
        return out

    def pomset_of(self, events: Iterable[int]) -> "Pomset":
        evs = sorted(events)
        labels = tuple(self.events[e].label for e in evs)
        order = frozenset(
            (i, j)
            for i, a in enumerate(evs)
            for j, b in enumerate(evs)
            if i != j and self.le(a, b)
        )
        return Pomset(labels, order, tuple(evs))


def _pkey(p: Process) -> tuple:
    """A deterministic structural sort key for undecorated bodies."""
    if isinstance(p, Nil):
        return ("0",)
    if isinstance(p, Prefix):
        return ("1", p.action.render(), _pkey(p.body))
    if isinstance(p, MultiPrefix):
        return ("2", tuple(a.render() for a in p.step.actions), _pkey(p.body))
    if isinstance(p, Sum):
        return ("3", _pkey(p.left), _pkey(p.right))
    if isinstance(p, Par):
        return ("4", _pkey(p.left), _pkey(p.right))
    if isinstance(p, Restrict):
        return ("5", tuple(sorted(p.labels)), _pkey(p.body))
    if isinstance(p, Relabel):
        return ("6", p.fn.mapping, _pkey(p.body))
    if isinstance(p, Const):
        return ("7", p.name)
    raise TypeError(p)


def _dkey(d) -> tuple:
    """A deterministic structural sort key for decorated terms."""
    if isinstance(d, _DNil):
        return ("0",)
    if isinstance(d, _DPre):
        return ("1", d.action.render(), _pkey(d.body))
    if isinstance(d, _DMulti):
        return ("2", tuple(a.render() for a in d.actions), _pkey(d.body))
    if isinstance(d, _DSum):
        return ("3", _dkey(d.left), _dkey(d.right))
    if isinstance(d, _DPar):
        return ("4", _dkey(d.left), _dkey(d.right))
    if isinstance(d, _DRes):
        return ("5", tuple(sorted(d.labels)), _dkey(d.inner))
    if isinstance(d, _DRel):
        return ("6", d.fn.mapping, _dkey(d.inner))
    raise TypeError(d)


def _pairings(lmoves: tuple[_Move, ...], rmoves: tuple[_Move, ...]):
    """Every maximal way of pairing complementary occurrences across the
    two sides of a composition."""
    per_base: list[list[list[tuple[_Move, _Move]]]] = []
    for kind in ("name", "coname"):
        bases = {m.label.base for m in lmoves if m.label.kind == kind}
        for base in sorted(bases):
            ls = [m for m in lmoves if m.label.kind == kind and m.label.base == base]
            comp = "coname" if kind == "name" else "name"
            rs = [m for m in rmoves if m.label.kind == comp and m.label.base == base]
            if not rs:
                continue
            k = min(len(ls), len(rs))
            options = []
            for lsub in combinations(ls, k):
                for rperm in permutations(rs, k):
                    options.append(list(zip(lsub, rperm)))
            per_base.append(options)
    result = [[]]
    for options in per_base:
        result = [acc + opt for acc in result for opt in options]
    return result


@dataclass(frozen=True)
class Pomset:
    """A labelled partial order, compared up to label- and order-preserving
    isomorphism."""

    labels: tuple[Action, ...]
    order: frozenset[tuple[int, int]]  # index pairs (i, j): i strictly below j
    events: tuple[int, ...] = ()

    @property
    def is_step(self) -> bool:
        return not self.order

    def canon(self) -> tuple:
        try:
            return object.__getattribute__(self, "_canon")
        except AttributeError:
            pass
        n = len(self.labels)
        best = None
        idx = range(n)
        for perm in permutations(idx):
            lab = tuple(self.labels[perm[i]].render() for i in range(n))
            inv = {perm[i]: i for i in idx}
            ord_ = tuple(sorted((inv[i], inv[j]) for i, j in self.order))
            cand = (lab, ord_)
            if best is None or cand < best:
                best = cand
        object.__setattr__(self, "_canon", best)
        return best

    def _sig(self) -> tuple:
        n = len(self.labels)
        return tuple(
            sorted(
                (
                    self.labels[i].render(),
                    sum(1 for x, y in self.order if y == i),
                    sum(1 for x, y in self.order if x == i),
                )
                for i in range(n)
            )
        )

    def iso(self, other: "Pomset") -> bool:
        if len(self.labels) != len(other.labels):
            return False
        if len(self.labels) <= 5:
            return self.canon() == other.canon()
        # larger pomsets: exact backtracking search instead of the
        # factorial canonical form
        if self._sig() != other._sig():
            return False
        n = len(self.labels)
        below1 = [frozenset(x for x, y in self.order if y == i) for i in range(n)]
        below2 = [frozenset(x for x, y in other.order if y == i) for i in range(n)]

        def go(m: dict[int, int], used: set[int]) -> bool:
            if len(m) == n:
                return True
            i = len(m)
            for j in range(n):
                if j in used or self.labels[i] != other.labels[j]:
                    continue
                # indices are topologically sorted, so below1[i] is fully
                # mapped by the time i is placed
                if {m[x] for x in below1[i]} != set(below2[j]):
                    continue
                m[i] = j
                used.add(j)
                if go(m, used):
                    return True
                del m[i]
                used.discard(j)
            return False

        return go({}, set())

    def render(self) -> str:
        names = [a.render() for a in self.labels]
        rels = ",".join(f"{names[i]}<{names[j]}" for i, j in sorted(self.order))
        return "{" + ",".join(names) + ("|" + rels if rels else "") + "}"


def unfold(
    p: Process,
    env: DefEnv | None = None,
    depth: int = 6,
    max_events: int = 4000,
    weak: bool = False,
) -> Unfolding:
    return Unfolding(p, env, depth, max_events, weak)


# --- exports ---


def es_text(u: Unfolding) -> str:
    lines = [f"event {e.eid} {e.label.render()}" for e in u.events.values()]
    for e in u.events.values():
        for c in sorted(e.causes):
            lines.append(f"le {c} {e.eid}")
    for a, b in sorted(u.conflicts()):
        lines.append(f"conflict {a} {b}")
    return "\n".join(lines) + "\n"


def es_dot(u: Unfolding) -> str:
    lines = ["digraph events {", "  rankdir=TB;"]
    for e in u.events.values():
        lines.append(f'  e{e.eid} [label="{e.label.render()}"];')
    for e in u.events.values():
        # immediate causes only, for readability
        imm = [
            c
            for c in e.causes
            if not any(c in u.events[d].causes for d in e.causes if d != c)
        ]
        for c in sorted(imm):
            lines.append(f"  e{c} -> e{e.eid};")
    for a, b in sorted(u.conflicts()):
        lines.append(f"  e{a} -> e{b} [dir=none style=dashed constraint=false];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def es_struct(u: Unfolding) -> str:
    return json.dumps(
        {
            "events": [
                {"id": e.eid, "label": e.label.render(), "causes": sorted(e.causes)}
                for e in u.events.values()
            ],
            "conflicts": [list(c) for c in sorted(u.conflicts())],
        },
        indent=2,
    ) + "\n"
