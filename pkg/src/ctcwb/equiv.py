"""Bisimulation checkers.

Step bisimilarity is decided on the step transition system (saturated for
the weak variant) by signature refinement. The true-concurrency variants
work on bounded unfoldings: pomset bisimilarity relates configuration
pairs transferring isomorphic pomset extensions, history-preserving (hp)
bisimilarity relates configuration pairs together with an order- and
label-preserving bijection between them, and the hereditary variant (hhp)
additionally demands the relation be closed under pointwise shrinking of
its triples. hp/hhp verdicts are relative to the unfolding depth.

Weak variants of the unfolding-based checks compare weak unfoldings,
whose configurations already omit silent events, with depth counted in
observable steps; the transfer conditions are then the strong ones.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import StateBoundExceeded
from .events import Pomset, Unfolding, unfold
from .semantics import Lts, build_lts, max_states_default, saturate_weak
from .terms import DefEnv, Process, Step

Config = frozenset


@dataclass
class EquivResult:
    equivalent: bool
    kind: str
    strength: str
    depth: int | None = None
    evidence: list[str] = field(default_factory=list)
    note: str = ""

    def render(self) -> str:
        head = "equivalent" if self.equivalent else "inequivalent"
        out = f"{self.strength} {self.kind}: {head}"
        if self.depth is not None:
            out += f" (up to depth {self.depth})"
        if self.evidence:
            out += "\n  distinguishing steps: " + " ; ".join(self.evidence)
        if self.note:
            out += f"\n  note: {self.note}"
        return out


# --- step bisimilarity -------------------------------------------------


def _refine(lts1: Lts, lts2: Lts) -> list[dict[int, int]]:
    """Signature refinement over the disjoint union; returns the block
    assignment at every round (round 0 is the trivial partition)."""
    n1 = len(lts1.states)
    outs: list[list[tuple[Step, int]]] = [[] for _ in range(n1 + len(lts2.states))]
    for i, s, j in lts1.transitions:
        outs[i].append((s, j))
    for i, s, j in lts2.transitions:
        outs[n1 + i].append((s, n1 + j))
    block = {i: 0 for i in range(len(outs))}
    history = [dict(block)]
    while True:
        sigs = {}
        for i in range(len(outs)):
            sig = frozenset((s, block[j]) for s, j in outs[i])
            sigs[i] = (block[i], sig)
        ids: dict[tuple, int] = {}
        new = {}
        for i in range(len(outs)):
            new[i] = ids.setdefault(sigs[i], len(ids))
        if len(set(new.values())) == len(set(block.values())):
            history.append(new)
            return history
        block = new
        history.append(dict(block))


def _step_evidence(lts1: Lts, lts2: Lts, history: list[dict[int, int]]) -> list[str]:
    n1 = len(lts1.states)
    outs: list[list[tuple[Step, int]]] = [[] for _ in range(n1 + len(lts2.states))]
    for i, s, j in lts1.transitions:
        outs[i].append((s, j))
    for i, s, j in lts2.transitions:
        outs[n1 + i].append((s, n1 + j))

    def round_of(a: int, b: int) -> int:
        for k, blk in enumerate(history):
            if blk[a] != blk[b]:
                return k
        return len(history)

    def go(a: int, b: int) -> list[str]:
        k = round_of(a, b)
        for x, y in ((a, b), (b, a)):
            for s, x2 in sorted(outs[x], key=lambda t: (t[0].sort_key(), t[1])):
                replies = [y2 for t, y2 in outs[y] if t == s]
                if not replies:
                    return [s.render()]
                if all(round_of(x2, y2) < k for y2 in replies):
                    y2 = max(replies, key=lambda y2: (round_of(x2, y2), -y2))
                    return [s.render()] + go(x2, y2)
        return []

    return go(0, n1)


def step_bisim(
    p: Process,
    q: Process,
    env: DefEnv | None = None,
    strength: str = "strong",
    max_states: int | None = None,
) -> EquivResult:
    bound = max_states or max_states_default()
    lts1 = build_lts(p, env, bound)
    lts2 = build_lts(q, env, bound)
    if strength == "weak":
        lts1 = saturate_weak(lts1)
        lts2 = saturate_weak(lts2)
    history = _refine(lts1, lts2)
    ok = history[-1][0] == history[-1][len(lts1.states)]
    evidence = [] if ok else _step_evidence(lts1, lts2, history)
    return EquivResult(ok, "step", strength, None, evidence)


# --- bisimulations over unfoldings ------------------------------------


def _game_gfp(nodes, obligations):
    """Greatest fixed point over an explicit node set: `obligations(n)`
    yields (description, [successor nodes]) demands; a node survives while
    every demand keeps at least one surviving successor. Returns the
    surviving set and, per dead node, the demand that killed it."""
    alive = set(nodes)
    killed: dict[object, object] = {}
    changed = True
    while changed:
        changed = False
        for n in list(alive):
            for desc, succs in obligations(n):
                if not any(s in alive for s in succs):
                    alive.discard(n)
                    killed[n] = desc
                    changed = True
                    break
    return alive, killed


# Weak pomset/hp games run over positions of the weak unfolding: the
# observable configuration so far, the not-yet-added events of the step
# being fired, and the committed residual state. Closure choices are made
# inside moves, so a player answering an observable move can commit to
# silent progress that discards unwanted alternatives.


def _weak_pair(p, q, env, depth, max_events):
    """Unfoldings for a weak game. The full unfoldings (silent events
    materialised, absorbed during transfers) are preferred; when a term is
    too silent-step-heavy for that — retransmission loops make the number
    of silent runs explode — fall back to the weak unfoldings and the
    closure-graph game, which quotients silent runs away."""
    probe = min(max_events, 1500)
    try:
        u1 = unfold(p, env, depth, probe)
        u2 = unfold(q, env, depth, probe)
        if not u1.truncated and not u2.truncated:
            return "full", u1, u2
    except StateBoundExceeded:
        pass
    # a truncated full unfolding would distort weak verdicts: one side
    # may spend its depth on silent steps the other does not have. The
    # graph game counts depth in observable steps instead.
    return (
        "graph",
        unfold(p, env, depth, max_events, weak=True),
        unfold(q, env, depth, max_events, weak=True),
    )


def _weak_root(u: Unfolding):
    return (frozenset(), frozenset(), u.root)


def _weak_single_moves(u: Unfolding, pos):
    """Single observable-event extensions of a weak position. Completing
    the pending step lets the mover also commit further silent steps."""
    c, rem, d = pos
    out = []
    if rem:
        for e in sorted(rem):
            rem2 = rem - {e}
            if rem2:
                out.append((e, (c | {e}, rem2, d)))
            else:
                for d2 in u.closure_states(d):
                    out.append((e, (c | {e}, rem2, d2)))
        return out
    for evs, nd in u.weak_moves(c, d):
        for e in evs:
            rem2 = frozenset(evs) - {e}
            if rem2:
                out.append((e, (c | {e}, rem2, nd)))
            else:
                for d2 in u.closure_states(nd):
                    out.append((e, (c | {e}, frozenset(), d2)))
    return out


def _weak_pomset_moves(u: Unfolding, pos):
    """Pomset extensions of a weak position: every way of adding one or
    more observable events, as (pomset of the added events, position)."""
    c0 = pos[0]
    seen = {pos}
    frontier = [pos]
    out = []
    while frontier:
        nxt = []
        for p in frontier:
            for _e, p2 in _weak_single_moves(u, p):
                if p2 in seen:
                    continue
                seen.add(p2)
                nxt.append(p2)
                out.append((u.pomset_of(p2[0] - c0), p2))
        frontier = nxt
    return out


def _evidence_from_killed(start, killed, alive) -> list[str]:
    out = []
    node = start
    seen = set()
    while node in killed and node not in seen:
        seen.add(node)
        desc, nxt = killed[node]
        out.append(desc)
        if nxt is None:
            break
        node = nxt
    return out


def pomset_bisim(
    p: Process,
    q: Process,
    env: DefEnv | None = None,
    strength: str = "strong",
    depth: int = 6,
    max_events: int = 4000,
) -> EquivResult:
    if strength == "weak":
        mode, u1, u2 = _weak_pair(p, q, env, depth, max_events)
    else:
        mode = "strong"
        u1 = unfold(p, env, depth, max_events)
        u2 = unfold(q, env, depth, max_events)
    if mode == "graph":
        root = (_weak_root(u1), _weak_root(u2))
        mv1 = lambda s: _weak_pomset_moves(u1, s)
        mv2 = lambda s: _weak_pomset_moves(u2, s)
    else:
        weak = mode == "full"
        root = (frozenset(), frozenset())
        mv1 = lambda s: u1.pomset_transitions(s, 10**9, weak=weak)
        mv2 = lambda s: u2.pomset_transitions(s, 10**9, weak=weak)
    moves1: dict = {}
    moves2: dict = {}

    def mv(f, cache, s):
        if s not in cache:
            cache[s] = f(s)
        return cache[s]

    nodes = {root}
    frontier = [root]
    edges: dict[tuple, list] = {}
    while frontier:
        nxt = []
        for node in frontier:
            s1, s2 = node
            obl = []
            for pm, s1b in mv(mv1, moves1, s1):
                succs = [
                    (s1b, s2b)
                    for pm2, s2b in mv(mv2, moves2, s2)
                    if pm.iso(pm2)
                ]
                obl.append((f"left {pm.render()}", succs))
            for pm, s2b in mv(mv2, moves2, s2):
                succs = [
                    (s1b, s2b)
                    for pm2, s1b in mv(mv1, moves1, s1)
                    if pm.iso(pm2)
                ]
                obl.append((f"right {pm.render()}", succs))
            edges[node] = obl
            for _d, succs in obl:
                for s in succs:
                    if s not in nodes:
                        nodes.add(s)
                        nxt.append(s)
        frontier = nxt

    def obligations(n):
        for desc, succs in edges[n]:
            yield (desc, succs), succs

    alive, killed_raw = _game_gfp(nodes, obligations)
    ok = root in alive
    evidence: list[str] = []
    if not ok:
        killed = {}
        for n, (desc, succs) in killed_raw.items():
            best = max(succs, key=lambda s: s in killed_raw) if succs else None
            killed[n] = (desc, best)
        evidence = _evidence_from_killed(root, killed, alive)
    return EquivResult(ok, "pomset", strength, depth, evidence)


def _iso_extend(u1: Unfolding, u2: Unfolding, f: tuple, e1: int, e2: int):
    """Try extending the bijection f (tuple of pairs) with e1 -> e2;
    returns the extended tuple or None."""
    if u1.events[e1].label != u2.events[e2].label:
        return None
    for a, b in f:
        if u1.le(a, e1) != u2.le(b, e2) or u1.le(e1, a) != u2.le(e2, b):
            return None
    return tuple(sorted(f + ((e1, e2),)))


def hp_bisim(
    p: Process,
    q: Process,
    env: DefEnv | None = None,
    strength: str = "strong",
    depth: int = 6,
    max_events: int = 4000,
) -> EquivResult:
    if strength == "weak":
        mode, u1, u2 = _weak_pair(p, q, env, depth, max_events)
    else:
        mode = "strong"
        u1 = unfold(p, env, depth, max_events)
        u2 = unfold(q, env, depth, max_events)
    if mode == "graph":
        root = (_weak_root(u1), (), _weak_root(u2))
        mv1 = lambda s: _weak_single_moves(u1, s)
        mv2 = lambda s: _weak_single_moves(u2, s)
    elif mode == "full":
        root = (frozenset(), (), frozenset())
        mv1 = lambda s: [
            (pm.events[0], c2) for pm, c2 in u1.pomset_transitions(s, 1, weak=True)
        ]
        mv2 = lambda s: [
            (pm.events[0], c2) for pm, c2 in u2.pomset_transitions(s, 1, weak=True)
        ]
    else:
        root = (frozenset(), (), frozenset())
        mv1, mv2 = u1.succ, u2.succ
    nodes = {root}
    frontier = [root]
    edges: dict[tuple, list] = {}
    mcache1: dict = {}
    mcache2: dict = {}

    def mv(fn, cache, s):
        if s not in cache:
            cache[s] = fn(s)
        return cache[s]

    while frontier:
        nxt = []
        for node in frontier:
            s1, f, s2 = node
            obl = []
            for e1, s1b in mv(mv1, mcache1, s1):
                succs = []
                for e2, s2b in mv(mv2, mcache2, s2):
                    f2 = _iso_extend(u1, u2, f, e1, e2)
                    if f2 is not None:
                        succs.append((s1b, f2, s2b))
                obl.append((f"left {u1.label(e1).render()}", succs))
            for e2, s2b in mv(mv2, mcache2, s2):
                succs = []
                for e1, s1b in mv(mv1, mcache1, s1):
                    f2 = _iso_extend(u1, u2, f, e1, e2)
                    if f2 is not None:
                        succs.append((s1b, f2, s2b))
                obl.append((f"right {u2.label(e2).render()}", succs))
            edges[node] = obl
            for _d, succs in obl:
                for s in succs:
                    if s not in nodes:
                        nodes.add(s)
                        nxt.append(s)
        frontier = nxt

    def obligations(n):
        for desc, succs in edges[n]:
            yield (desc, succs), succs

    alive, killed_raw = _game_gfp(nodes, obligations)
    ok = root in alive
    evidence: list[str] = []
    if not ok:
        killed = {}
        for n, (desc, succs) in killed_raw.items():
            best = max(succs, key=lambda s: s in killed_raw) if succs else None
            killed[n] = (desc, best)
        evidence = _evidence_from_killed(root, killed, alive)
    return EquivResult(ok, "hp", strength, depth, evidence)


def _all_isos(u1: Unfolding, u2: Unfolding, c1: Config, c2: Config, weak: bool):
    """All label/order isomorphisms between (the observable parts of) two
    configurations."""
    d1 = sorted(u1.observable(c1) if weak else c1)
    d2 = sorted(u2.observable(c2) if weak else c2)
    if len(d1) != len(d2):
        return
    out: list[tuple] = [()]
    for e1 in d1:
        nxt = []
        for f in out:
            used = {b for _a, b in f}
            for e2 in d2:
                if e2 in used:
                    continue
                f2 = _iso_extend(u1, u2, f, e1, e2)
                if f2 is not None:
                    nxt.append(f2)
        out = nxt
        if not out:
            return
    yield from out


def hhp_bisim(
    p: Process,
    q: Process,
    env: DefEnv | None = None,
    strength: str = "strong",
    depth: int = 4,
    max_events: int = 2000,
) -> EquivResult:
    """Bounded hereditary hp-bisimilarity: the greatest hp-bisimulation
    over all posetal triples of the bounded unfoldings, pruned until it is
    closed under pointwise triple shrinking.

    The weak variant runs on the full unfoldings: configurations keep
    their silent events — a reply commits silent progress by including
    them — while the bijections, matching, and shrinking concern only
    observable events."""
    weak = strength == "weak"
    u1 = unfold(p, env, depth, max_events)
    u2 = unfold(q, env, depth, max_events)
    cfgs1 = u1.configurations()
    cfgs2 = u2.configurations()
    triples: set[tuple] = set()
    for c1 in cfgs1:
        for c2 in cfgs2:
            for f in _all_isos(u1, u2, c1, c2, weak):
                triples.add((c1, f, c2))

    mcache1: dict[Config, list] = {}
    mcache2: dict[Config, list] = {}

    def single(u, cfg):
        if not weak:
            return u.succ(cfg)
        return [
            (pm.events[0], c2) for pm, c2 in u.pomset_transitions(cfg, 1, weak=True)
        ]

    def mv(u, cache, cfg):
        if cfg not in cache:
            cache[cfg] = single(u, cfg)
        return cache[cfg]

    def transfer_ok(node, alive) -> bool:
        c1, f, c2 = node
        for e1, c1b in mv(u1, mcache1, c1):
            if not any(
                (c1b, f2, c2b) in alive
                for e2, c2b in mv(u2, mcache2, c2)
                for f2 in [_iso_extend(u1, u2, f, e1, e2)]
                if f2 is not None
            ):
                return False
        for e2, c2b in mv(u2, mcache2, c2):
            if not any(
                (c1b, f2, c2b) in alive
                for e1, c1b in mv(u1, mcache1, c1)
                for f2 in [_iso_extend(u1, u2, f, e1, e2)]
                if f2 is not None
            ):
                return False
        return True

    def shrink_ok(node, alive) -> bool:
        c1, f, c2 = node
        for a, b in f:
            # drop a maximal mapped pair: both restrictions must shrink to
            # configurations again and the smaller triple must be present
            if any(u1.le(a, x) and a != x for x in c1):
                continue
            if any(u2.le(b, y) and b != y for y in c2):
                continue
            f2 = tuple(pair for pair in f if pair != (a, b))
            c1b = c1 - {a}
            c2b = c2 - {b}
            if (c1b, f2, c2b) not in alive:
                return False
        return True

    alive = set(triples)
    changed = True
    while changed:
        changed = False
        for n in list(alive):
            if not transfer_ok(n, alive) or not shrink_ok(n, alive):
                alive.discard(n)
                changed = True
    root = (frozenset(), (), frozenset())
    ok = root in alive
    note = ""
    evidence: list[str] = []
    if not ok:
        evidence = ["no hereditary history-preserving relation contains the empty triple"]
    return EquivResult(ok, "hhp", strength, depth, evidence, note)


CHECKERS = {
    "step": step_bisim,
    "pomset": pomset_bisim,
    "hp": hp_bisim,
    "hhp": hhp_bisim,
}


def check(
    kind: str,
    p: Process,
    q: Process,
    env: DefEnv | None = None,
    strength: str = "strong",
    depth: int = 6,
    max_states: int | None = None,
) -> EquivResult:
    if kind == "step":
        return step_bisim(p, q, env, strength, max_states)
    fn = CHECKERS[kind]
    kwargs = {"strength": strength, "depth": depth}
    if max_states:
        kwargs["max_events"] = max_states
    return fn(p, q, env, **kwargs)


def check_implications(
    p: Process,
    q: Process,
    env: DefEnv | None = None,
    depth: int = 4,
) -> dict[str, dict[str, bool]]:
    """All eight verdicts plus a consistency check: strong implies weak for
    each flavour, and hhp => hp => pomset => step within a strength."""
    out: dict[str, dict[str, bool]] = {}
    for strength in ("strong", "weak"):
        out[strength] = {
            k: check(k, p, q, env, strength, depth).equivalent for k in CHECKERS
        }
    violations = []
    for k in CHECKERS:
        if out["strong"][k] and not out["weak"][k]:
            violations.append(f"strong {k} holds but weak {k} fails")
    for strength in ("strong", "weak"):
        chain = ["hhp", "hp", "pomset", "step"]
        for a, b in zip(chain, chain[1:]):
            if out[strength][a] and not out[strength][b]:
                violations.append(f"{strength} {a} holds but {strength} {b} fails")
    out["violations"] = violations  # type: ignore[assignment]
    return out
