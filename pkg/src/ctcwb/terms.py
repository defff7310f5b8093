"""Process terms: actions, steps (finite multisets of actions), term
constructors, relabelling functions, defining environments, and the static
predicates (sorts, guardedness) used elsewhere.

Terms are immutable and hashable; structural equality doubles as state
identity in the transition-system builders.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator

from .errors import (
    ComplementOfTau,
    ComplementaryPrefix,
    DuplicateDefinition,
    UnboundConstant,
    UnguardedRecursion,
)

NAME = "name"
CONAME = "coname"
TAU_KIND = "tau"


@dataclass(frozen=True)
class Action:
    kind: str
    base: str | None = None

    def __post_init__(self):
        if self.kind == TAU_KIND:
            if self.base is not None:
                raise ValueError("tau carries no base name")
        elif self.kind in (NAME, CONAME):
            if not self.base:
                raise ValueError("visible action needs a base name")
        else:
            raise ValueError(f"bad action kind {self.kind!r}")

    @property
    def is_tau(self) -> bool:
        return self.kind == TAU_KIND

    def complement(self) -> "Action":
        if self.is_tau:
            raise ComplementOfTau("tau has no complement")
        return Action(CONAME if self.kind == NAME else NAME, self.base)

    def render(self) -> str:
        if self.is_tau:
            return "tau"
        return self.base if self.kind == NAME else "'" + self.base

    def sort_key(self) -> tuple:
        # names before conames before tau, alphabetical within a kind
        rank = {NAME: 0, CONAME: 1, TAU_KIND: 2}[self.kind]
        return (self.base or "￿", rank)

    def __repr__(self):
        return f"Action({self.render()})"


TAU = Action(TAU_KIND)


def name(b: str) -> Action:
    return Action(NAME, b)


def coname(b: str) -> Action:
    return Action(CONAME, b)


@dataclass(frozen=True)
class Step:
    """A finite multiset of actions, stored as a canonically sorted tuple.

    Steps produced by the semantics are non-empty; the empty step is used
    only by the weak-transition machinery as the label of silent closure.
    """

    actions: tuple[Action, ...] = ()

    @classmethod
    def of(cls, items: Iterable[Action]) -> "Step":
        return cls(tuple(sorted(items, key=Action.sort_key)))

    def __post_init__(self):
        object.__setattr__(
            self, "actions", tuple(sorted(self.actions, key=Action.sort_key))
        )

    def __len__(self) -> int:
        return len(self.actions)

    def __iter__(self) -> Iterator[Action]:
        return iter(self.actions)

    def counts(self) -> dict[Action, int]:
        out: dict[Action, int] = {}
        for a in self.actions:
            out[a] = out.get(a, 0) + 1
        return out

    def has_complementary_pair(self) -> bool:
        cs = self.counts()
        return any(
            not a.is_tau and cs.get(a.complement(), 0) > 0 for a in cs
        )

    def observable(self) -> "Step":
        """The step with silent actions erased (may be empty)."""
        return Step(tuple(a for a in self.actions if not a.is_tau))

    def union(self, other: "Step") -> "Step":
        return Step.of(self.actions + other.actions)

    def render(self) -> str:
        return ",".join(a.render() for a in self.actions) if self.actions else "-"

    def sort_key(self) -> tuple:
        return tuple(a.sort_key() for a in self.actions)

    def __repr__(self):
        return f"Step({{{self.render()}}})"


@dataclass(frozen=True)
class RelabelFn:
    """A finite renaming of base names, identity elsewhere.

    Relabelling preserves complements and fixes tau.
    """

    mapping: tuple[tuple[str, str], ...] = ()

    @classmethod
    def of(cls, d: dict[str, str]) -> "RelabelFn":
        return cls(tuple(sorted((k, v) for k, v in d.items() if k != v)))

    def __post_init__(self):
        object.__setattr__(self, "mapping", tuple(sorted(set(self.mapping))))
        seen = set()
        for old, _new in self.mapping:
            if old in seen:
                raise ValueError(f"relabelling maps {old} twice")
            seen.add(old)

    def as_dict(self) -> dict[str, str]:
        return dict(self.mapping)

    def apply_base(self, b: str) -> str:
        return self.as_dict().get(b, b)

    def apply(self, a: Action) -> Action:
        if a.is_tau:
            return a
        return Action(a.kind, self.apply_base(a.base))

    def apply_step(self, s: Step) -> Step:
        return Step.of(self.apply(a) for a in s)

    def compose(self, inner: "RelabelFn") -> "RelabelFn":
        """self after inner, as a single finite renaming."""
        dom = {o for o, _ in inner.mapping} | {o for o, _ in self.mapping}
        return RelabelFn.of({b: self.apply_base(inner.apply_base(b)) for b in dom})

    def inverse_image(self, bases: frozenset[str]) -> frozenset[str]:
        cand = {o for o, _ in self.mapping} | set(bases)
        return frozenset(b for b in cand if self.apply_base(b) in bases)

    def is_identity(self) -> bool:
        return not self.mapping

    def render(self) -> str:
        return ", ".join(f"{new}/{old}" for old, new in self.mapping)


class Process:
    """Base class of all term constructors."""

    __slots__ = ()


@dataclass(frozen=True)
class Nil(Process):
    pass


@dataclass(frozen=True)
class Prefix(Process):
    action: Action
    body: Process


@dataclass(frozen=True)
class MultiPrefix(Process):
    step: Step
    body: Process

    def __post_init__(self):
        if len(self.step) == 0:
            raise ValueError("multi-prefix needs at least one action")
        if self.step.has_complementary_pair():
            raise ComplementaryPrefix(
                "multi-prefix may not contain complementary actions"
            )


@dataclass(frozen=True)
class Sum(Process):
    left: Process
    right: Process


@dataclass(frozen=True)
class Par(Process):
    left: Process
    right: Process


@dataclass(frozen=True)
class Restrict(Process):
    body: Process
    labels: frozenset[str]


@dataclass(frozen=True)
class Relabel(Process):
    body: Process
    fn: RelabelFn


@dataclass(frozen=True)
class Const(Process):
    name: str


NIL = Nil()


def children(p: Process) -> tuple[Process, ...]:
    if isinstance(p, (Prefix, MultiPrefix)):
        return (p.body,)
    if isinstance(p, (Sum, Par)):
        return (p.left, p.right)
    if isinstance(p, (Restrict, Relabel)):
        return (p.body,)
    return ()


def constants_of(p: Process) -> frozenset[str]:
    out: set[str] = set()
    stack = [p]
    while stack:
        q = stack.pop()
        if isinstance(q, Const):
            out.add(q.name)
        stack.extend(children(q))
    return frozenset(out)


@dataclass
class DefEnv:
    """Defining equations for process constants."""

    defs: dict[str, Process] = field(default_factory=dict)

    def define(self, name: str, body: Process) -> None:
        if name in self.defs:
            raise DuplicateDefinition(name)
        self.defs[name] = body

    def lookup(self, name: str) -> Process:
        try:
            return self.defs[name]
        except KeyError:
            raise UnboundConstant(name) from None

    def names(self) -> tuple[str, ...]:
        return tuple(self.defs)

    def check_closed(self, extra_terms: Iterable[Process] = ()) -> None:
        for body in list(self.defs.values()) + list(extra_terms):
            for c in sorted(constants_of(body)):
                if c not in self.defs:
                    raise UnboundConstant(c)

    def check_guarded(self) -> None:
        for a in self.defs:
            if not weakly_guarded(a, self.defs[a], self):
                raise UnguardedRecursion(a)

    def validate(self, extra_terms: Iterable[Process] = ()) -> None:
        self.check_closed(extra_terms)
        self.check_guarded()


EMPTY_ENV = DefEnv()


def weakly_guarded(x: str, e: Process, env: DefEnv) -> bool:
    """True iff every occurrence of the constant x in e sits beneath a
    prefix or multi-prefix, unfolding other constants as needed."""

    def unguarded(p: Process, seen: frozenset[str]) -> bool:
        if isinstance(p, (Nil, Prefix, MultiPrefix)):
            return False
        if isinstance(p, (Sum, Par)):
            return unguarded(p.left, seen) or unguarded(p.right, seen)
        if isinstance(p, (Restrict, Relabel)):
            return unguarded(p.body, seen)
        if isinstance(p, Const):
            if p.name == x:
                return True
            if p.name in seen or p.name not in env.defs:
                return False
            return unguarded(env.defs[p.name], seen | {p.name})
        raise TypeError(p)

    return not unguarded(e, frozenset())


def _contains(p: Process, x: str) -> bool:
    if isinstance(p, Const):
        return p.name == x
    return any(_contains(c, x) for c in children(p))


def guarded_and_sequential(x: str, e: Process, env: DefEnv) -> bool:
    """The premise of unique solutions up to weak equivalence: every
    occurrence of x lies under a prefix of visible actions, and every
    subexpression containing x is a prefix, multi-prefix, or sum."""

    def sequential(p: Process) -> bool:
        if not _contains(p, x):
            return True
        if isinstance(p, Const):
            return True
        if isinstance(p, (Prefix, MultiPrefix)):
            return sequential(p.body)
        if isinstance(p, Sum):
            return sequential(p.left) and sequential(p.right)
        return False

    def has_unguarded(p: Process) -> bool:
        # an occurrence is guarded once it sits inside a prefix of labels
        if isinstance(p, Prefix):
            if not p.action.is_tau:
                return False
            return has_unguarded(p.body)
        if isinstance(p, MultiPrefix):
            if all(not a.is_tau for a in p.step):
                return False
            return has_unguarded(p.body)
        if isinstance(p, (Sum, Par)):
            return has_unguarded(p.left) or has_unguarded(p.right)
        if isinstance(p, (Restrict, Relabel)):
            return has_unguarded(p.body)
        if isinstance(p, Const):
            return p.name == x
        return False

    return sequential(e) and not has_unguarded(e)


def sort(p: Process, env: DefEnv | None = None) -> frozenset[Action]:
    """The set of visible actions a term may ever perform, with constant
    sorts taken as the least fixed point of the defining equations."""
    env = env or EMPTY_ENV
    consts: dict[str, frozenset[Action]] = {a: frozenset() for a in env.defs}

    def lab(q: Process) -> frozenset[Action]:
        if isinstance(q, Nil):
            return frozenset()
        if isinstance(q, Prefix):
            body = lab(q.body)
            return body if q.action.is_tau else body | {q.action}
        if isinstance(q, MultiPrefix):
            return lab(q.body) | {a for a in q.step if not a.is_tau}
        if isinstance(q, (Sum, Par)):
            return lab(q.left) | lab(q.right)
        if isinstance(q, Restrict):
            return frozenset(a for a in lab(q.body) if a.base not in q.labels)
        if isinstance(q, Relabel):
            return frozenset(q.fn.apply(a) for a in lab(q.body))
        if isinstance(q, Const):
            if q.name not in consts:
                raise UnboundConstant(q.name)
            return consts[q.name]
        raise TypeError(q)

    changed = True
    while changed:
        changed = False
        for a in env.defs:
            new = lab(env.defs[a])
            if new != consts[a]:
                consts[a] = new
                changed = True
    return lab(p)


def sort_bases(p: Process, env: DefEnv | None = None) -> frozenset[str]:
    return frozenset(a.base for a in sort(p, env))
