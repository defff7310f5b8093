import pytest
from hypothesis import assume, given, settings

from ctcwb.errors import StateBoundExceeded
from ctcwb.semantics import (
    Lts,
    StepSemantics,
    build_lts,
    combine,
    lts_dot,
    lts_struct,
    lts_text,
    saturate_weak,
)
from ctcwb.syntax import parse_program, parse_term, pretty
from ctcwb.terms import DefEnv, Relabel, Step, TAU, children, coname, name, sort

from strategies import terms


def steps_of(src, env=None):
    sem = StepSemantics(env)
    return {(s, pretty(q)) for s, q in sem.steps(parse_term(src))}


def labels_of(src, env=None):
    return {s for s, _ in steps_of(src, env)}


def test_prefix_fires_single_action():
    assert steps_of("a.nil") == {(Step.of([name("a")]), "nil")}


def test_multiprefix_fires_jointly():
    assert labels_of("(a || b).nil") == {Step.of([name("a"), name("b")])}


def test_sum_offers_both():
    assert labels_of("a.nil + b.nil") == {Step.of([name("a")]), Step.of([name("b")])}


def test_par_moves_alone_only_when_other_is_stuck():
    assert labels_of("a.nil || nil") == {Step.of([name("a")])}
    assert labels_of("nil || a.nil") == {Step.of([name("a")])}


def test_par_joint_step_no_interleaving():
    # both components active: the only transition is the joint step
    assert labels_of("a.nil || b.nil") == {Step.of([name("a"), name("b")])}


def test_par_synchronisation_is_forced():
    assert labels_of("a.nil || 'a.nil") == {Step.of([TAU])}


def test_par_mixed_synchronisation():
    assert labels_of("a.nil || ('a || b).nil") == {Step.of([TAU, name("b")])}


def test_combine_matches_pairwise():
    s = Step.of([name("a"), name("a")])
    t = Step.of([coname("a")])
    assert combine(s, t) == Step.of([TAU, name("a")])
    assert combine(Step.of([name("a")]), Step.of([coname("a")])) == Step.of([TAU])


def test_combine_associative_samples():
    xs = [
        Step.of([name("a")]),
        Step.of([coname("a")]),
        Step.of([name("a"), name("b")]),
        Step.of([coname("b"), TAU]),
    ]
    for s in xs:
        for t in xs:
            for u in xs:
                assert combine(combine(s, t), u) == combine(s, combine(t, u))


def test_restriction_blocks_unmatched():
    assert labels_of("(a.nil || b.nil) \\ {a}") == set()
    assert labels_of("(a.nil || 'a.nil) \\ {a}") == {Step.of([TAU])}


def test_relabelling_applies_to_steps():
    assert labels_of("((a || 'b).nil)[c/a]") == {Step.of([name("c"), coname("b")])}


def test_constant_unfolds():
    env = parse_program("A = a.A;")
    sem = StepSemantics(env)
    from ctcwb.terms import Const

    (s, q), = sem.steps(Const("A"))
    assert s == Step.of([name("a")]) and q == Const("A")


def test_weak_steps_absorb_silent_moves():
    sem = StepSemantics()
    p = parse_term("tau.a.tau.b.nil")
    ws = sem.weak_steps(p)
    labels = {s for s, _ in ws}
    assert Step.of([name("a")]) in labels
    assert all(len(s.observable()) == len(s) for s in labels)


def test_weak_steps_erase_tau_from_compound_steps():
    sem = StepSemantics()
    p = parse_term("(tau || a).nil")
    assert {s for s, _ in sem.weak_steps(p)} == {Step.of([name("a")])}


def test_build_lts_and_exports():
    env = parse_program("A = a.b.A;")
    from ctcwb.terms import Const

    lts = build_lts(Const("A"), env)
    assert len(lts.states) == 2
    text = lts_text(lts)
    assert "state 0 A" in text and "trans 0 a 1" in text
    assert lts_dot(lts).startswith("digraph")
    assert '"step"' in lts_struct(lts) or '"transitions"' in lts_struct(lts)


def test_build_lts_respects_bound():
    env = parse_program("A = a.(A || A);")
    from ctcwb.terms import Const

    with pytest.raises(StateBoundExceeded):
        build_lts(Const("A"), env, max_states=20)


def test_build_lts_deterministic():
    p = parse_term("(a.nil + b.c.nil) || 'a.nil")
    l1, l2 = build_lts(p), build_lts(p)
    assert lts_text(l1) == lts_text(l2)
    assert l1.transitions == l2.transitions


def test_saturate_weak_has_empty_selfloops():
    lts = build_lts(parse_term("tau.a.nil"))
    weak = saturate_weak(lts)
    empty = Step()
    assert (0, empty, 0) in weak.transitions
    assert (0, empty, 1) in weak.transitions  # through the silent move
    assert any(s == Step.of([name("a")]) and i == 0 for i, s, j in weak.transitions)


@settings(max_examples=120, deadline=None)
@given(terms())
def test_sorts_bound_transitions(p):
    # every visible action of every reachable transition is in the sort,
    # and sorts only shrink along transitions
    sem = StepSemantics()
    s0 = sort(p)
    seen = {p}
    frontier = [p]
    depth = 0
    while frontier and depth < 3:
        nxt = []
        for q in frontier:
            for s, r in sem.steps(q):
                assert {a for a in s if not a.is_tau} <= s0
                assert sort(r) <= sort(q)
                if r not in seen:
                    seen.add(r)
                    nxt.append(r)
        frontier = nxt
        depth += 1


def _has_relabel(p):
    return isinstance(p, Relabel) or any(_has_relabel(c) for c in children(p))


@settings(max_examples=80, deadline=None)
@given(terms())
def test_steps_never_contain_complementary_pairs(p):
    # composition matches complementary occurrences away; only a
    # relabelling that merges two bases can reintroduce a pair
    assume(not _has_relabel(p))
    sem = StepSemantics()
    for s, _ in sem.steps(p):
        assert not s.has_complementary_pair()
