import pytest
from hypothesis import given, settings

from ctcwb.errors import StateBoundExceeded
from ctcwb.events import Pomset, es_dot, es_text, unfold
from ctcwb.semantics import StepSemantics
from ctcwb.syntax import parse_program, parse_term
from ctcwb.terms import Const, Step, TAU, name

from strategies import terms


def u(src, depth=6, env=None):
    return unfold(parse_term(src), env, depth=depth)


def nconfigs(src, depth=6):
    return len(u(src, depth).configurations())


def test_sequence_has_chain_configurations():
    # a.b.nil: {}, {a}, {a,b}
    assert nconfigs("a.b.nil") == 3


def test_parallel_has_product_configurations():
    assert nconfigs("a.nil || b.nil") == 4


def test_sum_has_conflict():
    assert nconfigs("a.nil + b.nil") == 3
    uf = u("a.nil + b.nil")
    assert len(uf.conflicts()) == 1


def test_multiprefix_events_concurrent_jointly_cause_body():
    uf = u("(a || b).c.nil")
    assert nconfigs("(a || b).c.nil") == 5
    evs = {e.label.render(): e for e in uf.events.values()}
    assert evs["c"].causes == frozenset({evs["a"].eid, evs["b"].eid})
    assert not uf.le(evs["a"].eid, evs["b"].eid)


def test_synchronisation_is_forced_into_a_single_silent_event():
    # complementary prefixes must pair up, so neither fires unsynchronised
    uf = u("a.nil || 'a.nil")
    labels = sorted(e.label.render() for e in uf.events.values())
    assert labels == ["tau"]
    assert len(uf.configurations()) == 2


def test_sync_pairing_choices_are_conflicting_events():
    uf = u("(a.nil || a.nil) || 'a.nil")
    labels = sorted(e.label.render() for e in uf.events.values())
    assert labels == ["a", "a", "tau", "tau"]
    taus = [e.eid for e in uf.events.values() if e.is_tau]
    assert (min(taus), max(taus)) in uf.conflicts()
    # each pairing leaves the other component free, never both at once
    assert len(uf.configurations()) == 7


def test_sync_causes_are_union_of_both_sides():
    uf = u("a.c.nil || b.'c.nil")
    evs = {e.label.render(): e for e in uf.events.values()}
    tau_ev = next(e for e in uf.events.values() if e.is_tau)
    assert tau_ev.causes == frozenset({evs["a"].eid, evs["b"].eid})


def test_restriction_prunes_unmatched_events():
    uf = u("(a.nil || 'a.nil) \\ {a}")
    assert [e.label for e in uf.events.values()] == [TAU]
    assert len(uf.configurations()) == 2


def test_conflict_is_hereditary():
    uf = u("a.nil + b.c.nil")
    evs = {e.label.render(): e for e in uf.events.values()}
    cs = uf.conflicts()
    a, b, c = evs["a"].eid, evs["b"].eid, evs["c"].eid
    assert (min(a, b), max(a, b)) in cs
    assert (min(a, c), max(a, c)) in cs


def test_depth_bound_truncates_recursion():
    env = parse_program("A = a.A;")
    uf = unfold(Const("A"), env, depth=3)
    assert len(uf.events) == 3
    assert len(uf.configurations()) == 4


def test_event_budget():
    env = parse_program("A = a.(A || A);")
    with pytest.raises(StateBoundExceeded):
        unfold(Const("A"), env, depth=6, max_events=50)


def test_unfolding_deterministic():
    src = "(a.nil + b.c.nil) || ('a || c).nil"
    assert es_text(u(src)) == es_text(u(src))
    assert es_dot(u(src)) == es_dot(u(src))


def test_pomset_transitions_distinguish_order():
    lhs = u("a.nil || b.nil")
    rhs = u("a.b.nil + b.a.nil")
    big = lambda uf: [p for p, _ in uf.pomset_transitions(frozenset(), 2) if len(p.labels) == 2]
    lp = big(lhs)
    rp = big(rhs)
    assert len(lp) == 1 and lp[0].is_step
    assert all(not p.is_step for p in rp)
    assert not any(p.iso(q) for p in lp for q in rp)


def test_pomset_iso_respects_labels():
    p1 = Pomset((name("a"), name("b")), frozenset({(0, 1)}))
    p2 = Pomset((name("b"), name("a")), frozenset({(1, 0)}))
    p3 = Pomset((name("a"), name("b")), frozenset({(1, 0)}))
    assert p1.iso(p2)
    assert not p1.iso(p3)
    assert not p1.iso(Pomset((name("a"), name("b")), frozenset()))


def test_weak_pomset_transitions_absorb_silent():
    uf = u("tau.a.tau.nil")
    ws = uf.pomset_transitions(frozenset(), 2, weak=True)
    labels = {p.render() for p, _ in ws}
    assert labels == {"{a}"}
    # the target configuration keeps absorbed silent events
    assert any(len(c) == 3 for _, c in ws)


@settings(max_examples=60, deadline=None)
@given(terms())
def test_strong_steps_appear_as_step_pomsets(p):
    # each strong step of the term shows up as a concurrent-step pomset
    # transition from the empty configuration
    sem = StepSemantics()
    uf = unfold(p, depth=5)
    pomsets = uf.pomset_transitions(frozenset(), 4)
    for s, _q in sem.steps(p):
        if len(s) > 4:
            continue
        want = sorted(a.render() for a in s)
        assert any(
            pm.is_step and sorted(a.render() for a in pm.labels) == want
            for pm, _ in pomsets
        ), f"step {s.render()} missing"


@settings(max_examples=40, deadline=None)
@given(terms())
def test_configurations_are_downward_closed_and_conflict_free(p):
    uf = unfold(p, depth=4)
    confl = uf.conflicts()
    for cfg in uf.configurations():
        for e in cfg:
            assert uf.events[e].causes <= cfg
        for a in cfg:
            for b in cfg:
                assert (min(a, b), max(a, b)) not in confl
