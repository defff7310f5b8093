import pytest

from ctcwb.equiv import check, check_implications, hp_bisim, hhp_bisim, pomset_bisim, step_bisim
from ctcwb.syntax import parse_program, parse_term
from ctcwb.terms import Const


def t(src):
    return parse_term(src)


def test_step_bisim_reflexive():
    r = step_bisim(t("a.b.nil + c.nil"), t("a.b.nil + c.nil"))
    assert r.equivalent


def test_step_bisim_sum_commutes():
    assert step_bisim(t("a.nil + b.nil"), t("b.nil + a.nil")).equivalent


def test_step_bisim_distinguishes():
    r = step_bisim(t("a.b.nil"), t("a.c.nil"))
    assert not r.equivalent
    assert r.evidence  # a path ending in the unmatched step
    assert r.evidence[-1] in ("b", "c")


def test_step_bisim_multiset_labels():
    # (a||a).nil steps with a two-element multiset; a.a.nil cannot
    r = step_bisim(t("(a || a).nil"), t("a.a.nil"))
    assert not r.equivalent


def test_milner_interleaving_fails_all_strong_flavours():
    lhs = t("a.nil || b.nil")
    rhs = t("a.b.nil + b.a.nil")
    for kind in ("step", "pomset", "hp", "hhp"):
        r = check(kind, lhs, rhs, strength="strong", depth=4)
        assert not r.equivalent, kind
    r = step_bisim(lhs, rhs)
    assert r.evidence == ["a,b"]


def test_weak_step_absorbs_tau():
    assert step_bisim(t("tau.a.nil"), t("a.nil"), strength="weak").equivalent
    assert not step_bisim(t("tau.a.nil"), t("a.nil"), strength="strong").equivalent


def test_weak_step_tau_choice_law():
    p = t("a.(b.nil + tau.c.nil) + a.c.nil")
    q = t("a.(b.nil + tau.c.nil)")
    assert step_bisim(p, q, strength="weak").equivalent


def test_weak_step_not_too_coarse():
    assert not step_bisim(t("a.nil + b.nil"), t("a.nil"), strength="weak").equivalent
    assert not step_bisim(t("tau.a.nil"), t("tau.b.nil"), strength="weak").equivalent


def test_pomset_bisim_separates_sequence_from_parallel():
    assert not pomset_bisim(t("a.b.nil"), t("a.nil || b.nil"), depth=3).equivalent


def test_pomset_bisim_parallel_commutes():
    assert pomset_bisim(t("a.nil || b.c.nil"), t("b.c.nil || a.nil"), depth=4).equivalent


def test_hp_bisim_branching_time():
    p = t("a.(b.nil + c.nil)")
    q = t("a.b.nil + a.c.nil")
    assert not hp_bisim(p, q, depth=3).equivalent
    assert hp_bisim(p, p, depth=3).equivalent


def test_hp_weak_absorbs_tau():
    assert hp_bisim(t("tau.a.nil"), t("a.nil"), strength="weak", depth=3).equivalent
    assert hp_bisim(t("a.tau.b.nil"), t("a.b.nil"), strength="weak", depth=4).equivalent


def test_hhp_bisim_basic():
    assert hhp_bisim(t("a.nil || b.nil"), t("b.nil || a.nil"), depth=3).equivalent
    assert not hhp_bisim(t("a.nil || b.nil"), t("a.b.nil + b.a.nil"), depth=3).equivalent


def test_recursion_up_to_depth():
    env = parse_program("A = a.A; B = a.a.B;")
    assert step_bisim(Const("A"), Const("B"), env).equivalent
    assert hp_bisim(Const("A"), Const("B"), env, depth=4).equivalent


def test_weak_games_on_divergent_terms():
    # a silent self-loop makes the full unfolding truncate at every depth,
    # so the weak pomset/hp games fall back to the silent-closure graph
    env = parse_program("D = tau.D;")
    p = parse_term("a.nil || D")
    q = parse_term("a.D")
    assert pomset_bisim(p, q, env, "weak", depth=3).equivalent
    assert hp_bisim(p, q, env, "weak", depth=3).equivalent
    p2 = parse_term("a.b.nil || D")
    q2 = parse_term("b.a.nil || D")
    assert not pomset_bisim(p2, q2, env, "weak", depth=3).equivalent
    assert not hp_bisim(p2, q2, env, "weak", depth=3).equivalent


def test_weak_game_commitment_with_divergence():
    # answering an observable move may require committing to a silent
    # step that discards a branch, here in the closure-graph game
    env = parse_program("D = tau.D;")
    p = parse_term("(a.(b.nil + tau.c.nil) + a.c.nil) || D")
    q = parse_term("(a.(b.nil + tau.c.nil)) || D")
    assert pomset_bisim(p, q, env, "weak", depth=4).equivalent
    assert hp_bisim(p, q, env, "weak", depth=4).equivalent


def test_check_implications_consistent():
    out = check_implications(t("a.nil || b.nil"), t("b.nil || a.nil"), depth=3)
    assert out["violations"] == []
    assert out["strong"]["hhp"] and out["weak"]["step"]

    out2 = check_implications(t("tau.a.nil"), t("a.nil"), depth=3)
    assert out2["violations"] == []
    assert not out2["strong"]["step"] and out2["weak"]["hp"]
