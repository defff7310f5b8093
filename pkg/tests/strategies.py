"""Shared hypothesis strategies for random closed terms."""

from hypothesis import strategies as st

from ctcwb.terms import (
    NIL,
    MultiPrefix,
    Par,
    Prefix,
    Relabel,
    RelabelFn,
    Restrict,
    Step,
    Sum,
    TAU,
    coname,
    name,
)

BASES = ["a", "b", "c"]

actions = st.one_of(
    st.sampled_from([name(b) for b in BASES]),
    st.sampled_from([coname(b) for b in BASES]),
    st.just(TAU),
)


def _multi_step(draw):
    acts = draw(st.lists(actions, min_size=1, max_size=3))
    while Step.of(acts).has_complementary_pair():
        acts = draw(st.lists(actions, min_size=1, max_size=3))
    return Step.of(acts)


multi_steps = st.composite(_multi_step)()

relabellings = st.builds(
    RelabelFn.of,
    st.dictionaries(st.sampled_from(BASES), st.sampled_from(BASES + ["d"]), max_size=2),
)

label_sets = st.frozensets(st.sampled_from(BASES), max_size=2)


def terms(max_depth: int = 4):
    return st.recursive(
        st.just(NIL),
        lambda sub: st.one_of(
            st.builds(Prefix, actions, sub),
            st.builds(MultiPrefix, multi_steps, sub),
            st.builds(Sum, sub, sub),
            st.builds(Par, sub, sub),
            st.builds(Restrict, sub, label_sets),
            st.builds(Relabel, sub, relabellings),
        ),
        max_leaves=max_depth * 2,
    )
