import pytest
from hypothesis import given, settings

from ctcwb.errors import SourceError
from ctcwb.syntax import parse_program, parse_term, pretty, pretty_program
from ctcwb.terms import (
    NIL,
    TAU,
    Const,
    MultiPrefix,
    Par,
    Prefix,
    RelabelFn,
    Relabel,
    Restrict,
    Step,
    Sum,
    coname,
    name,
)

from strategies import terms


def test_parse_prefix_chain():
    assert parse_term("a.'b.tau.nil") == Prefix(
        name("a"), Prefix(coname("b"), Prefix(TAU, NIL))
    )


def test_parse_multiprefix():
    assert parse_term("(a || 'b || tau).nil") == MultiPrefix(
        Step.of([name("a"), coname("b"), TAU]), NIL
    )


def test_parse_singleton_multiprefix_distinct_from_prefix():
    assert parse_term("(a).nil") == MultiPrefix(Step.of([name("a")]), NIL)
    assert parse_term("(a).nil") != parse_term("a.nil")


def test_parse_precedence():
    # postfix > prefix > composition > sum
    t = parse_term("a.nil \\ {a} || b.nil + c.nil")
    assert t == Sum(
        Par(Prefix(name("a"), Restrict(NIL, frozenset({"a"}))), Prefix(name("b"), NIL)),
        Prefix(name("c"), NIL),
    )


def test_restriction_binds_to_atom():
    t = parse_term("(a.nil || b.nil) \\ {a,b}")
    assert isinstance(t, Restrict)
    assert t.labels == frozenset({"a", "b"})


def test_relabelling_new_over_old():
    t = parse_term("(a.nil)[b/a, d/c]")
    assert t == Relabel(Prefix(name("a"), NIL), RelabelFn.of({"a": "b", "c": "d"}))
    # postfixes bind tighter than prefixing
    assert parse_term("a.nil[b/a]") == Prefix(
        name("a"), Relabel(NIL, RelabelFn.of({"a": "b"}))
    )


def test_parse_parenthesised_sum_under_prefix():
    t = parse_term("a.(b.nil + c.nil)")
    assert t == Prefix(name("a"), Sum(Prefix(name("b"), NIL), Prefix(name("c"), NIL)))


def test_parse_constants():
    assert parse_term("Buff") == Const("Buff")


def test_complementary_multiprefix_is_a_parse_error():
    with pytest.raises(SourceError):
        parse_term("(a || 'a).nil")


def test_error_has_position():
    with pytest.raises(SourceError) as e:
        parse_term("a.\nb.")
    assert e.value.line == 2


def test_unexpected_character():
    with pytest.raises(SourceError):
        parse_term("a.nil ? b.nil")


def test_trailing_input():
    with pytest.raises(SourceError):
        parse_term("nil nil")


def test_parse_program_with_comments():
    env = parse_program(
        """
        # a one-place buffer
        Buff = (a || b).Buffp;  # accept both ports
        Buffp = ('c || 'd).Buff;
        """
    )
    assert set(env.names()) == {"Buff", "Buffp"}


def test_parse_program_duplicate():
    with pytest.raises(SourceError):
        parse_program("A = nil; A = nil;")


def test_parse_program_unbound():
    from ctcwb.errors import UnboundConstant

    with pytest.raises(UnboundConstant):
        parse_program("A = a.B;")


def test_parse_program_unguarded():
    from ctcwb.errors import UnguardedRecursion

    with pytest.raises(UnguardedRecursion):
        parse_program("A = A + a.nil;")


@settings(max_examples=200)
@given(terms())
def test_print_parse_roundtrip(p):
    assert parse_term(pretty(p)) == p


@settings(max_examples=100)
@given(terms())
def test_parse_print_fixpoint(p):
    s = pretty(p)
    assert pretty(parse_term(s)) == s


def test_program_roundtrip():
    src = "A = a.A;\nB = (a || b).nil \\ {a};\n"
    env = parse_program(src)
    assert pretty_program(env) == src
