import pytest
from hypothesis import given, settings, strategies as st

from qdirac import expr, su2
from qdirac.errors import ParseError
from qdirac.expr import Atom, BinOp, Neg, Num, Pow, Star

Q, K = 0.5, 16


def test_two_product_terms():
    node = expr.parse("a* * c - 0.5 * c * a*")
    assert isinstance(node, BinOp) and node.op == "-"
    assert node.left == BinOp("*", Star(Atom("a")), Atom("c"))
    assert node.right == BinOp("*", BinOp("*", Num(0.5), Atom("c")), Star(Atom("a")))


def test_touching_star_is_adjoint():
    assert expr.parse("z*z") == BinOp("*", Star(Atom("z")), Atom("z"))
    assert expr.parse("z * z") == BinOp("*", Atom("z"), Atom("z"))
    assert expr.parse("(a + c)*") == Star(BinOp("+", Atom("a"), Atom("c")))
    # numbers have no adjoint postfix
    assert expr.parse("2*a") == BinOp("*", Num(2.0), Atom("a"))


def test_juxtaposition_multiplies():
    assert expr.parse("q c a*") == expr.parse("q * c * a*")


def test_powers():
    assert expr.parse("y^-2") == Pow(Atom("y"), -2)
    assert expr.parse("-a^2") == Neg(Pow(Atom("a"), 2))


def test_relation_evaluates_to_one():
    x = expr.evaluate(expr.parse("z*z + y^2"), Q, K)
    assert su2.distance(x, su2.one(Q, K)) < 1e-15


def test_commutation_relation_vanishes():
    x = expr.evaluate(expr.parse("a c - q c a"), Q, K)
    assert su2.distance(x, su2.zero(Q, K)) < 1e-15


def test_circle_atoms():
    x = expr.evaluate(expr.parse("u^2 uinv + 3j"), Q, K)
    assert x.modes == [0, 1]
    assert expr.evaluate(expr.parse("y yinv"), Q, K).modes == [0]
    assert su2.distance(expr.evaluate(expr.parse("y yinv"), Q, K), su2.one(Q, K)) == 0


def test_indicator():
    x = expr.evaluate(expr.parse("ind(2)"), Q, K)
    assert x.part(0).table(0)[2] == 1


@pytest.mark.parametrize("text, offset", [("(", 1), ("a +", 3), ("a ) ", 2), ("a^b", 2), ("a ^ 1.5", 4), ("é a", 0),
                                          ("a # b", 2)])
def test_syntax_errors_have_byte_offsets(text, offset):
    with pytest.raises(ParseError) as info:
        expr.parse(text)
    assert info.value.offset == offset
    assert info.value.expected


def test_byte_offset_counts_utf8():
    with pytest.raises(ParseError) as info:
        expr.parse("a + é")
    assert info.value.offset == 4
    with pytest.raises(ParseError) as info:
        expr.parse("é + (")
    assert info.value.offset == 0
    with pytest.raises(ParseError) as info:
        expr.parse("ind(2) + yé")
    assert info.value.offset == 10


def test_unknown_atom():
    with pytest.raises(ParseError) as info:
        expr.parse("a + w")
    assert info.value.offset == 4
    assert "a" in info.value.expected


def test_negative_powers_only_for_invertible():
    with pytest.raises(ParseError):
        expr.parse("a^-1")
    expr.parse("u^-3")


# -- printer roundtrip ------------------------------------------------------------------

_atoms = st.sampled_from(["a", "c", "z", "y", "yinv", "s", "u", "uinv", "one", "q", "i"]).map(Atom)
_nums = st.floats(0, 100, allow_nan=False).map(lambda v: Num(complex(v))) | \
    st.floats(0, 100, allow_nan=False).map(lambda v: Num(complex(0, v)))


def _extend(children):
    return st.one_of(
        st.builds(lambda x: Star(x), children.filter(lambda n: not isinstance(n, Num) and n not in (Atom("q"), Atom("i")))),
        st.builds(Neg, children),
        st.builds(lambda o, l, r: BinOp(o, l, r), st.sampled_from(["+", "-", "*"]), children, children),
        st.builds(Pow, children.filter(lambda n: not isinstance(n, Num)), st.integers(0, 4)),
    )


_trees = st.recursive(_atoms | _nums, _extend, max_leaves=8)


@settings(max_examples=200, deadline=None)
@given(_trees)
def test_parse_print_roundtrip(tree):
    text = expr.to_text(tree)
    assert expr.parse(text) == tree
    assert expr.to_text(expr.parse(text)) == text


@settings(max_examples=40, deadline=None)
@given(_trees.filter(lambda t: "yinv" not in repr(t) and "Pow" not in repr(t)))
def test_printed_text_evaluates_identically(tree):
    x = expr.evaluate(tree, Q, 12)
    y = expr.evaluate(expr.parse(expr.to_text(tree)), Q, 12)
    assert su2.distance(x, y) <= 1e-12 * max(1.0, max((abs(v).max() for p in x.parts.values()
                                                       for v in p.values.values()), default=1.0))
