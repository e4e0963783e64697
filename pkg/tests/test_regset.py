import itertools
import re

import pytest
from hypothesis import given
from hypothesis import strategies as st

from calang.core import Alphabet
from calang.errors import AlphabetMismatch, PatternSyntaxError, QuiescentInPattern, UnknownSymbol
from calang.regset import contains, enumerate_words, literal, parse_pattern

AB = Alphabet(("_", "a", "b"))
ABC = Alphabet(("_", "a", "b", "c"))


def words(text):
    return [tuple(w) for w in text.split()]


class TestExamples:
    def test_a_star_ab(self):
        rs = parse_pattern("a*ab", AB)
        assert enumerate_words(rs, 4) == words("ab aab aaab")
        assert contains(rs, "aab") and contains(rs, "ab") and not contains(rs, "ba")

    def test_literal(self):
        rs = parse_pattern("abc", ABC)
        assert enumerate_words(rs, 3) == [tuple("abc")]
        assert enumerate_words(rs, 2) == []

    def test_union_star(self):
        rs = parse_pattern("a(b|c)*", ABC)
        assert enumerate_words(rs, 2) == words("a ab ac")
        assert contains(rs, "abcbc")

    def test_epsilon_and_group_star(self):
        assert enumerate_words(parse_pattern("(ab)*", AB), 4) == [()] + words("ab abab")
        assert enumerate_words(parse_pattern("ε", AB), 3) == [()]
        assert enumerate_words(parse_pattern("()", AB), 3) == [()]

    def test_empty_set(self):
        rs = parse_pattern("∅", AB)
        assert enumerate_words(rs, 5) == []
        assert not rs.has_word_longer_than(0)

    def test_plus(self):
        assert enumerate_words(parse_pattern("aab+", AB), 4) == words("aab aabb")

    def test_multichar_tokens(self):
        al = Alphabet(("_", "a-1", "a", "b"))
        rs = parse_pattern("a-1 a* b", al)
        assert contains(rs, ("a-1", "a", "b"))
        assert enumerate_words(rs, 2) == [("a-1", "b")]

    def test_literal_helper(self):
        assert enumerate_words(literal("ab", AB), 5) == [tuple("ab")]
        assert enumerate_words(literal("", AB), 5) == [()]


class TestErrors:
    @pytest.mark.parametrize("text", ["(ab", "a)", "*a", "a|*"])
    def test_syntax(self, text):
        with pytest.raises(PatternSyntaxError):
            parse_pattern(text, AB)

    def test_position_reported(self):
        with pytest.raises(PatternSyntaxError) as err:
            parse_pattern("ab)", AB)
        assert err.value.position == 2

    def test_unknown_symbol(self):
        with pytest.raises(UnknownSymbol):
            parse_pattern("az", AB)

    def test_quiescent_forbidden(self):
        with pytest.raises(QuiescentInPattern):
            parse_pattern("a_b", AB)

    def test_contains_alphabet_mismatch(self):
        with pytest.raises(AlphabetMismatch):
            contains(parse_pattern("a", AB), "z")


class TestLongerWords:
    @pytest.mark.parametrize("text,n,expected", [
        ("ab", 1, True), ("ab", 2, False), ("a*", 50, True), ("a|bb", 1, True), ("a|bb", 2, False),
    ])
    def test_has_word_longer_than(self, text, n, expected):
        assert parse_pattern(text, AB).has_word_longer_than(n) is expected


# -- cross-check against Python's re on random patterns -------------------------

def pattern_trees(alphabet="ab"):
    leaves = st.sampled_from(list(alphabet))
    return st.recursive(
        leaves,
        lambda kids: st.one_of(
            st.tuples(st.just("cat"), kids, kids),
            st.tuples(st.just("alt"), kids, kids),
            st.tuples(st.just("star"), kids),
            st.tuples(st.just("plus"), kids),
        ),
        max_leaves=6,
    )


def show(tree):
    if isinstance(tree, str):
        return tree
    op = tree[0]
    if op == "cat":
        return f"({show(tree[1])})({show(tree[2])})"
    if op == "alt":
        return f"({show(tree[1])}|{show(tree[2])})"
    return f"({show(tree[1])})" + ("*" if op == "star" else "+")


@given(pattern_trees())
def test_matches_python_re(tree):
    text = show(tree)
    rs = parse_pattern(text, AB)
    rx = re.compile(text)
    expected = [w for n in range(6) for w in itertools.product("ab", repeat=n) if rx.fullmatch("".join(w))]
    got = enumerate_words(rs, 5)
    assert sorted(got, key=lambda w: (len(w), w)) == got
    assert got == expected
    assert all(contains(rs, w) == bool(rx.fullmatch("".join(w)))
               for n in range(6) for w in itertools.product("ab", repeat=n))


@given(pattern_trees(), st.integers(0, 4), st.integers(0, 4))
def test_enumeration_monotone(tree, n, m):
    rs = parse_pattern(show(tree), AB)
    lo, hi = sorted((n, m))
    assert set(enumerate_words(rs, lo)) <= set(enumerate_words(rs, hi))


@given(pattern_trees(), st.integers(0, 4))
def test_longer_word_detection(tree, n):
    rs = parse_pattern(show(tree), AB)
    expected = any(len(w) > n for w in enumerate_words(rs, n + 8))
    assert rs.has_word_longer_than(n) == expected
