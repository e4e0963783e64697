"""Small regular expressions over an alphabet's tokens, compiled to Thompson NFAs.

Grammar (whitespace between items is ignored)::

    union   := concat ('|' concat)*
    concat  := postfix*                 # empty concat denotes ε
    postfix := atom ('*' | '+')*
    atom    := TOKEN | '(' union ')' | 'ε' | '∅'

Tokens are matched greedily against the alphabet, longest first, so
multi-character symbols such as ``a-1`` work without separators.  ``∅`` is
the empty language.  The quiescent symbol is rejected: words of an initial
set are padded with it implicitly.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .core import Alphabet
from .errors import AlphabetMismatch, PatternSyntaxError, QuiescentInPattern, UnknownSymbol

EPSILON = "ε"
EMPTY = "∅"
_OPERATORS = "|*+()"


@dataclass(frozen=True)
class NFA:
    """Thompson automaton; ``edges[q]`` lists ``(label, target)`` with ``label=None`` for ε."""

    n_states: int
    start: int
    accept: int
    edges: tuple

    def closure(self, states: Iterable[int]) -> frozenset:
        seen = set(states)
        stack = list(seen)
        while stack:
            q = stack.pop()
            for label, t in self.edges[q]:
                if label is None and t not in seen:
                    seen.add(t)
                    stack.append(t)
        return frozenset(seen)

    def move(self, states: frozenset, symbol: int) -> frozenset:
        return self.closure(t for q in states for label, t in self.edges[q] if label == symbol)


class _Builder:
    def __init__(self):
        self.edges: list[list] = []

    def state(self) -> int:
        self.edges.append([])
        return len(self.edges) - 1

    def edge(self, a: int, label, b: int) -> None:
        self.edges[a].append((label, b))

    # fragments are (start, accept) pairs
    def literal(self, label):
        s, t = self.state(), self.state()
        if label is not EMPTY:
            self.edge(s, label, t)
        return s, t

    def concat(self, parts):
        if not parts:
            return self.literal(None)
        start, end = parts[0]
        for s, t in parts[1:]:
            self.edge(end, None, s)
            end = t
        return start, end

    def union(self, parts):
        if len(parts) == 1:
            return parts[0]
        s, t = self.state(), self.state()
        for a, b in parts:
            self.edge(s, None, a)
            self.edge(b, None, t)
        return s, t

    def star(self, frag, at_least_once=False):
        a, b = frag
        s, t = self.state(), self.state()
        self.edge(s, None, a)
        self.edge(b, None, t)
        self.edge(b, None, a)
        if not at_least_once:
            self.edge(s, None, t)
        return s, t


class _Parser:
    def __init__(self, text: str, alphabet: Alphabet):
        self.text = text
        self.alphabet = alphabet
        self.pos = 0
        self.tokens = sorted(alphabet.symbols, key=len, reverse=True)
        self.b = _Builder()

    def skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self):
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def parse(self):
        frag = self.union()
        if self.peek():
            raise PatternSyntaxError(f"unexpected {self.peek()!r}", self.text, self.pos)
        return frag

    def union(self):
        parts = [self.concat()]
        while self.peek() == "|":
            self.pos += 1
            parts.append(self.concat())
        return self.b.union(parts)

    def concat(self):
        parts = []
        while self.peek() and self.peek() not in "|)":
            parts.append(self.postfix())
        return self.b.concat(parts)

    def postfix(self):
        if self.peek() in ("*", "+"):
            raise PatternSyntaxError(f"nothing to repeat before {self.peek()!r}", self.text, self.pos)
        frag = self.atom()
        while self.peek() in ("*", "+") and self.peek():
            frag = self.b.star(frag, at_least_once=self.peek() == "+")
            self.pos += 1
        return frag

    def atom(self):
        ch = self.peek()
        if ch == "(":
            opened = self.pos
            self.pos += 1
            frag = self.union()
            if self.peek() != ")":
                raise PatternSyntaxError("unbalanced '('", self.text, opened)
            self.pos += 1
            return frag
        if ch == EPSILON:
            self.pos += 1
            return self.b.literal(None)
        if ch == EMPTY:
            self.pos += 1
            return self.b.literal(EMPTY)
        for tok in self.tokens:
            if self.text.startswith(tok, self.pos):
                if self.alphabet.index(tok) == self.alphabet.quiescent:
                    raise QuiescentInPattern("quiescent symbol in pattern", self.text, self.pos)
                self.pos += len(tok)
                return self.b.literal(self.alphabet.index(tok))
        raise UnknownSymbol(f"unknown symbol starting with {ch!r}", self.text, self.pos)


@dataclass(frozen=True)
class RegularSet:
    """A compiled pattern.  Use :func:`parse_pattern` to build one."""

    pattern: str
    alphabet: Alphabet
    nfa: NFA

    def __contains__(self, word) -> bool:
        return contains(self, word)

    def words(self, max_len: int) -> list:
        return enumerate_words(self, max_len)

    def has_word_longer_than(self, n: int) -> bool:
        """True if some accepted word is longer than ``n``.

        If one exists, one exists within ``n + |states|`` by pumping, so a
        bounded subset simulation decides it.
        """
        current = self.nfa.closure([self.nfa.start])
        for length in range(1, n + self.nfa.n_states + 2):
            current = frozenset().union(*(self.nfa.move(current, s) for s in self.alphabet.active))
            if not current:
                return False
            if length > n and self.nfa.accept in current:
                return True
        return False


def parse_pattern(text: str, alphabet: Alphabet) -> RegularSet:
    parser = _Parser(text, alphabet)
    start, accept = parser.parse()
    edges = tuple(tuple(e) for e in parser.b.edges)
    return RegularSet(text, alphabet, NFA(len(edges), start, accept, edges))


def contains(rs: RegularSet, word) -> bool:
    """NFA membership for a word given as a sequence of tokens."""
    idx = rs.alphabet.encode(word)
    states = rs.nfa.closure([rs.nfa.start])
    for x in idx:
        states = rs.nfa.move(states, x)
        if not states:
            return False
    return rs.nfa.accept in states


def _accepting_within(nfa: NFA, max_len: int) -> list:
    """``live[k]`` = states with an accepted continuation of exactly ``k`` symbols."""
    rev: dict[int, list] = {}
    for q, out in enumerate(nfa.edges):
        for label, t in out:
            rev.setdefault(t, []).append((label, q))

    def back_closure(states):
        seen = set(states)
        stack = list(seen)
        while stack:
            q = stack.pop()
            for label, p in rev.get(q, ()):
                if label is None and p not in seen:
                    seen.add(p)
                    stack.append(p)
        return frozenset(seen)

    live = [back_closure([nfa.accept])]
    for _ in range(max_len):
        prev = live[-1]
        pre = {p for q in prev for label, p in rev.get(q, ()) if label is not None}
        live.append(back_closure(pre))
    return live


def enumerate_words(rs: RegularSet, max_len: int) -> list:
    """All accepted words up to ``max_len``, shortlex in alphabet order."""
    if max_len < 0:
        raise ValueError("max_len must be non-negative")
    nfa = rs.nfa
    live = _accepting_within(nfa, max_len)
    symbols = rs.alphabet.active
    out = []
    start = nfa.closure([nfa.start])
    for length in range(max_len + 1):
        stack = [((), start)]
        found = []
        while stack:
            prefix, states = stack.pop()
            remaining = length - len(prefix)
            if remaining == 0:
                if nfa.accept in states:
                    found.append(prefix)
                continue
            for s in reversed(symbols):
                nxt = nfa.move(states, s)
                if nxt & live[remaining - 1]:
                    stack.append((prefix + (s,), nxt))
        out.extend(rs.alphabet.decode(w) for w in found)
    return out


def literal(word, alphabet: Alphabet) -> RegularSet:
    """The singleton set ``{word}``."""
    word = tuple(word)
    for tok in word:
        if alphabet.index(tok) == alphabet.quiescent:
            raise QuiescentInPattern("quiescent symbol in pattern", " ".join(word), 0)
    text = " ".join(word) if word else EPSILON
    return parse_pattern(text, alphabet)


__all__ = [
    "AlphabetMismatch",
    "NFA",
    "RegularSet",
    "contains",
    "enumerate_words",
    "literal",
    "parse_pattern",
]
