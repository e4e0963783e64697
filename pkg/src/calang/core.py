"""Alphabets, finite configurations, partial rule tables and the global map.

A configuration of the bi-infinite grid with finitely many non-quiescent cells
is stored as an ``offset`` plus the finite run of cells starting there.  Rule
tables are dense numpy arrays indexed by a base-``|alphabet|`` window code,
with ``-1`` marking windows on which the (partial) rule is undefined.

Window codes read the window left to right, so the cell at relative index
``-r`` is the most significant digit.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Iterable, Iterator, Mapping, NamedTuple, Sequence

import numpy as np

from .errors import (
    AlphabetMismatch,
    RuleFormatError,
    UndefinedNeighborhood,
    WidthBudgetExceeded,
)

#: Largest window space a dense rule table may occupy.
MAX_WINDOW_SPACE = 1 << 25

Word = tuple  # tuple of symbol tokens


@dataclass(frozen=True)
class Alphabet:
    """An ordered set of symbol tokens with one distinguished quiescent symbol."""

    symbols: tuple
    quiescent: int = 0
    _index: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        symbols = tuple(self.symbols)
        object.__setattr__(self, "symbols", symbols)
        if not symbols:
            raise ValueError("an alphabet needs at least one symbol")
        if any(not isinstance(s, str) or not s or s.split() != [s] for s in symbols):
            raise ValueError(f"symbol tokens must be non-empty strings without spaces: {symbols!r}")
        if len(set(symbols)) != len(symbols):
            raise ValueError(f"duplicate symbol tokens in {symbols!r}")
        if not 0 <= self.quiescent < len(symbols):
            raise ValueError(f"quiescent index {self.quiescent} out of range")
        object.__setattr__(self, "_index", {s: i for i, s in enumerate(symbols)})

    def __len__(self) -> int:
        return len(self.symbols)

    def __iter__(self) -> Iterator[str]:
        return iter(self.symbols)

    def __contains__(self, token) -> bool:
        return token in self._index

    @property
    def bottom(self) -> str:
        """Token of the quiescent symbol."""
        return self.symbols[self.quiescent]

    @property
    def active(self) -> tuple:
        """Indices of the non-quiescent symbols, in alphabet order."""
        return tuple(i for i in range(len(self.symbols)) if i != self.quiescent)

    @property
    def single_char(self) -> bool:
        return all(len(s) == 1 for s in self.symbols)

    def index(self, token: str) -> int:
        try:
            return self._index[token]
        except (KeyError, TypeError):
            raise AlphabetMismatch(f"symbol {token!r} is not in alphabet {self.symbols!r}") from None

    def encode(self, word: Iterable[str]) -> tuple:
        """Map tokens to indices.  A plain ``str`` is read one character per token."""
        return tuple(self.index(t) for t in word)

    def decode(self, indices: Iterable[int]) -> tuple:
        return tuple(self.symbols[i] for i in indices)

    def render(self, word: Iterable[str]) -> str:
        """Join tokens, with spaces only when some token is longer than one character."""
        return ("" if self.single_char else " ").join(word)

    def parse_word(self, text: str) -> tuple:
        """Inverse of :meth:`render`."""
        text = text.strip()
        tokens = tuple(text) if self.single_char and " " not in text else tuple(text.split())
        self.encode(tokens)
        return tokens


@dataclass(frozen=True)
class FiniteConfiguration:
    """``⊥^ω · cells · ⊥^ω`` with ``cells[0]`` sitting at grid index ``offset``.

    Cells are stored as alphabet indices.  Construction normalizes: leading
    and trailing quiescent cells are stripped and the offset adjusted, so two
    configurations are equal exactly when they agree on every grid cell.  The
    empty configuration is kept at offset 0.
    """

    alphabet: Alphabet
    offset: int
    cells: tuple

    def __post_init__(self):
        cells = tuple(int(x) for x in self.cells)
        n = len(self.alphabet)
        if any(not 0 <= x < n for x in cells):
            raise AlphabetMismatch(f"cell values {cells!r} outside alphabet of size {n}")
        q = self.alphabet.quiescent
        lo, hi = 0, len(cells)
        while lo < hi and cells[lo] == q:
            lo += 1
        while hi > lo and cells[hi - 1] == q:
            hi -= 1
        object.__setattr__(self, "cells", cells[lo:hi])
        object.__setattr__(self, "offset", int(self.offset) + lo if hi > lo else 0)

    @classmethod
    def from_word(cls, alphabet: Alphabet, word: Iterable[str], offset: int = 0) -> "FiniteConfiguration":
        return cls(alphabet, offset, alphabet.encode(word))

    @property
    def is_empty(self) -> bool:
        return not self.cells

    @property
    def width(self) -> int:
        return len(self.cells)

    @property
    def interval(self):
        """``(min, max)`` of the support, or ``None`` for the all-quiescent configuration."""
        if not self.cells:
            return None
        return (self.offset, self.offset + len(self.cells) - 1)

    @property
    def word(self) -> tuple:
        """The tokens between the two quiescent paddings."""
        return self.alphabet.decode(self.cells)

    def cell(self, z: int) -> int:
        k = z - self.offset
        if 0 <= k < len(self.cells):
            return self.cells[k]
        return self.alphabet.quiescent

    def shift(self, s: int) -> "FiniteConfiguration":
        return FiniteConfiguration(self.alphabet, self.offset + s, self.cells)

    def normalized(self) -> "FiniteConfiguration":
        return FiniteConfiguration(self.alphabet, self.offset, self.cells)

    def __str__(self) -> str:
        return f"{self.alphabet.render(self.word) or 'ε'}@{self.offset}"


class Metrics(NamedTuple):
    support: frozenset
    interval: tuple | None
    width: int


def metrics(c: FiniteConfiguration) -> Metrics:
    q = c.alphabet.quiescent
    support = frozenset(c.offset + k for k, x in enumerate(c.cells) if x != q)
    return Metrics(support, c.interval, c.width)


def shift_equivalent(c1: FiniteConfiguration, c2: FiniteConfiguration) -> bool:
    """True when ``c2`` is ``c1`` translated along the grid."""
    if c1.alphabet != c2.alphabet:
        raise AlphabetMismatch("configurations use different alphabets")
    return c1.cells == c2.cells


@lru_cache(maxsize=64)
def _place_values(base: int, radius: int) -> np.ndarray:
    return base ** np.arange(2 * radius, -1, -1, dtype=np.int64)


@lru_cache(maxsize=16)
def window_digits(base: int, radius: int) -> np.ndarray:
    """Array of shape ``(2r+1, base**(2r+1))``; row ``k`` holds digit ``k`` of every code."""
    n = base ** (2 * radius + 1)
    codes = np.arange(n, dtype=np.int64)
    digits = np.empty((2 * radius + 1, n), dtype=np.int16 if base > 127 else np.int8)
    for k, p in enumerate(_place_values(base, radius)):
        digits[k] = (codes // p) % base
    digits.flags.writeable = False
    return digits


def sliding_codes(cells: np.ndarray, base: int, radius: int) -> np.ndarray:
    """Codes of every full window of ``cells`` (length ``len(cells) - 2r``)."""
    width = 2 * radius + 1
    n = len(cells) - width + 1
    codes = np.zeros(max(n, 0), dtype=np.int64)
    for k, p in enumerate(_place_values(base, radius)):
        codes += cells[k : k + n].astype(np.int64) * p
    return codes


class RuleTable:
    """A partial local rule over windows of ``2r+1`` cells.

    ``table[code]`` is the output symbol index, or ``-1`` where undefined.
    Instances are immutable; the array is flagged read-only.
    """

    __slots__ = ("alphabet", "radius", "table", "_hash")

    def __init__(self, alphabet: Alphabet, radius: int, table: np.ndarray):
        if radius < 0:
            raise ValueError("radius must be non-negative")
        size = len(alphabet) ** (2 * radius + 1)
        table = np.asarray(table)
        if table.shape != (size,):
            raise ValueError(f"table must have shape ({size},), got {table.shape}")
        if table.size and (table.min() < -1 or table.max() >= len(alphabet)):
            raise AlphabetMismatch("rule outputs outside the alphabet")
        zero = self._all_quiescent_code(alphabet, radius)
        if table[zero] not in (-1, alphabet.quiescent):
            raise ValueError("the all-quiescent window must map to the quiescent symbol")
        table = table.astype(np.int16 if len(alphabet) > 127 else np.int8, copy=True)
        table.flags.writeable = False
        self.alphabet = alphabet
        self.radius = radius
        self.table = table
        self._hash = None

    # -- constructors -----------------------------------------------------
    @staticmethod
    def window_space(alphabet: Alphabet, radius: int) -> int:
        size = len(alphabet) ** (2 * radius + 1)
        if size > MAX_WINDOW_SPACE:
            raise ValueError(
                f"window space {len(alphabet)}^{2 * radius + 1} is too large for a dense table"
            )
        return size

    @classmethod
    def empty(cls, alphabet: Alphabet, radius: int) -> "RuleTable":
        return cls(alphabet, radius, np.full(cls.window_space(alphabet, radius), -1))

    @classmethod
    def from_entries(cls, alphabet: Alphabet, radius: int, entries) -> "RuleTable":
        """Build from ``{window: symbol}``; windows may be token tuples or strings."""
        table = np.full(cls.window_space(alphabet, radius), -1, dtype=np.int16)
        items = entries.items() if isinstance(entries, Mapping) else entries
        for window, value in items:
            code = encode_window(alphabet, radius, window)
            v = alphabet.index(value)
            if table[code] not in (-1, v):
                raise ValueError(f"conflicting outputs for window {tuple(window)!r}")
            table[code] = v
        return cls(alphabet, radius, table)

    @classmethod
    def from_function(cls, alphabet: Alphabet, radius: int, fn: Callable) -> "RuleTable":
        """Tabulate ``fn(window_tokens) -> token or None`` over every window."""
        size = cls.window_space(alphabet, radius)
        table = np.full(size, -1, dtype=np.int16)
        for code, window in enumerate(itertools.product(alphabet.symbols, repeat=2 * radius + 1)):
            out = fn(window)
            if out is not None:
                table[code] = alphabet.index(out)
        return cls(alphabet, radius, table)

    # -- queries ----------------------------------------------------------
    @staticmethod
    def _all_quiescent_code(alphabet: Alphabet, radius: int) -> int:
        return int(np.dot(np.full(2 * radius + 1, alphabet.quiescent), _place_values(len(alphabet), radius)))

    @property
    def window_length(self) -> int:
        return 2 * self.radius + 1

    @property
    def quiescent_code(self) -> int:
        return self._all_quiescent_code(self.alphabet, self.radius)

    @property
    def is_total(self) -> bool:
        return bool((self.table >= 0).all())

    def __len__(self) -> int:
        return int((self.table >= 0).sum())

    def defined_codes(self) -> np.ndarray:
        return np.flatnonzero(self.table >= 0)

    def encode(self, window) -> int:
        return encode_window(self.alphabet, self.radius, window)

    def decode(self, code: int) -> tuple:
        return decode_window(self.alphabet, self.radius, code)

    @property
    def entries(self) -> dict:
        """Defined part of the rule as ``{window_tokens: output_token}``."""
        syms = self.alphabet.symbols
        return {self.decode(int(c)): syms[int(self.table[c])] for c in self.defined_codes()}

    def restrict(self, codes: Iterable[int]) -> "RuleTable":
        """A copy defined only on the given window codes (where already defined)."""
        keep = np.full(len(self.table), -1, dtype=np.int16)
        idx = np.fromiter(codes, dtype=np.int64)
        keep[idx] = self.table[idx]
        return RuleTable(self.alphabet, self.radius, keep)

    def __eq__(self, other) -> bool:
        if not isinstance(other, RuleTable):
            return NotImplemented
        return (
            self.alphabet == other.alphabet
            and self.radius == other.radius
            and np.array_equal(self.table, other.table)
        )

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.alphabet, self.radius, self.table.tobytes()))
        return self._hash

    def __repr__(self) -> str:
        return f"RuleTable(r={self.radius}, |Σ|={len(self.alphabet)}, defined={len(self)})"


def encode_window(alphabet: Alphabet, radius: int, window) -> int:
    idx = alphabet.encode(window)
    if len(idx) != 2 * radius + 1:
        raise ValueError(f"window {tuple(window)!r} has length {len(idx)}, expected {2 * radius + 1}")
    base = len(alphabet)
    code = 0
    for x in idx:
        code = code * base + x
    return code


def decode_window(alphabet: Alphabet, radius: int, code: int) -> tuple:
    base = len(alphabet)
    out = []
    for _ in range(2 * radius + 1):
        code, d = divmod(code, base)
        out.append(alphabet.symbols[d])
    return tuple(reversed(out))


def apply_local(rule: RuleTable, window) -> str:
    """Evaluate the local rule on one window of tokens."""
    code = rule.encode(window)
    v = int(rule.table[code])
    if v < 0:
        raise UndefinedNeighborhood(tuple(window))
    return rule.alphabet.symbols[v]


def _check_alphabet(rule: RuleTable, c: FiniteConfiguration) -> None:
    if rule.alphabet != c.alphabet:
        raise AlphabetMismatch("rule and configuration use different alphabets")


def extended_window_codes(rule: RuleTable, c: FiniteConfiguration) -> np.ndarray:
    """Codes of the windows centred on ``min-r … max+r``; these are all ``step`` reads."""
    r = rule.radius
    q = c.alphabet.quiescent
    padded = np.full(len(c.cells) + 4 * r, q, dtype=np.int64)
    padded[2 * r : 2 * r + len(c.cells)] = c.cells
    return sliding_codes(padded, len(c.alphabet), r)


def step(rule: RuleTable, c: FiniteConfiguration) -> FiniteConfiguration:
    """Apply the global map once."""
    _check_alphabet(rule, c)
    if c.is_empty:
        return c
    codes = extended_window_codes(rule, c)
    out = rule.table[codes]
    bad = np.flatnonzero(out < 0)
    if bad.size:
        k = int(bad[0])
        raise UndefinedNeighborhood(rule.decode(int(codes[k])), position=c.offset - rule.radius + k)
    return FiniteConfiguration(c.alphabet, c.offset - rule.radius, out)


def evolve(rule: RuleTable, c: FiniteConfiguration, n: int, max_width: int | None = None) -> list:
    """``[c, G(c), …, G^n(c)]``; raises :class:`WidthBudgetExceeded` past ``max_width``."""
    if n < 0:
        raise ValueError("number of steps must be non-negative")
    orbit = [c]
    for t in range(1, n + 1):
        c = step(rule, c)
        if max_width is not None and c.width > max_width:
            raise WidthBudgetExceeded(c.width, max_width, t)
        orbit.append(c)
    return orbit


# -- ".rules" text format ---------------------------------------------------

def _split_window(alphabet: Alphabet, radius: int, text: str) -> tuple:
    tokens = text.split()
    if len(tokens) == 1 and alphabet.single_char and len(tokens[0]) == 2 * radius + 1:
        tokens = list(tokens[0])
    return tuple(tokens)


def parse_rules(text: str) -> RuleTable:
    """Parse the ``.rules`` format.

    ::

        alphabet: _ a b        # first token is the quiescent symbol
        radius: 1
        _ _ a -> a
        aab -> a               # compact form, single-character alphabets only
    """
    alphabet = radius = None
    entries = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if alphabet is None:
            key, _, rest = line.partition(":")
            if key.strip() != "alphabet" or not rest.split():
                raise RuleFormatError("expected 'alphabet: <tok> ...'", lineno)
            try:
                alphabet = Alphabet(tuple(rest.split()))
            except ValueError as exc:
                raise RuleFormatError(str(exc), lineno) from None
            continue
        if radius is None:
            key, _, rest = line.partition(":")
            if key.strip() != "radius":
                raise RuleFormatError("expected 'radius: <int>'", lineno)
            try:
                radius = int(rest)
            except ValueError:
                raise RuleFormatError(f"bad radius {rest.strip()!r}", lineno) from None
            if radius < 0:
                raise RuleFormatError("radius must be non-negative", lineno)
            continue
        lhs, arrow, rhs = line.partition("->")
        if not arrow or len(rhs.split()) != 1:
            raise RuleFormatError(f"expected '<window> -> <tok>', got {line!r}", lineno)
        window = _split_window(alphabet, radius, lhs)
        if len(window) != 2 * radius + 1:
            raise RuleFormatError(f"window needs {2 * radius + 1} tokens, got {len(window)}", lineno)
        for tok in window + (rhs.strip(),):
            if tok not in alphabet:
                raise RuleFormatError(f"unknown token {tok!r}", lineno)
        entries.append((window, rhs.strip(), lineno))
    if alphabet is None or radius is None:
        raise RuleFormatError("missing 'alphabet:' or 'radius:' header")
    seen = {}
    for window, value, lineno in entries:
        if seen.setdefault(window, value) != value:
            raise RuleFormatError(f"conflicting entries for window {' '.join(window)!r}", lineno)
    try:
        return RuleTable.from_entries(alphabet, radius, seen)
    except ValueError as exc:
        raise RuleFormatError(str(exc)) from None


def format_header(alphabet: Alphabet, radius: int) -> str:
    return f"alphabet: {' '.join(alphabet.symbols)}\nradius: {radius}\n"


def format_rules(rule: RuleTable, comment: str | None = None) -> str:
    """Serialize in ``.rules`` format, entries in window-code order."""
    lines = []
    if comment:
        lines.extend(f"# {c}" for c in comment.splitlines())
    lines.append(format_header(rule.alphabet, rule.radius).rstrip("\n"))
    syms = rule.alphabet.symbols
    for code in rule.defined_codes():
        window = rule.decode(int(code))
        lines.append(f"{' '.join(window)} -> {syms[int(rule.table[code])]}")
    return "\n".join(lines) + "\n"


def load_rules(path) -> RuleTable:
    with open(path, encoding="utf-8") as fh:
        return parse_rules(fh.read())


def identity_rule(alphabet: Alphabet, radius: int = 1) -> RuleTable:
    """The rule ``f(w) = w[0]`` on every window."""
    return RuleTable.from_function(alphabet, radius, lambda w: w[radius])
