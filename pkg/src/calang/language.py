"""Budgeted enumeration of the words a rule generates from an initial set.

Every initial word ``u`` is padded with quiescent cells and evolved for at most
``max_steps`` steps.  The non-quiescent segment of every configuration met on
the way is a word of the generated language.  Orbits stop early when a
configuration repeats up to translation.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from . import _parallel
from .core import (
    Alphabet,
    FiniteConfiguration,
    RuleTable,
    extended_window_codes,
    format_header,
    step,
)
from .errors import AlphabetMismatch, UndefinedNeighborhood
from .regset import RegularSet, enumerate_words

DEFAULT_MAX_WIDTH = 100_000


@dataclass(frozen=True)
class Budgets:
    """Exploration limits: steps per orbit, initial-word length, configuration width."""

    max_steps: int = 10
    max_word_len: int = 12
    max_width: int = DEFAULT_MAX_WIDTH

    def __post_init__(self):
        if min(self.max_steps, self.max_word_len, self.max_width) < 0:
            raise ValueError("budgets must be non-negative")

    def as_dict(self) -> dict:
        return {"max_steps": self.max_steps, "max_word_len": self.max_word_len, "max_width": self.max_width}


def pad(word, alphabet: Alphabet, offset: int = 0) -> FiniteConfiguration:
    """``⊥^ω word ⊥^ω`` with the first letter at ``offset``."""
    return FiniteConfiguration.from_word(alphabet, word, offset)


def extract_word(c: FiniteConfiguration) -> tuple:
    """The word between the paddings (possibly with interior quiescent cells)."""
    return c.word


def has_interior_quiescent(word, alphabet: Alphabet) -> bool:
    return alphabet.bottom in tuple(word)


def sort_key(alphabet: Alphabet):
    """Shortlex order by alphabet index."""
    return lambda word: (len(word), alphabet.encode(word))


@dataclass
class _Orbit:
    source: tuple
    configs: list
    truncated: bool = False
    cycled: bool = False
    over_width: int | None = None  # width of the first configuration over the cap


def _explore(rule: RuleTable, word: tuple, budgets: Budgets) -> _Orbit:
    c = pad(word, rule.alphabet)
    orbit = _Orbit(word, [c])
    seen = {c.cells}
    for t in range(1, budgets.max_steps + 1):
        try:
            c = step(rule, c)
        except UndefinedNeighborhood as exc:
            raise exc.located(rule.alphabet.render(word), t - 1) from None
        if c.width > budgets.max_width:
            orbit.truncated = True
            orbit.over_width = c.width
            return orbit
        if c.cells in seen:
            orbit.cycled = True
            return orbit
        seen.add(c.cells)
        orbit.configs.append(c)
    orbit.truncated = True
    return orbit


def _initial_words(F: RegularSet, budgets: Budgets):
    words = enumerate_words(F, budgets.max_word_len)
    return words, F.has_word_longer_than(budgets.max_word_len)


def _orbits(rule: RuleTable, F: RegularSet, budgets: Budgets):
    if F.alphabet != rule.alphabet:
        raise AlphabetMismatch("initial set and rule use different alphabets")
    words, more = _initial_words(F, budgets)
    orbits = _parallel.pmap(lambda u: _explore(rule, u, budgets), words)
    return orbits, more


def reachable_configurations(rule: RuleTable, F: RegularSet, budgets: Budgets) -> list:
    """Explored orbit prefixes, one list of configurations per initial word (F order)."""
    orbits, _ = _orbits(rule, F, budgets)
    return [o.configs for o in orbits]


@dataclass(frozen=True)
class LanguageSample:
    """Words reached within the budgets, each with the orbit and step that first produced it.

    ``frontier`` is the shortest width at which exploration was cut off (by
    the step or width budget, or because longer initial words were skipped).
    For rules whose orbits never shrink, every word shorter than the frontier
    is present; :func:`calang.analysis.verify_language` relies on that.
    """

    alphabet: Alphabet
    words: tuple
    provenance: dict
    budgets: Budgets
    truncated: bool
    frontier: int | None = None
    interior_quiescent: frozenset = field(default_factory=frozenset)

    def __contains__(self, word) -> bool:
        return tuple(word) in self.provenance

    def __len__(self) -> int:
        return len(self.words)

    def __iter__(self):
        return iter(self.words)

    def word_set(self) -> frozenset:
        return frozenset(self.words)

    def up_to(self, n: int) -> frozenset:
        return frozenset(w for w in self.words if len(w) <= n)

    def rendered(self) -> list:
        return [self.alphabet.render(w) for w in self.words]

    def to_jsonl(self) -> str:
        lines = []
        for w in self.words:
            src, t = self.provenance[w]
            rec = {"word": self.alphabet.render(w), "source": self.alphabet.render(src), "step": t}
            if w in self.interior_quiescent:
                rec["interior_quiescent"] = True
            lines.append(json.dumps(rec, ensure_ascii=False))
        meta = {
            "meta": {
                "alphabet": list(self.alphabet.symbols),
                "budgets": self.budgets.as_dict(),
                "count": len(self.words),
                "frontier": self.frontier,
                "truncated": self.truncated,
            }
        }
        lines.append(json.dumps(meta, ensure_ascii=False, sort_keys=True))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_jsonl(cls, text: str) -> "LanguageSample":
        records = [json.loads(line) for line in text.splitlines() if line.strip()]
        if not records or "meta" not in records[-1]:
            raise ValueError("sample file lacks its trailing metadata record")
        meta = records.pop()["meta"]
        alphabet = Alphabet(tuple(meta["alphabet"]))
        provenance, interior = {}, set()
        for rec in records:
            w = alphabet.parse_word(rec["word"])
            provenance[w] = (alphabet.parse_word(rec["source"]), int(rec["step"]))
            if rec.get("interior_quiescent"):
                interior.add(w)
        words = tuple(sorted(provenance, key=sort_key(alphabet)))
        return cls(alphabet, words, provenance, Budgets(**meta["budgets"]), bool(meta["truncated"]),
                   meta.get("frontier"), frozenset(interior))


def generate_language(rule: RuleTable, F: RegularSet, budgets: Budgets) -> LanguageSample:
    orbits, more = _orbits(rule, F, budgets)
    provenance: dict = {}
    frontier = budgets.max_word_len + 1 if more else None
    truncated = more
    for orbit in orbits:
        for t, c in enumerate(orbit.configs):
            provenance.setdefault(c.word, (orbit.source, t))
        if orbit.truncated:
            truncated = True
            edge = orbit.over_width if orbit.over_width is not None else orbit.configs[-1].width
            frontier = edge if frontier is None else min(frontier, edge)
    alphabet = rule.alphabet
    words = tuple(sorted(provenance, key=sort_key(alphabet)))
    interior = frozenset(w for w in words if has_interior_quiescent(w, alphabet))
    return LanguageSample(alphabet, words, provenance, budgets, truncated, frontier, interior)


@dataclass(frozen=True)
class FeasibleWindowSet:
    """Windows seen in explored configurations, stored as sorted window codes."""

    alphabet: Alphabet
    radius: int
    codes: tuple
    stabilized: bool

    @property
    def windows(self) -> list:
        from .core import decode_window

        return [decode_window(self.alphabet, self.radius, c) for c in self.codes]

    def __len__(self) -> int:
        return len(self.codes)

    def __contains__(self, window) -> bool:
        from .core import encode_window

        return encode_window(self.alphabet, self.radius, window) in set(self.codes)

    def code_array(self) -> np.ndarray:
        return np.asarray(self.codes, dtype=np.int64)

    def to_text(self) -> str:
        """Window list in the ``.rules`` key format (header plus one window per line)."""
        lines = [format_header(self.alphabet, self.radius).rstrip("\n")]
        lines += [" ".join(w) for w in self.windows]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_codes(cls, alphabet: Alphabet, radius: int, codes: Iterable[int], stabilized: bool = True):
        return cls(alphabet, radius, tuple(sorted(set(int(c) for c in codes))), stabilized)

    @classmethod
    def everything(cls, alphabet: Alphabet, radius: int) -> "FeasibleWindowSet":
        return cls(alphabet, radius, tuple(range(len(alphabet) ** (2 * radius + 1))), True)


def _config_codes(rule: RuleTable, c: FiniteConfiguration) -> np.ndarray:
    if c.is_empty:
        return np.array([rule.quiescent_code], dtype=np.int64)
    return extended_window_codes(rule, c)


def feasible_neighborhoods(rule: RuleTable, F: RegularSet, budgets: Budgets) -> FeasibleWindowSet:
    orbits, _ = _orbits(rule, F, budgets)
    codes = {rule.quiescent_code}
    for orbit in orbits:
        for c in orbit.configs:
            codes.update(_config_codes(rule, c).tolist())
    stabilized = True
    for orbit in orbits:
        if orbit.cycled:
            continue
        try:
            nxt = step(rule, orbit.configs[-1])
        except UndefinedNeighborhood:
            stabilized = False
            break
        if not set(_config_codes(rule, nxt).tolist()) <= codes:
            stabilized = False
            break
    return FeasibleWindowSet.from_codes(rule.alphabet, rule.radius, codes, stabilized)
