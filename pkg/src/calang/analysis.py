"""Structural analyses over rules and language samples.

* difference profiles of word lengths and the radius lower bound they imply,
* per-step width growth and interval containment,
* comparison of a sample against an independent membership oracle,
* bounded reachability of a regular "bad" set.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from typing import Callable, Iterable

from .core import Alphabet, FiniteConfiguration, RuleTable, step
from .errors import AlphabetMismatch, EmptySample, TruncatedSample
from .gliders import ALL, Spreading, classify_gliders, classify_spreading
from .language import Budgets, LanguageSample, _orbits, sort_key
from .regset import RegularSet, contains

SCAN_LIMIT = 10**7


def to_json(report) -> str:
    """Stable JSON text for any report exposing ``as_dict``."""
    return json.dumps(report.as_dict(), ensure_ascii=False, indent=2, sort_keys=True) + "\n"


# -- difference sequences -----------------------------------------------------

@dataclass(frozen=True)
class DifferenceProfile:
    lengths: tuple
    deltas: tuple
    bound: int

    def as_dict(self) -> dict:
        return {"lengths": list(self.lengths), "deltas": list(self.deltas), "bound": self.bound,
                "radius_lower_bound": radius_lower_bound(self.bound)}


def difference_profile(sample) -> DifferenceProfile:
    """Gaps between consecutive lengths of the length-sorted sample.

    ``sample`` is a :class:`LanguageSample` or any iterable of words.  Over a
    finite sample the bound is the *observed* one and never exceeds the bound
    of the full language's prefix it was drawn from.
    """
    lengths = tuple(sorted(len(w) for w in sample))
    if not lengths:
        raise EmptySample("difference profile of an empty sample")
    deltas = tuple(b - a for a, b in zip(lengths, lengths[1:]))
    return DifferenceProfile(lengths, deltas, max(deltas, default=0))


def radius_lower_bound(k: int) -> int:
    """Smallest radius compatible with a difference bound of ``k``."""
    if k < 0:
        raise ValueError("difference bound must be non-negative")
    return 0 if k == 0 else (k - 1) // 2 + 1


# -- width growth -------------------------------------------------------------

class WidthGrowthViolation(AssertionError):
    """A step grew a configuration beyond what its radius allows."""

    def __init__(self, message: str, config: FiniteConfiguration):
        super().__init__(message)
        self.config = config


def _contained(rule: RuleTable, c: FiniteConfiguration, nxt: FiniteConfiguration) -> bool:
    if nxt.is_empty:
        return True
    if c.is_empty:
        return False
    (m, M), (m2, M2) = c.interval, nxt.interval
    return m - rule.radius <= m2 and M2 <= M + rule.radius


def check_width_growth(rule: RuleTable, configs: Iterable[FiniteConfiguration]) -> int:
    """Largest ``width(step(c)) - width(c)`` over ``configs``.

    Raises :class:`WidthGrowthViolation` if some step leaves the interval
    widened by ``r`` on each side or grows by more than ``2r``.
    """
    best = None
    for c in configs:
        nxt = step(rule, c)
        delta = nxt.width - c.width
        if delta > 2 * rule.radius or not _contained(rule, c, nxt):
            raise WidthGrowthViolation(
                f"width {c.width} -> {nxt.width} with radius {rule.radius}", c)
        best = delta if best is None else max(best, delta)
    if best is None:
        raise EmptySample("no configurations to check")
    return best


# -- oracle comparison --------------------------------------------------------

@dataclass(frozen=True)
class VerificationReport:
    len_bound: int
    method: str
    checked: int
    spurious: tuple
    missing: tuple
    alphabet: Alphabet = field(repr=False, default=None)

    @property
    def equivalent(self) -> bool:
        return not self.spurious and not self.missing

    def __bool__(self) -> bool:
        return self.equivalent

    def as_dict(self) -> dict:
        return {
            "equivalent": self.equivalent,
            "len_bound": self.len_bound,
            "method": self.method,
            "oracle_words_checked": self.checked,
            "spurious": [self.alphabet.render(w) for w in self.spurious],
            "missing": [self.alphabet.render(w) for w in self.missing],
        }


def _scan_size(alphabet: Alphabet, L: int) -> int:
    return sum(len(alphabet) ** n for n in range(L + 1))


def _scan(alphabet: Alphabet, L: int):
    """Every word up to length ``L`` without a quiescent first or last letter."""
    active, syms = alphabet.decode(alphabet.active), alphabet.symbols
    yield ()
    for n in range(1, L + 1):
        if n == 1:
            yield from ((a,) for a in active)
            continue
        for first in active:
            for mid in itertools.product(syms, repeat=n - 2):
                for last in active:
                    yield (first,) + mid + (last,)


def verify_language(sample: LanguageSample, oracle: Callable, len_bound: int,
                    method: str = "auto") -> VerificationReport:
    """Compare the sample's words of length ``<= len_bound`` with ``oracle``.

    The oracle side is enumerated by an exhaustive scan when the word space is
    at most ``SCAN_LIMIT``, otherwise through ``oracle.generate``.  A sample
    whose exploration was cut off at width ``frontier`` can only vouch for
    shorter words (orbits are assumed not to shrink), so a ``len_bound`` at or
    beyond the frontier raises :class:`TruncatedSample`.
    """
    if sample.truncated and sample.frontier is not None and len_bound >= sample.frontier:
        raise TruncatedSample(
            f"sample is only complete below length {sample.frontier}; asked for {len_bound}")
    alphabet = sample.alphabet
    if method == "auto":
        method = "scan" if _scan_size(alphabet, len_bound) <= SCAN_LIMIT else "generator"
    if method == "scan":
        expected = {w for w in _scan(alphabet, len_bound) if oracle(w)}
    elif method == "generator":
        if not hasattr(oracle, "generate"):
            raise ValueError("word space too large to scan and the oracle has no generator")
        expected = set(oracle.generate(len_bound))
    else:
        raise ValueError(f"unknown method {method!r}")
    have = sample.up_to(len_bound)
    key = sort_key(alphabet)
    spurious = tuple(sorted((w for w in have if not oracle(w)), key=key))
    missing = tuple(sorted(expected - have, key=key))
    return VerificationReport(len_bound, method, len(expected), spurious, missing, alphabet)


# -- bounded safety -----------------------------------------------------------

WITNESS = "witness"
BOUNDED_SAFE = "bounded-safe"


@dataclass(frozen=True)
class SafetyResult:
    status: str
    witness: tuple | None  # (source word, step, word)
    budgets: Budgets
    alphabet: Alphabet = field(repr=False, default=None)
    truncated: bool = False

    @property
    def safe(self) -> bool:
        return self.status == BOUNDED_SAFE

    def as_dict(self) -> dict:
        out = {"status": self.status, "budgets": self.budgets.as_dict(), "truncated": self.truncated}
        if self.witness is not None:
            src, t, word = self.witness
            render = self.alphabet.render if self.alphabet else "".join
            out["witness"] = {"source": render(src), "step": t, "word": render(word)}
        return out


def safety_check(rule: RuleTable, F: RegularSet, B: RegularSet, budgets: Budgets) -> SafetyResult:
    """Search for a reachable word in ``B``; report the one with least (step, source order)."""
    if B.alphabet != rule.alphabet:
        raise AlphabetMismatch("bad set and rule use different alphabets")
    orbits, more = _orbits(rule, F, budgets)
    truncated = more or any(o.truncated for o in orbits)
    horizon = max((len(o.configs) for o in orbits), default=0)
    for t in range(horizon):
        for orbit in orbits:
            if t < len(orbit.configs) and contains(B, orbit.configs[t].word):
                return SafetyResult(WITNESS, (orbit.source, t, orbit.configs[t].word), budgets,
                                    rule.alphabet, truncated)
    return SafetyResult(BOUNDED_SAFE, None, budgets, rule.alphabet, truncated)


# -- spreading ----------------------------------------------------------------

def spreading_report(rule: RuleTable, fn=ALL) -> dict:
    """Spreading kind of every symbol, judged from its persistent gliders.

    With ``fn`` a feasible window set, I-persistent gliders count as well.
    """
    report = classify_gliders(rule, fn)
    gliders = report.persistent(restricted=fn is not ALL)
    return {s: classify_spreading(gliders, s) for s in rule.alphabet.symbols}


def spreading_as_dict(spread: dict) -> dict:
    return {s: {"kind": sp.kind, "speed": sp.speed} for s, sp in spread.items()}


__all__ = [
    "BOUNDED_SAFE",
    "DifferenceProfile",
    "SafetyResult",
    "Spreading",
    "VerificationReport",
    "WITNESS",
    "WidthGrowthViolation",
    "check_width_growth",
    "difference_profile",
    "radius_lower_bound",
    "safety_check",
    "spreading_as_dict",
    "spreading_report",
    "to_json",
    "verify_language",
]
