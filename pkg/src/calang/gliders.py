"""Gliders, dominance, soundness of derived glider systems, and the GtoR compiler.

A glider ``(σ, i)`` carries the value ``σ`` from cell ``z`` to cell ``z + i`` in
one step.  Its locus ``Loc_i(σ)`` is the set of windows that hold ``σ`` at
relative index ``-i``.  Window sets are handled as numpy arrays of window codes
(see :mod:`calang.core`); the digit of relative index ``-i`` is row ``r - i``
of :func:`calang.core.window_digits`.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple

import numpy as np

from .core import Alphabet, RuleTable, decode_window, format_header, window_digits
from .errors import (
    CyclicDominance,
    PartialRuleWithALL,
    RuleFormatError,
    UndefinedNeighborhood,
    VelocityOutOfRange,
)
from .language import FeasibleWindowSet


class _AllWindows:
    def __repr__(self) -> str:
        return "ALL"


#: Sentinel: quantify over every window instead of a feasible set.
ALL = _AllWindows()


class Glider(NamedTuple):
    value: str
    velocity: int

    def __str__(self) -> str:
        return f"({self.value},{self.velocity:+d})" if self.velocity else f"({self.value},0)"


def _check_velocity(i: int, r: int) -> None:
    if not -r <= i <= r:
        raise VelocityOutOfRange(f"velocity {i} outside [-{r}, {r}]")


def locus_mask(alphabet: Alphabet, r: int, value: str, i: int) -> np.ndarray:
    """Boolean mask over all window codes selecting ``Loc_i(value)``."""
    _check_velocity(i, r)
    return window_digits(len(alphabet), r)[r - i] == alphabet.index(value)


def locus(value: str, i: int, alphabet: Alphabet, r: int) -> set:
    """``Loc_i(value)`` as a set of token windows."""
    codes = np.flatnonzero(locus_mask(alphabet, r, value, i))
    return {decode_window(alphabet, r, int(c)) for c in codes}


class GliderSystem:
    """Gliders plus a dominance relation ``g > h`` given as ordered pairs.

    The constructor rejects dominance cycles unless ``allow_cycles`` is set;
    derived systems use that flag so their cycles can be reported rather than
    raised.
    """

    def __init__(self, alphabet: Alphabet, radius: int, gliders: Iterable, dominance: Iterable = (),
                 *, allow_cycles: bool = False):
        self.alphabet = alphabet
        self.radius = radius
        gl = set()
        for g in gliders:
            g = Glider(*g)
            alphabet.index(g.value)
            _check_velocity(g.velocity, radius)
            gl.add(g)
        self.gliders = frozenset(gl)
        dom = set()
        for hi, lo in dominance:
            hi, lo = Glider(*hi), Glider(*lo)
            if hi not in self.gliders or lo not in self.gliders:
                raise ValueError(f"dominance pair {hi} > {lo} mentions an unknown glider")
            if hi.value == lo.value or hi.velocity == lo.velocity:
                raise ValueError(f"dominance pair {hi} > {lo} must differ in value and velocity")
            dom.add((hi, lo))
        self.dominance = frozenset(dom)
        if not allow_cycles:
            cycle = self.find_cycle()
            if cycle:
                raise CyclicDominance(cycle)

    # -- ordering helpers -------------------------------------------------
    def key(self, g: Glider) -> tuple:
        return (self.alphabet.index(g.value), g.velocity)

    def ordered(self) -> list:
        return sorted(self.gliders, key=self.key)

    def successors(self) -> dict:
        succ = {g: set() for g in self.gliders}
        for hi, lo in self.dominance:
            succ[hi].add(lo)
        return succ

    def find_cycle(self) -> list | None:
        """A dominance cycle ``[g0, g1, …, g0]`` or ``None``."""
        succ = self.successors()
        state: dict = {}
        for root in self.ordered():
            if root in state:
                continue
            stack = [(root, iter(sorted(succ[root], key=self.key)))]
            path = [root]
            state[root] = 1
            while stack:
                node, it = stack[-1]
                nxt = next(it, None)
                if nxt is None:
                    state[node] = 2
                    stack.pop()
                    path.pop()
                elif state.get(nxt) == 1:
                    return path[path.index(nxt):] + [nxt]
                elif nxt not in state:
                    state[nxt] = 1
                    path.append(nxt)
                    stack.append((nxt, iter(sorted(succ[nxt], key=self.key))))
        return None

    def closure_matrix(self) -> tuple:
        """``(order, D)`` where ``D[a, b]`` means ``order[a] >⁺ order[b]``."""
        order = self.ordered()
        pos = {g: k for k, g in enumerate(order)}
        n = len(order)
        d = np.zeros((n, n), dtype=bool)
        for hi, lo in self.dominance:
            d[pos[hi], pos[lo]] = True
        for k in range(n):
            d |= np.outer(d[:, k], d[k, :])
        return order, d

    def linearize(self, rng: random.Random | None = None) -> list:
        """Repeatedly take a glider no remaining glider dominates.

        Ties go to the least ``(alphabet index, velocity)``, or to a random
        candidate when ``rng`` is given.
        """
        succ = self.successors()
        indeg = {g: 0 for g in self.gliders}
        for hi, lo in self.dominance:
            indeg[lo] += 1
        ready = sorted((g for g in self.gliders if indeg[g] == 0), key=self.key)
        out = []
        while ready:
            k = rng.randrange(len(ready)) if rng is not None else 0
            g = ready.pop(k)
            out.append(g)
            for lo in succ[g]:
                indeg[lo] -= 1
                if indeg[lo] == 0:
                    ready.append(lo)
            ready.sort(key=self.key)
        if len(out) != len(self.gliders):
            raise CyclicDominance(self.find_cycle() or [])
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, GliderSystem):
            return NotImplemented
        return (self.alphabet, self.radius, self.gliders, self.dominance) == (
            other.alphabet, other.radius, other.gliders, other.dominance)

    def __hash__(self) -> int:
        return hash((self.alphabet, self.radius, self.gliders, self.dominance))

    def __repr__(self) -> str:
        return f"GliderSystem(r={self.radius}, gliders={len(self.gliders)}, dominance={len(self.dominance)})"


# -- evaluation on a window domain ------------------------------------------

@dataclass
class _Domain:
    codes: np.ndarray
    digits: np.ndarray  # (2r+1, m)
    out: np.ndarray  # (m,), -1 where undefined


def _domain(rule: RuleTable, fn, require_defined: bool, allow_partial: bool = False) -> _Domain:
    if fn is ALL:
        if not (rule.is_total or allow_partial):
            raise PartialRuleWithALL("quantifying over all windows requires a total rule")
        codes = np.arange(len(rule.table), dtype=np.int64)
    else:
        if (fn.alphabet, fn.radius) != (rule.alphabet, rule.radius):
            raise ValueError("feasible set and rule disagree on alphabet or radius")
        codes = fn.code_array()
    digits = window_digits(len(rule.alphabet), rule.radius)[:, codes]
    out = rule.table[codes].astype(np.int64)
    if require_defined:
        bad = np.flatnonzero(out < 0)
        if bad.size:
            raise UndefinedNeighborhood(rule.decode(int(codes[bad[0]])))
    return _Domain(codes, digits, out)


# -- classification ---------------------------------------------------------

PERSISTENT = "persistent"
I_PERSISTENT = "I-persistent"
GLIDER = "glider"
NOT_A_GLIDER = "not-a-glider"


@dataclass(frozen=True)
class GliderVerdict:
    kind: str
    witness: tuple | None  # (window, output or None) refuting the next stronger verdict
    counterexample_codes: tuple = ()

    def counterexamples(self, alphabet: Alphabet, radius: int) -> list:
        return [decode_window(alphabet, radius, c) for c in self.counterexample_codes]


@dataclass(frozen=True)
class PersistenceReport:
    alphabet: Alphabet
    radius: int
    verdicts: dict = field(default_factory=dict)

    def __getitem__(self, g) -> GliderVerdict:
        return self.verdicts[Glider(*g)]

    def of_kind(self, *kinds) -> set:
        return {g for g, v in self.verdicts.items() if v.kind in kinds}

    def persistent(self, restricted: bool = False) -> set:
        """Persistent gliders; with ``restricted`` also the I-persistent ones."""
        return self.of_kind(PERSISTENT, I_PERSISTENT) if restricted else self.of_kind(PERSISTENT)


def classify_gliders(rule: RuleTable, fn=ALL) -> PersistenceReport:
    alphabet, r = rule.alphabet, rule.radius
    dom = _domain(rule, fn, require_defined=fn is not ALL)
    full = window_digits(len(alphabet), r)
    syms = alphabet.symbols
    verdicts = {}

    def refute(mask_codes, outs, sigma):
        bad = mask_codes[outs != sigma]
        return bad

    for s_idx, sigma in enumerate(syms):
        for i in range(-r, r + 1):
            k = r - i
            in_dom = dom.digits[k] == s_idx
            hits = dom.out[in_dom] == s_idx
            loc_codes = np.flatnonzero(full[k] == s_idx)
            loc_bad = refute(loc_codes, rule.table[loc_codes].astype(np.int64), s_idx)

            def wit(codes):
                if not len(codes):
                    return None
                c = int(codes[0])
                v = int(rule.table[c])
                return (rule.decode(c), syms[v] if v >= 0 else None)

            if not hits.any():
                dom_bad = dom.codes[in_dom]
                verdicts[Glider(sigma, i)] = GliderVerdict(NOT_A_GLIDER, wit(dom_bad), tuple(int(c) for c in dom_bad))
            elif not len(loc_bad):
                verdicts[Glider(sigma, i)] = GliderVerdict(PERSISTENT, None)
            elif fn is not ALL and hits.all():
                verdicts[Glider(sigma, i)] = GliderVerdict(I_PERSISTENT, wit(loc_bad), tuple(int(c) for c in loc_bad))
            else:
                dom_bad = dom.codes[in_dom][~hits]
                verdicts[Glider(sigma, i)] = GliderVerdict(GLIDER, wit(dom_bad), tuple(int(c) for c in dom_bad))
    return PersistenceReport(alphabet, r, verdicts)


@dataclass(frozen=True)
class Coexistence:
    ok: bool
    pair: tuple | None = None

    def __bool__(self) -> bool:
        return self.ok


def coexistence_check(persistent: Iterable) -> Coexistence:
    """Persistent gliders must pairwise share a value or a velocity."""
    gl = sorted({Glider(*g) for g in persistent}, key=lambda g: (g.value, g.velocity))
    for a in range(len(gl)):
        for b in range(a + 1, len(gl)):
            g, h = gl[a], gl[b]
            if g.value != h.value and g.velocity != h.velocity:
                return Coexistence(False, (g, h))
    return Coexistence(True)


# -- derivation and soundness -----------------------------------------------

def derive_glider_system(rule: RuleTable, fn) -> GliderSystem:
    """Gliders and dominance read off the rule restricted to ``fn``."""
    alphabet, r = rule.alphabet, rule.radius
    dom = _domain(rule, fn, require_defined=True)
    syms = alphabet.symbols
    gliders = set()
    for k in range(2 * r + 1):
        i = r - k
        for v in np.unique(dom.out[dom.digits[k] == dom.out]):
            gliders.add(Glider(syms[int(v)], i))
    ordered = sorted(gliders, key=lambda g: (alphabet.index(g.value), g.velocity))
    masks = {g: dom.digits[r - g.velocity] == alphabet.index(g.value) for g in ordered}
    pairs = set()
    for g in ordered:
        gi = alphabet.index(g.value)
        for h in ordered:
            if g.value == h.value or g.velocity == h.velocity:
                continue
            overlap = masks[g] & masks[h]
            if overlap.any() and (dom.out[overlap] == gi).all():
                pairs.add((g, h))
    return GliderSystem(alphabet, r, gliders, pairs, allow_cycles=True)


@dataclass(frozen=True)
class SoundnessReport:
    """Outcome of the three soundness conditions.

    ``maximal_agree`` judges maximality under the transitive closure of the
    dominance pairs (the order GtoR follows); ``raw_maximal_agree`` repeats the
    check with the pairs exactly as given.  ``closure_only`` lists pairs the
    closure adds.
    """

    acyclic: bool
    cycle: list | None
    covered: bool
    uncovered: list
    maximal_agree: bool
    disagreements: list
    raw_maximal_agree: bool
    closure_only: list

    @property
    def sound(self) -> bool:
        return self.acyclic and self.covered and self.maximal_agree

    def __bool__(self) -> bool:
        return self.sound

    def as_dict(self) -> dict:
        def win(w):
            return " ".join(w)

        return {
            "sound": self.sound,
            "acyclic": self.acyclic,
            "cycle": [str(g) for g in self.cycle] if self.cycle else None,
            "covered": self.covered,
            "uncovered": [{"window": win(w), "value": v} for w, v in self.uncovered],
            "maximal_agree": self.maximal_agree,
            "disagreements": [
                {"window": win(w), "value": v, "maximal": [str(g) for g in gs]}
                for w, v, gs in self.disagreements
            ],
            "raw_maximal_agree": self.raw_maximal_agree,
            "closure_only": [f"{a} > {b}" for a, b in self.closure_only],
        }


_WITNESS_CAP = 50


def _maximal_disagreements(dom, order, member, dmat, values, syms, rule):
    dominated = (dmat.T.astype(np.int64) @ member.astype(np.int64)) > 0
    maximal = member & ~dominated
    wrong = maximal & (values[:, None] != dom.out[None, :])
    cols = np.flatnonzero(wrong.any(axis=0))
    found = []
    for c in cols[:_WITNESS_CAP]:
        gs = [order[g] for g in np.flatnonzero(wrong[:, c])]
        found.append((rule.decode(int(dom.codes[c])), syms[int(dom.out[c])], gs))
    return not len(cols), found


def check_soundness(rule: RuleTable, fn, gs: GliderSystem) -> SoundnessReport:
    alphabet, r = rule.alphabet, rule.radius
    dom = _domain(rule, fn, require_defined=True)
    syms = alphabet.symbols
    order, closure = gs.closure_matrix()
    n = len(order)
    pos = {g: k for k, g in enumerate(order)}
    raw = np.zeros((n, n), dtype=bool)
    for hi, lo in gs.dominance:
        raw[pos[hi], pos[lo]] = True
    cycle = gs.find_cycle()
    values = np.array([alphabet.index(g.value) for g in order], dtype=np.int64)
    member = np.zeros((n, len(dom.codes)), dtype=bool)
    for k, g in enumerate(order):
        member[k] = dom.digits[r - g.velocity] == values[k]

    covering = member & (values[:, None] == dom.out[None, :])
    uncovered_cols = np.flatnonzero(~covering.any(axis=0))
    uncovered = [(rule.decode(int(dom.codes[c])), syms[int(dom.out[c])]) for c in uncovered_cols[:_WITNESS_CAP]]

    raw_ok, raw_found = _maximal_disagreements(dom, order, member, raw, values, syms, rule)
    if cycle is None:
        ok, found = _maximal_disagreements(dom, order, member, closure, values, syms, rule)
    else:
        ok, found = raw_ok, raw_found
    closure_only = [(order[a], order[b]) for a, b in zip(*np.nonzero(closure & ~raw)) if a != b]
    return SoundnessReport(
        acyclic=cycle is None,
        cycle=cycle,
        covered=not len(uncovered_cols),
        uncovered=uncovered,
        maximal_agree=ok,
        disagreements=found,
        raw_maximal_agree=raw_ok,
        closure_only=closure_only,
    )


# -- GtoR -------------------------------------------------------------------

def gtor(gs: GliderSystem, order: list | None = None) -> RuleTable:
    """Compile a glider system to a (partial) rule table.

    Gliders are visited along ``order`` (default: :meth:`GliderSystem.linearize`)
    and each claims the still-undefined windows of its locus.
    """
    alphabet, r = gs.alphabet, gs.radius
    if order is None:
        order = gs.linearize()
    table = np.full(RuleTable.window_space(alphabet, r), -1, dtype=np.int16)
    digits = window_digits(len(alphabet), r)
    for g in order:
        v = alphabet.index(g.value)
        mask = (digits[r - g.velocity] == v) & (table < 0)
        table[mask] = v
    return RuleTable(alphabet, r, table)


def obs_non_glider(rule: RuleTable, fn=ALL) -> list:
    """Windows whose output symbol appears nowhere in the window.

    With ``fn=ALL`` every window the rule defines is scanned, so partial
    tables are accepted here.
    """
    dom = _domain(rule, fn, require_defined=fn is not ALL, allow_partial=True)
    present = (dom.digits == dom.out[None, :]).any(axis=0)
    bad = np.flatnonzero(~present & (dom.out >= 0))
    syms = rule.alphabet.symbols
    return [(rule.decode(int(dom.codes[c])), syms[int(dom.out[c])]) for c in bad]


class Spreading(NamedTuple):
    kind: str  # right, left, two-way, shift, none
    speed: int | None = None

    def __str__(self) -> str:
        return f"{self.kind}({self.speed})" if self.speed is not None else self.kind


def classify_spreading(persistent: Iterable, value: str) -> Spreading:
    vs = sorted({Glider(*g).velocity for g in persistent if Glider(*g).value == value})
    if not vs or vs == [0] or vs != list(range(vs[0], vs[-1] + 1)):
        return Spreading("none")
    m, n = vs[0], vs[-1]
    if m == 0:
        return Spreading("right", n)
    if n == 0:
        return Spreading("left", -m)
    if m < 0 < n:
        return Spreading("two-way")
    return Spreading("shift")


# -- ".gliders" text format -------------------------------------------------

@dataclass(frozen=True)
class GliderSpec:
    system: GliderSystem
    init: str | None = None


def parse_gliders(text: str) -> GliderSpec:
    """Parse the ``.gliders`` format::

        alphabet: _ a b
        radius: 1
        glider a 0
        glider b 1
        dom b 1 > a 0
        init ab
    """
    alphabet = radius = init = None
    gliders, dominance = [], []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, _, rest = line.partition(" ")
        if line.startswith("alphabet:"):
            try:
                alphabet = Alphabet(tuple(line.partition(":")[2].split()))
            except ValueError as exc:
                raise RuleFormatError(str(exc), lineno) from None
            continue
        if line.startswith("radius:"):
            try:
                radius = int(line.partition(":")[2])
            except ValueError:
                raise RuleFormatError("bad radius", lineno) from None
            continue
        if alphabet is None or radius is None:
            raise RuleFormatError("'alphabet:' and 'radius:' must come first", lineno)

        def glider(tok, vel):
            if tok not in alphabet:
                raise RuleFormatError(f"unknown token {tok!r}", lineno)
            try:
                return Glider(tok, int(vel))
            except ValueError:
                raise RuleFormatError(f"bad velocity {vel!r}", lineno) from None

        parts = rest.split()
        if head == "glider" and len(parts) == 2:
            gliders.append(glider(*parts))
        elif head == "dom" and len(parts) == 5 and parts[2] == ">":
            dominance.append((glider(parts[0], parts[1]), glider(parts[3], parts[4])))
        elif head == "init" and rest.strip():
            init = rest.strip()
        else:
            raise RuleFormatError(f"cannot parse {line!r}", lineno)
    if alphabet is None or radius is None:
        raise RuleFormatError("missing 'alphabet:' or 'radius:' header")
    try:
        system = GliderSystem(alphabet, radius, gliders, dominance)
    except CyclicDominance:
        raise
    except (ValueError, VelocityOutOfRange) as exc:
        raise RuleFormatError(str(exc)) from exc
    return GliderSpec(system, init)


def format_gliders(gs: GliderSystem, init: str | None = None, comment: str | None = None) -> str:
    lines = []
    if comment:
        lines.extend(f"# {c}" for c in comment.splitlines())
    lines.append(format_header(gs.alphabet, gs.radius).rstrip("\n"))
    for g in gs.ordered():
        lines.append(f"glider {g.value} {g.velocity}")
    for hi, lo in sorted(gs.dominance, key=lambda p: (gs.key(p[0]), gs.key(p[1]))):
        lines.append(f"dom {hi.value} {hi.velocity} > {lo.value} {lo.velocity}")
    if init is not None:
        lines.append(f"init {init}")
    return "\n".join(lines) + "\n"


def load_gliders(path) -> GliderSpec:
    with open(path, encoding="utf-8") as fh:
        return parse_gliders(fh.read())
