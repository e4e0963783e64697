"""Built-in rule tables and parametric glider-system builders.

Every construction bundles a rule, an initial pattern and an *oracle*: a
hand-written membership predicate for the target language together with a
generator of its members up to a length.  Oracles never look at the rule, so
comparing a generated sample against one is a genuine check.

Builder designs
---------------
All builders follow the same recipe.  The current word is a concatenation of
periodic blocks.  Each step, a *shift* glider per symbol moves a block by a
fixed amount, and an *injection* glider per symbol copies the block's
outermost period into the cells the shift just vacated.  A single quiescent
glider, dominated by every non-quiescent glider of another velocity, fills in
the background.  Where two non-quiescent gliders may both fire on a feasible
window, the shift glider dominates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator, NamedTuple

from .core import Alphabet, RuleTable, parse_rules
from .errors import EmptyWord, LengthMismatch, RadiusZero, UnknownConstruction
from .gliders import Glider, GliderSystem, gtor
from .language import Budgets
from .regset import RegularSet, literal, parse_pattern

BOTTOM = "_"


class Oracle:
    """Membership predicate plus an enumerator of members by length."""

    def __init__(self, predicate: Callable, generate: Callable, description: str):
        self.predicate = predicate
        self._generate = generate
        self.description = description

    def __call__(self, word) -> bool:
        return bool(self.predicate(tuple(word)))

    def generate(self, max_len: int) -> Iterator[tuple]:
        """Members of length ``<= max_len`` (any order, no duplicates)."""
        for w in self._generate(max_len):
            if len(w) <= max_len:
                yield tuple(w)

    def __repr__(self) -> str:
        return f"Oracle({self.description})"


def runs(word) -> list:
    """Run-length encoding: ``aabccc`` -> ``[('a', 2), ('b', 1), ('c', 3)]``."""
    out: list = []
    for tok in word:
        if out and out[-1][0] == tok:
            out[-1] = (tok, out[-1][1] + 1)
        else:
            out.append((tok, 1))
    return out


def _counted(pattern: list, max_len: int, constraint: Callable) -> Iterator[tuple]:
    """Words ``pattern[0]^n0 pattern[1]^n1 …`` with positive counts satisfying ``constraint``."""

    def rec(k, budget, counts):
        if k == len(pattern):
            if constraint(*counts):
                yield tuple(tok for tok, n in zip(pattern, counts) for _ in range(n))
            return
        for n in range(1, budget - (len(pattern) - k - 1) + 1):
            yield from rec(k + 1, budget - n, counts + [n])

    yield from rec(0, max_len, [])


def _run_oracle(pattern: list, constraint: Callable, description: str) -> Oracle:
    def predicate(word):
        rs = runs(word)
        return [t for t, _ in rs] == pattern and constraint(*(n for _, n in rs))

    return Oracle(predicate, lambda L: _counted(pattern, L, constraint), description)


def power_oracle(w) -> Oracle:
    """``{w^n : n >= 1}``."""
    w = tuple(w)

    def predicate(word):
        q, rem = divmod(len(word), len(w))
        return q >= 1 and rem == 0 and word == w * q

    return Oracle(predicate, lambda L: (w * n for n in range(1, L // len(w) + 1)), f"({''.join(w)})^n")


def product_oracle(blocks: list) -> Oracle:
    """``{Π w_i^(a_i·n + b_i) : n >= 1}`` for ``blocks = [(w_i, a_i, b_i), …]``."""
    blocks = [(tuple(w), a, b) for w, a, b in blocks]

    def member(n):
        return tuple(tok for w, a, b in blocks for _ in range(a * n + b) for tok in w)

    per_n = sum(len(w) * a for w, a, _ in blocks)

    def predicate(word):
        n = 1
        while True:
            cand = member(n)
            if len(cand) > len(word):
                return False
            if cand == word:
                return True
            if per_n == 0:
                return False
            n += 1

    def generate(L):
        n = 1
        while len(member(n)) <= L:
            yield member(n)
            n += 1
            if per_n == 0:
                break

    desc = " ".join(f"({''.join(w)})^({a}n+{b})" for w, a, b in blocks)
    return Oracle(predicate, generate, desc)


def _pascal_row(t: int) -> tuple:
    """Row ``t`` of Pascal's triangle mod 2, interleaved with zeros (width ``2t+1``)."""
    return tuple("1" if j % 2 == 0 and (t & (j // 2)) == j // 2 else "0" for j in range(2 * t + 1))


def rule90_oracle() -> Oracle:
    def predicate(word):
        if len(word) % 2 == 0:
            return False
        return word == _pascal_row(len(word) // 2)

    return Oracle(predicate, lambda L: (_pascal_row(t) for t in range((L - 1) // 2 + 1)),
                  "rows of Pascal's triangle mod 2")


class LinearExpr(NamedTuple):
    """``e(n) = a·n + b`` with ``a > 0`` and ``b >= 0``."""

    a: int
    b: int = 0

    def __call__(self, n: int) -> int:
        return self.a * n + self.b

    @classmethod
    def parse(cls, text: str) -> "LinearExpr":
        """Read ``'2n+1'``, ``'n'``, ``'3n'``."""
        body = text.replace(" ", "")
        head, sep, tail = body.partition("n")
        if not sep:
            raise ValueError(f"expected an expression like '2n+1', got {text!r}")
        a = int(head) if head else 1
        b = int(tail) if tail else 0
        return cls(a, b)

    def __str__(self) -> str:
        a = "" if self.a == 1 else str(self.a)
        return f"{a}n+{self.b}" if self.b else f"{a}n"


@dataclass(frozen=True)
class Construction:
    name: str
    rule: RuleTable
    initial: RegularSet
    oracle: Oracle
    system: GliderSystem | None = None
    budgets: Budgets = field(default_factory=lambda: Budgets(max_steps=20, max_word_len=10))
    params: dict = field(default_factory=dict)

    @property
    def alphabet(self) -> Alphabet:
        return self.rule.alphabet

    @property
    def radius(self) -> int:
        return self.rule.radius


# -- hand tables ---------------------------------------------------------------

def _table(alphabet: str, radius: int, rows: dict) -> RuleTable:
    lines = [f"alphabet: {' '.join(alphabet)}", f"radius: {radius}"]
    for out, windows in rows.items():
        lines += [f"{w} -> {out}" for w in windows.split()]
    return parse_rules("\n".join(lines))


_AB = "_ab"

ANBN_TABLE = {
    "_": "___",
    "a": "__a _aa _ab aaa aab",
    "b": "ab_ abb b__ bb_ bbb",
}

ANBAN_TABLE = {
    "_": "___",
    "a": "__a _aa _ab a__ aa_ aaa aab ba_ baa",
    "b": "aba",
}

ANBMC_TABLE = {
    "_": "___",
    "a": "__a _aa _ab aaa aab",
    "b": "abb abc bbb bbc bc_",
    "c": "c__",
}

ANBNCN_TABLE = {
    "_": "_____ ____a",
    "a": "___aa ___ab __aaa __aab __abc _aaaa _aaab _aabb aaaaa aaaab aaabb",
    "b": "_abc_ aabbb aabbc abbbb abbbc abbcc abc__ bbbbb bbbbc bbbcc bbcc_ bbccc",
    "c": "bc___ bcc__ bccc_ bcccc c____ cc___ ccc__ cccc_ ccccc",
}

ANBNCNDN_TABLE = {
    "d": "ddddd dddd_ ddd__ dd___ d____ cdddd cddd_ cdd__ cd___",
    "c": "ccddd ccdd_ cccdd ccccd ccccc bcd__ bccdd bcccd bcccc bbccd bbccc abcd_",
    "b": "bbbcc bbbbc bbbbb abbcc abbbc abbbb aabbc aabbb aaabb _abcd _aabb __abc",
    "a": "aaaab aaaaa _aaab _aaaa __aab __aaa ___ab ___aa ____a",
    "_": "_____",
}


def _rule90() -> RuleTable:
    alphabet = Alphabet(("0", "1"))
    return RuleTable.from_function(alphabet, 1, lambda w: "1" if (w[0] == "1") != (w[2] == "1") else "0")


def _two_captains() -> GliderSystem:
    """Two pairs of gliders: ``a`` at velocities -1 and 0, ``b`` at 0 and +1."""
    alphabet = Alphabet((BOTTOM, "a", "b"))
    movers = [Glider("a", -1), Glider("a", 0), Glider("b", 0), Glider("b", 1)]
    bottom = Glider(BOTTOM, 0)
    dom = [(g, bottom) for g in movers if g.velocity != bottom.velocity]
    return GliderSystem(alphabet, 1, movers + [bottom], dom)


def _builtin_anbn(name="anbn"):
    A = Alphabet(tuple(_AB))
    return Construction(name, _table(_AB, 1, ANBN_TABLE), literal("ab", A),
                        _run_oracle(["a", "b"], lambda n, m: n == m, "a^n b^n"))


def _builtin_anban():
    A = Alphabet(tuple(_AB))
    return Construction("anban", _table(_AB, 1, ANBAN_TABLE), literal("aba", A),
                        _run_oracle(["a", "b", "a"], lambda n, one, m: one == 1 and n == m, "a^n b a^n"))


def _builtin_anbmc():
    abc = "_abc"
    A = Alphabet(tuple(abc))
    return Construction("anbmc", _table(abc, 1, ANBMC_TABLE), parse_pattern("a*abc", A),
                        _run_oracle(["a", "b", "c"], lambda n, m, one: one == 1 and n >= m, "a^n b^m c, n>=m>0"))


def _builtin_anbm():
    A = Alphabet(tuple(_AB))
    return Construction("anbm", _table(_AB, 1, ANBN_TABLE), parse_pattern("a*ab", A),
                        _run_oracle(["a", "b"], lambda n, m: n >= m, "a^n b^m, n>=m>0"))


def _builtin_anbncn():
    abc = "_abc"
    A = Alphabet(tuple(abc))
    return Construction("anbncn", _table(abc, 2, ANBNCN_TABLE), literal("abc", A),
                        _run_oracle(["a", "b", "c"], lambda n, m, k: n == m == k, "a^n b^n c^n"))


def _builtin_anbncndn():
    abcd = "_abcd"
    A = Alphabet(tuple(abcd))
    return Construction("anbncndn", _table(abcd, 2, ANBNCNDN_TABLE), literal("abcd", A),
                        _run_oracle(["a", "b", "c", "d"], lambda n, m, k, j: n == m == k == j, "a^n b^n c^n d^n"))


def _builtin_rule90():
    rule = _rule90()
    return Construction("rule90", rule, literal("1", rule.alphabet), rule90_oracle())


def _builtin_two_captains():
    gs = _two_captains()
    base = _builtin_anbn("two_captains")
    return Construction("two_captains", gtor(gs), literal("ab", gs.alphabet), base.oracle, gs)


_BUILTINS = {
    "anbn": _builtin_anbn,
    "anban": _builtin_anban,
    "anbmc": _builtin_anbmc,
    "anbm": _builtin_anbm,
    "anbncn": _builtin_anbncn,
    "anbncndn": _builtin_anbncndn,
    "rule90": _builtin_rule90,
    "two_captains": _builtin_two_captains,
}

BUILTIN_NAMES = tuple(_BUILTINS)


def builtin(name: str) -> Construction:
    try:
        factory = _BUILTINS[name]
    except KeyError:
        raise UnknownConstruction(f"unknown construction {name!r}; choose from {', '.join(_BUILTINS)}") from None
    return factory()


# -- builders ----------------------------------------------------------------

def _word(w) -> tuple:
    w = tuple(w)
    if not w:
        raise EmptyWord("construction words must be non-empty")
    if BOTTOM in w:
        raise ValueError(f"{BOTTOM!r} is reserved for the quiescent symbol")
    return w


def _alphabet_for(*words) -> Alphabet:
    seen: dict = {}
    for w in words:
        for tok in w:
            seen.setdefault(tok, None)
    return Alphabet((BOTTOM,) + tuple(seen))


def _sign(d) -> int:
    if d in ("right", "r", 1, "+1", "+"):
        return 1
    if d in ("left", "l", -1, "-1", "-"):
        return -1
    raise ValueError(f"direction must be 'left' or 'right', got {d!r}")


def _compile(name, gs, init_word, oracle, params) -> Construction:
    return Construction(name, gtor(gs), literal(init_word, gs.alphabet), oracle, gs, params=params)


def _under_background(movers, bottom: Glider) -> list:
    return [(g, bottom) for g in movers if g.velocity != bottom.velocity]


def build_shift_concat(w, s: int, d) -> Construction:
    """Shift every copy of ``w`` by ``s`` and add one more copy on side ``d``.

    The language is ``{w^n : n >= 1}``.  The two velocities per symbol never
    disagree on a reachable window because ``w^n`` has period ``|w|``.
    """
    w = _word(w)
    k = len(w)
    s2 = s + _sign(d) * k
    r = max(abs(s), abs(s2))
    alphabet = _alphabet_for(w)
    syms = list(dict.fromkeys(w))
    movers = [Glider(x, v) for x in syms for v in (s, s2)]
    bottom = Glider(BOTTOM, s)
    gs = GliderSystem(alphabet, r, movers + [bottom], _under_background(movers, bottom))
    params = {"w": "".join(w) if alphabet.single_char else " ".join(w), "s": s, "d": "right" if _sign(d) > 0 else "left"}
    return _compile("shift_concat", gs, w, power_oracle(w), params)


BOTTOM_MODES = ("shift", "interval", "singleton")


def _xsets(k: int, r: int, mode: str, left: bool) -> list:
    """Background velocities an injection glider dominates, for each letter of a block."""
    out = []
    for i in range(1, k + 1):
        kk = k - i
        if kk <= r:
            xs = list(range(kk - r, r + 1)) if left else list(range(-r, r - kk + 1))
        elif mode == "interval":
            xs = list(range(1, 2 * r + 1 - kk + 1))
        else:
            xs = [2 * r + 1 - kk]
        out.append(xs if left else [-x for x in xs])
    return out


def build_two_block(w1, w2, bottom: str = "shift") -> Construction:
    """``{w1^n w2^n : n >= 1}`` at radius ``ceil((|w1|+|w2|)/2)``.

    Every symbol shifts by ``s = |w1| - r``.  A fresh ``w1`` is copied from
    the leftmost period at velocity ``s - |w1| = -r`` and a fresh ``w2`` from
    the rightmost period at velocity ``s + |w2|``.

    ``bottom`` picks the quiescent gliders: ``"shift"`` uses one at velocity
    ``s``; ``"interval"`` and ``"singleton"`` use per-letter velocity sets
    written with a case formula whose second branch can be read either as an
    interval ``[1, 2r+1-k]`` or as the single value ``2r+1-k``.
    """
    if bottom not in BOTTOM_MODES:
        raise ValueError(f"bottom must be one of {BOTTOM_MODES}")
    w1, w2 = _word(w1), _word(w2)
    k1, k2 = len(w1), len(w2)
    r = math.ceil((k1 + k2) / 2)
    s = k1 - r
    alphabet = _alphabet_for(w1, w2)
    syms = list(dict.fromkeys(w1 + w2))
    shifts = [Glider(x, s) for x in syms]
    left = [Glider(x, s - k1) for x in dict.fromkeys(w1)]
    right = [Glider(x, s + k2) for x in dict.fromkeys(w2)]
    injections = left + right
    dom = [(g, h) for g in shifts for h in injections if g.value != h.value]
    if bottom == "shift":
        bottoms = [Glider(BOTTOM, s)]
        dom += _under_background(shifts + injections, bottoms[0])
    else:
        pairs = set()
        for tok, xs in zip(w1, _xsets(k1, r, bottom, left=True)):
            pairs.update((Glider(tok, s - k1), Glider(BOTTOM, x)) for x in xs)
        for tok, xs in zip(w2, _xsets(k2, r, bottom, left=False)):
            pairs.update((Glider(tok, s + k2), Glider(BOTTOM, x)) for x in xs)
        bottoms = sorted({lo for _, lo in pairs}, key=lambda g: g.velocity)
        pairs = {(hi, lo) for hi, lo in pairs if hi.velocity != lo.velocity}
        pairs.update((g, b) for g in shifts for b in bottoms if g.velocity != b.velocity)
        dom += sorted(pairs)
    gs = GliderSystem(alphabet, r, shifts + injections + bottoms, dom)
    render = (lambda w: "".join(w)) if alphabet.single_char else (lambda w: " ".join(w))
    oracle = product_oracle([(w1, 1, 0), (w2, 1, 0)])
    return _compile("two_block", gs, w1 + w2, oracle, {"w1": render(w1), "w2": render(w2), "bottom": bottom})


def counter_symbols(r: int) -> list:
    """Tokens for ``a_{-r} … a_{-1} a_1 … a_r``: letters when they fit, else ``a-3``-style names."""
    if 2 * r <= 26:
        return [chr(ord("a") + k) for k in range(2 * r)]
    return [f"a{i}" for i in range(-r, 0)] + [f"a{i}" for i in range(1, r + 1)]


def build_nested_counters(r: int) -> Construction:
    """``{a_{-r}^n … a_{-1}^n a_1^n … a_r^n}`` with two gliders per symbol.

    ``a_i`` moves at velocities ``i`` and ``i - sign(i)``; gliders of inner
    symbols dominate those of outer symbols on the same side.
    """
    if r < 1:
        raise RadiusZero("nested counters need r >= 1")
    toks = counter_symbols(r)
    index = list(range(-r, 0)) + list(range(1, r + 1))
    sym = dict(zip(index, toks))
    alphabet = Alphabet((BOTTOM,) + tuple(toks))
    movers = []
    for i in index:
        sg = 1 if i > 0 else -1
        movers += [Glider(sym[i], i), Glider(sym[i], i - sg)]
    dom = []
    for g in movers:
        for h in movers:
            i, j = index[toks.index(g.value)], index[toks.index(h.value)]
            if (i > 0) == (j > 0) and abs(i) < abs(j) and g.velocity != h.velocity:
                dom.append((g, h))
    bottom = Glider(BOTTOM, 0)
    dom += _under_background(movers, bottom)
    gs = GliderSystem(alphabet, r, movers + [bottom], dom)
    oracle = product_oracle([((t,), 1, 0) for t in toks])
    return _compile("nested_counters", gs, toks, oracle, {"r": r})


def build_block_repetition(words: list, exprs: list) -> Construction:
    """``{Π w_i^(a_i·n + b_i) : n >= 1}`` for linear exponents ``a_i·n + b_i``.

    Block ``i`` is periodic with composed period ``w_i^(a_i)`` of length
    ``k_i``.  Blocks shift by ``s_1 = k_1 - r`` and ``s_{i+1} = s_i + k_{i+1}``
    and each gains one composed period on its left, copied at velocity
    ``s_i - k_i``, which keeps neighbouring blocks flush.  Symbols should not
    be shared between blocks (two blocks reusing a symbol also share its
    gliders); the two-block case with exponents ``n, n`` is delegated to
    :func:`build_two_block`, which handles shared symbols.
    """
    if len(words) != len(exprs):
        raise LengthMismatch(f"{len(words)} words but {len(exprs)} exponents")
    if not words:
        raise EmptyWord("need at least one block")
    words = [_word(w) for w in words]
    exprs = [e if isinstance(e, LinearExpr) else LinearExpr.parse(e) if isinstance(e, str) else LinearExpr(*e)
             for e in exprs]
    for e in exprs:
        if e.a <= 0 or e.b < 0:
            raise ValueError(f"exponent {e} must have a > 0 and b >= 0")
    if len(words) == 2 and all(e == LinearExpr(1, 0) for e in exprs):
        base = build_two_block(words[0], words[1])
        return Construction("block_repetition", base.rule, base.initial, base.oracle, base.system,
                            params={"words": [base.params["w1"], base.params["w2"]], "exprs": ["n", "n"]})
    ks = [e.a * len(w) for w, e in zip(words, exprs)]
    r = math.ceil(sum(ks) / 2)
    alphabet = _alphabet_for(*words)
    shifts = [ks[0] - r]
    for k in ks[1:]:
        shifts.append(shifts[-1] + k)
    movers = []
    for w, k, s in zip(words, ks, shifts):
        for tok in dict.fromkeys(w):
            movers += [Glider(tok, s), Glider(tok, s - k)]
    movers = list(dict.fromkeys(movers))
    bottom = Glider(BOTTOM, shifts[0])
    gs = GliderSystem(alphabet, r, movers + [bottom], _under_background(movers, bottom))
    init = tuple(tok for w, e in zip(words, exprs) for _ in range(e.a + e.b) for tok in w)
    oracle = product_oracle([(w, e.a, e.b) for w, e in zip(words, exprs)])
    render = (lambda w: "".join(w)) if alphabet.single_char else (lambda w: " ".join(w))
    params = {"words": [render(w) for w in words], "exprs": [str(e) for e in exprs]}
    return _compile("block_repetition", gs, init, oracle, params)


BUILDERS = ("shift_concat", "two_block", "nested_counters", "block_repetition")


def from_params(name: str, params: dict) -> Construction:
    """Build a construction from string parameters (used by the command line)."""
    if name in _BUILTINS:
        if params:
            raise ValueError(f"built-in {name!r} takes no parameters")
        return builtin(name)
    try:
        if name == "shift_concat":
            return build_shift_concat(_split(params["w"]), int(params.get("s", 0)), params.get("d", "right"))
        if name == "two_block":
            return build_two_block(_split(params["w1"]), _split(params["w2"]), params.get("bottom", "shift"))
        if name == "nested_counters":
            return build_nested_counters(int(params["r"]))
        if name == "block_repetition":
            words = [_split(w) for w in params["words"].split(",")]
            exprs = [LinearExpr.parse(e) for e in params["exprs"].split(",")]
            return build_block_repetition(words, exprs)
    except KeyError as exc:
        raise ValueError(f"missing parameter {exc.args[0]!r} for {name}") from None
    raise UnknownConstruction(f"unknown construction {name!r}")


def _split(text: str) -> tuple:
    return tuple(text.split()) if " " in text.strip() else tuple(text.strip())
