"""Acceptance criteria, one test each, each reporting a PASS or FAIL line."""

import contextlib
import itertools
import os
import random
import subprocess
import sys
import time

import numpy as np
import pytest

from calang.analysis import difference_profile, radius_lower_bound, safety_check
from calang.cli import main
from calang.constructions import BUILTIN_NAMES, build_block_repetition, build_shift_concat, build_two_block, builtin
from calang.core import Alphabet, FiniteConfiguration, RuleTable, evolve, step
from calang.gliders import (
    ALL,
    Glider,
    check_soundness,
    classify_spreading,
    coexistence_check,
    derive_glider_system,
    gtor,
    obs_non_glider,
)
from calang.language import Budgets, feasible_neighborhoods, generate_language, pad
from calang.regset import parse_pattern

from _acceptance_log import RESULTS

SUITE_START = time.perf_counter()


@contextlib.contextmanager
def criterion(n, text):
    try:
        yield
    except BaseException as exc:
        line = f"FAIL criterion {n}: {text} ({type(exc).__name__}: {str(exc).splitlines()[0] if str(exc) else ''})"
        RESULTS.append(line)
        print(line)
        raise
    line = f"PASS criterion {n}: {text}"
    RESULTS.append(line)
    print(line)


def words(*strings):
    return {tuple(s) for s in strings}


def sample_of(c, steps, word_len=12, F=None):
    return generate_language(c.rule, F or c.initial, Budgets(max_steps=steps, max_word_len=word_len))


def test_criterion_01_anbn():
    with criterion(1, "anbn from ab at T=19 is a^n b^n for n <= 20, under 1 s"):
        c = builtin("anbn")
        t0 = time.perf_counter()
        got = sample_of(c, 19).word_set()
        elapsed = time.perf_counter() - t0
        assert got == words(*("a" * n + "b" * n for n in range(1, 21)))
        assert elapsed < 1.0, f"took {elapsed:.3f} s"


def test_criterion_02_anban():
    with criterion(2, "anban from aba at T=14 is a^n b a^n for n <= 15, under 1 s"):
        c = builtin("anban")
        t0 = time.perf_counter()
        got = sample_of(c, 14).word_set()
        elapsed = time.perf_counter() - t0
        assert got == words(*("a" * n + "b" + "a" * n for n in range(1, 16)))
        assert elapsed < 1.0, f"took {elapsed:.3f} s"


def test_criterion_03_anbmc():
    with criterion(3, "anbmc from a*abc (word length 18, T=15) up to length 18 is a^n b^m c, n >= m > 0"):
        c = builtin("anbmc")
        got = sample_of(c, 15, 18, parse_pattern("a*abc", c.alphabet)).up_to(18)
        expected = words(*("a" * n + "b" * m + "c" for n in range(1, 18) for m in range(1, n + 1)
                           if n + m + 1 <= 18))
        assert got == expected


def test_criterion_04_anbm():
    with criterion(4, "anbm from a*ab (word length 16, T=14) up to length 16 is a^n b^m, n >= m > 0"):
        c = builtin("anbm")
        got = sample_of(c, 14, 16, parse_pattern("a*ab", c.alphabet)).up_to(16)
        expected = words(*("a" * n + "b" * m for n in range(1, 17) for m in range(1, n + 1) if n + m <= 16))
        assert got == expected


def test_criterion_05_anbncn():
    with criterion(5, "anbncn from abc at T=14 is a^n b^n c^n for n <= 15; widths 3, 6, 9, 12"):
        c = builtin("anbncn")
        got = sample_of(c, 14).word_set()
        assert got == words(*("a" * n + "b" * n + "c" * n for n in range(1, 16)))
        rows = evolve(c.rule, pad("abc", c.alphabet), 3)
        assert [r.width for r in rows] == [3, 6, 9, 12]


def test_criterion_06_anbncndn():
    with criterion(6, "anbncndn from abcd at T=11 is a^n b^n c^n d^n for n <= 12; first rows match"):
        c = builtin("anbncndn")
        got = sample_of(c, 11).word_set()
        assert got == words(*("".join(x * n for x in "abcd") for n in range(1, 13)))
        rows = evolve(c.rule, pad("abcd", c.alphabet, offset=-2), 2)
        expected = ["abcd", "aabbccdd", "aaabbbcccddd"]
        assert ["".join(r.word) for r in rows] == expected
        assert [r.interval for r in rows] == [(-2, 1), (-4, 3), (-6, 5)]
        for r, text, (lo, hi) in zip(rows, expected, [(-2, 1), (-4, 3), (-6, 5)]):
            assert [c.alphabet.symbols[r.cell(z)] for z in range(lo, hi + 1)] == list(text)


def reconstruction_instances():
    rng = random.Random(20240615)
    out = [(name, builtin(name)) for name in BUILTIN_NAMES]
    for _ in range(5):
        w = "".join(rng.choice("abc") for _ in range(rng.randint(1, 3)))
        s, d = rng.randint(-2, 2), rng.choice(["left", "right"])
        out.append((f"shift_concat({w},{s},{d})", build_shift_concat(w, s, d)))
    for _ in range(5):
        w1 = "".join(rng.choice("abc") for _ in range(rng.randint(1, 2)))
        w2 = "".join(rng.choice("abc") for _ in range(rng.randint(1, 2)))
        out.append((f"two_block({w1},{w2})", build_two_block(w1, w2)))
    return out


def test_criterion_07_reconstruction():
    with criterion(7, "derived glider systems are sound and GtoR reproduces every rule on its FN"):
        failures = []
        for label, c in reconstruction_instances():
            fn = feasible_neighborhoods(c.rule, c.initial, Budgets(max_steps=20, max_word_len=c.budgets.max_word_len))
            if not fn.stabilized:
                failures.append(f"{label}: FN not stabilized at T=20")
                continue
            gs = derive_glider_system(c.rule, fn)
            report = check_soundness(c.rule, fn, gs)
            if not report.sound:
                failures.append(f"{label}: unsound (acyclic={report.acyclic}, covered={report.covered}, "
                                f"maximal={report.maximal_agree})")
                continue
            codes = fn.code_array()
            mismatches = int(np.count_nonzero(gtor(gs).table[codes] != c.rule.table[codes]))
            if mismatches:
                failures.append(f"{label}: {mismatches} GtoR mismatches")
        assert not failures, "; ".join(failures)


def test_criterion_08_obs_non_glider():
    with criterion(8, "rule90 has a non-glider window 111 -> 0; built-in constructions have none"):
        found = obs_non_glider(builtin("rule90").rule, ALL)
        assert (("1", "1", "1"), "0") in found
        nonempty = [name for name in BUILTIN_NAMES if name != "rule90" and obs_non_glider(builtin(name).rule, ALL)]
        assert not nonempty, f"non-glider windows in {nonempty}"


def random_rule(rng, k, r):
    symbols = tuple("_abc"[:k])
    alphabet = Alphabet(symbols)
    table = rng.integers(0, k, size=k ** (2 * r + 1))
    table[0] = 0
    return RuleTable(alphabet, r, table)


def test_criterion_09_width_growth():
    with criterion(9, "1000 random rule/configuration pairs never grow more than 2r nor leave the r-widened interval"):
        rng = np.random.default_rng(9)
        for _ in range(1000):
            r, k = int(rng.integers(1, 4)), int(rng.integers(2, 5))
            rule = random_rule(rng, k, r)
            cells = rng.integers(0, k, size=int(rng.integers(1, 25)))
            cells[0] = cells[-1] = int(rng.integers(1, k))
            c = FiniteConfiguration(rule.alphabet, int(rng.integers(-10, 10)), tuple(int(x) for x in cells))
            nxt = step(rule, c)
            assert nxt.width - c.width <= 2 * r
            if not nxt.is_empty:
                (m, M), (m2, M2) = c.interval, nxt.interval
                assert m - r <= m2 and M2 <= M + r


def loci_meet(alphabet, r, g, h):
    """Is there a window with g's value at offset -g.velocity and h's at -h.velocity?"""
    for window in itertools.product(alphabet.symbols, repeat=2 * r + 1):
        if window[r - g.velocity] == g.value and window[r - h.velocity] == h.value:
            return True
    return False


def test_criterion_10_coexistence():
    with criterion(10, "coexistence rejects exactly the value-and-velocity-distinct pairs (|S| <= 3, r <= 2)"):
        checked = 0
        for k, r in itertools.product((2, 3), (1, 2)):
            alphabet = Alphabet(tuple("_ab"[:k]))
            gliders = [Glider(s, i) for s in alphabet.symbols for i in range(-r, r + 1)]
            for g, h in itertools.product(gliders, repeat=2):
                if g == h:
                    continue
                # both persistent forces every shared window to output both values
                conflict = g.value != h.value and loci_meet(alphabet, r, g, h)
                assert coexistence_check([g, h]).ok == (not conflict), (g, h)
                checked += 1
        assert checked > 0


def test_criterion_11_shift_concat_powers():
    with criterion(11, "shift_concat at T=9 gives w^n for n <= 10 for every |w| <= 3 over abc and |s| <= 2"):
        wrong = []
        for n in (1, 2, 3):
            for w in itertools.product("abc", repeat=n):
                for s in range(-2, 3):
                    for d in ("left", "right"):
                        c = build_shift_concat(w, s, d)
                        got = sample_of(c, 9).word_set()
                        if got != {tuple(w) * m for m in range(1, 11)}:
                            wrong.append(("".join(w), s, d))
        assert not wrong, f"{len(wrong)} wrong, e.g. {wrong[:5]}"


def test_criterion_12_block_repetition():
    with criterion(12, "block_repetition([aba, c], [2n, n+1]) has r=4, words (aba)^2n c^(n+1) for n <= 8, bound 7"):
        c = build_block_repetition(["aba", "c"], ["2n", "n+1"])
        assert c.radius == 4
        sample = sample_of(c, 7)
        assert sample.word_set() == words(*("aba" * (2 * n) + "c" * (n + 1) for n in range(1, 9)))
        assert difference_profile(sample).bound == 7
        assert radius_lower_bound(7) == 4


def test_criterion_13_spreading():
    with criterion(13, "spreading kinds: {0,1,2} right(2), {-1,0} left(1), {-1,0,1} two-way, {1,2} shift"):
        def kind(vs):
            return str(classify_spreading([Glider("a", v) for v in vs], "a"))

        assert kind([0, 1, 2]) == "right(2)"
        assert kind([-1, 0]) == "left(1)"
        assert kind([-1, 0, 1]) == "two-way"
        assert kind([1, 2]) == "shift"


def test_criterion_14_safety():
    with criterion(14, "safety on anbn: aab+ has witness (ab, 1, aabb); a+b+a is bounded-safe at T=50"):
        c = builtin("anbn")
        budgets = Budgets(max_steps=50)
        res = safety_check(c.rule, c.initial, parse_pattern("aab+", c.alphabet), budgets)
        assert res.witness == (tuple("ab"), 1, tuple("aabb"))
        res = safety_check(c.rule, c.initial, parse_pattern("a+b+a", c.alphabet), budgets)
        assert res.safe and res.budgets.max_steps == 50


ARTIFACT_COMMANDS = [
    ("anbncn.jsonl", ["lang", "{anbncn}", "--init-re", "abc", "--max-steps", "12"]),
    ("anbm.jsonl", ["lang", "{anbm}", "--init-re", "a*ab", "--max-steps", "10", "--max-word-len", "10"]),
    ("anbncndn.pgm", ["simulate", "{anbncndn}", "--init", "abcd", "--steps", "6", "--format", "pgm"]),
    ("anbncndn.txt", ["simulate", "{anbncndn}", "--init", "abcd", "--steps", "6"]),
    ("derive.gliders", ["gliders", "derive", "{anbm}", "--init-re", "a*ab"]),
    ("check.json", ["gliders", "check", "{anbncn}", "--init-re", "abc"]),
    ("safety.json", ["safety", "{anbm}", "--init-re", "a*ab", "--bad-re", "a+b+a"]),
    ("width.json", ["analyze", "width", "{anbncn}", "--init-re", "abc"]),
]


def make_artifacts(root, threads, in_process=True):
    """Export the rule files, then run every artifact command with ``-o``."""
    root.mkdir(parents=True)
    env = dict(os.environ, CALANG_THREADS=str(threads))
    paths = {}
    for name in ("anbncn", "anbm", "anbncndn"):
        argv = ["construction", "export", name, "-o", str(root)]
        assert run_cli(argv, env, in_process) == 0
        paths[name] = str(root / f"{name}.rules")
    for out, template in ARTIFACT_COMMANDS:
        argv = [a.format(**paths) for a in template] + ["-o", str(root / out)]
        assert run_cli(argv, env, in_process) == 0, argv
    return {p.name: p.read_bytes() for p in sorted(root.iterdir())}


def run_cli(argv, env, in_process):
    if not in_process:
        return subprocess.run([sys.executable, "-m", "calang", *argv], env=env, capture_output=True).returncode
    saved = os.environ.get("CALANG_THREADS")
    os.environ["CALANG_THREADS"] = env["CALANG_THREADS"]
    try:
        return main(argv)
    finally:
        if saved is None:
            del os.environ["CALANG_THREADS"]
        else:
            os.environ["CALANG_THREADS"] = saved


def test_criterion_15_determinism(tmp_path, capsys):
    with criterion(15, "artifacts are byte-identical across runs and with CALANG_THREADS 1 and 8"):
        runs = [
            make_artifacts(tmp_path / "t1a", 1),
            make_artifacts(tmp_path / "t1b", 1),
            make_artifacts(tmp_path / "t8a", 8),
            make_artifacts(tmp_path / "t8b", 8, in_process=False),
        ]
        assert len(runs[0]) == len(ARTIFACT_COMMANDS) + 6
        for other in runs[1:]:
            assert other.keys() == runs[0].keys()
            diff = [k for k in runs[0] if runs[0][k] != other[k]]
            assert not diff, f"differing artifacts: {diff}"


def test_criterion_14_suite_time():
    with criterion(14, "acceptance suite finished within 60 s"):
        elapsed = time.perf_counter() - SUITE_START
        assert elapsed < 60, f"took {elapsed:.1f} s"
