import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from calang.analysis import (
    BOUNDED_SAFE,
    WITNESS,
    WidthGrowthViolation,
    check_width_growth,
    difference_profile,
    radius_lower_bound,
    safety_check,
    spreading_report,
    to_json,
    verify_language,
)
from calang.constructions import build_block_repetition, builtin
from calang.core import Alphabet, RuleTable, evolve, identity_rule
from calang.errors import AlphabetMismatch, EmptySample, PartialRuleWithALL, TruncatedSample
from calang.language import Budgets, feasible_neighborhoods, generate_language, pad, reachable_configurations
from calang.regset import contains, parse_pattern

from strategies import rule_and_config


def sample_of(c, steps, word_len=12):
    return generate_language(c.rule, c.initial, Budgets(max_steps=steps, max_word_len=word_len))


class TestDifferenceProfile:
    def test_anbn_words(self):
        p = difference_profile([tuple("ab"), tuple("aabb"), tuple("aaabbb")])
        assert p.deltas == (2, 2) and p.bound == 2

    def test_anbncn_words(self):
        assert difference_profile([tuple("".join(x * n for x in "abc")) for n in (1, 2, 3)]).bound == 3

    def test_block_repetition_bound_is_seven(self):
        c = build_block_repetition(["aba", "c"], ["2n", "n+1"])
        p = difference_profile(sample_of(c, 4))
        assert p.lengths == tuple(7 * n + 1 for n in range(1, 6))
        assert p.bound == 7 and radius_lower_bound(p.bound) == 4 == c.radius

    def test_single_and_empty(self):
        assert difference_profile([tuple("ab")]).bound == 0
        with pytest.raises(EmptySample):
            difference_profile([])

    def test_as_dict(self):
        d = difference_profile([tuple("a"), tuple("aaa")]).as_dict()
        assert d == {"lengths": [1, 3], "deltas": [2], "bound": 2, "radius_lower_bound": 1}

    @given(st.lists(st.integers(0, 30), min_size=1, max_size=20))
    def test_deltas_non_negative(self, lengths):
        p = difference_profile([("a",) * n for n in lengths])
        assert all(d >= 0 for d in p.deltas)
        assert p.bound == max(p.deltas, default=0)
        assert sum(p.deltas) == max(lengths) - min(lengths)


class TestRadiusLowerBound:
    @pytest.mark.parametrize("k,r", [(7, 4), (2, 1), (0, 0), (1, 1), (3, 2), (4, 2)])
    def test_values(self, k, r):
        assert radius_lower_bound(k) == r

    def test_negative(self):
        with pytest.raises(ValueError):
            radius_lower_bound(-1)

    @given(st.integers(1, 500))
    def test_is_least_radius_with_room(self, k):
        r = radius_lower_bound(k)
        assert 2 * r >= k and 2 * (r - 1) < k


class TestWidthGrowth:
    def test_anbn(self):
        c = builtin("anbn")
        assert check_width_growth(c.rule, evolve(c.rule, pad("ab", c.alphabet), 6)) == 2

    def test_identity(self):
        a = Alphabet(("_", "a", "b"))
        rows = [pad("abba", a), pad("a", a)]
        assert check_width_growth(identity_rule(a), rows) == 0

    def test_four_block_rows(self):
        c = builtin("anbncndn")
        rows = evolve(c.rule, pad("abcd", c.alphabet), 2)
        assert [r.width for r in rows] == [4, 8, 12]
        assert check_width_growth(c.rule, rows) == 4

    def test_empty(self):
        with pytest.raises(EmptySample):
            check_width_growth(builtin("anbn").rule, [])

    @given(rule_and_config())
    @settings(max_examples=60)
    def test_never_beyond_2r(self, pair):
        rule, c = pair
        assert check_width_growth(rule, [c]) <= 2 * rule.radius

    def test_violation_type_carries_config(self):
        err = WidthGrowthViolation("x", pad("a", Alphabet(("_", "a"))))
        assert isinstance(err, AssertionError) and err.config.word == ("a",)


def anbn_oracle(w):
    n = len(w) // 2
    return n >= 1 and tuple(w) == ("a",) * n + ("b",) * n


class TestVerifyLanguage:
    def test_anbn_len_20(self):
        sample = sample_of(builtin("anbn"), 10)
        report = verify_language(sample, builtin("anbn").oracle, 20)
        assert report.equivalent and report.checked == 10

    def test_anbn_scan_agrees_with_hand_predicate(self):
        sample = sample_of(builtin("anbn"), 10)
        report = verify_language(sample, anbn_oracle, 12, method="scan")
        assert report.equivalent and report.method == "scan" and report.checked == 6

    def test_anbmc(self):
        c = builtin("anbmc")
        sample = sample_of(c, 10, 10)
        assert verify_language(sample, c.oracle, sample.frontier - 1).equivalent

    def test_mutated_table_is_caught(self):
        c = builtin("anbn")
        entries = dict(c.rule.entries)
        entries[("a", "b", "_")] = "a"
        bad = RuleTable.from_entries(c.alphabet, 1, entries)
        sample = generate_language(bad, c.initial, Budgets(max_steps=10))
        report = verify_language(sample, c.oracle, 8)
        assert not report.equivalent
        assert report.spurious or report.missing

    def test_truncated(self):
        sample = sample_of(builtin("anbn"), 3)
        assert sample.truncated
        with pytest.raises(TruncatedSample):
            verify_language(sample, anbn_oracle, sample.frontier)
        assert verify_language(sample, anbn_oracle, sample.frontier - 1).equivalent

    def test_unknown_method(self):
        with pytest.raises(ValueError):
            verify_language(sample_of(builtin("anbn"), 3), anbn_oracle, 4, method="guess")

    def test_report_json(self):
        c = builtin("anbn")
        entries = dict(c.rule.entries)
        entries[("a", "b", "_")] = "a"
        bad = RuleTable.from_entries(c.alphabet, 1, entries)
        report = verify_language(generate_language(bad, c.initial, Budgets(max_steps=6)), anbn_oracle, 6)
        d = json.loads(to_json(report))
        assert d["equivalent"] is False
        assert all(isinstance(w, str) for w in d["spurious"] + d["missing"])


class TestSafety:
    def setup_method(self):
        self.c = builtin("anbn")
        self.budgets = Budgets(max_steps=50, max_word_len=12)

    def bad(self, text):
        return parse_pattern(text, self.c.alphabet)

    def test_witness(self):
        res = safety_check(self.c.rule, self.c.initial, self.bad("aab+"), self.budgets)
        assert res.status == WITNESS and not res.safe
        assert res.witness == (tuple("ab"), 1, tuple("aabb"))
        assert json.loads(to_json(res))["witness"] == {"source": "ab", "step": 1, "word": "aabb"}

    def test_bounded_safe(self):
        res = safety_check(self.c.rule, self.c.initial, self.bad("a+b+a"), self.budgets)
        assert res.status == BOUNDED_SAFE and res.witness is None
        assert json.loads(to_json(res))["budgets"]["max_steps"] == 50

    def test_empty_bad_set(self):
        res = safety_check(self.c.rule, self.c.initial, self.bad("∅"), self.budgets)
        assert res.safe

    def test_witness_at_step_zero(self):
        res = safety_check(self.c.rule, self.c.initial, self.bad("ab"), self.budgets)
        assert res.witness == (tuple("ab"), 0, tuple("ab"))

    def test_alphabet_mismatch(self):
        other = parse_pattern("a", Alphabet(("_", "a")))
        with pytest.raises(AlphabetMismatch):
            safety_check(self.c.rule, self.c.initial, other, self.budgets)

    @given(st.sampled_from(["a+b+a", "aab+", "a*b", "(ab)+", "aaabbb", "aaab+", "b+", "a+",
                            "a+b", "ab*", "a(a|b)*b", "aaaaabbbbb", "∅", "ab(ab)+"]))
    @settings(max_examples=30)
    def test_agrees_with_generation(self, pattern):
        budgets = Budgets(max_steps=6, max_word_len=6)
        bad = self.bad(pattern)
        res = safety_check(self.c.rule, self.c.initial, bad, budgets)
        sample = generate_language(self.c.rule, self.c.initial, budgets)
        hits = [w for w in sample if contains(bad, w)]
        assert res.safe == (not hits)
        if not res.safe:
            assert contains(bad, res.witness[2])
            src, t, word = res.witness
            assert evolve(self.c.rule, pad(src, self.c.alphabet), t)[-1].word == word


class TestSpreading:
    def test_anbn(self):
        c = builtin("anbn")
        fn = feasible_neighborhoods(c.rule, c.initial, Budgets(max_steps=20))
        spread = spreading_report(c.rule, fn)
        assert set(spread) == set(c.alphabet.symbols)
        with pytest.raises(PartialRuleWithALL):
            spreading_report(c.rule)

    def test_reachable_configurations_shape(self):
        c = builtin("anbn")
        configs = reachable_configurations(c.rule, c.initial, Budgets(max_steps=3, max_word_len=6))
        assert [len(orbit) for orbit in configs] == [4]
