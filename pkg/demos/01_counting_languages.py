"""
Counting languages from local rules
===================================

A radius-1 table over ``_ a b`` that turns ``ab`` into ``aabb``, then
``aaabbb``, and so on.  Every configuration it reaches, read between the
quiescent padding, is a word of a^n b^n.
"""

# %%
# The built-in table, printed in the ``.rules`` format.
from calang import Budgets, builtin, evolve, format_rules, generate_language, pad
from calang.analysis import verify_language
from calang.render import render_ascii

anbn = builtin("anbn")
print(format_rules(anbn.rule))

# %%
# Space-time diagram: row t is the configuration after t steps.
rows = evolve(anbn.rule, pad("ab", anbn.alphabet), 5)
print(render_ascii(rows, anbn.alphabet))

# %%
# The language sample: every word reached within 12 steps.
sample = generate_language(anbn.rule, anbn.initial, Budgets(max_steps=12))
print(sample.rendered()[:5], "...", len(sample), "words")

# %%
# Compare against an independent membership test up to length 24.
report = verify_language(sample, anbn.oracle, 24)
print("equivalent to", anbn.oracle.description, "->", report.equivalent)

# %%
# A radius-2 table does the same for three and four blocks.
for name, seed in (("anbncn", "abc"), ("anbncndn", "abcd")):
    c = builtin(name)
    print(render_ascii(evolve(c.rule, pad(seed, c.alphabet), 3), c.alphabet))

# %%
# Starting from a regular set of seeds gives a richer language: a^n b^m with n >= m.
anbm = builtin("anbm")
sample = generate_language(anbm.rule, anbm.initial, Budgets(max_steps=6, max_word_len=6))
print(sample.rendered()[:12])
print("complete below length", sample.frontier)
