"""
Parameterized constructions, radius bounds and a safety query
=============================================================

Build rules from glider systems, check the radius against the gaps between
word lengths, and search a language for a forbidden pattern.
"""

# %%
import os
import tempfile

from calang import (
    Budgets,
    build_block_repetition,
    build_shift_concat,
    build_two_block,
    builtin,
    difference_profile,
    evolve,
    generate_language,
    pad,
    radius_lower_bound,
    safety_check,
)
from calang.regset import parse_pattern
from calang.render import render_ascii, render_pgm

# %%
# Repetitions of one word that drift while they grow.
c = build_shift_concat("abc", 1, "right")
print(render_ascii(evolve(c.rule, pad("abc", c.alphabet), 4), c.alphabet))

# %%
# Two blocks of equal count.
c = build_two_block("ab", "c")
print([w for w in generate_language(c.rule, c.initial, Budgets(max_steps=4)).rendered()])

# %%
# (aba)^{2n} c^{n+1}: consecutive lengths differ by 7, so no radius below 4 can work,
# and the construction uses exactly 4.
c = build_block_repetition(["aba", "c"], ["2n", "n+1"])
profile = difference_profile(generate_language(c.rule, c.initial, Budgets(max_steps=5)))
print(profile.lengths, "bound", profile.bound, "-> radius >=", radius_lower_bound(profile.bound),
      "; built with radius", c.radius)

# %%
# Safety: can the a^n b^n table ever produce a word in aab+ ?  Or in a+b+a ?
anbn = builtin("anbn")
for bad in ("aab+", "a+b+a"):
    result = safety_check(anbn.rule, anbn.initial, parse_pattern(bad, anbn.alphabet), Budgets(max_steps=50))
    print(bad, "->", result.as_dict()["status"], result.as_dict().get("witness"))

# %%
# Save a gray-scale space-time image of the four-block rule.
c = builtin("anbncndn")
out = os.path.join(tempfile.gettempdir(), "anbncndn.pgm")
with open(out, "wb") as fh:
    fh.write(render_pgm(evolve(c.rule, pad("abcd", c.alphabet), 12), c.alphabet))
print("wrote", out)
