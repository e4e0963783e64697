"""
Gliders and dominance
=====================

Read a rule as a set of one-cell carriers ("gliders") plus an order saying
which carrier wins when several are present in the same window, then rebuild
the rule from that description.
"""

# %%
import numpy as np

from calang import (
    Budgets,
    builtin,
    check_soundness,
    derive_glider_system,
    feasible_neighborhoods,
    gtor,
    obs_non_glider,
)
from calang.analysis import spreading_report
from calang.gliders import format_gliders

anbn = builtin("anbn")
fn = feasible_neighborhoods(anbn.rule, anbn.initial, Budgets(max_steps=20))
print(len(fn), "windows are reachable from ab; stabilized:", fn.stabilized)

# %%
# Gliders and the dominance pairs the rule implies on those windows.
system = derive_glider_system(anbn.rule, fn)
print(format_gliders(system, init="ab"))

# %%
# The three soundness conditions, then the reconstruction.
print(check_soundness(anbn.rule, fn, system).as_dict())
rebuilt = gtor(system)
codes = fn.code_array()
print("rebuilt table agrees on every reachable window:",
      bool(np.array_equal(rebuilt.table[codes], anbn.rule.table[codes])))

# %%
# Velocity sets of the gliders that persist on the reachable windows decide how
# each symbol spreads.
for symbol, kind in spreading_report(anbn.rule, fn).items():
    print(symbol, kind)

# %%
# Rule 90 writes 0 into the window 111, a symbol found nowhere in the window,
# so no glider can account for that output.
r90 = builtin("rule90")
print(obs_non_glider(r90.rule))
fn90 = feasible_neighborhoods(r90.rule, r90.initial, Budgets(max_steps=20))
report = check_soundness(r90.rule, fn90, derive_glider_system(r90.rule, fn90))
print("rule 90 sound:", report.sound)
