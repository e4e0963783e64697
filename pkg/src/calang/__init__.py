"""Cellular automata as language generators.

The main entry points are re-exported here; see the submodules for the rest.
"""

from .analysis import (
    DifferenceProfile,
    SafetyResult,
    VerificationReport,
    check_width_growth,
    difference_profile,
    radius_lower_bound,
    safety_check,
    verify_language,
)
from .constructions import (
    BUILTIN_NAMES,
    Construction,
    LinearExpr,
    build_block_repetition,
    build_nested_counters,
    build_shift_concat,
    build_two_block,
    builtin,
)
from .core import (
    Alphabet,
    FiniteConfiguration,
    RuleTable,
    evolve,
    format_rules,
    load_rules,
    metrics,
    parse_rules,
    shift_equivalent,
    step,
)
from .errors import (
    AlphabetMismatch,
    CalangError,
    CyclicDominance,
    EmptySample,
    PartialRuleWithALL,
    PatternSyntaxError,
    RuleFormatError,
    TruncatedSample,
    UndefinedNeighborhood,
    UnknownConstruction,
    WidthBudgetExceeded,
)
from .gliders import (
    ALL,
    Glider,
    GliderSystem,
    check_soundness,
    classify_gliders,
    classify_spreading,
    coexistence_check,
    derive_glider_system,
    gtor,
    obs_non_glider,
)
from .language import Budgets, FeasibleWindowSet, LanguageSample, feasible_neighborhoods, generate_language, pad
from .regset import RegularSet, enumerate_words, parse_pattern

__version__ = "0.1.0"
