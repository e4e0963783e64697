"""``calang`` command line.

Exit codes: 0 when the checked property holds (or a plain command succeeds),
1 on a violation (unsound system, safety witness, undefined window), 2 on
usage, parse or budget errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import analysis, constructions
from .core import RuleTable, evolve, format_rules, load_rules
from .errors import CalangError, CyclicDominance, UndefinedNeighborhood
from .gliders import ALL, check_soundness, derive_glider_system, format_gliders, gtor, load_gliders
from .language import (
    Budgets,
    LanguageSample,
    feasible_neighborhoods,
    generate_language,
    pad,
    reachable_configurations,
)
from .regset import enumerate_words, parse_pattern
from .render import ASCII, FORMATS, RenderSpec, parse_glyphs, parse_viewport, render

OK, VIOLATION, USAGE = 0, 1, 2


class UsageError(Exception):
    pass


# -- shared helpers -------------------------------------------------------------

def _write(args, data) -> None:
    """Send ``data`` (text or bytes) to ``args.output`` or stdout."""
    target = getattr(args, "output", None)
    if isinstance(data, str):
        data = data.encode("utf-8")
    if target and target != "-":
        with open(target, "wb") as fh:
            fh.write(data)
    else:
        sys.stdout.flush()
        sys.stdout.buffer.write(data)
        sys.stdout.flush()


def _json(report) -> str:
    return analysis.to_json(report)


def _dump(obj) -> str:
    return json.dumps(obj, ensure_ascii=False, indent=2, sort_keys=True) + "\n"


def _rules(path) -> RuleTable:
    return load_rules(path)


def _budgets(args) -> Budgets:
    return Budgets(max_steps=args.max_steps, max_word_len=args.max_word_len, max_width=args.max_width)


def _initial(args, rule):
    if not args.init_re:
        raise UsageError("--init-re is required")
    return parse_pattern(args.init_re, rule.alphabet)


def _domain(args, rule):
    """Feasible windows from ``--init-re`` or, without it, every window."""
    if args.init_re:
        return feasible_neighborhoods(rule, _initial(args, rule), _budgets(args))
    return ALL


def _add_budgets(p, steps=10) -> None:
    p.add_argument("--max-steps", type=int, default=steps, help=f"steps per orbit (default {steps})")
    p.add_argument("--max-word-len", type=int, default=12, help="longest initial word (default 12)")
    p.add_argument("--max-width", type=int, default=100_000, help="configuration width cap")


def _add_output(p) -> None:
    p.add_argument("-o", "--output", help="output file (default: stdout)")


# -- commands -----------------------------------------------------------------

def cmd_simulate(args) -> int:
    rule = _rules(args.rules)
    alphabet = rule.alphabet
    if args.init is not None:
        word = alphabet.parse_word(args.init)
    elif args.init_re:
        words = enumerate_words(parse_pattern(args.init_re, alphabet), args.max_word_len)
        if not words:
            raise UsageError(f"pattern {args.init_re!r} has no word of length <= {args.max_word_len}")
        word = words[0]
    else:
        raise UsageError("give --init or --init-re")
    spec = RenderSpec(args.format, args.steps, parse_viewport(args.viewport), parse_glyphs(args.glyphs))
    rows = evolve(rule, pad(word, alphabet), spec.steps, max_width=args.max_width)
    _write(args, render(rows, alphabet, spec))
    return OK


def cmd_lang(args) -> int:
    rule = _rules(args.rules)
    sample = generate_language(rule, _initial(args, rule), _budgets(args))
    _write(args, sample.to_jsonl())
    note = ", truncated" if sample.truncated else ""
    print(f"{len(sample)} words{note}", file=sys.stderr)
    return OK


def cmd_gliders_derive(args) -> int:
    rule = _rules(args.rules)
    fn = _domain(args, rule)
    gs = derive_glider_system(rule, fn)
    where = "all windows" if fn is ALL else f"{len(fn)} feasible windows"
    _write(args, format_gliders(gs, init=args.init_re, comment=f"derived from {where}"))
    cycle = gs.find_cycle()
    if cycle:
        print(str(CyclicDominance(cycle)), file=sys.stderr)
        return VIOLATION
    return OK


def cmd_gliders_check(args) -> int:
    rule = _rules(args.rules)
    fn = _domain(args, rule)
    if args.gliders:
        gs = load_gliders(args.gliders).system
        if (gs.alphabet, gs.radius) != (rule.alphabet, rule.radius):
            raise UsageError("glider file and rule table disagree on alphabet or radius")
    else:
        gs = derive_glider_system(rule, fn)
    report = check_soundness(rule, fn, gs)
    _write(args, _json(report))
    return OK if report.sound else VIOLATION


def cmd_gliders_compile(args) -> int:
    spec = load_gliders(args.gliders)
    rule = gtor(spec.system)
    _write(args, format_rules(rule, comment=f"compiled from {os.path.basename(args.gliders)}"))
    return OK


def cmd_construction_list(args) -> int:
    lines = [f"{name}\tbuilt-in" for name in constructions.BUILTIN_NAMES]
    hints = {
        "shift_concat": "w=WORD s=INT d=left|right",
        "two_block": "w1=WORD w2=WORD [bottom=shift|interval|singleton]",
        "nested_counters": "r=INT",
        "block_repetition": "words=W1,W2,... exprs=E1,E2,... (like 2n+1)",
    }
    lines += [f"{name}\t{hints[name]}" for name in constructions.BUILDERS]
    _write(args, "\n".join(lines) + "\n")
    return OK


def _params(items) -> dict:
    out = {}
    for item in items:
        key, sep, value = item.partition("=")
        if not sep:
            raise UsageError(f"parameters look like key=value, got {item!r}")
        out[key] = value
    return out


def cmd_construction_export(args) -> int:
    c = constructions.from_params(args.name, _params(args.params))
    system = c.system
    note = "designed glider system"
    if system is None:
        fn = feasible_neighborhoods(c.rule, c.initial, c.budgets)
        system = derive_glider_system(c.rule, fn)
        note = f"derived from {len(fn)} feasible windows"
    os.makedirs(args.outdir, exist_ok=True)
    stem = os.path.join(args.outdir, args.name)
    desc = f"{c.name}: {c.oracle.description}"
    with open(stem + ".rules", "w", encoding="utf-8", newline="\n") as fh:
        fh.write(format_rules(c.rule, comment=desc))
    with open(stem + ".gliders", "w", encoding="utf-8", newline="\n") as fh:
        fh.write(format_gliders(system, init=c.initial.pattern, comment=f"{desc}\n{note}"))
    print(f"wrote {stem}.rules and {stem}.gliders", file=sys.stderr)
    return OK


def _sample_for(args) -> LanguageSample:
    if args.input.endswith(".jsonl"):
        with open(args.input, encoding="utf-8") as fh:
            return LanguageSample.from_jsonl(fh.read())
    rule = _rules(args.input)
    return generate_language(rule, _initial(args, rule), _budgets(args))


def cmd_analyze_diff_bound(args) -> int:
    _write(args, _json(analysis.difference_profile(_sample_for(args))))
    return OK


def cmd_analyze_width(args) -> int:
    rule = _rules(args.rules)
    configs = [c for orbit in reachable_configurations(rule, _initial(args, rule), _budgets(args)) for c in orbit]
    report = {"radius": rule.radius, "bound": 2 * rule.radius, "configurations": len(configs)}
    try:
        report["max_delta"] = analysis.check_width_growth(rule, configs)
        report["holds"] = True
    except analysis.WidthGrowthViolation as exc:
        report.update(holds=False, violation=str(exc), config=rule.alphabet.render(exc.config.word))
    _write(args, _dump(report))
    return OK if report["holds"] else VIOLATION


def cmd_analyze_spreading(args) -> int:
    rule = _rules(args.rules)
    spread = analysis.spreading_report(rule, _domain(args, rule))
    _write(args, _dump(analysis.spreading_as_dict(spread)))
    return OK


def cmd_safety(args) -> int:
    rule = _rules(args.rules)
    bad = parse_pattern(args.bad_re, rule.alphabet)
    result = analysis.safety_check(rule, _initial(args, rule), bad, _budgets(args))
    _write(args, _json(result))
    return OK if result.safe else VIOLATION


# -- parser -------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="calang", description="Cellular automata as language generators.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="render a space-time diagram")
    p.add_argument("rules")
    group = p.add_mutually_exclusive_group()
    group.add_argument("--init", help="initial word")
    group.add_argument("--init-re", help="pattern; its shortlex-first word is used")
    p.add_argument("--steps", type=int, default=10)
    p.add_argument("--format", choices=FORMATS, default=ASCII)
    p.add_argument("--viewport", help="'auto' or LEFT:RIGHT grid indices")
    p.add_argument("--glyphs", help="token=glyph,... (gray levels 0-255 for pgm)")
    p.add_argument("--max-word-len", type=int, default=12)
    p.add_argument("--max-width", type=int, default=100_000)
    _add_output(p)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("lang", help="enumerate the generated language as JSON lines")
    p.add_argument("rules")
    p.add_argument("--init-re", required=True)
    _add_budgets(p)
    _add_output(p)
    p.set_defaults(func=cmd_lang)

    gl = sub.add_parser("gliders", help="derive, check or compile glider systems")
    gsub = gl.add_subparsers(dest="gliders_command", required=True)
    for name, func, what in (("derive", cmd_gliders_derive, "print the derived glider system"),
                             ("check", cmd_gliders_check, "check the three soundness conditions")):
        p = gsub.add_parser(name, help=what)
        p.add_argument("rules")
        p.add_argument("--init-re", help="feasible windows from this initial set (default: all windows)")
        if name == "check":
            p.add_argument("--gliders", help="check this system instead of the derived one")
        _add_budgets(p, steps=20)
        _add_output(p)
        p.set_defaults(func=func)
    p = gsub.add_parser("compile", help="compile a .gliders file to a .rules table")
    p.add_argument("gliders")
    _add_output(p)
    p.set_defaults(func=cmd_gliders_compile)

    co = sub.add_parser("construction", help="list or export constructions")
    csub = co.add_subparsers(dest="construction_command", required=True)
    p = csub.add_parser("list")
    _add_output(p)
    p.set_defaults(func=cmd_construction_list)
    p = csub.add_parser("export", help="write NAME.rules and NAME.gliders")
    p.add_argument("name")
    p.add_argument("params", nargs="*", help="key=value builder parameters")
    p.add_argument("-o", "--outdir", default=".")
    p.set_defaults(func=cmd_construction_export)

    an = sub.add_parser("analyze", help="structural analyses (JSON reports)")
    asub = an.add_subparsers(dest="analyze_command", required=True)
    p = asub.add_parser("diff-bound", help="difference profile of a sample")
    p.add_argument("input", help="a .jsonl sample or a .rules table (with --init-re)")
    p.add_argument("--init-re")
    _add_budgets(p)
    _add_output(p)
    p.set_defaults(func=cmd_analyze_diff_bound)
    p = asub.add_parser("width", help="per-step width growth over explored orbits")
    p.add_argument("rules")
    p.add_argument("--init-re", required=True)
    _add_budgets(p)
    _add_output(p)
    p.set_defaults(func=cmd_analyze_width)
    p = asub.add_parser("spreading", help="spreading kind of every symbol")
    p.add_argument("rules")
    p.add_argument("--init-re", help="judge on feasible windows (default: all windows)")
    _add_budgets(p, steps=20)
    _add_output(p)
    p.set_defaults(func=cmd_analyze_spreading)

    p = sub.add_parser("safety", help="bounded search for a reachable word in a bad set")
    p.add_argument("rules")
    p.add_argument("--init-re", required=True)
    p.add_argument("--bad-re", required=True)
    _add_budgets(p, steps=50)
    _add_output(p)
    p.set_defaults(func=cmd_safety)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else USAGE
    try:
        return args.func(args)
    except UndefinedNeighborhood as exc:
        print(f"error: {exc}", file=sys.stderr)
        return VIOLATION
    except CyclicDominance as exc:
        print(f"error: {exc}", file=sys.stderr)
        return VIOLATION
    except (UsageError, CalangError, ValueError, OSError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"error: {msg}", file=sys.stderr)
        return USAGE


__all__ = ["build_parser", "main"]
