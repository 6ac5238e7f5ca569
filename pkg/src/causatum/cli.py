"""Command-line front end.

Output is machine-first: ``key=value`` lines, optionally followed by a
``---`` line and free text.  Exit status is 0 on success, 1 on a domain
error and 2 on a usage error.
"""

from __future__ import annotations

import argparse
import contextlib
import io
import os
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from . import decide, explain, inus, stat, worlds
from .errors import CausatumError
from .kb import KnowledgeBase, format_number, load_kb, parse_kb

LIMIT_ENV = "CAUSATUM_WORLD_LIMIT"


@dataclass
class CommandResult:
    exit_code: int
    records: list[tuple[str, str]] = field(default_factory=list)
    text: list[str] = field(default_factory=list)
    error: str = ""

    @property
    def stdout(self) -> str:
        lines = [f"{k}={v}" for k, v in self.records]
        if self.text:
            lines.append("---")
            lines.extend(self.text)
        return "\n".join(lines) + ("\n" if lines else "")

    def get(self, key: str) -> str:
        for k, v in self.records:
            if k == key:
                return v
        raise KeyError(key)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _fmt(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, Fraction):
        return format_number(value)
    if isinstance(value, (set, frozenset, list, tuple)):
        return ",".join(sorted(str(v) for v in value))
    if value is None:
        return "none"
    return str(value)


def _build_parser() -> _Parser:
    p = _Parser(prog="causatum", description="Decision structures and causal explanations.")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    s = sub.add_parser("worlds", help="possible-world counts for a KB")
    s.add_argument("kb")
    s.add_argument("--limit", type=int)

    s = sub.add_parser("plan", help="solve the KB's decision problem")
    s.add_argument("kb")

    for name in ("explain", "bench"):
        s = sub.add_parser(name)
        s.add_argument("kb")
        s.add_argument("--goal", required=True)
        s.add_argument("--success", required=True, help="binding set name or bindings file")
        s.add_argument("--failure", required=True, help="binding set name or bindings file")
        if name == "explain":
            s.add_argument("--level", type=int, choices=explain.LEVELS, default=3)

    s = sub.add_parser("inus", help="scenarios and classification of a factor")
    s.add_argument("kb")
    s.add_argument("--effect", required=True)
    s.add_argument("--factor", required=True)
    s.add_argument("--occurred", default="", help="comma-separated events that occurred")
    s.add_argument("--absent", default="", help="comma-separated events that were absent")

    s = sub.add_parser("fork", help="conjunctive-fork conditions")
    s.add_argument("kb")
    s.add_argument("--dist", required=True)
    s.add_argument("--x", required=True)
    s.add_argument("--y", required=True)
    s.add_argument("--c", required=True)

    s = sub.add_parser("srel", help="statistical relevance of C to B in context A")
    s.add_argument("kb")
    s.add_argument("--dist", required=True)
    s.add_argument("--a", required=True)
    s.add_argument("--b", required=True)
    s.add_argument("--c", required=True)
    return p


def _bindings(kb: KnowledgeBase, desc: str):
    """A binding-set name in the KB, or a file of ``event = number`` lines."""
    if desc in kb.binding_sets:
        return desc
    path = Path(desc)
    if not path.exists():
        raise CausatumError(f"no binding set or file named {desc!r}")
    text = path.read_text(encoding="utf-8")
    if not any(line.strip().startswith("#BIND") for line in text.splitlines()):
        text = "#BIND\n" + text
    names = "\n".join(kb.event_names)
    extra = parse_kb(f"#EVENTS\n{names}\n{text}")
    return extra.bindings


def _dist(kb: KnowledgeBase, name: str) -> stat.JointDistribution:
    if name not in kb.distributions:
        raise CausatumError(f"no distribution named {name!r}")
    return kb.distributions[name]


def _cmd_worlds(kb, args, out):
    limit = args.limit
    if limit is None:
        env = os.environ.get(LIMIT_ENV)
        try:
            limit = int(env) if env else worlds.DEFAULT_LIMIT
        except ValueError:
            raise CausatumError(f"{LIMIT_ENV} must be an integer, got {env!r}") from None
    matrix = worlds.enumerate_worlds(kb, limit=limit)
    report = worlds.combinatorics(matrix.m)
    out.records += [
        ("m", _fmt(report.m)),
        ("n", _fmt(report.n)),
        ("transition_relation_log2", _fmt(report.transition_relation_log2)),
        ("events", ",".join(matrix.events)),
    ]
    if report.generality_histogram is not None:
        out.records.append(("generality_histogram",
                            ",".join(str(c) for c in report.generality_histogram)))
    if report.mean_per_level is not None:
        out.records.append(("mean_relations_per_level", _fmt(report.mean_per_level)))
    out.text.append(f"{report.n} possible worlds over {report.m} events; "
                    f"2^{report.n} transition relations.")


def _cmd_plan(kb, args, out):
    if kb.decision is None:
        raise CausatumError("the KB has no #DECISION section")
    plan = decide.solve_plan(kb.decision)
    out.records += [
        ("horizon", _fmt(kb.decision.horizon)),
        ("acts", " ".join(plan.acts)),
        ("total_eu", _fmt(plan.total_eu)),
    ]
    for t, d in enumerate(plan.acts):
        out.records.append((f"eu{t}", _fmt(decide.expected_utility(kb.decision, t, d))))


def _explanation_records(result: explain.Explanation):
    return [
        ("goal", result.goal),
        ("level", _fmt(result.level)),
        ("cause", _fmt(result.cause)),
        ("conditions", _fmt(result.conditions)),
        ("field", _fmt(result.field)),
        ("protected", _fmt(result.protected)),
        ("protected_violations", _fmt(result.protected_violations)),
        ("op_count", _fmt(result.op_count)),
    ]


def _cmd_explain(kb, args, out):
    result = explain.explain_failure(kb, args.goal, _bindings(kb, args.success),
                                     _bindings(kb, args.failure), args.level)
    out.records += _explanation_records(result)
    if result.cause:
        out.text.append(f"{args.goal} differs because of: {', '.join(sorted(result.cause))}")


def _cmd_bench(kb, args, out):
    counts = explain.benchmark(kb, args.goal, _bindings(kb, args.success),
                               _bindings(kb, args.failure))
    for level, count in counts.items():
        out.records.append((f"level{level}", _fmt(count)))
    seq = [counts[level] for level in explain.LEVELS]
    out.records.append(("monotone", _fmt(all(a >= b for a, b in zip(seq, seq[1:])))))


def _cmd_inus(kb, args, out):
    ctx = inus.Context.from_kb(kb, args.effect)
    if args.factor not in kb.event_names:
        raise CausatumError(f"undeclared factor {args.factor!r}")
    scenarios = inus.minimally_sufficient_scenarios(ctx, kb.rules)
    label = inus.classify_factor(args.factor, ctx, scenarios)
    out.records += [
        ("effect", args.effect),
        ("factor", args.factor),
        ("scenarios", ";".join(",".join(sorted(s.conjuncts)) for s in scenarios)),
        ("classification", label.value),
    ]
    occurred = [e for e in args.occurred.split(",") if e]
    absent = [e for e in args.absent.split(",") if e]
    if occurred or absent:
        for e in occurred + absent:
            if e not in kb.event_names:
                raise CausatumError(f"undeclared event {e!r}")
        occ = {e: inus.Occurrence.OCCURRED for e in occurred}
        occ.update({e: inus.Occurrence.ABSENT for e in absent})
        judgment = inus.attribute_cause(args.factor, ctx, occ, scenarios)
        out.records.append(("verdict", judgment.verdict.value))
        out.records.append(("live_alternatives",
                            ";".join(",".join(sorted(s.conjuncts)) for s in judgment.live_alternatives)))


def _cmd_fork(kb, args, out):
    report = stat.conjunctive_fork_check(_dist(kb, args.dist), args.x, args.y, args.c)
    for cond in report.conditions:
        out.records.append((f"cond{cond.number}", _fmt(cond.holds)))
    out.records.append(("is_fork", _fmt(report.is_fork)))
    graph = kb.process_graph
    if report.is_fork and all(e in graph.nodes for e in (args.c, args.x, args.y)):
        verdict = stat.causal_fork_filter(report, args.c, args.x, args.y, graph)
        out.records.append(("filter", "accepted" if verdict.accepted else "rejected"))
        if not verdict.accepted:
            out.records.append(("reason", verdict.reason))
            if verdict.conjecture:
                out.records.append(("conjecture", verdict.conjecture))
    for cond in report.conditions:
        out.text.append(f"({cond.number}) {cond.relation}: {_fmt(cond.left)} vs {_fmt(cond.right)}")


def _cmd_srel(kb, args, out):
    report = stat.statistical_relevance(_dist(kb, args.dist), args.c, args.b, args.a)
    out.records += [
        ("condition1", _fmt(report.condition1_holds)),
        ("condition2", _fmt(report.condition2_holds)),
        ("equivalent", _fmt(report.equivalent)),
        ("relevant", _fmt(report.relevant)),
        ("null_conditioning", _fmt(report.null_conditioning)),
        ("p_b_given_ac", _fmt(report.p_b_given_ac)),
        ("p_b_given_a", _fmt(report.p_b_given_a)),
        ("p_b_given_a_not_c", _fmt(report.p_b_given_a_not_c)),
    ]


_COMMANDS = {
    "worlds": _cmd_worlds,
    "plan": _cmd_plan,
    "explain": _cmd_explain,
    "bench": _cmd_bench,
    "inus": _cmd_inus,
    "fork": _cmd_fork,
    "srel": _cmd_srel,
}


def run_command(argv: Sequence[str]) -> CommandResult:
    """Run one command and capture its output instead of printing it."""
    try:
        with contextlib.redirect_stdout(io.StringIO()), contextlib.redirect_stderr(io.StringIO()):
            args = _build_parser().parse_args(list(argv))
    except UsageError as exc:
        return CommandResult(2, error=f"usage error: {exc}")
    except SystemExit as exc:  # --help
        return CommandResult(0 if not exc.code else 2)
    out = CommandResult(0)
    try:
        kb = load_kb(args.kb)
        _COMMANDS[args.command](kb, args, out)
    except FileNotFoundError as exc:
        return CommandResult(1, error=f"error: no such file: {exc}")
    except CausatumError as exc:
        return CommandResult(1, error=f"error: {exc}")
    return out


def main(argv: Sequence[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    if any(a in ("-h", "--help") for a in argv):
        try:
            _build_parser().parse_args(list(argv))
        except SystemExit as exc:
            return exc.code or 0
        except UsageError as exc:
            print(f"usage error: {exc}", file=sys.stderr)
            return 2
    result = run_command(argv)
    sys.stdout.write(result.stdout)
    if result.error:
        print(result.error, file=sys.stderr)
    return result.exit_code


if __name__ == "__main__":
    sys.exit(main())
