"""Knowledge base: events, rules, causal classifications and numeric data.

The on-disk format is line oriented.  ``;`` starts a comment and a line
beginning with ``#`` opens a section::

    #EVENTS
    shelf_space_adequate @t=1 @loc=store
    #CLASSIFY
    tax_rate : condition
    #RULES
    profitable <- sales_adequate & tax_rate & !recall
    #BIND            ; default bindings, "#BIND <name>" for a named set
    tax_rate = 0.4
    #THRESHOLD
    shelf_space_adequate > 24
    #DIST fork8
    vars: C X Y
    0 0 0 : 8/25
    ...
    * : 0                           ; optional, fills the rows not listed
    #DECISION
    horizon: 2
    acts: introduce skip            ; every tick, or "acts 1: ..." for one
    outcomes: strong weak
    utility * introduce strong : 10 ; "*" stands for every tick
    prob 0 introduce : 7/10 3/10
    transition 0 introduce strong : strong
    #PROCESS
    C -> X
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Mapping

from .decide import DecisionProblem
from .errors import (
    DistributionError,
    DomainError,
    DuplicateDeclarationError,
    KBSyntaxError,
    UndeclaredSymbolError,
)
from .stat import JointDistribution, ProcessGraph

__all__ = [
    "EventSymbol",
    "Literal",
    "Rule",
    "Classification",
    "KnowledgeBase",
    "Violation",
    "parse_kb",
    "serialize_kb",
    "load_kb",
    "validate_kb",
    "default_priors",
    "fixture_path",
    "format_number",
    "parse_number",
]

NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")
_NUMBER = re.compile(r"[+-]?(\d+(\.\d*)?|\.\d+)(/[+-]?\d+)?\Z")


@dataclass(frozen=True)
class EventSymbol:
    name: str
    time_index: int | None = None
    place: str | None = None


@dataclass(frozen=True)
class Literal:
    name: str
    positive: bool = True

    def __str__(self):
        return self.name if self.positive else "!" + self.name


@dataclass(frozen=True)
class Rule:
    head: str
    body: tuple[Literal, ...]

    def atoms(self) -> tuple[str, ...]:
        return tuple(lit.name for lit in self.body)

    def __str__(self):
        return f"{self.head} <- " + " & ".join(str(lit) for lit in self.body)


class Classification(enum.Enum):
    IRRELEVANT = "irrelevant"
    FIELD = "field"
    CONDITION = "condition"
    CAUSE = "cause"


@dataclass(frozen=True)
class KnowledgeBase:
    events: tuple[EventSymbol, ...] = ()
    rules: tuple[Rule, ...] = ()
    # declared (event, class) pairs; events not listed are causes
    classifications: tuple[tuple[str, Classification], ...] = ()
    distributions: Mapping[str, JointDistribution] = field(default_factory=dict)
    decision: DecisionProblem | None = None
    process_edges: tuple[tuple[str, str], ...] = ()
    bindings: Mapping[str, Fraction] = field(default_factory=dict)
    binding_sets: Mapping[str, Mapping[str, Fraction]] = field(default_factory=dict)
    thresholds: Mapping[str, Fraction] = field(default_factory=dict)

    @property
    def event_names(self) -> tuple[str, ...]:
        return tuple(e.name for e in self.events)

    def event(self, name: str) -> EventSymbol:
        for e in self.events:
            if e.name == name:
                return e
        raise DomainError(f"undeclared event {name!r}")

    def classification_of(self, name: str) -> Classification:
        for event, cls in self.classifications:
            if event == name:
                return cls
        return Classification.CAUSE

    def events_classified(self, *classes: Classification) -> frozenset[str]:
        return frozenset(n for n in self.event_names if self.classification_of(n) in classes)

    def in_scope(self) -> tuple[str, ...]:
        """Events that can vary between worlds: neither irrelevant nor field."""
        out = self.events_classified(Classification.IRRELEVANT, Classification.FIELD)
        return tuple(n for n in self.event_names if n not in out)

    @property
    def process_graph(self) -> ProcessGraph:
        nodes = {e.name: (e.time_index, e.place) for e in self.events if e.time_index is not None}
        return ProcessGraph(nodes, self.process_edges)

    def binding_set(self, name: str | None = None) -> dict[str, Fraction]:
        """Default bindings overlaid with the named set."""
        out = dict(self.bindings)
        if name is not None:
            if name not in self.binding_sets:
                raise DomainError(f"no binding set named {name!r}")
            out.update(self.binding_sets[name])
        return out


@dataclass(frozen=True)
class Violation:
    record: str
    message: str

    def __str__(self):
        return f"{self.record}: {self.message}"


# -- numbers ----------------------------------------------------------------

def parse_number(text: str) -> Fraction:
    if not _NUMBER.match(text):
        raise ValueError(f"not a number: {text!r}")
    return Fraction(text)


def format_number(value: Fraction) -> str:
    """Shortest exact text: integer, terminating decimal, else ``a/b``."""
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    den, twos, fives = value.denominator, 0, 0
    while den % 2 == 0:
        den //= 2
        twos += 1
    while den % 5 == 0:
        den //= 5
        fives += 1
    if den != 1:
        return f"{value.numerator}/{value.denominator}"
    places = max(twos, fives)
    scaled = abs(value.numerator) * 10 ** places // value.denominator
    digits = str(scaled).rjust(places + 1, "0")
    sign = "-" if value < 0 else ""
    return f"{sign}{digits[:-places]}.{digits[-places:]}"


def default_priors(k: int) -> tuple[Fraction, ...]:
    """Equal probability for each of ``k`` events."""
    if k < 1:
        raise DomainError(f"need at least one event, got k={k}")
    return (Fraction(1, k),) * k


# -- parsing ----------------------------------------------------------------

_SECTIONS = ("EVENTS", "CLASSIFY", "RULES", "BIND", "THRESHOLD", "DIST", "DECISION", "PROCESS")


class _Parser:
    def __init__(self, text: str):
        self.lines = text.splitlines()
        self.events: dict[str, EventSymbol] = {}
        self.classes: dict[str, Classification] = {}
        self.rules: list[Rule] = []
        self.bindings: dict[str, Fraction] = {}
        self.binding_sets: dict[str, dict[str, Fraction]] = {}
        self.thresholds: dict[str, Fraction] = {}
        self.dists: dict[str, JointDistribution] = {}
        self.edges: list[tuple[str, str]] = []
        self.edge_lines: dict[tuple[str, str], int] = {}
        self.decision_lines: list[tuple[int, str, str]] = []
        self.seen_decision = False
        # references checked once every event is known: (name, line, column)
        self.refs: list[tuple[str, int, int]] = []

    def error(self, cls, msg, lineno, raw=None, token=None):
        col = None
        if raw is not None:
            col = (raw.find(token) + 1) if token and token in raw else 1
        return cls(msg, lineno, col)

    def name(self, token, lineno, raw, ref=True):
        if not NAME.match(token):
            raise self.error(KBSyntaxError, f"bad name {token!r}", lineno, raw, token)
        if ref:
            self.refs.append((token, lineno, raw.find(token) + 1))
        return token

    def number(self, token, lineno, raw):
        try:
            return parse_number(token)
        except (ValueError, ZeroDivisionError):
            raise self.error(KBSyntaxError, f"bad number {token!r}", lineno, raw, token) from None

    def run(self) -> KnowledgeBase:
        section, arg = None, None
        dist_state = None
        for lineno, raw in enumerate(self.lines, start=1):
            line = raw.split(";", 1)[0].strip()
            if not line:
                continue
            if line.startswith("#"):
                if dist_state is not None:
                    self.finish_dist(dist_state)
                    dist_state = None
                words = line[1:].split()
                if not words or words[0] not in _SECTIONS:
                    raise self.error(KBSyntaxError, f"unknown section {line!r}", lineno, raw, line)
                section, rest = words[0], words[1:]
                arg = rest[0] if rest else None
                if len(rest) > 1 or (section not in ("BIND", "DIST") and rest):
                    raise self.error(KBSyntaxError, "unexpected text after section name",
                                     lineno, raw, rest[-1])
                if section == "DIST":
                    if arg is None:
                        raise self.error(KBSyntaxError, "#DIST needs a name", lineno, raw)
                    self.name(arg, lineno, raw, ref=False)
                    if arg in self.dists:
                        raise self.error(DuplicateDeclarationError,
                                         f"distribution {arg!r} declared twice", lineno, raw, arg)
                    dist_state = {"name": arg, "line": lineno, "vars": None, "rows": {}}
                if section == "BIND" and arg is not None:
                    self.name(arg, lineno, raw, ref=False)
                    if arg in self.binding_sets:
                        raise self.error(DuplicateDeclarationError,
                                         f"binding set {arg!r} declared twice", lineno, raw, arg)
                    self.binding_sets[arg] = {}
                if section == "DECISION":
                    if self.seen_decision:
                        raise self.error(DuplicateDeclarationError,
                                         "second #DECISION section", lineno, raw)
                    self.seen_decision = True
                continue
            if section is None:
                raise self.error(KBSyntaxError, "content before the first section", lineno, raw)
            if section == "DIST":
                self.dist_line(dist_state, line, lineno, raw)
            elif section == "DECISION":
                self.decision_lines.append((lineno, line, raw))
            else:
                getattr(self, section.lower() + "_line")(line, lineno, raw, arg)
        if dist_state is not None:
            self.finish_dist(dist_state)
        for name, lineno, col in self.refs:
            if name not in self.events:
                raise UndeclaredSymbolError(f"undeclared event {name!r}", lineno, col)
        decision = self.build_decision() if self.seen_decision else None
        self.check_process()
        return KnowledgeBase(
            events=tuple(self.events.values()),
            rules=tuple(self.rules),
            classifications=tuple(self.classes.items()),
            distributions=self.dists,
            decision=decision,
            process_edges=tuple(self.edges),
            bindings=self.bindings,
            binding_sets=self.binding_sets,
            thresholds=self.thresholds,
        )

    def events_line(self, line, lineno, raw, _):
        words = line.split()
        name = self.name(words[0], lineno, raw, ref=False)
        if name in self.events:
            raise self.error(DuplicateDeclarationError, f"event {name!r} declared twice",
                             lineno, raw, name)
        t = place = None
        for w in words[1:]:
            if w.startswith("@t="):
                try:
                    t = int(w[3:])
                except ValueError:
                    raise self.error(KBSyntaxError, f"bad time index {w!r}", lineno, raw, w) from None
            elif w.startswith("@loc=") and len(w) > 5:
                place = w[5:]
            else:
                raise self.error(KBSyntaxError, f"unexpected {w!r}", lineno, raw, w)
        self.events[name] = EventSymbol(name, t, place)

    def classify_line(self, line, lineno, raw, _):
        parts = [p.strip() for p in line.split(":")]
        if len(parts) != 2:
            raise self.error(KBSyntaxError, "expected '<event> : <class>'", lineno, raw)
        name = self.name(parts[0], lineno, raw)
        try:
            cls = Classification(parts[1])
        except ValueError:
            raise self.error(KBSyntaxError, f"unknown classification {parts[1]!r}",
                             lineno, raw, parts[1]) from None
        if name in self.classes:
            raise self.error(DuplicateDeclarationError, f"{name!r} classified twice",
                             lineno, raw, name)
        self.classes[name] = cls

    def rules_line(self, line, lineno, raw, _):
        if "<-" not in line:
            raise self.error(KBSyntaxError, "expected '<head> <- <body>'", lineno, raw)
        head_text, body_text = line.split("<-", 1)
        head = self.name(head_text.strip(), lineno, raw)
        body = []
        for part in body_text.split("&"):
            part = part.strip()
            positive = not part.startswith("!")
            atom = self.name(part.lstrip("!").strip(), lineno, raw)
            lit = Literal(atom, positive)
            if any(b.name == atom for b in body):
                raise self.error(DuplicateDeclarationError, f"{atom!r} repeated in rule body",
                                 lineno, raw, atom)
            if atom == head:
                raise self.error(KBSyntaxError, f"{head!r} appears in its own body",
                                 lineno, raw, atom)
            body.append(lit)
        self.rules.append(Rule(head, tuple(body)))

    def bind_line(self, line, lineno, raw, set_name):
        parts = [p.strip() for p in line.split("=")]
        if len(parts) != 2:
            raise self.error(KBSyntaxError, "expected '<event> = <number>'", lineno, raw)
        name = self.name(parts[0], lineno, raw)
        target = self.bindings if set_name is None else self.binding_sets[set_name]
        if name in target:
            raise self.error(DuplicateDeclarationError, f"{name!r} bound twice", lineno, raw, name)
        target[name] = self.number(parts[1], lineno, raw)

    def threshold_line(self, line, lineno, raw, _):
        parts = [p.strip() for p in line.split(">")]
        if len(parts) != 2:
            raise self.error(KBSyntaxError, "expected '<event> > <number>'", lineno, raw)
        name = self.name(parts[0], lineno, raw)
        if name in self.thresholds:
            raise self.error(DuplicateDeclarationError, f"threshold for {name!r} given twice",
                             lineno, raw, name)
        self.thresholds[name] = self.number(parts[1], lineno, raw)

    def process_line(self, line, lineno, raw, _):
        parts = [p.strip() for p in line.split("->")]
        if len(parts) != 2:
            raise self.error(KBSyntaxError, "expected '<event> -> <event>'", lineno, raw)
        edge = (self.name(parts[0], lineno, raw), self.name(parts[1], lineno, raw))
        if edge in self.edges:
            raise self.error(DuplicateDeclarationError, f"edge {edge} declared twice", lineno, raw)
        self.edges.append(edge)
        self.edge_lines[edge] = lineno

    def check_process(self):
        for a, b in self.edges:
            lineno = self.edge_lines[(a, b)]
            ta, tb = self.events[a].time_index, self.events[b].time_index
            if ta is None or tb is None:
                raise KBSyntaxError(f"process edge {a} -> {b} needs time indices", lineno)
            if not ta < tb:
                raise KBSyntaxError(f"process edge {a} -> {b} runs backwards in time", lineno)

    def dist_line(self, state, line, lineno, raw):
        if line.startswith("vars:"):
            if state["vars"] is not None:
                raise self.error(DuplicateDeclarationError, "vars given twice", lineno, raw)
            names = line[5:].split()
            if not names:
                raise self.error(KBSyntaxError, "empty variable list", lineno, raw)
            if len(set(names)) != len(names):
                raise self.error(DuplicateDeclarationError, "variable repeated", lineno, raw)
            state["vars"] = tuple(self.name(n, lineno, raw) for n in names)
            return
        if state["vars"] is None:
            raise self.error(KBSyntaxError, "rows before 'vars:'", lineno, raw)
        if ":" not in line:
            raise self.error(KBSyntaxError, "expected '<bits> : <probability>'", lineno, raw)
        bits_text, value_text = line.split(":", 1)
        if bits_text.strip() == "*":
            if state.get("rest") is not None:
                raise self.error(DuplicateDeclarationError, "'*' row given twice", lineno, raw)
            value = self.number(value_text.strip(), lineno, raw)
            if value < 0:
                raise self.error(DistributionError, "negative probability", lineno, raw,
                                 value_text.strip())
            state["rest"] = value
            return
        bits = bits_text.split()
        if len(bits) != len(state["vars"]) or any(b not in ("0", "1") for b in bits):
            raise self.error(KBSyntaxError, f"row needs {len(state['vars'])} bits", lineno, raw)
        key = int("".join(bits), 2)
        if key in state["rows"]:
            raise self.error(DuplicateDeclarationError, "row given twice", lineno, raw)
        value = self.number(value_text.strip(), lineno, raw)
        if value < 0:
            raise self.error(DistributionError, "negative probability", lineno, raw, value_text.strip())
        state["rows"][key] = value

    def finish_dist(self, state):
        k = len(state["vars"] or ())
        if state["vars"] is None:
            raise KBSyntaxError(f"distribution {state['name']!r} has no 'vars:' line", state["line"])
        if state.get("rest") is not None:
            for i in range(2 ** k):
                state["rows"].setdefault(i, state["rest"])
        if len(state["rows"]) != 2 ** k:
            raise KBSyntaxError(
                f"distribution {state['name']!r} has {len(state['rows'])} rows, needs {2 ** k}",
                state["line"])
        table = tuple(state["rows"][i] for i in range(2 ** k))
        total = sum(table, Fraction(0))
        if total != 1:
            raise DistributionError(f"distribution {state['name']!r} rows sum to {total}",
                                    state["line"])
        self.dists[state["name"]] = JointDistribution(state["vars"], table)

    # #DECISION is resolved after the whole section is read so that "*"
    # and per-tick headers can refer to the horizon.
    def build_decision(self) -> DecisionProblem:
        horizon = None
        acts_all = outcomes_all = None
        acts_t: dict[int, tuple] = {}
        outs_t: dict[int, tuple] = {}
        entries = []
        for lineno, line, raw in self.decision_lines:
            head, sep, rest = line.partition(":")
            if not sep:
                raise self.error(KBSyntaxError, "expected ':'", lineno, raw)
            words = head.split()
            kind = words[0] if words else ""
            if kind == "horizon" and len(words) == 1:
                if horizon is not None:
                    raise self.error(DuplicateDeclarationError, "horizon given twice", lineno, raw)
                try:
                    horizon = int(rest.strip())
                except ValueError:
                    raise self.error(KBSyntaxError, "bad horizon", lineno, raw) from None
                if horizon < 1:
                    raise self.error(KBSyntaxError, "horizon must be positive", lineno, raw)
            elif kind in ("acts", "outcomes") and len(words) in (1, 2):
                labels = tuple(rest.split())
                for lab in labels:
                    self.name(lab, lineno, raw, ref=False)
                if len(set(labels)) != len(labels):
                    raise self.error(DuplicateDeclarationError, f"label repeated in {kind}",
                                     lineno, raw)
                if len(words) == 1:
                    if (acts_all if kind == "acts" else outcomes_all) is not None:
                        raise self.error(DuplicateDeclarationError, f"{kind} given twice",
                                         lineno, raw)
                    if kind == "acts":
                        acts_all = labels
                    else:
                        outcomes_all = labels
                else:
                    t = self.tick(words[1], lineno, raw)
                    target = acts_t if kind == "acts" else outs_t
                    if t in target:
                        raise self.error(DuplicateDeclarationError, f"{kind} {t} given twice",
                                         lineno, raw)
                    target[t] = labels
            elif kind in ("utility", "prob", "transition"):
                arity = {"utility": 4, "prob": 3, "transition": 4}[kind]
                if len(words) != arity:
                    raise self.error(KBSyntaxError, f"malformed {kind} row", lineno, raw)
                entries.append((lineno, raw, kind, words[1:], rest.split()))
            else:
                raise self.error(KBSyntaxError, f"unknown decision entry {kind!r}", lineno, raw)
        first = self.decision_lines[0][0] if self.decision_lines else None
        if horizon is None:
            raise KBSyntaxError("#DECISION needs a horizon", first)
        decisions, outcomes = [], []
        for t in range(horizon):
            acts = acts_t.get(t, acts_all)
            outs = outs_t.get(t, outcomes_all)
            if acts is None or outs is None:
                raise KBSyntaxError(f"no acts or outcomes for tick {t}", first)
            decisions.append(acts)
            outcomes.append(outs)
        for t in set(acts_t) | set(outs_t):
            if t >= horizon:
                raise KBSyntaxError(f"tick {t} is beyond the horizon", first)

        utility, probs, transition = {}, {}, {}
        for lineno, raw, kind, keys, values in entries:
            ticks = range(horizon) if keys[0] == "*" else [self.tick(keys[0], lineno, raw)]
            for t in ticks:
                if t >= horizon:
                    raise self.error(KBSyntaxError, f"tick {t} is beyond the horizon", lineno, raw)
                d = keys[1]
                if d not in decisions[t]:
                    raise self.error(UndeclaredSymbolError, f"unknown act {d!r} at tick {t}",
                                     lineno, raw, d)
                if kind == "prob":
                    if len(values) != len(outcomes[t]):
                        raise self.error(KBSyntaxError, "probability row has wrong length",
                                         lineno, raw)
                    vec = tuple(self.number(v, lineno, raw) for v in values)
                    if sum(vec, Fraction(0)) != 1 or any(v < 0 for v in vec):
                        raise self.error(DistributionError,
                                         f"probabilities for ({t}, {d}) do not sum to 1",
                                         lineno, raw)
                    store, key, val = probs, (t, d), vec
                else:
                    x = keys[2]
                    if x not in outcomes[t]:
                        raise self.error(UndeclaredSymbolError, f"unknown outcome {x!r} at tick {t}",
                                         lineno, raw, x)
                    if len(values) != 1:
                        raise self.error(KBSyntaxError, f"malformed {kind} row", lineno, raw)
                    key = (t, d, x)
                    if kind == "utility":
                        store, val = utility, self.number(values[0], lineno, raw)
                    else:
                        if t + 1 >= horizon or values[0] not in outcomes[t + 1]:
                            raise self.error(UndeclaredSymbolError,
                                             f"transition target {values[0]!r} not in X({t + 1})",
                                             lineno, raw, values[0])
                        store, val = transition, values[0]
                if key in store:
                    raise self.error(DuplicateDeclarationError, f"{kind} {key} given twice",
                                     lineno, raw)
                store[key] = val
        problem = DecisionProblem(horizon, tuple(decisions), tuple(outcomes),
                                  utility, probs, transition)
        problems = problem.problems()
        if problems:
            raise KBSyntaxError("incomplete decision problem: " + problems[0], first)
        return problem

    def tick(self, token, lineno, raw) -> int:
        try:
            t = int(token)
        except ValueError:
            raise self.error(KBSyntaxError, f"bad tick {token!r}", lineno, raw, token) from None
        if t < 0:
            raise self.error(KBSyntaxError, "ticks start at 0", lineno, raw, token)
        return t


def parse_kb(text: str) -> KnowledgeBase:
    """Parse a knowledge base document; raises :class:`~causatum.errors.KBError`."""
    return _Parser(text).run()


def serialize_kb(kb: KnowledgeBase) -> str:
    out = ["#EVENTS"]
    for e in kb.events:
        parts = [e.name]
        if e.time_index is not None:
            parts.append(f"@t={e.time_index}")
        if e.place is not None:
            parts.append(f"@loc={e.place}")
        out.append(" ".join(parts))
    if kb.classifications:
        out.append("#CLASSIFY")
        out += [f"{name} : {cls.value}" for name, cls in kb.classifications]
    if kb.rules:
        out.append("#RULES")
        out += [str(r) for r in kb.rules]
    if kb.bindings:
        out.append("#BIND")
        out += [f"{k} = {format_number(v)}" for k, v in kb.bindings.items()]
    for set_name, values in kb.binding_sets.items():
        out.append(f"#BIND {set_name}")
        out += [f"{k} = {format_number(v)}" for k, v in values.items()]
    if kb.thresholds:
        out.append("#THRESHOLD")
        out += [f"{k} > {format_number(v)}" for k, v in kb.thresholds.items()]
    for name, dist in kb.distributions.items():
        out.append(f"#DIST {name}")
        out.append("vars: " + " ".join(dist.vars))
        k = len(dist.vars)
        for i, p in enumerate(dist.table):
            bits = " ".join(format(i, f"0{k}b"))
            out.append(f"{bits} : {format_number(p)}")
    if kb.decision is not None:
        dp = kb.decision
        out.append("#DECISION")
        out.append(f"horizon: {dp.horizon}")
        for t in range(dp.horizon):
            out.append(f"acts {t}: " + " ".join(dp.decisions[t]))
            out.append(f"outcomes {t}: " + " ".join(dp.outcomes[t]))
        for (t, d, x), u in dp.utility.items():
            out.append(f"utility {t} {d} {x} : {format_number(u)}")
        for (t, d), vec in dp.prob.items():
            out.append(f"prob {t} {d} : " + " ".join(format_number(p) for p in vec))
        for (t, d, x), nxt in dp.transition.items():
            out.append(f"transition {t} {d} {x} : {nxt}")
    if kb.process_edges:
        out.append("#PROCESS")
        out += [f"{a} -> {b}" for a, b in kb.process_edges]
    return "\n".join(out) + "\n"


def validate_kb(kb: KnowledgeBase) -> list[Violation]:
    """List every broken invariant; an empty list means the KB is valid."""
    out: list[Violation] = []
    names = kb.event_names
    declared = set(names)
    seen = set()
    for e in kb.events:
        if not NAME.match(e.name):
            out.append(Violation(f"event {e.name}", "name does not match the identifier grammar"))
        if e.name in seen:
            out.append(Violation(f"event {e.name}", "declared more than once"))
        seen.add(e.name)

    counts: dict[str, int] = {}
    for name, _ in kb.classifications:
        counts[name] = counts.get(name, 0) + 1
    for name, n in counts.items():
        if name not in declared:
            out.append(Violation(f"classification {name}", "undeclared event"))
        if n > 1:
            out.append(Violation(f"classification {name}", f"{n} classifications for one event"))

    for i, rule in enumerate(kb.rules):
        rec = f"rule {i} ({rule.head})"
        for sym in (rule.head,) + rule.atoms():
            if sym not in declared:
                out.append(Violation(rec, f"undeclared event {sym!r}"))
        if not rule.body:
            out.append(Violation(rec, "empty body"))
        if len(set(rule.atoms())) != len(rule.body):
            out.append(Violation(rec, "duplicate literal in body"))
        if rule.head in rule.atoms():
            out.append(Violation(rec, "head appears in body"))

    for set_name, values in [(None, kb.bindings)] + list(kb.binding_sets.items()):
        for sym in values:
            if sym not in declared:
                label = "bindings" if set_name is None else f"bindings {set_name}"
                out.append(Violation(label, f"undeclared event {sym!r}"))
    for sym in kb.thresholds:
        if sym not in declared:
            out.append(Violation("thresholds", f"undeclared event {sym!r}"))

    for name, dist in kb.distributions.items():
        for var in dist.vars:
            if var not in declared:
                out.append(Violation(f"distribution {name}", f"undeclared event {var!r}"))
        for msg in dist.problems():
            out.append(Violation(f"distribution {name}", msg))

    if kb.decision is not None:
        for msg in kb.decision.problems():
            out.append(Violation("decision", msg))

    times = {e.name: e.time_index for e in kb.events}
    for a, b in kb.process_edges:
        rec = f"process {a} -> {b}"
        if a not in declared or b not in declared:
            out.append(Violation(rec, "undeclared event"))
        elif times[a] is None or times[b] is None or not times[a] < times[b]:
            out.append(Violation(rec, "edge does not point forward in time"))
    return out


def fixture_path(name: str) -> Path:
    """Path of a bundled fixture such as ``"cereal.kb"``."""
    res = resources.files("causatum") / "fixtures" / name
    return Path(str(res))


def load_kb(path: str | Path) -> KnowledgeBase:
    """Read a KB file; bare names of bundled fixtures are also accepted."""
    p = Path(path)
    if not p.exists():
        bundled = fixture_path(p.name)
        if p.parent == Path(".") and bundled.exists():
            p = bundled
        else:
            raise FileNotFoundError(str(path))
    return parse_kb(p.read_text(encoding="utf-8"))
