"""Abduction and postmortem explanation of a failed plan.

The postmortem builds one explanation structure for the run that reached
the goal and one for the run that missed it, reduces both to booleans and
reports which ground propositions differ.  Classifications stored in the
knowledge base prune the search, and :class:`OpCounter` records how many
rule-head matches the search attempted.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Sequence, Union

from .errors import (
    CycleError,
    DomainError,
    MissingBindingError,
    NoExplanationError,
    PreconditionError,
    StructureMismatchError,
)
from .kb import Classification, KnowledgeBase, Literal, Rule
from .worlds import PossibleWorld, WorldMatrix

__all__ = [
    "OpCounter",
    "DecisionWorldPosterior",
    "ExplanationStructure",
    "Node",
    "DiffReport",
    "Explanation",
    "abduce",
    "goal_regress",
    "build_structure",
    "abstract_qualitative",
    "diff_structures",
    "explain_failure",
    "benchmark",
    "net_present_value",
    "LEVELS",
]

LEVELS = (0, 1, 2, 3)

Value = Union[bool, Fraction]


@dataclass
class OpCounter:
    unifications: int = 0

    def tick(self, n: int = 1) -> None:
        self.unifications += n


# -- abduction --------------------------------------------------------------

@dataclass(frozen=True)
class DecisionWorldPosterior:
    # (world, prior, likelihood, posterior) in ascending world order
    candidates: tuple[tuple[PossibleWorld, Fraction, Fraction, Fraction], ...]
    winner: PossibleWorld


def abduce(worlds: WorldMatrix | Sequence[PossibleWorld],
           priors: Sequence[Fraction],
           likelihoods: Sequence[Fraction] | Callable[[PossibleWorld], Fraction],
           evidence: Mapping[str, bool] | None = None) -> DecisionWorldPosterior:
    """Pick the earlier world that best explains the evidence.

    The score of a world is prior times the likelihood of the evidence under
    it; the winner maximizes the score, the lowest world winning ties.
    ``likelihoods`` may be a sequence aligned with the worlds or a callable
    ``world -> likelihood``.  ``evidence`` is carried for the record only.
    """
    rows = tuple(worlds.rows if isinstance(worlds, WorldMatrix) else worlds)
    priors = tuple(Fraction(p) for p in priors)
    if len(priors) != len(rows):
        raise PreconditionError("one prior per world is required")
    if any(p < 0 for p in priors) or sum(priors, Fraction(0)) != 1:
        raise PreconditionError("priors must be nonnegative and sum to 1")
    if callable(likelihoods):
        liks = tuple(Fraction(likelihoods(w)) for w in rows)
    else:
        liks = tuple(Fraction(v) for v in likelihoods)
        if len(liks) != len(rows):
            raise PreconditionError("one likelihood per world is required")
    scores = [p * l for p, l in zip(priors, liks)]
    total = sum(scores, Fraction(0))
    if total == 0:
        raise NoExplanationError("no world gives the evidence positive probability")
    table = sorted(zip(rows, priors, liks, (s / total for s in scores)), key=lambda r: r[0])
    winner = None
    for w, p, l, post in table:
        if winner is None or post > winner[1]:
            winner = (w, post)
    return DecisionWorldPosterior(tuple(table), winner[0])


# -- goal regression --------------------------------------------------------

def _check_acyclic(goal: str, rules: Sequence[Rule]) -> None:
    by_head: dict[str, list[Rule]] = {}
    for r in rules:
        by_head.setdefault(r.head, []).append(r)
    state: dict[str, int] = {}  # 1 on the stack, 2 finished
    path: list[str] = []

    def visit(node):
        state[node] = 1
        path.append(node)
        for r in by_head.get(node, ()):
            for child in r.atoms():
                if state.get(child) == 1:
                    raise CycleError(path[path.index(child):] + [child])
                if child not in state:
                    visit(child)
        path.pop()
        state[node] = 2

    visit(goal)


def _regress_tree(goal: str, rules: Sequence[Rule], counter: OpCounter | None,
                  known: Iterable[str] = ()) -> dict[str, tuple[Literal, ...] | None]:
    """Map every reached node to the body that derives it (``None`` for leaves).

    Each node not in ``known`` costs one attempted head match per rule in
    the rule base; the first rule whose head matches is used.
    """
    _check_acyclic(goal, rules)
    known = frozenset(known)
    tree: dict[str, tuple[Literal, ...] | None] = {}
    stack = [goal]
    while stack:
        node = stack.pop()
        if node in tree:
            continue
        if node in known:
            tree[node] = None
            continue
        chosen = None
        for r in rules:
            if counter is not None:
                counter.tick()
            if chosen is None and r.head == node:
                chosen = r
        tree[node] = chosen.body if chosen is not None else None
        if chosen is not None:
            # negated atoms are leaves: their value is read, never derived
            for lit in reversed(chosen.body):
                if not lit.positive:
                    tree.setdefault(lit.name, None)
                else:
                    stack.append(lit.name)
    return tree


def goal_regress(goal: str, rules: Sequence[Rule], counter: OpCounter | None = None,
                 known: Iterable[str] = ()) -> frozenset[str]:
    """Leaf preconditions which, asserted together, let the rules derive ``goal``.

    Events in ``known`` are not looked up and become leaves directly.  Atoms
    under a negative literal are not part of the result; they must stay
    false.
    """
    tree = _regress_tree(goal, rules, counter, known)
    negated = {lit.name for body in tree.values() if body for lit in body if not lit.positive}
    return frozenset(n for n, body in tree.items() if body is None and n not in negated)


# -- explanation structures -------------------------------------------------

@dataclass(frozen=True)
class Node:
    name: str
    value: Value
    children: tuple[Literal, ...] = ()
    # value before qualitative abstraction
    raw: Value | None = None

    @property
    def is_leaf(self) -> bool:
        return not self.children


@dataclass(frozen=True)
class ExplanationStructure:
    goal: str
    nodes: tuple[Node, ...]

    def node(self, name: str) -> Node:
        for n in self.nodes:
            if n.name == name:
                return n
        raise KeyError(name)

    @property
    def values(self) -> dict[str, Value]:
        return {n.name: n.value for n in self.nodes}

    @property
    def leaves(self) -> frozenset[str]:
        return frozenset(n.name for n in self.nodes if n.is_leaf)

    def topology(self) -> dict[str, tuple[Literal, ...]]:
        return {n.name: n.children for n in self.nodes}

    def is_qualitative(self) -> bool:
        return all(isinstance(n.value, bool) for n in self.nodes)


def _truth(value: Value, threshold: Fraction) -> bool:
    if isinstance(value, bool):
        return value
    return value > threshold


def _as_value(v) -> Value:
    if isinstance(v, bool):
        return v
    return Fraction(v)


def build_structure(kb: KnowledgeBase, goal: str, bindings: Mapping[str, object], *,
                    counter: OpCounter | None = None,
                    rules: Sequence[Rule] | None = None,
                    known: Iterable[str] = (),
                    assumed_true: Iterable[str] = (),
                    thresholds: Mapping[str, Fraction] | None = None) -> ExplanationStructure:
    """Regress ``goal`` and evaluate the resulting DAG on ``bindings``.

    Leaves take their bound values; events in ``assumed_true`` (the field)
    are true without a binding.  An internal node is true when every body
    literal of its rule holds, numeric children counting as true above
    their threshold (default 0).
    """
    if goal not in kb.event_names:
        raise DomainError(f"undeclared goal {goal!r}")
    rules = kb.rules if rules is None else rules
    thresholds = dict(kb.thresholds if thresholds is None else thresholds)
    assumed_true = frozenset(assumed_true)
    tree = _regress_tree(goal, rules, counter, frozenset(known) | assumed_true)

    values: dict[str, Value] = {}
    for name, body in tree.items():
        if body is None:
            if name in assumed_true:
                values[name] = True
            elif name in bindings:
                values[name] = _as_value(bindings[name])
            else:
                raise MissingBindingError(name)

    def evaluate(name):
        if name not in values:
            values[name] = all(
                _truth(evaluate(lit.name), thresholds.get(lit.name, Fraction(0))) == lit.positive
                for lit in tree[name]
            )
        return values[name]

    evaluate(goal)
    nodes = tuple(Node(n, values[n], tree[n] or (), values[n]) for n in tree)
    return ExplanationStructure(goal, nodes)


def abstract_qualitative(structure: ExplanationStructure,
                         thresholds: Mapping[str, Fraction] | None = None) -> ExplanationStructure:
    """Replace numeric values by ``value > threshold`` (default threshold 0)."""
    thresholds = thresholds or {}
    nodes = tuple(
        replace(n, value=_truth(n.value, Fraction(thresholds.get(n.name, 0))))
        for n in structure.nodes
    )
    return ExplanationStructure(structure.goal, nodes)


@dataclass(frozen=True)
class DiffReport:
    # ground propositions whose qualitative values differ, protected ones excluded
    differing: frozenset[str]
    protected_violations: frozenset[str] = frozenset()
    # derived nodes that differ as a consequence
    derived_differing: frozenset[str] = frozenset()

    @property
    def empty(self) -> bool:
        return not (self.differing or self.protected_violations or self.derived_differing)


def diff_structures(success: ExplanationStructure, failure: ExplanationStructure,
                    protected: Iterable[str] = ()) -> DiffReport:
    """Compare two abstracted structures of the same shape node by node.

    Protected standing conditions never count as differences; if their
    values moved between the runs (before or after abstraction) they are
    listed in ``protected_violations`` instead.
    """
    if not (success.is_qualitative() and failure.is_qualitative()):
        raise PreconditionError("abstract both structures before diffing")
    a, b = success.topology(), failure.topology()
    if a != b or success.goal != failure.goal:
        missing = set(a) - set(b)
        extra = set(b) - set(a)
        if not missing and not extra:
            missing = {n for n in a if a[n] != b[n]}
            extra = set(missing)
        raise StructureMismatchError(missing, extra)
    protected = frozenset(protected)
    differing, derived, violations = set(), set(), set()
    for node in success.nodes:
        other = failure.node(node.name)
        changed = node.value != other.value
        if node.name in protected:
            if changed or node.raw != other.raw:
                violations.add(node.name)
        elif changed:
            (differing if node.is_leaf else derived).add(node.name)
    return DiffReport(frozenset(differing), frozenset(violations), frozenset(derived))


# -- postmortem -------------------------------------------------------------

@dataclass(frozen=True)
class Explanation:
    goal: str
    level: int
    cause: frozenset[str]
    conditions: frozenset[str]
    field: frozenset[str]
    op_count: int
    protected: frozenset[str] = frozenset()
    protected_violations: frozenset[str] = frozenset()
    derived_differing: frozenset[str] = frozenset()
    success_goal: bool | None = None
    failure_goal: bool | None = None


def _resolve_bindings(kb: KnowledgeBase, desc) -> Mapping[str, object]:
    if isinstance(desc, str):
        return kb.binding_set(desc)
    return {**kb.bindings, **dict(desc)}


def explain_failure(kb: KnowledgeBase, goal: str, success_bindings, failure_bindings,
                    annotation_level: int = 3) -> Explanation:
    """Explain why ``goal`` held in the success run but not in the failure run.

    ``annotation_level`` decides how much of the stored causal knowledge the
    search uses: 0 treats every event as a candidate cause, 1 drops rules
    that mention irrelevant events, 2 also holds field events true without
    looking them up, 3 also takes standing conditions as given and protects
    them in the comparison.  Bindings are mappings or names of binding sets
    in ``kb``; either way the KB's default bindings fill the gaps.

    ``conditions`` and ``field`` in the result classify the structure's
    nodes with the full knowledge base, whatever the level.
    """
    if annotation_level not in LEVELS:
        raise DomainError(f"annotation level must be one of {LEVELS}")
    irrelevant = kb.events_classified(Classification.IRRELEVANT) if annotation_level >= 1 else frozenset()
    field_ev = kb.events_classified(Classification.FIELD) if annotation_level >= 2 else frozenset()
    conditions = kb.events_classified(Classification.CONDITION) if annotation_level >= 3 else frozenset()
    rules = tuple(
        r for r in kb.rules
        if not ({r.head, *r.atoms()} & irrelevant) and r.head not in field_ev | conditions
    )
    success = _resolve_bindings(kb, success_bindings)
    failure = _resolve_bindings(kb, failure_bindings)

    counter = OpCounter()
    goal_regress(goal, rules, counter, known=field_ev | conditions)
    common = dict(counter=counter, rules=rules, known=conditions, assumed_true=field_ev)
    s_struct = abstract_qualitative(build_structure(kb, goal, success, **common), kb.thresholds)
    f_struct = abstract_qualitative(build_structure(kb, goal, failure, **common), kb.thresholds)
    report = diff_structures(s_struct, f_struct, protected=conditions)

    reached = {n.name for n in s_struct.nodes}
    return Explanation(
        goal=goal,
        level=annotation_level,
        cause=report.differing,
        conditions=frozenset(reached & kb.events_classified(Classification.CONDITION)),
        field=frozenset(reached & kb.events_classified(Classification.FIELD)),
        op_count=counter.unifications,
        protected=conditions,
        protected_violations=report.protected_violations,
        derived_differing=report.derived_differing,
        success_goal=s_struct.node(goal).value,
        failure_goal=f_struct.node(goal).value,
    )


def benchmark(kb: KnowledgeBase, goal: str, success_bindings, failure_bindings) -> dict[int, int]:
    """Unification count of :func:`explain_failure` at every annotation level."""
    return {
        level: explain_failure(kb, goal, success_bindings, failure_bindings, level).op_count
        for level in LEVELS
    }


def net_present_value(cash_flows: Sequence[Fraction], rate: Fraction) -> Fraction:
    """Exact ``sum(cf_t / (1 + rate) ** t)`` with the first flow at ``t = 1``."""
    rate = Fraction(rate)
    if rate <= -1:
        raise DomainError("rate must exceed -1")
    return sum((Fraction(cf) / (1 + rate) ** t for t, cf in enumerate(cash_flows, start=1)),
               Fraction(0))
