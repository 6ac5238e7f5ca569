"""Exact probabilistic causal analysis over binary variables.

Distributions are full joint tables of :class:`~fractions.Fraction`, so the
equalities and inequalities in the relevance and fork tests are decided
exactly.  An ``epsilon`` argument (default 0) is available for tables that
were imported from measured data.

Events are written as *predicates* over an assignment.  Anything accepted by
:func:`predicate` works: a variable name, a literal such as ``"!X"``, a
conjunction ``"A & !B"``, a mapping ``{"A": True}``, a callable taking the
assignment dict, or ``None`` (also ``"*"``) for the sure event.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Iterable, Mapping, Sequence, Union

from .errors import DistributionError, DomainError, NullConditioningError, PreconditionError

__all__ = [
    "JointDistribution",
    "ProcessGraph",
    "SRReport",
    "ForkCondition",
    "ForkReport",
    "ForkVerdict",
    "ReferenceClassExplanation",
    "predicate",
    "negate",
    "prob",
    "cond_prob",
    "statistical_relevance",
    "conjunctive_fork_check",
    "screens_off",
    "causal_fork_filter",
    "relevant_partition",
    "homogeneous_check",
    "reference_class_explain",
]

Predicate = Union[None, str, Mapping[str, bool], Callable[[Mapping[str, bool]], bool]]

_LITERAL = re.compile(r"\s*(!?)\s*([A-Za-z_][A-Za-z0-9_]*)\s*$")


@dataclass(frozen=True)
class JointDistribution:
    """Joint table over ``k`` binary variables.

    ``table[i]`` is the probability of the assignment whose bits, read with
    ``vars[0]`` as the most significant, spell ``i``.
    """

    vars: tuple[str, ...]
    table: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "vars", tuple(self.vars))
        object.__setattr__(self, "table", tuple(Fraction(v) for v in self.table))
        if len(self.table) != 2 ** len(self.vars):
            raise DistributionError(
                f"{len(self.vars)} variables need {2 ** len(self.vars)} rows, got {len(self.table)}"
            )

    @classmethod
    def from_function(cls, vars: Sequence[str], weight: Callable[..., Any]) -> "JointDistribution":
        """Build a table from ``weight(**assignment)``; weights are normalized."""
        vars = tuple(vars)
        raw = [Fraction(weight(**dict(zip(vars, bits))))
               for bits in itertools.product((False, True), repeat=len(vars))]
        total = sum(raw, Fraction(0))
        if total <= 0:
            raise DistributionError("weights sum to zero")
        return cls(vars, tuple(w / total for w in raw))

    @classmethod
    def from_measurements(cls, vars: Sequence[str], values: Iterable[float | str],
                          normalize: bool = True) -> "JointDistribution":
        """Import measured decimal data as exact rationals.

        Each value is converted through its decimal text, so ``0.1`` becomes
        exactly ``1/10``.  With ``normalize`` the rows are rescaled to sum to 1.
        """
        table = [Fraction(str(v)) for v in values]
        if normalize:
            total = sum(table, Fraction(0))
            if total <= 0:
                raise DistributionError("measurements sum to zero")
            table = [v / total for v in table]
        return cls(tuple(vars), tuple(table))

    def problems(self) -> list[str]:
        out = []
        if len(set(self.vars)) != len(self.vars):
            out.append("duplicate variable")
        if any(v < 0 for v in self.table):
            out.append("negative entry")
        total = sum(self.table, Fraction(0))
        if total != 1:
            out.append(f"rows sum to {total}")
        return out

    def assignments(self):
        """Yield ``(assignment, probability)`` pairs in table order."""
        for bits, p in zip(itertools.product((False, True), repeat=len(self.vars)), self.table):
            yield dict(zip(self.vars, bits)), p


@dataclass(frozen=True)
class ProcessGraph:
    """Declared causal processes between timed events.

    ``nodes`` maps an event to ``(time_index, place)``.  Every edge must
    point forward in time.
    """

    nodes: Mapping[str, tuple[int | None, str | None]] = field(default_factory=dict)
    edges: tuple[tuple[str, str], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "edges", tuple(tuple(e) for e in self.edges))
        problems = self.problems()
        if problems:
            raise DomainError("; ".join(problems))

    def problems(self) -> list[str]:
        out = []
        for a, b in self.edges:
            if a not in self.nodes or b not in self.nodes:
                out.append(f"edge {a} -> {b} names an unknown event")
                continue
            ta, tb = self.nodes[a][0], self.nodes[b][0]
            if ta is None or tb is None:
                out.append(f"edge {a} -> {b} needs time indices on both ends")
            elif not ta < tb:
                out.append(f"edge {a} -> {b} goes from t={ta} to t={tb}")
        return out

    def time_of(self, event: str) -> int:
        if event not in self.nodes:
            raise DomainError(f"event {event!r} is not in the process graph")
        t = self.nodes[event][0]
        if t is None:
            raise DomainError(f"event {event!r} has no time index")
        return t

    def has_path(self, source: str, target: str) -> bool:
        succ: dict[str, list[str]] = {}
        for a, b in self.edges:
            succ.setdefault(a, []).append(b)
        seen, stack = {source}, [source]
        while stack:
            node = stack.pop()
            for nxt in succ.get(node, ()):
                if nxt == target:
                    return True
                if nxt not in seen:
                    seen.add(nxt)
                    stack.append(nxt)
        return False


# -- predicates -------------------------------------------------------------

def predicate(desc: Predicate) -> Callable[[Mapping[str, bool]], bool]:
    """Normalize an event description to a callable over assignments."""
    if desc is None:
        return lambda a: True
    if callable(desc):
        return desc
    if isinstance(desc, str) and desc.strip() == "*":
        return lambda a: True
    if isinstance(desc, str):
        wanted = {}
        for part in desc.split("&"):
            m = _LITERAL.match(part)
            if not m:
                raise DomainError(f"cannot read event {desc!r}")
            wanted[m.group(2)] = not m.group(1)
        desc = wanted
    items = tuple(dict(desc).items())
    return lambda a: all(a[k] == v for k, v in items)


def negate(desc: Predicate) -> Callable[[Mapping[str, bool]], bool]:
    f = predicate(desc)
    return lambda a: not f(a)


def _both(p: Predicate, q: Predicate):
    f, g = predicate(p), predicate(q)
    return lambda a: f(a) and g(a)


def prob(dist: JointDistribution, event: Predicate = None) -> Fraction:
    f = predicate(event)
    _check_vars(dist, event)
    return sum((p for a, p in dist.assignments() if f(a)), Fraction(0))


def _check_vars(dist: JointDistribution, desc: Predicate) -> None:
    if isinstance(desc, str):
        if desc.strip() == "*":
            return
        names = [_LITERAL.match(part).group(2) for part in desc.split("&") if _LITERAL.match(part)]
    elif isinstance(desc, Mapping):
        names = list(desc)
    else:
        return
    for name in names:
        if name not in dist.vars:
            raise DomainError(f"{name!r} is not a variable of the distribution")


def cond_prob(dist: JointDistribution, event: Predicate, given: Predicate = None) -> Fraction:
    """Exact ``P(event | given)``."""
    _check_vars(dist, event)
    den = prob(dist, given)
    if den == 0:
        raise NullConditioningError("conditioning event has probability 0")
    return prob(dist, _both(event, given)) / den


def _differ(a: Fraction, b: Fraction, eps: Fraction) -> bool:
    return abs(a - b) > eps


def _greater(a: Fraction, b: Fraction, eps: Fraction) -> bool:
    return a - b > eps


# -- statistical relevance --------------------------------------------------

@dataclass(frozen=True)
class SRReport:
    condition1_holds: bool
    condition2_holds: bool
    equivalent: bool
    relevant: bool
    null_conditioning: bool = False
    p_b_given_ac: Fraction | None = None
    p_b_given_a: Fraction | None = None
    p_b_given_a_not_c: Fraction | None = None


def statistical_relevance(dist: JointDistribution, C: Predicate, B: Predicate,
                          A: Predicate = None, epsilon: Fraction = Fraction(0)) -> SRReport:
    """Is ``C`` statistically relevant to ``B`` in the context ``A``?

    Clause 1 compares ``P(B|AC)`` with ``P(B|A)``; clause 2 compares
    ``P(B|AC)`` with ``P(B|A,not C)``.  When ``P(C|A)`` is 0 or 1 one of the
    conditional probabilities is undefined: the affected clauses are
    reported false and ``null_conditioning`` is set.
    """
    epsilon = Fraction(epsilon)
    p_a = prob(dist, A)
    if p_a == 0:
        raise NullConditioningError("context A has probability 0")
    p_b_a = cond_prob(dist, B, A)
    p_ac = prob(dist, _both(A, C))
    p_anc = prob(dist, _both(A, negate(C)))
    b_ac = cond_prob(dist, B, _both(A, C)) if p_ac > 0 else None
    b_anc = cond_prob(dist, B, _both(A, negate(C))) if p_anc > 0 else None
    c1 = b_ac is not None and _differ(b_ac, p_b_a, epsilon)
    c2 = b_ac is not None and b_anc is not None and _differ(b_ac, b_anc, epsilon)
    equivalent = 0 < p_ac / p_a < 1
    return SRReport(
        condition1_holds=c1,
        condition2_holds=c2,
        equivalent=equivalent,
        relevant=c1,
        null_conditioning=b_ac is None or b_anc is None,
        p_b_given_ac=b_ac,
        p_b_given_a=p_b_a,
        p_b_given_a_not_c=b_anc,
    )


# -- conjunctive forks ------------------------------------------------------

@dataclass(frozen=True)
class ForkCondition:
    number: int
    relation: str
    left: Fraction | None
    right: Fraction | None
    holds: bool


@dataclass(frozen=True)
class ForkReport:
    x: str
    y: str
    c: str
    conditions: tuple[ForkCondition, ...]

    @property
    def is_fork(self) -> bool:
        return all(c.holds for c in self.conditions[:4])

    def holds(self, number: int) -> bool:
        return self.conditions[number - 1].holds


def _maybe_cond(dist, event, given):
    if prob(dist, given) == 0:
        return None
    return cond_prob(dist, event, given)


def conjunctive_fork_check(dist: JointDistribution, X: str, Y: str, C: str,
                           epsilon: Fraction = Fraction(0)) -> ForkReport:
    """Evaluate the seven conjunctive-fork relations for vertex ``C``.

    (1) and (2) are screening off under ``C`` and ``not C``, (3) and (4)
    positive relevance of ``C`` to each side, (5) non-independence of ``X``
    and ``Y``, and (6), (7) the conditional independences.  ``is_fork`` is
    the conjunction of (1)-(4).
    """
    epsilon = Fraction(epsilon)
    for name in (X, Y, C):
        if name not in dist.vars:
            raise DomainError(f"{name!r} is not a variable of the distribution")
    p_c = prob(dist, C)
    if p_c in (0, 1):
        raise PreconditionError(f"P({C}) = {p_c}; the vertex must be uncertain")
    nC = negate(C)
    XY = _both(X, Y)

    def eq(n, rel, left, right):
        ok = left is not None and right is not None and not _differ(left, right, epsilon)
        return ForkCondition(n, rel, left, right, ok)

    def gt(n, rel, left, right):
        ok = left is not None and right is not None and _greater(left, right, epsilon)
        return ForkCondition(n, rel, left, right, ok)

    x_c, y_c = cond_prob(dist, X, C), cond_prob(dist, Y, C)
    x_nc, y_nc = cond_prob(dist, X, nC), cond_prob(dist, Y, nC)
    conds = (
        eq(1, "P(XY|C) = P(X|C)P(Y|C)", cond_prob(dist, XY, C), x_c * y_c),
        eq(2, "P(XY|~C) = P(X|~C)P(Y|~C)", cond_prob(dist, XY, nC), x_nc * y_nc),
        gt(3, "P(X|C) > P(X|~C)", x_c, x_nc),
        gt(4, "P(Y|C) > P(Y|~C)", y_c, y_nc),
        gt(5, "P(XY) > P(X)P(Y)", prob(dist, XY), prob(dist, X) * prob(dist, Y)),
        eq(6, "P(X|C) = P(X|YC)", x_c, _maybe_cond(dist, X, _both(Y, C))),
        eq(7, "P(Y|C) = P(Y|XC)", y_c, _maybe_cond(dist, Y, _both(X, C))),
    )
    return ForkReport(X, Y, C, conds)


def screens_off(dist: JointDistribution, C: Predicate, X: Predicate, Y: Predicate,
                epsilon: Fraction = Fraction(0)) -> bool:
    """``P(X|C) = P(X|YC)`` and ``P(Y|C) = P(Y|XC)``."""
    epsilon = Fraction(epsilon)
    x_c = cond_prob(dist, X, C)
    y_c = cond_prob(dist, Y, C)
    x_yc = cond_prob(dist, X, _both(Y, C))
    y_xc = cond_prob(dist, Y, _both(X, C))
    return not _differ(x_c, x_yc, epsilon) and not _differ(y_c, y_xc, epsilon)


@dataclass(frozen=True)
class ForkVerdict:
    accepted: bool
    reason: str | None = None
    # which asymmetry conjecture the rejection needed: "R-asymmetry" when no
    # common cause of x and y is declared, "S-asymmetry" when one is
    conjecture: str | None = None

    def __bool__(self):
        return self.accepted


def _has_common_cause(graph: ProcessGraph, x: str, y: str, exclude: str) -> bool:
    tx, ty = graph.time_of(x), graph.time_of(y)
    for node, (t, _) in graph.nodes.items():
        if node in (x, y, exclude) or t is None or not (t < tx and t < ty):
            continue
        if graph.has_path(node, x) and graph.has_path(node, y):
            return True
    return False


def causal_fork_filter(report: ForkReport, vertex: str, x_ev: str, y_ev: str,
                       graph: ProcessGraph) -> ForkVerdict:
    """Decide whether a statistical fork may be read causally.

    The vertex has to come strictly before both sides and reach each of
    them through declared processes.  A vertex that does not precede both
    is rejected as ``open-to-future``; a missing process path gives
    ``no-process``.
    """
    if not report.is_fork:
        raise PreconditionError("report does not describe a conjunctive fork")
    tv, tx, ty = graph.time_of(vertex), graph.time_of(x_ev), graph.time_of(y_ev)
    if not (tv < tx and tv < ty):
        if _has_common_cause(graph, x_ev, y_ev, vertex):
            return ForkVerdict(False, "open-to-future", "S-asymmetry")
        return ForkVerdict(False, "open-to-future", "R-asymmetry")
    if not (graph.has_path(vertex, x_ev) and graph.has_path(vertex, y_ev)):
        return ForkVerdict(False, "no-process")
    return ForkVerdict(True)


# -- reference classes ------------------------------------------------------

@dataclass(frozen=True)
class ReferenceClassExplanation:
    circumstances: str
    outcome: str
    probability: Fraction
    homogeneous: bool = True


def relevant_partition(dist: JointDistribution, C: Predicate, E: Predicate,
                       partitions: Iterable[str] = (),
                       epsilon: Fraction = Fraction(0)) -> str | None:
    """First attribute whose values change ``P(E|C)``, or ``None``."""
    epsilon = Fraction(epsilon)
    base = cond_prob(dist, E, C)
    for var in sorted(partitions):
        if var not in dist.vars:
            raise DomainError(f"{var!r} is not a variable of the distribution")
        for value in (True, False):
            cell = _both(C, {var: value})
            if prob(dist, cell) > 0 and _differ(cond_prob(dist, E, cell), base, epsilon):
                return var
    return None


def homogeneous_check(dist: JointDistribution, C: Predicate, E: Predicate,
                      partitions: Iterable[str] = (),
                      epsilon: Fraction = Fraction(0)) -> bool:
    """True when no available attribute is statistically relevant to E within C."""
    if prob(dist, C) == 0:
        raise NullConditioningError("reference class has probability 0")
    return relevant_partition(dist, C, E, partitions, epsilon) is None


def _label(desc: Predicate, default: str) -> str:
    if isinstance(desc, str):
        return desc
    if isinstance(desc, Mapping):
        return " & ".join(("" if v else "!") + k for k, v in desc.items())
    return default


def reference_class_explain(dist: JointDistribution, C: Predicate, E: Predicate,
                            partitions: Iterable[str] = (), *,
                            circumstances: str | None = None,
                            outcome: str | None = None,
                            epsilon: Fraction = Fraction(0)) -> ReferenceClassExplanation:
    """Explain ``E`` by the homogeneous class ``C`` and the exact ``P(E|C)``.

    The circumstances depend only on ``C``, so the explanation of ``E`` and
    that of its negation cite the same class.
    """
    partitions = tuple(partitions)
    if prob(dist, C) == 0:
        raise NullConditioningError("reference class has probability 0")
    culprit = relevant_partition(dist, C, E, partitions, epsilon)
    if culprit is not None:
        raise DomainError(f"reference class is not homogeneous: {culprit!r} is relevant")
    return ReferenceClassExplanation(
        circumstances=circumstances or _label(C, "all cases"),
        outcome=outcome or _label(E, "E"),
        probability=cond_prob(dist, E, C),
        homogeneous=True,
    )
