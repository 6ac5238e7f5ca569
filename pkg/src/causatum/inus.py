"""Minimally sufficient scenarios and inus-based cause attribution.

A scenario is a set of candidate events which, together with the field,
forces the effect through the rule base whatever the other candidates do.
The minimal ones are the positive prime implicants of the effect viewed as a
boolean function of the candidates.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .errors import CapacityError, DegenerateEffectError, DomainError, PreconditionError
from .kb import Classification, KnowledgeBase, Rule

__all__ = [
    "Context",
    "Scenario",
    "CauseClassification",
    "Verdict",
    "CausalJudgment",
    "Occurrence",
    "strata",
    "forward_chain",
    "minimally_sufficient_scenarios",
    "classify_factor",
    "attribute_cause",
]

DEFAULT_LIMIT = 16


@dataclass(frozen=True)
class Context:
    effect: str
    scenario_candidates: frozenset[str]
    field: frozenset[str] = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "scenario_candidates", frozenset(self.scenario_candidates))
        object.__setattr__(self, "field", frozenset(self.field))
        if self.effect in self.field:
            raise DomainError("the effect cannot belong to the field")
        if self.effect in self.scenario_candidates:
            raise DomainError("the effect cannot be its own scenario candidate")
        if self.scenario_candidates & self.field:
            raise DomainError("candidates and field overlap: "
                              + ", ".join(sorted(self.scenario_candidates & self.field)))

    @classmethod
    def from_kb(cls, kb: KnowledgeBase, effect: str) -> "Context":
        """Candidates are the basic (underived) causes and standing conditions."""
        if effect not in kb.event_names:
            raise DomainError(f"undeclared effect {effect!r}")
        derived = {r.head for r in kb.rules}
        candidates = kb.events_classified(Classification.CAUSE, Classification.CONDITION)
        candidates = frozenset(c for c in candidates if c != effect and c not in derived)
        return cls(effect, candidates, kb.events_classified(Classification.FIELD))


@dataclass(frozen=True)
class Scenario:
    conjuncts: frozenset[str]
    field_ref: frozenset[str] = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "conjuncts", frozenset(self.conjuncts))
        object.__setattr__(self, "field_ref", frozenset(self.field_ref))
        if not self.conjuncts:
            raise DomainError("a scenario needs at least one conjunct")

    def __contains__(self, event):
        return event in self.conjuncts

    def sort_key(self):
        return (len(self.conjuncts), tuple(sorted(self.conjuncts)))

    def __str__(self):
        return "".join(sorted(self.conjuncts)) if all(len(c) == 1 for c in self.conjuncts) \
            else "{" + ",".join(sorted(self.conjuncts)) + "}"


class CauseClassification(enum.Enum):
    INUS = "inus"
    SUFFICIENT_ONLY = "sufficient-only"
    NECESSARY_ONLY = "necessary-only"
    NECESSARY_AND_SUFFICIENT = "necessary-and-sufficient"
    NON_CAUSE = "non-cause"


class Verdict(enum.Enum):
    CAUSED = "caused"
    NOT_CAUSED = "not-caused"
    OVERDETERMINED = "overdetermined"
    PROBABLE_CAUSE = "probable-cause"


class Occurrence(enum.Enum):
    OCCURRED = "occurred"
    ABSENT = "absent"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class CausalJudgment:
    verdict: Verdict
    live_alternatives: tuple[Scenario, ...] = ()


# -- boolean evaluation -----------------------------------------------------

def strata(rules: Sequence[Rule]) -> tuple[tuple[Rule, ...], ...]:
    """Group rules so that every negated atom is settled in an earlier group.

    An atom's stratum is at least that of each positive body atom and
    strictly above that of each negated one.  Rule bases with a cycle
    through negation have no stratification and are rejected.
    """
    atoms = {r.head for r in rules} | {a for r in rules for a in r.atoms()}
    level = dict.fromkeys(atoms, 0)
    changed = True
    while changed:
        changed = False
        for r in rules:
            need = max((level[l.name] + (0 if l.positive else 1) for l in r.body), default=0)
            if need > level[r.head]:
                if need > len(atoms):
                    raise DomainError(f"rules through {r.head!r} recurse through negation")
                level[r.head] = need
                changed = True
    groups: dict[int, list[Rule]] = {}
    for r in rules:
        groups.setdefault(level[r.head], []).append(r)
    return tuple(tuple(groups[k]) for k in sorted(groups))


def forward_chain(rules: Sequence[Rule], facts: Iterable[str]) -> frozenset[str]:
    """Close ``facts`` under the rules, one stratum at a time.

    A negative body literal ``!x`` holds when ``x`` is neither a fact nor
    derivable; stratification guarantees ``x`` is final before it is read.
    """
    known = set(facts)
    for group in strata(rules):
        changed = True
        while changed:
            changed = False
            for r in group:
                if r.head in known:
                    continue
                if all((lit.name in known) == lit.positive for lit in r.body):
                    known.add(r.head)
                    changed = True
    return frozenset(known)


class _Evaluator:
    """Evaluates the effect for candidate subsets given as bitmasks."""

    def __init__(self, ctx: Context, rules: Sequence[Rule], order: Sequence[str]):
        self.ctx = ctx
        self.order = tuple(order)
        atoms = set(order) | set(ctx.field) | {ctx.effect}
        for r in rules:
            atoms.add(r.head)
            atoms.update(r.atoms())
        self.index = {a: i for i, a in enumerate(sorted(atoms))}
        self.cand_bits = [1 << self.index[c] for c in self.order]
        self.field_bits = sum(1 << self.index[f] for f in ctx.field)
        self.effect_bit = 1 << self.index[ctx.effect]
        self.groups = []
        for group in strata(rules):
            compiled = []
            for r in group:
                pos = sum(1 << self.index[l.name] for l in r.body if l.positive)
                neg = sum(1 << self.index[l.name] for l in r.body if not l.positive)
                compiled.append((1 << self.index[r.head], pos, neg))
            self.groups.append(compiled)

    def facts(self, mask: int) -> int:
        out = self.field_bits
        for j, bit in enumerate(self.cand_bits):
            if mask >> j & 1:
                out |= bit
        return out

    def __call__(self, mask: int) -> bool:
        known = self.facts(mask)
        for group in self.groups:
            changed = True
            while changed:
                changed = False
                for head, pos, neg in group:
                    if not known & head and known & pos == pos and not known & neg:
                        known |= head
                        changed = True
        return bool(known & self.effect_bit)


def minimally_sufficient_scenarios(ctx: Context, rules: Sequence[Rule],
                                   limit: int = DEFAULT_LIMIT) -> tuple[Scenario, ...]:
    """Every minimal sufficient conjunction of candidates, smallest first.

    A set is sufficient when the effect holds for it and for every larger set
    of candidates; it is minimal when dropping any one conjunct breaks that.
    """
    order = tuple(sorted(ctx.scenario_candidates))
    k = len(order)
    if k > limit:
        raise CapacityError("too many scenario candidates", k, limit)
    f = _Evaluator(ctx, rules, order)
    full = (1 << k) - 1
    value = [f(mask) for mask in range(1 << k)]
    sufficient = [False] * (1 << k)
    # sufficient[S] = f(S) and every one-element extension is sufficient;
    # by induction from the full set that covers all supersets
    for mask in range(full, -1, -1):
        ok = value[mask]
        if ok:
            rest = full & ~mask
            while rest:
                low = rest & -rest
                if not sufficient[mask | low]:
                    ok = False
                    break
                rest ^= low
        sufficient[mask] = ok
    if sufficient[0]:
        raise DegenerateEffectError(f"{ctx.effect!r} follows from the field alone")

    found = []
    for mask in range(1, 1 << k):
        if not sufficient[mask]:
            continue
        sub = mask
        minimal = True
        while sub:
            low = sub & -sub
            if sufficient[mask ^ low]:
                minimal = False
                break
            sub ^= low
        if minimal:
            found.append(Scenario(frozenset(order[j] for j in range(k) if mask >> j & 1),
                                  ctx.field))
    return tuple(sorted(found, key=Scenario.sort_key))


def classify_factor(a: str, ctx: Context, scenarios: Iterable[Scenario]) -> CauseClassification:
    """Place ``a`` on the necessary / sufficient / inus ladder."""
    scenarios = tuple(scenarios)
    if not scenarios:
        raise PreconditionError("need at least one scenario")
    containing = [s for s in scenarios if a in s]
    if a in ctx.field or not containing:
        return CauseClassification.NON_CAUSE
    alone = any(s.conjuncts == {a} for s in scenarios)
    if alone:
        if len(scenarios) == 1:
            return CauseClassification.NECESSARY_AND_SUFFICIENT
        return CauseClassification.SUFFICIENT_ONLY
    if len(containing) == len(scenarios):
        return CauseClassification.NECESSARY_ONLY
    return CauseClassification.INUS


def _status(occ: Mapping[str, Occurrence | str], event: str) -> Occurrence:
    value = occ.get(event, Occurrence.UNKNOWN)
    return value if isinstance(value, Occurrence) else Occurrence(value)


def attribute_cause(a: str, ctx: Context, occ: Mapping[str, Occurrence | str],
                    scenarios: Iterable[Scenario]) -> CausalJudgment:
    """Judge whether ``a`` caused the effect on this occasion.

    ``a`` must be at least inus, must have occurred together with the rest of
    one of its scenarios, and every scenario without ``a`` must have an
    absent conjunct.  A scenario without ``a`` that fully occurred makes the
    effect overdetermined; one that cannot be ruled out because some of its
    conjuncts are unknown turns the verdict into probable cause.  Events
    missing from ``occ`` count as unknown.
    """
    scenarios = tuple(scenarios)
    label = classify_factor(a, ctx, scenarios)
    if label is CauseClassification.NON_CAUSE or _status(occ, a) is not Occurrence.OCCURRED:
        return CausalJudgment(Verdict.NOT_CAUSED)
    completed = any(
        all(_status(occ, c) is Occurrence.OCCURRED for c in s.conjuncts - {a})
        for s in scenarios if a in s
    )
    if not completed:
        return CausalJudgment(Verdict.NOT_CAUSED)
    live = []
    overdetermined = False
    for s in scenarios:
        if a in s:
            continue
        states = [_status(occ, c) for c in sorted(s.conjuncts)]
        if Occurrence.ABSENT in states:
            continue
        live.append(s)
        if all(st is Occurrence.OCCURRED for st in states):
            overdetermined = True
    if not live:
        return CausalJudgment(Verdict.CAUSED)
    verdict = Verdict.OVERDETERMINED if overdetermined else Verdict.PROBABLE_CAUSE
    return CausalJudgment(verdict, tuple(live))
