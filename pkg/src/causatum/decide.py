"""Finite-horizon expected-utility decision problems.

A problem has, for every tick ``t``, a set of acts ``D(t)``, a set of
outcomes ``X(t)``, utilities ``U(t, d, x)``, outcome probabilities
``P(x | t, d)`` and a deterministic transition ``R(t, d, x)`` into
``X(t + 1)``.  All numbers are :class:`fractions.Fraction`.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Mapping, Sequence

from .errors import DomainError, PreconditionError

__all__ = [
    "DecisionProblem",
    "Plan",
    "Trajectory",
    "expected_utility",
    "solve_plan",
    "brute_force_plan",
    "simulate",
]


@dataclass(frozen=True)
class DecisionProblem:
    horizon: int
    decisions: tuple[tuple[str, ...], ...]
    outcomes: tuple[tuple[str, ...], ...]
    utility: Mapping[tuple[int, str, str], Fraction] = field(default_factory=dict)
    prob: Mapping[tuple[int, str], tuple[Fraction, ...]] = field(default_factory=dict)
    transition: Mapping[tuple[int, str, str], str] = field(default_factory=dict)

    def problems(self) -> list[str]:
        """Return every invariant violation as a message; empty when valid."""
        out = []
        if self.horizon < 1:
            out.append(f"horizon must be positive, got {self.horizon}")
        if len(self.decisions) != self.horizon or len(self.outcomes) != self.horizon:
            out.append("decision and outcome sets must be given for every tick")
            return out
        for t in range(self.horizon):
            if len(set(self.decisions[t])) != len(self.decisions[t]):
                out.append(f"duplicate act at tick {t}")
            if not self.outcomes[t]:
                out.append(f"empty outcome set at tick {t}")
            for d in self.decisions[t]:
                p = self.prob.get((t, d))
                if p is None:
                    out.append(f"no probabilities for ({t}, {d})")
                elif len(p) != len(self.outcomes[t]):
                    out.append(f"probability vector for ({t}, {d}) has wrong length")
                else:
                    if any(v < 0 for v in p):
                        out.append(f"negative probability for ({t}, {d})")
                    if sum(p, Fraction(0)) != 1:
                        out.append(f"probabilities for ({t}, {d}) sum to {sum(p, Fraction(0))}")
                for x in self.outcomes[t]:
                    if (t, d, x) not in self.utility:
                        out.append(f"no utility for ({t}, {d}, {x})")
                    if t + 1 < self.horizon:
                        nxt = self.transition.get((t, d, x))
                        if nxt is None:
                            out.append(f"no transition for ({t}, {d}, {x})")
                        elif nxt not in self.outcomes[t + 1]:
                            out.append(f"transition ({t}, {d}, {x}) leaves X({t + 1}): {nxt}")
        return out

    def validate(self) -> None:
        problems = self.problems()
        if problems:
            raise DomainError("; ".join(problems))


@dataclass(frozen=True)
class Plan:
    acts: tuple[str, ...]
    total_eu: Fraction


@dataclass(frozen=True)
class Trajectory:
    steps: tuple[tuple[int, str, str], ...]
    # states[t] is the outcome the process entered tick t in
    states: tuple[str, ...] = ()

    def __len__(self):
        return len(self.steps)

    def __iter__(self):
        return iter(self.steps)


def expected_utility(problem: DecisionProblem, t: int, d: str) -> Fraction:
    """Sum of ``U(t, d, x) * P(x | d)`` over ``X(t)``."""
    if not 0 <= t < problem.horizon or d not in problem.decisions[t]:
        raise DomainError(f"unknown act {d!r} at tick {t}")
    probs = problem.prob[(t, d)]
    return sum(
        (problem.utility[(t, d, x)] * p for x, p in zip(problem.outcomes[t], probs)),
        Fraction(0),
    )


def _check_solvable(problem: DecisionProblem) -> None:
    for t in range(problem.horizon):
        if not problem.decisions[t]:
            raise DomainError(f"empty decision set at tick {t}")
    problem.validate()


def solve_plan(problem: DecisionProblem) -> Plan:
    """Maximize the summed expected utility by backward induction.

    Values are computed per (tick, entering outcome) state.  Acts are tried
    in lexicographic order and only a strictly better value replaces the
    incumbent, so ties go to the lexicographically first act sequence.
    """
    _check_solvable(problem)
    T = problem.horizon
    value: dict[str, Fraction] = {}
    policy: list[dict[str, str]] = [dict() for _ in range(T)]
    for t in reversed(range(T)):
        eu = {d: expected_utility(problem, t, d) for d in problem.decisions[t]}
        new_value = {}
        for s in problem.outcomes[t]:
            best_d, best_v = None, None
            for d in sorted(problem.decisions[t]):
                q = eu[d]
                if t + 1 < T:
                    probs = problem.prob[(t, d)]
                    q += sum(
                        (p * value[problem.transition[(t, d, x)]]
                         for x, p in zip(problem.outcomes[t], probs)),
                        Fraction(0),
                    )
                if best_v is None or q > best_v:
                    best_d, best_v = d, q
            policy[t][s] = best_d
            new_value[s] = best_v
        value = new_value

    # Utilities and probabilities do not depend on the entering state, so the
    # policy is the same from every state; read it off along one path.
    acts = []
    state = problem.outcomes[0][0]
    for t in range(T):
        d = policy[t][state]
        acts.append(d)
        if t + 1 < T:
            state = problem.transition[(t, d, problem.outcomes[t][0])]
    total = sum((expected_utility(problem, t, d) for t, d in enumerate(acts)), Fraction(0))
    return Plan(tuple(acts), total)


def brute_force_plan(problem: DecisionProblem) -> Plan:
    """Exhaustive search over all act sequences (reference implementation)."""
    _check_solvable(problem)
    best = None
    for seq in itertools.product(*(sorted(ds) for ds in problem.decisions)):
        total = sum((expected_utility(problem, t, d) for t, d in enumerate(seq)), Fraction(0))
        if best is None or total > best.total_eu:
            best = Plan(tuple(seq), total)
    return best


OutcomeSelector = Callable[[int, str, str], str]


def simulate(
    problem: DecisionProblem,
    plan: Plan | Sequence[str],
    start: str,
    chance: OutcomeSelector | Sequence[str] | None = None,
) -> Trajectory:
    """Run ``plan`` from ``start`` and return the realized path.

    ``chance`` picks the realized outcome of each tick.  It is either a
    callable ``(t, act, entered_state) -> outcome`` or a sequence with one
    outcome per tick; by default the realized outcome is the state the
    process entered the tick in.  The state entering tick ``t + 1`` is
    ``R(t, act, outcome)``.
    """
    acts = tuple(plan.acts if isinstance(plan, Plan) else plan)
    if len(acts) != problem.horizon:
        raise PreconditionError(
            f"plan has {len(acts)} acts but the horizon is {problem.horizon}"
        )
    if start not in problem.outcomes[0]:
        raise PreconditionError(f"start {start!r} is not an outcome of tick 0")
    if chance is None:
        select: OutcomeSelector = lambda t, d, s: s
    elif callable(chance):
        select = chance
    else:
        seq = tuple(chance)
        if len(seq) != problem.horizon:
            raise PreconditionError("chance sequence must give one outcome per tick")
        select = lambda t, d, s: seq[t]

    steps, states = [], [start]
    state = start
    for t, d in enumerate(acts):
        if d not in problem.decisions[t]:
            raise DomainError(f"unknown act {d!r} at tick {t}")
        x = select(t, d, state)
        if x not in problem.outcomes[t]:
            raise DomainError(f"selected outcome {x!r} is not in X({t})")
        steps.append((t, d, x))
        if t + 1 < problem.horizon:
            try:
                state = problem.transition[(t, d, x)]
            except KeyError:
                raise DomainError(f"missing transition entry for ({t}, {d}, {x})") from None
            states.append(state)
    return Trajectory(tuple(steps), tuple(states))
