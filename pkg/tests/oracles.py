"""Slow, definition-level oracles used to cross-check the fast code paths.

Nothing here shares code with the package beyond its data types.
"""

import itertools
from fractions import Fraction

from causatum.inus import CauseClassification


def holds(atom, facts, rules, memo=None):
    """Truth of ``atom`` in an acyclic rule base by recursive descent."""
    memo = {} if memo is None else memo
    if atom in facts:
        return True
    if atom not in memo:
        memo[atom] = any(
            all(holds(lit.name, facts, rules, memo) == lit.positive for lit in r.body)
            for r in rules if r.head == atom
        )
    return memo[atom]


def truth_table(ctx, rules):
    """Map every subset of candidates (as a frozenset) to the effect's value."""
    cands = sorted(ctx.scenario_candidates)
    table = {}
    for bits in itertools.product((False, True), repeat=len(cands)):
        chosen = frozenset(c for c, b in zip(cands, bits) if b)
        table[chosen] = holds(ctx.effect, chosen | ctx.field, rules)
    return table


def sufficient_sets(ctx, rules):
    table = truth_table(ctx, rules)
    return {s for s in table if all(v for t, v in table.items() if s <= t)}


def prime_implicants(ctx, rules):
    """Minimal sufficient candidate sets sorted by size then names.

    ``None`` when the empty set is already sufficient.
    """
    suff = sufficient_sets(ctx, rules)
    if frozenset() in suff:
        return None
    minimal = [s for s in suff if not any((s - {x}) in suff for x in s)]
    return [set(s) for s in sorted(minimal, key=lambda s: (len(s), sorted(s)))]


def classify(a, ctx, rules):
    """Label ``a`` straight from the sufficiency relation."""
    primes = [frozenset(s) for s in prime_implicants(ctx, rules)]
    suff = sufficient_sets(ctx, rules)
    in_some = any(a in s for s in primes)
    in_all = all(a in s for s in primes)
    alone = frozenset({a}) in suff
    if a in ctx.field or not in_some:
        return CauseClassification.NON_CAUSE
    if alone:
        return (CauseClassification.NECESSARY_AND_SUFFICIENT if len(primes) == 1
                else CauseClassification.SUFFICIENT_ONLY)
    return CauseClassification.NECESSARY_ONLY if in_all else CauseClassification.INUS


def plan_by_enumeration(problem):
    """Best act sequence by scoring every sequence from every start state."""
    best = None
    for acts in itertools.product(*(sorted(d) for d in problem.decisions)):
        total = sum((_eu(problem, t, d) for t, d in enumerate(acts)), Fraction(0))
        if best is None or total > best[0]:
            best = (total, acts)
    return best


def _eu(problem, t, d):
    return sum((problem.utility[(t, d, x)] * p
                for x, p in zip(problem.outcomes[t], problem.prob[(t, d)])), Fraction(0))


def deck_cards():
    """The 52 cards as (suit, rank) pairs, rank 0 being the ace."""
    return [(suit, rank) for suit in ("spade", "heart", "diamond", "club") for rank in range(13)]


def card_probability(event):
    cards = deck_cards()
    return Fraction(sum(1 for c in cards if event(*c)), len(cards))
