"""Seeded random generators shared by the property and acceptance tests."""

import itertools
from fractions import Fraction

from causatum.decide import DecisionProblem
from causatum.kb import Literal, Rule
from causatum.stat import JointDistribution


def rand_fraction(rng, lo=0, hi=1, den=60):
    """Uniform-ish rational in ``[lo, hi]`` with a random denominator."""
    d = rng.randint(1, den)
    return Fraction(lo) + Fraction(rng.randint(0, d), d) * (Fraction(hi) - Fraction(lo))


def rand_open_fraction(rng, den=97):
    """Rational strictly between 0 and 1."""
    d = rng.randint(2, den)
    return Fraction(rng.randint(1, d - 1), d)


def common_cause_table(rng, adversarial=False):
    """Joint over (C, X, Y) with X, Y independent given C and given not-C,
    and C positively relevant to both.

    The adversarial variant makes the relevance gaps tiny.
    """
    p_c = rand_open_fraction(rng)
    sides = []
    for _ in range(2):
        if adversarial:
            low = rand_fraction(rng, 0, Fraction(99, 100))
            high = low + Fraction(1, 10 ** rng.randint(6, 12))
        else:
            a, b = rand_fraction(rng), rand_fraction(rng)
            while a == b:
                b = rand_fraction(rng)
            low, high = min(a, b), max(a, b)
        sides.append((low, high))
    (x0, x1), (y0, y1) = sides

    def weight(C, X, Y):
        px = x1 if C else x0
        py = y1 if C else y0
        return (p_c if C else 1 - p_c) * (px if X else 1 - px) * (py if Y else 1 - py)

    return JointDistribution.from_function(("C", "X", "Y"), weight)


def random_table(rng, vars, zero_rate=0.15, den=30):
    weights = [0 if rng.random() < zero_rate else rng.randint(1, den)
               for _ in range(2 ** len(vars))]
    if not any(weights):
        weights[rng.randrange(len(weights))] = 1
    total = sum(weights)
    return JointDistribution(tuple(vars), tuple(Fraction(w, total) for w in weights))


def sr_table(rng):
    """Table over (A, B, C) with 0 < P(C|A) < 1.

    Half of the tables make B independent of C within A so that both
    relevance clauses fail; the rest are unconstrained.
    """
    while True:
        if rng.random() < 0.5:
            p_a = rand_open_fraction(rng)
            p_c = [rand_open_fraction(rng) for _ in range(2)]
            p_b = [rand_fraction(rng) for _ in range(2)]

            def weight(A, B, C):
                pc, pb = p_c[A], p_b[A]
                return (p_a if A else 1 - p_a) * (pc if C else 1 - pc) * (pb if B else 1 - pb)

            dist = JointDistribution.from_function(("A", "B", "C"), weight)
        else:
            dist = random_table(rng, ("A", "B", "C"))
        cells = dict(zip(itertools.product((0, 1), repeat=3), dist.table))
        p_ac = cells[1, 0, 1] + cells[1, 1, 1]
        p_anc = cells[1, 0, 0] + cells[1, 1, 0]
        if p_ac > 0 and p_anc > 0:
            return dist


def random_rule_base(rng, n_candidates, n_intermediate=3, n_field=0, max_rules=7,
                     negation_rate=0.0):
    """Acyclic rule base over candidates c*, intermediates m*, field f* and effect Z.

    Body literals are negated with probability ``negation_rate``.
    """
    cands = [f"c{i}" for i in range(n_candidates)]
    mids = [f"m{i}" for i in range(n_intermediate)]
    field = [f"f{i}" for i in range(n_field)]
    rules = []
    for _ in range(rng.randint(1, max_rules)):
        head_i = rng.randrange(len(mids) + 1)
        if head_i == len(mids):
            head, pool = "Z", cands + mids + field
        else:
            head, pool = mids[head_i], cands + mids[head_i + 1:] + field
        body = rng.sample(pool, rng.randint(1, min(3, len(pool))))
        rules.append(Rule(head, tuple(Literal(b, rng.random() >= negation_rate) for b in body)))
    if not any(r.head == "Z" for r in rules):
        body = rng.sample(cands + mids, rng.randint(1, min(3, len(cands + mids))))
        rules.append(Rule("Z", tuple(Literal(b) for b in body)))
    return cands, mids, field, rules


def random_problem(rng, max_T=3, max_D=3, max_X=4):
    T = rng.randint(1, max_T)
    decisions, outcomes = [], []
    for t in range(T):
        decisions.append(tuple(f"a{i}" for i in rng.sample(range(5), rng.randint(1, max_D))))
        outcomes.append(tuple(f"x{i}" for i in range(rng.randint(1, max_X))))
    utility, prob, transition = {}, {}, {}
    for t in range(T):
        for d in decisions[t]:
            weights = [rng.randint(0, 9) for _ in outcomes[t]]
            if not any(weights):
                weights[0] = 1
            prob[(t, d)] = tuple(Fraction(w, sum(weights)) for w in weights)
            for x in outcomes[t]:
                # small integer range so that ties actually happen
                utility[(t, d, x)] = Fraction(rng.randint(-4, 4), rng.choice((1, 2, 3)))
                if t + 1 < T:
                    transition[(t, d, x)] = rng.choice(outcomes[t + 1])
    return DecisionProblem(T, tuple(decisions), tuple(outcomes), utility, prob, transition)


def random_kb(rng, max_events=10):
    """A valid knowledge base exercising every section."""
    from causatum.kb import Classification, EventSymbol, KnowledgeBase

    n = rng.randint(1, max_events)
    names = [f"e{i}" for i in range(n)]
    events = tuple(
        EventSymbol(name,
                    rng.choice([None, rng.randint(0, 6)]),
                    rng.choice([None, "here", "lab_2"]))
        for name in names
    )
    classifications = tuple(
        (name, rng.choice(list(Classification))) for name in rng.sample(names, rng.randint(0, n))
    )
    rules = []
    if n >= 2:
        for _ in range(rng.randint(0, 4)):
            head = rng.randrange(1, n)
            body = rng.sample(names[:head], rng.randint(1, min(3, head)))
            rules.append(Rule(names[head], tuple(Literal(b, rng.random() < 0.8) for b in body)))

    def some_values():
        return {name: rand_fraction(rng, -5, 5, den=8) for name in rng.sample(names, rng.randint(0, n))}

    binding_sets = {label: some_values() for label in rng.sample(["success", "failure", "b3"],
                                                                  rng.randint(0, 2))}
    distributions = {}
    if rng.random() < 0.7:
        k = rng.randint(1, min(3, n))
        distributions["d0"] = random_table(rng, rng.sample(names, k))
    timed = [e for e in events if e.time_index is not None]
    edges = []
    for a in timed:
        for b in timed:
            if a.time_index < b.time_index and rng.random() < 0.3:
                edges.append((a.name, b.name))
    return KnowledgeBase(
        events=events,
        rules=tuple(rules),
        classifications=classifications,
        distributions=distributions,
        decision=random_problem(rng) if rng.random() < 0.5 else None,
        process_edges=tuple(edges),
        bindings=some_values(),
        binding_sets=binding_sets,
        thresholds={name: rand_fraction(rng, 0, 50, den=4) for name in rng.sample(names, rng.randint(0, 2))},
    )
