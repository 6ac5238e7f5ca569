import itertools
import random
from dataclasses import replace
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import gen
from causatum.errors import (
    CycleError,
    DomainError,
    MissingBindingError,
    NoExplanationError,
    PreconditionError,
    StructureMismatchError,
)
from causatum.explain import (
    OpCounter,
    abduce,
    abstract_qualitative,
    benchmark,
    build_structure,
    diff_structures,
    explain_failure,
    goal_regress,
    net_present_value,
)
from causatum.inus import forward_chain
from causatum.kb import Literal, Rule, parse_kb
from causatum.worlds import PossibleWorld, enumerate_worlds

HALF = Fraction(1, 2)

SMALL_KB = parse_kb("""
#EVENTS
profitable
shelf
tax_ok
disc_ok
tax_rate_low
#CLASSIFY
disc_ok : condition
#RULES
profitable <- shelf & tax_ok & disc_ok
tax_ok <- tax_rate_low
""")


def test_abduce_prefers_likelier_world():
    worlds = enumerate_worlds(["e0"])
    post = abduce(worlds, (HALF, HALF), (Fraction(9, 10), Fraction(1, 10)))
    assert post.winner == PossibleWorld(0, 1)
    assert [c[3] for c in post.candidates] == [Fraction(9, 10), Fraction(1, 10)]


def test_abduce_ties_go_to_lowest_world():
    worlds = enumerate_worlds(["e0", "e1"])
    post = abduce(worlds, (Fraction(1, 4),) * 4, lambda w: HALF)
    assert str(post.winner) == "00"


def test_abduce_errors():
    worlds = enumerate_worlds(["e0"])
    with pytest.raises(NoExplanationError):
        abduce(worlds, (HALF, HALF), (0, 0))
    with pytest.raises(PreconditionError):
        abduce(worlds, (HALF, Fraction(1, 3)), (1, 1))


@given(st.integers(1, 6), st.integers(0, 10_000))
@settings(max_examples=80)
def test_abduce_matches_brute_force(m, seed):
    rng = random.Random(seed)
    worlds = enumerate_worlds([f"e{i}" for i in range(m)])
    weights = [rng.randint(0, 4) for _ in worlds]
    weights[rng.randrange(len(weights))] += 1
    priors = [Fraction(w, sum(weights)) for w in weights]
    liks = [Fraction(rng.randint(0, 3), 3) for _ in worlds]
    if not any(p * l for p, l in zip(priors, liks)):
        liks = [Fraction(1)] * len(liks)
    post = abduce(worlds, priors, liks)
    best = max(p * l for p, l in zip(priors, liks))
    expected = min(w for w, p, l in zip(worlds, priors, liks) if p * l == best)
    assert post.winner == expected
    assert sum(c[3] for c in post.candidates) == 1


def test_goal_regress_leaves():
    assert goal_regress("profitable", SMALL_KB.rules) == {"shelf", "tax_rate_low", "disc_ok"}
    assert "profitable" in forward_chain(SMALL_KB.rules, {"shelf", "tax_rate_low", "disc_ok"})


def test_goal_without_rules_is_its_own_leaf():
    assert goal_regress("shelf", SMALL_KB.rules) == {"shelf"}


def test_goal_regress_cycle():
    rules = [Rule("g", (Literal("a"),)), Rule("a", (Literal("b"),)), Rule("b", (Literal("a"),))]
    with pytest.raises(CycleError) as info:
        goal_regress("g", rules)
    assert set(info.value.cycle) == {"a", "b"}


def test_goal_regress_counts_one_match_per_rule_per_expanded_node():
    counter = OpCounter()
    goal_regress("profitable", SMALL_KB.rules, counter)
    # profitable, shelf, tax_ok, tax_rate_low and disc_ok each scan both rules
    assert counter.unifications == 5 * 2
    counter = OpCounter()
    goal_regress("profitable", SMALL_KB.rules, counter, known={"disc_ok"})
    assert counter.unifications == 4 * 2


@pytest.mark.parametrize("seed", range(80))
def test_regressed_leaves_entail_the_goal(seed):
    rng = random.Random(seed)
    _, _, _, rules = gen.random_rule_base(rng, rng.randint(1, 6), n_intermediate=4,
                                          n_field=1, max_rules=12)
    leaves = goal_regress("Z", rules)
    assert "Z" in forward_chain(rules, leaves)


def test_build_structure_cereal(cereal):
    success = build_structure(cereal, "profitable", cereal.binding_set("success"))
    failure = build_structure(cereal, "profitable", cereal.binding_set("failure"))
    assert success.node("profitable").value is True
    assert failure.node("profitable").value is False
    assert success.node("shelf_space_adequate").value == 48
    assert success.topology() == failure.topology()


def test_build_structure_missing_binding():
    with pytest.raises(MissingBindingError) as info:
        build_structure(SMALL_KB, "profitable", {"shelf": 1, "tax_rate_low": 1})
    assert info.value.leaf == "disc_ok"
    assert "disc_ok" in str(info.value)


def test_build_structure_counts_into_counter():
    counter = OpCounter()
    build_structure(SMALL_KB, "profitable", {"shelf": 1, "tax_rate_low": 1, "disc_ok": 1},
                    counter=counter)
    assert counter.unifications == 10


def test_abstraction_defaults():
    kb = parse_kb("#EVENTS\nprofit\n")
    for value, expected in [(Fraction(-16, 5), False), (Fraction(0), False), (Fraction(1, 9), True)]:
        s = abstract_qualitative(build_structure(kb, "profit", {"profit": value}))
        assert s.node("profit").value is expected
        assert s.node("profit").raw == value
        assert s.is_qualitative()


def test_abstraction_respects_threshold_table():
    kb = parse_kb("#EVENTS\nshelf\n")
    s = build_structure(kb, "shelf", {"shelf": 10})
    assert abstract_qualitative(s).node("shelf").value is True
    assert abstract_qualitative(s, {"shelf": 24}).node("shelf").value is False


def test_npv_node_over_eight_periods():
    npv = net_present_value([Fraction(33, 10)] * 8, Fraction(1, 5))
    direct = sum(Fraction(33, 10) / Fraction(6, 5) ** t for t in range(1, 9))
    assert npv == direct == Fraction(14178901, 1119744)
    kb = parse_kb("#EVENTS\nnpv\n")
    assert abstract_qualitative(build_structure(kb, "npv", {"npv": npv})).node("npv").value


def test_npv_rejects_impossible_rate():
    with pytest.raises(DomainError):
        net_present_value([1], -1)


def qualitative(cereal, binding_set):
    return abstract_qualitative(
        build_structure(cereal, "profitable", cereal.binding_set(binding_set)), cereal.thresholds)


def test_diff_identical_structures_is_empty(cereal):
    s = qualitative(cereal, "success")
    assert diff_structures(s, s).empty


def test_diff_cereal_single_proposition(cereal):
    report = diff_structures(qualitative(cereal, "success"), qualitative(cereal, "failure"),
                             protected={"tax_rate", "discount_rate"})
    assert report.differing == {"shelf_space_adequate"}
    assert report.protected_violations == frozenset()
    assert report.derived_differing == {"profitable", "sales_adequate"}


def test_diff_protected_change_is_a_violation(cereal):
    failure = {**cereal.binding_set("failure"), "tax_rate": Fraction(1, 2)}
    f = abstract_qualitative(build_structure(cereal, "profitable", failure), cereal.thresholds)
    report = diff_structures(qualitative(cereal, "success"), f,
                             protected={"tax_rate", "discount_rate"})
    assert report.protected_violations == {"tax_rate"}
    assert "tax_rate" not in report.differing


def test_diff_requires_abstraction_and_same_shape(cereal):
    raw = build_structure(cereal, "profitable", cereal.binding_set("success"))
    with pytest.raises(PreconditionError):
        diff_structures(raw, raw)
    other = abstract_qualitative(build_structure(cereal, "sales_adequate",
                                                 cereal.binding_set("success")))
    with pytest.raises(StructureMismatchError) as info:
        diff_structures(qualitative(cereal, "success"), other)
    assert "profitable" in info.value.missing


@given(st.integers(0, 10_000))
@settings(max_examples=60, deadline=None)
def test_protected_never_in_differing(seed):
    rng = random.Random(seed)
    kb = parse_kb("#EVENTS\ng\na\nb\nc\n#RULES\ng <- a & b & c\n")
    values = [{e: Fraction(rng.randint(-2, 2)) for e in "abc"} for _ in range(2)]
    s1, s2 = (abstract_qualitative(build_structure(kb, "g", v)) for v in values)
    protected = set(rng.sample("abc", rng.randint(0, 3)))
    report = diff_structures(s1, s2, protected)
    assert not report.differing & protected
    assert report.differing | report.protected_violations == {
        e for e in "abc" if (values[0][e] > 0) != (values[1][e] > 0)
        or (e in protected and values[0][e] != values[1][e])}


@pytest.mark.parametrize("level", [0, 1, 2, 3])
def test_explain_cereal_every_level(cereal, level):
    result = explain_failure(cereal, "profitable", "success", "failure", level)
    assert result.cause == {"shelf_space_adequate"}
    assert result.conditions == {"tax_rate", "discount_rate"}
    assert result.field == {"eaten_with_milk", "grocery_distribution"}
    assert result.success_goal is True and result.failure_goal is False
    assert result.protected == ({"tax_rate", "discount_rate"} if level == 3 else frozenset())


def test_explain_costs_drop_with_knowledge(cereal):
    counts = benchmark(cereal, "profitable", "success", "failure")
    assert counts == {0: 63, 1: 42, 2: 30, 3: 18}


def test_explain_same_bindings_give_empty_cause(cereal):
    result = explain_failure(cereal, "profitable", "success", "success")
    assert result.cause == frozenset() and result.derived_differing == frozenset()


def test_explain_accepts_mappings(cereal):
    result = explain_failure(cereal, "profitable", {"shelf_space_adequate": 30},
                             {"shelf_space_adequate": 20})
    assert result.cause == {"shelf_space_adequate"}


def test_explain_rejects_bad_level(cereal):
    with pytest.raises(DomainError):
        explain_failure(cereal, "profitable", "success", "failure", 4)


def random_annotated_kb(rng):
    """Chain-shaped KB whose goal needs every kind of event."""
    kinds = ["cause", "condition", "field", "irrelevant"]
    leaves = [(f"{k}{i}", k) for k in kinds for i in range(rng.randint(1, 2))]
    useful = [n for n, k in leaves if k != "irrelevant"]
    lines = ["#EVENTS", "goal", "mid", *(n for n, _ in leaves), "#CLASSIFY"]
    lines += [f"{n} : {k}" for n, k in leaves]
    split = rng.randint(1, len(useful))
    lines += ["#RULES", "goal <- mid & " + " & ".join(useful[split:]) if useful[split:] else "goal <- mid",
              "mid <- " + " & ".join(useful[:split])]
    irrelevant = [n for n, k in leaves if k == "irrelevant"]
    if len(irrelevant) > 1:
        lines.append(f"{irrelevant[0]} <- {irrelevant[1]}")
    return parse_kb("\n".join(lines) + "\n")


@pytest.mark.parametrize("seed", range(30))
def test_cost_monotone_on_random_annotations(seed):
    kb = random_annotated_kb(random.Random(seed))
    ok = {e: 1 for e in kb.event_names}
    bad = dict(ok, cause0=0)
    counts = benchmark(kb, "goal", ok, bad)
    seq = [counts[k] for k in range(4)]
    assert all(a >= b for a, b in zip(seq, seq[1:]))
    # field and condition events are always reached, so levels 2 and 3 strictly save work
    assert seq[1] > seq[2] > seq[3]
    causes = {explain_failure(kb, "goal", ok, bad, k).cause for k in range(4)}
    assert causes == {frozenset({"cause0"})}


def test_level_one_drops_rules_that_mention_irrelevant_events():
    kb = parse_kb("#EVENTS\ng\na\nx\ny\n#CLASSIFY\nx : irrelevant\ny : irrelevant\n"
                  "#RULES\ng <- a\nx <- y\n")
    counts = benchmark(kb, "g", {"a": 1}, {"a": 0})
    # one regression and two structure builds, each expanding g and a
    assert counts[0] == 3 * 2 * 2 and counts[1] == 3 * 2 * 1


def test_counter_is_per_run(cereal):
    first = explain_failure(cereal, "profitable", "success", "failure", 0).op_count
    second = explain_failure(cereal, "profitable", "success", "failure", 0).op_count
    assert first == second


def test_structure_topology_is_shared_between_runs(cereal):
    s, f = qualitative(cereal, "success"), qualitative(cereal, "failure")
    assert [n.name for n in s.nodes] == [n.name for n in f.nodes]
    assert set(itertools.chain.from_iterable(
        (lit.name for lit in n.children) for n in s.nodes)) <= {n.name for n in s.nodes}
    assert replace(s.node("profitable"), value=False, raw=False) == f.node("profitable")
