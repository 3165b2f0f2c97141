import itertools

import pytest

from inets import (
    Agent,
    AgentType,
    Configuration,
    Name,
    Rule,
    Signature,
    alpha_equivalent,
    combinator_system,
    instantiate_duplication,
    instantiate_erasing,
    normalize,
)
from inets.combinators import (
    COMBINATORS,
    CombinatorNames,
    binary_trees,
    complete_tree,
    duplication,
    erasure,
)
from inets.core import check_rule, rules_equivalent
from inets.engine import NORMAL

x1, x2, y1, y2 = Name(0), Name(1), Name(2), Name(3)
EPS = Agent("eps")


def test_names_and_arities():
    assert [(a.name, a.arity) for a in COMBINATORS.signature.values()] == [("eps", 0), ("del", 2), ("gam", 2)]
    with pytest.raises(ValueError):
        CombinatorNames(con=AgentType("gam", 3))


def test_six_rules_one_per_pair():
    s = combinator_system()
    pairs = {tuple(sorted(p)) for p in itertools.combinations_with_replacement(["eps", "del", "gam"], 2)}
    assert set(s.rules) == pairs and len(s.rules) == 6


def test_duplication_entry():
    r = combinator_system().rule_for("del", "gam")
    expected = Rule("del", (Agent("gam", (x1, x2)), Agent("gam", (y1, y2))),
                    "gam", (Agent("del", (x1, y1)), Agent("del", (x2, y2))))
    assert rules_equivalent(r, expected)


def test_erasing_entries_win_over_duplication():
    s = combinator_system()
    assert rules_equivalent(s.rule_for("eps", "gam"), Rule("eps", (), "gam", (EPS, EPS)))
    assert rules_equivalent(s.rule_for("eps", "del"), Rule("eps", (), "del", (EPS, EPS)))


def test_erasing_schema():
    sig = Signature([("eps", 0), ("gam", 2)])
    rules = instantiate_erasing(sig, "eps")
    assert [(r.beta, r.beta_side) for r in rules] == [("eps", ()), ("gam", (EPS, EPS))]
    assert len(instantiate_erasing(Signature([("eps", 0)]), "eps")) == 1
    (_, r3) = instantiate_erasing(Signature([("eps", 0), ("a", 3)]), "eps")
    assert r3.beta_side == (EPS,) * 3
    with pytest.raises(ValueError):
        instantiate_erasing(sig, "gam")


def test_duplication_schema():
    sig = Signature([("eps", 0), ("del", 2), ("a", 1)])
    rules = {r.beta: r for r in instantiate_duplication(sig, "del")}
    assert set(rules) == {"eps", "a"}  # no del/del instance
    assert rules["eps"].alpha_side == (EPS, EPS) and rules["eps"].beta_side == ()
    expected = Rule("del", (Agent("a", (x1,)), Agent("a", (y1,))), "a", (Agent("del", (x1, y1)),))
    assert rules_equivalent(rules["a"], expected)
    for r in rules.values():
        assert check_rule(r, sig) == []
    with pytest.raises(ValueError):
        instantiate_duplication(sig, "a")


def test_tree_enumeration_counts():
    # Catalan numbers
    assert [sum(1 for _ in binary_trees(n)) for n in range(8)] == [1, 1, 2, 5, 14, 42, 132, 429]


@pytest.mark.parametrize("depth", range(1, 6))
def test_erasure_count(depth):
    r = normalize(erasure(complete_tree(depth)), combinator_system())
    assert (r.status, r.interactions, r.final) == (NORMAL, 2 ** (depth + 1) - 1, Configuration())


@pytest.mark.parametrize("internal", range(5))
def test_duplication_copies_every_tree(internal):
    S = combinator_system()
    for t in binary_trees(internal):
        r = normalize(duplication(t), S)
        assert r.status == NORMAL
        for slot in range(2):
            (eq,) = [e for e in r.final.equations if Name(r.final.interface[slot]) in (e.lhs, e.rhs)]
            copy = eq.rhs if eq.lhs == Name(r.final.interface[slot]) else eq.lhs
            assert copy == t
