from __future__ import annotations

import pytest

from bstc import Axiom, PartialChoice, Semantics, check_axiom, parse_formula, verify_model
from bstc.fixtures import alpha_gap, cyclic_pairs, encode_choice
from bstc.oracle import (
    BudgetExceeded, OracleBudget, enumerate_total_choices, oracle_liftable, oracle_sat,
)


def test_total_choice_counts():
    assert sum(1 for _ in enumerate_total_choices("x")) == 1
    assert sum(1 for _ in enumerate_total_choices("xy")) == 3
    assert sum(1 for _ in enumerate_total_choices("xyz")) == 189


@pytest.mark.parametrize("axiom", list(Axiom))
def test_filtered_enumeration_matches_check(axiom):
    everything = list(enumerate_total_choices("xyz"))
    expected = {c for c in everything if check_axiom(c, axiom).holds}
    assert set(enumerate_total_choices("xyz", axiom)) == expected


def test_axiom_counts_on_three_items():
    counts = {a: sum(1 for _ in enumerate_total_choices("xyz", a)) for a in Axiom}
    assert counts[Axiom.WARP] == 13  # one per total preorder on three items
    assert counts[Axiom.WARP] < counts[Axiom.ALPHA] < counts[Axiom.BETA]


def test_liftability():
    assert not oracle_liftable(cyclic_pairs(), Axiom.WARP)
    assert oracle_liftable(cyclic_pairs(), Axiom.BETA)
    assert not oracle_liftable(alpha_gap(), Axiom.ALPHA)
    assert oracle_liftable(PartialChoice.from_sets("xyz", {"xy": "x"}), Axiom.WARP)


def test_sat_and_model():
    f = parse_formula("x != y and c({x} + {y}) = {x}")
    res = oracle_sat(f, Semantics.WARP)
    assert res.sat and str(res) == "SAT"
    assert res.universe_size == 2
    m = res.model
    assert m.individuals["x"] != m.individuals["y"]


def test_fixture_encodings():
    assert not oracle_sat(encode_choice(cyclic_pairs()), Semantics.WARP).sat
    assert oracle_sat(encode_choice(cyclic_pairs()), Semantics.BETA).sat
    res = oracle_sat(encode_choice(alpha_gap()), Semantics.ALPHA, OracleBudget(max_universe=4))
    assert str(res) == "NoModelWithinBudget"


def test_empty_choice_argument_is_inadmissible():
    # only satisfiable with X empty, where c(X) is undefined
    assert not oracle_sat(parse_formula("X = 0 and c(X) = c(X)"), Semantics.UNRESTRICTED).sat


def test_budget():
    with pytest.raises(ValueError):
        OracleBudget(max_universe=5)
    with pytest.raises(BudgetExceeded):
        oracle_sat(parse_formula("X sub Y and Y sub Z and not Z sub X and not X = Y"),
                   Semantics.UNRESTRICTED, OracleBudget(max_universe=3, max_assignments=3))
    with pytest.raises(BudgetExceeded):
        oracle_liftable(PartialChoice.from_sets("abcde", {"ab": "a"}), Axiom.ALPHA)
