from __future__ import annotations

import itertools

from bstc import complete, flatten, normalize, parse_formula, promising_sets, skeleton
from bstc.normalizer import completion_conditions, evaluate_prop, is_choice_flat, is_satisfiable_prop
from bstc.syntax import build_index, formula_to_text


def test_flatten_introduces_definitions_innermost_first():
    f = flatten(parse_formula("c(c(X) + Y) = X"))
    assert formula_to_text(f) == "X__flat_1 = c(X) and c(X__flat_1 + Y) = X"
    assert is_choice_flat(f)


def test_flatten_deep_nesting():
    f = flatten(parse_formula("c(c(c(X))) = X"))
    assert is_choice_flat(f)
    assert formula_to_text(f).startswith("X__flat_1 = c(X) and X__flat_2 = c(X__flat_1)")


def test_flatten_leaves_flat_formula_alone():
    f = parse_formula("c(X) sub Y and c(Y) = X")
    assert flatten(f) is f


def test_flatten_avoids_existing_fresh_names():
    f = flatten(parse_formula("c(c(X)) = X"))
    g = flatten(parse_formula(formula_to_text(f).replace("X__flat_1", "Y") + " and c(c(Y)) = Y"))
    assert is_choice_flat(g)


def test_completion_conditions():
    f = parse_formula("c(X) = Y and c(Z) sub Y")
    conds = [formula_to_text(g) for g in completion_conditions(f)]
    assert conds == [
        "not c(X) = 0", "c(X) sub X",
        "not c(Z) = 0", "c(Z) sub Z",
        "X = Z -> c(X) = c(Z)",
    ]


def test_complete_is_idempotent():
    f = parse_formula("c(X) = Y")
    g = complete(f)
    assert complete(g) == g
    assert normalize(f) == g


def test_choice_free_formula_has_no_completion():
    f = parse_formula("X sub Y")
    assert normalize(f) is f


def _satisfying_sets(prop, n):
    out = set()
    for vals in itertools.product((False, True), repeat=n):
        if evaluate_prop(prop, list(vals)):
            out.add(frozenset(i for i in range(n) if vals[i]))
    return out


def test_promising_sets_match_truth_table():
    f = parse_formula("(X = 0 or Y = 0) and (X = 0 -> Z sub Y) and not (Y = 0 <-> Z sub Y)")
    sk = skeleton(f)
    assert set(promising_sets(sk)) == _satisfying_sets(sk.prop, sk.n_vars)


def test_promising_sets_order():
    sk = skeleton(parse_formula("X = 0 or Y = 0 or Z = 0"))
    sizes = [len(s) for s in promising_sets(sk)]
    assert sizes == sorted(sizes)
    sizes = [len(s) for s in promising_sets(sk, largest_first=True)]
    assert sizes == sorted(sizes, reverse=True)


def test_unsatisfiable_skeleton():
    sk = skeleton(parse_formula("X = 0 and not X = 0"))
    assert list(promising_sets(sk)) == []
    assert not is_satisfiable_prop(sk)


def test_kleene_evaluation_with_unknowns():
    sk = skeleton(parse_formula("X = 0 or Y = 0"))
    assert evaluate_prop(sk.prop, [None, None]) is None
    assert evaluate_prop(sk.prop, [True, None]) is True
    assert evaluate_prop(sk.prop, [False, False]) is False


def test_skeleton_shares_repeated_atoms():
    sk = skeleton(parse_formula("X = 0 and (X = 0 or Y = 0)"))
    assert sk.n_vars == 2
    assert len(build_index(parse_formula("X = 0 and (X = 0 or Y = 0)")).atoms) == 2
