"""Finite-model evaluation used as a semantic cross-check."""

import random

import pytest

from conftest import random_formula
from fol_core import free_variables, universal_closure
from propositional import is_tautology
from semantics_oracle import (
    Interpretation,
    OpenFormulaError,
    UnboundVariableError,
    evaluate,
    find_countermodel,
    interpretations,
    symbols_of,
    valid_up_to,
)


def two_element_model():
    return Interpretation(
        size=2,
        functions={"c": {(): 0}, "f": {(0,): 1, (1,): 0}},
        relations={"P": frozenset({(0,)})},
    )


def test_evaluate_in_a_fixed_model(formula):
    m = two_element_model()
    assert evaluate(formula("P(c)"), m)
    assert not evaluate(formula("P(f(c))"), m)
    assert evaluate(formula("exists x. ~P(x)"), m)
    assert not evaluate(formula("forall x. P(x)"), m)
    assert evaluate(formula("forall x. (P(x) \\/ P(f(x)))"), m)


def test_evaluate_uses_environment(formula):
    m = two_element_model().bind("y", 1)
    assert evaluate(formula("~P(y)"), m)
    with pytest.raises(UnboundVariableError) as err:
        evaluate(formula("P(z)"), m)
    assert err.value.code == "unbound-free-variable"


def test_drinker_valid_up_to_two(formula):
    assert valid_up_to(formula("exists x. (~P(x) \\/ forall y. P(y))"), 2)


def test_existential_not_valid(formula):
    assert not valid_up_to(formula("exists x. P(x)"), 1)
    m = find_countermodel(formula("exists x. P(x)"), 1)
    assert m is not None and m.size == 1 and m.relations["P"] == frozenset()


def test_open_formula_rejected(formula):
    with pytest.raises(OpenFormulaError) as err:
        valid_up_to(formula("P(x)"), 2)
    assert err.value.code == "nonempty-free-variable-set"


def test_interpretation_count(formula):
    functions, relations = symbols_of(formula("P(f(c))"))
    assert functions == {"c": 0, "f": 1}
    assert relations == {"P": 1}
    # c: 2 choices, f: 2^2, P: 2^2
    assert sum(1 for _ in interpretations(functions, relations, 2)) == 2 * 4 * 4


def test_refutation_is_monotone():
    rng = random.Random(29)
    for _ in range(60):
        f = random_formula(rng, 3)
        if not valid_up_to(f, 1):
            assert not valid_up_to(f, 2)


def test_ground_formulas_agree_with_truth_tables():
    rng = random.Random(31)
    for _ in range(100):
        f = random_formula(rng, 3, [], quantifiers=False)
        if is_tautology(f):
            assert valid_up_to(f, 2)
        if set(symbols_of(f)[0]) <= {"c"}:
            # one ground term per relation, so ground atoms stay independent
            assert valid_up_to(f, 1) == is_tautology(f)


def test_universal_closure_is_closed(formula):
    f = universal_closure(formula("R(x, y) \\/ ~R(x, y)"))
    assert not free_variables(f)
    assert valid_up_to(f, 2)
