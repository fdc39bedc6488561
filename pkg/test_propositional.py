"""Truth-table tautology checking."""

import itertools
import random

import pytest

from conftest import random_formula
from fol_core import And, Atom, NegAtom, Or, negate, reassociate
from propositional import (
    MAX_ATOMS,
    QuantifierInMatrixError,
    TooManyAtomsError,
    atom_keys,
    falsifying_assignment,
    is_tautology,
)


def brute_force_tautology(f):
    """Independent evaluator: plain recursion over every assignment of the atoms."""
    atoms = sorted({(lit.relation, lit.args) for lit in _literals(f)}, key=repr)

    def value(g, env):
        if isinstance(g, Atom):
            return env[(g.relation, g.args)]
        if isinstance(g, NegAtom):
            return not env[(g.relation, g.args)]
        if isinstance(g, And):
            return value(g.left, env) and value(g.right, env)
        return value(g.left, env) or value(g.right, env)

    return all(value(f, dict(zip(atoms, bits))) for bits in itertools.product((False, True), repeat=len(atoms)))


def _literals(f):
    if isinstance(f, (Atom, NegAtom)):
        return [f]
    return _literals(f.left) + _literals(f.right)


@pytest.mark.parametrize(
    "text, expected",
    [
        ("P(c) \\/ ~P(c)", True),
        ("P(c) \\/ P(d)", False),
        ("(~p \\/ ~q) \\/ ((p \\/ p) /\\ (q \\/ q))", True),
        ("p /\\ ~p", False),
        ("(p \\/ q) \\/ (~p /\\ ~q)", True),
    ],
)
def test_is_tautology_examples(formula, text, expected):
    assert is_tautology(formula(text)) is expected


def test_falsifying_assignment_falsifies(formula):
    f = formula("P(c) \\/ ~Q(c)")
    assignment = falsifying_assignment(f)
    assert assignment == {("P", formula("P(c)").args): False, ("Q", formula("Q(c)").args): True}


def test_atoms_in_first_occurrence_order(formula):
    f = formula("Q(c) \\/ (P(c) /\\ ~Q(c))")
    assert [name for name, _ in atom_keys(f)] == ["Q", "P"]


def test_quantifier_rejected(formula):
    with pytest.raises(QuantifierInMatrixError) as err:
        is_tautology(formula("forall x. P(x)"))
    assert err.value.code == "formula-contains-quantifier"


def test_too_many_atoms():
    f = Atom("p", ())
    for i in range(MAX_ATOMS + 1):
        f = Or(f, Atom(f"a{i}", ()))
    with pytest.raises(TooManyAtomsError) as err:
        is_tautology(f)
    assert err.value.code == "too-many-atoms"


def test_excluded_middle_of_random_formulas():
    rng = random.Random(17)
    for _ in range(200):
        f = random_formula(rng, 4, ["x"], quantifiers=False)
        assert is_tautology(Or(f, negate(f)))


def test_associativity_invariance():
    rng = random.Random(19)
    for _ in range(300):
        f = random_formula(rng, 5, [], quantifiers=False)
        assert is_tautology(f) == is_tautology(reassociate(f))


@pytest.mark.slow
def test_agrees_with_brute_force_evaluator():
    rng = random.Random(23)
    checked = 0
    while checked < 1000:
        f = random_formula(rng, 5, [], quantifiers=False)
        if len(atom_keys(f)) > 4:
            continue
        checked += 1
        assert is_tautology(f) == brute_force_tautology(f), f
