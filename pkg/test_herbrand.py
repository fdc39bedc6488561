"""Herbrand certificate checking."""

import random

import pytest

import corpus
from conftest import random_formula
from fol_core import (
    And,
    App,
    Exists,
    Forall,
    Or,
    PrenexFormula,
    Quantifier,
    Var,
    big_or,
    formula_size,
    prenexify,
    universal_closure,
)
from herbrand import HerbrandProof, check_herbrand, check_witnessing, is_strong_expansion, witnessed_matrix
from semantics_oracle import valid_up_to

E, A = Quantifier.EXISTS, Quantifier.FORALL


@pytest.fixture
def drinker():
    return corpus.drinker()[1]


@pytest.fixture
def drinker_prenex():
    return corpus.drinker_certificate().prenex


# ---------------------------------------------------------------------------
# witnessing conditions
# ---------------------------------------------------------------------------

def test_two_copy_drinker_accepted(drinker):
    assert check_herbrand(drinker, corpus.drinker_certificate()).ok


def test_witnessing_accepts_c_then_y1(drinker_prenex):
    assert check_witnessing(drinker_prenex, (App("c"), Var("y1")), ()).ok


def test_witnessing_rejects_constant_witnesses(drinker_prenex):
    verdict = check_witnessing(drinker_prenex, (App("c"), App("c")), ())
    assert verdict.code == "matrix-not-tautology"
    assert verdict.assignment is not None
    assert set(verdict.assignment) == {"P(c)", "P(y1)", "P(y2)"}


def test_witnessing_rejects_later_universal(drinker_prenex):
    verdict = check_witnessing(drinker_prenex, (Var("y2"), App("c")), ())
    assert verdict.code == "variable-condition-violated"
    assert verdict.witness == 1
    assert verdict.variable == "y2"


def test_witnessing_rejects_existential_variable(drinker_prenex):
    verdict = check_witnessing(drinker_prenex, (App("c"), Var("x1")), ())
    assert verdict.code == "variable-condition-violated"
    assert verdict.witness == 2


def test_witnessing_allows_ambient_free_variables(formula):
    p = PrenexFormula(((E, "x"),), formula("~P(x) \\/ P(z)"))
    assert not check_witnessing(p, (Var("z"),), ()).ok
    assert check_witnessing(p, (Var("z"),), {"z"}).ok


def test_witness_count_must_match(drinker_prenex):
    assert check_witnessing(drinker_prenex, (App("c"),), ()).code == "witness-arity-mismatch"


def test_witnessed_matrix(formula):
    h = corpus.drinker_certificate()
    assert witnessed_matrix(h) == formula("(~P(c) \\/ P(y1)) \\/ (~P(y1) \\/ P(y2))")


# ---------------------------------------------------------------------------
# strong expansions
# ---------------------------------------------------------------------------

def test_duplicating_a_conjunction_is_not_an_expansion(formula):
    f = formula("P(c) /\\ Q(c)")
    assert not is_strong_expansion(f, Or(f, f))


def test_existential_copies_may_be_renamed(formula):
    f = formula("exists x. forall y. R(x, y)")
    assert is_strong_expansion(f, formula("(exists x1. forall y1. R(x1, y1)) \\/ (exists x2. forall y2. R(x2, y2))"))
    assert not is_strong_expansion(f, formula("(exists x1. forall y1. R(x1, y1)) \\/ (exists x2. forall y2. R(y2, x2))"))


def test_nested_existential_copies(formula):
    f = formula("forall x. exists y. R(x, y)")
    g = formula("forall x. ((exists y. R(x, y)) \\/ ((exists y1. R(x, y1)) \\/ (exists y2. R(x, y2))))")
    assert is_strong_expansion(f, g)


def _positions(f):
    """Every subformula occurrence with a function rebuilding f around a replacement."""
    yield f, lambda g: g
    if isinstance(f, (And, Or)):
        for sub, rebuild in _positions(f.left):
            yield sub, (lambda r, rebuild=rebuild: type(f)(rebuild(r), f.right))
        for sub, rebuild in _positions(f.right):
            yield sub, (lambda r, rebuild=rebuild: type(f)(f.left, rebuild(r)))
    elif isinstance(f, (Forall, Exists)):
        for sub, rebuild in _positions(f.body):
            yield sub, (lambda r, rebuild=rebuild: type(f)(f.var, rebuild(r)))


def _duplications(f, existential_only):
    for sub, rebuild in _positions(f):
        if not existential_only or isinstance(sub, Exists):
            yield rebuild(Or(sub, sub))


def _closure(f, existential_only, size_limit, max_steps=None):
    seen, frontier, steps = {f}, [f], 0
    while frontier and (max_steps is None or steps < max_steps):
        steps += 1
        nxt = []
        for g in frontier:
            for h in _duplications(g, existential_only):
                if h not in seen and formula_size(h) <= size_limit:
                    seen.add(h)
                    nxt.append(h)
        frontier = nxt
    return seen


@pytest.mark.slow
def test_expansion_matches_duplication_closure():
    rng = random.Random(37)
    checked = 0
    while checked < 60:
        f = random_formula(rng, 3)
        if formula_size(f) > 6:
            continue
        checked += 1
        limit = formula_size(f) + 8
        expansions = _closure(f, True, limit)
        candidates = _closure(f, False, limit, max_steps=3)
        for g in candidates:
            assert is_strong_expansion(f, g) == (g in expansions), (f, g)


@pytest.mark.slow
def test_expansion_preserves_small_model_validity():
    rng = random.Random(41)
    checked = 0
    while checked < 30:
        f = random_formula(rng, 3)
        dups = [g for g in _closure(f, True, formula_size(f) + 6, max_steps=2) if g != f]
        if not dups:
            continue
        checked += 1
        g = rng.choice(dups)
        assert valid_up_to(f, 2) == valid_up_to(g, 2)


# ---------------------------------------------------------------------------
# check_herbrand
# ---------------------------------------------------------------------------

def test_member_count_mismatch(drinker):
    h = corpus.drinker_certificate()
    assert check_herbrand(drinker + drinker, h).code == "not-an-expansion"


def test_non_expansion_member_reported(sequent):
    s = sequent("|- P(c) /\\ Q(c), ~P(c)")
    e = (Or(s[0], s[0]), s[1])
    h = HerbrandProof(e, prenexify(e, ()), ())
    verdict = check_herbrand(s, h)
    assert verdict.code == "not-an-expansion"
    assert verdict.member == 0


def test_wrong_matrix_is_not_a_prenexification(drinker, formula):
    h = corpus.drinker_certificate()
    bad = HerbrandProof(h.expansion, PrenexFormula(h.prefix, formula("(~P(x1) \\/ P(y1)) \\/ P(y2)")), h.witness)
    assert check_herbrand(drinker, bad).code == "not-a-prenexification"


def test_nesting_violating_prefix_is_not_a_prenexification(drinker):
    h = corpus.drinker_certificate()
    prefix = ((A, "y1"), (E, "x1"), (E, "x2"), (A, "y2"))
    bad = HerbrandProof(h.expansion, PrenexFormula(prefix, h.matrix), h.witness)
    assert check_herbrand(drinker, bad).code == "not-a-prenexification"


def test_non_alpha_normal_expansion_rejected(sequent, formula):
    s = sequent("|- exists x. (~P(x) \\/ forall y. P(y))")
    e = (formula("(exists x. (~P(x) \\/ forall y. P(y))) \\/ (exists x. (~P(x) \\/ forall y. P(y)))"),)
    prefix = ((E, "x"), (A, "y"), (E, "x"), (A, "y"))
    matrix = formula("(~P(x) \\/ P(y)) \\/ (~P(x) \\/ P(y))")
    h = HerbrandProof(e, PrenexFormula(prefix, matrix), (App("c"), Var("y")))
    assert check_herbrand(s, h).code == "not-a-prenexification"


def test_free_variables_of_the_sequent_may_appear_in_witnesses(sequent):
    s = sequent("|- exists x. ~P(x), P(z)")
    h = HerbrandProof(s, prenexify(s, ((E, "x"),)), (Var("z"),))
    assert check_herbrand(s, h).ok


def test_accepted_certificates_are_valid_in_small_models():
    for name, s, h in [("drinker", corpus.drinker()[1], corpus.drinker_certificate())]:
        assert check_herbrand(s, h).ok, name
        assert valid_up_to(universal_closure(big_or(s)), 2)


def test_earlier_universal_as_witness(sequent, formula):
    s = sequent("|- forall x. (P(x) \\/ Q(x)), exists x. ~P(x)")
    e = (s[0], formula("exists x1. ~P(x1)"))
    h = HerbrandProof(e, prenexify(e, ((A, "x"), (E, "x1"))), (Var("x"),))
    assert check_herbrand(s, h).ok
    swapped = HerbrandProof(e, prenexify(e, ((E, "x1"), (A, "x"))), (Var("x"),))
    assert check_herbrand(s, swapped).code == "variable-condition-violated"
