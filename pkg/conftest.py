"""Shared pytest fixtures and random formula generators."""

import random
from pathlib import Path
from typing import List

import pytest

import corpus
from fol_core import And, App, Atom, Exists, Forall, Formula, NegAtom, Or, Var
from syntax import parse_formula, parse_sequent, parse_term

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture
def sig():
    return corpus.signature()


@pytest.fixture
def formula(sig):
    return lambda text: parse_formula(text, sig)


@pytest.fixture
def sequent(sig):
    return lambda text: parse_sequent(text, sig)


@pytest.fixture
def term(sig):
    return lambda text: parse_term(text, sig)


@pytest.fixture
def fixtures_dir():
    return FIXTURES


def random_literal(rng: random.Random, names: List[str]) -> Formula:
    kind = rng.choice(["P", "Q", "R", "p"])
    if kind == "p":
        atom = Atom(rng.choice(["p", "q", "r"]))
    elif kind == "R":
        atom = Atom("R", (_random_term(rng, names), _random_term(rng, names)))
    else:
        atom = Atom(kind, (_random_term(rng, names),))
    return atom if rng.random() < 0.5 else NegAtom(atom.relation, atom.args)


def _random_term(rng: random.Random, names: List[str]):
    roll = rng.random()
    if names and roll < 0.6:
        return Var(rng.choice(names))
    if roll < 0.8:
        return App(rng.choice(["c", "d"]))
    return App("f", (App("c"),))


def random_formula(rng: random.Random, depth: int, names: List[str] = None, quantifiers: bool = True) -> Formula:
    """Random NNF formula; bound names are drawn from a small pool so clashes happen."""
    names = list(names or [])
    if depth <= 0 or rng.random() < 0.25:
        return random_literal(rng, names)
    choices = ["and", "or"] + (["forall", "exists"] if quantifiers else [])
    kind = rng.choice(choices)
    if kind in ("and", "or"):
        left = random_formula(rng, depth - 1, names, quantifiers)
        right = random_formula(rng, depth - 1, names, quantifiers)
        return And(left, right) if kind == "and" else Or(left, right)
    var = rng.choice(["x", "y", "z"])
    body = random_formula(rng, depth - 1, names + [var], quantifiers)
    return Forall(var, body) if kind == "forall" else Exists(var, body)
