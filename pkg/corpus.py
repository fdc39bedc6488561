"""
Built-in sequents: the demo sequents and a corpus of valid sequents used for
end-to-end checks.
"""

from __future__ import annotations

from typing import List, Tuple

from fol_core import Quantifier, Sequent, Signature, Var, prenexify
from herbrand import HerbrandProof
from syntax import parse_document, parse_formula, parse_term

DECLARATIONS = """\
rel P/1
rel Q/1
rel R/2
rel A/1
rel B/1
rel p/0
rel q/0
rel r/0
fun c/0
fun d/0
fun f/1
"""

# Proved with contraction of a conjunction; no proof contracts only
# quantifier-free and existential formulas.
BUSS = (
    "|- (forall x. A(x)) /\\ (forall x. B(x)), "
    "((exists x. ~A(x)) \\/ (exists x. ~B(x))) /\\ ((exists x. ~A(x)) \\/ (exists x. ~B(x)))"
)

DRINKER = "|- exists x. (~P(x) \\/ forall y. P(y))"

INVALID = "|- P(c)"

VALID_CORPUS: List[Tuple[str, str]] = [
    ("axiom", "|- P(c), ~P(c)"),
    ("excluded-middle", "|- p \\/ ~p"),
    ("drinker", DRINKER),
    ("prenex-drinker", "|- exists x. forall y. (~P(x) \\/ P(y))"),
    ("dual-drinker", "|- exists x. forall y. (~P(y) \\/ P(x))"),
    ("forall-or-exists-not", "|- forall x. P(x), exists x. ~P(x)"),
    ("forall-or-exists-not-single", "|- (forall x. P(x)) \\/ (exists x. ~P(x))"),
    ("buss", BUSS),
    ("successor-witness", "|- exists x. (~P(x) \\/ P(f(x)))"),
    ("forall-exists", "|- forall x. exists y. (~P(x) \\/ P(y))"),
    ("relation-reflexive", "|- exists x. forall y. (~R(x, y) \\/ R(x, y))"),
    ("function-instance", "|- exists x. ~P(x), forall x. P(f(x))"),
    ("symmetric-instance", "|- exists x. exists y. (~R(x, y) \\/ R(y, x))"),
    ("universal-tautology", "|- forall x. forall y. (R(x, y) \\/ ~R(x, y))"),
    ("weaken-existential", "|- P(c), ~P(c), exists x. Q(x)"),
    ("weaken-forall-exists", "|- p, ~p, forall x. exists y. R(x, y)"),
    ("weaken-nested", "|- Q(c), ~Q(c), forall x. (P(x) /\\ exists y. R(x, y))"),
    ("split-conjunction", "|- P(c) /\\ Q(c), ~P(c), ~Q(c)"),
    ("literal-contraction", "|- P(c) /\\ P(c), ~P(c)"),
    ("existential-two-constants", "|- (exists x. ~P(x)) \\/ (P(c) /\\ P(d))"),
    ("existential-over-conjunction", "|- exists x. (~P(x) \\/ ~Q(x)), P(c) /\\ Q(c)"),
    ("three-existentials", "|- (exists x. (~P(x) /\\ ~Q(x))) \\/ (exists x. P(x)) \\/ (exists x. Q(x))"),
    ("universal-conjunction", "|- forall x. (P(x) /\\ Q(x)), (exists x. ~P(x)) \\/ (exists x. ~Q(x))"),
    ("propositional-buss", "|- p /\\ q, (~p \\/ ~q) /\\ (~p \\/ ~q)"),
    ("conjunction-literals", "|- ~A(c), ~B(c), A(c) /\\ B(c)"),
]


def signature() -> Signature:
    return parse_document(DECLARATIONS + "|-").signature


def load(body: str) -> Tuple[Signature, Sequent]:
    doc = parse_document(DECLARATIONS + body)
    return doc.signature, doc.sequent


def buss() -> Tuple[Signature, Sequent]:
    return load(BUSS)


def drinker() -> Tuple[Signature, Sequent]:
    return load(DRINKER)


def corpus() -> List[Tuple[str, Signature, Sequent]]:
    return [(name, *load(body)) for name, body in VALID_CORPUS]


def drinker_certificate() -> HerbrandProof:
    """Two copies of the drinker formula, witnessed by c and then by the first y."""
    sig = signature()
    copy = "exists {x}. (~P({x}) \\/ forall {y}. P({y}))"
    expansion = (
        parse_formula(f"({copy.format(x='x1', y='y1')}) \\/ ({copy.format(x='x2', y='y2')})", sig),
    )
    prefix = (
        (Quantifier.EXISTS, "x1"),
        (Quantifier.FORALL, "y1"),
        (Quantifier.EXISTS, "x2"),
        (Quantifier.FORALL, "y2"),
    )
    return HerbrandProof(expansion, prenexify(expansion, prefix), (parse_term("c", sig), Var("y1")))
