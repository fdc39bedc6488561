"""
Herbrand proofs: strong disjunctive expansions, prenexifications and
witnessing substitutions, with a checker that names the first violated
condition.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import FrozenSet, Iterable, Set, Tuple

from fol_core import (
    And,
    Exists,
    Formula,
    Or,
    QUANTIFIED,
    PrenexFormula,
    Quantifier,
    Sequent,
    Term,
    is_prenexification_of,
    is_quantifier_free,
    sequent_bound_variables,
    sequent_free_variables,
    substitute_many,
    terms_alpha_eq,
    term_variables,
)
from propositional import PropositionalError, atom_label, falsifying_assignment
from verdict import Verdict

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class HerbrandProof:
    """Certificate for a sequent: an expansion, a prenexification of it and witnesses."""

    expansion: Sequent
    prenex: PrenexFormula
    witness: Tuple[Term, ...]

    @property
    def prefix(self):
        return self.prenex.prefix

    @property
    def matrix(self) -> Formula:
        return self.prenex.matrix

    def free_names(self) -> FrozenSet[str]:
        out: Set[str] = set(sequent_free_variables(self.expansion))
        for t in self.witness:
            out |= term_variables(t)
        return frozenset(out - {v for _, v in self.prefix})

    def bound_names(self) -> FrozenSet[str]:
        return frozenset(sequent_bound_variables(self.expansion)) | {v for _, v in self.prefix}

    def names(self) -> FrozenSet[str]:
        """Every variable name the certificate mentions."""
        out: Set[str] = set(self.bound_names()) | sequent_free_variables(self.expansion)
        for t in self.witness:
            out |= term_variables(t)
        return frozenset(out)


def is_strong_expansion(original: Formula, candidate: Formula) -> bool:
    """True iff `candidate` arises from `original` by duplicating existential subformulas, up to renaming."""
    return _expands(original, candidate, {}, {}, 0)


def _expands(orig: Formula, cand: Formula, env_o: dict, env_c: dict, depth: int) -> bool:
    if isinstance(orig, Exists) and isinstance(cand, Or):
        return _expands(orig, cand.left, env_o, env_c, depth) and _expands(orig, cand.right, env_o, env_c, depth)
    if type(orig) is not type(cand):
        return False
    if isinstance(orig, (And, Or)):
        return _expands(orig.left, cand.left, env_o, env_c, depth) and _expands(
            orig.right, cand.right, env_o, env_c, depth
        )
    if isinstance(orig, QUANTIFIED):
        return _expands(orig.body, cand.body, {**env_o, orig.var: depth}, {**env_c, cand.var: depth}, depth + 1)
    return (
        orig.relation == cand.relation
        and len(orig.args) == len(cand.args)
        and all(terms_alpha_eq(a, b, env_o, env_c) for a, b in zip(orig.args, cand.args))
    )


def check_witnessing(p: PrenexFormula, witness: Tuple[Term, ...], ambient_free: Iterable[str]) -> Verdict:
    """Check the variable condition for each witness, then that the substituted matrix is a tautology."""
    ambient = frozenset(ambient_free)
    existentials = p.existentials()
    if len(witness) != len(existentials):
        return Verdict.reject(
            "witness-arity-mismatch", f"{len(existentials)} existential quantifiers but {len(witness)} witnesses"
        )
    position = {v: k for k, (_, v) in enumerate(p.prefix)}
    for i, ((pos, y), t) in enumerate(zip(existentials, witness), start=1):
        for v in sorted(term_variables(t)):
            k = position.get(v)
            if k is None:
                if v in ambient:
                    continue
                reason = f"{v} is neither quantified in the prefix nor free in the sequent"
            elif p.prefix[k][0] is Quantifier.EXISTS:
                reason = f"{v} is existentially quantified"
            elif k > pos:
                reason = f"{v} is quantified after {y}"
            else:
                continue
            return Verdict.reject(
                "variable-condition-violated", f"witness {i} ({t}) for {y}: {reason}", witness=i, variable=v
            )
    if not is_quantifier_free(p.matrix):
        return Verdict.reject("formula-contains-quantifier", "the matrix contains quantifiers")
    instance = substitute_many(p.matrix, {y: t for (_, y), t in zip(existentials, witness)})
    try:
        falsifier = falsifying_assignment(instance)
    except PropositionalError as exc:
        return Verdict.reject(exc.code, str(exc))
    if falsifier is not None:
        assignment = {atom_label(key): value for key, value in falsifier.items()}
        logger.debug("witnessed matrix falsified by %s", assignment)
        return Verdict.reject(
            "matrix-not-tautology", f"{instance} is falsifiable", assignment=assignment
        )
    return Verdict.accept()


def check_herbrand(s: Sequent, h: HerbrandProof) -> Verdict:
    """Accept iff `h` is a Herbrand proof of `s`."""
    if len(h.expansion) != len(s):
        return Verdict.reject(
            "not-an-expansion", f"sequent has {len(s)} members, expansion has {len(h.expansion)}"
        )
    for i, (original, candidate) in enumerate(zip(s, h.expansion)):
        if not is_strong_expansion(original, candidate):
            return Verdict.reject("not-an-expansion", f"member {i} is not a strong expansion", member=i)
    if not is_prenexification_of(h.expansion, h.prenex):
        return Verdict.reject(
            "not-a-prenexification", "prefix and matrix are not a prenexification of the alpha-normal expansion"
        )
    return check_witnessing(h.prenex, h.witness, sequent_free_variables(s))


def witnessed_matrix(h: HerbrandProof) -> Formula:
    """The matrix with each existential variable replaced by its witness."""
    existentials = h.prenex.existentials()
    return substitute_many(h.matrix, {y: t for (_, y), t in zip(existentials, h.witness)})

