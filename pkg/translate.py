"""
Structural translation of GS proofs into Herbrand proofs.

Each GS rule has an admissibility transformer turning certificates of the
premises into a certificate of the conclusion. Contraction is handled by
deep contraction, which merges two copies of a formula inside an expansion
by recursion on the formula's shape. Every transformer rebuilds the matrix
from the new expansion and prefix, so the three parts never drift apart.
"""

from __future__ import annotations

import logging
from typing import Callable, Dict, FrozenSet, Iterable, List, Mapping, Optional, Sequence, Set, Tuple

from fol_core import (
    And,
    App,
    Exists,
    Forall,
    Formula,
    LITERALS,
    Or,
    Path,
    PathError,
    Quantifier,
    QuantifierPrefix,
    Sequent,
    Signature,
    Step,
    Term,
    Var,
    alpha_eq,
    alpha_normalize,
    binder_order,
    fresh_name,
    literals,
    prenexify,
    rename_variables,
    replace_at,
    sequent_bound_variables,
    sequent_free_variables,
    subformula_at,
    substitute,
    substitute_term_many,
    subterms,
    term_variables,
)
from gs_calculus import GSProof, Rule, proof_free_names
from herbrand import HerbrandProof

logger = logging.getLogger(__name__)


class TranslationError(Exception):
    code = "translation-error"


class AbstractionError(TranslationError):
    code = "abstraction-mismatch"


class ShapeMismatchError(TranslationError):
    code = "shape-mismatch"


class PathMismatchError(TranslationError):
    code = "path-mismatch"


def _rebuild(expansion: Sequent, prefix: QuantifierPrefix, witness: Tuple[Term, ...]) -> HerbrandProof:
    return HerbrandProof(tuple(expansion), prenexify(expansion, prefix), tuple(witness))


# ---------------------------------------------------------------------------
# Propositional and structural rules
# ---------------------------------------------------------------------------

def certify_axiom(s: Sequent) -> HerbrandProof:
    """Certificate of a quantifier-free sequent: itself, empty prefix, no witnesses."""
    return _rebuild(tuple(s), (), ())


def admit_or(h: HerbrandProof) -> HerbrandProof:
    """Join the last two expansion members into one disjunction."""
    e = h.expansion
    if len(e) < 2:
        raise ShapeMismatchError("OrR needs at least two expansion members")
    return _rebuild(e[:-2] + (Or(e[-2], e[-1]),), h.prefix, h.witness)


def admit_exchange(h: HerbrandProof, permutation: Sequence[int]) -> HerbrandProof:
    """Reorder the expansion so that member i is premise member permutation[i]."""
    return _rebuild(tuple(h.expansion[k] for k in permutation), h.prefix, h.witness)


def admit_weaken(h: HerbrandProof, a: Formula, constant: Term, reserved: Iterable[str] = ()) -> HerbrandProof:
    """Append `a` renamed apart, its quantifiers in front, each new existential witnessed by `constant`."""
    fresh = alpha_normalize(a, set(reserved) | h.names())
    added = binder_order((fresh,))
    witness = tuple(constant for q, _ in added if q is Quantifier.EXISTS) + h.witness
    return _rebuild(h.expansion + (fresh,), added + h.prefix, witness)


def _rename_certificate(h: HerbrandProof, mapping: Mapping[str, str]) -> HerbrandProof:
    if not mapping:
        return h
    terms = {old: Var(new) for old, new in mapping.items()}
    expansion = tuple(rename_variables(f, mapping) for f in h.expansion)
    prefix = tuple((q, mapping.get(v, v)) for q, v in h.prefix)
    witness = tuple(substitute_term_many(t, terms) for t in h.witness)
    return _rebuild(expansion, prefix, witness)


def _rename_apart(h: HerbrandProof, clash: Iterable[str], avoid: Iterable[str]) -> HerbrandProof:
    taken = set(avoid) | h.names()
    mapping: Dict[str, str] = {}
    for v in sorted(clash):
        new = fresh_name(v, taken)
        taken.add(new)
        mapping[v] = new
    return _rename_certificate(h, mapping)


def admit_and(h1: HerbrandProof, h2: HerbrandProof, reserved: Iterable[str] = ()) -> HerbrandProof:
    """Certificate of Γ, Δ, A∧B from certificates of Γ, A and Δ, B."""
    if not h1.expansion or not h2.expansion:
        raise ShapeMismatchError("AndR premises must be non-empty")
    reserved = set(reserved)
    h1 = _rename_apart(h1, h1.bound_names() & h2.free_names(), h2.names() | reserved)
    h2 = _rename_apart(h2, h2.bound_names() & h1.names(), h1.names() | reserved)
    e1, e2 = h1.expansion, h2.expansion
    expansion = e1[:-1] + e2[:-1] + (And(e1[-1], e2[-1]),)
    return _rebuild(expansion, h1.prefix + h2.prefix, h1.witness + h2.witness)


# ---------------------------------------------------------------------------
# Quantifier rules
# ---------------------------------------------------------------------------

def _abstract_term(a: Term, b: Term, y: str, t: Term, new: Var, env_a: dict, env_b: dict) -> Term:
    if isinstance(a, Var):
        if a.name in env_a:
            if isinstance(b, Var) and env_b.get(b.name) == env_a[a.name]:
                return b
            raise AbstractionError(f"bound variable {a.name} does not line up with {b}")
        if a.name == y:
            if b == t:
                return new
            raise AbstractionError(f"expected the witness {t} in place of {y}, found {b}")
        if b == a and a.name not in env_b:
            return b
        raise AbstractionError(f"expected {a}, found {b}")
    if isinstance(b, App) and b.symbol == a.symbol and len(b.args) == len(a.args):
        return App(b.symbol, tuple(_abstract_term(x, z, y, t, new, env_a, env_b) for x, z in zip(a.args, b.args)))
    raise AbstractionError(f"expected {a}, found {b}")


def _abstract(orig: Formula, cand: Formula, y: str, t: Term, new: Var, env_o: dict, env_c: dict, depth: int) -> Formula:
    """Walk `orig` (a body mentioning y) and its expanded instance `cand` in lockstep,
    putting `new` back wherever `orig` has y and `cand` has t."""
    if isinstance(orig, Exists) and isinstance(cand, Or):
        return Or(
            _abstract(orig, cand.left, y, t, new, env_o, env_c, depth),
            _abstract(orig, cand.right, y, t, new, env_o, env_c, depth),
        )
    if type(orig) is not type(cand):
        raise AbstractionError(f"{cand} is not an expansion of an instance of {orig}")
    if isinstance(orig, LITERALS):
        if orig.relation != cand.relation or len(orig.args) != len(cand.args):
            raise AbstractionError(f"{cand} is not an instance of {orig}")
        args = tuple(_abstract_term(a, b, y, t, new, env_o, env_c) for a, b in zip(orig.args, cand.args))
        return type(cand)(cand.relation, args)
    if isinstance(orig, (And, Or)):
        return type(cand)(
            _abstract(orig.left, cand.left, y, t, new, env_o, env_c, depth),
            _abstract(orig.right, cand.right, y, t, new, env_o, env_c, depth),
        )
    body = _abstract(orig.body, cand.body, y, t, new, {**env_o, orig.var: depth}, {**env_c, cand.var: depth}, depth + 1)
    return type(cand)(cand.var, body)


def admit_exists(
    h: HerbrandProof,
    original: Formula,
    t: Term,
    *,
    index: Optional[int] = None,
    ambient_free: Optional[Iterable[str]] = None,
    constant: Optional[Term] = None,
    reserved: Iterable[str] = (),
) -> HerbrandProof:
    """Certificate of Γ, ∃y.A from a certificate of Γ, A[y:=t].

    The premise member is re-abstracted over t, wrapped in a fresh ∃ that goes
    to the front of the prefix, and t becomes its witness. When `ambient_free`
    is given, witness variables that are neither in the prefix nor ambient are
    replaced by `constant`.
    """
    if not isinstance(original, Exists):
        raise AbstractionError(f"{original} is not existential")
    i = len(h.expansion) - 1 if index is None else index
    avoid = set(reserved) | h.names() | term_variables(t)
    y = original.var if original.var not in avoid else fresh_name(original.var, avoid)
    body = _abstract(original.body, h.expansion[i], original.var, t, Var(y), {}, {}, 0)
    expansion = h.expansion[:i] + (Exists(y, body),) + h.expansion[i + 1 :]
    prefix = ((Quantifier.EXISTS, y),) + h.prefix
    witness = (t,) + h.witness
    if ambient_free is not None:
        witness = _ground_strays(witness, prefix, frozenset(ambient_free), constant or App("c"))
    return _rebuild(expansion, prefix, witness)


def _ground_strays(witness: Tuple[Term, ...], prefix: QuantifierPrefix, ambient: FrozenSet[str], constant: Term) -> Tuple[Term, ...]:
    quantified = {v for _, v in prefix}
    stray: Set[str] = set()
    for t in witness:
        stray |= term_variables(t) - quantified - ambient
    if not stray:
        return witness
    logger.debug("grounding stray witness variables %s", ", ".join(sorted(stray)))
    mapping = {v: constant for v in stray}
    return tuple(substitute_term_many(t, mapping) for t in witness)


def admit_forall(h: HerbrandProof, z: str, index: Optional[int] = None) -> HerbrandProof:
    """Certificate of Γ, ∀x.A from a certificate of Γ, A[x:=z]: bind z and put ∀z in front."""
    i = len(h.expansion) - 1 if index is None else index
    others = h.expansion[:i] + h.expansion[i + 1 :]
    if z in sequent_free_variables(others) or z in sequent_bound_variables(h.expansion):
        raise TranslationError(f"eigenvariable {z} is not fresh for the certificate")
    expansion = h.expansion[:i] + (Forall(z, h.expansion[i]),) + h.expansion[i + 1 :]
    return _rebuild(expansion, ((Quantifier.FORALL, z),) + h.prefix, h.witness)


# ---------------------------------------------------------------------------
# Contraction
# ---------------------------------------------------------------------------

def medial_regroup(h: HerbrandProof) -> HerbrandProof:
    """Turn the last two members (A1∧B1), (A2∧B2) into (A1∨A2)∧(B1∨B2).

    The new matrix is the medial image of the old one, which it implies.
    """
    e = h.expansion
    if len(e) < 2 or not isinstance(e[-2], And) or not isinstance(e[-1], And):
        raise ShapeMismatchError("medial regrouping needs two conjunctions at the end of the expansion")
    merged = And(Or(e[-2].left, e[-1].left), Or(e[-2].right, e[-1].right))
    return _rebuild(e[:-2] + (merged,), h.prefix, h.witness)


def hole_images(base: Sequent, expansion: Sequent, path: Path) -> List[Path]:
    """Positions in `expansion` of the copies of the subformula `base` holds at `path`.

    Walks both in lockstep; wherever `base` has ∃ and `expansion` has ∨ the
    walk branches into both copies.
    """
    if len(base) != len(expansion) or not 0 <= path.member < len(base):
        raise PathMismatchError(f"position {path} does not fit a sequent of {len(expansion)} members")
    return _images(base[path.member], expansion[path.member], path.steps, Path(path.member))


def _images(orig: Formula, cand: Formula, steps: Tuple[Step, ...], at: Path) -> List[Path]:
    if not steps:
        return [at]
    if isinstance(orig, Exists) and isinstance(cand, Or):
        return _images(orig, cand.left, steps, at.child(Step.LEFT)) + _images(orig, cand.right, steps, at.child(Step.RIGHT))
    step = steps[0]
    if type(orig) is not type(cand):
        raise PathMismatchError(f"expansion does not follow {orig} at {at}")
    if step is Step.UNDER and isinstance(orig, (Forall, Exists)):
        return _images(orig.body, cand.body, steps[1:], at.child(step))
    if step in (Step.LEFT, Step.RIGHT) and isinstance(orig, (And, Or)):
        pick = (lambda f: f.left) if step is Step.LEFT else (lambda f: f.right)
        return _images(pick(orig), pick(cand), steps[1:], at.child(step))
    raise PathMismatchError(f"step {step.value} is not legal at {orig}")


def _rewrite_images(expansion: Sequent, images: List[Path], rewrite: Callable[[Formula], Formula]) -> Sequent:
    for p in images:
        expansion = replace_at(expansion, p, rewrite(subformula_at(expansion, p)))
    return expansion


def _pair(f: Formula, outer: type, inner: type) -> Tuple[Formula, Formula]:
    if not isinstance(f, outer) or not isinstance(f.left, inner) or not isinstance(f.right, inner):
        raise ShapeMismatchError(f"expected a {outer.__name__} of two {inner.__name__}s, found {f}")
    return f.left, f.right


def deep_contract(base: Sequent, h: HerbrandProof, path: Path) -> HerbrandProof:
    """Certificate of `base` with the A∨A at `path` replaced by A.

    `h` certifies `base`; the two copies of A may differ by renaming.
    """
    try:
        node = subformula_at(base, path)
    except PathError as exc:
        raise PathMismatchError(str(exc)) from exc
    if not isinstance(node, Or) or not alpha_eq(node.left, node.right):
        raise PathMismatchError(f"{node} at {path} is not a disjunction of two copies")
    a, b = node.left, node.right
    images = hole_images(base, h.expansion, path)
    logger.debug("deep contraction at %s over %d copies", path, len(images))

    if isinstance(a, LITERALS):
        expansion = _rewrite_images(h.expansion, images, lambda f: _literal_copy(f))
        return _rebuild(expansion, h.prefix, h.witness)

    if isinstance(a, Exists):
        return h

    if isinstance(a, Forall):
        return _contract_forall(base, h, path, images, a, b)

    outer = And if isinstance(a, And) else Or

    def regroup(f: Formula) -> Formula:
        first, second = _pair(f, Or, outer)
        return outer(Or(first.left, second.left), Or(first.right, second.right))

    expansion = _rewrite_images(h.expansion, images, regroup)
    regrouped = replace_at(base, path, outer(Or(a.left, b.left), Or(a.right, b.right)))
    h = _rebuild(expansion, h.prefix, h.witness)
    h = deep_contract(regrouped, h, path.child(Step.LEFT))
    merged = replace_at(regrouped, path.child(Step.LEFT), a.left)
    return deep_contract(merged, h, path.child(Step.RIGHT))


def _literal_copy(f: Formula) -> Formula:
    if not isinstance(f, Or) or not isinstance(f.left, LITERALS) or f.left != f.right:
        raise ShapeMismatchError(f"expected a disjunction of two identical literals, found {f}")
    return f.left


def _contract_forall(base: Sequent, h: HerbrandProof, path: Path, images: List[Path], a: Forall, b: Forall) -> HerbrandProof:
    position = {v: k for k, (_, v) in enumerate(h.prefix)}
    expansion = h.expansion
    renaming: Dict[str, Term] = {}
    dropped: Set[str] = set()
    for p in images:
        first, second = _pair(subformula_at(expansion, p), Or, Forall)
        x, y = first.var, second.var
        if x not in position or y not in position:
            raise ShapeMismatchError(f"universal copies {x}, {y} are missing from the prefix")
        z, w = (x, y) if position[x] < position[y] else (y, x)
        merged = Forall(z, substitute(Or(first.body, second.body), w, Var(z)))
        expansion = replace_at(expansion, p, merged)
        renaming[w] = Var(z)
        dropped.add(w)
    prefix = tuple((q, v) for q, v in h.prefix if v not in dropped)
    witness = tuple(substitute_term_many(t, renaming) for t in h.witness)
    h = _rebuild(expansion, prefix, witness)
    merged_base = replace_at(base, path, Forall(a.var, Or(a.body, substitute(b.body, b.var, Var(a.var)))))
    return deep_contract(merged_base, h, path.child(Step.UNDER))


def admit_contract(base: Sequent, h: HerbrandProof) -> HerbrandProof:
    """Certificate of Γ, A from a certificate `h` of `base` = Γ, A, A."""
    if len(base) < 2:
        raise ShapeMismatchError("ContractR premise needs two copies")
    fused = base[:-2] + (Or(base[-2], base[-1]),)
    return deep_contract(fused, admit_or(h), Path(len(fused) - 1))


# ---------------------------------------------------------------------------
# Whole proofs
# ---------------------------------------------------------------------------

def _first_constant(p: GSProof) -> Optional[Term]:
    for _, node in p.nodes():
        terms: List[Term] = [node.term] if node.term is not None else []
        for f in node.conclusion:
            for lit in literals(f):
                terms.extend(lit.args)
        for t in terms:
            for sub in subterms(t):
                if isinstance(sub, App) and not sub.args:
                    return sub
    return None


class _Translator:
    def __init__(self, constant: Term, reserved: FrozenSet[str]):
        self.constant = constant
        self.reserved = reserved

    def run(self, p: GSProof) -> HerbrandProof:
        premises = [self.run(child) for child in p.children]
        rule = p.rule
        logger.debug("translating %s with %d premise certificates", rule.value, len(premises))
        if rule is Rule.AX:
            return certify_axiom(p.conclusion)
        if rule is Rule.OR:
            return admit_or(premises[0])
        if rule is Rule.EXCHANGE:
            return admit_exchange(premises[0], p.permutation)
        if rule is Rule.AND:
            return admit_and(premises[0], premises[1], self.reserved)
        if rule is Rule.WEAKEN:
            return admit_weaken(premises[0], p.conclusion[-1], self.constant, self.reserved)
        if rule is Rule.CONTRACT:
            return admit_contract(p.children[0].conclusion, premises[0])
        if rule is Rule.DEEP_CONTRACT:
            return deep_contract(p.children[0].conclusion, premises[0], p.path)
        i = p.principal_index()
        if rule is Rule.EXISTS:
            return admit_exists(
                premises[0],
                p.conclusion[i],
                p.term,
                index=i,
                ambient_free=sequent_free_variables(p.conclusion),
                constant=self.constant,
                reserved=self.reserved,
            )
        if rule is Rule.FORALL:
            return admit_forall(premises[0], p.eigenvariable, index=i)
        raise TranslationError(f"no transformer for rule {rule}")


def translate(p: GSProof, signature: Optional[Signature] = None) -> HerbrandProof:
    """Herbrand proof of the conclusion of a GS proof accepted by `check_gs`."""
    if signature is not None:
        constant = signature.distinguished_constant
        reserved = proof_free_names(p) | signature.symbol_names()
    else:
        constant = _first_constant(p) or App("c")
        reserved = proof_free_names(p)
    h = _Translator(constant, frozenset(reserved)).run(p)
    logger.info(
        "certificate: %d existential witnesses, %d prefix quantifiers", len(h.witness), len(h.prefix)
    )
    return h
