"""
First-order syntax for the Herbrand toolkit.

Terms and negation-normal-form formulas over a declared signature, variable
bookkeeping, alpha-normalization, capture-avoiding substitution, subformula
positions and prenexification by quantifier-prefix order.

All values are immutable; every function here is pure.
"""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, FrozenSet, Iterable, Iterator, List, Mapping, Optional, Sequence, Set, Tuple, Union

logger = logging.getLogger(__name__)


class FolError(Exception):
    """Base class for errors raised by the first-order core."""

    code = "fol-error"

    def __init__(self, message: str, code: Optional[str] = None):
        super().__init__(message)
        if code is not None:
            self.code = code


class SignatureError(FolError):
    code = "invalid-signature"


class ArityError(FolError):
    code = "arity-mismatch"


class PrenexError(FolError):
    code = "not-a-prenexification"


class PathError(FolError):
    code = "path-does-not-resolve"


# ---------------------------------------------------------------------------
# Terms
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Var:
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class App:
    """Function application; a constant is an application with no arguments."""

    symbol: str
    args: Tuple["Term", ...] = ()

    def __str__(self) -> str:
        if not self.args:
            return self.symbol
        return f"{self.symbol}({', '.join(str(a) for a in self.args)})"


Term = Union[Var, App]


# ---------------------------------------------------------------------------
# Formulas (negation normal form is structural: negation only wraps atoms)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Atom:
    relation: str
    args: Tuple[Term, ...] = ()

    def __str__(self) -> str:
        if not self.args:
            return self.relation
        return f"{self.relation}({', '.join(str(a) for a in self.args)})"


@dataclass(frozen=True)
class NegAtom:
    relation: str
    args: Tuple[Term, ...] = ()

    def __str__(self) -> str:
        return "~" + str(Atom(self.relation, self.args))


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"

    def __str__(self) -> str:
        return format_formula(self)


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"

    def __str__(self) -> str:
        return format_formula(self)


@dataclass(frozen=True)
class Forall:
    var: str
    body: "Formula"

    def __str__(self) -> str:
        return format_formula(self)


@dataclass(frozen=True)
class Exists:
    var: str
    body: "Formula"

    def __str__(self) -> str:
        return format_formula(self)


Formula = Union[Atom, NegAtom, And, Or, Forall, Exists]
Sequent = Tuple[Formula, ...]

LITERALS = (Atom, NegAtom)
BINARIES = (And, Or)
QUANTIFIED = (Forall, Exists)


class Quantifier(str, Enum):
    FORALL = "forall"
    EXISTS = "exists"

    @classmethod
    def of(cls, f: Formula) -> "Quantifier":
        return cls.FORALL if isinstance(f, Forall) else cls.EXISTS

    def build(self, var: str, body: Formula) -> Formula:
        return Forall(var, body) if self is Quantifier.FORALL else Exists(var, body)


def format_formula(f: Formula, top: bool = True) -> str:
    """Print a formula in the concrete syntax accepted by the parser."""
    if isinstance(f, LITERALS):
        return str(f)
    if isinstance(f, QUANTIFIED):
        return f"{Quantifier.of(f).value} {f.var}. {format_formula(f.body, top=False)}"
    op = "/\\" if isinstance(f, And) else "\\/"
    left = format_formula(f.left, top=False)
    right = format_formula(f.right, top=False)
    if isinstance(f.left, QUANTIFIED):
        left = f"({left})"
    if isinstance(f.right, QUANTIFIED):
        right = f"({right})"
    text = f"{left} {op} {right}"
    return text if top else f"({text})"


def format_sequent(s: Sequent) -> str:
    return "|- " + ", ".join(format_formula(f) for f in s)


# ---------------------------------------------------------------------------
# Signature
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Signature:
    """Relation and function symbols with arities.

    Declaration order is kept; the first declared constant is the
    distinguished constant used for weakening and stray witness variables.
    """

    relations: Mapping[str, int] = field(default_factory=dict)
    functions: Mapping[str, int] = field(default_factory=dict)

    def __post_init__(self):
        for name, arity in list(self.relations.items()) + list(self.functions.items()):
            if arity < 0:
                raise SignatureError(f"symbol {name} has negative arity {arity}")
        clash = set(self.relations) & set(self.functions)
        if clash:
            raise SignatureError(f"symbols declared both as relation and function: {', '.join(sorted(clash))}")
        if not self.constants():
            raise SignatureError("signature must contain at least one constant symbol")

    @classmethod
    def from_declarations(cls, declarations: Iterable[Tuple[str, str, int]]) -> "Signature":
        """Build from (kind, name, arity) triples, kind being 'rel' or 'fun'."""
        relations: Dict[str, int] = {}
        functions: Dict[str, int] = {}
        for kind, name, arity in declarations:
            table = relations if kind == "rel" else functions
            if name in table:
                raise SignatureError(f"symbol {name} declared twice")
            table[name] = arity
        return cls(relations, functions)

    @classmethod
    def infer(cls, formulas: Iterable[Formula], default_constant: str = "c") -> "Signature":
        """Collect the symbols occurring in `formulas`, adding a constant if none occurs."""
        relations: Dict[str, int] = {}
        functions: Dict[str, int] = {}
        for f in formulas:
            for lit in literals(f):
                relations.setdefault(lit.relation, len(lit.args))
                for t in lit.args:
                    for sub in subterms(t):
                        if isinstance(sub, App):
                            functions.setdefault(sub.symbol, len(sub.args))
        if not any(arity == 0 for arity in functions.values()):
            functions[default_constant] = 0
        return cls(relations, functions)

    def constants(self) -> List[str]:
        return [name for name, arity in self.functions.items() if arity == 0]

    @property
    def distinguished_constant(self) -> App:
        names = self.constants()
        return App("c") if "c" in names else App(names[0])

    def symbol_names(self) -> FrozenSet[str]:
        return frozenset(self.relations) | frozenset(self.functions)

    def check_term(self, t: Term) -> None:
        if isinstance(t, Var):
            return
        if t.symbol not in self.functions:
            raise SignatureError(f"undeclared function symbol {t.symbol}", code="undeclared-symbol")
        if self.functions[t.symbol] != len(t.args):
            raise ArityError(f"{t.symbol} expects {self.functions[t.symbol]} arguments, got {len(t.args)}")
        for a in t.args:
            self.check_term(a)

    def check_formula(self, f: Formula) -> None:
        for lit in literals(f):
            if lit.relation not in self.relations:
                raise SignatureError(f"undeclared relation symbol {lit.relation}", code="undeclared-symbol")
            if self.relations[lit.relation] != len(lit.args):
                raise ArityError(
                    f"{lit.relation} expects {self.relations[lit.relation]} arguments, got {len(lit.args)}"
                )
            for t in lit.args:
                self.check_term(t)


# ---------------------------------------------------------------------------
# Traversal helpers
# ---------------------------------------------------------------------------

def subterms(t: Term) -> Iterator[Term]:
    yield t
    if isinstance(t, App):
        for a in t.args:
            yield from subterms(a)


def literals(f: Formula) -> Iterator[Union[Atom, NegAtom]]:
    if isinstance(f, LITERALS):
        yield f
    elif isinstance(f, BINARIES):
        yield from literals(f.left)
        yield from literals(f.right)
    else:
        yield from literals(f.body)


def is_quantifier_free(f: Formula) -> bool:
    if isinstance(f, LITERALS):
        return True
    if isinstance(f, BINARIES):
        return is_quantifier_free(f.left) and is_quantifier_free(f.right)
    return False


def term_depth(t: Term) -> int:
    if isinstance(t, Var) or not t.args:
        return 0
    return 1 + max(term_depth(a) for a in t.args)


def term_size(t: Term) -> int:
    if isinstance(t, Var):
        return 1
    return 1 + sum(term_size(a) for a in t.args)


def formula_size(f: Formula) -> int:
    if isinstance(f, LITERALS):
        return 1
    if isinstance(f, BINARIES):
        return 1 + formula_size(f.left) + formula_size(f.right)
    return 1 + formula_size(f.body)


def negate(f: Formula) -> Formula:
    """De Morgan dual; an involution on NNF formulas."""
    if isinstance(f, Atom):
        return NegAtom(f.relation, f.args)
    if isinstance(f, NegAtom):
        return Atom(f.relation, f.args)
    if isinstance(f, And):
        return Or(negate(f.left), negate(f.right))
    if isinstance(f, Or):
        return And(negate(f.left), negate(f.right))
    if isinstance(f, Forall):
        return Exists(f.var, negate(f.body))
    return Forall(f.var, negate(f.body))


def rank(f: Formula) -> int:
    """Depth as a tree: literals are 0, each connective or quantifier adds one."""
    if isinstance(f, LITERALS):
        return 0
    if isinstance(f, BINARIES):
        return 1 + max(rank(f.left), rank(f.right))
    return 1 + rank(f.body)


# ---------------------------------------------------------------------------
# Variables
# ---------------------------------------------------------------------------

def term_variables(t: Term) -> FrozenSet[str]:
    if isinstance(t, Var):
        return frozenset((t.name,))
    out: Set[str] = set()
    for a in t.args:
        out |= term_variables(a)
    return frozenset(out)


def variables(f: Formula) -> Tuple[FrozenSet[str], FrozenSet[str]]:
    """Return (free, bound) variable sets of `f`."""
    free: Set[str] = set()
    bound: Set[str] = set()
    _collect(f, frozenset(), free, bound)
    return frozenset(free), frozenset(bound)


def _collect(f: Formula, scope: FrozenSet[str], free: Set[str], bound: Set[str]) -> None:
    if isinstance(f, LITERALS):
        for t in f.args:
            free.update(term_variables(t) - scope)
    elif isinstance(f, BINARIES):
        _collect(f.left, scope, free, bound)
        _collect(f.right, scope, free, bound)
    else:
        bound.add(f.var)
        _collect(f.body, scope | {f.var}, free, bound)


def free_variables(f: Formula) -> FrozenSet[str]:
    return variables(f)[0]


def bound_variables(f: Formula) -> FrozenSet[str]:
    return variables(f)[1]


def sequent_free_variables(s: Sequent) -> FrozenSet[str]:
    out: Set[str] = set()
    for f in s:
        out |= free_variables(f)
    return frozenset(out)


def sequent_bound_variables(s: Sequent) -> FrozenSet[str]:
    out: Set[str] = set()
    for f in s:
        out |= bound_variables(f)
    return frozenset(out)


def binders(f: Formula) -> List[Tuple[Quantifier, str]]:
    """Quantifier occurrences in pre-order (a nesting-respecting order)."""
    if isinstance(f, LITERALS):
        return []
    if isinstance(f, BINARIES):
        return binders(f.left) + binders(f.right)
    return [(Quantifier.of(f), f.var)] + binders(f.body)


def binder_order(s: Sequent) -> Tuple[Tuple[Quantifier, str], ...]:
    out: List[Tuple[Quantifier, str]] = []
    for f in s:
        out.extend(binders(f))
    return tuple(out)


_SUFFIX = re.compile(r"^(.*?)(\d+)$")


def fresh_name(base: str, avoid: Iterable[str]) -> str:
    """First of root, root1, root2, ... not in `avoid`, root being `base` without trailing digits."""
    taken = avoid if isinstance(avoid, (set, frozenset)) else set(avoid)
    match = _SUFFIX.match(base)
    root = match.group(1) if match and match.group(1) else base
    if root not in taken:
        return root
    n = 1
    while f"{root}{n}" in taken:
        n += 1
    return f"{root}{n}"


def is_alpha_normal(f: Formula) -> bool:
    return is_alpha_normal_sequent((f,))


def is_alpha_normal_sequent(s: Sequent) -> bool:
    """Distinct binders across the whole sequent and no binder name occurring free."""
    names = [v for _, v in binder_order(s)]
    if len(names) != len(set(names)):
        return False
    return not (set(names) & sequent_free_variables(s))


def alpha_normalize(f: Formula, reserved: Iterable[str] = ()) -> Formula:
    return alpha_normalize_sequent((f,), reserved)[0]


def alpha_normalize_sequent(s: Sequent, reserved: Iterable[str] = ()) -> Sequent:
    """Rename binders so that each is distinct, not free anywhere and not reserved.

    A binder keeps its name when that name is still available.
    """
    used = set(reserved) | set(sequent_free_variables(s))
    return tuple(_normalize(f, {}, used) for f in s)


def _normalize(f: Formula, renaming: Dict[str, str], used: Set[str]) -> Formula:
    if isinstance(f, LITERALS):
        if not renaming:
            return f
        mapping = {old: Var(new) for old, new in renaming.items()}
        return type(f)(f.relation, tuple(substitute_term_many(t, mapping) for t in f.args))
    if isinstance(f, BINARIES):
        left = _normalize(f.left, renaming, used)
        return type(f)(left, _normalize(f.right, renaming, used))
    name = f.var if f.var not in used else fresh_name(f.var, used)
    used.add(name)
    inner = dict(renaming)
    if name != f.var or f.var in inner:
        inner[f.var] = name
    return type(f)(name, _normalize(f.body, inner, used))


def terms_alpha_eq(s: Term, t: Term, env_s: Mapping[str, int], env_t: Mapping[str, int]) -> bool:
    """Term equality where bound variables are compared by binding position."""
    if isinstance(s, Var) and isinstance(t, Var):
        ls, lt = env_s.get(s.name), env_t.get(t.name)
        if ls is None and lt is None:
            return s.name == t.name
        return ls == lt
    if isinstance(s, App) and isinstance(t, App):
        return (
            s.symbol == t.symbol
            and len(s.args) == len(t.args)
            and all(terms_alpha_eq(a, b, env_s, env_t) for a, b in zip(s.args, t.args))
        )
    return False


def alpha_eq(f: Formula, g: Formula) -> bool:
    return _alpha(f, g, {}, {}, 0)


def _alpha(f: Formula, g: Formula, env_f: Dict[str, int], env_g: Dict[str, int], depth: int) -> bool:
    if type(f) is not type(g):
        return False
    if isinstance(f, LITERALS):
        return (
            f.relation == g.relation
            and len(f.args) == len(g.args)
            and all(terms_alpha_eq(a, b, env_f, env_g) for a, b in zip(f.args, g.args))
        )
    if isinstance(f, BINARIES):
        return _alpha(f.left, g.left, env_f, env_g, depth) and _alpha(f.right, g.right, env_f, env_g, depth)
    return _alpha(f.body, g.body, {**env_f, f.var: depth}, {**env_g, g.var: depth}, depth + 1)


# ---------------------------------------------------------------------------
# Substitution
# ---------------------------------------------------------------------------

def substitute_term_many(t: Term, mapping: Mapping[str, Term]) -> Term:
    if isinstance(t, Var):
        return mapping.get(t.name, t)
    if not t.args:
        return t
    return App(t.symbol, tuple(substitute_term_many(a, mapping) for a in t.args))


def substitute_term(t: Term, x: str, s: Term) -> Term:
    return substitute_term_many(t, {x: s})


def substitute(f: Formula, x: str, t: Term) -> Formula:
    """Capture-avoiding replacement of the free occurrences of `x` by `t`."""
    return substitute_many(f, {x: t})


def substitute_many(f: Formula, mapping: Mapping[str, Term]) -> Formula:
    """Simultaneous capture-avoiding substitution."""
    mapping = {x: t for x, t in mapping.items() if t != Var(x)}
    if not mapping:
        return f
    return _subst(f, mapping)


def _subst(f: Formula, mapping: Mapping[str, Term]) -> Formula:
    if isinstance(f, LITERALS):
        return type(f)(f.relation, tuple(substitute_term_many(t, mapping) for t in f.args))
    if isinstance(f, BINARIES):
        return type(f)(_subst(f.left, mapping), _subst(f.right, mapping))
    body_free = free_variables(f.body)
    inner = {x: t for x, t in mapping.items() if x != f.var and x in body_free}
    if not inner:
        return f
    incoming: Set[str] = set()
    for t in inner.values():
        incoming |= term_variables(t)
    if f.var not in incoming:
        return type(f)(f.var, _subst(f.body, inner))
    avoid = incoming | body_free | set(inner) | bound_variables(f.body)
    new = fresh_name(f.var, avoid)
    renamed = _subst(f.body, {f.var: Var(new)})
    return type(f)(new, _subst(renamed, inner))


def rename_variables(f: Formula, mapping: Mapping[str, str]) -> Formula:
    """Rename every occurrence, binding or bound, of the mapped names.

    Only meaningful on alpha-normal input, where a renamed binder name is
    never also free.
    """
    if not mapping:
        return f
    terms = {old: Var(new) for old, new in mapping.items()}
    return _rename(f, mapping, terms)


def _rename(f: Formula, mapping: Mapping[str, str], terms: Mapping[str, Term]) -> Formula:
    if isinstance(f, LITERALS):
        return type(f)(f.relation, tuple(substitute_term_many(t, terms) for t in f.args))
    if isinstance(f, BINARIES):
        return type(f)(_rename(f.left, mapping, terms), _rename(f.right, mapping, terms))
    return type(f)(mapping.get(f.var, f.var), _rename(f.body, mapping, terms))


def universal_closure(f: Formula) -> Formula:
    for v in sorted(free_variables(f), reverse=True):
        f = Forall(v, f)
    return f


# ---------------------------------------------------------------------------
# Sequent disjunction, quantifier erasure, associativity of disjunction
# ---------------------------------------------------------------------------

def big_or(s: Sequent) -> Formula:
    """Right-nested disjunction of the members of a non-empty sequent."""
    if not s:
        raise FolError("the empty sequent has no disjunction", code="empty-sequent")
    out = s[-1]
    for f in reversed(s[:-1]):
        out = Or(f, out)
    return out


def erase_quantifiers(f: Formula) -> Formula:
    if isinstance(f, LITERALS):
        return f
    if isinstance(f, BINARIES):
        return type(f)(erase_quantifiers(f.left), erase_quantifiers(f.right))
    return erase_quantifiers(f.body)


def disjuncts(f: Formula) -> List[Formula]:
    if isinstance(f, Or):
        return disjuncts(f.left) + disjuncts(f.right)
    return [f]


def reassociate(f: Formula) -> Formula:
    """Canonical representative modulo associativity of disjunction."""
    if isinstance(f, Or):
        parts = [reassociate(d) for d in disjuncts(f)]
        return big_or(tuple(parts))
    if isinstance(f, And):
        return And(reassociate(f.left), reassociate(f.right))
    if isinstance(f, QUANTIFIED):
        return type(f)(f.var, reassociate(f.body))
    return f


def equal_modulo_or_assoc(f: Formula, g: Formula) -> bool:
    return reassociate(f) == reassociate(g)


# ---------------------------------------------------------------------------
# Prenexification
# ---------------------------------------------------------------------------

QuantifierPrefix = Tuple[Tuple[Quantifier, str], ...]


@dataclass(frozen=True)
class PrenexFormula:
    prefix: QuantifierPrefix
    matrix: Formula

    def existentials(self) -> List[Tuple[int, str]]:
        """(prefix position, variable) of each existential, left to right."""
        return [(k, v) for k, (q, v) in enumerate(self.prefix) if q is Quantifier.EXISTS]

    def as_formula(self) -> Formula:
        out = self.matrix
        for q, v in reversed(self.prefix):
            out = q.build(v, out)
        return out

    def __str__(self) -> str:
        head = " ".join(f"{q.value} {v}." for q, v in self.prefix)
        return f"{head} {format_formula(self.matrix, top=False)}".strip()


def normalize_prefix(order: Iterable[Tuple[Union[Quantifier, str], str]]) -> QuantifierPrefix:
    return tuple((Quantifier(q), v) for q, v in order)


def quantifier_structure(s: Sequent) -> Tuple[Dict[str, Quantifier], Dict[str, FrozenSet[str]]]:
    """Kind and enclosing binders of every quantifier occurrence, keyed by its variable.

    Assumes distinct binders (alpha-normal input).
    """
    kinds: Dict[str, Quantifier] = {}
    ancestors: Dict[str, FrozenSet[str]] = {}

    def walk(f: Formula, above: FrozenSet[str]) -> None:
        if isinstance(f, LITERALS):
            return
        if isinstance(f, BINARIES):
            walk(f.left, above)
            walk(f.right, above)
            return
        kinds[f.var] = Quantifier.of(f)
        ancestors[f.var] = above
        walk(f.body, above | {f.var})

    for member in s:
        walk(member, frozenset())
    return kinds, ancestors


def is_valid_linearization(s: Sequent, order: Sequence[Tuple[Quantifier, str]]) -> bool:
    """True iff `order` lists every quantifier of `s` once, outer before inner."""
    kinds, ancestors = quantifier_structure(s)
    names = [v for _, v in order]
    if len(names) != len(set(names)) or set(names) != set(kinds) or len(names) != len(binder_order(s)):
        return False
    seen: Set[str] = set()
    for q, v in order:
        if kinds[v] is not Quantifier(q) or not ancestors[v] <= seen:
            return False
        seen.add(v)
    return True


def prenexify(s: Sequent, order: Iterable[Tuple[Union[Quantifier, str], str]]) -> PrenexFormula:
    prefix = normalize_prefix(order)
    if not is_alpha_normal_sequent(s):
        raise PrenexError("sequent disjunction is not alpha-normal", code="sequent-not-alpha-normal")
    if not is_valid_linearization(s, prefix):
        raise PrenexError(
            "prefix is not a nesting-respecting linearization of the quantifiers",
            code="order-not-a-valid-linearization",
        )
    return PrenexFormula(prefix, erase_quantifiers(big_or(s)))


def is_prenexification_of(s: Sequent, p: PrenexFormula) -> bool:
    if not s or not is_alpha_normal_sequent(s):
        return False
    if not is_valid_linearization(s, p.prefix) or not is_quantifier_free(p.matrix):
        return False
    return equal_modulo_or_assoc(p.matrix, erase_quantifiers(big_or(s)))


# ---------------------------------------------------------------------------
# Positions of subformula occurrences
# ---------------------------------------------------------------------------

class Step(str, Enum):
    LEFT = "left"
    RIGHT = "right"
    UNDER = "under"


@dataclass(frozen=True)
class Path:
    """Address of a subformula occurrence: a sequent member, then steps into it."""

    member: int
    steps: Tuple[Step, ...] = ()

    def child(self, step: Step) -> "Path":
        return Path(self.member, self.steps + (step,))

    def __str__(self) -> str:
        return ".".join([str(self.member)] + [s.value for s in self.steps])

    @classmethod
    def parse(cls, text: str) -> "Path":
        head, *rest = text.strip().split(".")
        try:
            return cls(int(head), tuple(Step(s) for s in rest))
        except ValueError as exc:
            raise PathError(f"malformed position {text!r}") from exc


def _descend(f: Formula, step: Step) -> Formula:
    if step is Step.UNDER and isinstance(f, QUANTIFIED):
        return f.body
    if step is Step.LEFT and isinstance(f, BINARIES):
        return f.left
    if step is Step.RIGHT and isinstance(f, BINARIES):
        return f.right
    raise PathError(f"step {step.value} is not legal at {format_formula(f)}")


def subformula_at(s: Sequent, path: Path) -> Formula:
    if not 0 <= path.member < len(s):
        raise PathError(f"sequent has no member {path.member}")
    f = s[path.member]
    for step in path.steps:
        f = _descend(f, step)
    return f


def resolves(s: Sequent, path: Path) -> bool:
    try:
        subformula_at(s, path)
    except PathError:
        return False
    return True


def _replace(f: Formula, steps: Tuple[Step, ...], new: Formula) -> Formula:
    if not steps:
        return new
    step, rest = steps[0], steps[1:]
    _descend(f, step)
    if step is Step.UNDER:
        return type(f)(f.var, _replace(f.body, rest, new))
    if step is Step.LEFT:
        return type(f)(_replace(f.left, rest, new), f.right)
    return type(f)(f.left, _replace(f.right, rest, new))


def replace_at(s: Sequent, path: Path, new: Formula) -> Sequent:
    subformula_at(s, path)
    member = _replace(s[path.member], path.steps, new)
    return s[: path.member] + (member,) + s[path.member + 1 :]
