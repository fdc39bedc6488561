"""
Concrete syntax for signatures, formulas and sequents.

A source document declares its symbols and then states a sequent::

    rel P/1
    fun c/0
    |- exists x. (~P(x) \\/ forall y. P(y))

A body without a turnstile is a single formula, read as a one-member
sequent. Negation may only wrap atoms; implication is not part of the
language. ASCII and Unicode connectives are both accepted.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import List, Optional, Tuple

from lark import Lark, Token, Transformer, Tree
from lark.exceptions import UnexpectedCharacters, UnexpectedEOF, UnexpectedInput, VisitError

from fol_core import (
    And,
    App,
    ArityError,
    Atom,
    Formula,
    NegAtom,
    Or,
    Quantifier,
    Sequent,
    Signature,
    SignatureError,
    Term,
    Var,
    format_formula,
    format_sequent,
)

logger = logging.getLogger(__name__)

GRAMMAR = r"""
    document: declaration* body

    declaration: "rel" IDENT "/" INT   -> relation_decl
                | "fun" IDENT "/" INT   -> function_decl

    body: turnstile formula_list?      -> sequent_body
         | formula                      -> formula_body

    formula_list: formula ("," formula)*

    turnstile: "|-" | "⊢"

    ?formula: disj | tail_disj
    ?tail_disj: tail_conj | disj or_op tail_conj  -> or_
    ?tail_conj: quant | conj and_op quant         -> and_
    quant: quantifier IDENT "." formula
    !quantifier: "forall" | "exists" | "∀" | "∃"

    ?disj: conj | disj or_op conj                 -> or_
    ?conj: unary | conj and_op unary              -> and_
    ?unary: literal
          | "(" formula ")"
          | not_op "(" formula ")"                -> compound_negation
    ?literal: atom
            | not_op atom                         -> negative

    atom: IDENT | IDENT "(" arguments ")"
    term: IDENT | IDENT "(" arguments ")"
    arguments: term ("," term)*

    or_op: "\\/" | "∨"
    and_op: "/\\" | "∧"
    not_op: "~" | "¬"

    IDENT: /[A-Za-z_][A-Za-z0-9_']*/
    INT: /[0-9]+/
    COMMENT: /#[^\n]*/

    %import common.WS
    %ignore WS
    %ignore COMMENT
"""

_PARSER = Lark(GRAMMAR, parser="lalr", start=["document", "formula", "term"])


class SyntaxProblem(Exception):
    """Base class for problems found while reading source text."""

    code = "syntax-error"


class ParseError(SyntaxProblem):
    """Source text the grammar does not accept."""

    def __init__(self, message: str, line: int = 0, column: int = 0):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class UndeclaredSymbolError(SyntaxProblem):
    code = "undeclared-symbol"


class NegationNotAtomicError(SyntaxProblem):
    code = "negation-not-atomic"


@dataclass(frozen=True)
class SourceDocument:
    signature: Signature
    sequent: Sequent
    single_formula: bool = False

    def render(self) -> str:
        return format_document(self.signature, self.sequent)


def _where(token: Token) -> str:
    return f"line {token.line}, column {token.column}"


class _Builder(Transformer):
    """Turn a parse tree into terms and formulas, resolving identifiers against a signature."""

    def __init__(self, signature: Signature):
        super().__init__()
        self.signature = signature

    def arguments(self, children):
        return tuple(children)

    def term(self, children):
        name: Token = children[0]
        args: Tuple[Term, ...] = children[1] if len(children) > 1 else ()
        if name in self.signature.relations:
            raise UndeclaredSymbolError(f"{_where(name)}: {name} is a relation and cannot be used as a term")
        if name in self.signature.functions:
            expected = self.signature.functions[name]
            if expected != len(args):
                raise ArityError(f"{_where(name)}: {name} expects {expected} arguments, got {len(args)}")
            return App(str(name), args)
        if args:
            raise UndeclaredSymbolError(f"{_where(name)}: undeclared function symbol {name}")
        return Var(str(name))

    def atom(self, children):
        name: Token = children[0]
        args: Tuple[Term, ...] = children[1] if len(children) > 1 else ()
        if name not in self.signature.relations:
            raise UndeclaredSymbolError(f"{_where(name)}: undeclared relation symbol {name}")
        expected = self.signature.relations[name]
        if expected != len(args):
            raise ArityError(f"{_where(name)}: {name} expects {expected} arguments, got {len(args)}")
        return Atom(str(name), args)

    def negative(self, children):
        atom = children[-1]
        return NegAtom(atom.relation, atom.args)

    def compound_negation(self, children):
        raise NegationNotAtomicError(f"negation of {format_formula(children[-1])}: only atoms may be negated")

    def formula(self, children):
        return children[0]

    def or_(self, children):
        return Or(children[0], children[-1])

    def and_(self, children):
        return And(children[0], children[-1])

    def quantifier(self, children):
        text = str(children[0])
        return Quantifier.FORALL if text in ("forall", "∀") else Quantifier.EXISTS

    def quant(self, children):
        q, var, body = children
        return q.build(str(var), body)

    def formula_list(self, children):
        return tuple(children)

    def sequent_body(self, children):
        members = [c for c in children if isinstance(c, tuple)]
        return (members[0] if members else (), False)

    def formula_body(self, children):
        return ((children[0],), True)


def _parse(text: str, start: str) -> Tree:
    try:
        return _PARSER.parse(text, start=start)
    except UnexpectedCharacters as exc:
        message = f"unexpected character {text[exc.pos_in_stream]!r}"
        if text.startswith("->", exc.pos_in_stream):
            message += " (implication is not part of the language)"
        raise ParseError(message, exc.line, exc.column) from exc
    except UnexpectedEOF as exc:
        raise ParseError("unexpected end of input", getattr(exc, "line", 0), getattr(exc, "column", 0)) from exc
    except UnexpectedInput as exc:
        token = getattr(exc, "token", None)
        found = "end of input" if token is None or token.type == "$END" else repr(str(token))
        raise ParseError(f"unexpected {found}", getattr(exc, "line", 0), getattr(exc, "column", 0)) from exc


def _build(tree: Tree, signature: Signature):
    try:
        return _Builder(signature).transform(tree)
    except VisitError as exc:
        raise exc.orig_exc from exc


def _declarations(tree: Tree) -> List[Tuple[str, str, int]]:
    out = []
    for child in tree.children:
        if isinstance(child, Tree) and child.data in ("relation_decl", "function_decl"):
            name, arity = child.children
            out.append(("rel" if child.data == "relation_decl" else "fun", str(name), int(arity)))
    return out


def parse_document(text: str, signature: Optional[Signature] = None) -> SourceDocument:
    """Read a source document; declarations in the text extend `signature`."""
    tree = _parse(text, "document")
    declared = _declarations(tree)
    if signature is not None:
        inherited = [("rel", n, a) for n, a in signature.relations.items()]
        inherited += [("fun", n, a) for n, a in signature.functions.items()]
        declared = inherited + declared
    if not declared:
        raise SignatureError("document declares no symbols")
    sig = Signature.from_declarations(declared)
    body = tree.children[-1]
    sequent, single = _build(body, sig)
    logger.debug("parsed document with %d members", len(sequent))
    return SourceDocument(sig, sequent, single)


def parse_formula(text: str, signature: Signature) -> Formula:
    return _build(_parse(text, "formula"), signature)


def parse_term(text: str, signature: Signature) -> Term:
    return _build(_parse(text, "term"), signature)


def parse_sequent(text: str, signature: Signature) -> Sequent:
    """Read `|- A, B, ...` (or a single formula) against a known signature."""
    return _build(_parse(text, "document").children[-1], signature)[0]


def format_signature(signature: Signature) -> str:
    lines = [f"rel {n}/{a}" for n, a in signature.relations.items()]
    lines += [f"fun {n}/{a}" for n, a in signature.functions.items()]
    return "\n".join(lines)


def format_document(signature: Signature, sequent: Sequent) -> str:
    return f"{format_signature(signature)}\n{format_sequent(sequent)}\n"
