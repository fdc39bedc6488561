"""
JSON documents for GS proofs and Herbrand certificates.

Formulas and terms are stored in the concrete syntax and re-parsed against
the signature carried by the document.
"""

from __future__ import annotations

import logging
from pathlib import Path as FilePath
from typing import List, Optional, Tuple, Union

from pydantic import BaseModel, Field, ValidationError

from fol_core import FolError, Path, PrenexFormula, Quantifier, Sequent, Signature, format_formula
from gs_calculus import GSProof, Rule
from herbrand import HerbrandProof
from syntax import SourceDocument, SyntaxProblem, parse_document, parse_formula, parse_term

logger = logging.getLogger(__name__)

FORMAT_VERSION = 1


class DocumentError(Exception):
    code = "malformed-document"


class OutputError(DocumentError):
    code = "unwritable-output"


class SymbolModel(BaseModel):
    name: str = Field(..., min_length=1)
    arity: int = Field(..., ge=0)


class SignatureModel(BaseModel):
    relations: List[SymbolModel] = Field(default_factory=list)
    functions: List[SymbolModel] = Field(default_factory=list)

    def to_signature(self) -> Signature:
        declarations = [("rel", s.name, s.arity) for s in self.relations]
        declarations += [("fun", s.name, s.arity) for s in self.functions]
        return Signature.from_declarations(declarations)

    @classmethod
    def from_signature(cls, signature: Signature) -> "SignatureModel":
        return cls(
            relations=[SymbolModel(name=n, arity=a) for n, a in signature.relations.items()],
            functions=[SymbolModel(name=n, arity=a) for n, a in signature.functions.items()],
        )


class ProofNodeModel(BaseModel):
    rule: Rule
    conclusion: List[str]
    term: Optional[str] = None
    eigenvariable: Optional[str] = None
    index: Optional[int] = Field(None, ge=0)
    permutation: Optional[List[int]] = None
    path: Optional[str] = Field(None, description="member index followed by left/right/under steps, dot separated")
    children: List["ProofNodeModel"] = Field(default_factory=list)


ProofNodeModel.model_rebuild()


class ProofDocument(BaseModel):
    format_version: int = FORMAT_VERSION
    signature: SignatureModel
    proof: ProofNodeModel


class QuantifierModel(BaseModel):
    q: Quantifier
    var: str


class CertificateDocument(BaseModel):
    format_version: int = FORMAT_VERSION
    signature: SignatureModel
    sequent: Optional[List[str]] = None
    expansion: List[str]
    prefix: List[QuantifierModel] = Field(default_factory=list)
    matrix: str
    witness: List[str] = Field(default_factory=list)


# ---------------------------------------------------------------------------
# Conversion
# ---------------------------------------------------------------------------

def _formulas(texts: List[str], signature: Signature) -> Sequent:
    return tuple(parse_formula(t, signature) for t in texts)


def proof_to_model(p: GSProof) -> ProofNodeModel:
    return ProofNodeModel(
        rule=p.rule,
        conclusion=[format_formula(f) for f in p.conclusion],
        term=None if p.term is None else str(p.term),
        eigenvariable=p.eigenvariable,
        index=p.index,
        permutation=None if p.permutation is None else list(p.permutation),
        path=None if p.path is None else str(p.path),
        children=[proof_to_model(c) for c in p.children],
    )


def model_to_proof(node: ProofNodeModel, signature: Signature) -> GSProof:
    return GSProof(
        conclusion=_formulas(node.conclusion, signature),
        rule=node.rule,
        children=tuple(model_to_proof(c, signature) for c in node.children),
        term=None if node.term is None else parse_term(node.term, signature),
        eigenvariable=node.eigenvariable,
        index=node.index,
        permutation=None if node.permutation is None else tuple(node.permutation),
        path=None if node.path is None else Path.parse(node.path),
    )


def proof_to_document(p: GSProof, signature: Signature) -> ProofDocument:
    return ProofDocument(signature=SignatureModel.from_signature(signature), proof=proof_to_model(p))


def document_to_proof(doc: ProofDocument) -> Tuple[GSProof, Signature]:
    _check_version(doc.format_version)
    signature = doc.signature.to_signature()
    return model_to_proof(doc.proof, signature), signature


def certificate_to_document(
    h: HerbrandProof, signature: Signature, sequent: Optional[Sequent] = None
) -> CertificateDocument:
    return CertificateDocument(
        signature=SignatureModel.from_signature(signature),
        sequent=None if sequent is None else [format_formula(f) for f in sequent],
        expansion=[format_formula(f) for f in h.expansion],
        prefix=[QuantifierModel(q=q, var=v) for q, v in h.prefix],
        matrix=format_formula(h.matrix),
        witness=[str(t) for t in h.witness],
    )


def document_to_certificate(doc: CertificateDocument) -> Tuple[HerbrandProof, Signature, Optional[Sequent]]:
    _check_version(doc.format_version)
    signature = doc.signature.to_signature()
    prenex = PrenexFormula(tuple((m.q, m.var) for m in doc.prefix), parse_formula(doc.matrix, signature))
    h = HerbrandProof(
        expansion=_formulas(doc.expansion, signature),
        prenex=prenex,
        witness=tuple(parse_term(t, signature) for t in doc.witness),
    )
    sequent = None if doc.sequent is None else _formulas(doc.sequent, signature)
    return h, signature, sequent


def _check_version(version: int) -> None:
    if version != FORMAT_VERSION:
        raise DocumentError(f"unsupported format_version {version}, expected {FORMAT_VERSION}")


# ---------------------------------------------------------------------------
# Files
# ---------------------------------------------------------------------------

PathLike = Union[str, FilePath]


def _read(path: PathLike) -> str:
    try:
        return FilePath(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise DocumentError(f"cannot read {path}: {exc.strerror or exc}") from exc


def load_source(path: PathLike) -> SourceDocument:
    return parse_document(_read(path))


def load_proof(path: PathLike) -> Tuple[GSProof, Signature]:
    try:
        doc = ProofDocument.model_validate_json(_read(path))
    except ValidationError as exc:
        raise DocumentError(f"{path} is not a proof document: {exc.error_count()} validation errors") from exc
    return document_to_proof(doc)


def load_certificate(path: PathLike) -> Tuple[HerbrandProof, Signature, Optional[Sequent]]:
    try:
        doc = CertificateDocument.model_validate_json(_read(path))
    except ValidationError as exc:
        raise DocumentError(f"{path} is not a certificate document: {exc.error_count()} validation errors") from exc
    return document_to_certificate(doc)


def save_model(model: BaseModel, path: PathLike) -> None:
    try:
        FilePath(path).write_text(model.model_dump_json(indent=2, exclude_none=True) + "\n", encoding="utf-8")
    except OSError as exc:
        raise OutputError(f"cannot write {path}: {exc.strerror or exc}") from exc
    logger.info("wrote %s", path)


INPUT_ERRORS = (DocumentError, SyntaxProblem, FolError)
