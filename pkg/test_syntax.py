"""Parsing source documents and reading JSON proof and certificate documents."""

import json

import pytest

import corpus
from documents import (
    DocumentError,
    certificate_to_document,
    document_to_certificate,
    load_certificate,
    load_proof,
    load_source,
    proof_to_document,
    document_to_proof,
    save_model,
)
from fol_core import And, App, ArityError, Atom, Exists, Forall, NegAtom, Or, SignatureError, Var
from gs_calculus import Policy, Rule, check_gs, search_gs
from herbrand import check_herbrand
from syntax import (
    NegationNotAtomicError,
    ParseError,
    UndeclaredSymbolError,
    format_document,
    parse_document,
)


def test_document_with_declarations():
    doc = parse_document("rel P/1\nfun c/0\n|- exists x. (~P(x) \\/ forall y. P(y))")
    assert doc.signature.relations == {"P": 1}
    assert doc.signature.functions == {"c": 0}
    x = Var("x")
    assert doc.sequent == (Exists("x", Or(NegAtom("P", (x,)), Forall("y", Atom("P", (Var("y"),))))),)
    assert not doc.single_formula


def test_single_formula_is_one_member_sequent():
    doc = parse_document("rel p/0\nfun c/0\np \\/ ~p")
    assert doc.single_formula
    assert doc.sequent == (Or(Atom("p"), NegAtom("p")),)


def test_empty_sequent():
    assert parse_document("fun c/0\n|-").sequent == ()


def test_unicode_connectives(formula):
    assert formula("∀x. (P(x) ∨ ¬Q(x))") == formula("forall x. (P(x) \\/ ~Q(x))")
    assert formula("∃x. (P(x) ∧ Q(x))") == formula("exists x. (P(x) /\\ Q(x))")


def test_precedence_and_associativity(formula):
    p, q, r = Atom("p"), Atom("q"), Atom("r")
    assert formula("p \\/ q /\\ r") == Or(p, And(q, r))
    assert formula("p \\/ q \\/ r") == Or(Or(p, q), r)
    assert formula("p \\/ forall x. P(x) \\/ q") == Or(p, Forall("x", Or(Atom("P", (Var("x"),)), q)))


def test_constants_and_variables(formula):
    f = formula("R(c, y)")
    assert f.args == (App("c"), Var("y"))


def test_compound_negation_rejected(formula):
    with pytest.raises(NegationNotAtomicError) as err:
        formula("~(P(c) /\\ Q(c))")
    assert err.value.code == "negation-not-atomic"


def test_arity_mismatch(formula):
    with pytest.raises(ArityError) as err:
        formula("P(c, d)")
    assert err.value.code == "arity-mismatch"


def test_undeclared_relation(formula):
    with pytest.raises(UndeclaredSymbolError):
        formula("S(c)")


def test_implication_is_not_syntax(formula):
    with pytest.raises(ParseError) as err:
        formula("p -> q")
    assert err.value.code == "syntax-error"
    assert "implication" in str(err.value)


def test_signature_without_constant():
    with pytest.raises(SignatureError):
        parse_document("rel P/1\nfun f/1\n|- P(f(x))")


def test_duplicate_declaration():
    with pytest.raises(SignatureError):
        parse_document("rel P/1\nrel P/2\nfun c/0\n|- P(c)")


def test_format_document_reparses():
    sig, s = corpus.buss()
    again = parse_document(format_document(sig, s))
    assert again.sequent == s
    assert again.signature == sig


def test_fixture_sources(fixtures_dir):
    assert load_source(fixtures_dir / "drinker.seq").sequent == corpus.drinker()[1]
    assert load_source(fixtures_dir / "buss.seq").sequent == corpus.buss()[1]


# ---------------------------------------------------------------------------
# JSON documents
# ---------------------------------------------------------------------------

def test_fixture_proof_checks(fixtures_dir):
    proof, sig = load_proof(fixtures_dir / "axiom.proof")
    assert proof.rule is Rule.OR
    assert check_gs(proof).ok


def test_fixture_certificate_checks(fixtures_dir):
    h, sig, sequent = load_certificate(fixtures_dir / "drinker.cert")
    assert sequent == corpus.drinker()[1]
    assert check_herbrand(sequent, h).ok
    assert h.witness == (App("c"), Var("y1"))


def test_searched_proof_survives_serialization(tmp_path):
    sig, s = corpus.drinker()
    proof = search_gs(s, 12, 1, Policy.FULL, sig)
    target = tmp_path / "drinker.proof"
    save_model(proof_to_document(proof, sig), target)
    loaded, _ = load_proof(target)
    assert loaded == proof


def test_certificate_document_fields():
    sig = corpus.signature()
    doc = certificate_to_document(corpus.drinker_certificate(), sig)
    assert doc.sequent is None
    assert [m.var for m in doc.prefix] == ["x1", "y1", "x2", "y2"]
    assert doc.witness == ["c", "y1"]
    h, _, _ = document_to_certificate(doc)
    assert h == corpus.drinker_certificate()


def test_malformed_json(tmp_path):
    target = tmp_path / "broken.proof"
    target.write_text(json.dumps({"format_version": 1, "proof": {"rule": "Ax"}}))
    with pytest.raises(DocumentError) as err:
        load_proof(target)
    assert err.value.code == "malformed-document"


def test_unknown_rule(tmp_path):
    target = tmp_path / "rule.proof"
    target.write_text(
        json.dumps(
            {
                "signature": {"relations": [{"name": "P", "arity": 1}], "functions": [{"name": "c", "arity": 0}]},
                "proof": {"rule": "CutR", "conclusion": ["P(c)"]},
            }
        )
    )
    with pytest.raises(DocumentError):
        load_proof(target)


def test_wrong_format_version(tmp_path, fixtures_dir):
    data = json.loads((fixtures_dir / "axiom.proof").read_text())
    data["format_version"] = 2
    target = tmp_path / "v2.proof"
    target.write_text(json.dumps(data))
    with pytest.raises(DocumentError):
        load_proof(target)


def test_missing_file(tmp_path):
    with pytest.raises(DocumentError):
        load_source(tmp_path / "nowhere.seq")


def test_document_to_proof_round_trip_of_fixture(fixtures_dir):
    proof, sig = load_proof(fixtures_dir / "axiom.proof")
    again, _ = document_to_proof(proof_to_document(proof, sig))
    assert again == proof
