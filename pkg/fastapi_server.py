"""
FastAPI server for the Herbrand toolkit.
Exposes the checkers, proof search and translation over HTTP.
"""

import logging
from typing import Any, Dict, List, Optional

import uvicorn
from fastapi import FastAPI, HTTPException
from pydantic import BaseModel, Field

from config import LOG_LEVEL, SEARCH_CONFIG, SERVER_CONFIG, VERSION, configure_logging
from documents import (
    INPUT_ERRORS,
    CertificateDocument,
    ProofDocument,
    certificate_to_document,
    document_to_certificate,
    document_to_proof,
    proof_to_document,
)
from gs_calculus import Policy, check_gs, contraction_policy_of, search_gs
from herbrand import check_herbrand
from syntax import parse_document
from translate import TranslationError, translate
from verdict import Verdict

logger = logging.getLogger(__name__)

# Initialize FastAPI app
app = FastAPI(
    title="Herbrand Proof Toolkit",
    description="GS proof checking and search, Herbrand proof checking, and proof translation",
    version=VERSION,
)


class SequentRequest(BaseModel):
    """A source document: symbol declarations followed by a sequent."""
    source: str = Field(..., description="Declarations and '|- A, B, ...'", min_length=1)


class SearchRequest(SequentRequest):
    depth: int = Field(SEARCH_CONFIG["depth"], description="Bound on logical rules and contractions", ge=0, le=40)
    terms: int = Field(SEARCH_CONFIG["terms"], description="Maximum witness term depth", ge=0, le=4)
    policy: Optional[Policy] = Field(None, description="Contraction policy (default from HERBRAND_POLICY)")


class CheckHerbrandRequest(SequentRequest):
    certificate: CertificateDocument


class VerdictResponse(BaseModel):
    ok: bool
    code: str
    detail: str = ""
    location: Dict[str, Any] = Field(default_factory=dict, description="node, member, witness, variable, assignment")


class SearchResponse(BaseModel):
    result: str = Field(..., description="'proved' or 'exhausted'")
    proof: Optional[ProofDocument] = None
    contraction: Optional[Policy] = None


class HealthResponse(BaseModel):
    status: str
    version: str
    policies: List[str]


def to_response(verdict: Verdict) -> VerdictResponse:
    location = {k: v for k, v in verdict.as_dict().items() if k not in ("ok", "code", "detail")}
    return VerdictResponse(ok=verdict.ok, code=verdict.code, detail=verdict.detail, location=location)


def bad_input(exc: Exception) -> HTTPException:
    return HTTPException(status_code=400, detail={"code": getattr(exc, "code", "input-error"), "message": str(exc)})


@app.on_event("startup")
async def announce():
    """Log the search defaults the server runs with."""
    logger.info(
        "Herbrand toolkit %s ready (depth %d, terms %d, policy %s)",
        VERSION, SEARCH_CONFIG["depth"], SEARCH_CONFIG["terms"], SEARCH_CONFIG["policy"],
    )


@app.get("/health", response_model=HealthResponse)
async def health_check():
    """Health check endpoint."""
    return HealthResponse(status="healthy", version=VERSION, policies=[p.value for p in Policy])


@app.post("/check-gs", response_model=VerdictResponse)
def check_gs_endpoint(document: ProofDocument):
    try:
        proof, _ = document_to_proof(document)
    except INPUT_ERRORS as exc:
        raise bad_input(exc)
    return to_response(check_gs(proof))


@app.post("/check-herbrand", response_model=VerdictResponse)
def check_herbrand_endpoint(request: CheckHerbrandRequest):
    try:
        source = parse_document(request.source)
        h, _, _ = document_to_certificate(request.certificate)
    except INPUT_ERRORS as exc:
        raise bad_input(exc)
    return to_response(check_herbrand(source.sequent, h))


@app.post("/search", response_model=SearchResponse)
def search_endpoint(request: SearchRequest):
    """
    Depth-bounded GS proof search.

    Returns the proof document when one is found, otherwise result 'exhausted'.
    """
    try:
        source = parse_document(request.source)
        policy = request.policy or Policy.parse(SEARCH_CONFIG["policy"])
    except INPUT_ERRORS as exc:
        raise bad_input(exc)
    proof = search_gs(source.sequent, request.depth, request.terms, policy, source.signature)
    if proof is None:
        return SearchResponse(result="exhausted")
    return SearchResponse(
        result="proved",
        proof=proof_to_document(proof, source.signature),
        contraction=contraction_policy_of(proof),
    )


@app.post("/translate", response_model=CertificateDocument)
def translate_endpoint(document: ProofDocument):
    """Translate a GS proof into a Herbrand certificate; the proof must pass the GS checker."""
    try:
        proof, signature = document_to_proof(document)
    except INPUT_ERRORS as exc:
        raise bad_input(exc)
    verdict = check_gs(proof)
    if not verdict.ok:
        raise HTTPException(status_code=422, detail=to_response(verdict).model_dump())
    try:
        h = translate(proof, signature)
    except TranslationError as exc:
        logger.exception("translation of an accepted proof failed")
        raise HTTPException(status_code=500, detail={"code": exc.code, "message": str(exc)})
    return certificate_to_document(h, signature, proof.conclusion)


def main():
    """Run the FastAPI server."""
    configure_logging(LOG_LEVEL)
    host, port = SERVER_CONFIG["host"], SERVER_CONFIG["port"]
    print(f"\nServer will be available at: http://{host}:{port}")
    print(f"API documentation: http://{host}:{port}/docs\n")
    uvicorn.run(app, host=host, port=port, log_level="info")


if __name__ == "__main__":
    main()
