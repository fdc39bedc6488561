"""
Command-line front end for the Herbrand toolkit.

Usage:
    python cli.py check-gs proof.json
    python cli.py search sequent.seq --depth 12 --terms 1 --policy full -o proof.json
    python cli.py translate proof.json -o certificate.json
    python cli.py check-herbrand sequent.seq certificate.json
    python cli.py demo buss

Results go to stdout as KEY: value lines (or JSON with --json); logs go to
stderr. Exit codes: 0 ok/proved/accepted, 1 rejected/exhausted, 2 input error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from typing import Any, Dict, List, Optional

import corpus
from config import SEARCH_CONFIG, VERSION, configure_logging
from documents import (
    INPUT_ERRORS,
    certificate_to_document,
    load_certificate,
    load_proof,
    load_source,
    proof_to_document,
    save_model,
)
from fol_core import Quantifier, format_formula, format_sequent, prenexify
from gs_calculus import Policy, check_gs, contraction_policy_of, search_gs
from herbrand import HerbrandProof, check_herbrand
from syntax import parse_term
from translate import TranslationError, translate
from verdict import Verdict

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_REJECTED = 1
EXIT_INPUT_ERROR = 2


def emit(fields: Dict[str, Any], as_json: bool) -> None:
    if as_json:
        print(json.dumps(fields, indent=2, default=str))
        return
    for key, value in fields.items():
        if isinstance(value, list):
            value = " ; ".join(str(v) for v in value)
        print(f"{key.upper()}: {value}")


def emit_verdict(verdict: Verdict, as_json: bool) -> int:
    if as_json:
        emit({"result": "ok" if verdict.ok else "rejected", **verdict.as_dict()}, True)
    else:
        for line in verdict.lines():
            print(line)
    return EXIT_OK if verdict.ok else EXIT_REJECTED


def certificate_fields(h: HerbrandProof) -> Dict[str, Any]:
    return {
        "expansion": format_sequent(h.expansion),
        "prefix": " ".join(f"{q.value} {v}." for q, v in h.prefix) or "(empty)",
        "matrix": format_formula(h.matrix),
        "witness": ", ".join(str(t) for t in h.witness) or "(none)",
    }


def banner(title: str) -> None:
    print("=" * 80)
    print(title)
    print("=" * 80)


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------

def cmd_check_gs(args: argparse.Namespace) -> int:
    proof, _ = load_proof(args.file)
    return emit_verdict(check_gs(proof), args.json)


def cmd_search(args: argparse.Namespace) -> int:
    doc = load_source(args.sequent)
    policy = Policy.parse(args.policy)
    proof = search_gs(doc.sequent, args.depth, args.terms, policy, doc.signature)
    if proof is None:
        emit(
            {"result": "exhausted", "sequent": format_sequent(doc.sequent), "depth": args.depth, "terms": args.terms},
            args.json,
        )
        return EXIT_REJECTED
    document = proof_to_document(proof, doc.signature)
    if args.output:
        save_model(document, args.output)
    used = contraction_policy_of(proof)
    fields: Dict[str, Any] = {
        "result": "proved",
        "sequent": format_sequent(doc.sequent),
        "nodes": proof.size(),
        "height": proof.height(),
        "contraction": used.value if used else "none",
    }
    if args.output:
        fields["output"] = args.output
    elif args.json:
        fields["proof"] = document.model_dump(mode="json", exclude_none=True)
    emit(fields, args.json)
    return EXIT_OK


def cmd_translate(args: argparse.Namespace) -> int:
    proof, signature = load_proof(args.proof)
    verdict = check_gs(proof)
    if not verdict.ok:
        logger.error("proof rejected by the GS checker: %s", verdict.code)
        return emit_verdict(verdict, args.json)
    h = translate(proof, signature)
    recheck = check_herbrand(proof.conclusion, h)
    if not recheck.ok:
        logger.error("translated certificate rejected: %s %s", recheck.code, recheck.detail)
        return emit_verdict(recheck, args.json)
    document = certificate_to_document(h, signature, proof.conclusion)
    if args.output:
        save_model(document, args.output)
        emit({"result": "ok", "output": args.output, **certificate_fields(h)}, args.json)
    else:
        print(document.model_dump_json(indent=2, exclude_none=True))
    return EXIT_OK


def cmd_check_herbrand(args: argparse.Namespace) -> int:
    doc = load_source(args.sequent)
    h, _, _ = load_certificate(args.certificate)
    return emit_verdict(check_herbrand(doc.sequent, h), args.json)


# ---------------------------------------------------------------------------
# Demos
# ---------------------------------------------------------------------------

class _DemoLog:
    """Collects expectation failures so a demo can report all of them."""

    def __init__(self):
        self.failures: List[str] = []

    def expect(self, label: str, condition: bool, shown: str) -> None:
        print(f"{label}: {shown}")
        if not condition:
            self.failures.append(label)

    def finish(self) -> int:
        if self.failures:
            print(f"DEMO: failed ({', '.join(self.failures)})")
            return EXIT_REJECTED
        print("DEMO: ok")
        return EXIT_OK


def _full_pipeline(log: _DemoLog, sequent, signature, depth: int, terms: int) -> Optional[HerbrandProof]:
    proof = search_gs(sequent, depth, terms, Policy.FULL, signature)
    log.expect("FULL", proof is not None, "exhausted" if proof is None else f"proved ({proof.size()} nodes)")
    if proof is None:
        return None
    verdict = check_gs(proof)
    log.expect("CHECK-GS", verdict.ok, verdict.code)
    h = translate(proof, signature)
    verdict = check_herbrand(sequent, h)
    log.expect("CHECK-HERBRAND", verdict.ok, verdict.code)
    for key, value in certificate_fields(h).items():
        print(f"{key.upper()}: {value}")
    return h


def demo_buss(depth: int, terms: int) -> int:
    banner("Contraction of a conjunction is needed")
    signature, sequent = corpus.buss()
    print(f"SEQUENT: {format_sequent(sequent)}")
    log = _DemoLog()
    restricted = search_gs(sequent, depth, terms, Policy.RESTRICTED, signature)
    log.expect("RESTRICTED", restricted is None, "exhausted" if restricted is None else "proved")
    conjunctive = search_gs(sequent, depth, terms, Policy.CONJUNCTIVE, signature)
    log.expect("CONJUNCTIVE", conjunctive is not None, "exhausted" if conjunctive is None else "proved")
    _full_pipeline(log, sequent, signature, depth, terms)
    return log.finish()


def demo_drinker(depth: int, terms: int) -> int:
    banner("Drinker formula")
    signature, sequent = corpus.drinker()
    print(f"SEQUENT: {format_sequent(sequent)}")
    log = _DemoLog()
    _full_pipeline(log, sequent, signature, depth, terms)

    two_copies = check_herbrand(sequent, corpus.drinker_certificate())
    log.expect("TWO-COPY-CERTIFICATE", two_copies.ok, two_copies.code)

    prefix = ((Quantifier.EXISTS, "x"), (Quantifier.FORALL, "y"))
    one_copy = HerbrandProof(sequent, prenexify(sequent, prefix), (parse_term("c", signature),))
    verdict = check_herbrand(sequent, one_copy)
    log.expect("ONE-COPY-CERTIFICATE", verdict.code == "matrix-not-tautology", verdict.code)
    return log.finish()


def cmd_demo(args: argparse.Namespace) -> int:
    if args.name == "buss":
        return demo_buss(args.depth, args.terms)
    return demo_drinker(args.depth, args.terms)


# ---------------------------------------------------------------------------
# Entry point
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(description="Check GS proofs and Herbrand proofs, search and translate")
    parser.add_argument("--json", action="store_true", help="print results as JSON")
    parser.add_argument("--log-level", default=None, help="logging level (or set HERBRAND_LOG_LEVEL env)")
    parser.add_argument("--version", action="version", version=f"%(prog)s {VERSION}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check-gs", help="check a GS proof document")
    p.add_argument("file")
    p.set_defaults(handler=cmd_check_gs)

    p = sub.add_parser("search", help="search for a GS proof of a sequent")
    p.add_argument("sequent")
    p.add_argument("--depth", type=int, default=SEARCH_CONFIG["depth"])
    p.add_argument("--terms", type=int, default=SEARCH_CONFIG["terms"], help="maximum witness term depth")
    p.add_argument(
        "--policy",
        choices=[x.value for x in Policy],
        default=SEARCH_CONFIG["policy"],
        help="contraction policy (or set HERBRAND_POLICY env)",
    )
    p.add_argument("-o", "--output", help="write the proof document here")
    p.set_defaults(handler=cmd_search)

    p = sub.add_parser("translate", help="translate a GS proof into a Herbrand certificate")
    p.add_argument("proof")
    p.add_argument("-o", "--output", help="write the certificate document here")
    p.set_defaults(handler=cmd_translate)

    p = sub.add_parser("check-herbrand", help="check a Herbrand certificate against a sequent")
    p.add_argument("sequent")
    p.add_argument("certificate")
    p.set_defaults(handler=cmd_check_herbrand)

    p = sub.add_parser("demo", help="run a self-checking demonstration")
    p.add_argument("name", choices=["buss", "drinker"])
    p.add_argument("--depth", type=int, default=SEARCH_CONFIG["depth"])
    p.add_argument("--terms", type=int, default=SEARCH_CONFIG["terms"])
    p.set_defaults(handler=cmd_demo)
    return parser


def run(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    configure_logging(args.log_level)
    try:
        return args.handler(args)
    except INPUT_ERRORS as exc:
        emit({"result": "error", "code": getattr(exc, "code", "input-error"), "detail": str(exc)}, args.json)
        return EXIT_INPUT_ERROR
    except TranslationError as exc:
        logger.exception("translation failed")
        emit({"result": "error", "code": exc.code, "detail": str(exc)}, args.json)
        return EXIT_REJECTED


def main():
    return run()


if __name__ == "__main__":
    sys.exit(main())
