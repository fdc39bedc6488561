"""
One-sided sequent calculus GS over NNF sequents.

Proof trees, a checker that reports the first failing node, and a
depth-bounded proof search parameterised by a contraction policy.
"""

from __future__ import annotations

import itertools
import logging
from collections import Counter
from dataclasses import dataclass
from enum import Enum
from typing import Dict, FrozenSet, Iterator, List, Optional, Sequence, Set, Tuple

from fol_core import (
    And,
    App,
    Atom,
    Exists,
    Forall,
    FolError,
    Formula,
    NegAtom,
    Or,
    Path,
    PathError,
    Sequent,
    Signature,
    Term,
    Var,
    alpha_eq,
    format_sequent,
    formula_size,
    is_quantifier_free,
    literals,
    replace_at,
    sequent_bound_variables,
    sequent_free_variables,
    subformula_at,
    substitute,
    term_depth,
    term_size,
    term_variables,
    fresh_name,
)
from verdict import Verdict

logger = logging.getLogger(__name__)

NodePath = Tuple[int, ...]


class Rule(str, Enum):
    AX = "Ax"
    OR = "OrR"
    AND = "AndR"
    CONTRACT = "ContractR"
    WEAKEN = "WeakenR"
    EXISTS = "ExistsR"
    FORALL = "ForallR"
    EXCHANGE = "ExchangeR"
    DEEP_CONTRACT = "DeepContractR"


PREMISE_COUNT = {Rule.AX: 0, Rule.AND: 2}


@dataclass(frozen=True)
class GSProof:
    """A GS derivation: the conclusion, the rule applied, and its premise derivations.

    `index` selects the principal member of ExistsR and ForallR (last member
    when unset); `permutation` is used by ExchangeR and `path` by DeepContractR.
    """

    conclusion: Sequent
    rule: Rule
    children: Tuple["GSProof", ...] = ()
    term: Optional[Term] = None
    eigenvariable: Optional[str] = None
    index: Optional[int] = None
    permutation: Optional[Tuple[int, ...]] = None
    path: Optional[Path] = None

    def nodes(self, at: NodePath = ()) -> Iterator[Tuple[NodePath, "GSProof"]]:
        """Pre-order walk yielding (node path, node)."""
        yield at, self
        for k, child in enumerate(self.children):
            yield from child.nodes(at + (k,))

    def principal_index(self) -> int:
        return len(self.conclusion) - 1 if self.index is None else self.index

    def size(self) -> int:
        return sum(1 for _ in self.nodes())

    def height(self) -> int:
        return 1 + max((c.height() for c in self.children), default=0)


class PolicyError(FolError):
    code = "unknown-policy"


class Policy(str, Enum):
    """Which formulas ContractR may duplicate."""

    FULL = "full"
    RESTRICTED = "restricted"
    CONJUNCTIVE = "conjunctive"

    @classmethod
    def parse(cls, name: str) -> "Policy":
        if isinstance(name, cls):
            return name
        try:
            return cls(str(name).strip().lower())
        except ValueError:
            choices = ", ".join(p.value for p in cls)
            raise PolicyError(f"unknown contraction policy {name!r}, expected one of {choices}") from None

    def allows(self, f: Formula) -> bool:
        if self is Policy.FULL:
            return True
        if is_quantifier_free(f) or isinstance(f, Exists):
            return True
        return self is Policy.CONJUNCTIVE and isinstance(f, And)


def proof_free_names(p: GSProof) -> FrozenSet[str]:
    """Free variables of all conclusions plus eigenvariables and witness-term variables."""
    out: Set[str] = set()
    for _, node in p.nodes():
        out |= sequent_free_variables(node.conclusion)
        if node.eigenvariable is not None:
            out.add(node.eigenvariable)
        if node.term is not None:
            out |= term_variables(node.term)
    return frozenset(out)


def contraction_policy_of(p: GSProof) -> Optional[Policy]:
    """Most restrictive policy admitting every contraction in `p`, or None without contractions."""
    contracted: List[Formula] = []
    for _, node in p.nodes():
        if node.rule is Rule.CONTRACT and node.conclusion:
            contracted.append(node.conclusion[-1])
        elif node.rule is Rule.DEEP_CONTRACT and node.path is not None:
            try:
                contracted.append(subformula_at(node.conclusion, node.path))
            except PathError:
                continue
    if not contracted:
        return None
    for policy in (Policy.RESTRICTED, Policy.CONJUNCTIVE):
        if all(policy.allows(f) for f in contracted):
            return policy
    return Policy.FULL


# ---------------------------------------------------------------------------
# Checking
# ---------------------------------------------------------------------------

def _complementary(a: Formula, b: Formula) -> bool:
    return (
        (isinstance(a, Atom) and isinstance(b, NegAtom)) or (isinstance(a, NegAtom) and isinstance(b, Atom))
    ) and a.relation == b.relation and a.args == b.args


def _schema_error(node: GSProof) -> Optional[str]:
    """Describe why `node` is not an instance of its rule, or None when it is."""
    rule, c = node.rule, node.conclusion
    expected = PREMISE_COUNT.get(rule, 1)
    if len(node.children) != expected:
        return f"{rule.value} needs {expected} premises, found {len(node.children)}"
    premises = [child.conclusion for child in node.children]

    if rule is Rule.AX:
        if len(c) != 2 or not _complementary(c[0], c[1]):
            return "axiom conclusion must be exactly two complementary literals"
        return None

    if rule is Rule.OR:
        (p,) = premises
        if not c or not isinstance(c[-1], Or):
            return "last member of the conclusion is not a disjunction"
        if p != c[:-1] + (c[-1].left, c[-1].right):
            return "premise is not the context followed by both disjuncts"
        return None

    if rule is Rule.AND:
        if not c or not isinstance(c[-1], And):
            return "last member of the conclusion is not a conjunction"
        left, right = premises
        if not left or not right or left[-1] != c[-1].left or right[-1] != c[-1].right:
            return "premises do not end with the two conjuncts"
        if left[:-1] + right[:-1] != c[:-1]:
            return "premise contexts do not split the conclusion context in order"
        return None

    if rule is Rule.CONTRACT:
        (p,) = premises
        if not c or p != c + (c[-1],):
            return "premise is not the conclusion with its last member repeated"
        return None

    if rule is Rule.WEAKEN:
        (p,) = premises
        if not c or p != c[:-1]:
            return "premise is not the conclusion without its last member"
        return None

    if rule is Rule.EXCHANGE:
        (p,) = premises
        perm = node.permutation
        if perm is None or sorted(perm) != list(range(len(c))) or len(p) != len(c):
            return "permutation is missing or not a permutation of the conclusion"
        if any(c[i] != p[perm[i]] for i in range(len(c))):
            return "conclusion is not the premise permuted"
        return None

    if rule in (Rule.EXISTS, Rule.FORALL):
        (p,) = premises
        i = node.principal_index()
        if not 0 <= i < len(c) or len(p) != len(c):
            return "principal index out of range"
        principal = c[i]
        if any(p[k] != c[k] for k in range(len(c)) if k != i):
            return "context differs between premise and conclusion"
        if rule is Rule.EXISTS:
            if not isinstance(principal, Exists) or node.term is None:
                return "ExistsR needs an existential principal formula and a term"
            instance = substitute(principal.body, principal.var, node.term)
        else:
            if not isinstance(principal, Forall) or node.eigenvariable is None:
                return "ForallR needs a universal principal formula and an eigenvariable"
            instance = substitute(principal.body, principal.var, Var(node.eigenvariable))
        if not alpha_eq(p[i], instance):
            return "premise member is not the instance of the principal formula"
        return None

    if rule is Rule.DEEP_CONTRACT:
        (p,) = premises
        if node.path is None:
            return "DeepContractR needs a position"
        try:
            target = subformula_at(c, node.path)
            doubled = subformula_at(p, node.path)
        except PathError as exc:
            return str(exc)
        if not isinstance(doubled, Or) or not alpha_eq(doubled.left, target) or not alpha_eq(doubled.right, target):
            return "premise does not hold a duplicated copy at the position"
        if replace_at(p, node.path, target) != c:
            return "premise differs from the conclusion away from the position"
        return None

    return f"unknown rule {rule}"


def check_gs(p: GSProof) -> Verdict:
    """Accept iff every node is a correct rule instance, eigenvariables are sound
    and the proof satisfies the Barendregt convention."""
    seen_eigen: Dict[str, NodePath] = {}
    for at, node in p.nodes():
        error = _schema_error(node)
        if error is not None:
            return Verdict.reject("rule-mismatch", f"{node.rule.value}: {error}", node=at)
        if node.rule is Rule.FORALL:
            z = node.eigenvariable
            if z in sequent_free_variables(node.conclusion):
                return Verdict.reject(
                    "eigenvariable-free-in-context", f"{z} occurs free in the conclusion", node=at, variable=z
                )
            if z in seen_eigen:
                return Verdict.reject(
                    "eigenvariable-reused", f"{z} is already the eigenvariable of another ForallR", node=at, variable=z
                )
            seen_eigen[z] = at

    for z, owner in seen_eigen.items():
        above = owner + (0,)
        for at, node in p.nodes():
            if at[: len(above)] == above:
                continue
            occurs = z in sequent_free_variables(node.conclusion)
            if not occurs and node.term is not None:
                occurs = z in term_variables(node.term)
            if occurs:
                return Verdict.reject(
                    "eigenvariable-escapes-subproof",
                    f"eigenvariable {z} of the ForallR at {_fmt(owner)} occurs outside its premise subtree",
                    node=at,
                    variable=z,
                )

    bound: Set[str] = set()
    for _, node in p.nodes():
        bound |= sequent_bound_variables(node.conclusion)
    clash = sorted(bound & proof_free_names(p))
    if clash:
        return Verdict.reject(
            "barendregt-violation", f"{clash[0]} occurs both bound and free in the proof", variable=clash[0]
        )
    return Verdict.accept()


def _fmt(at: NodePath) -> str:
    return "/".join(str(i) for i in at) or "root"


# ---------------------------------------------------------------------------
# Search
# ---------------------------------------------------------------------------

class _Chain:
    """Structural steps (exchanges and contractions) between a goal and a principal rule.

    Members carry tags so that permutations can be read off when the chain is
    closed over the proof of the rearranged sequent.
    """

    def __init__(self, goal: Sequence[Formula]):
        self.items: List[Tuple[int, Formula]] = list(enumerate(goal))
        self.next_tag = len(self.items)
        self.steps: List[Tuple[Rule, List[Tuple[int, Formula]], List[Tuple[int, Formula]]]] = []

    def arrange(self, tags: Sequence[int]) -> None:
        by_tag = dict(self.items)
        premise = [(t, by_tag[t]) for t in tags]
        if [t for t, _ in premise] != [t for t, _ in self.items]:
            self.steps.append((Rule.EXCHANGE, self.items, premise))
        self.items = premise

    def contract_last(self) -> int:
        tag, f = self.items[-1]
        premise = self.items + [(self.next_tag, f)]
        self.steps.append((Rule.CONTRACT, self.items, premise))
        self.items = premise
        self.next_tag += 1
        return self.next_tag - 1

    def sequent(self) -> Sequent:
        return tuple(f for _, f in self.items)

    def tags(self) -> List[int]:
        return [t for t, _ in self.items]

    def close(self, top: GSProof) -> GSProof:
        proof = top
        for rule, conclusion, premise in reversed(self.steps):
            c = tuple(f for _, f in conclusion)
            if rule is Rule.CONTRACT:
                proof = GSProof(c, Rule.CONTRACT, (proof,))
            else:
                position = {t: k for k, (t, _) in enumerate(premise)}
                perm = tuple(position[t] for t, _ in conclusion)
                proof = GSProof(c, Rule.EXCHANGE, (proof,), permutation=perm)
        return proof


def _multiset_key(seq: Sequence[Formula]) -> FrozenSet[Tuple[Formula, int]]:
    return frozenset(Counter(seq).items())


def _may_close(seq: Sequence[Formula]) -> bool:
    """Some relation occurs with both polarities; every provable sequent passes this."""
    positive: Set[str] = set()
    negative: Set[str] = set()
    for f in seq:
        for lit in literals(f):
            (positive if isinstance(lit, Atom) else negative).add(lit.relation)
    return bool(positive & negative)


def _seq_size(seq: Sequence[Formula]) -> int:
    return sum(formula_size(f) for f in seq)


class _ProofSearch:
    """Iterative-deepening search; depth counts logical rules and contractions."""

    def __init__(self, root: Sequent, term_depth_bound: int, policy: Policy, signature: Optional[Signature]):
        self.root = root
        self.term_depth_bound = term_depth_bound
        self.policy = policy
        self.functions = self._universe_functions(root, signature)
        self.avoid: Set[str] = set(sequent_free_variables(root)) | set(sequent_bound_variables(root))
        if signature is not None:
            self.avoid |= signature.symbol_names()
        self.failed: Dict[FrozenSet[Tuple[Formula, int]], int] = {}
        self.term_cache: Dict[FrozenSet[str], List[Term]] = {}
        self.explored = 0

    @staticmethod
    def _universe_functions(root: Sequent, signature: Optional[Signature]) -> Dict[str, int]:
        functions: Dict[str, int] = {}
        for f in root:
            for lit in literals(f):
                for a in lit.args:
                    stack = [a]
                    while stack:
                        t = stack.pop()
                        if isinstance(t, App):
                            functions.setdefault(t.symbol, len(t.args))
                            stack.extend(t.args)
        if not any(arity == 0 for arity in functions.values()):
            constant = signature.distinguished_constant if signature is not None else App("c")
            functions[constant.symbol] = 0
        return dict(sorted(functions.items()))

    def terms(self, free: FrozenSet[str]) -> List[Term]:
        cached = self.term_cache.get(free)
        if cached is not None:
            return cached
        level: List[Term] = [Var(v) for v in sorted(free)]
        level += [App(name) for name, arity in self.functions.items() if arity == 0]
        known = set(level)
        for _ in range(self.term_depth_bound):
            grown: List[Term] = []
            for name, arity in self.functions.items():
                if arity == 0:
                    continue
                for args in itertools.product(level, repeat=arity):
                    t = App(name, tuple(args))
                    if t not in known:
                        known.add(t)
                        grown.append(t)
            level = level + grown
        ordered = sorted(level, key=lambda t: (term_depth(t), term_size(t), str(t)))
        self.term_cache[free] = ordered
        return ordered

    def fresh_eigenvariable(self) -> str:
        z = fresh_name("z", self.avoid)
        self.avoid.add(z)
        return z

    def run(self, depth_bound: int) -> Optional[GSProof]:
        for depth in range(depth_bound + 1):
            proof = self.prove(list(self.root), depth)
            logger.debug("depth %d: %s after %d goals", depth, "proved" if proof else "no proof", self.explored)
            if proof is not None:
                return proof
        return None

    def prove(self, seq: List[Formula], depth: int) -> Optional[GSProof]:
        self.explored += 1
        closed = self.close_axiom(seq)
        if closed is not None:
            return closed
        if depth <= 0:
            return None
        key = _multiset_key(seq)
        if self.failed.get(key, -1) >= depth:
            return None
        proof = self.expand(seq, depth)
        if proof is None:
            self.failed[key] = depth
        return proof

    def close_axiom(self, seq: List[Formula]) -> Optional[GSProof]:
        for i, a in enumerate(seq):
            if not isinstance(a, (Atom, NegAtom)):
                continue
            for j in range(i + 1, len(seq)):
                if _complementary(a, seq[j]):
                    chain = _Chain(seq)
                    others = [k for k in range(len(seq)) if k not in (i, j)]
                    chain.arrange([i, j] + others)
                    ordered = chain.sequent()
                    proof = GSProof(ordered[:2], Rule.AX)
                    for n in range(3, len(ordered) + 1):
                        proof = GSProof(ordered[:n], Rule.WEAKEN, (proof,))
                    return chain.close(proof)
        return None

    def expand(self, seq: List[Formula], depth: int) -> Optional[GSProof]:
        for i, f in enumerate(seq):
            if isinstance(f, (Or, Forall)):
                return self.invertible(seq, i, depth)
        for i, f in enumerate(seq):
            if isinstance(f, Exists):
                proof = self.try_exists(seq, i, depth)
            elif isinstance(f, And):
                proof = self.try_and(seq, i, depth)
            else:
                continue
            if proof is not None:
                return proof
        return None

    def invertible(self, seq: List[Formula], i: int, depth: int) -> Optional[GSProof]:
        f = seq[i]
        others = [k for k in range(len(seq)) if k != i]
        chain = _Chain(seq)
        chain.arrange(others + [i])
        context = [seq[k] for k in others]
        if isinstance(f, Or):
            sub = self.prove(context + [f.left, f.right], depth - 1)
            if sub is None:
                return None
            return chain.close(GSProof(chain.sequent(), Rule.OR, (sub,)))
        z = self.fresh_eigenvariable()
        sub = self.prove(context + [substitute(f.body, f.var, Var(z))], depth - 1)
        if sub is None:
            return None
        top = GSProof(chain.sequent(), Rule.FORALL, (sub,), eigenvariable=z, index=len(seq) - 1)
        return chain.close(top)

    def try_exists(self, seq: List[Formula], i: int, depth: int) -> Optional[GSProof]:
        f = seq[i]
        others = [k for k in range(len(seq)) if k != i]
        context = [seq[k] for k in others]
        keeps = (False, True) if self.policy.allows(f) else (False,)
        free = frozenset(sequent_free_variables(tuple(seq)))
        for keep in keeps:
            cost = 1 + int(keep)
            if depth - cost < 0:
                continue
            for t in self.terms(free):
                instance = substitute(f.body, f.var, t)
                # a second copy of a quantifier-free member adds nothing
                if is_quantifier_free(instance) and instance in context:
                    continue
                premise = context + ([f] if keep else []) + [instance]
                if not _may_close(premise):
                    continue
                sub = self.prove(premise, depth - cost)
                if sub is None:
                    continue
                chain = _Chain(seq)
                chain.arrange(others + [i])
                if keep:
                    chain.contract_last()
                top = GSProof(chain.sequent(), Rule.EXISTS, (sub,), term=t, index=len(chain.items) - 1)
                return chain.close(top)
        return None

    def try_and(self, seq: List[Formula], i: int, depth: int) -> Optional[GSProof]:
        f = seq[i]
        others = [k for k in range(len(seq)) if k != i]
        keeps = (False, True) if self.policy.allows(f) else (False,)
        sides = [("L", "R", "B") if self.policy.allows(seq[k]) else ("L", "R") for k in others]
        options = []
        for keep in keeps:
            for assignment in itertools.product(*sides):
                cost = 1 + int(keep) + sum(1 for s in assignment if s == "B")
                options.append((cost, keep, assignment))
        options.sort(key=lambda o: o[0])
        for cost, keep, assignment in options:
            if depth - cost < 0:
                break
            left = [seq[k] for k, s in zip(others, assignment) if s in "LB"]
            right = [seq[k] for k, s in zip(others, assignment) if s in "RB"]
            if keep:
                left.append(f)
            left_goal, right_goal = left + [f.left], right + [f.right]
            if not _may_close(left_goal) or not _may_close(right_goal):
                continue
            first, second = (left_goal, right_goal)
            if _seq_size(right_goal) < _seq_size(left_goal):
                first, second = right_goal, left_goal
            proof_first = self.prove(first, depth - cost)
            if proof_first is None:
                continue
            proof_second = self.prove(second, depth - cost)
            if proof_second is None:
                continue
            if first is left_goal:
                left_proof, right_proof = proof_first, proof_second
            else:
                left_proof, right_proof = proof_second, proof_first
            return self.assemble_and(seq, i, others, keep, assignment, left_proof, right_proof)
        return None

    def assemble_and(self, seq, i, others, keep, assignment, left_proof, right_proof) -> GSProof:
        chain = _Chain(seq)
        chain.arrange(others + [i])
        principal = i
        kept = None
        if keep:
            kept = i
            principal = chain.contract_last()
        copies: Dict[int, int] = {}
        for k, side in zip(others, assignment):
            if side != "B":
                continue
            rest = [t for t in chain.tags() if t != k]
            chain.arrange(rest + [k])
            copies[k] = chain.contract_last()
        left_tags = [k for k, s in zip(others, assignment) if s in "LB"]
        # copies stand in for their originals in the right context, in the search's order
        right_tags = [copies.get(k, k) for k, s in zip(others, assignment) if s in "RB"]
        if kept is not None:
            left_tags.append(kept)
        chain.arrange(left_tags + right_tags + [principal])
        top = GSProof(chain.sequent(), Rule.AND, (left_proof, right_proof))
        return chain.close(top)


def search_gs(
    s: Sequent,
    depth_bound: int,
    term_depth_bound: int,
    policy: Policy = Policy.FULL,
    signature: Optional[Signature] = None,
) -> Optional[GSProof]:
    """Find a GS proof of `s` within the bounds, or return None once the space is exhausted.

    Every proof returned passes `check_gs` and contracts only formulas the
    policy allows.
    """
    root = tuple(s)
    clash = sequent_bound_variables(root) & sequent_free_variables(root)
    if clash:
        logger.warning("sequent binds and frees %s; no Barendregt proof exists", ", ".join(sorted(clash)))
        return None
    logger.info(
        "searching %s (depth %d, terms %d, policy %s)", format_sequent(root), depth_bound, term_depth_bound, policy.value
    )
    search = _ProofSearch(root, term_depth_bound, policy, signature)
    proof = search.run(depth_bound)
    if proof is None:
        logger.info("search space exhausted after %d goals", search.explored)
    else:
        logger.info("proof found: %d nodes, height %d", proof.size(), proof.height())
    return proof
