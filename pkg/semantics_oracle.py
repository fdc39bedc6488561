"""
Finite-model validity oracle.

Enumerates every interpretation of the symbols occurring in a formula over
domains {0..n-1} and evaluates the formula in each. Exponential; meant for
small test formulas only.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field, replace
from typing import Dict, FrozenSet, Iterator, List, Mapping, Optional, Tuple

from fol_core import (
    And,
    App,
    Atom,
    Exists,
    Forall,
    Formula,
    NegAtom,
    Or,
    Term,
    Var,
    free_variables,
    literals,
    subterms,
)

logger = logging.getLogger(__name__)


class OracleError(Exception):
    code = "oracle-error"


class UnboundVariableError(OracleError):
    code = "unbound-free-variable"


class OpenFormulaError(OracleError):
    code = "nonempty-free-variable-set"


@dataclass(frozen=True)
class Interpretation:
    """Domain {0..size-1} with function tables, relation extensions and a variable environment."""

    size: int
    functions: Mapping[str, Mapping[Tuple[int, ...], int]] = field(default_factory=dict)
    relations: Mapping[str, FrozenSet[Tuple[int, ...]]] = field(default_factory=dict)
    environment: Mapping[str, int] = field(default_factory=dict)

    def bind(self, var: str, value: int) -> "Interpretation":
        return replace(self, environment={**self.environment, var: value})

    def describe(self) -> str:
        parts = [f"domain size {self.size}"]
        for name, table in sorted(self.functions.items()):
            parts.append(f"{name}: " + ", ".join(f"{args}->{v}" for args, v in sorted(table.items())))
        for name, ext in sorted(self.relations.items()):
            parts.append(f"{name}: {{{', '.join(str(t) for t in sorted(ext))}}}")
        return "; ".join(parts)


def evaluate_term(t: Term, m: Interpretation, env: Optional[Mapping[str, int]] = None) -> int:
    env = m.environment if env is None else env
    if isinstance(t, Var):
        if t.name not in env:
            raise UnboundVariableError(f"variable {t.name} has no value")
        return env[t.name]
    return m.functions[t.symbol][tuple(evaluate_term(a, m, env) for a in t.args)]


def _holds(f: Formula, m: Interpretation, env: Dict[str, int]) -> bool:
    if isinstance(f, (Atom, NegAtom)):
        value = tuple(evaluate_term(a, m, env) for a in f.args) in m.relations[f.relation]
        return value if isinstance(f, Atom) else not value
    if isinstance(f, And):
        return _holds(f.left, m, env) and _holds(f.right, m, env)
    if isinstance(f, Or):
        return _holds(f.left, m, env) or _holds(f.right, m, env)
    outer = env.get(f.var)
    had = f.var in env
    try:
        results = []
        for d in range(m.size):
            env[f.var] = d
            results.append(_holds(f.body, m, env))
            if isinstance(f, Forall) and not results[-1]:
                return False
            if isinstance(f, Exists) and results[-1]:
                return True
        return isinstance(f, Forall)
    finally:
        if had:
            env[f.var] = outer
        else:
            env.pop(f.var, None)


def evaluate(f: Formula, m: Interpretation) -> bool:
    missing = free_variables(f) - set(m.environment)
    if missing:
        raise UnboundVariableError(f"free variables without a value: {', '.join(sorted(missing))}")
    return _holds(f, m, dict(m.environment))


def symbols_of(f: Formula) -> Tuple[Dict[str, int], Dict[str, int]]:
    """(functions, relations) occurring in `f`, with arities, in name order."""
    functions: Dict[str, int] = {}
    relations: Dict[str, int] = {}
    for lit in literals(f):
        relations[lit.relation] = len(lit.args)
        for a in lit.args:
            for t in subterms(a):
                if isinstance(t, App):
                    functions[t.symbol] = len(t.args)
    return dict(sorted(functions.items())), dict(sorted(relations.items()))


def interpretations(functions: Mapping[str, int], relations: Mapping[str, int], size: int) -> Iterator[Interpretation]:
    """All interpretations over a domain of `size`, in lexicographic order of table choices."""
    points = {
        name: list(itertools.product(range(size), repeat=arity))
        for name, arity in list(functions.items()) + list(relations.items())
    }
    function_choices = [itertools.product(range(size), repeat=len(points[n])) for n in functions]
    relation_choices = [list(itertools.product((False, True), repeat=len(points[n]))) for n in relations]
    fnames: List[str] = list(functions)
    rnames: List[str] = list(relations)
    for fvalues in itertools.product(*function_choices):
        tables = {n: dict(zip(points[n], vals)) for n, vals in zip(fnames, fvalues)}
        for rvalues in itertools.product(*relation_choices):
            extensions = {
                n: frozenset(p for p, keep in zip(points[n], vals) if keep) for n, vals in zip(rnames, rvalues)
            }
            yield Interpretation(size, tables, extensions)


def find_countermodel(f: Formula, n_max: int) -> Optional[Interpretation]:
    """First interpretation with domain size at most `n_max` falsifying the closed formula `f`."""
    if free_variables(f):
        raise OpenFormulaError(f"formula has free variables: {', '.join(sorted(free_variables(f)))}")
    functions, relations = symbols_of(f)
    for size in range(1, n_max + 1):
        for m in interpretations(functions, relations, size):
            if not _holds(f, m, {}):
                logger.debug("countermodel found: %s", m.describe())
                return m
    return None


def valid_up_to(f: Formula, n_max: int) -> bool:
    return find_countermodel(f, n_max) is None
