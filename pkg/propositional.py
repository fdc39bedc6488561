"""
Truth-table tautology checking for quantifier-free formulas.

Atoms are distinct modulo syntactic identity of terms. Assignments are
enumerated in chunks of rows evaluated as numpy boolean columns, stopping at
the first falsifying row.
"""

from __future__ import annotations

import logging
from typing import Dict, List, Optional, Tuple

import numpy as np

from fol_core import And, Atom, Formula, NegAtom, Or, Term, is_quantifier_free

logger = logging.getLogger(__name__)

AtomKey = Tuple[str, Tuple[Term, ...]]

CHUNK_ROWS = 1 << 16
MAX_ATOMS = 30


class PropositionalError(Exception):
    code = "propositional-error"


class QuantifierInMatrixError(PropositionalError):
    code = "formula-contains-quantifier"


class TooManyAtomsError(PropositionalError):
    code = "too-many-atoms"


def atom_key(lit) -> AtomKey:
    return (lit.relation, lit.args)


def atom_label(key: AtomKey) -> str:
    return str(Atom(*key))


def atom_keys(f: Formula) -> List[AtomKey]:
    """Distinct atoms in order of first occurrence."""
    seen: Dict[AtomKey, None] = {}

    def walk(g: Formula) -> None:
        if isinstance(g, (Atom, NegAtom)):
            seen.setdefault(atom_key(g), None)
        else:
            walk(g.left)
            walk(g.right)

    walk(f)
    return list(seen)


def _evaluate(f: Formula, rows: np.ndarray, index: Dict[AtomKey, int], cache: Dict[int, np.ndarray]) -> np.ndarray:
    if isinstance(f, (Atom, NegAtom)):
        i = index[atom_key(f)]
        column = cache.get(i)
        if column is None:
            column = ((rows >> i) & 1).astype(bool)
            cache[i] = column
        return column if isinstance(f, Atom) else ~column
    left = _evaluate(f.left, rows, index, cache)
    right = _evaluate(f.right, rows, index, cache)
    return left & right if isinstance(f, And) else left | right


def falsifying_assignment(f: Formula) -> Optional[Dict[AtomKey, bool]]:
    """Return the first falsifying assignment in enumeration order, or None for a tautology."""
    if not is_quantifier_free(f):
        raise QuantifierInMatrixError(f"not quantifier-free: {f}")
    keys = atom_keys(f)
    if len(keys) > MAX_ATOMS:
        raise TooManyAtomsError(f"{len(keys)} distinct atoms exceed the truth-table limit of {MAX_ATOMS}")
    index = {key: i for i, key in enumerate(keys)}
    total = 1 << len(keys)
    logger.debug("truth table over %d atoms (%d rows)", len(keys), total)
    for start in range(0, total, CHUNK_ROWS):
        rows = np.arange(start, min(start + CHUNK_ROWS, total), dtype=np.int64)
        values = _evaluate(f, rows, index, {})
        if not values.all():
            row = int(rows[int(np.argmin(values))])
            return {key: bool((row >> i) & 1) for i, key in enumerate(keys)}
    return None


def is_tautology(f: Formula) -> bool:
    return falsifying_assignment(f) is None
