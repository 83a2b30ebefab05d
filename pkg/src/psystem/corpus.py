"""Exhaustive enumeration of small formulas, used as the property-test oracle.

The alphabet is fixed: variables x1..x3 and X1..X3, terms ``f^k 0`` and
``f^k x`` with k <= 3.  Formulas are ordered by sign count, then by their
sign-code sequence.
"""
from __future__ import annotations

from functools import lru_cache
from typing import Iterator

from .codec import signs
from .syntax import Apply, ForAll, Formula, Not, Or, Term, X1, X2, X3, x1, x2, x3

MAX_CLI_SIGNS = 12
TERM_VARS = (x1, x2, x3)
APPLIERS = (X1, X2, X3)
BINDERS = (x1, x2, x3, X1, X2, X3)
MAX_SUCC = 3


class BudgetExceeded(ValueError):
    pass


def terms() -> list[Term]:
    return [Term(k, v) for k in range(MAX_SUCC + 1) for v in (None,) + TERM_VARS]


def _key(f: Formula) -> tuple:
    return tuple(signs(f).codes())


@lru_cache(maxsize=None)
def formulas_of_size(n: int) -> tuple:
    if n < 4:
        return ()
    out = [Apply(F, t) for F in APPLIERS for t in terms() if t.succ + 1 == n - 3]
    out += [Not(a) for a in formulas_of_size(n - 3)]
    out += [ForAll(v, a) for v in BINDERS for a in formulas_of_size(n - 4)]
    for left_size in range(4, n - 5 - 3):
        for a in formulas_of_size(left_size):
            for b in formulas_of_size(n - 5 - left_size):
                out.append(Or(a, b))
    return tuple(sorted(out, key=_key))


def formulas_up_to(max_signs: int) -> Iterator[Formula]:
    """Every formula with at most ``max_signs`` signs; no size cap."""
    for n in range(1, max_signs + 1):
        yield from formulas_of_size(n)


def enumerate_corpus(max_signs: int) -> Iterator[Formula]:
    if max_signs > MAX_CLI_SIGNS:
        raise BudgetExceeded(f"max_signs {max_signs} > {MAX_CLI_SIGNS}")
    return formulas_up_to(max_signs)
