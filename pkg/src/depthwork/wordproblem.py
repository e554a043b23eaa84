"""Deciding whether a relation is a consequence of a relation set.

Used by the Tietze moves: first try Knuth-Bendix completion (a confluent
system decides the word problem outright), then congruence enumeration (a
closed table decides it); otherwise report inconclusive.
"""

from __future__ import annotations

from .budgets import Budgets
from .presentations import Relation, Word


def consequence(
    relations: tuple[Relation, ...],
    pair: tuple[Word, Word],
    n_generators: int,
    budgets: Budgets | None = None,
) -> bool | None:
    """True / False when decidable within budgets, None when not."""
    from .congruence import _Enumerator
    from .rewriting import knuth_bendix_raw

    if budgets is None:
        budgets = Budgets()
    u, v = tuple(pair[0]), tuple(pair[1])
    if u == v:
        return True

    rs = knuth_bendix_raw(n_generators, relations, budgets.kb_rule_budget)
    if rs.confluent:
        return rs.normal_form(u) == rs.normal_form(v)

    size_budget = budgets.size_budget if budgets.size_budget is not None else 10_000
    table = _Enumerator.raw(n_generators, relations, size_budget, budgets.step_budget).run()
    if table.closed:
        return table.class_of(u) == table.class_of(v)
    return None
