"""Brute-force ground truth for clause networks.

Enumerates input assignments only; auxiliary values are forced by propagation,
so the work is 2^|inputs| rather than 2^(|inputs|+|aux|). Counter-examples are
ordered by the input bit vector read as an unsigned integer (first declared
input is the most significant bit).
"""

from __future__ import annotations

from dataclasses import dataclass

from .clause_gen import CexRecord, ClauseError, ClauseNetwork

ENUMERATION_BOUND = 24


@dataclass(frozen=True)
class OracleReport:
    cex_list: tuple[CexRecord, ...]
    cex_count: int
    equivalent: bool


def enumerate_cex(cn: ClauseNetwork) -> OracleReport:
    """List every satisfying consistent assignment of the miter."""
    k = len(cn.inputs)
    if k > ENUMERATION_BOUND:
        raise ClauseError(
            f"enumeration bound exceeded: {k} inputs > {ENUMERATION_BOUND}"
        )
    found = []
    for value in range(2**k):
        env = cn.propagate(
            {name: (value >> (k - 1 - i)) & 1 for i, name in enumerate(cn.inputs)}
        )
        if cn.top_value(env) == 1:
            found.append(CexRecord.from_assignment(cn.var_order, env))
    return OracleReport(tuple(found), len(found), not found)


def check_cex(cn: ClauseNetwork, cex: CexRecord) -> bool:
    """True iff the assignment satisfies every clause and the miter top."""
    if set(cex.names) != set(cn.var_order) or len(cex.names) != len(cn.var_order):
        raise ClauseError(
            f"assignment must cover exactly {', '.join(cn.var_order)}"
        )
    env = cex.assignment
    return cn.consistent(env) and cn.top_value(env) == 1
