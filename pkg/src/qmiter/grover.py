"""Search-based satisfiability solving of miter networks.

The pipeline follows the assembled network: amplitude amplification over the
input and auxiliary registers with the phase-marking miter as oracle, then one
final flip-oracle evaluation so every measured outcome carries its own answer
bit. Exhaustive mode reads exact probabilities off the statevector; shot mode
samples with a seeded generator.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

from . import simulator
from .clause_gen import CexRecord, ClauseError, ClauseNetwork, exclude_cex
from .oracle import check_cex
from .qcircuit import ResourceReport, assemble_search_network, count_resources, transpile

log = logging.getLogger(__name__)

EXHAUSTIVE_QUBIT_LIMIT = 22
UNSAT_MASS_TOLERANCE = 1e-12
_NONZERO = 1e-12


class SolveError(ValueError):
    pass


def grover_iterations(n: int, m: int) -> int:
    """Iteration count for an n-qubit search space with m marked states.

    Nearest integer of sqrt(2^n / m) / 2, floored at one iteration.
    """
    if not 1 <= m <= 2**n:
        raise SolveError(f"marked-state count {m} out of range for n={n}")
    return max(1, math.floor(0.5 * math.sqrt(2**n / m) + 0.5))


def analytic_success(n: int, m: int, gi: int) -> float:
    """Closed-form marked-state mass after gi iterations from uniform start."""
    if not 1 <= m <= 2**n:
        raise SolveError(f"marked-state count {m} out of range for n={n}")
    theta = math.asin(math.sqrt(m / 2**n))
    return math.sin((2 * gi + 1) * theta) ** 2


@dataclass(frozen=True)
class SolveConfig:
    cex_count_hint: int | None = None
    shots: int = 4096
    seed: int = 7
    exclusions: tuple[CexRecord, ...] = ()
    exhaustive: bool | None = None  # None: exact when the circuit is small enough
    qubit_cap: int | None = None
    transpile_mode: str = "auto"
    report_resources: bool = True
    keep_state: bool = False


@dataclass(frozen=True)
class SolveResult:
    verdict: str  # "SAT" | "UNSAT"
    conclusive: bool
    cexs: tuple[tuple[CexRecord, float, bool], ...]
    p_sat: float
    gi: int
    n_search: int
    cex_count_hint: int
    effective_cex_count: int
    exhaustive: bool
    shots: int | None
    seed: int | None
    excluded: tuple[CexRecord, ...]
    resources: ResourceReport | None
    final_state: "simulator.Statevector | None" = None

    def confirmed_records(self) -> tuple[CexRecord, ...]:
        return tuple(rec for rec, _, confirmed in self.cexs if confirmed)


def solve(cn: ClauseNetwork, cfg: SolveConfig) -> SolveResult:
    """Decide the miter and return confirmed counter-examples."""
    if cfg.cex_count_hint is None:
        raise SolveError("counter-example count hint is required")
    if cfg.cex_count_hint < 0:
        raise SolveError("counter-example count hint must be >= 0")

    base = cn.without_exclusions()
    augmented = cn
    for cex in cfg.exclusions:
        augmented = exclude_cex(augmented, cex)
    exclusions = augmented.cex_exclusions
    for cex in exclusions:
        if not check_cex(base, cex):
            log.warning(
                "excluded assignment %s is not a counter-example; "
                "iteration count may be off",
                cex.bitstring(),
            )

    n = cn.n_search
    m_eff = max(0, cfg.cex_count_hint - len(exclusions))
    gi = grover_iterations(n, m_eff) if m_eff >= 1 else 0
    network = assemble_search_network(augmented, gi)
    exhaustive = (
        cfg.exhaustive
        if cfg.exhaustive is not None
        else network.n_qubits <= EXHAUSTIVE_QUBIT_LIMIT
    )
    sv = simulator.run(network, cap=cfg.qubit_cap)

    regs = network.registers
    measured = list(regs.search) + [regs.answer]
    excluded_bits = {cex.bitstring() for cex in exclusions}
    names = augmented.var_order

    hits: list[tuple[CexRecord, float, bool]] = []
    if exhaustive:
        probs = simulator.marginal_probabilities(sv, measured)
        p_sat = 0.0
        for index in range(probs.size):
            if probs[index] <= _NONZERO or not index & 1:  # answer bit is last
                continue
            bits = format(index >> 1, f"0{n}b")
            if bits in excluded_bits:
                continue
            hits.append((CexRecord.from_bits(names, bits), float(probs[index]), True))
            p_sat += float(probs[index])
        shots_used = None
    else:
        outcomes = simulator.sample(sv, measured, cfg.shots, cfg.seed)
        p_sat = 0.0
        for outcome in outcomes:
            if outcome.bitstring[-1] != "1":
                continue
            bits = outcome.bitstring[:-1]
            if bits in excluded_bits:
                continue
            freq = outcome.counts / cfg.shots
            hits.append((CexRecord.from_bits(names, bits), freq, True))
            p_sat += freq
        shots_used = cfg.shots

    hits.sort(key=lambda item: item[0].bitstring())
    if exhaustive:
        verdict = "SAT" if p_sat >= UNSAT_MASS_TOLERANCE else "UNSAT"
        conclusive = True
    else:
        verdict = "SAT" if hits else "UNSAT"
        conclusive = verdict == "SAT"

    report = None
    if cfg.report_resources:
        lowered, report = transpile(
            network, cfg.transpile_mode, assume_zero=range(network.n_qubits)
        )
        report.gi = gi
    return SolveResult(
        verdict=verdict,
        conclusive=conclusive,
        cexs=tuple(hits),
        p_sat=p_sat,
        gi=gi,
        n_search=n,
        cex_count_hint=cfg.cex_count_hint,
        effective_cex_count=m_eff,
        exhaustive=exhaustive,
        shots=shots_used,
        seed=None if exhaustive else cfg.seed,
        excluded=exclusions,
        resources=report,
        final_state=sv if cfg.keep_state else None,
    )


def solve_excluding(cn: ClauseNetwork, cfg: SolveConfig) -> SolveResult:
    """solve() for a network with excluded counter-examples.

    Exclusions must already be present in the network or supplied through the
    config; genuine-counter-example validation happens inside solve().
    """
    if not cn.cex_exclusions and not cfg.exclusions:
        raise SolveError("solve_excluding called without any exclusions")
    return solve(cn, cfg)
