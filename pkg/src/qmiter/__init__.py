"""Equivalence checking of Boolean netlists by quantum search.

Netlists compile into ESOP clause networks, clause networks into miter
circuits, and a Grover-style pipeline finds the assignments on which two
circuits disagree. A classical brute-force oracle cross-validates every
result.
"""

from .clause_gen import (
    CexRecord,
    ClauseError,
    ClauseNetwork,
    EsopExpr,
    build_clauses,
    build_miter,
    esop_of_gate,
    exclude_cex,
    make_esop,
)
from .grover import (
    SolveConfig,
    SolveError,
    SolveResult,
    analytic_success,
    grover_iterations,
    solve,
    solve_excluding,
)
from .netlist import (
    GateKind,
    GateNode,
    Netlist,
    NetlistError,
    evaluate,
    fault_inject,
    input_assignments,
    parse_netlist,
    render_netlist,
)
from .oracle import OracleReport, check_cex, enumerate_cex
from .qcircuit import (
    CircuitError,
    QCircuit,
    QGate,
    QubitBudgetError,
    Registers,
    ResourceReport,
    assemble_search_network,
    build_diffuser,
    build_flip_oracle,
    build_phase_oracle,
    resources,
    transpile,
)
from .simulator import (
    MeasurementOutcome,
    QubitCapError,
    SimulationError,
    Statevector,
    probabilities,
    run,
    run_basis,
    sample,
    unitary,
)

__version__ = "0.1.0"
