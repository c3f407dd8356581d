"""Quantum circuit IR, miter-oracle builders, and basis-gate transpilation.

Register layout for a clause network with k inputs and l auxiliaries:

    [0, k)        input qubits (search space)
    [k, k+l)      auxiliary qubits (search space)
    [k+l, k+2l)   scratch qubits, one per clause, |0> at entry
    k+2l          answer qubit

Each clause maps onto its scratch qubit as one flip per ESOP product term;
the scratch qubit then holds 1 exactly when the clause is satisfied. A final
multi-controlled flip (top auxiliary positive, every scratch positive) writes
the miter outcome onto the answer qubit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Iterable, Sequence

from .clause_gen import ClauseNetwork

BASIS_GATES = ("x", "h", "p", "cx")


class CircuitError(ValueError):
    pass


class QubitBudgetError(CircuitError):
    """A multi-controlled gate cannot borrow enough helper qubits."""


@dataclass(frozen=True)
class QGate:
    kind: str  # one of x, h, p, cx, mcx
    target: int
    controls: tuple[tuple[int, bool], ...] = ()
    theta: float = 0.0

    def __post_init__(self):
        if self.kind in ("x", "h", "p"):
            if self.controls:
                raise CircuitError(f"{self.kind} gate takes no controls")
        elif self.kind == "cx":
            if len(self.controls) != 1:
                raise CircuitError("cx takes exactly one control")
        elif self.kind == "mcx":
            if len(self.controls) < 2:
                raise CircuitError("mcx takes at least two controls")
        else:
            raise CircuitError(f"unknown gate kind {self.kind!r}")
        qubits = [q for q, _ in self.controls]
        if len(set(qubits)) != len(qubits) or self.target in qubits:
            raise CircuitError(f"overlapping qubits in {self.kind} gate")

    @property
    def qubits(self) -> tuple[int, ...]:
        return tuple(q for q, _ in self.controls) + (self.target,)


def x(q: int) -> QGate:
    return QGate("x", q)


def h(q: int) -> QGate:
    return QGate("h", q)


def p(q: int, theta: float) -> QGate:
    return QGate("p", q, theta=theta)


def cx(control: int, target: int, positive: bool = True) -> QGate:
    return QGate("cx", target, ((control, positive),))


def mcx(controls: Sequence[tuple[int, bool] | int], target: int) -> QGate:
    ctl = tuple((c, True) if isinstance(c, int) else (c[0], bool(c[1])) for c in controls)
    if len(ctl) == 0:
        return x(target)
    if len(ctl) == 1:
        return QGate("cx", target, ctl)
    return QGate("mcx", target, ctl)


@dataclass(frozen=True)
class Registers:
    n_inputs: int
    n_aux: int

    @property
    def n_qubits(self) -> int:
        return self.n_inputs + 2 * self.n_aux + 1

    @property
    def answer(self) -> int:
        return self.n_inputs + 2 * self.n_aux

    @property
    def search(self) -> range:
        return range(self.n_inputs + self.n_aux)

    @property
    def scratch(self) -> range:
        base = self.n_inputs + self.n_aux
        return range(base, base + self.n_aux)

    def scratch_for(self, clause_index: int) -> int:
        return self.n_inputs + self.n_aux + clause_index


@dataclass(frozen=True)
class QCircuit:
    n_qubits: int
    gates: tuple[QGate, ...]
    registers: Registers | None = None

    def __post_init__(self):
        for g in self.gates:
            if g.target >= self.n_qubits or any(q >= self.n_qubits for q, _ in g.controls):
                raise CircuitError(f"gate {g} out of range for {self.n_qubits} qubits")

    def extended(self, gates: Iterable[QGate]) -> "QCircuit":
        return replace(self, gates=self.gates + tuple(gates))


@dataclass
class ResourceReport:
    q: int
    cx: int
    u: int
    depth: int
    gi: int = 0

    def as_dict(self) -> dict[str, int]:
        return {"q": self.q, "gi": self.gi, "cx": self.cx, "u": self.u, "depth": self.depth}


def _var_qubits(cn: ClauseNetwork) -> dict[str, int]:
    return {name: i for i, name in enumerate(cn.var_order)}


def _clause_gates(cn: ClauseNetwork, regs: Registers) -> list[QGate]:
    """Flips computing every clause's satisfaction bit onto its scratch qubit."""
    qubit = _var_qubits(cn)
    gates: list[QGate] = []
    for j, (_, expr) in enumerate(cn.aux_defs):
        e = regs.scratch_for(j)
        if expr.constant:
            gates.append(x(e))
        for term in expr.terms:
            gates.append(mcx([(qubit[name], pos) for name, pos in term], e))
    return gates


def _answer_gates(cn: ClauseNetwork, regs: Registers) -> list[QGate]:
    """Flips of the answer qubit: miter top, then one per excluded assignment."""
    if cn.top is None:
        return []
    qubit = _var_qubits(cn)
    consistency = [(e, True) for e in regs.scratch]
    gates = [mcx([(qubit[cn.top], True)] + consistency, regs.answer)]
    for cex in cn.cex_exclusions:
        pattern = [(qubit[name], bool(bit)) for name, bit in zip(cex.names, cex.bits)]
        gates.append(mcx(pattern + consistency, regs.answer))
    return gates


def build_flip_oracle(cn: ClauseNetwork) -> QCircuit:
    """Miter circuit that writes the outcome onto the answer qubit.

    Scratch qubits keep their clause values afterwards, which is what makes
    the final measurement self-verifying: the answer bit is 1 exactly on
    satisfying consistent assignments.
    """
    regs = Registers(len(cn.inputs), len(cn.aux_defs))
    gates = _clause_gates(cn, regs) + _answer_gates(cn, regs)
    return QCircuit(regs.n_qubits, tuple(gates), regs)


def build_phase_oracle(cn: ClauseNetwork) -> QCircuit:
    """Miter circuit with uncomputed scratch qubits.

    With the answer qubit prepared in the |-> state the net effect on the
    search registers is a sign flip on satisfying consistent assignments;
    every scratch qubit returns to its entry state.
    """
    regs = Registers(len(cn.inputs), len(cn.aux_defs))
    forward = _clause_gates(cn, regs)
    middle = _answer_gates(cn, regs)
    gates = forward + middle + list(reversed(forward))
    return QCircuit(regs.n_qubits, tuple(gates), regs)


def build_diffuser(n: int) -> QCircuit:
    """Inversion about the mean on qubits [0, n)."""
    if n < 1:
        raise CircuitError("diffuser needs at least one qubit")
    gates: list[QGate] = [h(q) for q in range(n)]
    gates += [x(q) for q in range(n)]
    gates.append(h(n - 1))
    gates.append(mcx([(q, True) for q in range(n - 1)], n - 1))
    gates.append(h(n - 1))
    gates += [x(q) for q in range(n)]
    gates += [h(q) for q in range(n)]
    return QCircuit(n, tuple(gates))


def assemble_search_network(cn: ClauseNetwork, iterations: int) -> QCircuit:
    """Full search pipeline over the miter network.

    Prepares the answer qubit in |->, spreads the search registers with
    Hadamards, runs `iterations` rounds of phase oracle plus diffuser,
    returns the answer qubit to |0>, and finishes with the unexcluded flip
    oracle so the measured answer bit certifies each outcome.
    """
    regs = Registers(len(cn.inputs), len(cn.aux_defs))
    n = len(regs.search)
    gates: list[QGate] = [x(regs.answer), h(regs.answer)]
    gates += [h(q) for q in regs.search]
    if iterations > 0:
        oracle_gates = build_phase_oracle(cn).gates
        diffuser_gates = build_diffuser(n).gates if n >= 1 else ()
        for _ in range(iterations):
            gates += list(oracle_gates)
            gates += list(diffuser_gates)
    gates += [h(regs.answer), x(regs.answer)]
    gates += list(build_flip_oracle(cn.without_exclusions()).gates)
    return QCircuit(regs.n_qubits, tuple(gates), regs)


# --- transpilation to the {x, h, p, cx} basis -------------------------------

_QUARTER = math.pi / 4


def _toffoli(a: int, b: int, t: int) -> list[QGate]:
    # standard 6-CX realization; phases written as p(+-pi/4)
    return [
        h(t),
        cx(b, t), p(t, -_QUARTER),
        cx(a, t), p(t, _QUARTER),
        cx(b, t), p(t, -_QUARTER),
        cx(a, t), p(b, _QUARTER), p(t, _QUARTER),
        h(t),
        cx(a, b), p(a, _QUARTER), p(b, -_QUARTER),
        cx(a, b),
    ]


def _clean_chain(controls: list[int], target: int, helpers: list[int]) -> list[QGate]:
    k = len(controls)
    ladder = [(controls[0], controls[1], helpers[0])]
    for i in range(k - 3):
        ladder.append((controls[i + 2], helpers[i], helpers[i + 1]))
    gates: list[QGate] = []
    for a, b, t in ladder:
        gates += _toffoli(a, b, t)
    gates += _toffoli(controls[-1], helpers[k - 3], target)
    for a, b, t in reversed(ladder):
        gates += _toffoli(a, b, t)
    return gates


def _dirty_chain(controls: list[int], target: int, helpers: list[int]) -> list[QGate]:
    # two sweeps; borrowed qubits end in whatever state they carried
    k = len(controls)
    descend = [(controls[j], helpers[j - 2], helpers[j - 1]) for j in range(k - 2, 1, -1)]

    def one_pass() -> list[QGate]:
        gates: list[QGate] = []
        gates += _toffoli(controls[-1], helpers[k - 3], target)
        for a, b, t in descend:
            gates += _toffoli(a, b, t)
        gates += _toffoli(controls[0], controls[1], helpers[0])
        for a, b, t in reversed(descend):
            gates += _toffoli(a, b, t)
        return gates

    return one_pass() + one_pass()


def _lower_mcx(
    gate: QGate,
    n_qubits: int,
    mode: str,
    known_zero: set[int],
) -> list[QGate]:
    controls = [q for q, _ in gate.controls]
    negative = [q for q, pos in gate.controls if not pos]
    out: list[QGate] = [x(q) for q in negative]
    k = len(controls)
    if k == 1:
        out.append(cx(controls[0], gate.target))
    elif k == 2:
        out += _toffoli(controls[0], controls[1], gate.target)
    else:
        used = set(gate.qubits)
        free = [q for q in range(n_qubits) if q not in used]
        need = k - 2
        if len(free) < need:
            raise QubitBudgetError(
                f"mcx with {k} controls needs {need} helper qubits, "
                f"only {len(free)} available in a {n_qubits}-qubit circuit"
            )
        clean = [q for q in free if q in known_zero]
        if mode == "v-chain-dirty":
            helpers, dirty = free[:need], True
        elif mode == "v-chain":
            # trust the caller: prefer known-zero helpers, fill with the rest
            helpers = (clean + [q for q in free if q not in known_zero])[:need]
            dirty = False
        elif mode == "auto":
            if len(clean) >= need:
                helpers, dirty = clean[:need], False
            else:
                helpers, dirty = free[:need], True
        else:
            raise CircuitError(f"unknown transpile mode {mode!r}")
        chain = _dirty_chain if dirty else _clean_chain
        out += chain(controls, gate.target, helpers)
    out += [x(q) for q in negative]
    return out


def circuit_depth(gates: Sequence[QGate]) -> int:
    """Longest path when gates on disjoint qubits share a layer."""
    frontier: dict[int, int] = {}
    depth = 0
    for gate in gates:
        layer = 1 + max((frontier.get(q, 0) for q in gate.qubits), default=0)
        for q in gate.qubits:
            frontier[q] = layer
        depth = max(depth, layer)
    return depth


def count_resources(qc: QCircuit) -> ResourceReport:
    n_cx = sum(1 for g in qc.gates if g.kind == "cx")
    n_u = sum(1 for g in qc.gates if g.kind in ("x", "h", "p"))
    return ResourceReport(qc.n_qubits, n_cx, n_u, circuit_depth(qc.gates))


def transpile(
    qc: QCircuit,
    mode: str = "auto",
    assume_zero: Iterable[int] = (),
) -> tuple[QCircuit, ResourceReport]:
    """Rewrite onto the {x, h, p, cx} basis.

    Multi-controlled flips become Toffoli chains borrowing helper qubits:
    a clean chain when the helpers are known to hold |0>, a dirty chain
    (restoring arbitrary helper states) otherwise. `assume_zero` seeds the
    known-|0> tracking; without it only dirty chains are eligible in auto
    mode, which stays correct on every input.
    """
    if mode not in ("auto", "v-chain", "v-chain-dirty"):
        raise CircuitError(f"unknown transpile mode {mode!r}")
    known_zero = {q for q in assume_zero if q < qc.n_qubits}
    out: list[QGate] = []
    for gate in qc.gates:
        if gate.kind in ("x", "h"):
            out.append(gate)
            known_zero.discard(gate.target)
        elif gate.kind == "p":
            out.append(gate)  # phase keeps |0> fixed
        elif gate.kind == "cx":
            (ctrl, positive), = gate.controls
            if positive:
                out.append(gate)
            else:
                out += [x(ctrl), cx(ctrl, gate.target), x(ctrl)]
            known_zero.discard(gate.target)
        else:
            was_zero = known_zero.copy()
            out += _lower_mcx(gate, qc.n_qubits, mode, known_zero)
            # negative-control wrappers and borrowed helpers end restored
            known_zero = was_zero
            known_zero.discard(gate.target)
    lowered = QCircuit(qc.n_qubits, tuple(out), qc.registers)
    return lowered, count_resources(lowered)


def resources(impl, ref, cex_count: int, mode: str = "auto") -> ResourceReport:
    """Resource report for the full search network of a miter."""
    from .clause_gen import build_miter
    from .grover import grover_iterations

    if cex_count < 1:
        raise CircuitError("resource analysis needs a counter-example count >= 1")
    cn = build_miter(impl, ref)
    gi = grover_iterations(cn.n_search, cex_count)
    network = assemble_search_network(cn, gi)
    _, report = transpile(network, mode, assume_zero=range(network.n_qubits))
    report.gi = gi
    return report
