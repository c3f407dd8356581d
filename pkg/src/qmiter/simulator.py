"""Dense statevector simulation of quantum circuits.

Qubit 0 is the most significant bit of the amplitude index, so the bitstring
of a basis state reads left to right in qubit order. Gates are applied with
reshaped views of the flat amplitude array; multi-controlled flips touch only
the selected slice, which keeps wide circuits affordable.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from math import sqrt
from typing import Iterable, Sequence

import numpy as np

from .qcircuit import QCircuit, QGate

DEFAULT_QUBIT_CAP = 26
_RSQRT2 = 1.0 / sqrt(2.0)


class SimulationError(ValueError):
    pass


class QubitCapError(SimulationError):
    pass


def qubit_cap(override: int | None = None) -> int:
    if override is not None:
        return override
    env = os.environ.get("QSAT_QUBIT_CAP")
    return int(env) if env else DEFAULT_QUBIT_CAP


@dataclass
class Statevector:
    n_qubits: int
    amplitudes: np.ndarray

    @staticmethod
    def basis(n_qubits: int, index: int = 0) -> "Statevector":
        amps = np.zeros(2**n_qubits, dtype=np.complex128)
        amps[index] = 1.0
        return Statevector(n_qubits, amps)

    def norm(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self.amplitudes) ** 2)))

    def copy(self) -> "Statevector":
        return Statevector(self.n_qubits, self.amplitudes.copy())


class _Engine:
    """Gate kernels over amplitude data with reusable scratch buffers.

    `data` is a flat array holding `batch` state vectors side by side: entry
    (basis_index, column) lives at basis_index * batch + column. Kernels slice
    with a trailing batch axis, so the single-state case is just batch == 1.
    """

    def __init__(self, data: np.ndarray, n_qubits: int, batch: int = 1):
        self.data = data
        self.n = n_qubits
        self.batch = batch
        self._buf_a: np.ndarray | None = None
        self._buf_b: np.ndarray | None = None

    def _scratch(self, size: int) -> tuple[np.ndarray, np.ndarray]:
        if self._buf_a is None or self._buf_a.size < size:
            self._buf_a = np.empty(size, dtype=np.complex128)
            self._buf_b = np.empty(size, dtype=np.complex128)
        return self._buf_a[:size], self._buf_b[:size]

    def _swap(self, a: np.ndarray, b: np.ndarray) -> None:
        tmp, _ = self._scratch(a.size)
        tmp = tmp.reshape(a.shape)
        np.copyto(tmp, a)
        np.copyto(a, b)
        np.copyto(b, tmp)

    def apply(self, gate: QGate) -> None:
        q = gate.target
        if gate.kind in ("x", "h", "p"):
            view = self.data.reshape(2**q, 2, -1)
            if gate.kind == "x":
                self._swap(view[:, 0, :], view[:, 1, :])
            elif gate.kind == "h":
                a, b = view[:, 0, :], view[:, 1, :]
                ra, rb = self._scratch(a.size)
                ra, rb = ra.reshape(a.shape), rb.reshape(a.shape)
                np.multiply(a, _RSQRT2, out=ra)
                np.multiply(b, _RSQRT2, out=rb)
                np.add(ra, rb, out=a)
                np.subtract(ra, rb, out=b)
            else:
                view[:, 1, :] *= np.exp(1j * gate.theta)
        elif gate.kind in ("cx", "mcx"):
            view = self.data.reshape((2,) * self.n + (self.batch,))
            sel: list = [slice(None)] * (self.n + 1)
            for c, positive in gate.controls:
                sel[c] = 1 if positive else 0
            zero, one = list(sel), list(sel)
            zero[q] = 0
            one[q] = 1
            self._swap(view[tuple(zero)], view[tuple(one)])
        else:
            raise SimulationError(f"unknown gate kind {gate.kind!r}")


def apply_gate(sv: Statevector, gate: QGate) -> None:
    _Engine(sv.amplitudes, sv.n_qubits).apply(gate)


def run(
    qc: QCircuit,
    initial: int | str | Sequence[int] = 0,
    cap: int | None = None,
) -> Statevector:
    """Execute the circuit from a basis state and return the final state."""
    limit = qubit_cap(cap)
    if qc.n_qubits > limit:
        raise QubitCapError(
            f"{qc.n_qubits} qubits exceed the simulator cap of {limit} "
            "(set QSAT_QUBIT_CAP to raise it)"
        )
    sv = Statevector.basis(qc.n_qubits, _as_index(qc.n_qubits, initial))
    engine = _Engine(sv.amplitudes, qc.n_qubits)
    for gate in qc.gates:
        if gate.target >= qc.n_qubits or any(c >= qc.n_qubits for c, _ in gate.controls):
            raise SimulationError(f"gate {gate} out of range for {qc.n_qubits} qubits")
        engine.apply(gate)
    return sv


def run_basis(qc: QCircuit, initial: int | str | Sequence[int] = 0) -> int:
    """Propagate a basis state through a permutation-only circuit.

    Valid only for circuits built from x/cx/mcx gates; these map basis states
    to basis states, so the result is exact at any width.
    """
    n = qc.n_qubits
    state = _as_index(n, initial)
    for gate in qc.gates:
        if gate.kind == "x":
            state ^= 1 << (n - 1 - gate.target)
        elif gate.kind in ("cx", "mcx"):
            fire = all(
                ((state >> (n - 1 - q)) & 1) == int(pos) for q, pos in gate.controls
            )
            if fire:
                state ^= 1 << (n - 1 - gate.target)
        else:
            raise SimulationError(
                f"{gate.kind} gate is not a basis-state permutation"
            )
    return state


def _as_index(n: int, initial: int | str | Sequence[int]) -> int:
    if isinstance(initial, int):
        index = initial
    elif isinstance(initial, str):
        index = int(initial, 2) if initial else 0
    else:
        index = 0
        for bit in initial:
            index = (index << 1) | (int(bit) & 1)
    if not 0 <= index < 2**n:
        raise SimulationError(f"initial state {initial!r} out of range for {n} qubits")
    return index


def marginal_probabilities(sv: Statevector, qubits: Sequence[int]) -> np.ndarray:
    """Probability array over the listed qubits, in their listed order."""
    if len(qubits) == 0:
        raise SimulationError("empty qubit subset")
    if len(set(qubits)) != len(qubits):
        raise SimulationError("duplicate qubits in subset")
    n = sv.n_qubits
    probs = np.abs(sv.amplitudes.reshape((2,) * n)) ** 2
    keep = list(qubits)
    drop = tuple(q for q in range(n) if q not in set(keep))
    if drop:
        probs = probs.sum(axis=drop)
    remaining = [q for q in range(n) if q in set(keep)]
    order = [remaining.index(q) for q in keep]
    return probs.transpose(order).reshape(-1)


def probabilities(sv: Statevector, qubits: Sequence[int]) -> dict[str, float]:
    """Marginal distribution over a qubit subset as bitstring -> probability."""
    probs = marginal_probabilities(sv, qubits)
    width = len(qubits)
    return {format(i, f"0{width}b"): float(p) for i, p in enumerate(probs)}


@dataclass(frozen=True)
class MeasurementOutcome:
    bitstring: str
    probability: float
    counts: int


def sample(
    sv: Statevector, qubits: Sequence[int], shots: int, seed: int
) -> list[MeasurementOutcome]:
    """Sample the marginal distribution; deterministic for a given seed."""
    if shots < 1:
        raise SimulationError("shots must be >= 1")
    probs = marginal_probabilities(sv, qubits)
    rng = np.random.default_rng(seed)
    drawn = rng.choice(len(probs), size=shots, p=probs / probs.sum())
    values, counts = np.unique(drawn, return_counts=True)
    width = len(qubits)
    return [
        MeasurementOutcome(format(int(v), f"0{width}b"), float(probs[v]), int(c))
        for v, c in sorted(zip(values, counts))
    ]


def unitary(qc: QCircuit, cap: int = 14, block: int = 32) -> np.ndarray:
    """Dense unitary of the circuit, reconstructed in column blocks."""
    if qc.n_qubits > cap:
        raise QubitCapError(f"unitary reconstruction capped at {cap} qubits")
    dim = 2**qc.n_qubits
    block = min(block, dim)
    mat = np.empty((dim, dim), dtype=np.complex128)
    for start in range(0, dim, block):
        width = min(block, dim - start)
        state = np.zeros(dim * width, dtype=np.complex128)
        cols = state.reshape(dim, width)
        cols[np.arange(start, start + width), np.arange(width)] = 1.0
        engine = _Engine(state, qc.n_qubits, width)
        for gate in qc.gates:
            engine.apply(gate)
        mat[:, start : start + width] = cols
    return mat


def states_allclose(a: np.ndarray, b: np.ndarray, tol: float = 1e-9) -> bool:
    """Equality of two state vectors or matrices up to one global phase."""
    a = np.asarray(a).reshape(-1)
    b = np.asarray(b).reshape(-1)
    if a.shape != b.shape:
        return False
    idx = int(np.argmax(np.abs(a)))
    if abs(a[idx]) < tol and abs(b[idx]) < tol:
        return bool(np.allclose(a, b, atol=tol))
    if abs(b[idx]) == 0:
        return False
    phase = a[idx] / b[idx]
    phase /= abs(phase)
    return bool(np.max(np.abs(a - phase * b)) <= tol)


def save_statevector(sv: Statevector, path: str) -> None:
    """Dump amplitudes as little-endian float64 pairs (re, im)."""
    sv.amplitudes.astype("<c16").tofile(path)


def load_statevector(path: str) -> Statevector:
    amps = np.fromfile(path, dtype="<c16").astype(np.complex128)
    n = int(amps.size).bit_length() - 1
    if 2**n != amps.size:
        raise SimulationError(f"corrupt statevector dump: {amps.size} amplitudes")
    return Statevector(n, amps)
