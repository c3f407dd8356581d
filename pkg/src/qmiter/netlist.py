"""Gate-level Boolean netlists: parsing, evaluation, fault injection.

A netlist is a topologically ordered list of gate nodes over named inputs.
The text format is line based and diff friendly:

    # optional comments
    inputs x1 x2 x3
    n1 = AND(x1, x2)
    n2 = AND(n1, x3)
    outputs n2
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from typing import Iterable, Mapping


class NetlistError(ValueError):
    """Raised for malformed netlist text or invalid netlist structure."""

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class GateKind(enum.Enum):
    NOT = "NOT"
    AND = "AND"
    NAND = "NAND"
    OR = "OR"
    NOR = "NOR"
    XOR = "XOR"
    XNOR = "XNOR"
    ITE = "ITE"
    MAJ = "MAJ"

    def valid_arity(self, k: int) -> bool:
        if self is GateKind.NOT:
            return k == 1
        if self in (GateKind.ITE, GateKind.MAJ):
            return k == 3
        return k >= 2

    def arity_requirement(self) -> str:
        if self is GateKind.NOT:
            return "exactly 1"
        if self in (GateKind.ITE, GateKind.MAJ):
            return "exactly 3"
        return "at least 2"

    def eval(self, bits: tuple[int, ...]) -> int:
        if self is GateKind.NOT:
            return bits[0] ^ 1
        if self is GateKind.AND:
            return int(all(bits))
        if self is GateKind.NAND:
            return int(not all(bits))
        if self is GateKind.OR:
            return int(any(bits))
        if self is GateKind.NOR:
            return int(not any(bits))
        if self is GateKind.XOR:
            x = 0
            for b in bits:
                x ^= b
            return x
        if self is GateKind.XNOR:
            x = 1
            for b in bits:
                x ^= b
            return x
        if self is GateKind.ITE:
            # selector first: high selects the third fan-in, low the second
            return bits[2] if bits[0] else bits[1]
        if self is GateKind.MAJ:
            return int(sum(bits) >= 2)
        raise AssertionError(self)


@dataclass(frozen=True)
class GateNode:
    name: str
    kind: GateKind
    fanins: tuple[str, ...]


@dataclass(frozen=True)
class Netlist:
    inputs: tuple[str, ...]
    nodes: tuple[GateNode, ...]
    outputs: tuple[str, ...]

    def node_map(self) -> dict[str, GateNode]:
        return {n.name: n for n in self.nodes}

    def validate(self) -> None:
        if not self.inputs:
            raise NetlistError("netlist declares no inputs")
        if not self.outputs:
            raise NetlistError("netlist declares no outputs")
        seen: set[str] = set()
        for name in self.inputs:
            if name in seen:
                raise NetlistError(f"duplicate name {name!r}")
            seen.add(name)
        later = {n.name for n in self.nodes}
        for node in self.nodes:
            if node.name in seen:
                raise NetlistError(f"duplicate name {node.name!r}")
            if not node.kind.valid_arity(len(node.fanins)):
                raise NetlistError(
                    f"{node.kind.value} takes {node.kind.arity_requirement()} "
                    f"fan-ins, got {len(node.fanins)} in {node.name!r}"
                )
            for ref in node.fanins:
                if ref not in seen:
                    if ref in later:
                        raise NetlistError(
                            f"cyclic reference: {node.name!r} uses {ref!r} "
                            "which is not defined yet"
                        )
                    raise NetlistError(f"undefined fan-in {ref!r} in {node.name!r}")
            seen.add(node.name)
            later.discard(node.name)
        for out in self.outputs:
            if out not in seen:
                raise NetlistError(f"undefined output {out!r}")


_NAME = r"[A-Za-z_][A-Za-z0-9_]*"
_GATE_LINE = re.compile(
    rf"^(?P<name>{_NAME})\s*=\s*(?P<kind>{_NAME})\s*\((?P<args>[^()]*)\)$"
)


def parse_netlist(text: str) -> Netlist:
    """Parse netlist source text, validating structure as it is read."""
    inputs: tuple[str, ...] | None = None
    outputs: tuple[str, ...] | None = None
    nodes: list[GateNode] = []
    defined: set[str] = set()
    node_lines: dict[str, int] = {}

    lines = text.splitlines()
    pending = [
        (i + 1, line.split("#", 1)[0].strip())
        for i, line in enumerate(lines)
    ]
    pending = [(no, line) for no, line in pending if line]
    if not pending:
        raise NetlistError("empty netlist")

    # names of all gate lines, so a forward reference reads as a cycle
    declared_nodes = set()
    for _, line in pending:
        m = _GATE_LINE.match(line)
        if m is not None:
            declared_nodes.add(m.group("name"))

    for lineno, line in pending:
        fields = line.split()
        if fields[0] == "inputs":
            if inputs is not None:
                raise NetlistError("duplicate inputs directive", lineno)
            if nodes or outputs is not None:
                raise NetlistError("inputs directive must come first", lineno)
            if len(fields) < 2:
                raise NetlistError("inputs directive names no variables", lineno)
            inputs = tuple(fields[1:])
            for name in inputs:
                _check_name(name, lineno)
                if name in defined:
                    raise NetlistError(f"duplicate name {name!r}", lineno)
                defined.add(name)
            continue
        if fields[0] == "outputs":
            if inputs is None:
                raise NetlistError("expected an inputs directive first", lineno)
            if outputs is not None:
                raise NetlistError("duplicate outputs directive", lineno)
            if len(fields) < 2:
                raise NetlistError("outputs directive names no variables", lineno)
            outputs = tuple(fields[1:])
            for name in outputs:
                if name not in defined:
                    raise NetlistError(f"undefined output {name!r}", lineno)
            continue
        if outputs is not None:
            raise NetlistError("gate definition after outputs directive", lineno)
        if inputs is None:
            raise NetlistError("expected an inputs directive first", lineno)

        m = _GATE_LINE.match(line)
        if m is None:
            raise NetlistError(f"cannot parse {line!r}", lineno)
        name = m.group("name")
        _check_name(name, lineno)
        try:
            kind = GateKind(m.group("kind"))
        except ValueError:
            raise NetlistError(f"unknown gate kind {m.group('kind')!r}", lineno)
        args = tuple(a.strip() for a in m.group("args").split(",") if a.strip())
        if name in defined:
            raise NetlistError(f"duplicate name {name!r}", lineno)
        if not kind.valid_arity(len(args)):
            raise NetlistError(
                f"{kind.value} takes {kind.arity_requirement()} fan-ins, "
                f"got {len(args)}",
                lineno,
            )
        for ref in args:
            if ref not in defined:
                if ref == name or ref in declared_nodes:
                    raise NetlistError(f"cyclic reference to {ref!r}", lineno)
                raise NetlistError(f"undefined fan-in {ref!r}", lineno)
        nodes.append(GateNode(name, kind, args))
        node_lines[name] = lineno
        defined.add(name)

    if inputs is None:
        raise NetlistError("missing inputs directive")
    if outputs is None:
        raise NetlistError("missing outputs directive")
    net = Netlist(inputs, tuple(nodes), outputs)
    net.validate()
    return net


def _check_name(name: str, lineno: int) -> None:
    if not re.fullmatch(_NAME, name):
        raise NetlistError(f"invalid name {name!r}", lineno)
    if name in ("inputs", "outputs"):
        raise NetlistError(f"reserved word {name!r} used as a name", lineno)


def render_netlist(net: Netlist) -> str:
    """Render a netlist back into its canonical text form."""
    lines = ["inputs " + " ".join(net.inputs)]
    for node in net.nodes:
        lines.append(f"{node.name} = {node.kind.value}({','.join(node.fanins)})")
    lines.append("outputs " + " ".join(net.outputs))
    return "\n".join(lines) + "\n"


def evaluate(net: Netlist, assignment: Mapping[str, int]) -> dict[str, int]:
    """Evaluate all outputs of `net` under the given input assignment."""
    values: dict[str, int] = {}
    for name in net.inputs:
        if name not in assignment:
            raise NetlistError(f"missing input value for {name!r}")
        values[name] = int(assignment[name]) & 1
    for node in net.nodes:
        bits = tuple(values[f] for f in node.fanins)
        values[node.name] = node.kind.eval(bits)
    return {out: values[out] for out in net.outputs}


def evaluate_all(net: Netlist, assignment: Mapping[str, int]) -> dict[str, int]:
    """Like evaluate() but returns every node value, not just the outputs."""
    values: dict[str, int] = {}
    for name in net.inputs:
        if name not in assignment:
            raise NetlistError(f"missing input value for {name!r}")
        values[name] = int(assignment[name]) & 1
    for node in net.nodes:
        bits = tuple(values[f] for f in node.fanins)
        values[node.name] = node.kind.eval(bits)
    return values


def fault_inject(net: Netlist, node_name: str, new_kind: GateKind) -> Netlist:
    """Return a copy of `net` with one node's gate kind replaced."""
    replaced = False
    nodes = []
    for node in net.nodes:
        if node.name == node_name:
            if not new_kind.valid_arity(len(node.fanins)):
                raise NetlistError(
                    f"{new_kind.value} takes {new_kind.arity_requirement()} "
                    f"fan-ins, node {node_name!r} has {len(node.fanins)}"
                )
            nodes.append(GateNode(node.name, new_kind, node.fanins))
            replaced = True
        else:
            nodes.append(node)
    if not replaced:
        raise NetlistError(f"unknown node {node_name!r}")
    return Netlist(net.inputs, tuple(nodes), net.outputs)


def input_assignments(net: Netlist) -> Iterable[dict[str, int]]:
    """All input assignments in ascending order of the input bit vector.

    The first declared input is the most significant bit.
    """
    k = len(net.inputs)
    for value in range(2**k):
        yield {
            name: (value >> (k - 1 - i)) & 1 for i, name in enumerate(net.inputs)
        }
