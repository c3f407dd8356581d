"""ESOP clause networks: per-gate constraints, miters, counter-example exclusion.

Each gate node gets one auxiliary variable `a` plus one constraint expressed in
exclusive-sum-of-products form. The stored expression is the *satisfaction*
form: it evaluates to 1 exactly on assignments where `a` equals the gate
output. Disjunction-like gates use the cheap `a xor (and of negated fan-ins)`
shape; everything else uses `1 xor a xor <gate esop>`. Both shapes map onto a
single scratch qubit later, one multi-controlled flip per product term.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Iterable, Mapping, Sequence

from .netlist import GateKind, Netlist

Literal = tuple[str, bool]  # (variable name, positive polarity)


class ClauseError(ValueError):
    pass


@dataclass(frozen=True)
class EsopExpr:
    """XOR of product terms with an optional constant-1 term."""

    constant: int
    terms: tuple[tuple[Literal, ...], ...]

    def evaluate(self, env: Mapping[str, int]) -> int:
        value = self.constant
        for term in self.terms:
            value ^= int(all(env[name] == int(pos) for name, pos in term))
        return value

    def variables(self) -> set[str]:
        return {name for term in self.terms for name, _ in term}

    def __str__(self) -> str:
        parts = ["1"] if self.constant else []
        for term in self.terms:
            lits = [name if pos else f"~{name}" for name, pos in term]
            parts.append(lits[0] if len(lits) == 1 else "(" + " & ".join(lits) + ")")
        return " ^ ".join(parts) if parts else "0"


def make_esop(constant: int, terms: Iterable[Sequence[Literal]]) -> EsopExpr:
    """Normalize: drop contradictory terms, dedupe literals, cancel term pairs."""
    counted: dict[tuple[Literal, ...], int] = {}
    order: list[tuple[Literal, ...]] = []
    for term in terms:
        lits: dict[str, bool] = {}
        contradictory = False
        for name, pos in term:
            if name in lits and lits[name] != pos:
                contradictory = True
                break
            lits[name] = pos
        if contradictory:
            continue
        key = tuple(sorted(lits.items()))
        if key not in counted:
            counted[key] = 0
            order.append(key)
        counted[key] ^= 1
    kept = tuple(t for t in order if counted[t])
    return EsopExpr(constant & 1, kept)


def _neg(lits: Sequence[Literal]) -> list[Literal]:
    return [(name, not pos) for name, pos in lits]


def esop_of_gate(kind: GateKind, aux: str, fanins: Sequence[str | Literal]) -> EsopExpr:
    """Constraint `aux equals kind(fanins)` as an ESOP over aux and fan-ins."""
    lits: list[Literal] = [
        (f, True) if isinstance(f, str) else (f[0], bool(f[1])) for f in fanins
    ]
    if not kind.valid_arity(len(lits)):
        raise ClauseError(
            f"{kind.value} takes {kind.arity_requirement()} fan-ins, got {len(lits)}"
        )
    p: Literal = (aux, True)
    if kind is GateKind.OR:
        return make_esop(0, [[p], _neg(lits)])
    if kind is GateKind.NOR:
        return make_esop(1, [[p], _neg(lits)])
    if kind is GateKind.AND:
        return make_esop(1, [[p], lits])
    if kind is GateKind.NAND:
        return make_esop(0, [[p], lits])
    if kind is GateKind.XOR:
        return make_esop(1, [[p]] + [[l] for l in lits])
    if kind is GateKind.XNOR:
        return make_esop(0, [[p]] + [[l] for l in lits])
    if kind is GateKind.NOT:
        return make_esop(0, [[p], [lits[0]]])
    if kind is GateKind.ITE:
        s, a, b = lits
        return make_esop(1, [[p], [a], [s, a], [s, b]])
    if kind is GateKind.MAJ:
        a, b, c = lits
        return make_esop(1, [[p], [a, b], [a, c], [b, c]])
    raise ClauseError(f"unsupported gate kind {kind!r}")


@dataclass(frozen=True)
class CexRecord:
    """One counter-example: bits for every input and auxiliary variable."""

    names: tuple[str, ...]
    bits: tuple[int, ...]

    @property
    def assignment(self) -> dict[str, int]:
        return dict(zip(self.names, self.bits))

    def bitstring(self) -> str:
        return "".join(str(b) for b in self.bits)

    @staticmethod
    def from_bits(names: Sequence[str], bits: str | Sequence[int]) -> "CexRecord":
        values = tuple(int(b) for b in bits)
        if len(values) != len(names) or any(v not in (0, 1) for v in values):
            raise ClauseError(
                f"expected {len(names)} bits for variables {', '.join(names)}"
            )
        return CexRecord(tuple(names), values)

    @staticmethod
    def from_assignment(
        names: Sequence[str], assignment: Mapping[str, int]
    ) -> "CexRecord":
        missing = [n for n in names if n not in assignment]
        extra = [n for n in assignment if n not in names]
        if missing or extra:
            raise ClauseError(
                f"assignment must cover exactly {', '.join(names)}"
                + (f"; missing {missing}" if missing else "")
                + (f"; unexpected {extra}" if extra else "")
            )
        return CexRecord(tuple(names), tuple(int(assignment[n]) & 1 for n in names))


@dataclass(frozen=True)
class ClauseNetwork:
    """Ordered auxiliary definitions plus the miter top variable."""

    inputs: tuple[str, ...]
    aux_defs: tuple[tuple[str, EsopExpr], ...]
    top: str | None
    cex_exclusions: tuple[CexRecord, ...] = field(default_factory=tuple)

    @property
    def aux_names(self) -> tuple[str, ...]:
        return tuple(name for name, _ in self.aux_defs)

    @property
    def var_order(self) -> tuple[str, ...]:
        """Canonical variable order: inputs first, then auxiliaries."""
        return self.inputs + self.aux_names

    @property
    def n_search(self) -> int:
        return len(self.inputs) + len(self.aux_defs)

    def propagate(self, input_assignment: Mapping[str, int]) -> dict[str, int]:
        """The unique consistent assignment extending the given input values."""
        env = {name: int(input_assignment[name]) & 1 for name in self.inputs}
        for name, expr in self.aux_defs:
            # the satisfaction form yields 1 at the defined value of the aux
            env[name] = 1
            if expr.evaluate(env) != 1:
                env[name] = 0
        return env

    def consistent(self, env: Mapping[str, int]) -> bool:
        return all(expr.evaluate(env) == 1 for _, expr in self.aux_defs)

    def top_value(self, env: Mapping[str, int], with_exclusions: bool = True) -> int:
        if self.top is None:
            return 0
        value = env[self.top]
        if with_exclusions:
            for cex in self.cex_exclusions:
                value ^= int(all(env[n] == b for n, b in zip(cex.names, cex.bits)))
        return value

    def without_exclusions(self) -> "ClauseNetwork":
        return replace(self, cex_exclusions=())

    def definition_text(self, aux: str) -> str:
        """The defining expression of one auxiliary, solved for the aux."""
        for name, expr in self.aux_defs:
            if name == aux:
                terms = [t for t in expr.terms if t != ((name, True),)]
                return str(EsopExpr(expr.constant ^ 1, tuple(terms)))
        raise ClauseError(f"unknown auxiliary {aux!r}")


def build_clauses(net: Netlist, prefix: str = "") -> tuple[tuple[str, EsopExpr], ...]:
    """One auxiliary definition per gate node, in topological order."""
    input_set = set(net.inputs)
    defs = []
    for node in net.nodes:
        fanins = [f if f in input_set else prefix + f for f in node.fanins]
        defs.append((prefix + node.name, esop_of_gate(node.kind, prefix + node.name, fanins)))
    return tuple(defs)


def _output_var(net: Netlist, name: str, prefix: str) -> str:
    return name if name in net.inputs else prefix + name


def build_miter(impl: Netlist, ref: Netlist) -> ClauseNetwork:
    """Assemble the difference network of two circuits over shared inputs.

    Single output: one XOR auxiliary asserting the outputs differ. Multiple
    outputs: per-output XOR auxiliaries aggregated by an OR auxiliary.
    """
    if impl.inputs != ref.inputs:
        raise ClauseError(
            f"input mismatch: {impl.inputs} vs {ref.inputs}"
        )
    if len(impl.outputs) != len(ref.outputs):
        raise ClauseError(
            f"output count mismatch: {len(impl.outputs)} vs {len(ref.outputs)}"
        )
    defs = list(build_clauses(impl, "i_")) + list(build_clauses(ref, "r_"))
    pairs = [
        (_output_var(impl, a, "i_"), _output_var(ref, b, "r_"))
        for a, b in zip(impl.outputs, ref.outputs)
    ]
    if len(pairs) == 1:
        b, c = pairs[0]
        defs.append(("diff", esop_of_gate(GateKind.XOR, "diff", [b, c])))
        top = "diff"
    else:
        diff_names = []
        for k, (b, c) in enumerate(pairs, start=1):
            name = f"diff_{impl.outputs[k - 1]}"
            defs.append((name, esop_of_gate(GateKind.XOR, name, [b, c])))
            diff_names.append(name)
        defs.append(("any_diff", esop_of_gate(GateKind.OR, "any_diff", diff_names)))
        top = "any_diff"
    names = [n for n, _ in defs]
    if len(set(names)) != len(names) or set(names) & set(impl.inputs):
        raise ClauseError("auxiliary name collision while assembling miter")
    return ClauseNetwork(impl.inputs, tuple(defs), top)


def exclude_cex(cn: ClauseNetwork, cex: CexRecord) -> ClauseNetwork:
    """Fold one counter-example out of the miter outcome (new network)."""
    if set(cex.names) != set(cn.var_order) or len(cex.names) != len(cn.var_order):
        raise ClauseError(
            f"exclusion must cover exactly {', '.join(cn.var_order)}"
        )
    canonical = CexRecord.from_assignment(cn.var_order, cex.assignment)
    if canonical in cn.cex_exclusions:
        raise ClauseError(f"duplicate exclusion {canonical.bitstring()}")
    return replace(cn, cex_exclusions=cn.cex_exclusions + (canonical,))
