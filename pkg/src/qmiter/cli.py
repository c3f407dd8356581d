"""Command-line interface.

Subcommands: parse, clauses, oracle, resources, emit-qasm, solve, bench.
`solve` exits 0 when the circuits are equivalent (UNSAT), 1 when a
counter-example was found (SAT), 2 on any error.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from importlib import resources as importlib_resources
from pathlib import Path

from . import simulator
from .clause_gen import CexRecord, ClauseNetwork, build_miter, exclude_cex
from .grover import SolveConfig, SolveResult, grover_iterations, solve
from .netlist import Netlist, parse_netlist, render_netlist
from .oracle import enumerate_cex
from .qcircuit import (
    assemble_search_network,
    build_flip_oracle,
    build_phase_oracle,
    transpile,
)

SCHEMA_VERSION = 1
BENCHMARKS = ("and", "nand", "or", "nor", "xor", "xnor", "mux", "carry", "fa")
REF_STYLES = ("flat", "structured")


def corpus_path() -> Path:
    return Path(str(importlib_resources.files("qmiter") / "corpus"))


def _load(path: str | Path) -> Netlist:
    return parse_netlist(Path(path).read_text())


def _load_pair(args) -> tuple[Netlist, Netlist]:
    return _load(args.impl), _load(args.ref)


def _network(args) -> ClauseNetwork:
    impl, ref = _load_pair(args)
    cn = build_miter(impl, ref)
    for bits in getattr(args, "exclude", None) or []:
        cn = exclude_cex(cn, CexRecord.from_bits(cn.var_order, bits))
    return cn


def cmd_parse(args) -> int:
    net = _load(args.file)
    if args.json:
        payload = {
            "schema_version": SCHEMA_VERSION,
            "inputs": list(net.inputs),
            "nodes": [
                {"name": n.name, "kind": n.kind.value, "fanins": list(n.fanins)}
                for n in net.nodes
            ],
            "outputs": list(net.outputs),
        }
        print(json.dumps(payload, indent=2))
    else:
        sys.stdout.write(render_netlist(net))
    return 0


def cmd_clauses(args) -> int:
    cn = _network(args)
    for name, _ in cn.aux_defs:
        print(f"{name} = {cn.definition_text(name)}")
    print(f"top = {cn.top}")
    for cex in cn.cex_exclusions:
        print(f"exclude {cex.bitstring()}")
    return 0


def cmd_oracle(args) -> int:
    cn = _network(args)
    report = enumerate_cex(cn)
    if args.json:
        payload = {
            "schema_version": SCHEMA_VERSION,
            "equivalent": report.equivalent,
            "cex_count": report.cex_count,
            "variables": list(cn.var_order),
            "counterexamples": [c.bitstring() for c in report.cex_list],
        }
        print(json.dumps(payload, indent=2))
    else:
        print(f"equivalent: {'yes' if report.equivalent else 'no'}")
        print(f"counter-examples: {report.cex_count}")
        if report.cex_list:
            print("  " + " ".join(cn.var_order))
            for cex in report.cex_list:
                print("  " + "  ".join(str(b) for b in cex.bits))
    return 0


def _resource_payload(args, cn: ClauseNetwork, m: int) -> dict:
    gi = grover_iterations(cn.n_search, m)
    network = assemble_search_network(cn, gi)
    _, report = transpile(network, args.mode, assume_zero=range(network.n_qubits))
    report.gi = gi
    return {
        "schema_version": SCHEMA_VERSION,
        "qubits": report.q,
        "aux": len(cn.aux_defs),
        "gi": report.gi,
        "cx": report.cx,
        "u": report.u,
        "depth": report.depth,
        "cex_count": m,
    }


def cmd_resources(args) -> int:
    cn = _network(args)
    m = args.m if args.m is not None else enumerate_cex(cn).cex_count
    if m < 1:
        print("error: the miter is unsatisfiable, no iteration count exists", file=sys.stderr)
        return 2
    payload = _resource_payload(args, cn, m)
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            writer = csv.DictWriter(fh, fieldnames=list(payload))
            writer.writeheader()
            writer.writerow(payload)
    print(json.dumps(payload, indent=2))
    return 0


def cmd_emit_qasm(args) -> int:
    cn = _network(args)
    if args.form == "flip":
        circuit = build_flip_oracle(cn)
        assume = circuit.registers.scratch if circuit.registers else ()
    elif args.form == "phase":
        circuit = build_phase_oracle(cn)
        assume = circuit.registers.scratch if circuit.registers else ()
    else:
        m = args.m if args.m is not None else enumerate_cex(cn).cex_count
        if m < 1:
            print("error: unsatisfiable miter has no search network", file=sys.stderr)
            return 2
        circuit = assemble_search_network(cn, grover_iterations(cn.n_search, m))
        assume = range(circuit.n_qubits)
    lowered, _ = transpile(circuit, args.mode, assume_zero=assume)
    text = emit_qasm(lowered)
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


def emit_qasm(circuit) -> str:
    lines = [
        "OPENQASM 3.0;",
        'include "stdgates.inc";',
        f"qubit[{circuit.n_qubits}] q;",
    ]
    for gate in circuit.gates:
        if gate.kind == "x":
            lines.append(f"x q[{gate.target}];")
        elif gate.kind == "h":
            lines.append(f"h q[{gate.target}];")
        elif gate.kind == "p":
            lines.append(f"p({gate.theta!r}) q[{gate.target}];")
        elif gate.kind == "cx" and gate.controls[0][1]:
            lines.append(f"cx q[{gate.controls[0][0]}], q[{gate.target}];")
        else:
            raise ValueError(f"circuit is not in the emit basis: {gate}")
    return "\n".join(lines) + "\n"


def _result_payload(cn: ClauseNetwork, result: SolveResult) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "verdict": result.verdict,
        "conclusive": result.conclusive,
        "p_sat": result.p_sat,
        "gi": result.gi,
        "search_qubits": result.n_search,
        "cex_count_hint": result.cex_count_hint,
        "effective_cex_count": result.effective_cex_count,
        "exhaustive": result.exhaustive,
        "shots": result.shots,
        "seed": result.seed,
        "variables": list(cn.var_order),
        "counterexamples": [
            {"bits": rec.bitstring(), "frequency": freq, "confirmed": confirmed}
            for rec, freq, confirmed in result.cexs
        ],
        "excluded": [rec.bitstring() for rec in result.excluded],
        "resources": result.resources.as_dict() if result.resources else None,
    }


def cmd_solve(args) -> int:
    cn = _network(args)
    m = args.m if args.m is not None else enumerate_cex(cn.without_exclusions()).cex_count
    cfg = SolveConfig(
        cex_count_hint=m,
        shots=args.shots,
        seed=args.seed,
        exhaustive=True if args.exhaustive else None,
        qubit_cap=args.qubit_cap,
        transpile_mode=args.mode,
        keep_state=bool(args.dump_state),
    )
    result = solve(cn, cfg)
    if args.dump_state and result.final_state is not None:
        simulator.save_statevector(result.final_state, args.dump_state)
    print(json.dumps(_result_payload(cn, result), indent=2))
    return 1 if result.verdict == "SAT" else 0


@dataclass
class BenchRow:
    name: str
    ref_style: str
    q: int
    aux: int
    gi: int
    cx: int
    u: int
    depth: int
    cex_count: int
    p_sat: float | None
    note: str = ""
    improv_q: float | None = None
    improv_cx: float | None = None
    improv_u: float | None = None
    improv_depth: float | None = None


CSV_COLUMNS = [
    "name", "ref_style", "q", "aux", "gi", "cx", "u", "depth",
    "cex_count", "p_sat", "improv_q", "improv_cx", "improv_u", "improv_depth",
]


def bench_row(
    corpus: Path,
    name: str,
    style: str,
    mode: str,
    shots: int,
    seed: int,
    simulate: bool,
    qubit_cap: int | None = None,
) -> BenchRow:
    impl = _load(corpus / f"{name}_impl.nl")
    ref = _load(corpus / f"{name}_ref_{style}.nl")
    cn = build_miter(impl, ref)
    m = enumerate_cex(cn).cex_count
    gi = grover_iterations(cn.n_search, m)
    network = assemble_search_network(cn, gi)
    _, report = transpile(network, mode, assume_zero=range(network.n_qubits))
    report.gi = gi

    p_sat, note = None, ""
    if simulate:
        cap = simulator.qubit_cap(qubit_cap)
        if network.n_qubits > cap:
            note = f"skipped: {network.n_qubits} qubits exceed cap {cap}"
        else:
            cfg = SolveConfig(
                cex_count_hint=m,
                shots=shots,
                seed=seed,
                qubit_cap=qubit_cap,
                report_resources=False,
            )
            p_sat = solve(cn, cfg).p_sat
    else:
        note = "simulation skipped"
    return BenchRow(
        name=name.upper(),
        ref_style=style,
        q=report.q,
        aux=len(cn.aux_defs),
        gi=gi,
        cx=report.cx,
        u=report.u,
        depth=report.depth,
        cex_count=m,
        p_sat=p_sat,
        note=note,
    )


def run_bench(
    corpus: Path,
    styles=REF_STYLES,
    mode: str = "auto",
    shots: int = 4096,
    seed: int = 7,
    include_fa: bool = False,
    qubit_cap: int | None = None,
    workers: int = 4,
) -> list[BenchRow]:
    jobs = [
        (name, style, include_fa or name != "fa")
        for name in BENCHMARKS
        for style in styles
    ]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        rows = list(
            pool.map(
                lambda job: bench_row(
                    corpus, job[0], job[1], mode, shots, seed, job[2], qubit_cap
                ),
                jobs,
            )
        )
    baseline = {row.name: row for row in rows if row.ref_style == "flat"}
    for row in rows:
        if row.ref_style != "flat" or len(styles) == 1:
            base = baseline.get(row.name, row if len(styles) == 1 else None)
            if base is None or base is row:
                continue
            row.improv_q = 100.0 * (base.q - row.q) / base.q
            row.improv_cx = 100.0 * (base.cx - row.cx) / base.cx
            row.improv_u = 100.0 * (base.u - row.u) / base.u
            row.improv_depth = 100.0 * (base.depth - row.depth) / base.depth
    return rows


def _fmt(value, places=2) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return f"{value:.{places}f}"
    return str(value)


def cmd_bench(args) -> int:
    corpus = Path(args.corpus) if args.corpus else corpus_path()
    styles = REF_STYLES if args.ref_style == "both" else (args.ref_style,)
    rows = run_bench(
        corpus,
        styles=styles,
        mode=args.mode,
        shots=args.shots,
        seed=args.seed,
        include_fa=args.include_fa,
        qubit_cap=args.qubit_cap,
    )
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(CSV_COLUMNS)
            for row in rows:
                writer.writerow(
                    [_fmt(getattr(row, col), 6 if col == "p_sat" else 2) for col in CSV_COLUMNS]
                )
    if args.json:
        payload = {
            "schema_version": SCHEMA_VERSION,
            "rows": [
                {col: getattr(row, col) for col in CSV_COLUMNS} | {"note": row.note}
                for row in rows
            ],
        }
        print(json.dumps(payload, indent=2))
        return 0
    header = ["name", "style", "q", "|A|", "GI", "#CX", "#U", "#D", "#CEX", "P(SAT)", "impr q%", "note"]
    print("  ".join(f"{h:>8}" for h in header))
    for row in rows:
        cells = [
            row.name, row.ref_style[:6], row.q, row.aux, row.gi, row.cx, row.u,
            row.depth, row.cex_count,
            _fmt(row.p_sat, 4), _fmt(row.improv_q), row.note,
        ]
        print("  ".join(f"{str(c) if c is not None else '':>8}" for c in cells))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qmiter",
        description="Equivalence checking of Boolean netlists by quantum search",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_pair(p):
        p.add_argument("impl", help="netlist under test")
        p.add_argument("ref", help="reference netlist")
        p.add_argument(
            "--exclude", action="append", metavar="BITS",
            help="assignment to exclude, input then auxiliary bits",
        )

    p = sub.add_parser("parse", help="validate a netlist and echo its canonical form")
    p.add_argument("file")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_parse)

    p = sub.add_parser("clauses", help="dump the miter clause network")
    add_pair(p)
    p.set_defaults(func=cmd_clauses)

    p = sub.add_parser("oracle", help="brute-force counter-example enumeration")
    add_pair(p)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("resources", help="quantum resource report for the miter")
    add_pair(p)
    p.add_argument("--m", type=int, help="counter-example count (default: oracle)")
    p.add_argument("--mode", default="auto", choices=["v-chain", "v-chain-dirty", "auto"])
    p.add_argument("--csv", metavar="PATH")
    p.set_defaults(func=cmd_resources)

    p = sub.add_parser("emit-qasm", help="transpile and write OpenQASM text")
    add_pair(p)
    p.add_argument("--form", default="flip", choices=["flip", "phase", "search"])
    p.add_argument("--m", type=int)
    p.add_argument("--mode", default="auto", choices=["v-chain", "v-chain-dirty", "auto"])
    p.add_argument("-o", "--output", metavar="PATH")
    p.set_defaults(func=cmd_emit_qasm)

    p = sub.add_parser("solve", help="run the search pipeline on a miter")
    add_pair(p)
    p.add_argument("--m", type=int, help="counter-example count hint (default: oracle)")
    p.add_argument("--shots", type=int, default=4096)
    p.add_argument("--seed", type=int, default=7)
    p.add_argument("--exhaustive", action="store_true", help="force exact probabilities")
    p.add_argument("--mode", default="auto", choices=["v-chain", "v-chain-dirty", "auto"])
    p.add_argument("--qubit-cap", type=int, help="override the simulator qubit cap")
    p.add_argument("--dump-state", metavar="PATH", help="write the final statevector")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("bench", help="reproduce the benchmark table on the corpus")
    p.add_argument("--corpus", metavar="DIR", help="corpus directory (default: bundled)")
    p.add_argument("--csv", metavar="PATH")
    p.add_argument("--json", action="store_true")
    p.add_argument("--ref-style", default="both", choices=["flat", "structured", "both"])
    p.add_argument("--shots", type=int, default=4096)
    p.add_argument("--seed", type=int, default=7)
    p.add_argument("--mode", default="auto", choices=["v-chain", "v-chain-dirty", "auto"])
    p.add_argument("--include-fa", action="store_true", help="also simulate the two-output adder rows")
    p.add_argument("--qubit-cap", type=int)
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except Exception as exc:  # surface everything as exit 2 with a diagnostic
        print(f"error: {exc}", file=sys.stderr)
        return 2


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
