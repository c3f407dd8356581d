import itertools

import pytest
from hypothesis import given, strategies as st

from qmiter.netlist import (
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

AND_SRC = """
inputs x1 x2 x3
a1 = AND(x1,x2)
a2 = AND(a1,x3)
outputs a2
"""


def test_parse_basic_chain():
    net = parse_netlist(AND_SRC)
    assert net.inputs == ("x1", "x2", "x3")
    assert [n.name for n in net.nodes] == ["a1", "a2"]
    assert net.nodes[0].kind is GateKind.AND
    assert net.outputs == ("a2",)
    for a in input_assignments(net):
        assert evaluate(net, a)["a2"] == (a["x1"] & a["x2"] & a["x3"])


def test_parse_wire_only():
    net = parse_netlist("inputs x1\noutputs x1\n")
    assert net.nodes == ()
    assert evaluate(net, {"x1": 1}) == {"x1": 1}


def test_parse_comments_and_whitespace():
    src = "# top\ninputs x1 x2\n\nn1 = AND( x1 , x2 )  # and gate\noutputs n1\n"
    net = parse_netlist(src)
    assert net.nodes[0].fanins == ("x1", "x2")


@pytest.mark.parametrize(
    "src, fragment",
    [
        ("inputs x1 x2\na1 = AND(x1)\noutputs a1", "at least 2"),
        ("inputs x1\na1 = NOT(x1,x1)\noutputs a1", "exactly 1"),
        ("inputs x1 x2 x3\na1 = ITE(x1,x2)\noutputs a1", "exactly 3"),
        ("inputs x1 x2\nx1 = AND(x1,x2)\noutputs x1", "duplicate"),
        ("inputs x1\na1 = AND(x1,zz)\noutputs a1", "undefined fan-in"),
        ("inputs x1\na1 = AND(x1,a2)\na2 = AND(x1,a1)\noutputs a2", "cyclic"),
        ("inputs x1\na1 = AND(x1,a1)\noutputs a1", "cyclic"),
        ("inputs x1\na1 = FROB(x1)\noutputs a1", "unknown gate kind"),
        ("inputs x1\noutputs a9", "undefined output"),
        ("inputs x1\nthis is not a line\noutputs x1", "cannot parse"),
        ("outputs x1", "inputs"),
    ],
)
def test_parse_errors(src, fragment):
    with pytest.raises(NetlistError) as err:
        parse_netlist(src)
    assert fragment in str(err.value)


def test_parse_error_reports_line_number():
    with pytest.raises(NetlistError, match="line 3"):
        parse_netlist("inputs x1\n# fine\na1 = AND(x1)\noutputs a1")


def test_evaluate_missing_input():
    net = parse_netlist(AND_SRC)
    with pytest.raises(NetlistError, match="missing input"):
        evaluate(net, {"x1": 1, "x2": 0})


def test_evaluate_mux_selects_third_when_high():
    net = parse_netlist(
        "inputs x1 x2 x3\n"
        "n1 = NOT(x1)\nn2 = AND(n1,x2)\nn3 = AND(x1,x3)\nn4 = OR(n2,n3)\n"
        "outputs n4"
    )
    assert evaluate(net, {"x1": 1, "x2": 0, "x3": 1})["n4"] == 1
    ite = parse_netlist("inputs x1 x2 x3\nn1 = ITE(x1,x2,x3)\noutputs n1")
    for a in input_assignments(net):
        assert evaluate(net, a)["n4"] == evaluate(ite, a)["n1"]


def test_ite_selector_low_passes_second():
    net = parse_netlist("inputs s a b\nn1 = ITE(s,a,b)\noutputs n1")
    for a, b in itertools.product((0, 1), repeat=2):
        assert evaluate(net, {"s": 0, "a": a, "b": b})["n1"] == a
        assert evaluate(net, {"s": 1, "a": a, "b": b})["n1"] == b


def test_majority_agrees_with_carry_formula():
    maj = parse_netlist("inputs x1 x2 x3\nn1 = MAJ(x1,x2,x3)\noutputs n1")
    for a in input_assignments(maj):
        x1, x2, x3 = a["x1"], a["x2"], a["x3"]
        carry = ((x1 ^ x2) & x3) | (x1 & x2)
        assert evaluate(maj, a)["n1"] == carry


def test_gate_truth_tables():
    cases = {
        GateKind.AND: lambda bits: all(bits),
        GateKind.NAND: lambda bits: not all(bits),
        GateKind.OR: lambda bits: any(bits),
        GateKind.NOR: lambda bits: not any(bits),
        GateKind.XOR: lambda bits: sum(bits) % 2 == 1,
        GateKind.XNOR: lambda bits: sum(bits) % 2 == 0,
    }
    for kind, fn in cases.items():
        for arity in (2, 3):
            for bits in itertools.product((0, 1), repeat=arity):
                assert kind.eval(bits) == int(fn(bits)), (kind, bits)
    assert GateKind.NOT.eval((0,)) == 1 and GateKind.NOT.eval((1,)) == 0


def test_fault_inject_first_and_becomes_nor(corpus):
    ref = corpus("and_ref_flat")
    faulty = fault_inject(ref, "n1", GateKind.NOR)
    assert faulty == corpus("and_impl")


def test_fault_inject_same_kind_is_identity(corpus):
    ref = corpus("or_ref_flat")
    assert fault_inject(ref, "n1", GateKind.OR) == ref


def test_fault_inject_errors(corpus):
    ref = corpus("and_ref_flat")
    with pytest.raises(NetlistError, match="unknown node"):
        fault_inject(ref, "zz", GateKind.OR)
    with pytest.raises(NetlistError, match="exactly 1"):
        fault_inject(ref, "n1", GateKind.NOT)


def test_inverted_parity_fault_differs_everywhere(corpus):
    ref = corpus("xor_ref_flat")
    faulty = fault_inject(ref, "n1", GateKind.XNOR)
    assert faulty == corpus("xor_impl")
    diffs = sum(
        evaluate(faulty, a) != evaluate(ref, a) for a in input_assignments(ref)
    )
    assert diffs == 8


def test_adder_corpus_carries_both_faults(corpus):
    ref = corpus("fa_ref_flat")
    faulty = fault_inject(fault_inject(ref, "n1", GateKind.XNOR), "n3", GateKind.NOR)
    assert faulty == corpus("fa_impl")


CORPUS_DIFF_COUNTS = {
    "and": 2, "nand": 2, "or": 1, "nor": 3, "xor": 8,
    "xnor": 6, "mux": 6, "carry": 4, "fa": 8,
}


@pytest.mark.parametrize("bench", sorted(CORPUS_DIFF_COUNTS))
@pytest.mark.parametrize("style", ["flat", "structured"])
def test_corpus_pair_difference_counts(corpus, bench, style):
    impl = corpus(f"{bench}_impl")
    ref = corpus(f"{bench}_ref_{style}")
    diffs = 0
    for a in input_assignments(impl):
        got = list(evaluate(impl, a).values())
        want = list(evaluate(ref, a).values())
        diffs += got != want
    assert diffs == CORPUS_DIFF_COUNTS[bench]


@pytest.mark.parametrize("bench", sorted(CORPUS_DIFF_COUNTS))
def test_reference_styles_are_functionally_equal(corpus, bench):
    flat = corpus(f"{bench}_ref_flat")
    structured = corpus(f"{bench}_ref_structured")
    for a in input_assignments(flat):
        assert list(evaluate(flat, a).values()) == list(evaluate(structured, a).values())


# random well-formed netlists for the round-trip property
_names = st.sampled_from(["n1", "n2", "n3", "n4", "g", "out", "t0"])


@st.composite
def netlists(draw):
    n_inputs = draw(st.integers(1, 3))
    inputs = tuple(f"x{i}" for i in range(1, n_inputs + 1))
    available = list(inputs)
    nodes = []
    for i in range(draw(st.integers(0, 4))):
        kind = draw(st.sampled_from(list(GateKind)))
        if kind is GateKind.NOT:
            arity = 1
        elif kind in (GateKind.ITE, GateKind.MAJ):
            arity = 3
        else:
            arity = draw(st.integers(2, 3))
        fanins = tuple(
            draw(st.sampled_from(available)) for _ in range(arity)
        )
        name = f"v{i}"
        nodes.append(GateNode(name, kind, fanins))
        available.append(name)
    outputs = (draw(st.sampled_from(available)),)
    return Netlist(inputs, tuple(nodes), outputs)


@given(netlists())
def test_render_parse_round_trip(net):
    net.validate()
    assert parse_netlist(render_netlist(net)) == net


@given(netlists(), st.integers(0, 7))
def test_evaluate_is_deterministic(net, raw):
    assignment = {
        name: (raw >> i) & 1 for i, name in enumerate(net.inputs)
    }
    assert evaluate(net, assignment) == evaluate(net, assignment)
