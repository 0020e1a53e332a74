from __future__ import annotations

import random

import pytest

from aceqec import (
    CircuitFormatError,
    CostModel,
    LogicalCircuit,
    LogicalOp,
    ScheduleError,
    ace_schedule,
    conventional_schedule,
    depth,
    extract_rectangles,
    get_template,
    no_x_schedule,
    parse_circuit,
    serialize_circuit,
    strip_corrections,
)
from aceqec.circuit import insert_conventional_ec

from conftest import random_bare_circuit

MEMORY5_CONV = (
    "qubits 1\n"
    + "XEC 0\nZEC 0\n"
    + "WAIT 0\nXEC 0\nZEC 0\n" * 5
)


def _counts(circuit, error_type, cost_model=CostModel()):
    return [r.location_count for r in extract_rectangles(circuit, error_type, cost_model)]


def test_op_value_semantics():
    assert LogicalOp("CX", (0, 1)) == LogicalOp("CX", (0, 1))
    assert LogicalOp("WAIT", (0,)) != LogicalOp("XEC", (0,))
    assert LogicalOp("H", (2,)).qubits == (2,)


def test_op_validation():
    with pytest.raises(CircuitFormatError):
        LogicalOp("CX", (0,))
    with pytest.raises(CircuitFormatError):
        LogicalOp("CX", (1, 1))
    with pytest.raises(CircuitFormatError):
        LogicalOp("FOO", (0,))


def test_circuit_rejects_qubit_reuse_within_step():
    with pytest.raises(CircuitFormatError):
        LogicalCircuit(2, [[LogicalOp("WAIT", (0,)), LogicalOp("H", (0,))]])


def test_from_partial_fills_waits():
    c = LogicalCircuit.from_partial(3, [[LogicalOp("H", (1,))], []])
    assert c.grid()[0] == [
        LogicalOp("WAIT", (0,)),
        LogicalOp("H", (1,)),
        LogicalOp("WAIT", (2,)),
    ]
    assert all(op.kind == "WAIT" for op in c.grid()[1])


def test_steps_normalize_op_order():
    a = LogicalCircuit(2, [[LogicalOp("H", (1,)), LogicalOp("WAIT", (0,))]])
    b = LogicalCircuit(2, [[LogicalOp("WAIT", (0,)), LogicalOp("H", (1,))]])
    assert a == b
    # implicit waits are dropped from mixed steps, ops come out qubit-sorted
    assert serialize_circuit(a) == "qubits 2\nH 1\n"
    c = LogicalCircuit(2, [[LogicalOp("H", (1,)), LogicalOp("S", (0,))]])
    d = LogicalCircuit(2, [[LogicalOp("S", (0,)), LogicalOp("H", (1,))]])
    assert serialize_circuit(c) == serialize_circuit(d) == "qubits 2\nS 0; H 1\n"


def test_serialize_memory5_conventional():
    assert serialize_circuit(conventional_schedule(get_template("memory5"))) == MEMORY5_CONV


def test_parse_round_trips_templates():
    for name in ("memory5", "bell", "chain3"):
        c = get_template(name)
        assert parse_circuit(serialize_circuit(c)) == c
        s = conventional_schedule(c)
        assert parse_circuit(serialize_circuit(s)) == s


def test_parse_round_trips_random_circuits():
    rng = random.Random(20240817)
    for _ in range(200):
        c = random_bare_circuit(rng)
        assert parse_circuit(serialize_circuit(c)) == c


def test_serialized_text_shape():
    text = serialize_circuit(LogicalCircuit.from_partial(2, [[], [LogicalOp("CX", (0, 1))]]))
    # all-wait steps are written out, and the text ends with a newline
    assert text == "qubits 2\nWAIT 0; WAIT 1\nCX 0 1\n"


def test_parse_accepts_comments_and_blanks():
    c = parse_circuit("# a comment\nqubits 1\n\nWAIT 0  # idle\n")
    assert c == LogicalCircuit.from_partial(1, [[]])


@pytest.mark.parametrize(
    "text",
    [
        "qubitz 1\nWAIT 0\n",
        "qubits 0\n",
        "qubits 1\nFOO 0\n",
        "qubits 2\nCX 0\n",
        "qubits 1\nWAIT 1\n",
        "qubits 2\nWAIT 0; WAIT 0\n",
        "qubits 1\nWAIT zero\n",
    ],
)
def test_parse_rejects_malformed_text(text):
    with pytest.raises(CircuitFormatError):
        parse_circuit(text)


def test_insert_conventional_ec_counts():
    scheduled = insert_conventional_ec(get_template("memory5"))
    counts = scheduled.count_kinds()
    # one X/Z pair after every step, none before the first
    assert counts == {"WAIT": 5, "XEC": 5, "ZEC": 5}
    assert conventional_schedule(get_template("memory5")).count_kinds() == {
        "WAIT": 5,
        "XEC": 6,
        "ZEC": 6,
    }


def test_insert_conventional_ec_rejects_scheduled_input():
    with pytest.raises(ScheduleError):
        insert_conventional_ec(conventional_schedule(get_template("memory5")))


def test_strip_corrections_inverts_scheduling():
    rng = random.Random(7)
    for _ in range(50):
        c = random_bare_circuit(rng)
        assert strip_corrections(conventional_schedule(c)) == c
        assert strip_corrections(ace_schedule(c)) == c


def test_cost_model_locations_and_depths():
    cm = CostModel()
    assert cm.locations(LogicalOp("XEC", (0,))) == 70
    assert cm.locations(LogicalOp("ZEC", (0,))) == 70
    assert cm.locations(LogicalOp("WAIT", (0,))) == 7
    assert cm.locations(LogicalOp("H", (0,))) == 7
    assert cm.locations(LogicalOp("CX", (0, 1))) == 7
    assert cm.op_depth(LogicalOp("XEC", (0,))) == 8
    assert cm.op_depth(LogicalOp("CX", (0, 1))) == 1
    small = CostModel(n_xec=10, n_zec=12, n_transversal=3, n_cnot=4)
    assert small.locations(LogicalOp("ZEC", (0,))) == 12
    assert small.locations(LogicalOp("CX", (0, 1))) == 4


def test_memory5_rectangles():
    m5 = get_template("memory5")
    conv = conventional_schedule(m5)
    assert _counts(conv, "X") == [217, 217, 217, 217, 217, 140]
    assert _counts(conv, "Z") == [140, 217, 217, 217, 217, 217]
    ace = ace_schedule(m5)
    assert _counts(ace, "X") == [595, 140]
    assert _counts(ace, "Z") == [140, 147, 147, 147, 147, 147, 210]
    nox = no_x_schedule(m5)
    # X recovery relies on the run boundaries once every block is dropped
    assert _counts(nox, "X") == [455]
    assert _counts(nox, "Z") == [147, 147, 147, 147, 147]


def test_bell_rectangles_span_the_interaction():
    bell = get_template("bell")
    conv = conventional_schedule(bell)
    xs = extract_rectangles(conv, "X")
    assert [(r.location_count, r.is_super, r.qubits) for r in xs] == [
        (217, False, (0,)),
        (217, False, (1,)),
        (427, False, (0, 1)),
        (140, False, (0,)),
        (140, False, (1,)),
    ]
    assert _counts(conv, "Z") == [140, 140, 217, 217, 427]

    ace = ace_schedule(bell)
    xs = extract_rectangles(ace, "X")
    assert [(r.location_count, r.is_super, r.qubits) for r in xs] == [
        (217, False, (0,)),
        (714, True, (0, 1)),
        (140, False, (0,)),
        (140, False, (1,)),
    ]
    assert _counts(ace, "Z") == [140, 140, 217, 147, 287, 210, 210]


def test_chain3_rectangles_merge_across_both_interactions():
    ace = ace_schedule(get_template("chain3"))
    xs = extract_rectangles(ace, "X")
    assert [(r.location_count, r.is_super, r.qubits) for r in xs] == [
        (1078, True, (0, 1, 2)),
        (140, False, (0,)),
        (140, False, (1,)),
        (140, False, (2,)),
    ]
    zs = extract_rectangles(ace, "Z")
    assert [(r.location_count, r.qubits) for r in zs] == [
        (140, (0,)),
        (140, (1,)),
        (140, (2,)),
        (147, (0,)),
        (287, (1, 2)),
        (287, (0, 1)),
        (147, (2,)),
        (210, (0,)),
        (210, (1,)),
        (210, (2,)),
    ]


def test_conventional_rectangles_cover_each_bare_op_once():
    # boundary rectangles hold no bare op; every other rectangle exactly one
    rng = random.Random(99)
    for _ in range(30):
        c = conventional_schedule(random_bare_circuit(rng))
        n_bare = sum(
            1 for step in c.steps for op in step if not op.is_correction
        )
        for et in ("X", "Z"):
            counts = [
                sum(1 for _, op in rect.ops if not op.is_correction)
                for rect in extract_rectangles(c, et)
            ]
            assert all(n <= 1 for n in counts), serialize_circuit(c)
            assert sum(counts) == n_bare, serialize_circuit(c)


def test_rectangle_contains_and_ops_are_consistent():
    ace = ace_schedule(get_template("bell"))
    for et in ("X", "Z"):
        for rect in extract_rectangles(ace, et):
            for t, op in rect.ops:
                assert rect.contains(t, op)
            total = sum(CostModel().locations(op) for _, op in rect.ops)
            assert total == rect.location_count


def test_mixing_gate_needs_both_corrections_adjacent():
    # an X-only correction right before an H leaves the Z side uncovered
    text = "qubits 1\nH 0\nXEC 0\nH 0\nXEC 0\nZEC 0\n"
    with pytest.raises(ScheduleError):
        extract_rectangles(parse_circuit(text), "X")


def test_depth_reports():
    m5 = get_template("memory5")
    assert depth(conventional_schedule(m5)).total == 101
    assert depth(ace_schedule(m5)).total == 77
    assert depth(no_x_schedule(m5)).total == 53
    rep = depth(ace_schedule(m5))
    assert (rep.xec_blocks, rep.zec_blocks, rep.waits, rep.gates) == (2, 7, 5, 0)
    assert rep.levels == 1
    assert rep.total == (
        rep.xec_blocks * rep.xec_block_depth
        + rep.zec_blocks * rep.zec_block_depth
        + rep.waits
        + rep.gates
    )


def test_depth_respects_cost_model():
    m5 = get_template("memory5")
    cm = CostModel(d_xec=4, d_zec=3)
    rep = depth(conventional_schedule(m5), cm)
    assert rep.total == 6 * 4 + 6 * 3 + 5


def test_two_level_depth_composition():
    m5 = get_template("memory5")
    cm = CostModel()

    def level1(circuit):
        return conventional_schedule(circuit)

    rep = depth(conventional_schedule(m5), cm, levels=2, level1_schedule=level1)
    assert rep.levels == 2
    assert rep.total == 1829
    # every top-level slot is one scheduled lower-level cell, so the
    # composed block depths match a directly computed cell depth
    cell = level1(LogicalCircuit.from_partial(1, [[]] * cm.d_xec))
    assert rep.xec_block_depth == depth(cell, cm).total
