import os
import subprocess
import sys
from pathlib import Path

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from finmeasure.cli import GeneratorSpec, ParseError, dump, generate, parse, run_command
from finmeasure.cli.generate import carrier_measure, generate_unsafe, point_labels, self_test
from finmeasure.setfunc import Property, check_property
from finmeasure.space import MeasureError, Universe

from instances import THREE_POINT_TEXT, three_point_measure

HERE = Path(__file__).parent
DATA = HERE / "data"
GOLDEN = HERE / "golden"
UPDATE = os.environ.get("FINMEASURE_UPDATE_GOLDEN") == "1"


def d(name):
    return str(DATA / name)


CASES = [
    ("check_three_point_monotone", ["check", d("three_point.fm"), "--object", "m", "--property", "monotone"], 1),
    ("check_three_point_all", ["check", d("three_point.fm"), "--object", "m", "--implications"], 1),
    ("variation_three_point", ["variation", d("three_point.fm"), "--measure", "m"], 0),
    ("atoms_three_point", ["atoms", d("three_point.fm")], 0),
    ("decompose_three_point", ["decompose", d("three_point.fm")], 0),
    ("mstar_three_point", ["mstar", d("three_point.fm"), "--on", "{a,c}"], 0),
    ("mtilde_blocks", ["mtilde", d("blocks.fm"), "--on", "{a}"], 0),
    ("gould_three_point", ["gould", d("three_point.fm"), "--measure", "m", "--function", "f"], 0),
    ("gould_blocks", ["gould", d("blocks.fm")], 1),
    ("tm_blocks", ["tm", d("blocks.fm"), "--epsilon", "1/2"], 1),
    ("choquet_carrier", ["choquet", d("carrier.fm")], 0),
    ("tzero_carrier", ["tzero", d("carrier.fm")], 0),
    ("locate_carrier", ["locate-point", d("carrier.fm"), "--on", "{a,b}"], 0),
    ("locate_three_point", ["locate-point", d("three_point.fm"), "--on", "{a,b}"], 1),
    ("intmeasure_carrier", ["intmeasure", d("carrier.fm"), "--properties"], 0),
    ("rn_carrier", ["rn", d("carrier.fm"), "--measure", "m", "--vmeasure", "mu", "--verify"], 0),
    ("net_three_point", ["simulate-net", d("three_point.fm"), "--chains", "3", "--depth", "3", "--seed", "7"], 0),
    ("net_blocks", ["simulate-net", d("blocks.fm"), "--chains", "2", "--depth", "2", "--seed", "1"], 1),
    ("lebesgue_carrier", ["limits-lebesgue", d("carrier.fm"), "--sequence", "f,f", "--limit", "f",
                          "--on", "{a,b}"], 0),
    ("bounded_carrier", ["limits-bounded", d("carrier.fm"), "--sequence", "f", "--bound", "2"], 0),
    ("uniform_carrier", ["limits-uniform", d("carrier.fm"), "--sequence", "f", "--on", "{a,b}",
                         "--target", "(2)"], 0),
    ("gen_square", ["gen", "--seed", "3", "--points", "4", "--carriers", "2", "--kind", "square", "--dim", "2"], 0),
    ("bad_syntax", ["atoms", d("bad_syntax.fm")], 2),
    ("bad_semantic", ["atoms", d("bad_semantic.fm")], 2),
]


@pytest.mark.parametrize("name,argv,code", CASES, ids=[c[0] for c in CASES])
def test_golden(name, argv, code):
    got_code, text = run_command(argv)
    text = text.replace(str(DATA) + os.sep, "")
    path = GOLDEN / f"{name}.txt"
    if UPDATE:
        path.write_text(text + "\n")
    assert got_code == code, text
    assert text + "\n" == path.read_text()


@pytest.mark.parametrize("argv", [
    [],
    ["nosuchcommand"],
    ["gould", "no/such/file.fm"],
    ["check", d("three_point.fm"), "--object", "zz"],
    ["variation", d("three_point.fm"), "--on", "{a,q}"],
    ["gould", d("blocks.fm"), "--on", "{a}"],
    ["gen", "--seed", "1", "--points", "3", "--carriers", "0"],
    ["gen", "--seed", "1", "--points", "3", "--carriers", "4"],
    ["simulate-net", d("three_point.fm"), "--depth", "0"],
    ["tm", d("blocks.fm"), "--epsilon", "x"],
])
def test_usage_errors_exit_2(argv):
    code, text = run_command(argv)
    assert code == 2 and text.startswith("error:"), text


def test_help_exits_0():
    code, text = run_command(["--help"])
    assert code == 0 and "simulate-net" in text


def test_out_flag_writes_report(tmp_path):
    out = tmp_path / "r.txt"
    code, text = run_command(["variation", d("three_point.fm"), "--out", str(out)])
    assert code == 0 and text == ""
    assert "variation: 2" in out.read_text()


def test_console_entry_point():
    p = subprocess.run([sys.executable, "-m", "finmeasure.cli", "decompose", d("three_point.fm")],
                       capture_output=True, text=True)
    assert p.returncode == 0 and "{{a,b},{c}}" in p.stdout
    p = subprocess.run([sys.executable, "-m", "finmeasure.cli", "atoms", d("bad_syntax.fm")],
                       capture_output=True, text=True)
    assert p.returncode == 2 and "line" in p.stderr and p.stdout == ""


def test_seeded_commands_are_byte_identical_across_processes():
    def run(*argv):
        return subprocess.run([sys.executable, "-m", "finmeasure.cli", *argv],
                              capture_output=True).stdout

    gen = ["gen", "--seed", "99", "--points", "6", "--carriers", "3", "--kind", "max", "--dim", "2"]
    net = ["simulate-net", d("three_point.fm"), "--chains", "4", "--depth", "3", "--seed", "5"]
    assert run(*gen) == run(*gen) != b""
    assert run(*net) == run(*net) != b""


# ---------------------------------------------------------------- parser

def test_three_point_document_parses():
    doc = parse(THREE_POINT_TEXT)
    assert doc.measures["m"] == three_point_measure()


def test_zero_measure_document():
    doc = parse("space a b\nmeasure m { default = 0 }")
    assert all(v == 0 for v in doc.measures["m"].values)


def test_default_fills_unlisted_sets():
    doc = parse("space a b\nmeasure m { {a} = 0 default = 3 }")
    assert doc.measures["m"].values == (0, 0, 3, 3)


@pytest.mark.parametrize("text,line,col", [
    ("space a b\nmeasure m { {a,x} = 1 default = 0 }", 2, 16),
    ("space a b\nmeasure m { {} = 1 default = 0 }", 2, 13),
    ("space a b\nmeasure m {\n  {a} = -1\n  default = 0 }", 3, 3),
    ("space a b\nblocks {a,b}\nmeasure m {\n {a} = 1 default = 0 }", 4, 2),
    ("space a b\nmeasure m { {a} = 1 }", 2, 21),
    ("space a b\nfunction f dim 1 { a = (1) }", 2, 28),
    ("space a b\nfunction f dim 2 { a = (1) b = (1,2) }", 2, 24),
    ("space a b\nvmeasure mu dim 1 { default = (1) }", 2, 10),
    ("space a a", 1, 9),
    ("measure m { default = 0 }", 1, 1),
    ("space a b\nmeasure m { {a} = 1/0 default = 0 }", 2, 19),
    ("space a b\nmeasure m { default = 0 }\nmeasure m { default = 0 }", 3, 9),
    ("space a b ?", 1, 11),
])
def test_parse_errors_carry_location(text, line, col):
    with pytest.raises(ParseError) as exc:
        parse(text)
    assert (exc.value.line, exc.value.col) == (line, col), str(exc.value)


def test_comments_and_layout_are_ignored():
    a = parse("# c\nspace a b # pts\nmeasure m {default=0 {a}=1}".replace("{default=0 {a}=1}", "{ {a}=1 default=0 }"))
    b = parse("space a b\nmeasure m {\n  {a} = 1\n  default = 0\n}\n")
    assert a == b


def test_dump_example_text():
    doc = parse((DATA / "blocks.fm").read_text())
    assert dump(doc).startswith("space a b c\nblocks {a,b} {c}\nmeasure m {\n  {a,b} = 1\n")


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2**64 - 1), st.integers(1, 7), st.data())
def test_round_trip_generated(seed, points, data):
    carriers = data.draw(st.integers(1, points))
    kind = data.draw(st.sampled_from(["additive", "square", "max"]))
    dim = data.draw(st.integers(1, 3))
    doc = generate(GeneratorSpec(seed, points, carriers, kind, dim))
    text = dump(doc)
    again = parse(text)
    assert again == doc
    assert dump(again) == text


def test_round_trip_with_blocks():
    doc = parse((DATA / "blocks.fm").read_text())
    assert parse(dump(doc)) == doc


# ---------------------------------------------------------------- generator

def test_generator_two_carrier_example():
    u = Universe("abc")
    m = carrier_measure(u, ["a", "c"], [1, 1])
    self_test(m)
    assert m(u.full) == 2


def test_square_kind_is_not_additive():
    u = Universe("abc")
    m = carrier_measure(u, ["a", "c"], [1, 1], kind="square")
    assert m(u.full) == 4 and m(u.mset("ab")) + m(u.mset("c")) == 2
    assert check_property(m, Property.MONOTONE).holds
    assert check_property(m, Property.NULL_ADDITIVE).holds
    assert not check_property(m, Property.FINITELY_ADDITIVE).holds


@pytest.mark.parametrize("spec", [
    GeneratorSpec(1, 3, 0), GeneratorSpec(1, 3, 4), GeneratorSpec(1, 0, 0),
    GeneratorSpec(1, 3, 1, "cube"), GeneratorSpec(1, 3, 1, dim=0), GeneratorSpec(-1, 3, 1),
])
def test_invalid_specs(spec):
    with pytest.raises(MeasureError):
        generate(spec)


def test_generator_is_pure():
    spec = GeneratorSpec(12345, 8, 3, "max", 2)
    assert dump(generate(spec)) == dump(generate(spec))
    assert dump(generate(spec)) != dump(generate(GeneratorSpec(12346, 8, 3, "max", 2)))


def test_generator_labels():
    assert point_labels(3) == ["a", "b", "c"]
    assert point_labels(27)[:2] == ["p0", "p1"]
    with pytest.raises(MeasureError, match="between 1 and 20"):
        generate(GeneratorSpec(0, 27, 2))


def test_unsafe_random_generator():
    doc = generate_unsafe(GeneratorSpec(4, 3, 1))
    self_test(doc.measures["m"])
