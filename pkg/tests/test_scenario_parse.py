import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from svq import (
    And,
    Atom,
    BadProbability,
    DimensionMismatch,
    DuplicateIdentifier,
    Implies,
    Not,
    Or,
    ScenarioSyntaxError,
    UnknownIdentifier,
    ZeroVector,
    format_formula,
    format_scenario,
    parse_scenario,
)
from svq.scenario import (
    BlackholeStep,
    CheckPastQuery,
    CloneStep,
    EvalQuery,
    EvolveStep,
    FeasibleQuery,
    PropDecl,
    ReconstructStep,
    RecordStep,
    StateDecl,
    UncloneStep,
)

def test_smallest_valid_program():
    s = parse_scenario("state phi = [1, 0]")
    assert s.items == (StateDecl("phi", (1 + 0j, 0 + 0j)),)


def test_prop_and_query():
    s = parse_scenario(
        "state phi = [1, 0]\nprop Zplus = span([1, 0])\neval phi in Zplus"
    )
    kinds = [type(i) for i in s.items]
    assert kinds == [StateDecl, PropDecl, EvalQuery]
    assert s.declarations == s.items[:2]
    assert s.queries == (EvalQuery("phi", "Zplus"),)


def test_zero_vector_diagnostic_carries_position():
    with pytest.raises(ZeroVector) as err:
        parse_scenario("state ok = [1, 0]\nstate bad = [0, 0]")
    assert str(err.value).startswith("2:1:")


def test_syntax_error_position_and_expectations():
    with pytest.raises(ScenarioSyntaxError) as err:
        parse_scenario("state phi = [1, ]")
    assert err.value.line == 1
    assert err.value.column == 17
    assert err.value.expected == ("number",)


def test_unknown_top_level_word():
    with pytest.raises(ScenarioSyntaxError) as err:
        parse_scenario("state phi = [1, 0]\nwarp phi")
    assert err.value.line == 2
    assert "declaration" in err.value.expected


def test_unknown_identifier_in_query():
    with pytest.raises(UnknownIdentifier) as err:
        parse_scenario("state phi = [1, 0]\nprop Z = span([1, 0])\neval ghost in Z")
    assert str(err.value).startswith("3:1:")


def test_category_is_checked_not_just_existence():
    with pytest.raises(UnknownIdentifier):
        parse_scenario("state phi = [1, 0]\nstate psi = [0, 1]\neval phi in psi")


def test_duplicate_identifier():
    with pytest.raises(DuplicateIdentifier):
        parse_scenario("state phi = [1, 0]\nstate phi = [0, 1]")


def test_dimension_mismatch_across_declarations():
    with pytest.raises(DimensionMismatch) as err:
        parse_scenario("state phi = [1, 0]\nstate big = [1, 0, 0]")
    assert str(err.value).startswith("2:1:")


def test_reserved_words_cannot_be_names():
    with pytest.raises(ScenarioSyntaxError):
        parse_scenario("state span = [1, 0]")


def test_forward_reference_is_rejected():
    with pytest.raises(UnknownIdentifier):
        parse_scenario("eval phi in Z\nstate phi = [1, 0]\nprop Z = span([1, 0])")


def test_bad_reconstruct_probability():
    with pytest.raises(BadProbability):
        parse_scenario("state phi = [1, 0]\nreconstruct p 1.5")


def test_number_forms():
    s = parse_scenario("state v = [1/2, 1/sqrt(2), 0.25, -1/2, 2e-1]")
    components = s.items[0].components
    assert components[0] == pytest.approx(0.5)
    assert components[1] == pytest.approx(1 / math.sqrt(2))
    assert components[2] == pytest.approx(0.25)
    assert components[3] == pytest.approx(-0.5)
    assert components[4] == pytest.approx(0.2)


def test_complex_literals():
    s = parse_scenario("state v = [0.5+0.5i, 1i, -1i, 1-0.5i]")
    components = s.items[0].components
    assert components[0] == 0.5 + 0.5j
    assert components[1] == 1j
    assert components[2] == -1j
    assert components[3] == 1 - 0.5j


def test_comments_and_blank_lines_are_ignored():
    s = parse_scenario("# leading comment\n\nstate phi = [1, 0]  # trailing\n")
    assert len(s.items) == 1


def test_steps_parse():
    text = """
state phi = [1, 0]
state ups = [1, 1]
prop Z = span([1, 0])
record at 0
clone ups -> phi
unclone ups blank phi
blackhole phi
evolve phi by [[0, 1], [1, 0]]
reconstruct
reconstruct p 0.25
check-past
feasible ups phi
"""
    s = parse_scenario(text)
    step_types = [type(i) for i in s.steps]
    assert step_types == [
        RecordStep,
        CloneStep,
        UncloneStep,
        BlackholeStep,
        EvolveStep,
        ReconstructStep,
        ReconstructStep,
    ]
    assert s.steps[5].p_one is None
    assert s.steps[6].p_one == 0.25
    assert isinstance(s.queries[0], CheckPastQuery)
    assert s.queries[1] == FeasibleQuery("ups", "phi")


def test_evolve_matrix_must_match_dimension():
    with pytest.raises(DimensionMismatch):
        parse_scenario("state phi = [1, 0]\nevolve phi by [[1, 0, 0], [0, 1, 0], [0, 0, 1]]")


def test_formula_precedence():
    text = (
        "prop A = span([1, 0])\nprop B = span([0, 1])\nprop C = span([1, 1])\n"
        "formula f = not A and B or C -> A"
    )
    s = parse_scenario(text)
    body = s.items[3].body
    assert body == Implies(Or(And(Not(Atom("A")), Atom("B")), Atom("C")), Atom("A"))


def test_implies_is_right_associative():
    text = "prop A = span([1, 0])\nprop B = span([0, 1])\nformula f = A -> B -> A"
    s = parse_scenario(text)
    assert s.items[2].body == Implies(Atom("A"), Implies(Atom("B"), Atom("A")))


def test_round_trip_fixed_point_for_corpus(scenario_dir):
    files = sorted(scenario_dir.glob("*.svq"))
    assert files, "scenario corpus is missing"
    for path in files:
        first = parse_scenario(path.read_text(encoding="utf-8"))
        printed = format_scenario(first)
        second = parse_scenario(printed)
        assert second == first, path.name
        assert format_scenario(second) == printed, path.name


@st.composite
def formula_trees(draw):
    return draw(
        st.recursive(
            st.sampled_from(("A", "B", "C")).map(Atom),
            lambda kids: st.one_of(
                kids.map(Not),
                st.tuples(kids, kids).map(lambda t: And(*t)),
                st.tuples(kids, kids).map(lambda t: Or(*t)),
                st.tuples(kids, kids).map(lambda t: Implies(*t)),
            ),
            max_leaves=12,
        )
    )


@given(formula_trees())
def test_formula_printer_round_trips(f):
    text = (
        "prop A = span([1, 0])\nprop B = span([0, 1])\nprop C = span([1, 1])\n"
        f"formula f = {format_formula(f)}"
    )
    s = parse_scenario(text)
    assert s.items[3].body == f


def test_every_diagnostic_has_line_and_column():
    bad_texts = [
        "state phi = [1, 0] extra",
        "state phi = ]",
        "prop Z = span()",
        "record at x",
        "clone a",
        "state phi = [1, 0]\nstate phi = [1, 0]",
        "state bad = [0, 0]",
    ]
    for text in bad_texts:
        try:
            parse_scenario(text)
            raise AssertionError(f"no diagnostic for {text!r}")
        except Exception as err:
            head = str(err).split(" ", 1)[0]
            line_col = head.rstrip(":").split(":")
            assert len(line_col) == 2 and all(p.isdigit() for p in line_col), str(err)
