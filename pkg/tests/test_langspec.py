import pytest

from gnprove.autoseq import Dfao
from gnprove.fields import field_make
from gnprove.fixtures import load_table
from gnprove.langspec import ast_matches, enumerate_language, parse_regex, regex_state_image, regex_text, to_nfa
from gnprove.textfmt import ParseError

# states count the parity of ones read
PARITY = Dfao(2, ((0, 1), (1, 0)), (0, 1), 0)


@pytest.mark.parametrize("text", ["1^*", "(10)^+0", "{0,11}1^*", "1+0(01)^*", "()"])
def test_nfa_agrees_with_structural_matching(text):
    node = parse_regex(text)
    nfa = to_nfa(node)
    for n in range(8):
        for i in range(1 << n):
            word = format(i, 'b').zfill(n) if n else ''
            assert nfa.matches(word) == ast_matches(node, word), word


def test_enumerate_language():
    assert enumerate_language(parse_regex("1(00)^*"), 5) == ["1", "100", "10000"]
    assert enumerate_language(parse_regex("{01,1}"), 3) == ["1", "01"]


def test_text_round_trip():
    node = parse_regex("(1 0)^* + {01,1}")
    assert regex_text(node) == "(10)^*+{01,1}"
    assert parse_regex(regex_text(node)) == node


@pytest.mark.parametrize("text", ["2", "(1", "1^?", "1)"])
def test_parse_errors(text):
    with pytest.raises(ParseError):
        parse_regex(text)


@pytest.mark.parametrize("text, image", [
    ("1^*", {0, 1}),
    ("(11)^*", {0}),
    ("1(11)^*", {1}),
    ("{10,01}", {1}),
    ("0^*", {0}),
])
def test_state_image(text, image):
    assert regex_state_image(PARITY, text, 0) == frozenset(image)
    assert regex_state_image(PARITY, text, 1) == frozenset(1 - s for s in image)


@pytest.fixture
def pd_z3(isolated_settings):
    return load_table(isolated_settings.fixtures_dir() / "pd_z3_ae00.tex", field_make(2, 1))


@pytest.mark.parametrize("text, image", [
    ("(10)^*11", {6}),
    ("(10)^*11{00,01,10,11}^+", {14, 15, 16, 17, 18, 20}),
    ("(10)^*0{0,1}{00,01,10,11}^*+(10)^+", {3, 4, 5, 13, 14, 15, 16, 17, 19, 27}),
    ("(10)^+0{00,01,10,11}^+", {9, 14, 21, 23}),
    ("(10)^+{0,1}", {8, 9}),
])
def test_state_image_on_printed_table(pd_z3, text, image):
    assert regex_state_image(pd_z3, text, 0) == frozenset(image)
