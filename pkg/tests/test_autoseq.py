import pytest

from gnprove.autoseq import (AutomatonError, Dfao, Substitution, digits, dfao_from_kernel, dfao_isomorphism,
                             dfao_minimize, dfao_run, dump_structured, emit_tables, load_structured, parse_tables,
                             period_doubling, prefix_kernel, state_sets_step, substitution_prefix, thue_morse)
from gnprove.fixtures import TABLES, load_table, make_field


@pytest.fixture
def tm():
    return Dfao(2, ((0, 1), (1, 0)), (0, 1), 0)


def tm_value(n):
    return bin(n).count('1') & 1


def test_substitution_prefixes():
    assert substitution_prefix(thue_morse(), 8) == "abbabaab"
    assert substitution_prefix(period_doubling(), 8) == "abaaabab"


def test_substitution_must_be_prolongable():
    with pytest.raises(AutomatonError):
        Substitution(('a', 'b'), {'a': 'ba', 'b': 'ab'}, 'a')
    with pytest.raises(AutomatonError):
        Substitution(('a', 'b'), {'a': 'ab'}, 'a')


def test_digits():
    assert digits(6) == [0, 1, 1]
    assert digits(0) == []
    assert digits(5, 3) == [2, 1]


def test_thue_morse_dfao(tm):
    assert [tm(n) for n in range(8)] == [0, 1, 1, 0, 1, 0, 0, 1]
    # A(s, w) reads the written word right to left
    assert tm.read(0, "10") == tm.run_state(2)
    with pytest.raises(AutomatonError):
        dfao_run(tm, -1)


def test_prefix_kernel_finds_thue_morse(tm):
    u = [tm_value(n) for n in range(64)]
    d = dfao_from_kernel(*prefix_kernel(u))
    assert d.size == 2
    assert all(d(n) == tm_value(n) for n in range(64))


def test_prefix_kernel_too_short():
    with pytest.raises(AutomatonError):
        prefix_kernel([0, 1, 1], compare=4)


def test_kernel_not_closed():
    with pytest.raises(AutomatonError):
        dfao_from_kernel({'s'}, {('s', 0): 's'}, {'s': 0}, 's')


def test_minimize(tm):
    redundant = Dfao(2, ((2, 1), (3, 0), (0, 3), (1, 2)), (0, 1, 0, 1), 0)
    assert dfao_minimize(redundant) == tm
    assert dfao_minimize(tm) == tm


def test_isomorphism(tm):
    relabeled = Dfao(2, ((0, 1), (1, 0)), (1, 0), 1)
    assert dfao_isomorphism(tm, relabeled) == {0: 1, 1: 0}
    other = Dfao(2, ((0, 1), (1, 1)), (0, 1), 0)
    assert dfao_isomorphism(tm, other) is None


def test_leading_zero_stability(tm):
    assert tm.is_leading_zero_stable()
    assert not Dfao(2, ((1, 1), (1, 1)), (0, 1), 0).is_leading_zero_stable()


def test_tables_round_trip(tm):
    text = emit_tables(tm)
    assert '\\begin{longtable}' in text
    back = parse_tables(text, int)
    assert back == tm


def test_tables_need_both_blocks():
    with pytest.raises(AutomatonError):
        parse_tables("no tables here")


def test_structured_round_trip(tm):
    assert load_structured(dump_structured(tm), int) == tm
    with pytest.raises(AutomatonError):
        load_structured('{"base": 2, "transitions": [[0, 1]]}')


def test_state_set_trace(tm):
    trace = state_sets_step(tm, stride=1, start_length=1)
    assert trace.lengths_to_check() == [1, 2]
    assert trace.entries[0].states == frozenset({1})
    assert trace.entries[1].states == frozenset({0, 1})
    assert trace.preperiod == 1 and trace.period == 1
    assert trace.entry_for(10) == trace.entries[1]
    with pytest.raises(AutomatonError):
        trace.entry_for(0)


def test_set_trace_of_printed_stieltjes_table(isolated_settings):
    fld = make_field(TABLES['stieltjes_f4_me00'].field)
    d = load_table(isolated_settings.fixtures_dir() / "stieltjes_f4_me00.tex", fld)
    trace = state_sets_step(d, stride=2, start_length=3)
    assert trace.lengths_to_check() == [3, 5, 7]
    assert [e.states for e in trace.entries] == [
        frozenset({2, 4, 7, 8, 9}),
        frozenset({2, 4, 7, 8, 9, 13, 14}),
        frozenset({2, 4, 7, 8, 9, 13, 14, 17, 18}),
    ]
    assert all(e.pointer == 1 for e in trace.entries)
    assert trace.preperiod == 2 and trace.period == 1
    assert trace.entry_for(9) == trace.entries[2]
    assert trace.entry_for(101) == trace.entries[2]
