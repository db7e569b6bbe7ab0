import pytest
from hypothesis import given
from hypothesis import strategies as st

from holeshift import (
    ModelError,
    check_word,
    format_word,
    make_params,
    pack_word,
    parse_word,
    unpack_word,
)


def test_make_params_basic():
    p = make_params(3, 2)
    assert (p.b, p.m) == (3, 2)
    assert p.state_count == 3
    assert p.word_count == 9
    assert p.verified


def test_make_params_regime_flag():
    assert not make_params(2, 2).verified
    assert not make_params(3, 1).verified
    assert make_params(4, 5).verified


@pytest.mark.parametrize("b,m", [(1, 2), (0, 1), (3, 0), (2, -1)])
def test_make_params_rejects(b, m):
    with pytest.raises(ModelError):
        make_params(b, m)


def test_make_params_rejects_non_int():
    with pytest.raises(ModelError):
        make_params(3.0, 2)
    with pytest.raises(ModelError):
        make_params(3, "2")


def test_large_m_params_allowed():
    # closed-form consumers need big-m parameter sets even though the
    # engines cannot materialize their state spaces
    p = make_params(3, 100)
    assert p.m == 100


@given(st.integers(2, 7), st.integers(1, 6), st.data())
def test_pack_unpack_roundtrip(b, m, data):
    p = make_params(b, m)
    word = tuple(data.draw(st.integers(0, b - 1)) for _ in range(m))
    v = pack_word(word, p)
    assert 0 <= v < p.word_count
    assert unpack_word(v, m, p) == word


def test_pack_is_msd_first():
    p = make_params(3, 3)
    assert pack_word((1, 0, 2), p) == 1 * 9 + 0 * 3 + 2


def test_check_word_errors():
    p = make_params(3, 2)
    check_word((0, 2), p, 2)
    with pytest.raises(ModelError):
        check_word((0, 3), p, 2)
    with pytest.raises(ModelError):
        check_word((0,), p, 2)
    with pytest.raises(ModelError):
        check_word((), p)


def test_parse_format_plain_digits():
    p = make_params(3, 2)
    assert parse_word("01", p) == (0, 1)
    assert format_word((2, 0)) == "20"


def test_parse_format_bracket_digits():
    p = make_params(16, 3)
    w = parse_word("0[12]3", p)
    assert w == (0, 12, 3)
    assert format_word(w) == "0[12]3"
    assert parse_word(format_word(w), p) == w


@given(st.integers(2, 16), st.lists(st.integers(0, 15), min_size=1, max_size=8))
def test_parse_format_roundtrip(b, digits):
    digits = [d % b for d in digits]
    p = make_params(b, 2)
    text = format_word(tuple(digits))
    assert parse_word(text, p) == tuple(digits)


def test_parse_word_rejects_bad_digits():
    p = make_params(3, 2)
    with pytest.raises(ModelError):
        parse_word("03", p)
    with pytest.raises(ModelError):
        parse_word("0[12]", p)
    with pytest.raises(ModelError):
        parse_word("", p)
    with pytest.raises(ModelError):
        parse_word("0[2", p)
