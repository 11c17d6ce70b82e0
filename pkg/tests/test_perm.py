import itertools
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from ballperm.perm import (
    FactorialCode,
    all_perms,
    code_adjacent_swap,
    compose,
    extract_digit_pair,
    format_perm,
    identity,
    invert,
    lehmer_decode,
    lehmer_encode,
    long_division,
    parse_perm,
    rank,
    rank_adjacent_swap,
    swap_labels,
    swap_positions,
    unrank,
    validate,
)

perms = st.integers(1, 8).flatmap(lambda n: st.permutations(list(range(1, n + 1)))).map(tuple)


def test_compose_definition():
    assert compose((2, 1, 3), (1, 3, 2)) == (2, 3, 1)


def test_compose_size_mismatch():
    with pytest.raises(ValueError):
        compose((1, 2), (1, 2, 3))


@given(perms)
def test_identity_law(p):
    n = len(p)
    assert compose(p, identity(n)) == p
    assert compose(identity(n), p) == p


def test_compose_with_inverse_random():
    rng = np.random.default_rng(11)
    for _ in range(100):
        n = int(rng.integers(1, 9))
        p = tuple(int(x) for x in rng.permutation(n) + 1)
        assert compose(p, invert(p)) == identity(n)


def test_invert_examples():
    assert invert((1, 2, 3)) == (1, 2, 3)
    assert invert((2, 3, 1)) == (3, 1, 2)


def test_invert_involution_s5():
    for p in all_perms(5):
        assert invert(invert(p)) == p
        assert compose(invert(p), p) == identity(5)


@pytest.mark.parametrize("word", [(), (1, 1), (0, 1), (1, 3)])
def test_validate_rejects(word):
    with pytest.raises(ValueError):
        validate(word)


def test_swap_positions_vs_labels():
    p = (3, 1, 2)
    assert swap_positions(p, 1, 2) == (1, 3, 2)
    assert swap_labels(p, 1, 2) == (3, 2, 1)


def test_parse_and_format_round_trip():
    assert parse_perm("2,1,3") == (2, 1, 3)
    assert parse_perm("[2, 1, 3]") == (2, 1, 3)
    assert format_perm((2, 1, 3)) == "2,1,3"
    with pytest.raises(ValueError):
        parse_perm("1,1")


def test_lehmer_examples():
    c = lehmer_encode((1, 2, 3))
    assert c.digits == (0, 0) and c.rank == 0
    c = lehmer_encode((2, 1, 3))
    assert c.digits == (1, 0) and c.rank == 2
    assert lehmer_encode((3, 2, 1)).rank == 5


def test_rank_is_lexicographic():
    for n in range(1, 7):
        words = sorted(itertools.permutations(range(1, n + 1)))
        assert [rank(w) for w in words] == list(range(math.factorial(n)))


@given(perms)
def test_encode_decode_round_trip(p):
    c = lehmer_encode(p)
    assert lehmer_decode(c) == p
    assert FactorialCode.from_rank(c.rank, len(p)) == c


def test_digit_bounds_enforced():
    with pytest.raises(ValueError):
        FactorialCode(3, (3, 0))
    with pytest.raises(ValueError):
        FactorialCode(3, (0, 2))
    with pytest.raises(ValueError):
        FactorialCode.from_rank(6, 3)


def test_code_adjacent_swap_examples():
    c = code_adjacent_swap(FactorialCode.from_rank(0, 3), 1)
    assert c.rank == 2 and lehmer_decode(c) == (2, 1, 3)
    assert c.digits[1] == 0
    start = lehmer_encode((1, 3, 2))
    assert start.rank == 1
    c = code_adjacent_swap(start, 2)
    assert c.rank == 0
    assert c.digits[0] == start.digits[0]


def test_code_adjacent_swap_range():
    with pytest.raises(ValueError):
        code_adjacent_swap(FactorialCode.from_rank(0, 3), 3)
    with pytest.raises(ValueError):
        code_adjacent_swap(FactorialCode.from_rank(0, 3), 0)


def test_code_swap_matches_position_swap_n5():
    n = 5
    for r in range(math.factorial(n)):
        c = FactorialCode.from_rank(r, n)
        p = lehmer_decode(c)
        for k in range(1, n):
            assert lehmer_decode(code_adjacent_swap(c, k)) == swap_positions(p, k, k + 1)
            assert rank_adjacent_swap(r, n, k) == rank(swap_positions(p, k, k + 1))


def test_extract_digit_pair_examples():
    assert extract_digit_pair(2, 3, 1) == (1, 0)
    for n in range(2, 7):
        for k in range(1, n):
            assert extract_digit_pair(0, n, k) == (0, 0)
    with pytest.raises(ValueError):
        extract_digit_pair(6, 3, 1)


def test_extract_digit_pair_agrees_n6():
    n = 6
    for r in range(math.factorial(n)):
        d = FactorialCode.from_rank(r, n).digits + (0,)
        for k in range(1, n):
            assert extract_digit_pair(r, n, k) == (d[k - 1], d[k])


@given(st.integers(0, 10**12), st.integers(1, 10**6))
def test_long_division_matches_divmod(value, divisor):
    assert long_division(value, divisor) == divmod(value, divisor)


def test_unrank_large_n():
    n = 20
    last = math.factorial(n) - 1
    assert unrank(last, n) == tuple(range(n, 0, -1))
    assert rank(tuple(range(n, 0, -1))) == last
