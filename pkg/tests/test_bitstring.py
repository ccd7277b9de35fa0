import pytest
from hypothesis import given
from hypothesis import strategies as st

from knaprsa.bitstring import BitString, MaskVector
from knaprsa.errors import ParameterError

bit_lists = st.lists(st.integers(0, 1), max_size=300)


def test_length_survives_leading_zeros():
    a, b = BitString.from_str("0011"), BitString.from_str("11")
    assert a.value == b.value == 3
    assert a != b
    assert str(a) == "0011" and len(a) == 4


def test_bits_are_one_based_from_the_left():
    s = BitString.from_str("1000")
    assert [s.bit(i) for i in range(1, 5)] == [1, 0, 0, 0]
    with pytest.raises(IndexError):
        s.bit(0)
    with pytest.raises(IndexError):
        s.bit(5)


def test_value_must_fit():
    with pytest.raises(ParameterError):
        BitString(4, 2)
    with pytest.raises(ParameterError):
        BitString(-1, 3)
    with pytest.raises(ParameterError):
        BitString.from_str("012")
    with pytest.raises(ParameterError):
        BitString.from_bits([0, 2])


def test_empty():
    e = BitString.from_str("")
    assert len(e) == 0 and str(e) == "" and list(e) == []


@given(bit_lists)
def test_from_bits_roundtrip(bits):
    s = BitString.from_bits(bits)
    assert list(s) == bits
    assert str(s) == "".join(map(str, bits))
    assert s.ascii() == "".join(map(str, bits)).encode()
    assert s.weight() == sum(bits)
    assert BitString.from_str(str(s)) == s


@given(bit_lists, bit_lists)
def test_concat_and_slice(x, y):
    a, b = BitString.from_bits(x), BitString.from_bits(y)
    ab = a + b
    assert list(ab) == x + y
    assert ab.slice(0, len(x)) == a
    assert ab.slice(len(x), len(x) + len(y)) == b


@given(st.integers(0, 200).flatmap(lambda n: st.tuples(st.lists(st.integers(0, 1), min_size=n, max_size=n),
                                                        st.lists(st.integers(0, 1), min_size=n, max_size=n))))
def test_xor_is_bitwise(pair):
    x, y = pair
    got = BitString.from_bits(x) ^ BitString.from_bits(y)
    assert list(got) == [i ^ j for i, j in zip(x, y)]


def test_xor_length_mismatch():
    with pytest.raises(ParameterError):
        BitString.from_str("01") ^ BitString.from_str("011")


def test_mask_vector():
    X = MaskVector.from_str("1010")
    assert X.k == 4 and X.weight == 2
    assert X.positions() == [1, 3]
    assert str(X) == "1010" and list(X) == [1, 0, 1, 0]
    assert MaskVector.from_bits([1, 0, 1, 0]) == X
