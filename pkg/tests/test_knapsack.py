import math
import random
from itertools import product

import pytest
from conftest import k3_knapsack
from hypothesis import given, settings
from hypothesis import strategies as st

from knaprsa.bitstring import BitString, MaskVector
from knaprsa.errors import ParameterError
from knaprsa.knapsack import (
    WINDOW_MIN_K,
    KnapsackPrivate,
    KnapsackPublic,
    density,
    gen_knapsack,
    is_superincreasing,
    knapsack_decode,
    knapsack_encode,
)


def k4():
    return KnapsackPrivate.from_seeds((5, 3, 1, 1), 29, 12)


def all_masks(k):
    for bits in product((0, 1), repeat=k):
        yield bits, MaskVector.from_bits(bits)


def brute_solutions(b, r):
    """Every 0/1 vector x with sum x_i b_i == r."""
    return [bits for bits in product((0, 1), repeat=len(b)) if sum(x * w for x, w in zip(bits, b)) == r]


def checked_peel(priv, r):
    """Textbook recursion that asserts exact division by 2^(i-1) at every step."""
    bits, acc = [], 0
    for i, bi in enumerate(priv.b):
        assert (r - acc) % (1 << i) == 0
        x = ((r - acc) >> i) & 1
        bits.append(x)
        acc += x * bi
    return bits


def test_k4_instance():
    priv = k4()
    assert priv.b == (5, 6, 4, 8)
    assert priv.w_inv == 17
    assert priv.public().a == (2, 14, 19, 9)


def test_k3_instance():
    priv = k3_knapsack()
    assert priv.b == (3, 2, 4)
    assert priv.public().a == (10, 3, 6)
    assert priv.w_inv == 8


@pytest.mark.parametrize(
    "which, mask, want", [("k3", "101", 16), ("k4", "1010", 21), ("k4", "0000", 0), ("k3", "000", 0)]
)
def test_encode_examples(which, mask, want):
    pub = (k3_knapsack() if which == "k3" else k4()).public()
    assert knapsack_encode(pub, MaskVector.from_str(mask)) == want


@pytest.mark.parametrize(
    "which, c2, want", [("k3", 16, "101"), ("k4", 0, "0000"), ("k4", 21, "1010"), ("k4", 23, "0101"), ("k4", 35, "1110")]
)
def test_decode_examples(which, c2, want):
    priv = k3_knapsack() if which == "k3" else k4()
    assert knapsack_decode(priv, c2) == MaskVector.from_str(want)


def test_aliased_decode_passes_checksum():
    # 23 = 21 + a_1 although x_1 is already set; the decoder returns a different valid subset
    priv = k4()
    X = knapsack_decode(priv, 21 + priv.public().a[0])
    assert str(X) == "0101"
    assert 23 * priv.w_inv % priv.M == 6 + 8


def test_decode_rejects_non_subset_sums():
    priv = k4()
    subset_sums = {sum(x * b for x, b in zip(bits, priv.b)) for bits, _ in all_masks(4)}
    for r in range(priv.M):
        c2 = r * priv.w % priv.M
        got = knapsack_decode(priv, c2)
        assert (got is not None) == (r in subset_sums)


def test_encode_length_mismatch():
    with pytest.raises(ParameterError):
        knapsack_encode(k4().public(), MaskVector.from_str("101"))


def test_gen_knapsack_k4_forces_last_weight():
    rng = random.Random(3)
    for _ in range(50):
        priv, _ = gen_knapsack(4, rng)
        assert priv.b[3] == 8 and priv.c[3] == 1


def test_gen_knapsack_rejects_tiny_k():
    with pytest.raises(ParameterError):
        gen_knapsack(2, random.Random(0))


@pytest.mark.parametrize("k", [3, 4, 5, 8, 16, 64, 130])
def test_generated_invariants(k):
    rng = random.Random(k)
    for _ in range(100 if k <= 16 else 10):
        priv, pub = gen_knapsack(k, rng)
        priv.validate()
        total = sum(priv.b)
        assert total < priv.M <= 2 * total
        assert math.gcd(priv.w, priv.M) == 1 and 0 < priv.w < priv.M
        assert all(ci & 1 for ci in priv.c)
        assert priv.c[-1] == 1
        assert all(priv.c[i].bit_length() == k - 1 - i for i in range(k - 1))
        assert pub.a == tuple(b * priv.w % priv.M for b in priv.b)
        assert all(a < priv.M for a in pub.a)


@pytest.mark.parametrize(
    "c, M, w",
    [
        ((4, 3, 1, 1), 29, 12),  # even seed
        ((5, 1, 1, 1), 29, 12),  # c_2 too short
        ((5, 3, 1, 3), 40, 3),  # c_k != 1
        ((5, 3, 1, 1), 23, 12),  # M <= sum b
        ((5, 3, 1, 1), 30, 12),  # w not a unit
    ],
)
def test_from_seeds_rejects_broken_invariants(c, M, w):
    with pytest.raises(ValueError):
        KnapsackPrivate.from_seeds(c, M, w)


@pytest.mark.parametrize("k", range(3, 10))
def test_exhaustive_roundtrip_and_peel_exactness(k):
    rng = random.Random(100 + k)
    for _ in range(5):
        priv, pub = gen_knapsack(k, rng)
        for bits, X in all_masks(k):
            c2 = knapsack_encode(pub, X)
            assert c2 == sum(a for a, x in zip(pub.a, bits) if x)
            assert checked_peel(priv, c2 * priv.w_inv % priv.M) == list(bits)
            assert knapsack_decode(priv, c2) == X


@pytest.mark.parametrize("k", range(3, 9))
def test_decoder_matches_brute_force_on_arbitrary_c2(k):
    rng = random.Random(200 + k)
    priv, pub = gen_knapsack(k, rng)
    for _ in range(300):
        c2 = rng.randrange(4 * sum(pub.a) + 1)
        got = knapsack_decode(priv, c2)
        solutions = brute_solutions(priv.b, c2 * priv.w_inv % priv.M)
        if got is None:
            assert not solutions
        else:
            assert tuple(got) in solutions


def test_window_tables_match_direct_sum():
    rng = random.Random(8)
    for k in (WINDOW_MIN_K, WINDOW_MIN_K + 3, 257):
        _, pub = gen_knapsack(k, rng)
        for _ in range(50):
            X = MaskVector(BitString(rng.getrandbits(k), k))
            assert knapsack_encode(pub, X) == sum(a for a, x in zip(pub.a, X) if x)


@settings(max_examples=40, deadline=None)
@given(st.integers(3, 200), st.integers(0, 2**64))
def test_roundtrip_property(k, seed):
    rng = random.Random(seed)
    priv, pub = gen_knapsack(k, rng)
    X = MaskVector(BitString(rng.getrandbits(k), k))
    assert knapsack_decode(priv, knapsack_encode(pub, X)) == X


@pytest.mark.parametrize("seq, want", [((1, 2, 4, 8), True), ((3, 2, 4), False), ((1, 2, 4), True), ((5,), True), ((1, 1), False)])
def test_is_superincreasing(seq, want):
    assert is_superincreasing(seq) is want


def test_is_superincreasing_empty():
    with pytest.raises(ParameterError):
        is_superincreasing([])


def test_private_weights_are_not_superincreasing_in_general():
    assert not is_superincreasing(k4().b)


def test_density_examples():
    assert density(k4().public()) == pytest.approx(4 / math.log2(19))
    assert density(k4().public()) == pytest.approx(0.9415, abs=5e-4)
    assert density(k3_knapsack().public()) == pytest.approx(0.9031, abs=1e-4)
    assert density(KnapsackPublic(5, (1, 2, 3, 4, 32))) == 1.0


def test_density_degenerate():
    with pytest.raises(ParameterError):
        density(KnapsackPublic(1, (5,)))
    with pytest.raises(ParameterError):
        density(KnapsackPublic(2, (1, 1)))
