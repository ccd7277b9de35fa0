import math
import random

import pytest

from knaprsa.errors import DomainError, ParameterError, PrimeGenerationTimeout
from knaprsa.numtheory import is_probable_prime
from knaprsa.rsa import gen_rsa, rsa_decrypt, rsa_encrypt, rsa_keypair, smallest_exponent


@pytest.fixture
def toy_rsa():
    return rsa_keypair(11, 23, 3)


def test_toy_keypair(toy_rsa):
    pub, priv = toy_rsa
    assert (pub.n, pub.e, priv.phi, priv.d) == (253, 3, 220, 147)
    assert pub.n_bits == 8


def test_toy_primes_are_safe():
    for p in (11, 23):
        assert is_probable_prime(p) and is_probable_prime((p - 1) // 2)


@pytest.mark.parametrize("y, c", [(5, 125), (1, 1), (10, 241), (0, 0)])
def test_toy_encrypt_decrypt(toy_rsa, y, c):
    pub, priv = toy_rsa
    assert rsa_encrypt(pub, y) == c
    assert rsa_decrypt(priv, pub, c) == y


def test_toy_is_a_permutation(toy_rsa):
    pub, priv = toy_rsa
    images = [rsa_encrypt(pub, y) for y in range(pub.n)]
    assert sorted(images) == list(range(pub.n))
    assert all(rsa_decrypt(priv, pub, c) == y for y, c in enumerate(images))


def test_domain_errors(toy_rsa):
    pub, priv = toy_rsa
    for bad in (-1, 253, 1000):
        with pytest.raises(DomainError):
            rsa_encrypt(pub, bad)
        with pytest.raises(DomainError):
            rsa_decrypt(priv, pub, bad)


def test_smallest_exponent():
    assert smallest_exponent(220) == 3
    # 3 | 18 and 5 is the next odd coprime value
    assert smallest_exponent(18) == 5
    assert smallest_exponent(2 * 3 * 5 * 7 * 11) == 13


def test_keypair_rejects_bad_inputs():
    with pytest.raises(ParameterError):
        rsa_keypair(11, 11)
    with pytest.raises(ValueError):
        rsa_keypair(11, 23, 5)  # gcd(5, 220) = 5


@pytest.mark.parametrize("bits, safe", [(11, True), (12, True), (16, True), (64, True), (64, False), (512, False)])
def test_gen_rsa_invariants(bits, safe):
    rng = random.Random(bits)
    for _ in range(5 if bits < 512 else 1):
        pub, priv = gen_rsa(bits, safe=safe, rng=rng)
        assert pub.n == priv.p * priv.q and priv.p != priv.q
        assert pub.n.bit_length() == bits
        assert pub.e * priv.d % priv.phi == 1
        assert 1 < pub.e < priv.phi and 1 < priv.d < priv.phi
        assert math.gcd(pub.e, priv.phi) == 1
        for p in (priv.p, priv.q):
            assert is_probable_prime(p)
            if safe:
                assert is_probable_prime((p - 1) // 2)


def test_gen_rsa_auto_exponent_is_smallest():
    pub, priv = gen_rsa(64, rng=random.Random(4))
    assert pub.e == smallest_exponent(priv.phi)


def test_gen_rsa_fixed_exponent():
    pub, priv = gen_rsa(128, e=65537, safe=False, rng=random.Random(4))
    assert pub.e == 65537 and pub.e * priv.d % priv.phi == 1


def test_gen_rsa_preconditions():
    with pytest.raises(ParameterError):
        gen_rsa(7)
    with pytest.raises(ParameterError):
        gen_rsa(64, e=4)
    with pytest.raises(ParameterError):
        gen_rsa(64, e=1)


def test_gen_rsa_gives_up():
    # 11 is the only 4-bit safe prime, so no balanced 8-bit safe modulus exists
    with pytest.raises(PrimeGenerationTimeout):
        gen_rsa(8, safe=True, rng=random.Random(0), max_tries=5)


def test_gen_rsa_fixed_exponent_sharing_phi():
    # primes with p = 1 mod 3 make 3 divide phi; those pairs are redrawn
    rng = random.Random(5)
    pub, priv = gen_rsa(16, e=3, safe=False, rng=rng)
    assert math.gcd(3, priv.phi) == 1


@pytest.mark.parametrize("bits", [64, 512])
def test_roundtrip_random_messages(bits):
    rng = random.Random(bits + 1)
    pub, priv = gen_rsa(bits, safe=False, rng=rng)
    for _ in range(1000):
        y = rng.randrange(pub.n)
        assert rsa_decrypt(priv, pub, rsa_encrypt(pub, y)) == y


def test_gen_rsa_is_seed_reproducible():
    assert gen_rsa(64, rng=random.Random(11)) == gen_rsa(64, rng=random.Random(11))
