import random

import pytest

from knaprsa.knapsack import KnapsackPrivate
from knaprsa.pke import PrivateKey, SystemParams, keygen
from knaprsa.rsa import rsa_keypair


def toy_keypair():
    """The hand-checked k=4 knapsack with the (11, 23, 3) RSA pair."""
    kpriv = KnapsackPrivate.from_seeds((5, 3, 1, 1), 29, 12)
    rpub, rpriv = rsa_keypair(11, 23, 3)
    sk = PrivateKey(kpriv, rpriv, rpub, SystemParams(k=4, n_bits=8, h=2))
    return sk.public(), sk


def k3_knapsack():
    return KnapsackPrivate.from_seeds((3, 1, 1), 11, 7)


@pytest.fixture
def toy():
    return toy_keypair()


@pytest.fixture(scope="session")
def small_key():
    return keygen(SystemParams(k=16, n_bits=64, safe_primes=False), random.Random(2024))


@pytest.fixture
def rng():
    return random.Random(12345)


def pytest_terminal_summary(terminalreporter):
    import sys

    module = sys.modules.get("test_acceptance")
    if module and module.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in module.RESULTS:
            terminalreporter.write_line(line)
