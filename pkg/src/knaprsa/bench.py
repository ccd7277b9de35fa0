"""Cost of the full scheme relative to bare RSA at the same modulus."""

import gc
import random
import statistics
import time
from dataclasses import dataclass

from .bitstring import BitString
from .pke import SystemParams, decrypt, encrypt, keygen
from .rsa import rsa_decrypt, rsa_encrypt

CLASSICAL_E = 65537


@dataclass
class BenchResult:
    n_bits: int
    e: int
    runs: int
    rsa_encrypt: float
    full_encrypt: float
    rsa_decrypt: float
    full_decrypt: float

    @property
    def encrypt_ratio(self):
        return self.full_encrypt / self.rsa_encrypt

    @property
    def decrypt_ratio(self):
        return self.full_decrypt / self.rsa_decrypt


def _time_block(fn, args):
    # one untimed warm-up call so the block starts from warm caches
    fn(*args[0])
    t0 = time.perf_counter()
    for a in args:
        fn(*a)
    return (time.perf_counter() - t0) / len(args)


def _paired_medians(pairs, runs, block):
    """Median per-call wall time of every ``(bare, full, bare_args, full_args)`` pair.

    A sample is the mean of ``block`` back-to-back calls, as timeit does, so
    it measures steady-state cost rather than the cache misses left by the
    other side. Each round times one block of every callable in turn, so
    background load and frequency scaling hit all series alike. gc is
    paused throughout.
    """
    samples = [([], []) for _ in pairs]
    enabled = gc.isenabled()
    gc.disable()
    try:
        for r in range(runs):
            window = slice(r * block, (r + 1) * block)
            for (bare, full, bare_args, full_args), (bare_t, full_t) in zip(pairs, samples):
                bare_t.append(_time_block(bare, bare_args[window]))
                full_t.append(_time_block(full, full_args[window]))
    finally:
        if enabled:
            gc.enable()
    return [(statistics.median(b), statistics.median(f)) for b, f in samples]


def benchmark(n_bits=1024, runs=100, e=CLASSICAL_E, seed=0, key=None, block=10):
    """Median time of full encrypt/decrypt vs one bare RSA operation.

    Each of the ``runs`` samples is the mean of ``block`` back-to-back calls.

    Uses default sizing ``k = n_bits/2, h = k/2`` with ordinary primes
    (safe-prime generation does not affect per-message cost).
    """
    rng = random.Random(seed)
    if key is None:
        params = SystemParams.for_modulus(n_bits, safe_primes=False)
        key = keygen(params, rng, e=e)
    pk, sk = key
    k = pk.params.k
    calls = runs * block
    msgs = [BitString(rng.getrandbits(k), k) for _ in range(calls)]
    ys = [rng.randrange(pk.rsa.n) for _ in range(calls)]
    cts = [encrypt(pk, m, rng) for m in msgs]
    # warm caches on both sides before timing
    encrypt(pk, msgs[0], rng)
    rsa_encrypt(pk.rsa, ys[0])
    # encrypt and decrypt are timed as separate phases: a 1024-bit decrypt
    # block between encrypt blocks would leave every encrypt sample cold
    [(bare_enc, full_enc)] = _paired_medians(
        [(rsa_encrypt, encrypt, [(pk.rsa, y) for y in ys], [(pk, m, rng) for m in msgs])], runs, block
    )
    [(bare_dec, full_dec)] = _paired_medians(
        [(rsa_decrypt, decrypt, [(sk.rsa, sk.rsa_public, c.c1) for c in cts], [(sk, c) for c in cts])],
        runs,
        block,
    )
    return BenchResult(pk.rsa.n_bits, pk.rsa.e, runs, bare_enc, full_enc, bare_dec, full_dec)
