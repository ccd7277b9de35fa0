"""Chosen-ciphertext experiments against the scheme.

``run_game`` plays the IND-CCA2 game: the adversary picks two messages
with oracle access, receives the encryption ``C*`` of one of them and may
keep querying the decryption oracle on anything except ``C*`` before it
guesses which message was encrypted.  The probes in this module isolate
the specific query families (mauled ``c2``, random ``c1``, random valid
``c2``) that a security argument for the scheme has to account for, and
report empirical rates next to the rates the argument predicts.

Every trial draws its randomness from a generator derived from
``(seed, trial index, purpose)``, so results do not depend on trial order
or on how trials are spread over worker processes.
"""

import hashlib
import math
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import partial
from itertools import combinations

from scipy import stats

from . import knapsack as ks
from . import precoder
from .bitstring import BitString, MaskVector
from .errors import ParameterError
from .pke import Ciphertext, Rejected, SystemParams, decrypt, encrypt, keygen

# largest k for which the brute-force subset-sum twin is computed
EXHAUSTIVE_MAX_K = 12


def derive_rng(seed, *labels):
    digest = hashlib.sha256(repr((seed,) + labels).encode()).digest()
    return random.Random(digest)


def wilson_interval(successes, n, z=1.959964):
    if n == 0:
        return 0.0, 1.0
    p = successes / n
    denom = 1 + z * z / n
    centre = (p + z * z / (2 * n)) / denom
    half = z * math.sqrt(p * (1 - p) / n + z * z / (4 * n * n)) / denom
    return max(0.0, centre - half), min(1.0, centre + half)


class Refused:
    """Oracle answer to a query on the challenge ciphertext."""

    def __bool__(self):
        return False

    def __repr__(self):
        return "REFUSED"


REFUSED = Refused()


class DecryptionOracle:
    """Decryption oracle that refuses the challenge ciphertext.

    The comparison against ``challenge`` happens before the private key is
    touched, so a refused query never reaches :func:`decrypt`.
    """

    def __init__(self, sk, decrypt_fn=decrypt):
        self._sk = sk
        self._decrypt = decrypt_fn
        self.challenge = None
        self.queries = 0
        self.rejects = 0
        self.refused = 0

    def __call__(self, c):
        if self.challenge is not None and c == self.challenge:
            self.refused += 1
            return REFUSED
        self.queries += 1
        out = self._decrypt(self._sk, c)
        if isinstance(out, Rejected):
            self.rejects += 1
        return out


# -- adversaries -------------------------------------------------------------


class Adversary:
    name = None

    def choose(self, pk, oracle, rng):
        raise NotImplementedError

    def guess(self, pk, c_star, oracle, rng):
        raise NotImplementedError


class RandomGuess(Adversary):
    name = "random-guess"

    def choose(self, pk, oracle, rng):
        k = pk.params.k
        return BitString(rng.getrandbits(k), k), BitString(rng.getrandbits(k), k)

    def guess(self, pk, c_star, oracle, rng):
        return rng.getrandbits(1)


class Replay(RandomGuess):
    """Submits ``C*`` itself, then falls back to a coin flip."""

    name = "replay"

    def guess(self, pk, c_star, oracle, rng):
        out = oracle(c_star)
        if isinstance(out, BitString):
            raise AssertionError("oracle decrypted the challenge ciphertext")
        return rng.getrandbits(1)


def maul_adversary_step(pk, c_star, oracle, rng, m0, m1):
    """Query ``(c1*, c2* + a_i)`` for a uniform ``i`` and guess from the answer.

    A rejected query yields a coin flip.  A plaintext answer is matched to
    whichever of ``m0``/``m1`` it is closer to in Hamming distance, with
    ties broken by a coin flip.
    """
    i = rng.randrange(pk.params.k)
    out = oracle(Ciphertext(c_star.c1, c_star.c2 + pk.knapsack.a[i]))
    if not isinstance(out, BitString):
        return rng.getrandbits(1)
    d0, d1 = (out ^ m0).weight(), (out ^ m1).weight()
    if d0 == d1:
        return rng.getrandbits(1)
    return 0 if d0 < d1 else 1


class MaulC2(Adversary):
    name = "maul-c2"

    def choose(self, pk, oracle, rng):
        k = pk.params.k
        self.m0 = BitString.zeros(k)
        self.m1 = BitString((1 << k) - 1, k)
        return self.m0, self.m1

    def guess(self, pk, c_star, oracle, rng):
        return maul_adversary_step(pk, c_star, oracle, rng, self.m0, self.m1)


ADVERSARIES = {cls.name: cls for cls in (RandomGuess, MaulC2, Replay)}


# -- game --------------------------------------------------------------------


@dataclass(frozen=True)
class GameConfig:
    params: SystemParams
    trials: int
    seed: int
    adversary: str
    shared_key: bool = False

    def __post_init__(self):
        if self.trials < 1:
            raise ParameterError("trials must be >= 1")
        if self.adversary not in ADVERSARIES:
            raise ParameterError(f"unknown adversary {self.adversary!r}")


@dataclass
class GameStats:
    trials: int = 0
    wins: int = 0
    oracle_queries: int = 0
    rejects: int = 0
    refused: int = 0
    aborted: int = 0

    @property
    def win_rate(self):
        return self.wins / self.trials if self.trials else 0.0

    @property
    def advantage(self):
        return abs(self.win_rate - 0.5)

    @property
    def ci95(self):
        """Normal-approximation 95% half-width of the win rate."""
        if not self.trials:
            return 0.0
        p = self.win_rate
        return 1.959964 * math.sqrt(p * (1 - p) / self.trials)

    def __add__(self, other):
        return GameStats(
            *(getattr(self, f) + getattr(other, f) for f in ("trials", "wins", "oracle_queries", "rejects", "refused", "aborted"))
        )


def _trial_key(params, seed, t, shared):
    rng = derive_rng(seed, "key") if shared else derive_rng(seed, t, "key")
    return keygen(params, rng)


def play_trial(cfg, t, key=None):
    """Play trial ``t`` of the game and return its outcome row."""
    pk, sk = key or _trial_key(cfg.params, cfg.seed, t, cfg.shared_key)
    adv_rng = derive_rng(cfg.seed, t, "adversary")
    chal_rng = derive_rng(cfg.seed, t, "challenger")
    oracle = DecryptionOracle(sk)
    adversary = ADVERSARIES[cfg.adversary]()
    row = {"trial": t, "b": None, "guess": None, "win": 0}
    m0, m1 = adversary.choose(pk, oracle, adv_rng)
    k = cfg.params.k
    if not (isinstance(m0, BitString) and isinstance(m1, BitString) and len(m0) == len(m1) == k):
        row.update(aborted=1, queries=oracle.queries, rejects=oracle.rejects, refused=oracle.refused)
        return row
    b = chal_rng.getrandbits(1)
    c_star = encrypt(pk, (m0, m1)[b], chal_rng)
    oracle.challenge = c_star
    guess = adversary.guess(pk, c_star, oracle, adv_rng)
    row.update(b=b, guess=guess, win=int(guess == b), aborted=0,
               queries=oracle.queries, rejects=oracle.rejects, refused=oracle.refused)
    return row


def _chunks(n, parts):
    step = -(-n // parts)
    return [range(lo, min(n, lo + step)) for lo in range(0, n, step)]


def _run_chunk(fn, trials):
    return [fn(t) for t in trials]


def map_trials(fn, trials, workers=1):
    """Evaluate ``fn(t)`` for ``t in range(trials)``, optionally across processes.

    Rows come back in trial order regardless of ``workers``.
    """
    if workers <= 1 or trials < 2 * workers:
        return [fn(t) for t in range(trials)]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        parts = pool.map(partial(_run_chunk, fn), _chunks(trials, workers))
        return [row for part in parts for row in part]


def _stats_from_rows(rows):
    s = GameStats()
    for r in rows:
        s += GameStats(1, r["win"], r["queries"], r["rejects"], r["refused"], r["aborted"])
    return s


def run_game(cfg, workers=1, record=None):
    """Run ``cfg.trials`` independent games and aggregate them.

    ``record``, if given, is extended with one outcome dict per trial.
    """
    shared = _trial_key(cfg.params, cfg.seed, None, True) if cfg.shared_key else None
    rows = map_trials(partial(play_trial, cfg, key=shared), cfg.trials, workers)
    if record is not None:
        record.extend(rows)
    return _stats_from_rows(rows)


# -- malleability of c2 -------------------------------------------------------


def subset_sum_table(weights):
    """Map every subset sum of ``weights`` to the list of masks achieving it.

    Masks are tuples of 0/1 over the weights in order.  Exponential in
    ``len(weights)``; this is the brute-force twin of the peeling decoder.
    """
    table = {0: [()]}
    for w in weights:
        grown = {}
        for total, masks in table.items():
            grown.setdefault(total, []).extend(m + (0,) for m in masks)
            grown.setdefault(total + w, []).extend(m + (1,) for m in masks)
        table = grown
    return table


def _brute_force_pass(table, priv, c2):
    return (c2 * priv.w_inv % priv.M) in table


def weight_masks(k, h):
    for ones in combinations(range(k), h):
        x = 0
        for i in ones:
            x |= 1 << (k - 1 - i)
        yield MaskVector(BitString(x, k))


def exhaustive_maul_counts(pk, sk, h, table=None):
    """Count legitimate mauls over every weight-``h`` mask and every index.

    Returns ``(population, decoder_passes, brute_force_passes)``;
    ``brute_force_passes`` is ``None`` when ``table`` is not supplied.
    """
    priv = sk.knapsack
    population = decoder = brute = 0
    for X in weight_masks(pk.params.k, h):
        c2 = ks.knapsack_encode(pk.knapsack, X)
        for ai in pk.knapsack.a:
            population += 1
            decoder += ks.knapsack_decode(priv, c2 + ai) is not None
            if table is not None:
                brute += _brute_force_pass(table, priv, c2 + ai)
    return population, decoder, (brute if table is not None else None)


@dataclass
class LegitimacyReport:
    params: SystemParams
    trials: int
    knapsack_passes: int
    decrypt_passes: int
    aliased: int
    oracle_passes: int = None
    exhaustive_keys: int = 0
    exhaustive_population: int = 0
    exhaustive_decoder_passes: int = 0
    exhaustive_oracle_passes: int = None

    @property
    def rate_knapsack_pass(self):
        return self.knapsack_passes / self.trials

    @property
    def rate_full_decrypt_pass(self):
        return self.decrypt_passes / self.trials

    @property
    def rate_oracle_pass(self):
        return None if self.oracle_passes is None else self.oracle_passes / self.trials

    @property
    def exhaustive_rate(self):
        if not self.exhaustive_population:
            return None
        return self.exhaustive_decoder_passes / self.exhaustive_population

    @property
    def exhaustive_oracle_rate(self):
        if self.exhaustive_oracle_passes is None:
            return None
        return self.exhaustive_oracle_passes / self.exhaustive_population

    @property
    def claimed_rate(self):
        return 2.0 ** -(self.params.k - 1)


def _legitimacy_trial(params, seed, t):
    pk, sk = _trial_key(params, seed, t, False)
    rng = derive_rng(seed, t, "maul")
    k = params.k
    X = precoder.gen_mask(k, params.h, rng)
    m = BitString(rng.getrandbits(k), k)
    c_star = encrypt(pk, m, rng, mask=X)
    i = rng.randrange(k)
    c2 = c_star.c2 + pk.knapsack.a[i]
    decoded = ks.knapsack_decode(sk.knapsack, c2)
    xi = X.bits.bit(i + 1)
    # the mask the forger intends: X with bit i switched on
    intended = X.bits.value | (1 << (k - 1 - i))
    row = {
        "trial": t,
        "i": i + 1,
        "x_i": xi,
        "knapsack_pass": int(decoded is not None),
        "decrypt_pass": int(isinstance(decrypt(sk, Ciphertext(c_star.c1, c2)), BitString)),
        "aliased": int(decoded is not None and (xi or decoded.bits.value != intended)),
    }
    if k <= EXHAUSTIVE_MAX_K:
        row["oracle_pass"] = int(_brute_force_pass(subset_sum_table(sk.knapsack.b), sk.knapsack, c2))
    return row


def measure_legitimacy_rate(params, trials, seed, exhaustive_keys=8, workers=1, record=None):
    """Measure how often mauled ciphertexts ``c2* + a_i`` survive decryption.

    Each trial draws a fresh key, an honest ciphertext and a uniform index
    ``i``.  For ``k <= EXHAUSTIVE_MAX_K`` every sample is also checked by
    brute-force subset-sum enumeration, and the full population of
    (mask, index) pairs is enumerated on the first ``exhaustive_keys`` keys
    both through the decoder and by brute force.
    """
    if trials < 1:
        raise ParameterError("trials must be >= 1")
    rows = map_trials(partial(_legitimacy_trial, params, seed), trials, workers)
    if record is not None:
        record.extend(rows)
    rep = LegitimacyReport(
        params=params,
        trials=trials,
        knapsack_passes=sum(r["knapsack_pass"] for r in rows),
        decrypt_passes=sum(r["decrypt_pass"] for r in rows),
        aliased=sum(r["aliased"] for r in rows),
    )
    if params.k <= EXHAUSTIVE_MAX_K:
        rep.oracle_passes = sum(r["oracle_pass"] for r in rows)
        rep.exhaustive_oracle_passes = 0
        for t in range(min(exhaustive_keys, trials)):
            pk, sk = _trial_key(params, seed, t, False)
            pop, dec, brute = exhaustive_maul_counts(pk, sk, params.h, subset_sum_table(sk.knapsack.b))
            rep.exhaustive_keys += 1
            rep.exhaustive_population += pop
            rep.exhaustive_decoder_passes += dec
            rep.exhaustive_oracle_passes += brute
    return rep


# -- query-family probes -----------------------------------------------------


@dataclass
class ProbeReport:
    which: str
    params: SystemParams
    trials: int
    answered: int = 0
    rejects: int = 0
    matches: int = 0
    bit_agree: list = field(default_factory=list)

    @property
    def match_rate(self):
        """Exact-match rate among queries the oracle answered with a plaintext."""
        return self.matches / self.answered if self.answered else 0.0

    @property
    def match_ci(self):
        return wilson_interval(self.matches, self.answered)

    @property
    def unconditional_rate(self):
        return self.matches / self.trials

    @property
    def predicted_rate(self):
        return 2.0 ** -(self.params.n_bits - self.params.k)

    @property
    def bit_agreement(self):
        return sum(self.bit_agree) / (self.answered * self.params.k) if self.answered else 0.0

    def chi_square(self):
        """Chi-square statistic and p-value for per-bit agreement = 1/2."""
        if not self.answered or not self.bit_agree:
            return None, None
        n = self.answered
        chi2 = sum((2 * a - n) ** 2 / n for a in self.bit_agree)
        return chi2, float(stats.chi2.sf(chi2, len(self.bit_agree)))

    def consistent_with_prediction(self):
        lo, hi = self.match_ci
        return lo <= self.predicted_rate <= hi


def _probe_trial(which, params, seed, t):
    pk, sk = _trial_key(params, seed, t, False)
    rng = derive_rng(seed, t, which)
    k = params.k
    m0, m1 = BitString(rng.getrandbits(k), k), BitString(rng.getrandbits(k), k)
    mb = (m0, m1)[rng.getrandbits(1)]
    X_star = precoder.gen_mask(k, params.h, rng)
    c_star = encrypt(pk, mb, rng, mask=X_star)
    oracle = DecryptionOracle(sk)
    oracle.challenge = c_star
    if which == "case1":
        while True:
            c1 = rng.randrange(pk.rsa.n)
            if c1 != c_star.c1:
                break
        query = Ciphertext(c1, c_star.c2)
    else:
        while True:
            X = precoder.gen_mask(k, params.h, rng)
            c2 = ks.knapsack_encode(pk.knapsack, X)
            if c2 != c_star.c2:
                break
        query = Ciphertext(c_star.c1, c2)
    out = oracle(query)
    row = {"trial": t, "answered": 0, "match": 0, "agree": ""}
    if isinstance(out, BitString):
        row["answered"] = 1
        row["match"] = int(out == mb)
        row["agree"] = str(BitString(~(out.value ^ mb.value) & ((1 << k) - 1), k))
    return row


def case_probe(which, params, trials, seed, workers=1, record=None):
    """Probe a single family of related-ciphertext queries.

    ``case1`` keeps ``c2*`` and substitutes a uniformly random ``c1 != c1*``;
    ``case2`` keeps ``c1*`` and substitutes the knapsack encoding of a fresh
    random mask.  The report counts oracle answers that reproduce the
    challenge message exactly and, per bit position, answers that agree
    with it.
    """
    if which not in ("case1", "case2"):
        raise ParameterError(f"unknown probe {which!r}")
    if trials < 1:
        raise ParameterError("trials must be >= 1")
    rows = map_trials(partial(_probe_trial, which, params, seed), trials, workers)
    if record is not None:
        record.extend(rows)
    rep = ProbeReport(which, params, trials, bit_agree=[0] * params.k)
    for r in rows:
        if r["answered"]:
            rep.answered += 1
            rep.matches += r["match"]
            for j, ch in enumerate(r["agree"]):
                rep.bit_agree[j] += ch == "1"
        else:
            rep.rejects += 1
    return rep
