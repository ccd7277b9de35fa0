"""Line-oriented text formats for keys, ciphertexts and messages.

All integers are lowercase big-endian hex without leading zeros (``0`` for
zero); counts are plain decimal.  Files are LF-terminated ``key=value``
lines in a fixed order, and parsing accepts only that canonical form, so
``serialize(parse(data)) == data`` for every accepted file.
"""

import math
import re

from .bitstring import BitString
from .errors import FormatError, KnapRsaError
from .knapsack import KnapsackPrivate, KnapsackPublic
from .pke import Ciphertext, PrivateKey, PublicKey, SystemParams
from .rsa import RsaPrivate, RsaPublic

PUBLIC_HEADER = "KNAPRSA PUBLIC KEY v1"
PRIVATE_HEADER = "KNAPRSA PRIVATE KEY v1"

_PUBLIC_FIELDS = ("k", "nbits", "h", "e", "n", "a")
_PRIVATE_FIELDS = _PUBLIC_FIELDS + ("b", "w", "bigm", "d", "p", "q")
_DECIMAL_FIELDS = {"k", "nbits", "h", "len"}
_LIST_FIELDS = {"a", "b"}

_HEX = re.compile(r"0|[1-9a-f][0-9a-f]*")
_DEC = re.compile(r"0|[1-9][0-9]*")


def _hex(x):
    return format(x, "x")


def _parse_hex(text, name):
    if not _HEX.fullmatch(text):
        raise FormatError(f"not canonical lowercase hex: {text[:40]!r}", name)
    return int(text, 16)


def _parse_dec(text, name):
    if not _DEC.fullmatch(text) or len(text) > 12:
        raise FormatError(f"not a canonical decimal count: {text[:40]!r}", name)
    return int(text)


def _lines(data):
    if isinstance(data, str):
        data = data.encode()
    try:
        text = data.decode("ascii")
    except UnicodeDecodeError:
        raise FormatError("file is not ASCII") from None
    if not text.endswith("\n") or "\r" in text:
        raise FormatError("file must be LF-terminated lines")
    return text[:-1].split("\n")


def _fields(lines, names):
    """Split ``key=value`` lines, requiring exactly ``names`` in order."""
    if len(lines) != len(names):
        raise FormatError(f"expected {len(names)} fields, found {len(lines)}")
    values = {}
    for line, name in zip(lines, names):
        key, sep, raw = line.partition("=")
        if not sep or key != name:
            raise FormatError(f"expected field {name!r}, found {line[:40]!r}", name)
        if name in _DECIMAL_FIELDS:
            values[name] = _parse_dec(raw, name)
        elif name in _LIST_FIELDS:
            values[name] = tuple(_parse_hex(item, name) for item in raw.split(","))
        else:
            values[name] = _parse_hex(raw, name)
    return values


def _render(header, pairs):
    out = [header] if header else []
    for key, value in pairs:
        if isinstance(value, tuple):
            value = ",".join(_hex(x) for x in value)
        elif key in _DECIMAL_FIELDS:
            value = str(value)
        else:
            value = _hex(value)
        out.append(f"{key}={value}")
    return ("\n".join(out) + "\n").encode("ascii")


def serialize_key(key):
    if isinstance(key, PublicKey):
        pk, header, extra = key, PUBLIC_HEADER, []
    elif isinstance(key, PrivateKey):
        pk, header = key.public(), PRIVATE_HEADER
        kp = key.knapsack
        extra = [("b", kp.b), ("w", kp.w), ("bigm", kp.M), ("d", key.rsa.d), ("p", key.rsa.p), ("q", key.rsa.q)]
    else:
        raise TypeError(f"not a key: {type(key).__name__}")
    pairs = [
        ("k", pk.params.k),
        ("nbits", pk.params.n_bits),
        ("h", pk.params.h),
        ("e", pk.rsa.e),
        ("n", pk.rsa.n),
        ("a", pk.knapsack.a),
    ]
    return _render(header, pairs + extra)


def _check(cond, message, name):
    if not cond:
        raise FormatError(message, name)


def _params(v):
    _check(v["k"] >= 3, "must be >= 3", "k")
    _check(v["k"] < v["nbits"], "must exceed k", "nbits")
    try:
        return SystemParams(k=v["k"], n_bits=v["nbits"], h=v["h"], safe_primes=False)
    except KnapRsaError as exc:
        raise FormatError(str(exc), "h") from None


def _public_from(v):
    params = _params(v)
    k = params.k
    _check(len(v["a"]) == k, f"expected {k} weights", "a")
    _check(all(x > 0 for x in v["a"]), "weights must be positive", "a")
    _check(v["n"].bit_length() == params.n_bits, "bit length differs from nbits", "n")
    _check(1 < v["e"] < v["n"] and v["e"] & 1, "must be odd and in (1, n)", "e")
    return PublicKey(KnapsackPublic(k, v["a"]), RsaPublic(v["n"], v["e"]), params)


def _private_from(v):
    pk = _public_from(v)
    k = pk.params.k
    b, w, M = v["b"], v["w"], v["bigm"]
    _check(len(b) == k, f"expected {k} weights", "b")
    c = []
    for i, bi in enumerate(b):
        _check(bi > 0 and bi % (1 << i) == 0, f"b_{i + 1} is not a multiple of 2^{i}", "b")
        c.append(bi >> i)
    _check(M > sum(b), "must exceed the sum of b", "bigm")
    _check(0 < w < M and math.gcd(w, M) == 1, "must be a unit in (0, bigm)", "w")
    try:
        kpriv = KnapsackPrivate.from_seeds(c, M, w)
    except KnapRsaError as exc:
        raise FormatError(str(exc), "b") from None
    _check(kpriv.public().a == pk.knapsack.a, "a_i != b_i * w mod bigm", "a")
    p, q, d = v["p"], v["q"], v["d"]
    n, e = pk.rsa.n, pk.rsa.e
    _check(p * q == n and p != q and p > 1 and q > 1, "n != p * q for distinct p, q", "n")
    phi = (p - 1) * (q - 1)
    _check(1 < e < phi, "e must lie in (1, phi)", "e")
    _check(1 < d < phi and e * d % phi == 1, "e * d != 1 mod phi", "d")
    sk = PrivateKey(kpriv, RsaPrivate(p, q, d), pk.rsa, pk.params)
    try:
        sk.validate()
    except KnapRsaError as exc:
        raise FormatError(str(exc), "p") from None
    return sk


def parse_key(data):
    """Parse either key type; raises :class:`FormatError` naming the bad field."""
    lines = _lines(data)
    header, body = lines[0], lines[1:]
    if header == PUBLIC_HEADER:
        return _public_from(_fields(body, _PUBLIC_FIELDS))
    if header == PRIVATE_HEADER:
        return _private_from(_fields(body, _PRIVATE_FIELDS))
    raise FormatError(f"unknown header {header[:40]!r}")


def serialize_ciphertext(c):
    return _render(None, [("c1", c.c1), ("c2", c.c2)])


def parse_ciphertext(data):
    v = _fields(_lines(data), ("c1", "c2"))
    return Ciphertext(v["c1"], v["c2"])


def serialize_message(m):
    """``len=<bits>`` followed by the bits' numeric value in hex."""
    return _render(None, [("len", m.length), ("m", m.value)])


def parse_message(data):
    v = _fields(_lines(data), ("len", "m"))
    if v["m"].bit_length() > v["len"]:
        raise FormatError(f"value does not fit in {v['len']} bits", "m")
    return BitString(v["m"], v["len"])
