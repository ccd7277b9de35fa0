"""Command-line front end.

Exit codes: 0 success, 1 I/O failure, 2 usage or parameter error,
3 decryption rejected.
"""

import argparse
import os
import random
import sys

from . import harness, keyfile, report
from .bitstring import BitString
from .errors import KnapRsaError
from .knapsack import density
from .pke import PrivateKey, PublicKey, Rejected, SystemParams, decrypt, encrypt, keygen

EXIT_OK, EXIT_IO, EXIT_USAGE, EXIT_REJECT = 0, 1, 2, 3

GAME_ADVERSARIES = ("random-guess", "maul-c2")
SIMULATIONS = GAME_ADVERSARIES + ("case1", "case2", "legitimacy-rate")


class CliError(Exception):
    def __init__(self, message, code):
        super().__init__(message)
        self.code = code


def _read(path):
    try:
        with open(path, "rb") as fh:
            return fh.read()
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc.strerror}", EXIT_IO) from None


def _write(path, data):
    if isinstance(data, str):
        data = data.encode()
    try:
        with open(path, "wb") as fh:
            fh.write(data)
    except OSError as exc:
        raise CliError(f"cannot write {path}: {exc.strerror}", EXIT_IO) from None


def _distinct(*paths):
    real = [os.path.realpath(p) for p in paths if p]
    if len(set(real)) != len(real):
        raise CliError("input and output paths must differ", EXIT_USAGE)


def _rng(seed):
    return random.SystemRandom() if seed is None else random.Random(seed)


def _load_key(path, kind):
    try:
        key = keyfile.parse_key(_read(path))
    except KnapRsaError as exc:
        raise CliError(f"{path}: {exc}", EXIT_USAGE) from None
    if not isinstance(key, kind):
        raise CliError(f"{path}: expected a {'public' if kind is PublicKey else 'private'} key", EXIT_USAGE)
    return key


def cmd_keygen(args):
    _distinct(args.out_pub, args.out_priv)
    params = SystemParams(k=args.k, n_bits=args.nbits, h=args.h, safe_primes=args.safe)
    pk, sk = keygen(params, _rng(args.seed), e=args.e)
    _write(args.out_pub, keyfile.serialize_key(pk))
    _write(args.out_priv, keyfile.serialize_key(sk))
    layout = params.layout()
    print(f"k={params.k} nbits={params.n_bits} h={params.h} v={layout.v} s={layout.s} L={layout.L} "
          f"safe_primes={int(params.safe_primes)} e={pk.rsa.e}")
    print(f"density={density(pk.knapsack):.4f}")
    return EXIT_OK


def cmd_encrypt(args):
    _distinct(args.pub, args.input, args.out)
    pk = _load_key(args.pub, PublicKey)
    try:
        m = keyfile.parse_message(_read(args.input))
    except KnapRsaError as exc:
        raise CliError(f"{args.input}: {exc}", EXIT_USAGE) from None
    k = pk.params.k
    if len(m) < k and args.pad:
        m = BitString(m.value, k)
    if len(m) != k:
        raise CliError(f"message has {len(m)} bits, key expects {k} (use --pad for short input)", EXIT_USAGE)
    _write(args.out, keyfile.serialize_ciphertext(encrypt(pk, m, _rng(args.seed))))
    return EXIT_OK


def cmd_decrypt(args):
    _distinct(args.priv, args.input, args.out)
    sk = _load_key(args.priv, PrivateKey)
    try:
        c = keyfile.parse_ciphertext(_read(args.input))
    except KnapRsaError as exc:
        raise CliError(f"{args.input}: {exc}", EXIT_USAGE) from None
    out = decrypt(sk, c)
    if isinstance(out, Rejected):
        print(f"REJECT {out.reason.value}")
        return EXIT_REJECT
    _write(args.out, keyfile.serialize_message(out))
    return EXIT_OK


def cmd_inspect(args):
    key = _load_key(args.key, (PublicKey, PrivateKey))
    pk = key if isinstance(key, PublicKey) else key.public()
    layout = pk.params.layout()
    kind = "public" if key is pk else "private"
    print(f"type={kind}")
    print(f"k={pk.params.k}\nnbits={pk.params.n_bits}\nh={pk.params.h}\nv={layout.v}\ns={layout.s}\nL={layout.L}")
    print(f"e={pk.rsa.e}\ndensity={density(pk.knapsack):.4f}")
    return EXIT_OK


def run_simulation(args):
    """Run the selected experiment; returns ``(fields, rows, result)``."""
    params = SystemParams(k=args.k, n_bits=args.nbits, h=args.h, safe_primes=args.safe)
    rows = []
    if args.adversary in GAME_ADVERSARIES:
        cfg = harness.GameConfig(params, args.trials, args.seed, args.adversary, shared_key=args.shared_key)
        result = harness.run_game(cfg, workers=args.workers, record=rows)
        fields = report.game_fields(cfg, result)
    elif args.adversary == "legitimacy-rate":
        result = harness.measure_legitimacy_rate(params, args.trials, args.seed, workers=args.workers, record=rows)
        fields = report.legitimacy_fields(result, args.seed)
    else:
        result = harness.case_probe(args.adversary, params, args.trials, args.seed, workers=args.workers, record=rows)
        fields = report.probe_fields(result, args.seed)
    return fields, rows, result


def cmd_simulate(args):
    if args.adversary not in SIMULATIONS:
        raise CliError(f"unknown adversary {args.adversary!r}; choose from {', '.join(SIMULATIONS)}", EXIT_USAGE)
    if args.trials < 1:
        raise CliError("--trials must be >= 1", EXIT_USAGE)
    fields, rows, result = run_simulation(args)
    text = report.render(fields)
    if args.report:
        _write(args.report, text)
    else:
        sys.stdout.write(text)
    if args.csv:
        _write(args.csv, report.rows_to_csv(rows))
    if args.figure:
        from . import plotting

        if args.adversary in GAME_ADVERSARIES:
            plotting.plot_game(rows, args.figure, title=args.adversary)
        elif args.adversary == "legitimacy-rate":
            plotting.plot_legitimacy(result, args.figure)
        else:
            plotting.plot_probe(result, args.figure)
    return EXIT_OK


def _add_params(p, k, nbits, safe):
    p.add_argument("--k", type=int, default=k, help="message / knapsack length")
    p.add_argument("--nbits", type=int, default=nbits, help="RSA modulus bit length")
    p.add_argument("--h", type=int, default=None, help="mask weight (default k/2)")
    p.add_argument("--safe", dest="safe", action="store_true", default=safe, help="use safe primes")
    p.add_argument("--no-safe", dest="safe", action="store_false")


def build_parser():
    parser = argparse.ArgumentParser(prog="knaprsa", description="RSA + knapsack hybrid encryption")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("keygen", help="generate a keypair")
    _add_params(p, 64, 128, True)
    p.add_argument("--e", type=int, default=None, help="fixed public exponent (default: smallest valid)")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out-pub", required=True)
    p.add_argument("--out-priv", required=True)
    p.set_defaults(func=cmd_keygen)

    p = sub.add_parser("encrypt", help="encrypt a message file")
    p.add_argument("--pub", required=True)
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--pad", action="store_true", help="left-pad short messages with zeros")
    p.set_defaults(func=cmd_encrypt)

    p = sub.add_parser("decrypt", help="decrypt a ciphertext file")
    p.add_argument("--priv", required=True)
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_decrypt)

    p = sub.add_parser("inspect", help="print a key's parameters")
    p.add_argument("key")
    p.set_defaults(func=cmd_inspect)

    p = sub.add_parser("simulate", help="run a chosen-ciphertext experiment")
    p.add_argument("--adversary", required=True, help=", ".join(SIMULATIONS))
    _add_params(p, 16, 32, True)
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--report", default=None, help="report path (default stdout)")
    p.add_argument("--csv", default=None, help="per-trial outcomes as CSV")
    p.add_argument("--figure", default=None, help="render a PNG figure of the result")
    p.add_argument("--shared-key", action="store_true", help="one keypair for all game trials")
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_simulate)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except KnapRsaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
