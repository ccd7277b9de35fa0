"""``key=value`` text reports and per-trial CSV for harness experiments."""

import csv
import io


def _fmt(value):
    if isinstance(value, bool):
        return str(int(value))
    if isinstance(value, float):
        return format(value, ".10g")
    if value is None:
        return "na"
    return str(value)


def render(fields):
    """Render an ordered mapping as LF-terminated ``key=value`` lines."""
    return "".join(f"{key}={_fmt(value)}\n" for key, value in fields.items())


def _params(params):
    return {"k": params.k, "nbits": params.n_bits, "h": params.h, "safe_primes": params.safe_primes}


def game_fields(cfg, stats):
    return {
        "experiment": cfg.adversary,
        **_params(cfg.params),
        "trials": stats.trials,
        "seed": cfg.seed,
        "shared_key": cfg.shared_key,
        "wins": stats.wins,
        "win_rate": stats.win_rate,
        "advantage": stats.advantage,
        "ci95": stats.ci95,
        "oracle_queries": stats.oracle_queries,
        "rejects": stats.rejects,
        "refused": stats.refused,
        "aborted": stats.aborted,
    }


def probe_fields(rep, seed):
    lo, hi = rep.match_ci
    chi2, pvalue = rep.chi_square()
    return {
        "experiment": rep.which,
        **_params(rep.params),
        "trials": rep.trials,
        "seed": seed,
        "answered": rep.answered,
        "rejects": rep.rejects,
        "matches": rep.matches,
        "match_rate": rep.match_rate,
        "match_ci95_low": lo,
        "match_ci95_high": hi,
        "unconditional_match_rate": rep.unconditional_rate,
        "predicted_rate": rep.predicted_rate,
        "consistent_with_prediction": rep.consistent_with_prediction(),
        "bit_agreement": rep.bit_agreement,
        "bit_agreement_chi2": chi2,
        "bit_agreement_pvalue": pvalue,
    }


def legitimacy_fields(rep, seed):
    return {
        "experiment": "legitimacy-rate",
        **_params(rep.params),
        "trials": rep.trials,
        "seed": seed,
        "rate_knapsack_pass": rep.rate_knapsack_pass,
        "rate_full_decrypt_pass": rep.rate_full_decrypt_pass,
        "rate_aliased": rep.aliased / rep.trials,
        "rate_oracle_pass": rep.rate_oracle_pass,
        "exhaustive_keys": rep.exhaustive_keys,
        "exhaustive_population": rep.exhaustive_population,
        "exhaustive_rate_knapsack_pass": rep.exhaustive_rate,
        "exhaustive_oracle_rate": rep.exhaustive_oracle_rate,
        "claimed_rate": rep.claimed_rate,
    }


def rows_to_csv(rows):
    if not rows:
        return ""
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({k: _fmt(v) for k, v in row.items()})
    return buf.getvalue()
