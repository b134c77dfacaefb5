"""Command-line front end: setup / encrypt / decrypt / game / attack /
verify / bench, all seeded and all emitting deterministic JSON reports.

Exit codes: 0 pass or complete, 1 verdict failure, 2 usage error,
3 capacity or sampling error.  The master seed comes from --seed or the
WEAK_TT_SEED environment variable; every randomized step derives its own
seed from the master via a labelled hash path, so a report is a pure
function of (argv, seed).
"""

from __future__ import annotations

import argparse
import os
import sys
import time
from fractions import Fraction

from . import dp_attack, games, stats
from . import short_ctext, short_key
from .errors import CapacityError, ConfigurationError, ParameterError, SamplingFailureError
from .registry import SHORT_CTEXT, SHORT_KEY, scheme_ops
from .reporting import canonical_json, make_report, write_report
from .seeding import derive

EXIT_OK = 0
EXIT_VERDICT_FAIL = 1
EXIT_USAGE = 2
EXIT_CAPACITY = 3


def seed_derive(master: int, labels, nbytes: int = 16) -> bytes:
    """Seed for a labelled sub-experiment of a 64-bit master seed."""
    return derive(master, *labels, nbytes=nbytes)


def _master_seed(args) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get("WEAK_TT_SEED")
    if env is not None:
        return int(env)
    raise ParameterError("no seed: pass --seed or set WEAK_TT_SEED")


def _params_for(scheme: str, n: int, lambda_bits: int, m: int | None, desk: bool = False):
    # Experiment harnesses (game, attack) default to a desk-scale m: only the
    # m/n ratio drives the testable statistics, and the asymptotic formula
    # would make per-trial setups enumerate millions of points.
    if m is None and desk:
        m = 8 * n
    if scheme == SHORT_CTEXT:
        return short_ctext.SchemeParamsSC(n=n, lambda_bits=lambda_bits, m=m)
    return short_key.SchemeParamsSK(n=n, lambda_bits=lambda_bits, m=m)


def _provenance(scheme: str, params, desk: bool = False) -> dict:
    exponent = 7 if scheme == SHORT_CTEXT else 6
    formula = "desk-scale default m = 8n" if desk else f"m(n) = n^{exponent} * ceil(log2 n)^2"
    return {
        "m_formula": f"{formula} unless overridden; resolved m = {params.m}",
        "prg": "SHAKE128 under tag weak-tt.prg.v1, lambda/2 -> lambda bits",
        "seeding": "all randomness derived from the master seed via weak-tt.derive.v1 label paths",
    }


def _load_keys(path: str):
    import json

    with open(path, "r", encoding="utf-8") as fh:
        data = json.load(fh)
    scheme = data["params"]["scheme"]
    if scheme == SHORT_CTEXT:
        return scheme, short_ctext.SetupSC.from_json(data)
    if scheme == SHORT_KEY:
        return scheme, short_key.SetupSK.from_json(data)
    raise ConfigurationError(f"keys file has unknown scheme {scheme!r}")


def _cmd_setup(args) -> int:
    seed = _master_seed(args)
    params = _params_for(args.scheme, args.n, args.lam, args.m)
    ops = scheme_ops(args.scheme)
    setup_result = ops.setup(params, seed_derive(seed, ("setup",)))
    text = canonical_json(setup_result.to_json()) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _cmd_encrypt(args) -> int:
    seed = _master_seed(args)
    scheme, setup_result = _load_keys(args.keys)
    ct = scheme_ops(scheme).encrypt(setup_result.master, args.index, seed_derive(seed, ("encrypt",)))
    payload = ct if scheme == SHORT_CTEXT else ct.to_json()
    report = make_report(
        "encrypt",
        {"scheme": scheme, "index": args.index, "seed": seed},
        {"ciphertext": payload},
        _provenance(scheme, setup_result.params),
    )
    if args.json:
        sys.stdout.write(canonical_json(report) + "\n")
    elif scheme == SHORT_CTEXT:
        sys.stdout.write(f"{ct}\n")
    else:
        sys.stdout.write(canonical_json(payload) + "\n")
    if args.out:
        write_report(report, args.out)
    return EXIT_OK


def _cmd_decrypt(args) -> int:
    scheme, setup_result = _load_keys(args.keys)
    user = setup_result.users[args.user - 1]
    if user.i != args.user:
        raise ParameterError("keys file rows are out of order")
    if scheme == SHORT_CTEXT:
        ct = int(args.ciphertext)
    else:
        import json

        with open(args.ciphertext, "r", encoding="utf-8") as fh:
            ct = short_key.CiphertextSK.from_json(json.load(fh))
    value = scheme_ops(scheme).decrypt(user, ct)
    report = make_report(
        "decrypt",
        {"scheme": scheme, "user": args.user},
        {"plaintext": "bot" if value is None else value},
    )
    if args.json:
        sys.stdout.write(canonical_json(report) + "\n")
    else:
        sys.stdout.write(("bot" if value is None else str(value)) + "\n")
    if args.out:
        write_report(report, args.out)
    return EXIT_OK


def _cmd_game(args) -> int:
    seed = _master_seed(args)
    adversary = games.make_adversary(args.adversary)
    game_seed = seed_derive(seed, ("game", args.game))
    if args.game in ("index-hiding", "two-index"):
        params = _params_for(args.scheme, args.n, args.lam, args.m, desk=True)
        runner = games.run_index_hiding if args.game == "index-hiding" else games.run_two_index_hiding
        result = runner(
            args.scheme, params, args.i_star, adversary, trials=args.trials, seed=game_seed,
            hybrid_level=args.hybrid_level, threads=args.threads,
        )
        config = {
            "game": args.game, "scheme": args.scheme, "n": args.n, "m": params.m,
            "lambda": args.lam, "i_star": args.i_star, "adversary": args.adversary,
            "trials": args.trials, "seed": seed, "hybrid_level": args.hybrid_level,
        }
        provenance = _provenance(args.scheme, params, desk=args.m is None)
    elif args.game == "puncture":
        result = games.run_puncture_game(
            args.domain, args.range, args.x_star, adversary, trials=args.trials,
            seed=game_seed, lambda_bits=args.lam, threads=args.threads,
        )
        config = {
            "game": args.game, "domain": args.domain, "range": args.range,
            "x_star": args.x_star, "adversary": args.adversary, "trials": args.trials,
            "seed": seed, "lambda": args.lam,
        }
        provenance = {}
    else:  # input-matching
        result = games.run_input_matching(
            args.domain, args.range, args.y0, args.y1, adversary, trials=args.trials,
            seed=game_seed, lambda_bits=args.lam, threads=args.threads,
        )
        config = {
            "game": args.game, "m": args.domain, "n": args.range, "y0": args.y0,
            "y1": args.y1, "adversary": args.adversary, "trials": args.trials,
            "seed": seed, "lambda": args.lam,
        }
        provenance = {}
    report = make_report("game", config, result.to_json(), provenance)
    sys.stdout.write(write_report(report, args.out))
    return EXIT_OK


def _cmd_attack(args) -> int:
    seed = _master_seed(args)
    params = _params_for(args.scheme, args.n, args.lam, args.m, desk=True)
    mechanism = {"exact": "exact-table", "raw": "raw-dataset"}.get(args.mechanism, args.mechanism)
    report_payload = dp_attack.privacy_violation_experiment(
        args.scheme, params, mechanism, args.runs,
        seed=seed_derive(seed, ("attack",)),
        samples_per_index=args.samples,
    )
    config = {
        "scheme": args.scheme, "n": args.n, "m": params.m, "lambda": args.lam,
        "mechanism": mechanism, "runs": args.runs, "samples_per_index": args.samples,
        "seed": seed,
    }
    provenance = _provenance(args.scheme, params, desk=args.m is None)
    provenance["noise"] = dp_attack.NOISY_TABLE_SIGMA_FORMULA
    provenance["thresholds"] = "accuracy 1/3 (toleration alpha), tracer gap 1/n, (epsilon, delta) = (1, 1/2n)"
    report = make_report("attack", config, report_payload.to_json(), provenance)
    sys.stdout.write(write_report(report, args.out))
    return EXIT_OK


def _cmd_verify(args) -> int:
    seed_needed = args.check == "correctness"
    seed = _master_seed(args) if seed_needed else (args.seed or 0)
    if args.check == "correctness":
        params = _params_for(args.scheme, args.n, args.lam, args.m)
        ops = scheme_ops(args.scheme)
        failures = 0
        checked = 0
        for rep in range(args.setups):
            setup_result = ops.setup(params, seed_derive(seed, ("verify", rep)))
            for j in range(args.n + 1):
                if args.scheme == SHORT_CTEXT:
                    cts = setup_result.master.preimages(j)
                else:
                    cts = [
                        ops.encrypt(setup_result.master, j, seed_derive(seed, ("verify", rep, j)))
                    ]
                for ct in cts:
                    for user in setup_result.users:
                        checked += 1
                        if ops.decrypt(user, ct) != int(user.i <= j):
                            failures += 1
        results = {"checked": checked, "failures": failures}
        config = {
            "check": "correctness", "scheme": args.scheme, "n": args.n, "m": params.m,
            "lambda": args.lam, "setups": args.setups, "seed": seed,
        }
        report = make_report("verify", config, results, _provenance(args.scheme, params))
        sys.stdout.write(write_report(report, args.out))
        return EXIT_OK if failures == 0 else EXIT_VERDICT_FAIL

    if args.check == "lemma-hash":
        if args.family == "all":
            spec = stats.all_functions_family(
                args.t, args.k, subset=range(args.m_size), target=args.y
            )
        elif args.family.startswith("seeds:"):
            # Explicit seed list: the family is the GGM PRF restricted to
            # [T] -> [K], one table per listed seed, exact w.r.t. that list.
            import json as _json

            from .primitives import fresh_prf_key

            with open(args.family.split(":", 1)[1], "r", encoding="utf-8") as fh:
                seed_list = _json.load(fh)
            tables = [
                fresh_prf_key(derive(int(s), "family"), args.t, args.k, lambda_bits=args.lam).table()
                for s in seed_list
            ]
            spec = stats.seeded_family(
                tables, T=args.t, K=args.k, subset=range(args.m_size), target=args.y,
                description=f"seeded({len(tables)})",
            )
        else:
            raise ConfigurationError("--family must be 'all' or 'seeds:<file>'")
        rep = stats.verify_conditional_hash_lemma(spec)
        config = {
            "check": "lemma-hash", "t": args.t, "k": args.k, "m_size": args.m_size,
            "y": args.y, "family": args.family,
        }
        report = make_report(
            "verify", config, rep.to_json(),
            {"bound": "SD <= (1/2) sqrt(K/m + 7 K^2 delta); proof form uses (K-1)/m"},
        )
        sys.stdout.write(write_report(report, args.out))
        ok = rep.passes_statement and rep.passes_proof and rep.passes_rd
        return EXIT_OK if ok else EXIT_VERDICT_FAIL

    if args.check == "xor-identity":
        from .seeding import stream as mk_stream

        st = mk_stream(seed, "xor-identity")
        cases = [(Fraction(1), Fraction(0)), (Fraction(1, 2), Fraction(1, 2)), (Fraction(3, 4), Fraction(1, 4))]
        for _ in range(args.pairs):
            cases.append((Fraction(st.bits(16), 2**16), Fraction(st.bits(16), 2**16)))
        rows = []
        for q0, q1 in cases:
            adv, two_adv = games.xor_identity_exact(q0, q1)
            rows.append({"q0": q0, "q1": q1, "adv": adv, "two_adv": two_adv})
        config = {"check": "xor-identity", "pairs": args.pairs, "seed": seed}
        report = make_report(
            "verify", config, {"cases": rows, "identity": "two_adv = 2 * adv^2, exact"},
        )
        sys.stdout.write(write_report(report, args.out))
        return EXIT_OK

    if args.check == "sd-rd":
        spec = stats.all_functions_family(args.t, args.k, subset=range(args.m_size), target=args.y)
        d1, d2, _ = stats.conditioned_pair(spec)
        sd = stats.statistical_distance(d1, d2)
        rd = stats.renyi_divergence(d1, d2)
        ok = stats.sd_rd_consistent(sd, rd)
        config = {"check": "sd-rd", "t": args.t, "k": args.k, "m_size": args.m_size, "y": args.y}
        report = make_report(
            "verify", config,
            {"sd": sd, "rd": rd if rd != stats.INF else "inf", "consistent": ok,
             "bound": "SD <= sqrt(RD - 1) / 2, compared on squares"},
        )
        sys.stdout.write(write_report(report, args.out))
        return EXIT_OK if ok else EXIT_VERDICT_FAIL

    raise ConfigurationError(f"unknown verify check {args.check!r}")


def _cmd_bench(args) -> int:
    seed = _master_seed(args)
    params = _params_for(args.scheme, args.n, args.lam, args.m)
    ops = scheme_ops(args.scheme)
    t0 = time.perf_counter()
    setup_result = ops.setup(params, seed_derive(seed, ("bench", "setup")))
    t1 = time.perf_counter()
    ct = ops.encrypt(setup_result.master, params.n, seed_derive(seed, ("bench", "enc")))
    t2 = time.perf_counter()
    ops.decrypt(setup_result.users[0], ct)
    t3 = time.perf_counter()
    if args.scheme == SHORT_CTEXT:
        ct_size = {"kind": "integer", "value_bits": max(1, int(ct).bit_length()), "space_bits": (params.m - 1).bit_length()}
        key_size = {"serialized_bytes": len(canonical_json(setup_result.users[0].to_json()))}
    else:
        ct_size = {"kind": "program", "serialized_bytes": len(ct.serialize())}
        key_size = {"key_bits": (params.n - 1).bit_length() + (params.m - 1).bit_length()}
    # Wall-clock timings go to stderr only: reports stay byte-identical.
    sys.stderr.write(
        f"setup {1e3 * (t1 - t0):.1f} ms, encrypt {1e3 * (t2 - t1):.1f} ms, "
        f"decrypt {1e3 * (t3 - t2):.1f} ms\n"
    )
    results = {"ciphertext": ct_size, "user_key": key_size, "n": params.n, "m": params.m}
    config = {"scheme": args.scheme, "n": args.n, "m": params.m, "lambda": args.lam, "seed": seed}
    report = make_report("bench", config, results, _provenance(args.scheme, params))
    sys.stdout.write(write_report(report, args.out))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="weak-tt", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, scheme=True):
        p.add_argument("--seed", type=int, default=None, help="64-bit master seed (or WEAK_TT_SEED)")
        p.add_argument("--out", type=str, default=None, help="report file path")
        p.add_argument("--json", action="store_true", help="print the full report JSON to stdout")
        p.add_argument("--threads", type=int, default=1,
                       help="trial parallelism; identical results for any value")
        p.add_argument("--lambda", dest="lam", type=int, default=128)
        if scheme:
            p.add_argument("--scheme", choices=[SHORT_CTEXT, SHORT_KEY], default=SHORT_CTEXT)
            p.add_argument("--n", type=int, default=4)
            p.add_argument("--m", type=int, default=None, help="override the ciphertext/key-space size")

    p = sub.add_parser("setup", help="generate user keys and the master key")
    common(p)
    p.set_defaults(fn=_cmd_setup)

    p = sub.add_parser("encrypt", help="encrypt an index under a keys file")
    p.add_argument("--keys", required=True)
    p.add_argument("--index", type=int, required=True)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", type=str, default=None)
    p.add_argument("--json", action="store_true")
    p.set_defaults(fn=_cmd_encrypt)

    p = sub.add_parser("decrypt", help="decrypt with a user key from a keys file")
    p.add_argument("--keys", required=True)
    p.add_argument("--user", type=int, required=True)
    p.add_argument("--ciphertext", required=True, help="integer (short-ctext) or program file (short-key)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", type=str, default=None)
    p.add_argument("--json", action="store_true")
    p.set_defaults(fn=_cmd_decrypt)

    p = sub.add_parser("game", help="run a security game")
    p.add_argument("game", choices=["index-hiding", "two-index", "puncture", "input-matching"])
    common(p)
    p.add_argument("--i-star", dest="i_star", type=int, default=1)
    p.add_argument("--adversary", type=str, default="constant")
    p.add_argument("--trials", type=int, default=games.DEFAULT_TRIALS)
    p.add_argument("--hybrid-level", dest="hybrid_level", type=int, default=None)
    p.add_argument("--domain", type=int, default=64, help="PRF domain (puncture / input-matching)")
    p.add_argument("--range", type=int, default=8, help="PRF range (puncture / input-matching)")
    p.add_argument("--x-star", dest="x_star", type=int, default=0)
    p.add_argument("--y0", type=int, default=0)
    p.add_argument("--y1", type=int, default=1)
    p.set_defaults(fn=_cmd_game)

    p = sub.add_parser("attack", help="run the tracing attack experiment")
    common(p)
    p.add_argument("--mechanism", choices=["exact", "raw", "noisy-table", "noisy-histogram"], default="exact")
    p.add_argument("--runs", type=int, default=20)
    p.add_argument("--samples", type=int, default=200, help="trace samples per index")
    p.set_defaults(fn=_cmd_attack)

    p = sub.add_parser("verify", help="run an exact verification")
    p.add_argument("check", choices=["correctness", "lemma-hash", "xor-identity", "sd-rd"])
    common(p)
    p.add_argument("--setups", type=int, default=10)
    p.add_argument("--t", type=int, default=2)
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--m-size", dest="m_size", type=int, default=2)
    p.add_argument("--y", type=int, default=0)
    p.add_argument("--family", type=str, default="all")
    p.add_argument("--pairs", type=int, default=100)
    p.set_defaults(fn=_cmd_verify)

    p = sub.add_parser("bench", help="structural sizes and op timings (timings to stderr)")
    common(p)
    p.set_defaults(fn=_cmd_bench)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except (ParameterError, ConfigurationError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE
    except (CapacityError, SamplingFailureError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_CAPACITY


if __name__ == "__main__":
    sys.exit(main())
