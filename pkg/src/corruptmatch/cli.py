"""Command-line interface.

Subcommands: gen (sample a correlated pair), corrupt (apply a corruption
model to a serialized pair), match (run one matcher on a serialized
instance), sweep (full Monte-Carlo experiment), theory (threshold report),
verify (statistical suites; nonzero exit on failure).
"""

from __future__ import annotations

import argparse
import json
import sys

from . import __version__
from .corruption import (
    adversary_imitation,
    adversary_overwhelm,
    load_instance,
    load_pair,
    sample_wcg_with_pair,
    save_instance,
    save_pair,
)
from .errors import CorruptMatchError
from .graphs import matching_to_json, precision, overlap, sample_cer
from .harness import ALGORITHMS, ExperimentConfig, run_sweep, score_matching
from .matchers import default_k
from .rng import make_rng
from .theory import threshold_report
from .verify import available_suites, run_suite

MATCH_ALGOS = ("grampa", "degprof", "canon", "kcore", "maxov")


def _cmd_gen(args: argparse.Namespace) -> int:
    rng = make_rng(args.seed)
    pair = sample_cer(args.n, args.p, args.s, rng)
    save_pair(pair, args.out)
    print(f"wrote correlated pair (n={args.n}, p={args.p}, s={args.s}) to {args.out}")
    return 0


def _cmd_corrupt(args: argparse.Namespace) -> int:
    pair = load_pair(args.input)
    if args.model == "wcg":
        rng = make_rng(args.seed)
        inst, _ = sample_wcg_with_pair(pair.n, pair.p, pair.s, args.gamma, args.lam, rng)
        print("note: wcg resamples a fresh correlated pair (the model is a joint distribution)")
    elif args.model == "imitation":
        inst = adversary_imitation(
            pair.g1, pair.g2, pair.pi_star, args.gamma, args.lam, p=pair.p, s=pair.s
        )
    else:
        inst = adversary_overwhelm(
            pair.g1, pair.g2, pair.pi_star, args.gamma, p=pair.p, s=pair.s
        )
    save_instance(inst, args.out)
    print(f"wrote {inst.params.model} instance (gamma={args.gamma}) to {args.out}")
    return 0


def _cmd_match(args: argparse.Namespace) -> int:
    inst = load_instance(args.input)
    params = {}
    if args.k is not None:
        params["k"] = args.k
    if args.eta is not None:
        params["eta"] = args.eta
    if args.seed_count is not None:
        params["seed_count"] = args.seed_count
    spec = ALGORITHMS[args.algo]
    mu = spec.run(inst, make_rng(args.seed), params)
    result = {"algo": args.algo, "n": inst.n, "matching": matching_to_json(mu)}
    result.update(score_matching(inst, mu))
    if args.out:
        with open(args.out, "w", encoding="ascii") as fh:
            json.dump(matching_to_json(mu), fh)
            fh.write("\n")
    print(json.dumps({k: v for k, v in result.items() if k != "matching"}, indent=2))
    return 0


def _cmd_sweep(args: argparse.Namespace) -> int:
    config = ExperimentConfig.from_json_file(args.config)
    overrides = {}
    if args.trials is not None:
        overrides["trials"] = args.trials
    if args.seed is not None:
        overrides["master_seed"] = args.seed
    if args.out is not None:
        overrides["output_path"] = args.out
    if overrides:
        data = config.to_dict()
        data.update(overrides)
        config = ExperimentConfig.from_dict(data)
    csv_path = run_sweep(config)
    print(f"wrote {csv_path}")
    return 0


def _cmd_theory(args: argparse.Namespace) -> int:
    report = threshold_report(args.p, args.s, args.gamma, args.lam, args.alpha)
    print(json.dumps(report.to_dict(), indent=2))
    return 0


def _cmd_verify(args: argparse.Namespace) -> int:
    result = run_suite(args.suite, seed=args.seed)
    for line in result.lines():
        print(line)
    print(f"suite {result.suite}: {'PASS' if result.passed else 'FAIL'}")
    return 0 if result.passed else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="corruptmatch",
        description="Graph matching under node corruption: samplers, matchers, theory oracles.",
    )
    parser.add_argument("--version", action="version", version=f"corruptmatch {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_gen = sub.add_parser("gen", help="sample and serialize a correlated pair")
    p_gen.add_argument("--n", type=int, required=True)
    p_gen.add_argument("--p", type=float, required=True)
    p_gen.add_argument("--s", type=float, required=True)
    p_gen.add_argument("--seed", type=int, default=0)
    p_gen.add_argument("--out", required=True)
    p_gen.set_defaults(fn=_cmd_gen)

    p_cor = sub.add_parser("corrupt", help="apply a corruption model or adversary")
    p_cor.add_argument("--in", dest="input", required=True)
    p_cor.add_argument("--model", choices=("wcg", "imitation", "overwhelm"), required=True)
    p_cor.add_argument("--gamma", type=float, required=True)
    p_cor.add_argument("--lam", type=float, default=1.0)
    p_cor.add_argument("--seed", type=int, default=0)
    p_cor.add_argument("--out", required=True)
    p_cor.set_defaults(fn=_cmd_corrupt)

    p_match = sub.add_parser("match", help="run one matcher on a serialized instance")
    p_match.add_argument("--in", dest="input", required=True)
    p_match.add_argument("--algo", choices=MATCH_ALGOS, required=True)
    p_match.add_argument("--k", type=int, default=None)
    p_match.add_argument("--eta", type=float, default=None)
    p_match.add_argument("--seed-count", type=int, default=None)
    p_match.add_argument("--seed", type=int, default=0)
    p_match.add_argument("--out", default=None, help="write the matching JSON here")
    p_match.set_defaults(fn=_cmd_match)

    p_sweep = sub.add_parser("sweep", help="run a config-driven Monte-Carlo sweep")
    p_sweep.add_argument("--config", required=True)
    p_sweep.add_argument("--trials", type=int, default=None)
    p_sweep.add_argument("--seed", type=int, default=None)
    p_sweep.add_argument("--out", default=None)
    p_sweep.set_defaults(fn=_cmd_sweep)

    p_theory = sub.add_parser("theory", help="print the threshold report as JSON")
    p_theory.add_argument("--p", type=float, required=True)
    p_theory.add_argument("--s", type=float, required=True)
    p_theory.add_argument("--gamma", type=float, required=True)
    p_theory.add_argument("--lam", type=float, required=True)
    p_theory.add_argument("--alpha", type=float, required=True)
    p_theory.set_defaults(fn=_cmd_theory)

    p_verify = sub.add_parser("verify", help="run a seeded statistical suite")
    p_verify.add_argument("suite", help=f"one of: {', '.join(available_suites())}")
    p_verify.add_argument("--seed", type=int, default=None)
    p_verify.set_defaults(fn=_cmd_verify)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except CorruptMatchError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
