"""Command-line driver: ``freeride {histogram,wer,ber,capacity,prop1} [options]``."""

from __future__ import annotations

import argparse
import csv
import sys

from .sim import ConfigError, SimConfig, parse_snr, run

COMMANDS = {
    "histogram": "histogram",
    "wer": "wer_extra",
    "ber": "ber_payload",
    "capacity": "capacity_curve",
    "prop1": "prop1_check",
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    d = SimConfig()
    common.add_argument("--n", type=int, default=d.n, help="payload code length")
    common.add_argument("--gamma", type=int, default=d.gamma, help="variable degree")
    common.add_argument("--rho", type=int, default=d.rho, help="check degree")
    common.add_argument("--code-seed", type=int, default=d.code_seed, help="seed of the H construction")
    common.add_argument("--alist", metavar="PATH", help="read H from an alist file instead of constructing it")
    common.add_argument("--scheme", choices=("random", "rep", "rm1"), default=d.scheme)
    common.add_argument("--k1", type=int, default=d.k1, help="number of extra bits")
    common.add_argument("--decoder", choices=("hdd", "sdd"), default=d.decoder)
    common.add_argument("--snr", default="1.0", help="START:STOP:STEP in dB (inclusive), a comma list or one value")
    common.add_argument("--max-trials", type=int, default=d.max_trials)
    common.add_argument("--max-errors", type=int, default=d.max_errors)
    common.add_argument("--max-iters", type=int, default=d.max_iters, help="sum-product iterations")
    common.add_argument("--batch", type=int, default=d.batch, help="trials per work unit")
    common.add_argument("--samples", type=int, default=d.samples, help="Monte Carlo samples per capacity point")
    common.add_argument("--seed", type=int, default=d.seed, help="master seed")
    common.add_argument("--out", metavar="PATH", help="CSV output (stdout when omitted)")
    common.add_argument("--json", metavar="PATH", help="JSON mirror with the full configuration")
    common.add_argument("--workers", type=int, default=d.workers)
    parser = argparse.ArgumentParser(prog="freeride", description="Free-ride extra-bit simulations on LDPC payloads")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sub.add_parser(name, parents=[common])
    return parser


def config_from_args(args: argparse.Namespace) -> SimConfig:
    return SimConfig(
        experiment=COMMANDS[args.command],
        n=args.n,
        gamma=args.gamma,
        rho=args.rho,
        code_seed=args.code_seed,
        alist=args.alist,
        scheme=args.scheme,
        k1=args.k1,
        decoder=args.decoder,
        snr_list=parse_snr(args.snr),
        max_trials=args.max_trials,
        max_errors=args.max_errors,
        max_iters=args.max_iters,
        batch=args.batch,
        samples=args.samples,
        seed=args.seed,
        workers=args.workers,
        out=args.out,
    )


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = config_from_args(args)
    except (ConfigError, ValueError) as exc:
        parser.error(str(exc))
    result = run(config)
    if config.out:
        result.write_csv(config.out)
    else:
        writer = csv.DictWriter(sys.stdout, fieldnames=result.columns())
        writer.writeheader()
        writer.writerows(result.records())
    if args.json:
        result.write_json(args.json)
    return 0


if __name__ == "__main__":
    sys.exit(main())
