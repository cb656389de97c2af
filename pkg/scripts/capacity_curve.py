"""Accessible capacity of the [2,1] repetition and [8,4] extended Hamming payloads."""

import dataclasses

from freeride.sim import SimConfig, parse_snr, run

from _common import parser, write


def main():
    p = parser("accessible capacity sweep")
    p.add_argument("--snr", default="-5:10:0.5")
    p.add_argument("--samples", type=int, default=1_000_000)
    args = p.parse_args()
    cfg = SimConfig(experiment="capacity_curve", snr_list=parse_snr(args.snr), samples=args.samples, seed=args.seed, workers=args.workers)
    write([dataclasses.asdict(r) for r in run(cfg).rows], args.out)


if __name__ == "__main__":
    main()
