"""Payload BER with and without the RM extra bits, plus the extra-bit WER.

The genie columns decode with the true superimposed word removed, which is
statistically the same as sending the payload alone.
"""

import dataclasses

from freeride.sim import SimConfig, build_code, parse_snr, run

from _common import parser, write


def main():
    p = parser("payload BER with RM(1, eta) extra bits", max_trials=1000)
    p.add_argument("--snr", default="1.2:1.6:0.1")
    p.add_argument("--k1", type=int, nargs="+", default=[10, 60])
    args = p.parse_args()
    code = build_code(SimConfig())
    rows = []
    for k1 in args.k1:
        cfg = SimConfig(experiment="prop1_check", scheme="rm1", k1=k1, decoder="sdd", snr_list=parse_snr(args.snr), max_trials=args.max_trials, max_errors=10**9, seed=args.seed, workers=args.workers)
        for r in run(cfg, code=code).rows:
            rows.append(dict(k1=k1, **dataclasses.asdict(r)))
    write(rows, args.out)


if __name__ == "__main__":
    main()
