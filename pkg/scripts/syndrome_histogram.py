"""Histograms of the unsatisfied-check count for the true and a wrong candidate.

Also prints the Gaussian model moments next to the empirical ones.
"""

import dataclasses

import numpy as np

from freeride.channel import BpskAwgn
from freeride.random_code import stat_model
from freeride.sim import SimConfig, build_code, parse_snr, run

from _common import parser, write


def main():
    p = parser("syndrome-weight histograms", max_trials=10_000)
    p.add_argument("--snr", default="0,1")
    p.add_argument("--k1", type=int, default=5)
    args = p.parse_args()
    cfg = SimConfig(experiment="histogram", k1=args.k1, snr_list=parse_snr(args.snr), max_trials=args.max_trials, seed=args.seed, workers=args.workers)
    code = build_code(cfg)
    res = run(cfg, code=code)
    write([dataclasses.asdict(r) for r in res.rows], args.out)
    for snr, rec in zip(cfg.snr_list, res.samples):
        mod = stat_model(code, BpskAwgn.from_snr_db(snr))
        print(
            f"# {snr:g} dB  N(w) {rec[:, 0].mean():.2f} (model {mod.mu0:.2f}, sd {np.sqrt(mod.sigma0_sq):.2f})"
            f"  N(s) {rec[:, 1].mean():.2f} (model {mod.mu1:.2f}, sd {np.sqrt(mod.sigma1_sq):.2f})"
        )


if __name__ == "__main__":
    main()
