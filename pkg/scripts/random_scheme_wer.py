"""Extra-bit WER of the random scheme, HDD and SDD, against the Gaussian estimate."""

from freeride.channel import BpskAwgn
from freeride.random_code import stat_model, wer_estimate
from freeride.sim import SimConfig, build_code, parse_snr, run

from _common import parser, write


def main():
    p = parser("random-scheme extra-bit WER")
    p.add_argument("--snr", default="-1.2:0.2:0.2")
    p.add_argument("--k1", type=int, nargs="+", default=[5, 10])
    args = p.parse_args()
    snrs = parse_snr(args.snr)
    code = build_code(SimConfig())
    rows = []
    for k1 in args.k1:
        runs = {}
        for dec in ("hdd", "sdd"):
            cfg = SimConfig(experiment="wer_extra", k1=k1, decoder=dec, snr_list=snrs, max_trials=args.max_trials, max_errors=args.max_errors, seed=args.seed, workers=args.workers)
            runs[dec] = run(cfg, code=code).rows
        for h, s in zip(runs["hdd"], runs["sdd"]):
            est = wer_estimate(stat_model(code, BpskAwgn.from_snr_db(h.snr_db)), k1)
            rows.append(dict(k1=k1, snr_db=h.snr_db, wer_hdd=h.wer, trials_hdd=h.trials, wer_sdd=s.wer, trials_sdd=s.trials, estimate_hdd=est))
    write(rows, args.out)


if __name__ == "__main__":
    main()
