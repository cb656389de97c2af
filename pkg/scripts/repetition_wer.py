"""Extra-bit WER of the repetition scheme against the binomial-tail estimate."""

from freeride.channel import BpskAwgn
from freeride.random_code import stat_model
from freeride.sim import SimConfig, build_code, parse_snr, run
from freeride.structured import build_repetition, wer_estimate_repetition

from _common import parser, write


def main():
    p = parser("repetition-scheme extra-bit WER")
    p.add_argument("--snr", default="-0.4:2.0:0.2")
    p.add_argument("--k1", type=int, nargs="+", default=[6, 18])
    args = p.parse_args()
    code = build_code(SimConfig())
    rows = []
    for k1 in args.k1:
        m1 = build_repetition(k1, code.m).m1
        for dec in ("hdd", "sdd"):
            cfg = SimConfig(experiment="wer_extra", scheme="rep", k1=k1, decoder=dec, snr_list=parse_snr(args.snr), max_trials=args.max_trials, max_errors=args.max_errors, seed=args.seed, workers=args.workers)
            for r in run(cfg, code=code).rows:
                p_syn = stat_model(code, BpskAwgn.from_snr_db(r.snr_db)).p
                rows.append(dict(k1=k1, decoder=dec, snr_db=r.snr_db, trials=r.trials, wer=r.wer, std_err=r.std_err_wer, estimate_hdd=wer_estimate_repetition(m1, p_syn, k1)))
    write(rows, args.out)


if __name__ == "__main__":
    main()
