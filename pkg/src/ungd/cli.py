"""Command-line interface.

Exit codes: 0 success, 1 I/O error, 2 usage or parameter error,
3 a reproduction check failed, 4 reproduction skipped for missing data.
"""

import argparse
import os
import sys
import warnings

import numpy as np

from ungd import core, io, metrics, reproduce, signals, spectral

EXIT_OK, EXIT_IO, EXIT_USAGE, EXIT_FAIL, EXIT_SKIP = 0, 1, 2, 3, 4


class UsageError(Exception):
    pass


def _pair(text, kinds, flag):
    parts = text.split(":")
    if len(parts) != len(kinds):
        raise UsageError(f"{flag} expects {len(kinds)} values separated by ':', got {text!r}")
    try:
        return tuple(k(p) for k, p in zip(kinds, parts))
    except ValueError:
        raise UsageError(f"{flag}: cannot parse {text!r}") from None


def _seed(args):
    if args.seed is not None:
        return args.seed
    return int(os.environ.get("UNGD_SEED", reproduce.DEFAULT_SEED))


def _order(args):
    if args.order is not None and args.cutoff is not None:
        raise UsageError("give either -m or --cutoff, not both")
    if args.order is not None:
        return args.order
    if args.cutoff is not None:
        return spectral.order_from_cutoff(args.cutoff)
    raise UsageError("a filter order (-m) or a cutoff frequency (--cutoff) is required")


def cmd_coeffs(args):
    spec = core.make_coefficients(args.order)
    print(f"b={spec.b:g} c={','.join(f'{c:g}' for c in spec.c)}")
    return EXIT_OK


def cmd_order(args):
    m = spectral.order_from_cutoff(args.cutoff)
    print(f"m={m} tau_g0={spectral.zero_freq_group_delay(m):.2f} "
          f"f0={spectral.cutoff_frequency(m):.4f}")
    return EXIT_OK


def cmd_predict(args):
    m = _order(args)
    spec = core.make_coefficients(m)
    x, fs = io.load_signal(args.input, fmt=args.format, demean=args.demean)
    if args.notch is not None:
        x = signals.notch_filter(x, args.notch)
    y = core.cascade(spec, x, args.cascade)
    io.write_signal(args.output, y, fs)
    stages = args.cascade
    line = f"m={m} tau_g0={stages * spectral.zero_freq_group_delay(m):.2f}"
    if stages > 1:
        line += f" stages={stages}"
    if args.ccf:
        max_lag = min(args.max_lag, x.size // 4)
        c = metrics.estimate_ccf(x, y, max_lag)
        delta = "undefined" if c.horizon is None else f"{c.horizon:d}"
        line += f" delta={delta} ccf_max={c.peak:.2f}"
    out = sys.stderr if args.output == "-" else sys.stdout
    print(line, file=out)
    return EXIT_OK


def cmd_analyze(args):
    m = _order(args)
    spec = core.make_coefficients(m)
    table = spectral.spectrum_table(spec, args.grid)
    io.write_table(args.output, table.COLUMNS, table.rows())
    out = sys.stderr if args.output in (None, "-") else sys.stdout
    print(f"m={m} max_gain={table.gain.max():.4g} min_S={table.stability.min():.4g} "
          f"tau_g0={table.group_delay[0]:.4g}", file=out)
    return EXIT_OK


def cmd_gen(args):
    seed = _seed(args)
    if args.kind == "impulse":
        x = np.zeros(args.n)
        x[0] = 1.0
    elif args.kind == "sine":
        if args.freq is None:
            raise UsageError("gen sine needs --freq")
        x = signals.sinusoid(args.n, args.freq)
    else:
        lowpass = bandpass = jumps = None
        if args.lowpass:
            order, fc = _pair(args.lowpass, (int, float), "--lowpass")
            lowpass = (fc, order)
        if args.bandpass:
            bandpass = _pair(args.bandpass, (float, float), "--bandpass")
        if args.jumps:
            jumps = _pair(args.jumps, (float, int), "--jumps")
        x = signals.NoiseRecipe(args.n, seed, lowpass=lowpass, bandpass=bandpass,
                                jumps=jumps).generate()
    if args.format == "raw16":
        io.write_raw_int16(args.output, x)
    else:
        io.write_signal(args.output, x)
    return EXIT_OK


def cmd_reproduce(args):
    figures = [f for f in reproduce.FIGURES if args.ecg or f not in reproduce.ECG_FIGURES] \
        if args.figure == "all" else [args.figure]
    seed = _seed(args)
    failed = skipped = False
    for name in figures:
        result = reproduce.run(name, seed=seed, ecg=args.ecg, notch=args.notch)
        print(result.headline())
        for c in result.checks:
            print("  " + c.line())
        if result.skipped:
            print(f"  {result.skipped}", file=sys.stderr)
            skipped = True
            continue
        if args.outdir:
            reproduce.write_result(result, args.outdir)
            if not args.no_plots:
                from ungd import plotting
                plotting.render(result, args.outdir)
        failed |= not result.passed
    if failed:
        return EXIT_FAIL
    return EXIT_SKIP if skipped else EXIT_OK


def build_parser():
    p = argparse.ArgumentParser(prog="ungd", description="Universal negative-group-delay predictor")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("coeffs", help="print b and c_k for an order")
    s.add_argument("-m", "--order", type=int, required=True)
    s.set_defaults(func=cmd_coeffs)

    s = sub.add_parser("order", help="filter order for a signal cutoff frequency")
    s.add_argument("--cutoff", type=float, required=True, help="normalized cutoff, cycles/sample")
    s.set_defaults(func=cmd_order)

    s = sub.add_parser("predict", help="run the predictor over a signal file")
    s.add_argument("-m", "--order", type=int)
    s.add_argument("--cutoff", type=float, help="choose the order from this cutoff instead of -m")
    s.add_argument("-i", "--input", required=True)
    s.add_argument("-o", "--output", default="-")
    s.add_argument("--format", choices=("auto", "text", "raw16"), default="auto")
    s.add_argument("--demean", action=argparse.BooleanOptionalAction, default=None,
                   help="subtract the mean on load (default: on for raw16, off for text)")
    s.add_argument("--notch", type=float, metavar="F",
                   help="zero-phase notch at F cycles/sample before predicting")
    s.add_argument("--cascade", type=int, default=1, metavar="S")
    s.add_argument("--ccf", action="store_true", help="report horizon and peak correlation")
    s.add_argument("--max-lag", type=int, default=30)
    s.set_defaults(func=cmd_predict)

    s = sub.add_parser("analyze", help="write the spectrum table of an order")
    s.add_argument("-m", "--order", type=int)
    s.add_argument("--cutoff", type=float)
    s.add_argument("--grid", type=int, default=4096)
    s.add_argument("-o", "--output", default="-")
    s.set_defaults(func=cmd_analyze)

    s = sub.add_parser("gen", help="generate a test signal")
    s.add_argument("kind", choices=("noise", "impulse", "sine"))
    s.add_argument("--n", type=int, default=1024)
    s.add_argument("--seed", type=int)
    s.add_argument("--lowpass", metavar="ORDER:FC")
    s.add_argument("--bandpass", metavar="FLO:FHI")
    s.add_argument("--jumps", metavar="AMPLITUDE:PERIOD")
    s.add_argument("--freq", type=float, help="sine frequency, cycles/sample")
    s.add_argument("--format", choices=("text", "raw16"), default="text")
    s.add_argument("-o", "--output", default="-")
    s.set_defaults(func=cmd_gen)

    s = sub.add_parser("reproduce", help="regenerate figure data and check it")
    s.add_argument("figure", choices=reproduce.FIGURES + ("all",))
    s.add_argument("--outdir")
    s.add_argument("--ecg", help="ECG excerpt for fig9/fig10")
    s.add_argument("--notch", type=float, metavar="F",
                   help="fig10 notch frequency, cycles/sample (default 1/6)")
    s.add_argument("--seed", type=int)
    s.add_argument("--no-plots", action="store_true", help="write tables only")
    s.set_defaults(func=cmd_reproduce)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("always")
            warnings.showwarning = _warn
            return args.func(args)
    except UsageError as exc:
        print(f"ungd: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (OSError, io.SignalFormatError) as exc:
        print(f"ungd: error: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:
        print(f"ungd: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def _warn(message, category, filename, lineno, file=None, line=None):
    print(f"ungd: warning: {message}", file=sys.stderr)


if __name__ == "__main__":
    sys.exit(main())
