"""Command-line front end.

Exit codes
----------
0  success
1  ``verify`` found at least one failing check
2  unreadable input: missing file, parse failure, bad command line
3  precondition or metadata violation (length not a power of two, parameter
   out of range, coefficient set inconsistent with itself or its blobs)
"""
from __future__ import annotations

import argparse
import logging
import sys

import numpy as np

from ._validation import DtcwtError, check_image
from .checks import format_report, resolve_fine_grid, run_checks
from .dualtree import amp_phase, analyze, quadrature_pair, synthesize
from .dualtree2d import amp_phase2d, analyze2d, synthesize2d
from .io import (
    FormatError,
    MetadataError,
    atomic_write_text,
    load_coeffs,
    read_image,
    read_signal,
    save_coeffs,
    write_matrix,
    write_signal,
    write_table,
)
from .splines import BASES, build_system

log = logging.getLogger("dtcwt_fht")

EXIT_OK, EXIT_VERIFY, EXIT_PARSE, EXIT_PRECONDITION = 0, 1, 2, 3


def _system_args(p, levels=True):
    p.add_argument("--alpha", type=float, default=8.0, help="spline degree (>= 1)")
    p.add_argument("--tau", type=float, default=0.0, help="spline shift of tree a")
    if levels:
        p.add_argument("--levels", type=int, default=3)
    p.add_argument("--basis", choices=BASES, default="bspline")
    p.add_argument("--fine-grid", type=int, default=None, help="fine-grid length for sampled wavelets")


def build_parser():
    parser = argparse.ArgumentParser(prog="dtcwt-fht", description=__doc__.split("\n")[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze1d", help="analyze a single-column text signal")
    _system_args(p)
    p.add_argument("--input", required=True)
    p.add_argument("--output", required=True, help="coefficient directory")
    p.add_argument("--amp-phase", action="store_true", help="also export magnitude/shift tables")

    p = sub.add_parser("synth1d", help="reconstruct a signal from a coefficient directory")
    p.add_argument("--input", required=True)
    p.add_argument("--output", required=True)
    p.add_argument("--fine-grid", type=int, default=None)

    p = sub.add_parser("analyze2d", help="analyze a PGM (P2) or plain-text image")
    _system_args(p)
    p.add_argument("--input", required=True)
    p.add_argument("--output", required=True)
    p.add_argument("--amp-phase", action="store_true")

    p = sub.add_parser("synth2d", help="reconstruct an image as a plain-text matrix")
    p.add_argument("--input", required=True)
    p.add_argument("--output", required=True)
    p.add_argument("--fine-grid", type=int, default=None)

    p = sub.add_parser("wavelet-gen", help="tabulate quadrature pairs of shifted wavelets")
    p.add_argument("--alpha", type=float, default=8.0)
    p.add_argument("--tau", type=float, nargs="+", default=[0.0], help="one or more shifts")
    p.add_argument("--basis", choices=BASES, default="bspline")
    p.add_argument("--fine-grid", type=int, default=None)
    p.add_argument("--output", required=True)

    p = sub.add_parser("verify", help="run the invariant suite")
    _system_args(p)
    p.add_argument("--tolerance-profile", choices=("strict", "calibrated"), default="calibrated")
    p.add_argument("--inject-fault", action="store_true", help=argparse.SUPPRESS)
    p.add_argument("--output", default=None, help="also write the report to this file")
    return parser


def _system_for(coeffs, fine_grid=None):
    fine = None if fine_grid is None else resolve_fine_grid(fine_grid)
    return build_system((coeffs.alpha, coeffs.tau), coeffs.n, coeffs.depth, basis=coeffs.basis, fine_length=fine)


def _amp_phase_table_1d(coeffs):
    amap = amp_phase(coeffs)
    lines = ["# level k magnitude shift"]
    for i, (mags, shifts) in enumerate(zip(amap.magnitude, amap.shift), start=1):
        lines += [f"{i} {k} {float(mags[k])!r} {float(shifts[k])!r}" for k in range(mags.size)]
    return "\n".join(lines) + "\n"


def _amp_phase_table_2d(coeffs):
    amap = amp_phase2d(coeffs)
    lines = ["# level band ky kx magnitude shift"]
    for i, (mags, shifts) in enumerate(zip(amap.magnitude, amap.shift), start=1):
        for band, ky, kx in np.ndindex(mags.shape):
            lines.append(f"{i} {band + 1} {ky} {kx} {float(mags[band, ky, kx])!r} {float(shifts[band, ky, kx])!r}")
    return "\n".join(lines) + "\n"


def cmd_analyze1d(args):
    x = read_signal(args.input)
    system = build_system((args.alpha, args.tau), x.size, args.levels, basis=args.basis,
                          fine_length=None if args.fine_grid is None else resolve_fine_grid(args.fine_grid))
    coeffs = analyze(x, system)
    extra = {"amp_phase.txt": _amp_phase_table_1d(coeffs)} if args.amp_phase else None
    out = save_coeffs(args.output, coeffs, attachments=extra)
    log.info("wrote %d levels to %s", coeffs.depth, out)
    return EXIT_OK


def cmd_synth1d(args):
    coeffs, meta = load_coeffs(args.input)
    if meta["kind"] != "dtcwt1d":
        raise MetadataError(f"{args.input} holds {meta['kind']} coefficients, not dtcwt1d")
    write_signal(args.output, synthesize(coeffs, _system_for(coeffs, args.fine_grid)))
    return EXIT_OK


def cmd_analyze2d(args):
    image = check_image(read_image(args.input))
    system = build_system((args.alpha, args.tau), image.shape[0], args.levels, basis=args.basis,
                          fine_length=None if args.fine_grid is None else resolve_fine_grid(args.fine_grid))
    coeffs = analyze2d(image, system)
    extra = {"amp_phase.txt": _amp_phase_table_2d(coeffs)} if args.amp_phase else None
    save_coeffs(args.output, coeffs, attachments=extra)
    return EXIT_OK


def cmd_synth2d(args):
    coeffs, meta = load_coeffs(args.input)
    if meta["kind"] != "dtcwt2d":
        raise MetadataError(f"{args.input} holds {meta['kind']} coefficients, not dtcwt2d")
    write_matrix(args.output, synthesize2d(coeffs, _system_for(coeffs, args.fine_grid)))
    return EXIT_OK


def _tau_label(tau):
    return repr(float(tau))


def cmd_wavelet_gen(args):
    fine = resolve_fine_grid(args.fine_grid)
    system = build_system((args.alpha, 0.0), 64, 1, basis=args.basis, fine_length=fine)
    header, columns = ["x"], [system.x]
    for tau in args.tau:
        pair = quadrature_pair(system, tau)
        label = _tau_label(tau)
        header += [f"w1_tau={label}", f"w2_tau={label}", f"envelope_tau={label}"]
        columns += [pair.w1, pair.w2, pair.envelope]
    write_table(args.output, header, columns)
    return EXIT_OK


def cmd_verify(args):
    results = run_checks(alpha=args.alpha, tau=args.tau, levels=args.levels, fine_grid=args.fine_grid,
                         profile=args.tolerance_profile, inject_fault=args.inject_fault)
    report = format_report(results)
    print(report)
    if args.output:
        atomic_write_text(args.output, report + "\n")
    return EXIT_OK if all(r.passed for r in results) else EXIT_VERIFY


COMMANDS = {
    "analyze1d": cmd_analyze1d,
    "synth1d": cmd_synth1d,
    "analyze2d": cmd_analyze2d,
    "synth2d": cmd_synth2d,
    "wavelet-gen": cmd_wavelet_gen,
    "verify": cmd_verify,
}


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except (FileNotFoundError, IsADirectoryError, FormatError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (MetadataError, DtcwtError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION


if __name__ == "__main__":
    sys.exit(main())
