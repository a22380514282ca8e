"""Command-line front end.

Every subcommand parses its flags, calls the library, and prints the
library's own serialization.  Exit codes: 0 success, 2 usage or parse
error, 3 enumeration cap exceeded, 4 internal invariant violation.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from simplex_ldpc import catalog, codec, gf2, matrix
from simplex_ldpc.channel import StopRule, matrix_code, polynomial_code, run_monte_carlo, uncoded
from simplex_ldpc.errors import InvalidInputError, InvariantViolation, ResourceLimitError

EXIT_USAGE = 2
EXIT_RESOURCE = 3
EXIT_INVARIANT = 4


def parse_snr_list(text: str) -> list[float]:
    """``"start:step:stop"`` (inclusive) or a comma-separated list, in dB."""
    text = text.strip()
    try:
        if ":" in text:
            start, step, stop = (float(x) for x in text.split(":"))
            if step <= 0 or stop < start:
                raise InvalidInputError(f"bad SNR range {text!r}")
            count = int(round((stop - start) / step)) + 1
            return [round(start + i * step, 10) for i in range(count)]
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise InvalidInputError(f"bad SNR list {text!r}") from exc


def resolve_poly(text: str) -> gf2.BinaryPolynomial:
    if text.upper() in catalog.NAMED_SUPPORTS:
        return catalog.named_polynomial(text)
    return gf2.parse_polynomial(text)


def _length(args, k: int) -> int:
    return matrix.length_for(k, n=args.n, rate=args.rate, puncture=args.puncture)


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_certify(args) -> int:
    h = resolve_poly(args.poly)
    p = gf2.support(h)
    golomb = gf2.is_golomb_ruler(p)
    report = {
        "poly": str(h),
        "degree": h.degree,
        "primitive": gf2.is_primitive(h),
        "weight": gf2.weight(h),
        "support": p,
        "differences": gf2.differences(p) if len(p) > 1 else [],
        "golomb": golomb,
        "rc_constraint": matrix.satisfies_rc_constraint(h),
    }
    _emit(json.dumps(report, indent=2, sort_keys=True) + "\n", args.out)
    return 0


def _matrix_from_args(args) -> matrix.ParityCheckMatrix:
    h = resolve_poly(args.poly)
    H = matrix.build(h, _length(args, h.degree), unchecked=args.unchecked)
    if args.expand:
        H = matrix.circulant_expand(H, args.expand, args.rule)
    return H


def cmd_build(args) -> int:
    H = _matrix_from_args(args)
    if args.alist:
        Path(args.alist).write_text(matrix.export_alist(H))
    _emit(matrix.summary_json(H) + "\n", args.out)
    return 0


def cmd_weights(args) -> int:
    h = resolve_poly(args.poly)
    dist = codec.weight_distribution(h, _length(args, h.degree), cap=args.cap)
    curve = None
    if args.dstar is not None:
        curve = codec.tub(dist, args.dstar, parse_snr_list(args.snr or "0:0.5:10"))
    if args.format == "json":
        rec = {"distribution": json.loads(dist.to_json())}
        if curve is not None:
            rec["tub"] = json.loads(curve.to_json())
        text = json.dumps(rec, indent=2, sort_keys=True) + "\n"
    else:
        text = dist.to_csv()
        if curve is not None:
            text += "\n" + curve.to_csv()
    _emit(text, args.out)
    return 0


def cmd_simulate(args) -> int:
    if args.uncoded:
        code = uncoded(args.uncoded)
    else:
        if not args.poly:
            raise InvalidInputError("--poly is required unless --uncoded is given")
        if args.expand:
            code = matrix_code(_matrix_from_args(args))
        else:
            h = resolve_poly(args.poly)
            code = polynomial_code(h, _length(args, h.degree), unchecked=args.unchecked)
    stop = StopRule(args.min_frame_errors, args.max_frames)
    report = run_monte_carlo(code, parse_snr_list(args.snr), stop, args.seed, batch_size=args.batch_size,
                             max_iter=args.max_iter, all_zero=args.all_zero,
                             count_all_positions=args.all_positions, workers=args.workers)
    _emit(report.to_json() + "\n" if args.format == "json" else report.to_csv(), args.out)
    return 0


def _add_length(p: argparse.ArgumentParser) -> None:
    g = p.add_mutually_exclusive_group()
    g.add_argument("--n", type=int, help="code length")
    g.add_argument("--rate", help="code rate, e.g. 1/2")
    g.add_argument("--puncture", type=int, help="row-column eliminations s, n = 2^k - 1 - s")
    p.add_argument("--unchecked", action="store_true", help="skip the primitivity check")


def _add_expand(p: argparse.ArgumentParser) -> None:
    p.add_argument("--expand", type=int, default=0, metavar="P", help="circulant expansion side")
    p.add_argument("--rule", default="paper-c3", choices=sorted(matrix.OFFSET_RULES))


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="simplex-ldpc",
                                     description="Punctured simplex codes decoded as LDPC codes.")
    sub = parser.add_subparsers(dest="command", required=True)

    poly_help = "binary string (h_0 first), 0x hex, support:i,j,..., or C1/C2/C4"

    p = sub.add_parser("certify", help="primitivity and Golomb-ruler report")
    p.add_argument("--poly", required=True, help=poly_help)
    p.add_argument("--out")
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("build", help="construct a parity-check matrix and summarize it")
    p.add_argument("--poly", required=True, help=poly_help)
    _add_length(p)
    _add_expand(p)
    p.add_argument("--alist", metavar="PATH", help="also write the matrix in alist format")
    p.add_argument("--out")
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("weights", help="exact weight distribution and truncated union bound")
    p.add_argument("--poly", required=True, help=poly_help)
    _add_length(p)
    p.add_argument("--dstar", type=int, help="truncation weight for the union bound")
    p.add_argument("--snr", help="Eb/N0 list in dB for the bound, start:step:stop")
    p.add_argument("--cap", type=int, default=codec.DEFAULT_ENUMERATION_CAP, help="max k to enumerate")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out")
    p.set_defaults(func=cmd_weights)

    p = sub.add_parser("simulate", help="Monte Carlo BER/CER over BPSK/AWGN")
    p.add_argument("--poly", help=poly_help)
    _add_length(p)
    _add_expand(p)
    p.add_argument("--uncoded", type=int, metavar="BITS", help="simulate uncoded BPSK with BITS per frame")
    p.add_argument("--snr", required=True, help="Eb/N0 list in dB, start:step:stop or a,b,c")
    p.add_argument("--min-frame-errors", type=int, default=100)
    p.add_argument("--max-frames", type=int, default=10_000_000)
    p.add_argument("--max-iter", type=int, default=100)
    p.add_argument("--batch-size", type=int, default=1000)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--all-zero", action="store_true", help="transmit the all-zero codeword")
    p.add_argument("--all-positions", action="store_true", help="count bit errors on all n positions")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out")
    p.set_defaults(func=cmd_simulate)
    return parser


def main(argv=None) -> int:
    parser = make_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ResourceLimitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except InvariantViolation as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except (InvalidInputError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
