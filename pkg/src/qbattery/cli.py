"""Command-line front end: ``qbattery fig``, ``qbattery verify`` and ``qbattery scan``.

Exit codes: 0 success, 1 verification failure, 2 usage error.
"""
from __future__ import annotations

import argparse
import json
import sys
from typing import Optional, Sequence

from . import figures
from .channels import parse_channel
from .export import to_csv_string
from .linalg import ValidationError
from .verify import DEFAULT_SEED, SUITES, parallel_map, run_suite

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


def _floats(text: str) -> list[float]:
    try:
        vals = [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")
    if not vals:
        raise argparse.ArgumentTypeError("empty list")
    return vals


def _grid(text: str) -> tuple[int, ...]:
    try:
        dims = tuple(int(x) for x in text.lower().split("x"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"grid must look like 200 or 100x50, got {text!r}")
    if len(dims) not in (1, 2) or min(dims) < 2:
        raise argparse.ArgumentTypeError(f"grid sizes must be >= 2, got {text!r}")
    return dims


def _channel(text: str):
    try:
        return parse_channel(text)
    except ValidationError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def _two(dims: Optional[tuple[int, ...]], default: tuple[int, int]) -> tuple[int, int]:
    if dims is None:
        return default
    return (dims[0], dims[0]) if len(dims) == 1 else dims


def _one(dims: Optional[tuple[int, ...]], default: int) -> int:
    if dims is None:
        return default
    if len(dims) != 1:
        raise ValidationError("this figure takes a 1-D grid such as --grid 200")
    return dims[0]


def _fig_table(args):
    name = args.figure
    g, eta = args.gammas, args.etas
    if name == "adc-ergotropy":
        return figures.adc_ergotropy(g or figures.ADC_GAMMAS, _one(args.grid, 200), args.quantity)
    if name == "adc-optimal-energy":
        return figures.adc_optimal_energy(g or figures.ADC_GAMMAS, _one(args.grid, 200))
    if name == "gadc-ergotropy":
        return figures.gadc_ergotropy(g or (0.5,), eta or figures.GADC_ETAS, _one(args.grid, 200), args.quantity)
    if name == "gadc-entropy":
        return figures.gadc_entropy(g or figures.ENTROPY_GAMMAS, eta or figures.ENTROPY_ETAS, _one(args.grid, 200),
                                    args.base)
    if name == "gadc-mawer-gap":
        return figures.gadc_mawer_gap(eta or figures.GAP_ETAS, _one(args.grid, 200))
    if name == "gadc-optimal-energy":
        return figures.gadc_optimal_energy(*_two(args.grid, (100, 50)), energy=args.energy)
    if name == "gadc-chi-full":
        return figures.gadc_chi_full(*_two(args.grid, (100, 50)))
    if name == "gadc-delta":
        return figures.gadc_delta(*_two(args.grid, (100, 50)))
    if name == "dephadc-heatmap":
        quantity = "ergotropy" if args.quantity in ("fixed", "max", "ergotropy") else "optimal-energy"
        return figures.dephadc_heatmap(*_two(args.grid, (100, 100)), quantity=quantity, energy=args.energy)
    if name == "dephadc-mawer-diff":
        return figures.dephadc_mawer_diff(*_two(args.grid, (100, 100)))
    raise ValidationError(f"unknown figure {name!r}")


FIGURES = (
    "adc-ergotropy", "adc-optimal-energy", "gadc-ergotropy", "gadc-optimal-energy", "gadc-chi-full",
    "gadc-entropy", "gadc-mawer-gap", "gadc-delta", "dephadc-heatmap", "dephadc-mawer-diff",
)


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        with open(out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qbattery", description="Work extraction from noisy qubit batteries.")
    sub = parser.add_subparsers(dest="command", required=True)

    fig = sub.add_parser("fig", help="write figure data as CSV")
    fig.add_argument("figure", choices=FIGURES)
    fig.add_argument("--gammas", type=_floats, help="comma-separated damping values")
    fig.add_argument("--etas", type=_floats, help="comma-separated thermal parameters")
    fig.add_argument("--grid", type=_grid, help="points, e.g. 200 or 100x50 for heatmaps")
    fig.add_argument("--quantity", default="fixed",
                     choices=("fixed", "max", "ergotropy", "optimal-energy"),
                     help="fixed: exact input energy; max: energy budget")
    fig.add_argument("--base", default="bits", choices=("bits", "nats"))
    fig.add_argument("--energy", type=float, default=1.0, help="energy budget for heatmaps")
    fig.add_argument("--out", help="output path (default stdout)")

    ver = sub.add_parser("verify", help="run property suites, print a JSON report")
    ver.add_argument("--suite", default="all", choices=SUITES + ("all",))
    ver.add_argument("--grid", type=_grid, default=(20, 10), help="theorem1 grid, gamma x eta")
    ver.add_argument("--n", type=int, default=8, help="largest n for the additivity suite")
    ver.add_argument("--channel", type=_channel, help="e.g. gadc:gamma=0.5,eta=0.3")
    ver.add_argument("--energy", type=float)
    ver.add_argument("--resolution", type=int, default=500, help="superadditivity grid resolution")
    ver.add_argument("--samples", type=int, default=10_000, help="random states per n (monotonicity)")
    ver.add_argument("--seed", type=int, default=DEFAULT_SEED)
    ver.add_argument("--out", help="also write the JSON report here")

    scan = sub.add_parser("scan", help="parameter scans exported as CSV")
    scan.add_argument("what", choices=("superadditivity",))
    scan.add_argument("--gammas", type=_floats, default=[0.2, 0.5, 0.8])
    scan.add_argument("--etas", type=_floats, default=[0.0, 0.2, 0.4])
    scan.add_argument("--energies", type=_floats, default=[0.3, 0.6, 0.9])
    scan.add_argument("--resolution", type=int, default=500)
    scan.add_argument("--out", help="output path (default stdout)")
    return parser


def _run_fig(args) -> int:
    header, rows = _fig_table(args)
    _emit(to_csv_string(header, rows), args.out)
    return EXIT_OK


def _run_verify(args) -> int:
    if args.energy is not None and not 0.0 < args.energy <= 1.0:
        raise ValidationError("--energy must lie in (0, 1]")
    grid = args.grid if len(args.grid) == 2 else (args.grid[0], args.grid[0])
    results = run_suite(args.suite, seed=args.seed, n=args.n, grid=grid, channel=args.channel,
                        energy=args.energy, resolution=args.resolution, samples=args.samples)
    passed = all(r.passed for r in results)
    report = {"suite": args.suite, "seed": args.seed, "passed": passed,
              "results": [r.to_dict() for r in results]}
    text = json.dumps(report, indent=2, default=str) + "\n"
    sys.stdout.write(text)
    if args.out:
        _emit(text, args.out)
    for r in results:
        print(f"{'PASS' if r.passed else 'FAIL'} {r.name}" + ("" if r.passed else f" witness={r.witness}"),
              file=sys.stderr)
    return EXIT_OK if passed else EXIT_FAIL


def _run_scan(args) -> int:
    from .channels import gadc
    from .multicell import superadditivity_search

    cases = [(g, eta, e) for g in args.gammas for eta in args.etas for e in args.energies]
    chans = [(gadc(g, eta), e) for g, eta, e in cases]
    results = parallel_map(lambda c: superadditivity_search(c[0], c[1], args.resolution), chans)
    rows = [[g, eta, e, r.best_gap] for (g, eta, e), r in zip(cases, results)]
    _emit(to_csv_string(["gamma", "eta", "energy", "best_gap"], rows), args.out)
    worst = max(r.best_gap for r in results)
    print(f"{len(rows)} cells, resolution {args.resolution}, max best_gap {worst!r}", file=sys.stderr)
    return EXIT_OK


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handler = {"fig": _run_fig, "verify": _run_verify, "scan": _run_scan}[args.command]
    try:
        return handler(args)
    except ValidationError as exc:
        parser.print_usage(sys.stderr)
        print(f"qbattery: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
