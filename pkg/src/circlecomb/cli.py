"""Command-line front end: files in, files out, deterministic bytes.

Subcommands: spectrum, filter, classify, comb, eval.  Coefficient data
travels as JSON, sampled data as grid CSV with a metadata sidecar.
Exit codes: 0 success, 2 usage or validation error, 3 numeric failure.
Identical inputs and flags always produce byte-identical outputs.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace

import numpy as np

from . import catalog, classify, formats, rescale
from .disk import (DEFAULT_DELTA_SCHEDULE, boundary_value_grid, eval_ring,
                   from_coefficients)
from .errors import (BadParams, CircleCombError, DivergenceDetected,
                     DomainError, EpsilonBelowResolution, NoConvergence,
                     NonIntegrableInput, NotAvailable, OutOfDomain,
                     QuadratureFailure, UndefinedHere, UnknownName)
from .realfilter import (DEFAULT_EPS_SCHEDULE, GridFunction, grid_evaluator,
                         kernel_filter_grid, multiplier_filter)
from .spectrum import DEFAULT_N, compute_coefficients, grid_nodes

_USAGE_ERRORS = (DomainError, OutOfDomain, BadParams, UnknownName,
                 NotAvailable, EpsilonBelowResolution)
_NUMERIC_ERRORS = (QuadratureFailure, NonIntegrableInput, NoConvergence,
                   DivergenceDetected, UndefinedHere)

# Catalog parameters exposed as flags; only flags the user actually set
# are forwarded, so catalog defaults stay in one place.
_CATALOG_FLAGS = ("theta0", "order", "c", "k", "l_minus", "l_plus",
                  "base", "point", "value")


def _float_list(text: str):
    try:
        vals = tuple(float(part) for part in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma list of numbers: "
                                         f"{text!r}") from None
    if not vals:
        raise argparse.ArgumentTypeError("empty list")
    return vals


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="circlecomb",
        description="Window-average filtering, classification and combing "
                    "of periodic data.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_catalog_flags(p):
        p.add_argument("--catalog", help="catalog entry name")
        p.add_argument("--theta0", type=float)
        p.add_argument("--order", type=int)
        p.add_argument("--c", type=float)
        p.add_argument("--k", type=int)
        p.add_argument("--l-minus", dest="l_minus", type=float)
        p.add_argument("--l-plus", dest="l_plus", type=float)
        p.add_argument("--base")
        p.add_argument("--point", type=float)
        p.add_argument("--value", type=float)

    p = sub.add_parser("spectrum", help="coefficients of a grid or a "
                                        "catalog entry")
    add_catalog_flags(p)
    p.add_argument("--input", help="grid CSV to integrate")
    p.add_argument("--n", type=int, default=DEFAULT_N)
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--output", help="coefficient JSON path (default stdout)")

    p = sub.add_parser("filter", help="window-average a coefficient JSON "
                                      "or a grid CSV")
    p.add_argument("--input", required=True)
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--method", choices=["multiplier", "kernel"])
    p.add_argument("--domain", type=_float_list,
                   help="a,b: treat the grid as interval data (eps becomes "
                        "physical)")
    p.add_argument("--output", required=True)

    p = sub.add_parser("classify", help="combed/ragged report for a grid "
                                        "(or certificate for coefficients)")
    p.add_argument("--input", required=True)
    p.add_argument("--eps-schedule", dest="eps_schedule", type=_float_list,
                   default=DEFAULT_EPS_SCHEDULE)
    p.add_argument("--tol", type=float, default=classify.DEFAULT_TOL)
    p.add_argument("--output", help="report JSON path (default stdout)")

    p = sub.add_parser("comb", help="compute the limit function on a grid")
    p.add_argument("--input", required=True)
    p.add_argument("--method", required=True,
                   choices=["filter-limit", "fourier", "disk"])
    p.add_argument("--grid", type=int, help="output grid size "
                                            "(default: input size)")
    p.add_argument("--n", type=int, default=DEFAULT_N,
                   help="truncation order for fourier/disk on grid input")
    p.add_argument("--eps-schedule", dest="eps_schedule", type=_float_list,
                   default=DEFAULT_EPS_SCHEDULE)
    p.add_argument("--rho-schedule", dest="rho_schedule", type=_float_list,
                   help="radii increasing toward 1 for the disk route")
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--output", required=True)

    p = sub.add_parser("eval", help="evaluate coefficients on a ring or "
                                    "extrapolate to the boundary")
    p.add_argument("--input", required=True, help="coefficient JSON")
    p.add_argument("--rho", type=float)
    p.add_argument("--rho-schedule", dest="rho_schedule", type=_float_list)
    p.add_argument("--grid", type=int, default=256)
    p.add_argument("--domain", type=_float_list,
                   help="a,b: tag the output grid as interval data")
    p.add_argument("--output", required=True)

    return parser


def _catalog_params(args) -> dict:
    return {key: getattr(args, key) for key in _CATALOG_FLAGS
            if getattr(args, key, None) is not None}


def _is_json(path: str) -> bool:
    return str(path).lower().endswith(".json")


def _load_grid_evaluator(path):
    """Grid CSV -> (evaluator, grid, domain); seam-aware for interval data."""
    grid, domain = formats.read_grid(path)
    if domain is None:
        return grid_evaluator(grid), grid, None
    ev = rescale.grid_pullback_evaluator(grid, rescale.IntervalMap(*domain))
    return ev, grid, domain


def _write_report(report, path):
    doc = formats.report_to_doc(report)
    if path:
        formats.save_json(path, doc)
    else:
        sys.stdout.write(formats.dumps_json(doc) + "\n")


def cmd_spectrum(args) -> int:
    if (args.catalog is None) == (args.input is None):
        raise DomainError("spectrum needs exactly one of --catalog "
                          "and --input")
    if args.n < 1:
        raise DomainError(f"--n must be >= 1, got {args.n}")
    if args.catalog is not None:
        entry = catalog.make(args.catalog, **_catalog_params(args))
        seq = entry.coefficients(args.n)
    else:
        # Interval data is periodized for integration; its seam jump
        # sits on a node, which the interpolant already pins.
        grid, _ = formats.read_grid(args.input)
        ev = grid_evaluator(grid)
        seq = compute_coefficients(ev, n=args.n, tol=args.tol)
    doc = formats.coefficients_to_doc(seq)
    if args.output:
        formats.save_json(args.output, doc)
    else:
        sys.stdout.write(formats.dumps_json(doc) + "\n")
    return 0


def cmd_filter(args) -> int:
    if _is_json(args.input):
        if args.method == "kernel":
            raise DomainError("kernel filtering needs grid input; "
                              "coefficient JSON uses --method multiplier")
        seq = formats.load_coefficients(args.input)
        formats.save_coefficients(args.output,
                                  multiplier_filter(seq, args.eps))
        return 0
    if args.method == "multiplier":
        raise DomainError("multiplier filtering needs coefficient JSON "
                          "input; grid CSV uses --method kernel")
    grid, domain = formats.read_grid(args.input)
    if args.domain is not None:
        domain = _domain_pair(args.domain)
    if domain is not None:
        out = rescale.filter_physical_grid(grid, domain, args.eps)
    else:
        out = kernel_filter_grid(grid, args.eps)
    formats.write_grid(args.output, out, domain=domain)
    return 0


def _domain_pair(vals):
    if len(vals) != 2:
        raise DomainError(f"--domain needs exactly a,b, got {len(vals)} "
                          "numbers")
    return (vals[0], vals[1])


def cmd_classify(args) -> int:
    if _is_json(args.input):
        cert = classify.classify_coefficients(
            formats.load_coefficients(args.input))
        _write_report(classify.certificate_report(cert), args.output)
        return 0
    ev, grid, _ = _load_grid_evaluator(args.input)
    report = classify.classify_pointwise(ev, n_grid=grid.n,
                                         eps_schedule=args.eps_schedule,
                                         tol=args.tol)
    _write_report(report, args.output)
    return 0


def _deltas_from_rhos(rhos) -> tuple:
    deltas = tuple(1.0 - r for r in rhos)
    if any(d <= 0 or d >= 1 for d in deltas):
        raise DomainError("radii must lie strictly inside (0, 1)")
    return deltas


def cmd_comb(args) -> int:
    from_json = _is_json(args.input)
    if from_json:
        seq = formats.load_coefficients(args.input)
        ev, grid = None, None
    else:
        ev, grid, _ = _load_grid_evaluator(args.input)
        seq = None
    n_grid = args.grid if args.grid is not None else \
        (grid.n if grid is not None else 256)
    if n_grid < 2:
        raise DomainError(f"--grid must be >= 2, got {n_grid}")

    if args.method == "filter-limit":
        if ev is None:
            raise DomainError("filter-limit combing needs grid input")
        out = classify.comb_by_filter_limit(ev, n_grid,
                                            eps_schedule=args.eps_schedule)
    elif args.method == "fourier":
        if seq is None:
            result = classify.comb_by_fourier(ev, n=args.n, n_grid=n_grid,
                                              coeff_tol=args.tol)
        else:
            result = classify.comb_from_coefficients(seq, n_grid)
        out = result.grid
        if result.non_convergent:
            out = replace(out, note=out.note + " NonConvergent")
    else:
        if seq is None:
            seq = compute_coefficients(ev, n=args.n, tol=args.tol)
        deltas = DEFAULT_DELTA_SCHEDULE if args.rho_schedule is None \
            else _deltas_from_rhos(args.rho_schedule)
        out = classify.comb_by_disk(seq, n_grid, delta_schedule=deltas)
    formats.write_grid(args.output, out)
    return 0


def cmd_eval(args) -> int:
    if (args.rho is None) == (args.rho_schedule is None):
        raise DomainError("eval needs exactly one of --rho and "
                          "--rho-schedule")
    if args.grid < 2:
        raise DomainError(f"--grid must be >= 2, got {args.grid}")
    seq = formats.load_coefficients(args.input)
    thetas = grid_nodes(args.grid)
    if args.rho is not None:
        values = seq.a0 + eval_ring(from_coefficients(seq), args.rho,
                                    thetas).real
        defined = np.ones(args.grid, dtype=bool)
        note = f"ring values at rho={args.rho:.17g}"
    else:
        deltas = _deltas_from_rhos(args.rho_schedule)
        values, _, defined = boundary_value_grid(seq, thetas, deltas)
        note = "boundary values by radial extrapolation"
    out = GridFunction(values=values, defined=defined, note=note)
    domain = _domain_pair(args.domain) if args.domain is not None else None
    formats.write_grid(args.output, out, domain=domain)
    return 0


_DISPATCH = {
    "spectrum": cmd_spectrum,
    "filter": cmd_filter,
    "classify": cmd_classify,
    "comb": cmd_comb,
    "eval": cmd_eval,
}


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return _DISPATCH[args.command](args)
    except _USAGE_ERRORS as exc:
        print(f"circlecomb {args.command}: {exc}", file=sys.stderr)
        return 2
    except _NUMERIC_ERRORS as exc:
        print(f"circlecomb {args.command}: numeric failure: {exc}",
              file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"circlecomb {args.command}: {exc}", file=sys.stderr)
        return 2
    except CircleCombError as exc:
        print(f"circlecomb {args.command}: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
