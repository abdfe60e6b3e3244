"""
Command-line entry point

    python -m harmap radius --function F --kind convex --tol 1e-6
    python -m harmap classify --function f_alpha:0,1 --check m-alpha
    python -m harmap plot --function L --radii 0.9 --out fig.svg
    python -m harmap convolve --left L --right F --emit report
    python -m harmap verify --suite all --out report.json

Exit codes: 0 success, 1 a check failed, 2 usage error.
"""

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import List, Optional, Sequence

from pydantic import BaseModel, ValidationError

from .catalog import parse_entry
from .classifiers import (
    area_series,
    jacobian_area,
    kaplan_sweep,
    lemma13_orders,
    m_alpha_check,
    theorem2_classify,
    thm31_bounds_check,
)
from .config import Settings, load_settings
from .convolution import build_expression, hadamard
from .errors import ConfigError, DomainError, HarmonicMapError, InvalidParameterError
from .harmonic_map import HarmonicMap, injectivity_sample_check, sense_preserving_check
from .plotting import PlotSpec, circle_radii, plot_command
from .radius_analysis import radius_search
from .reports import CheckReport, cpair
from .verification import SUITES, run_suite

logger = logging.getLogger(__name__)

EXIT_OK, EXIT_CHECK_FAILED, EXIT_USAGE = 0, 1, 2
CHECKS = ("lemma", "theorem2", "m-alpha", "bounds", "sense", "injectivity", "kaplan", "area")
BANNER = "=" * 60


def _mark(passed: bool) -> str:
    return "✅" if passed else "❌"


def _complex(text: str) -> complex:
    try:
        re_part, im_part = (float(p) for p in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected <re>,<im>, got {text!r}") from None
    return complex(re_part, im_part)


def _radii(text: str) -> List[float]:
    try:
        return [float(r) for r in text.split(",") if r.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated radii, got {text!r}") from None


def _write(out: Optional[Path], payload) -> None:
    if out is None:
        return
    if isinstance(payload, BaseModel):
        payload = payload.model_dump(mode="json")
    elif isinstance(payload, list):
        payload = [p.model_dump(mode="json") if isinstance(p, BaseModel) else p for p in payload]
    Path(out).write_text(json.dumps(payload, indent=2, ensure_ascii=False) + "\n", encoding="utf-8")
    print(f"Wrote {out}")


def _alpha_for(args, f_text: str) -> complex:
    """--alpha if given, else the parameter of a bare catalog entry."""
    if args.alpha is not None:
        return args.alpha
    alpha = None if f_text.startswith("conv(") else parse_entry(f_text).m_alpha_parameter
    if alpha is None:
        raise InvalidParameterError(f"--alpha is required for {f_text}")
    return alpha


# ========================================
# SUBCOMMANDS
# ========================================

def cmd_plot(args, settings: Settings) -> int:
    fmt = args.format or ("csv" if args.out.suffix.lower() == ".csv" else "svg")
    spec = PlotSpec(
        function=args.function,
        radii=args.radii,
        n_rays=args.n_rays,
        n_circles=args.n_circles,
        samples_per_curve=args.samples,
        output_format=fmt,
    )
    f = build_expression(spec.function, args.order)
    path = plot_command(f, spec, args.out)
    print(f"✅ {spec.function}: {len(circle_radii(spec))} circles, {spec.n_rays} rays -> {path}")
    return EXIT_OK


def _classify(f: HarmonicMap, args) -> List[BaseModel]:
    check = args.check
    if check == "lemma":
        return list(lemma13_orders(f))
    if check == "theorem2":
        return [theorem2_classify(f.h, _alpha_for(args, args.function), args.power)]
    if check == "m-alpha":
        return [m_alpha_check(f, _alpha_for(args, args.function))]
    if check == "bounds":
        return [thm31_bounds_check(f, _alpha_for(args, args.function))]
    if check == "sense":
        return [sense_preserving_check(f)]
    if check == "injectivity":
        return [injectivity_sample_check(f)]
    if check == "kaplan":
        return [kaplan_sweep(f, args.r)]
    alpha = _alpha_for(args, args.function)
    series, quadrature = area_series(f, alpha), jacobian_area(f)
    return [CheckReport(
        name="area",
        passed=abs(series - quadrature) <= 1e-4 * abs(series),
        value=series,
        necessary_only=False,
        truncation_order=f.order,
        details={"quadrature": quadrature, "alpha": cpair(alpha)},
    )]


def cmd_classify(args, settings: Settings) -> int:
    f = build_expression(args.function, args.order)
    reports = _classify(f, args)
    print(BANNER)
    print(f"{args.check} check for {f.label} (order {f.order})")
    print(BANNER)
    for rep in reports:
        name = getattr(rep, "name", None) or rep.condition_name
        value = rep.value if isinstance(rep, CheckReport) else rep.condition_value
        line = f"{_mark(rep.passed)} {name}: {value}"
        if getattr(rep, "order_starlike", None) is not None:
            line += f" | starlike order {rep.order_starlike:.12g}"
        if getattr(rep, "order_convex", None) is not None:
            line += f" | convex order {rep.order_convex:.12g}"
        print(line)
    _write(args.out, reports)
    # a coefficient condition that fails is a classification, not a check failure
    if args.check in ("lemma", "theorem2"):
        return EXIT_OK
    return EXIT_OK if all(r.passed for r in reports) else EXIT_CHECK_FAILED


def cmd_radius(args, settings: Settings) -> int:
    f = build_expression(args.function, args.order)
    kind = {"convex": "convexity", "starlike": "starlikeness"}[args.kind]
    result = radius_search(f, kind, tol=args.tol, n_theta=args.n_theta or settings.theta_grid)
    if result.reached_limit:
        limit = "search limit" if f.exact is not None else f"series of order {f.order} are not reliable beyond"
        print(f"✅ {f.label}: {kind} test passes up to r = {result.r_hi:.12g} ({limit})")
    else:
        print(f"✅ {f.label}: {kind} radius in [{result.r_lo:.12g}, {result.r_hi:.12g}]")
    _write(args.out, result)
    return EXIT_OK


def cmd_convolve(args, settings: Settings) -> int:
    left = build_expression(args.left, args.order)
    right = build_expression(args.right, args.order)
    product = hadamard(left, right).product
    if args.emit == "coeffs":
        n = min(args.n_coeffs, product.order)
        rows = [{"n": k, "a": cpair(product.h[k]), "b": cpair(product.g[k])} for k in range(1, n + 1)]
        for row in rows:
            print(f"{row['n']:4d}  a = {complex(*row['a']):.12g}  b = {complex(*row['b']):.12g}")
        _write(args.out, {"label": product.label, "coefficients": rows})
        return EXIT_OK
    r_max = 0.95
    if product.exact is None:
        r_max = min(r_max, product.value_radius - 1e-3, product.derivative_radius - 1e-3)
        logger.warning({"event": "convolve_truncated", "map": product.label, "order": product.order, "r_max": r_max})
    reports = [sense_preserving_check(product, r_max=r_max), injectivity_sample_check(product, r_max=min(r_max, 0.9))]
    print(BANNER)
    print(product.label)
    print(BANNER)
    for rep in reports:
        print(f"{_mark(rep.passed)} {rep.name}: {rep.value:.6g}")
    _write(args.out, reports)
    return EXIT_OK if all(r.passed for r in reports) else EXIT_CHECK_FAILED


def cmd_verify(args, settings: Settings) -> int:
    report = run_suite(args.suite, order=args.order, n_theta=settings.theta_grid, crosscheck_order=settings.crosscheck_order)
    print(BANNER)
    print(f"VERIFICATION SUITE: {args.suite}")
    print(BANNER)
    for rec in report.records:
        print(f"{_mark(rec.passed)} {rec.claim_id}: computed {rec.computed}, expected {rec.expected}")
    print(f"\n{len(report.records) - len(report.failures)}/{len(report.records)} records passed")
    _write(args.out, report)
    return EXIT_OK if report.passed else EXIT_CHECK_FAILED


# ========================================
# PARSER
# ========================================

def build_parser(settings: Settings) -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="harmap", description="Planar harmonic mappings on the unit disk.")
    parser.add_argument("--order", type=int, default=settings.trunc_order, help="series truncation order")
    parser.add_argument("--log-level", default=settings.log_level)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("plot", help="images of concentric circles and radial segments")
    p.add_argument("--function", required=True)
    p.add_argument("--radii", type=_radii, default=[0.5, 0.9], help="comma-separated radii in (0, 1)")
    p.add_argument("--n-rays", type=int, default=12)
    p.add_argument("--n-circles", type=int, default=8)
    p.add_argument("--samples", type=int, default=256, help="samples per curve (>= 64)")
    p.add_argument("--format", choices=("svg", "csv"), default=None, help="defaults to the --out suffix")
    p.add_argument("--out", type=Path, required=True)
    p.set_defaults(handler=cmd_plot)

    p = sub.add_parser("classify", help="coefficient classifiers and sampled checks")
    p.add_argument("--function", required=True)
    p.add_argument("--check", choices=CHECKS, required=True)
    p.add_argument("--alpha", type=_complex, default=None, help="<re>,<im>")
    p.add_argument("--power", type=int, choices=(2, 3), default=2)
    p.add_argument("--r", type=float, default=0.9, help="radius for the Kaplan sweep")
    p.add_argument("--out", type=Path, default=None)
    p.set_defaults(handler=cmd_classify)

    p = sub.add_parser("radius", help="radius of convexity or starlikeness")
    p.add_argument("--function", required=True)
    p.add_argument("--kind", choices=("convex", "starlike"), required=True)
    p.add_argument("--tol", type=float, default=1e-6)
    p.add_argument("--n-theta", type=int, default=None)
    p.add_argument("--out", type=Path, default=None)
    p.set_defaults(handler=cmd_radius)

    p = sub.add_parser("convolve", help="harmonic Hadamard product")
    p.add_argument("--left", required=True)
    p.add_argument("--right", required=True)
    p.add_argument("--emit", choices=("coeffs", "report"), default="coeffs")
    p.add_argument("--n-coeffs", type=int, default=10)
    p.add_argument("--out", type=Path, default=None)
    p.set_defaults(handler=cmd_convolve)

    p = sub.add_parser("verify", help="recompute the catalogued results")
    p.add_argument("--suite", choices=("all",) + SUITES, default="all")
    p.add_argument("--out", type=Path, default=None)
    p.set_defaults(handler=cmd_verify)
    return parser


def dispatch(argv: Sequence[str]) -> int:
    try:
        settings = load_settings()
    except ConfigError as e:
        print(f"❌ {e}", file=sys.stderr)
        return EXIT_USAGE

    parser = build_parser(settings)
    try:
        args = parser.parse_args(list(argv))
    except SystemExit as e:
        return EXIT_OK if e.code in (0, None) else EXIT_USAGE

    level = logging.getLevelName(args.log_level.upper())
    if not isinstance(level, int):
        print(f"❌ unknown log level {args.log_level!r}", file=sys.stderr)
        return EXIT_USAGE
    logging.basicConfig(level=level, format="%(message)s")
    logger.debug({"event": "dispatch", "command": args.command, "order": args.order})
    try:
        return args.handler(args, settings)
    except (InvalidParameterError, DomainError, ValidationError) as e:
        print(f"❌ {e}", file=sys.stderr)
        return EXIT_USAGE
    except HarmonicMapError as e:
        print(f"❌ {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_CHECK_FAILED
    except OSError as e:
        print(f"❌ {e}", file=sys.stderr)
        return EXIT_CHECK_FAILED


def main() -> None:
    sys.exit(dispatch(sys.argv[1:]))
