import argparse
import logging
import sys
from typing import List, Optional

from pydantic import ValidationError

from .config import app_settings, suite_settings
from .expr import ExprParseError, parse_element, render
from .expsolve import InconsistentSystem, generate_constraints, row_reduce, solve
from .ncalg import normalize
from .opaction import box_q, classical_limit, to_momenta
from .presets import PresetName, UnknownPresetError, build_preset, describe_preset, preset_names
from .schemas import CheckReport, CheckStatus, SuiteOptions, dump_json
from .services.suite_service import UnknownGroupError, run_all, suite_ok
from .verify import check_confluence

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_UNEXPECTED = 1
EXIT_USAGE = 2


def _emit(args, payload, text: str) -> None:
    if args.format == "json":
        print(dump_json(payload))
    else:
        print(text)


def _report_text(report: CheckReport) -> str:
    marker = report.status.value
    if report.expected is CheckStatus.FAIL:
        marker += ", expected" if report.ok else ", expected fail"
    lines = [f"[{marker}] {report.check} (examined {report.examined})"]
    for witness in report.witnesses:
        lines.append(f"    {witness.input}: {witness.difference}")
    return "\n".join(lines)


def _reports_text(reports: List[CheckReport]) -> str:
    lines = [_report_text(r) for r in reports]
    unexpected = [r.check for r in reports if not r.ok]
    if unexpected:
        lines.append(f"{len(unexpected)} of {len(reports)} checks unexpected: {', '.join(unexpected)}")
    else:
        lines.append(f"{len(reports)} checks, all as expected")
    return "\n".join(lines)


def cmd_normalize(args) -> int:
    p = build_preset(args.preset, corrected=not args.printed_typo)
    result = normalize(parse_element(args.expr, p), p)
    text = render(result, p)
    _emit(args, {"preset": p.name, "input": args.expr, "normal_form": text}, text)
    return EXIT_OK


def cmd_verify(args) -> int:
    options = SuiteOptions(
        groups=args.group or [],
        preset=None if args.all else args.preset,
        corrected=not args.printed_typo,
        max_degree=args.max_degree,
    )
    reports = run_all(options)
    _emit(args, reports, _reports_text(reports))
    return EXIT_OK if suite_ok(reports) else EXIT_UNEXPECTED


def cmd_confluence(args) -> int:
    p = build_preset(args.preset, corrected=not args.printed_typo)
    expected = CheckStatus.PASS
    for entry in suite_settings.checks:
        if entry.kind == "confluence" and entry.preset == p.name:
            expected = entry.expected
    report = check_confluence(p, args.max_degree, expected=expected)
    report.parameters["corrected"] = not args.printed_typo
    _emit(args, report, _report_text(report))
    return EXIT_OK if report.ok else EXIT_UNEXPECTED


def cmd_solve_exponents(args) -> int:
    system = generate_constraints()
    reduced = row_reduce(system.forms())
    payload = {
        "equations": [{"equation": str(c), "provenance": c.provenance} for c in system.equations],
        "reduced": [f"{f} = 0" for f in reduced],
        "with_reality": args.with_reality,
        "with_star_closure": args.with_star_closure,
    }
    lines = ["independent equations:"] + [f"    {f} = 0" for f in reduced]
    try:
        solution = solve(
            system, with_reality=args.with_reality, with_star_closure=args.with_star_closure
        )
    except InconsistentSystem as exc:
        payload["error"] = str(exc)
        _emit(args, payload, "\n".join(lines + [f"inconsistent: {exc}"]))
        return EXIT_UNEXPECTED
    payload["solution"] = {u: str(f) for u, f in solution.values.items()}
    payload["free"] = list(solution.free)
    lines.append(f"solution: {solution}")
    if solution.free:
        lines.append(f"free: {', '.join(solution.free)}")
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK


def cmd_limit(args) -> int:
    derivs = build_preset(PresetName.DERIV_ONLY)
    if args.target == "box":
        op = box_q()
    else:
        op = normalize(parse_element(args.target, derivs), derivs)
    parts = classical_limit(op, args.order)
    if args.momenta:
        momenta = build_preset(PresetName.MOMENTUM)
        rendered = {f"h^{k}": render(to_momenta(part), momenta) for k, part in parts.items()}
    else:
        rendered = {f"h^{k}": render(part, derivs) for k, part in parts.items()}
    payload = {"target": args.target, "order": args.order, "momenta": args.momenta, "parts": rendered}
    text = "\n".join(f"{k}: {v}" for k, v in rendered.items()) or "0"
    _emit(args, payload, text)
    return EXIT_OK


def cmd_list_presets(args) -> int:
    described = [describe_preset(name) for name in preset_names()]
    lines = []
    for preset in described:
        lines.append(f"{preset['name']}: {preset['description']}")
        tokens = ", ".join(
            f"{g['token']} = {g['label']}" if g["label"] and g["label"] != g["token"] else g["token"]
            for g in preset["generators"]
        )
        lines.append(f"    generators: {tokens}")
        census = ", ".join(f"{k} {v}" for k, v in preset["census"].items())
        lines.append(f"    rules: {preset['rules']} ({census})")
    _emit(args, described, "\n".join(lines))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qcone", description="Exact q-deformed light-cone calculus engine"
    )
    parser.add_argument("--format", choices=["text", "json"], default=app_settings.default_format)
    parser.add_argument("-v", "--verbose", action="count", default=0, help="-v info, -vv debug")
    sub = parser.add_subparsers(dest="command", required=True)

    p_norm = sub.add_parser("normalize", help="Normalize an expression in a preset")
    p_norm.add_argument("--preset", required=True, choices=preset_names())
    p_norm.add_argument("--printed-typo", action="store_true", help="Use the tables as printed")
    p_norm.add_argument("expr")
    p_norm.set_defaults(func=cmd_normalize)

    p_verify = sub.add_parser("verify", help="Run the verification suite")
    scope = p_verify.add_mutually_exclusive_group()
    scope.add_argument("--preset", choices=preset_names())
    scope.add_argument("--all", action="store_true")
    p_verify.add_argument("--group", action="append", choices=suite_settings.groups)
    p_verify.add_argument("--printed-typo", action="store_true", help="Use the tables as printed")
    p_verify.add_argument("--max-degree", type=int, default=app_settings.default_max_degree)
    p_verify.set_defaults(func=cmd_verify)

    p_conf = sub.add_parser("confluence", help="Critical-pair check of one preset")
    p_conf.add_argument("--preset", required=True, choices=preset_names())
    p_conf.add_argument("--max-degree", type=int, default=app_settings.default_max_degree)
    p_conf.add_argument("--printed-typo", action="store_true", help="Use the tables as printed")
    p_conf.set_defaults(func=cmd_confluence)

    p_solve = sub.add_parser("solve-exponents", help="Derive the twistor-conjugate exponents")
    p_solve.add_argument("--with-reality", action="store_true")
    p_solve.add_argument("--with-star-closure", action="store_true")
    p_solve.set_defaults(func=cmd_solve_exponents)

    p_limit = sub.add_parser("limit", help="Classical limit q = exp(ih) of an operator")
    p_limit.add_argument("--order", type=int, required=True)
    p_limit.add_argument("--momenta", action="store_true", help="Render with P = -i D")
    p_limit.add_argument("target", nargs="?", default="box")
    p_limit.set_defaults(func=cmd_limit)

    p_list = sub.add_parser("list-presets", help="Presets, tokens and dotted-index labels")
    p_list.set_defaults(func=cmd_list_presets)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    level = {0: logging.WARNING, 1: logging.INFO}.get(args.verbose, logging.DEBUG)
    logging.basicConfig(level=level, format=app_settings.log_format, stream=sys.stderr)

    if getattr(args, "max_degree", 3) < 3:
        parser.error("--max-degree must be at least 3")
    if getattr(args, "order", 0) < 0:
        parser.error("--order must be non-negative")

    try:
        return args.func(args)
    except ExprParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (UnknownPresetError, UnknownGroupError, ValidationError) as exc:
        logger.debug("usage error", exc_info=True)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
