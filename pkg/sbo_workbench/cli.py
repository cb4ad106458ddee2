"""Command-line front end: ``sbo-workbench construct`` and ``sbo-workbench verify``.

Exit codes follow EXIT_CODES: 0 when every check passes, 1 on any failed
check, 2 on bad flags. Logs go to stderr; stdout carries the operator or the
report only.

Negative rational vectors must be attached with ``=`` (``--nu=-1/2,3``).
"""

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import List, Optional

from pydantic import ValidationError

from .config import load_settings
from .constants import EXIT_CODES
from .exact_algebra import lambda_forms
from .schemas import OutputFormat, RunConfig, SuiteReport, known_suites
from .verifier import run_suite
from .weyl_algebra import build_D, build_F, build_L

logger = logging.getLogger(__name__)

LOG_FORMAT = "%(asctime)s - %(levelname)s - %(message)s"


def _rationals(text: str) -> List[str]:
    return [entry.strip() for entry in text.split(",") if entry.strip()]


def _naturals(text: str) -> List[int]:
    try:
        return [int(entry) for entry in _rationals(text)]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _add_parameter_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--n", type=int, default=2, help="Size of the pair (GL_{n+1}, GL_n)")
    parser.add_argument("--k", type=int, default=None, help="Restriction index 0..n")
    parser.add_argument("--lambda", dest="lam", type=_rationals, default=None, help="lambda as comma-separated rationals")
    parser.add_argument("--alpha", type=_naturals, default=None, help="alpha as comma-separated naturals")
    parser.add_argument("--verbose", action="store_true", help="Log construction steps at DEBUG")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sbo-workbench",
        description="Construct and verify differential symmetry-breaking operators for (GL_{n+1}, GL_n)",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    construct = commands.add_parser("construct", help="Print D_i, F_i or L_{alpha,k} in normal form")
    _add_parameter_flags(construct)
    construct.add_argument("--op", choices=["D", "F", "L"], required=True)
    construct.add_argument("--i", type=int, default=None, help="Operator index 1..n+1 for D and F")
    construct.add_argument(
        "--output", choices=[f.value for f in OutputFormat], default=OutputFormat.LATEX.value
    )

    verify = commands.add_parser("verify", help="Run a verification suite")
    _add_parameter_flags(verify)
    verify.add_argument("--suite", default="all", help=f"One of {', '.join(known_suites())}")
    verify.add_argument("--nu", type=_rationals, default=None, help="nu as comma-separated rationals")
    verify.add_argument("--xi", type=_naturals, default=None, help="xi as comma-separated bits")
    verify.add_argument("--eta", type=_naturals, default=None, help="eta as comma-separated bits")
    verify.add_argument("--seed", type=int, default=None)
    verify.add_argument("--samples", type=int, default=None)
    verify.add_argument("--mode", choices=["symbolic", "numeric"], default="symbolic")
    verify.add_argument("--output", choices=[f.value for f in OutputFormat], default=OutputFormat.JSON.value)
    verify.add_argument("--no-timing", dest="timing", action="store_false", help="Omit wall-clock times from the report")
    verify.add_argument("--output-dir", default=None, help="Report directory (overrides SBO_OUTPUT_DIR)")
    return parser


def _run_config(args: argparse.Namespace) -> RunConfig:
    fields = {
        name: getattr(args, name)
        for name in ("n", "k", "lam", "nu", "xi", "eta", "alpha", "seed", "samples", "mode", "output", "timing")
        if getattr(args, name, None) is not None
    }
    return RunConfig(**fields)


def cmd_construct(args: argparse.Namespace) -> int:
    """Print the requested operator; symbolic lambda unless --lambda is given."""
    cfg = RunConfig(n=args.n, k=args.k, lam=args.lam, nu=None if args.lam is None else ["0"] * args.n, alpha=args.alpha)
    lam = cfg.lam if cfg.lam is not None else lambda_forms(cfg.n)
    if args.op == "L":
        if cfg.k is None:
            raise ValueError("construct --op L needs --k")
        alpha = cfg.alpha if cfg.alpha is not None else [1] * cfg.n
        operator = build_L(alpha, cfg.k, lam, cfg.n)
        label = f"L_{{{tuple(alpha)},{cfg.k}}}"
    else:
        if args.i is None:
            raise ValueError(f"construct --op {args.op} needs --i")
        build = build_D if args.op == "D" else build_F
        operator = build(args.i, lam, cfg.n)
        label = f"{args.op}_{args.i}"
    logger.info(f"Constructed {label} at n={cfg.n} with {len(operator.sorted_terms())} terms")
    if args.output == OutputFormat.JSON.value:
        print(json.dumps({"operator": label, "n": cfg.n, "terms": operator.to_json()}, indent=2))
    elif args.output == OutputFormat.TEXT.value:
        print(f"{label} = {operator!r}")
    else:
        print(operator.to_latex())
    return EXIT_CODES["pass"]


def render_report(report: SuiteReport, output: OutputFormat) -> str:
    if output is OutputFormat.JSON:
        return report.to_json()
    if output is OutputFormat.LATEX:
        rows = [
            f"{check.check.replace('_', chr(92) + '_')} & {check.status.value} \\\\"
            for check in report.checks
        ]
        return "\n".join(["\\begin{tabular}{ll}", *rows, "\\end{tabular}"])
    lines = [f"{check.status.value:4s}  {check.check}  [{check.anchor}]" for check in report.checks]
    lines.append(f"{report.suite}: {report.status.value} ({len(report.failures())} of {len(report.checks)} failed)")
    return "\n".join(lines)


def cmd_verify(args: argparse.Namespace) -> int:
    """Run the suite, print and store the report, and map its status to an exit code."""
    cfg = _run_config(args)
    report = run_suite(args.suite, cfg)
    rendered = render_report(report, cfg.output)
    settings = load_settings()
    extension = {"json": "json", "latex": "tex", "text": "txt"}[cfg.output.value]
    path = Path(args.output_dir) / f"{args.suite}.{extension}" if args.output_dir else settings.report_path(args.suite, extension)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(rendered + "\n", encoding="utf-8")
    logger.info(f"Report written to {path}")
    print(rendered)
    return EXIT_CODES["pass"] if report.passed else EXIT_CODES["fail"]


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_CODES["usage"]

    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format=LOG_FORMAT,
        stream=sys.stderr,
    )
    try:
        if args.command == "construct":
            return cmd_construct(args)
        return cmd_verify(args)
    except ValidationError as e:
        messages = "; ".join(error["msg"] for error in e.errors())
        print(f"❌ usage error: {messages}", file=sys.stderr)
    except ValueError as e:
        print(f"❌ usage error: {e}", file=sys.stderr)
    return EXIT_CODES["usage"]


if __name__ == "__main__":
    sys.exit(main())
