"""CLI entrypoint for the solver service"""
import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Optional, Sequence

from shared.models import ConvergentTable, Equation, RecurrencePair, Sign
from shared.realcore import CReal
from shared.utils.config import get_settings
from shared.utils.errors import (
    BudgetError,
    ConfigurationError,
    PrecisionError,
    ReductionError,
    SolverError,
)

from .certificate_repository import CertificateRepository
from .linforms import absolute_bound, build_stage, form_kinds
from .parser import load_pair_config, parse_pair_config
from .pipeline import VerificationService
from .reduction import dp_reduce, expand, family_mu_values, gamma_to_lemma_form, reduce_family
from .search import search
from .sequences import builtin_pair

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VALIDATION = 2
EXIT_UNCERTIFIED = 3


class _ArgumentParser(argparse.ArgumentParser):
    """argparse that exits with status 1 on malformed flags."""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _positive_int(raw: str) -> int:
    try:
        value = int(raw)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {raw!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {value}")
    return value


def _add_pair_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--equation",
        type=str.lower,
        choices=[Equation.FPP.value, Equation.FFP.value],
        default=None,
        help="Built-in equation: fpp (F_k = P_m P_n) or ffp (P_k = F_m F_n)",
    )
    parser.add_argument(
        "--config",
        type=Path,
        default=None,
        metavar="FILE",
        help="JSON pair config for a custom recurrence pair (overrides --equation)",
    )


def _add_precision_argument(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--precision",
        type=_positive_int,
        default=None,
        metavar="DIGITS",
        help="Working precision in decimal digits (default: BRS_DEFAULT_PRECISION or 256)",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = _ArgumentParser(
        prog="brs",
        description="Certified bound, reduce and search for U_k = V_m * V_n",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)

    verify = subparsers.add_parser("verify", help="Run the full proof and write a certificate")
    _add_pair_arguments(verify)
    _add_precision_argument(verify)
    verify.add_argument(
        "--certificate",
        type=Path,
        default=None,
        metavar="PATH",
        help="Where to write the certificate (default: <certificate_dir>/<equation>.json)",
    )
    verify.add_argument("--k-max", type=_positive_int, default=None, help="Search budget for k")
    verify.add_argument("--n-max", type=_positive_int, default=None, help="Search budget for n")
    verify.add_argument(
        "--convergent-index",
        type=int,
        default=None,
        metavar="N",
        help="Lowest convergent index the reduction may use (74 replays the published run)",
    )

    search_cmd = subparsers.add_parser("search", help="Exhaustive search only")
    _add_pair_arguments(search_cmd)
    search_cmd.add_argument("--k-max", type=_positive_int, default=None)
    search_cmd.add_argument("--n-max", type=_positive_int, default=None)

    reduce_cmd = subparsers.add_parser("reduce", help="Run the reduction engine on one form")
    reduce_cmd.add_argument(
        "--tau-pair",
        type=str.lower,
        choices=[Equation.FPP.value, Equation.FFP.value],
        required=True,
        help="Pair whose tau = log(smaller root) / log(larger root) is expanded",
    )
    reduce_cmd.add_argument("--form", choices=["first", "second"], default="first")
    reduce_cmd.add_argument(
        "--M", type=_positive_int, default=None, help="Coefficient bound (default: s * N)"
    )
    reduce_cmd.add_argument(
        "--lemma-a", type=_positive_int, default=None, help="Override the constant A"
    )
    reduce_cmd.add_argument(
        "--m-max",
        type=_positive_int,
        default=None,
        help="Family range for the second form (default: the first-form m bound)",
    )
    reduce_cmd.add_argument("--convergent-index", type=int, default=None, metavar="N")
    _add_precision_argument(reduce_cmd)

    bounds = subparsers.add_parser("bounds", help="Linear-form bounds only")
    _add_pair_arguments(bounds)
    _add_precision_argument(bounds)

    replay = subparsers.add_parser("replay", help="Re-run a certificate and compare byte for byte")
    replay.add_argument("--certificate", type=Path, required=True, metavar="PATH")

    return parser


def _resolve_pair(args: argparse.Namespace) -> RecurrencePair:
    if args.config is not None:
        return load_pair_config(args.config, dps=getattr(args, "precision", None))
    if args.equation is None:
        raise ConfigurationError("Give --equation or --config")
    return builtin_pair(Equation(args.equation))


def _cmd_verify(args: argparse.Namespace) -> int:
    pair = _resolve_pair(args)
    service = VerificationService(
        precision=args.precision,
        k_max=args.k_max,
        n_max=args.n_max,
        convergent_start_index=args.convergent_index,
    )
    certificate, path = service.verify_and_save(pair, args.certificate)
    print(json.dumps({"certificate": str(path), "k_values": certificate.stage3.k_values}))
    return EXIT_OK


def _cmd_search(args: argparse.Namespace) -> int:
    settings = get_settings()
    pair = _resolve_pair(args)
    solutions = search(pair, args.k_max or settings.k_max, args.n_max or settings.n_max)
    print(json.dumps([s.model_dump(mode="json") for s in solutions], indent=2))
    return EXIT_OK


def _cmd_bounds(args: argparse.Namespace) -> int:
    bounds = absolute_bound(_resolve_pair(args), args.precision)
    print(bounds.model_dump_json(indent=2))
    return EXIT_OK


def _first_form_m_bound(
    pair: RecurrencePair, M: int, dps: Optional[int], table: ConvergentTable, start: int
) -> int:
    first_kind, _ = form_kinds(pair)
    stage = build_stage(first_kind, pair, dps=dps)
    bound = max(
        dp_reduce(gamma_to_lemma_form(stage, sign, M), table, start).exponent_bound
        for sign in Sign
    )
    return max(bound, get_settings().m_guard - 1)


def _cmd_reduce(args: argparse.Namespace) -> int:
    pair = builtin_pair(Equation(args.tau_pair))
    dps = args.precision
    bounds = absolute_bound(pair, dps)
    M = args.M or bounds.M
    start = (
        args.convergent_index
        if args.convergent_index is not None
        else get_settings().convergent_start_index
    )
    first_kind, second_kind = form_kinds(pair)
    if args.form == "first":
        stage = build_stage(first_kind, pair, dps=dps)
    else:
        stage = build_stage(second_kind, pair, m_height=bounds.first.height_coefficient, dps=dps)
    table = expand(stage.tau, 6 * M, min_length=start + 1)
    m_values: list[int] = []
    if args.form == "second":
        m_max = args.m_max or _first_form_m_bound(pair, M, dps, table, start)
        m_values = list(range(1, m_max + 1))

    results = []
    for sign in Sign:
        base = gamma_to_lemma_form(stage, sign, M, None if args.form == "first" else 1)
        if args.lemma_a is not None:
            base = base.model_copy(update={"A": CReal.exact(args.lemma_a, base.tau.prec)})
        if args.form == "first":
            results.append(dp_reduce(base, table, start).model_dump(mode="json"))
        else:
            mu_values = family_mu_values(stage, sign, M, m_values)
            family = reduce_family(base, mu_values, table, start)
            results.append(family.model_dump(mode="json"))
    print(json.dumps(results, indent=2))
    return EXIT_OK


def _cmd_replay(args: argparse.Namespace) -> int:
    repository = CertificateRepository()
    try:
        stored = json.loads(repository.load_text(args.certificate))
        config = stored["config"]
    except (json.JSONDecodeError, KeyError, TypeError) as e:
        raise ConfigurationError(f"{args.certificate} is not a certificate: {e}") from e

    settings = get_settings().model_copy(
        update={
            "m_guard": config["m_guard"],
            "n_guard": config["n_guard"],
            "extra_convergents": config["extra_convergents"],
            "precision_cap": config["precision_cap"],
        }
    )
    pair = parse_pair_config(stored, dps=config["precision"])
    service = VerificationService(
        settings=settings,
        certificate_repository=repository,
        precision=config["precision"],
        k_max=config["k_max"],
        n_max=config["n_max"],
        convergent_start_index=config["convergent_start_index"],
    )
    certificate = service.verify(pair)
    identical = repository.matches(certificate, args.certificate)
    print(json.dumps({"certificate": str(args.certificate), "identical": identical}))
    return EXIT_OK if identical else EXIT_UNCERTIFIED


_COMMANDS = {
    "verify": _cmd_verify,
    "search": _cmd_search,
    "bounds": _cmd_bounds,
    "reduce": _cmd_reduce,
    "replay": _cmd_replay,
}


def run_cli(argv: Optional[Sequence[str]] = None) -> int:
    """Parse ``argv``, run the subcommand and return the exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)

    settings = get_settings()
    log_level = getattr(logging, settings.log_level.upper(), logging.INFO)
    logging.basicConfig(
        level=log_level,
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
    )

    try:
        return _COMMANDS[args.command](args)
    except ConfigurationError as e:
        logger.error(f"Invalid configuration: {e}", exc_info=True)
        return EXIT_VALIDATION
    except (PrecisionError, BudgetError, ReductionError) as e:
        logger.error(f"Could not certify: {e}", exc_info=True)
        return EXIT_UNCERTIFIED
    except SolverError as e:
        logger.error(f"Solver failed: {e}", exc_info=True)
        return EXIT_USAGE
    except Exception as e:
        logger.error(f"Unexpected failure: {e}", exc_info=True)
        return EXIT_USAGE


def main(argv: Optional[Sequence[str]] = None):
    """Main entry point for the solver service."""
    sys.exit(run_cli(argv))
