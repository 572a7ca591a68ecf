"""
twomode: command line reports on entangled number states

Every command builds a :class:`~twomode.reports.Report` and hands it to the
writer selected with ``--format``. Exit codes: ``0`` success, ``1`` a hard
check failed in ``verify``, ``2`` usage error, ``3`` truncation, precision,
resource or output failure.
"""

from __future__ import annotations

import argparse
import logging
import sys

from ._version import __version__
from .coherent import CoherentLabel, displaced_coherent_state
from .config import DEFAULT_SETTINGS, Settings, settings_from_options
from .criteria import criteria_report, duan_violation_threshold
from .entanglement import entropy_grid, monotonicity_findings
from .errors import (
    ConfigurationError,
    InvalidArgumentError,
    PrecisionError,
    ReportError,
    ResourceError,
    TruncationError,
)
from .fock import TwoModeState
from .reports import Plot, Report, writer_from_string
from .reports.registry import FORMATS, format_for_path
from .states import EnsLabel, closed_form_schmidt, ens_state, suggested_cutoffs, tmsv
from .typing import Any, Callable, Dict, List, NamedTuple, Optional, Sequence
from .util import Cutoffs, parse_complex, parse_cutoffs
from .verify import failed, run_suite

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2
EXIT_NUMERIC = 3

#: vertical offset per N_B between the curves of the preset distribution plot
CURVE_OFFSET = 0.02
#: a highly excited mode A with one to four excitations of mode B
DISTRIBUTION_PRESET = {"xi": 0.7, "na": 120, "nb": [0, 1, 2, 3, 4]}
ENTROPY_PRESET = {"xi": [0.7], "n_max": 10}

#: number of parameters each state kind takes in ``criteria``/``state-dump``
STATE_KINDS = {"ens": 3, "tmsv": 1, "product": 2, "coherent": 3}

#: arguments that never change the contents of an output file
UNECHOED = {"handler", "out", "verbose", "quiet"}


class Outcome(NamedTuple):
    report: Report
    status: int = EXIT_OK


Handler = Callable[[argparse.Namespace, Settings], Outcome]


def _cutoffs(value: str) -> Cutoffs:
    try:
        return parse_cutoffs(value)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def _config_echo(args: argparse.Namespace) -> Dict[str, Any]:
    return {
        key: str(value) if isinstance(value, Cutoffs) else value
        for key, value in sorted(vars(args).items())
        if key not in UNECHOED
    }


def _metadata(
    args: argparse.Namespace, settings: Settings, **extra: Any
) -> Dict[str, Any]:
    return {
        "version": __version__,
        "command": args.command,
        "config": _config_echo(args),
        "settings": settings.as_dict(),
        **extra,
    }


def _m_max(label: EnsLabel, cutoffs: Optional[Cutoffs]) -> Optional[int]:
    """the last Schmidt index whose product state fits inside ``cutoffs``"""

    if cutoffs is None:
        return None
    if label.offset >= 0:
        return min(cutoffs.cutoff_a - label.offset, cutoffs.cutoff_b) - 1

    return min(cutoffs.cutoff_a, cutoffs.cutoff_b + label.offset) - 1


def distribution(args: argparse.Namespace, settings: Settings) -> Outcome:
    """squared Schmidt coefficients of ``|N_A, N_B; xi>`` for each ``N_B``"""

    if args.preset:
        args.xi, args.na, args.nb = (
            DISTRIBUTION_PRESET[key] for key in ("xi", "na", "nb")
        )
    rows: List[Sequence[Any]] = []
    spectra: List[Dict[str, Any]] = []

    for n_b in args.nb:
        label = EnsLabel(args.na, n_b, args.xi)
        spectrum = closed_form_schmidt(label, _m_max(label, args.cutoff), settings)
        moments = spectrum.moments()
        spectra.append(
            {
                **spectrum.header(),
                "cutoffs": str(spectrum.cutoffs),
                "truncation_loss": spectrum.tail_mass,
                "nodes": spectrum.nodes(),
                "mean": moments.mean,
                "variance": moments.variance,
            }
        )
        logger.info(
            "%s: %d coefficients, %d nodes", label, spectrum.m_max + 1, spectrum.nodes()
        )

        for m, coeff, weight in spectrum.rows():
            if args.m_max is not None and m > args.m_max:
                break
            rows.append((label.n_a, label.n_b, m, coeff, weight))
    offsets = {n_b: CURVE_OFFSET * n_b for n_b in args.nb} if args.preset else {}

    return Outcome(
        Report(
            name="distribution",
            metadata=_metadata(
                args,
                settings,
                cutoffs={item["N_B"]: item["cutoffs"] for item in spectra},
                truncation_loss=max(item["truncation_loss"] for item in spectra),
                spectra=spectra,
            ),
            columns=["N_A", "N_B", "m", "C_m", "C_m_squared"],
            rows=rows,
            plot=Plot(
                kind="lines",
                x="m",
                y="C_m_squared",
                group="N_B",
                offsets=offsets,
                title=f"|C_m|^2 for N_A={args.na}, xi={args.xi:g}",
            ),
        )
    )


def entropy(args: argparse.Namespace, settings: Settings) -> Outcome:
    """the entanglement entropy over ``[0, n_max]^2`` for each ``xi``"""

    if args.preset:
        args.xi, args.n_max = ENTROPY_PRESET["xi"], ENTROPY_PRESET["n_max"]
    if args.format == "svg" and len(args.xi) > 1:
        raise InvalidArgumentError("the svg heatmap takes a single xi")
    grids = {
        xi: entropy_grid(xi, args.n_max, args.method, args.workers, settings)
        for xi in args.xi
    }
    cells = [cell for xi in args.xi for cell in grids[xi]]
    findings = monotonicity_findings(grids)
    summary = findings.summary()

    for conjecture, fraction in summary.items():
        sys.stderr.write(
            f"conjecture {conjecture}: {findings.held(conjecture)}/"
            f"{findings.checked[conjecture]} adjacent pairs hold ({fraction:.1%})\n"
        )

    return Outcome(
        Report(
            name="entropy-grid",
            metadata=_metadata(
                args,
                settings,
                cutoffs={
                    f"{cell.n_a},{cell.n_b},{cell.xi:g}": str(cell.cutoffs)
                    for cell in cells
                },
                truncation_loss=max(cell.truncation_loss for cell in cells),
                monotonicity=summary,
                conjecture_findings=[
                    {
                        "conjecture": finding.conjecture,
                        "from": str(finding.smaller),
                        "to": str(finding.larger),
                        "delta": finding.delta,
                    }
                    for finding in findings.violations
                ],
            ),
            columns=["N_A", "N_B", "xi", "entropy_bits"],
            rows=[(cell.n_a, cell.n_b, cell.xi, cell.entropy_bits) for cell in cells],
            plot=Plot(
                kind="heatmap",
                x="N_A",
                y="N_B",
                value="entropy_bits",
                title=f"entanglement entropy (bits), xi={args.xi[0]:g}",
            ),
        )
    )


def build_state(
    kind: str, params: Sequence[str], cutoffs: Optional[Cutoffs], settings: Settings
) -> TwoModeState:
    """
    the state named on the command line, e.g. ``ens 3 1 0.7``,
    ``tmsv 0.7``, ``product 0 0`` or ``coherent 1+0.5j 0.2 0.5``

    :raise InvalidArgumentError: when the parameters do not fit ``kind``
    """

    expected = STATE_KINDS[kind]

    if len(params) != expected:
        raise InvalidArgumentError(
            f"'{kind}' takes {expected} parameter(s), got {len(params)}"
        )
    if kind == "ens":
        label = EnsLabel(int(params[0]), int(params[1]), float(params[2]))

        return ens_state(label, cutoffs, settings)
    if kind == "tmsv":
        xi = float(params[0])
        cutoff_a, cutoff_b = cutoffs or suggested_cutoffs(EnsLabel(0, 0, xi), settings)

        return tmsv(xi, cutoff_a, cutoff_b, settings)
    if kind == "product":
        n_a, n_b = int(params[0]), int(params[1])
        cutoff_a, cutoff_b = cutoffs or (n_a + 1, n_b + 1)

        return TwoModeState.fock(
            n_a, n_b, cutoff_a, cutoff_b, settings.truncation_tolerance
        )
    alpha, beta = parse_complex(params[0]), parse_complex(params[1])
    coherent = CoherentLabel(alpha, beta, float(params[2]))

    return displaced_coherent_state(coherent, cutoffs, settings)


def _state_xi(kind: str, params: Sequence[str]) -> Optional[float]:
    if kind in ("ens", "coherent"):
        return float(params[2])
    if kind == "tmsv":
        return float(params[0])

    return None


def criteria(args: argparse.Namespace, settings: Settings) -> Outcome:
    """both separability tests and the partial transpose of one state"""

    state = build_state(args.kind, args.params, args.cutoff, settings)
    xi = args.xi_test if args.xi_test is not None else _state_xi(args.kind, args.params)

    if xi is None:
        raise InvalidArgumentError(f"'{args.kind}' states need --xi-test")
    report = criteria_report(state, xi, args.mean_subtracted, settings)
    report.provenance.update(
        state=" ".join([args.kind, *args.params]),
        truncation_loss=state.truncation_loss,
        duan_violation_threshold=duan_violation_threshold(xi),
    )

    return Outcome(
        Report(
            name="criteria",
            metadata=_metadata(
                args,
                settings,
                cutoffs=str(state.cutoffs),
                truncation_loss=state.truncation_loss,
            ),
            document=report.to_dict(),
        )
    )


def state_dump(args: argparse.Namespace, settings: Settings) -> Outcome:
    """the Fock amplitudes of one state"""

    state = build_state(args.kind, args.params, args.cutoff, settings)

    return Outcome(
        Report(
            name="state-dump",
            metadata=_metadata(
                args,
                settings,
                cutoffs=str(state.cutoffs),
                truncation_loss=state.truncation_loss,
            ),
            document={"state": state.to_dict()},
        )
    )


def verify(args: argparse.Namespace, settings: Settings) -> Outcome:
    """the invariant suite; conjecture findings never fail the run"""

    results = run_suite(args.suite, args.seed, settings)
    counts: Dict[str, int] = {"pass": 0, "fail": 0, "finding": 0}

    for result in results:
        counts[result.status] += 1
    windows = [result.cutoffs for result in results if result.cutoffs is not None]
    widest = Cutoffs(*map(max, zip(*windows))) if windows else None
    sys.stderr.write(
        f"{args.suite} suite: {counts['pass']} passed, {counts['fail']} failed, "
        f"{counts['finding']} findings\n"
    )

    return Outcome(
        Report(
            name="verify",
            metadata=_metadata(
                args,
                settings,
                counts=counts,
                cutoffs=None if widest is None else str(widest),
                truncation_loss=max(
                    (result.truncation_loss for result in results), default=0.0
                ),
            ),
            columns=[
                "check",
                "status",
                "value",
                "tolerance",
                "hard",
                "cutoffs",
                "truncation_loss",
                "detail",
            ],
            rows=[
                (
                    r.name,
                    r.status,
                    r.value,
                    r.tolerance,
                    r.hard,
                    "" if r.cutoffs is None else str(r.cutoffs),
                    r.truncation_loss,
                    r.detail,
                )
                for r in results
            ],
        ),
        EXIT_FAILURE if failed(results) else EXIT_OK,
    )


def parse_options(args: Optional[Sequence[str]] = None) -> argparse.Namespace:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--tolerance",
        type=float,
        default=None,
        help=f"truncation tolerance (default: {DEFAULT_SETTINGS.truncation_tolerance:g})",
    )
    common.add_argument("--format", choices=sorted(FORMATS), default=None)
    common.add_argument("--out", default="-", help="output file (default: stdout)")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("-v", "--verbose", action="count", default=0)
    common.add_argument("-q", "--quiet", action="store_true")

    parser = argparse.ArgumentParser(
        prog="twomode", description="entangled number states of two bosonic modes"
    )
    parser.add_argument("--version", action="version", version=__version__)
    commands = parser.add_subparsers(dest="command", required=True)

    sub = commands.add_parser(
        "distribution", parents=[common], help="squared Schmidt coefficients"
    )
    sub.add_argument("--xi", type=float, default=0.7)
    sub.add_argument("--na", type=int, default=0)
    sub.add_argument("--nb", type=int, nargs="+", default=[0])
    sub.add_argument("--m-max", type=int, default=None, help="last m written out")
    sub.add_argument("--cutoff", type=_cutoffs, default=None)
    sub.add_argument(
        "--fig1",
        "--preset",
        dest="preset",
        action="store_true",
        help="xi=0.7, N_A=120, N_B=0..4 with offset curves",
    )
    sub.set_defaults(handler=distribution, format_default="csv")

    sub = commands.add_parser(
        "entropy-grid", parents=[common], help="entanglement entropy over a grid"
    )
    sub.add_argument("--xi", type=float, nargs="+", default=[0.7])
    sub.add_argument("--n-max", type=int, default=10)
    sub.add_argument("--method", choices=["closed_form", "svd"], default="closed_form")
    sub.add_argument("--workers", type=int, default=None)
    sub.add_argument(
        "--fig2",
        "--preset",
        dest="preset",
        action="store_true",
        help="xi=0.7, n_max=10",
    )
    sub.set_defaults(handler=entropy, format_default="csv")

    for name, handler, text in (
        ("criteria", criteria, "separability criteria of a state"),
        ("state-dump", state_dump, "Fock amplitudes of a state"),
    ):
        sub = commands.add_parser(name, parents=[common], help=text)
        sub.add_argument("kind", choices=sorted(STATE_KINDS))
        sub.add_argument("params", nargs="+")
        sub.add_argument("--cutoff", type=_cutoffs, default=None)
        sub.set_defaults(handler=handler, format_default="json")

        if name == "criteria":
            sub.add_argument("--xi-test", type=float, default=None)
            sub.add_argument("--mean-subtracted", action="store_true")

    sub = commands.add_parser(
        "verify", parents=[common], help="run the invariant suite"
    )
    sub.add_argument("--suite", choices=["fast", "full"], default="fast")
    sub.set_defaults(handler=verify, format_default="csv")

    options = parser.parse_args(args)
    options.format = (
        options.format or format_for_path(options.out) or options.format_default
    )
    del options.format_default

    return options


def configure_logging(verbose: int, quiet: bool) -> None:
    level = logging.WARNING if quiet else logging.DEBUG if verbose else logging.INFO
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter("%(levelname)s %(name)s: %(message)s"))
    package = logging.getLogger("twomode")
    package.handlers[:] = [handler]
    package.setLevel(level)


def main(args: Optional[Sequence[str]] = None) -> int:
    options = parse_options(args)
    configure_logging(options.verbose, options.quiet)

    try:
        settings = DEFAULT_SETTINGS

        if options.tolerance is not None:
            settings = settings_from_options(truncation_tolerance=options.tolerance)
        handler: Handler = options.handler
        outcome = handler(options, settings)
        writer = writer_from_string(options.format, wrap_exceptions=True)
        writer.write(outcome.report, sys.stdout if options.out == "-" else options.out)
    except (ConfigurationError, ValueError) as exc:
        logger.error("%s", exc)

        return EXIT_USAGE
    except (TruncationError, PrecisionError, ResourceError, ReportError) as exc:
        logger.error("%s", exc)

        return EXIT_NUMERIC

    return outcome.status


if __name__ == "__main__":
    sys.exit(main())
