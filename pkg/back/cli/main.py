"""rotodo command line.

    rotodo analyze --q 5 --perm "(02431)" --format json
    rotodo survey --q 5 --format csv
    rotodo diagram --q 3 --perm "(012)" --depth 2 --format dot

Reports go to stdout and logs to stderr. Exit codes: 0 on success, 2 for
parse or precondition errors, 3 when the cell map exceeds its capacity.
"""

import argparse
import logging
import sys
from typing import Callable, Dict, List, Optional

from api.controllers import analysis_controller
from api.schemas.report import AnalysisOptions, DiagramRequest
from api.services import diagram_service
from shared.core.config import SETTINGS
from shared.core.errors import CapacityError, RotodoError
from shared.core.logging_config import setup_logging

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_CAPACITY = 3


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rotodo", description="Analyze rotated odometers")
    commands = parser.add_subparsers(dest="command", required=True)

    def command(name: str, help_text: str, formats: List[str], needs_perm: bool = True) -> argparse.ArgumentParser:
        sub = commands.add_parser(name, help=help_text)
        sub.add_argument("--q", type=int, required=True, help="number of big intervals")
        if needs_perm:
            sub.add_argument("--perm", required=True, help='permutation, e.g. "(02431)" or "0 2 4 1 3"')
        sub.add_argument("--n-convention", choices=["geq", "strict"], default=SETTINGS.N_CONVENTION)
        sub.add_argument("--format", choices=formats, default=formats[0])
        return sub

    analyze = command("analyze", "full report", ["text", "json"])
    analyze.add_argument("--levels", type=int, default=SETTINGS.DEFAULT_LEVELS, help="height levels")
    analyze.add_argument("--depth", type=int, default=SETTINGS.DEFAULT_DEPTH, help="diagram depth")
    analyze.add_argument("--mod-max", type=int, default=SETTINGS.DYADIC_SCAN_MAX_M, help="largest m in d = 2^m")
    analyze.add_argument("--seed", choices=["ones", "telescoped"], default=SETTINGS.EIGEN_SEED)
    analyze.add_argument("--timings", action="store_true", default=SETTINGS.REPORT_INCLUDE_TIMINGS)

    orbit = command("orbit", "orbit points and itinerary", ["text", "json"])
    orbit.add_argument("--x", default="0", help='start point, "num/(q*2^k)" or "a/b"')
    orbit.add_argument("--steps", type=int, default=16)

    substitution = command("substitution", "renormalization substitutions", ["text", "json"])
    substitution.add_argument("--levels", type=int, default=None, help="levels to print (default: through the period)")

    diagram = command("diagram", "ordered Bratteli diagram", ["dot", "text"])
    diagram.add_argument("--depth", type=int, default=SETTINGS.DEFAULT_DEPTH)
    diagram.add_argument("--restricted", action="store_true", help="keep only vertices of aperiodic points")

    spectrum = command("spectrum", "Frobenius form, Perron data, measures, dyadic scan", ["text", "json"])
    spectrum.add_argument("--mod-max", type=int, default=SETTINGS.DYADIC_SCAN_MAX_M)
    spectrum.add_argument("--seed", choices=["ones", "telescoped"], default=SETTINGS.EIGEN_SEED)

    surface = command("surface", "permutations of rational-slope flows", ["text", "json"])
    surface.add_argument("--p", type=int, required=True, help="denominator of the slope q/p")

    survey = command("survey", "every permutation of q symbols", ["csv", "json", "text"], needs_perm=False)
    survey.add_argument("--mod-max", type=int, default=SETTINGS.DYADIC_SCAN_MAX_M)
    survey.add_argument("--seed", choices=["ones", "telescoped"], default=SETTINGS.EIGEN_SEED)

    return parser


def run_analyze(args: argparse.Namespace) -> str:
    options = AnalysisOptions(
        levels=args.levels,
        depth=args.depth,
        mod_max=args.mod_max,
        n_convention=args.n_convention,
        seed=args.seed,
        include_timings=args.timings,
    )
    report = analysis_controller.analyze(args.q, args.perm, options)
    if args.format == "json":
        return analysis_controller.to_json(report)
    return analysis_controller.render_text(report)


def run_orbit(args: argparse.Namespace) -> str:
    report = analysis_controller.orbit_report(args.q, args.perm, args.x, args.steps, args.n_convention)
    if args.format == "json":
        return analysis_controller.to_json(report)
    lines = [
        f"{step:>5}  {fraction:>12}  {letter}"
        for step, (fraction, letter) in enumerate(zip(report.fractions, report.letters))
    ]
    lines.append(f"itinerary: {report.itinerary}")
    return "\n".join(lines) + "\n"


def run_substitution(args: argparse.Namespace) -> str:
    report = analysis_controller.substitution_report(args.q, args.perm, args.levels, args.n_convention)
    if args.format == "json":
        return analysis_controller.to_json(report)
    lines = [f"k0={report.preperiod_k0} p0={report.period_p0}"]
    for level in report.levels:
        lines.append(f"chi_{level.level}: {level.source_perm} -> {level.perm}")
        lines.extend(f"  {letter} -> {word}" for letter, word in enumerate(level.chi))
    return "\n".join(lines) + "\n"


def run_diagram(args: argparse.Namespace) -> str:
    request = DiagramRequest(
        q=args.q, perm=args.perm, depth=args.depth, restricted=args.restricted, n_convention=args.n_convention
    )
    diagram = analysis_controller.build_diagram_for(request)
    if args.format == "dot":
        return diagram_service.export_dot(diagram)
    lines = []
    for level in range(1, diagram.depth + 1):
        lines.append(f"V_{level} = {list(diagram.vertices(level))}")
    counts = diagram_service.path_counts(diagram)
    lines.append(f"paths into level {diagram.depth}: {counts}")
    return "\n".join(lines) + "\n"


def run_spectrum(args: argparse.Namespace) -> str:
    options = AnalysisOptions(mod_max=args.mod_max, n_convention=args.n_convention, seed=args.seed)
    report = analysis_controller.analyze(args.q, args.perm, options)
    if args.format == "json":
        keep = {"schema_version", "telescoped", "spectrum", "measures", "measure_count", "dyadic_scans"}
        return report.model_dump_json(indent=2, include=keep, exclude_none=True) + "\n"
    return analysis_controller.render_spectrum_text(report)


def run_surface(args: argparse.Namespace) -> str:
    report = analysis_controller.surface_report(args.q, args.perm, args.p)
    if args.format == "json":
        return analysis_controller.to_json(report)
    lines = [
        f"slope {report.q}/{report.p}",
        f"slope permutation:    {report.slope_permutation}",
        f"vertical permutation: {report.vertical_permutation}",
    ]
    if report.census is not None:
        lines.append(f"census: {report.census.model_dump()}")
    return "\n".join(lines) + "\n"


def run_survey(args: argparse.Namespace) -> str:
    options = AnalysisOptions(mod_max=args.mod_max, n_convention=args.n_convention, seed=args.seed)
    report = analysis_controller.survey(args.q, options)
    if args.format == "json":
        return analysis_controller.to_json(report)
    if args.format == "text":
        return analysis_controller.survey_text(report)
    return analysis_controller.survey_csv(report)


COMMANDS: Dict[str, Callable[[argparse.Namespace], str]] = {
    "analyze": run_analyze,
    "orbit": run_orbit,
    "substitution": run_substitution,
    "diagram": run_diagram,
    "spectrum": run_spectrum,
    "surface": run_surface,
    "survey": run_survey,
}


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    setup_logging(sys.stderr)
    logger.debug(f"Running {args.command} with {vars(args)}")
    try:
        output = COMMANDS[args.command](args)
    except CapacityError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_CAPACITY
    except (RotodoError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    sys.stdout.write(output)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
