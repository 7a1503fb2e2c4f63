"""Analysis controller: builds reports from the services and renders them."""

import csv
import io
import itertools
import logging
import time
from contextlib import contextmanager
from typing import Dict, Iterator, List, Optional

from shared.core.config import SETTINGS
from shared.core.errors import PreconditionError
from shared.models.diagram import OrderedDiagram
from shared.models.dyadic import Dyadic
from shared.models.odometer import RotatedOdometer
from shared.models.permutation import Permutation
from shared.models.renormalization import LevelRecord, RenormSeq
from shared.models.spectra import (
    AlphabetChoice,
    DyadicScan,
    FrobeniusForm,
    MeasureCandidate,
    PerronData,
    SeedChoice,
)
from shared.models.substitution import word_text
from ..schemas.common import BaseSchema
from ..schemas.report import (
    AnalysisOptions,
    AnalysisReport,
    DiagramLevelSchema,
    DiagramRequest,
    DiagramResponse,
    DiagramSection,
    DivisibilitySchema,
    DyadicScanSchema,
    FrobeniusSchema,
    HeightSchema,
    InputSection,
    LevelSchema,
    MeasureSchema,
    OrbitReport,
    PerronSchema,
    RenormalizationSection,
    SingularityCensusSchema,
    SpectrumSection,
    SubstitutionLevelSchema,
    SubstitutionReport,
    SurfaceReport,
    SurveyReport,
    SurveyRow,
    TelescopedSection,
)
from ..services import diagram_service, eigenvalue_service, iet_service, spectral_service, surface_service
from ..services.renormalization_service import covering_status, renorm_sequence
from ..services.substitution_service import fixed_point_prefix, heights, minimal_alphabet, telescope

logger = logging.getLogger(__name__)

SURVEY_CSV_HEADER = [
    "perm", "images", "periodic_region", "lebesgue_ergodic",
    "measure_count", "dyadic", "failed_m", "k0", "p0",
]


def build_system(q: int, perm_text: str, n_convention: Optional[str] = None) -> RotatedOdometer:
    """Parse the permutation and attach the exponent N; warns on degenerate q."""
    system = RotatedOdometer.create(q, Permutation.parse(perm_text, q), n_convention)
    if system.degenerate:
        logger.warning(f"q = 1 gives the plain binary odometer: {system}")
    elif system.power_of_two:
        logger.warning(f"q = {q} is a power of 2, outside the detailed theory")
    return system


class _Timer:
    def __init__(self, enabled: bool):
        self.enabled = enabled
        self.timings: Dict[str, float] = {}

    @contextmanager
    def section(self, name: str) -> Iterator[None]:
        start = time.perf_counter()
        yield
        if self.enabled:
            self.timings[name] = round(time.perf_counter() - start, 6)


def _level_schema(record: LevelRecord) -> LevelSchema:
    return LevelSchema(
        level=record.level_k,
        source_perm=record.source_perm.cycle_notation(),
        perm=record.perm.cycle_notation(),
        perm_images=list(record.perm.images),
        chi=[word_text(word) for word in record.chi.words],
        matrix=record.matrix.rows(),
        return_times=list(record.return_times),
        total_length=record.chi.total_length(),
        cell_count=record.cell_count,
        covering=record.covering,
        unvisited_cells=len(record.unvisited_cells),
    )


def _perron_schema(data: PerronData) -> PerronSchema:
    return PerronSchema(
        char_poly=list(data.char_poly),
        radius=f"{data.spectral_radius:.12f}",
        radius_exact=data.radius_exact,
        minimal_polynomial=data.minimal_polynomial,
        error_bound=data.error_bound,
        power_iteration_residual=data.power_iteration_residual,
        char_poly_residual=data.char_poly_residual,
    )


def _frobenius_schema(form: FrobeniusForm) -> FrobeniusSchema:
    return FrobeniusSchema(
        order=list(form.order),
        blocks=[list(block) for block in form.blocks],
        block_view=form.block_view.rows(),
    )


def _measure_schema(candidate: MeasureCandidate) -> MeasureSchema:
    return MeasureSchema(
        status="candidate" if candidate.accepted else "rejected",
        block=list(candidate.block),
        value=round(candidate.value, 12),
        value_exact=candidate.value_exact,
        left_eigenvector=[round(x, 12) for x in candidate.left_eigenvector],
        block_view_eigenvector=[round(x, 12) for x in candidate.block_view_eigenvector],
        support=list(candidate.support),
        residual=round(candidate.residual, 15),
        reason=candidate.reason,
    )


def _scan_schema(scan: DyadicScan, alphabet: AlphabetChoice, seed: SeedChoice, letters: List[int]) -> DyadicScanSchema:
    return DyadicScanSchema(
        alphabet=alphabet.value,
        seed=seed.value,
        letters=letters,
        max_m=scan.max_m,
        summary=scan.summary.value,
        failed_m=scan.failed_m,
        verdicts=[
            DivisibilitySchema(
                divisor=verdict.divisor,
                verdict=verdict.verdict,
                transient_length=verdict.transient_length,
                cycle_length=verdict.cycle_length,
                residues={str(letter): list(values) for letter, values in sorted(verdict.residues.items())},
                witness=list(verdict.witness) if verdict.witness is not None else None,
            )
            for verdict in scan.verdicts
        ],
    )


def _diagram_section(seq: RenormSeq, depth: int, restricted: bool) -> DiagramSection:
    diagram = diagram_service.build_diagram(seq, depth, restricted)
    counts = diagram_service.path_counts(diagram)
    return DiagramSection(
        depth=depth,
        restricted=restricted,
        levels=[
            DiagramLevelSchema(
                level=level,
                vertices=list(diagram.vertices(level)),
                incoming_edges=diagram.edge_count(level - 1),
            )
            for level in range(1, depth + 1)
        ],
        path_counts={str(vertex): count for vertex, count in sorted(counts.items())},
        total_paths=sum(counts.values()),
    )


def _dyadic_scans(seq: RenormSeq, options: AnalysisOptions) -> List[DyadicScanSchema]:
    """Minimal alphabet with the chosen seed; the other seed too when its summary differs."""
    letters = list(minimal_alphabet(seq))
    chosen = SeedChoice(options.seed)
    scans = [(chosen, eigenvalue_service.dyadic_scan(seq, options.mod_max, AlphabetChoice.MINIMAL, chosen))]
    other = SeedChoice.TELESCOPED if chosen is SeedChoice.ONES else SeedChoice.ONES
    alternative = eigenvalue_service.dyadic_scan(seq, options.mod_max, AlphabetChoice.MINIMAL, other)
    if (alternative.summary, alternative.failed_m) != (scans[0][1].summary, scans[0][1].failed_m):
        scans.append((other, alternative))
    return [_scan_schema(scan, AlphabetChoice.MINIMAL, seed, letters) for seed, scan in scans]


def analyze(q: int, perm_text: str, options: Optional[AnalysisOptions] = None) -> AnalysisReport:
    """Run every analysis on (q, pi) and collect the results in one report.

    Raises:
        ParseError: malformed permutation text
        PreconditionError: q < 1 or other violated preconditions
        CapacityError: cell map too large
    """
    options = options or AnalysisOptions()
    timer = _Timer(options.include_timings)
    system = build_system(q, perm_text, options.n_convention)
    logger.info(f"Analyzing {system}")

    with timer.section("renormalization"):
        seq = renorm_sequence(system)
        region = covering_status(seq)
    with timer.section("substitutions"):
        telescoped = telescope(seq)
        level_heights = [heights(seq, n) for n in range(1, options.levels + 1)]
        prefix = fixed_point_prefix(seq, options.prefix_length)
    with timer.section("spectrum"):
        summary = spectral_service.spectral_summary(seq)
        measures = spectral_service.measure_report(seq, telescoped.B)
    with timer.section("eigenvalues"):
        scans = _dyadic_scans(seq, options)
    with timer.section("diagram"):
        full_diagram = _diagram_section(seq, options.depth, False)
        aperiodic_diagram = _diagram_section(seq, options.depth, True)
    with timer.section("coding_check"):
        coded = diagram_service.coding_check(system, options.coding_length, seq)

    report = AnalysisReport(
        input=InputSection(
            q=system.q,
            perm=system.pi.cycle_notation(with_fixed_points=system.pi.is_identity()),
            images=list(system.pi.images),
            n_exp=system.n_exp,
            n_convention=options.n_convention,
            seed=options.seed,
            degenerate=system.degenerate,
            power_of_two=system.power_of_two,
        ),
        renormalization=RenormalizationSection(
            preperiod_k0=seq.preperiod_k0,
            period_p0=seq.period_p0,
            stationary=seq.stationary,
            levels=[_level_schema(record) for record in seq.records],
            periodic_region=region.value,
            lebesgue_ergodic=spectral_service.lebesgue_ergodic(seq),
        ),
        telescoped=TelescopedSection(B=telescoped.B.rows(), w=list(telescoped.w.h)),
        spectrum=SpectrumSection(
            full=_perron_schema(summary.full),
            minimal=_perron_schema(summary.minimal),
            minimal_alphabet=list(summary.minimal_letters),
            primitive=summary.primitive,
            frobenius=_frobenius_schema(summary.frobenius),
        ),
        measures=[_measure_schema(candidate) for candidate in measures.candidates],
        measure_count=measures.count,
        dyadic_scans=scans,
        heights=[HeightSchema(level=vector.level_n, h=list(vector.h)) for vector in level_heights],
        diagram=full_diagram,
        aperiodic_diagram=aperiodic_diagram,
        fixed_point_prefix=word_text(prefix),
        coding_check=coded,
        timings=timer.timings if options.include_timings else None,
    )
    logger.info(
        f"Analysis of {system} done: region={region.value}, "
        f"measures={measures.count}, dyadic={scans[0].summary}"
    )
    return report


def survey_row(system: RotatedOdometer, mod_max: int, seed: Optional[str] = None) -> SurveyRow:
    seq = renorm_sequence(system)
    scan = eigenvalue_service.dyadic_scan(seq, mod_max, AlphabetChoice.MINIMAL, seed)
    return SurveyRow(
        perm=system.pi.cycle_notation(with_fixed_points=system.pi.is_identity()),
        images=list(system.pi.images),
        periodic_region=covering_status(seq).value,
        lebesgue_ergodic=spectral_service.lebesgue_ergodic(seq),
        measure_count=spectral_service.measure_report(seq).count,
        dyadic=scan.summary.value,
        failed_m=scan.failed_m,
        preperiod_k0=seq.preperiod_k0,
        period_p0=seq.period_p0,
    )


def survey(q: int, options: Optional[AnalysisOptions] = None) -> SurveyReport:
    """One row per permutation of q symbols, sorted by image list.

    Raises:
        PreconditionError: q outside 1..SURVEY_MAX_Q
    """
    options = options or AnalysisOptions()
    if not 1 <= q <= SETTINGS.SURVEY_MAX_Q:
        raise PreconditionError(f"Survey needs 1 <= q <= {SETTINGS.SURVEY_MAX_Q}, got {q}")
    base = RotatedOdometer.create(q, None, options.n_convention)
    if base.power_of_two or base.degenerate:
        logger.warning(f"Survey over q = {q}: degenerate or power of 2")

    rows = [
        survey_row(base.with_permutation(Permutation(images)), options.mod_max, options.seed)
        for images in itertools.permutations(range(q))
    ]
    rows.sort(key=lambda row: row.images)
    logger.info(f"Survey of q={q}: {len(rows)} permutations")
    return SurveyReport(
        q=q,
        n_convention=options.n_convention,
        max_m=options.mod_max,
        seed=options.seed,
        degenerate=base.degenerate,
        power_of_two=base.power_of_two,
        rows=rows,
    )


def build_diagram_for(request: DiagramRequest) -> OrderedDiagram:
    system = build_system(request.q, request.perm, request.n_convention)
    return diagram_service.build_diagram(renorm_sequence(system), request.depth, request.restricted)


def export_dot(request: DiagramRequest) -> DiagramResponse:
    diagram = build_diagram_for(request)
    vertices = 1 + sum(len(diagram.vertices(level)) for level in range(1, diagram.depth + 1))
    edges = sum(diagram.edge_count(level) for level in range(diagram.depth))
    return DiagramResponse(dot=diagram_service.export_dot(diagram), vertices=vertices, edges=edges)


def orbit_report(q: int, perm_text: str, start: str, steps: int, n_convention: Optional[str] = None) -> OrbitReport:
    system = build_system(q, perm_text, n_convention)
    points, letters = iet_service.orbit_itinerary(system, Dyadic.parse(start, q), steps)
    return OrbitReport(
        q=system.q,
        perm=system.pi.cycle_notation(),
        points=[str(point) for point in points],
        fractions=[str(point.to_fraction()) for point in points],
        letters=letters,
        itinerary=word_text(letters),
    )


def substitution_report(
    q: int, perm_text: str, levels: Optional[int] = None, n_convention: Optional[str] = None
) -> SubstitutionReport:
    """Records 1..levels, through the first period by default."""
    system = build_system(q, perm_text, n_convention)
    seq = renorm_sequence(system)
    count = levels if levels is not None else len(seq.records)
    if count < 1:
        raise PreconditionError(f"Need at least one level, got {count}")
    records = []
    for level in range(1, count + 1):
        record = seq.record(level)
        records.append(SubstitutionLevelSchema(
            level=level,
            source_perm=record.source_perm.cycle_notation(),
            perm=record.perm.cycle_notation(),
            chi=[word_text(word) for word in record.chi.words],
            matrix=record.matrix.rows(),
        ))
    return SubstitutionReport(
        q=system.q,
        perm=system.pi.cycle_notation(),
        preperiod_k0=seq.preperiod_k0,
        period_p0=seq.period_p0,
        levels=records,
    )


def surface_report(q: int, perm_text: str, p: int) -> SurfaceReport:
    pi = Permutation.parse(perm_text, q)
    census = surface_service.known_singularity_census(q, pi, p)
    return SurfaceReport(
        q=q,
        p=p,
        slope_permutation=surface_service.slope_permutation(q, p).cycle_notation(with_fixed_points=True),
        vertical_permutation=surface_service.vertical_permutation(q, pi, p).cycle_notation(with_fixed_points=True),
        census=SingularityCensusSchema.model_validate(census) if census is not None else None,
    )


def to_json(report: BaseSchema) -> str:
    """Deterministic JSON: fixed field order, no absent optionals."""
    return report.model_dump_json(indent=2, exclude_none=True) + "\n"


def survey_csv(report: SurveyReport) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(SURVEY_CSV_HEADER)
    for row in report.rows:
        writer.writerow([
            row.perm,
            "".join(str(i) for i in row.images) if report.q <= 10 else " ".join(str(i) for i in row.images),
            row.periodic_region,
            str(row.lebesgue_ergodic).lower(),
            row.measure_count,
            row.dyadic,
            row.failed_m if row.failed_m is not None else "",
            row.preperiod_k0,
            row.period_p0,
        ])
    return buffer.getvalue()


def survey_text(report: SurveyReport) -> str:
    lines = [f"Survey q={report.q} (N convention {report.n_convention}, {report.seed} seed, m <= {report.max_m})"]
    if report.degenerate or report.power_of_two:
        lines.append("  note: q is 1 or a power of 2")
    for row in report.rows:
        dyadic = row.dyadic if row.failed_m is None else f"{row.dyadic} {row.failed_m}"
        lines.append(
            f"  {row.perm:<16} {row.periodic_region:<9} ergodic={str(row.lebesgue_ergodic).lower():<5} "
            f"measures={row.measure_count} dyadic={dyadic} k0={row.preperiod_k0} p0={row.period_p0}"
        )
    return "\n".join(lines) + "\n"


def _matrix_lines(rows: List[List[int]], indent: str = "    ") -> List[str]:
    width = max((len(str(x)) for row in rows for x in row), default=1)
    return [indent + " ".join(str(x).rjust(width) for x in row) for row in rows]


def _poly_text(coefficients: List[int]) -> str:
    degree = len(coefficients) - 1
    terms = []
    for power, c in zip(range(degree, -1, -1), coefficients):
        if c == 0:
            continue
        magnitude = abs(c)
        body = "" if magnitude == 1 and power > 0 else str(magnitude)
        if power > 1:
            body += f"x^{power}"
        elif power == 1:
            body += "x"
        if not terms:
            terms.append(f"-{body}" if c < 0 else body)
        else:
            terms.append(f"{'-' if c < 0 else '+'} {body}")
    return " ".join(terms) or "0"


def _spectrum_lines(report: AnalysisReport) -> List[str]:
    spectrum = report.spectrum
    lines = ["Telescoped B:"]
    lines.extend(_matrix_lines(report.telescoped.B))
    lines.append(f"  w = {tuple(report.telescoped.w)}")
    lines.append(f"Characteristic polynomial: {_poly_text(spectrum.full.char_poly)}")
    lines.append(f"Spectral radius: {spectrum.full.radius_exact} ~ {spectrum.full.radius}")
    lines.append(f"Minimal alphabet: {spectrum.minimal_alphabet}  radius {spectrum.minimal.radius_exact}")
    lines.append(f"Primitive: {str(spectrum.primitive).lower()}  blocks: {spectrum.frobenius.blocks}")
    lines.append("Block view:")
    lines.extend(_matrix_lines(spectrum.frobenius.block_view))
    lines.append(f"Measures: {report.measure_count}")
    for measure in report.measures:
        if measure.status == "candidate":
            vector = ", ".join(f"{x:g}" for x in measure.left_eigenvector)
            lines.append(f"  block {measure.block}: lambda={measure.value_exact} v=({vector})")
        else:
            lines.append(f"  block {measure.block}: rejected ({measure.reason})")
    for scan in report.dyadic_scans:
        outcome = scan.summary if scan.failed_m is None else f"{scan.summary} {scan.failed_m}"
        lines.append(f"Dyadic scan ({scan.alphabet}, {scan.seed} seed, m <= {scan.max_m}): {outcome}")
    return lines


def render_spectrum_text(report: AnalysisReport) -> str:
    return "\n".join(_spectrum_lines(report)) + "\n"


def render_text(report: AnalysisReport) -> str:
    """Human-readable rendering laid out like the worked tables."""
    data = report.input
    renorm = report.renormalization
    lines = [f"Rotated odometer q={data.q} pi={data.perm} N={data.n_exp} ({data.n_convention})"]
    if data.degenerate:
        lines.append("  degenerate: q = 1, plain binary odometer")
    if data.power_of_two:
        lines.append("  q is a power of 2")
    lines.append(f"Renormalization: k0={renorm.preperiod_k0} p0={renorm.period_p0}")
    for level in renorm.levels:
        lines.append(
            f"  level {level.level}: {level.source_perm} -> {level.perm}  "
            f"sum|chi|={level.total_length}/{level.cell_count} covering={str(level.covering).lower()}"
        )
        lines.extend(f"    {i} -> {word}" for i, word in enumerate(level.chi))
    lines.append(f"Periodic region: {renorm.periodic_region}")
    lines.append(f"Lebesgue ergodic: {str(renorm.lebesgue_ergodic).lower()}")
    lines.extend(_spectrum_lines(report))
    lines.append("Heights:")
    lines.extend(f"  h^({vector.level}) = {tuple(vector.h)}" for vector in report.heights)
    for section in (report.diagram, report.aperiodic_diagram):
        name = "Aperiodic subdiagram" if section.restricted else "Diagram"
        last = section.levels[-1]
        lines.append(
            f"{name} depth {section.depth}: V_{last.level} = {last.vertices}, "
            f"paths {section.path_counts} (total {section.total_paths})"
        )
    lines.append(f"Fixed point: {report.fixed_point_prefix}")
    lines.append(f"Coding check: {'ok' if report.coding_check else 'FAILED'}")
    if report.timings:
        lines.append("Timings: " + ", ".join(f"{k}={v:.3f}s" for k, v in report.timings.items()))
    return "\n".join(lines) + "\n"
