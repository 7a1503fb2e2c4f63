"""Report schemas: the JSON surface of analyze, survey and diagram export."""

from typing import Dict, List, Literal, Optional

from pydantic import Field, field_validator

from shared.core.config import SETTINGS
from .common import SCHEMA_VERSION, BaseSchema


class AnalysisOptions(BaseSchema):
    """Knobs of an analysis; defaults come from SETTINGS."""

    levels: int = Field(default_factory=lambda: SETTINGS.DEFAULT_LEVELS, ge=1, le=64, description="Height levels")
    depth: int = Field(default_factory=lambda: SETTINGS.DEFAULT_DEPTH, ge=1, le=32, description="Diagram depth")
    mod_max: int = Field(
        default_factory=lambda: SETTINGS.DYADIC_SCAN_MAX_M, ge=1, le=64, description="Largest m in d = 2^m scans"
    )
    n_convention: Literal["geq", "strict"] = Field(
        default_factory=lambda: SETTINGS.N_CONVENTION, description="Exponent convention"
    )
    seed: Literal["ones", "telescoped"] = Field(
        default_factory=lambda: SETTINGS.EIGEN_SEED, description="Seed of divisibility tests"
    )
    prefix_length: int = Field(
        default_factory=lambda: SETTINGS.FIXED_POINT_PREFIX, ge=1, description="Fixed point letters reported"
    )
    coding_length: int = Field(
        default_factory=lambda: SETTINGS.CODING_CHECK_LENGTH, ge=1, description="Coding check length"
    )
    include_timings: bool = Field(
        default_factory=lambda: SETTINGS.REPORT_INCLUDE_TIMINGS, description="Add wall-clock timings"
    )


class AnalysisRequest(AnalysisOptions):
    """Schema for an analysis request."""

    q: int = Field(..., ge=1, description="Number of big intervals")
    perm: str = Field(..., min_length=1, description="Permutation, cycle notation or image list")

    @field_validator("perm")
    @classmethod
    def validate_perm(cls, v: str) -> str:
        if not v.strip():
            raise ValueError("Permutation cannot be empty")
        return v


class InputSection(BaseSchema):
    q: int
    perm: str
    images: List[int]
    n_exp: int
    n_convention: str
    seed: str
    degenerate: bool = Field(..., description="q = 1, the plain binary odometer")
    power_of_two: bool = Field(..., description="q = 2^n, outside the detailed theory")


class LevelSchema(BaseSchema):
    level: int
    source_perm: str
    perm: str
    perm_images: List[int]
    chi: List[str]
    matrix: List[List[int]]
    return_times: List[int]
    total_length: int
    cell_count: int
    covering: bool
    unvisited_cells: int


class RenormalizationSection(BaseSchema):
    preperiod_k0: int
    period_p0: int
    stationary: bool
    levels: List[LevelSchema]
    periodic_region: Literal["empty", "finite", "infinite"]
    lebesgue_ergodic: bool


class TelescopedSection(BaseSchema):
    B: List[List[int]]
    w: List[int]


class PerronSchema(BaseSchema):
    char_poly: List[int] = Field(..., description="Integer coefficients, highest degree first")
    radius: str = Field(..., description="Decimal spectral radius")
    radius_exact: str
    minimal_polynomial: str
    error_bound: float
    power_iteration_residual: float
    char_poly_residual: float = Field(..., description="|p(radius)| relative to its terms")


class FrobeniusSchema(BaseSchema):
    order: List[int]
    blocks: List[List[int]]
    block_view: List[List[int]]


class SpectrumSection(BaseSchema):
    full: PerronSchema
    minimal: PerronSchema
    minimal_alphabet: List[int]
    primitive: bool
    frobenius: FrobeniusSchema


class MeasureSchema(BaseSchema):
    status: Literal["candidate", "rejected"]
    block: List[int]
    value: float
    value_exact: str
    left_eigenvector: List[float]
    block_view_eigenvector: List[float]
    support: List[int]
    residual: float
    reason: Optional[str] = None


class DivisibilitySchema(BaseSchema):
    divisor: int
    verdict: bool
    transient_length: int
    cycle_length: int
    residues: Dict[str, List[int]]
    witness: Optional[List[int]] = None


class DyadicScanSchema(BaseSchema):
    alphabet: Literal["minimal", "full"]
    seed: Literal["ones", "telescoped"]
    letters: List[int]
    max_m: int
    summary: Literal["all-tested-pass", "fails-at-m"]
    failed_m: Optional[int] = None
    verdicts: List[DivisibilitySchema]


class HeightSchema(BaseSchema):
    level: int
    h: List[int]


class DiagramLevelSchema(BaseSchema):
    level: int
    vertices: List[int]
    incoming_edges: int = Field(..., description="Edges from the level above, the root for level 1")


class DiagramSection(BaseSchema):
    depth: int
    restricted: bool = Field(..., description="Only vertices carrying aperiodic points")
    levels: List[DiagramLevelSchema]
    path_counts: Dict[str, int] = Field(..., description="Root paths into each vertex of the last level")
    total_paths: int


class AnalysisReport(BaseSchema):
    """Full analysis of one rotated odometer."""

    schema_version: str = SCHEMA_VERSION
    input: InputSection
    renormalization: RenormalizationSection
    telescoped: TelescopedSection
    spectrum: SpectrumSection
    measures: List[MeasureSchema]
    measure_count: int
    dyadic_scans: List[DyadicScanSchema]
    heights: List[HeightSchema]
    diagram: DiagramSection
    aperiodic_diagram: DiagramSection
    fixed_point_prefix: str
    coding_check: bool
    timings: Optional[Dict[str, float]] = None


class SurveyRow(BaseSchema):
    perm: str
    images: List[int]
    periodic_region: Literal["empty", "finite", "infinite"]
    lebesgue_ergodic: bool
    measure_count: int
    dyadic: Literal["all-tested-pass", "fails-at-m"]
    failed_m: Optional[int] = None
    preperiod_k0: int
    period_p0: int


class SurveyReport(BaseSchema):
    schema_version: str = SCHEMA_VERSION
    q: int
    n_convention: str
    max_m: int
    seed: Literal["ones", "telescoped"]
    degenerate: bool
    power_of_two: bool
    rows: List[SurveyRow]


class DiagramRequest(BaseSchema):
    q: int = Field(..., ge=1)
    perm: str = Field(..., min_length=1)
    depth: int = Field(default_factory=lambda: SETTINGS.DEFAULT_DEPTH, ge=1, le=12)
    restricted: bool = Field(default=False, description="Keep only vertices carrying aperiodic points")
    n_convention: Literal["geq", "strict"] = Field(default_factory=lambda: SETTINGS.N_CONVENTION)


class DiagramResponse(BaseSchema):
    dot: str
    vertices: int
    edges: int


class OrbitReport(BaseSchema):
    """Orbit points of F_pi and the itinerary they spell."""

    schema_version: str = SCHEMA_VERSION
    q: int
    perm: str
    points: List[str] = Field(..., description="Points as num/(q*2^k)")
    fractions: List[str]
    letters: List[int] = Field(..., description="Big interval of each point")
    itinerary: str


class SubstitutionLevelSchema(BaseSchema):
    level: int
    source_perm: str
    perm: str
    chi: List[str]
    matrix: List[List[int]]


class SubstitutionReport(BaseSchema):
    schema_version: str = SCHEMA_VERSION
    q: int
    perm: str
    preperiod_k0: int
    period_p0: int
    levels: List[SubstitutionLevelSchema]


class ConeSingularitySchema(BaseSchema):
    multiplicity: int
    removable: bool


class SingularityCensusSchema(BaseSchema):
    wild_singularities: int
    cone_angle_singularities: List[ConeSingularitySchema]
    planar_ends: int
    non_planar_ends: int


class SurfaceReport(BaseSchema):
    """Permutations induced by the slope q/p flow."""

    schema_version: str = SCHEMA_VERSION
    q: int
    p: int
    slope_permutation: str
    vertical_permutation: str
    census: Optional[SingularityCensusSchema] = None
