"""Analysis view layer: the report endpoints."""

import logging
from typing import Optional

from fastapi import APIRouter, HTTPException, status

from shared.core.errors import CapacityError
from ..controllers import analysis_controller
from ..schemas.common import ErrorResponse
from ..schemas.report import (
    AnalysisOptions,
    AnalysisReport,
    AnalysisRequest,
    DiagramRequest,
    DiagramResponse,
    SurveyReport,
)

logger = logging.getLogger(__name__)

router = APIRouter(prefix="/analysis", tags=["analysis"])

_ERRORS = {
    400: {"model": ErrorResponse, "description": "Malformed permutation or violated precondition"},
    413: {"model": ErrorResponse, "description": "Cell map exceeds the capacity bound"},
}


def _http_error(error: Exception) -> HTTPException:
    if isinstance(error, CapacityError):
        return HTTPException(status_code=status.HTTP_413_REQUEST_ENTITY_TOO_LARGE, detail=str(error))
    return HTTPException(status_code=status.HTTP_400_BAD_REQUEST, detail=str(error))


# Plain def: the work is CPU bound and runs in the threadpool.
@router.post(
    "",
    response_model=AnalysisReport,
    response_model_exclude_none=True,
    summary="Analyze a rotated odometer",
    responses=_ERRORS,
)
def analyze(request: AnalysisRequest) -> AnalysisReport:
    """Renormalization, spectra, measures and dyadic scans of (q, pi)."""
    options = AnalysisOptions.model_validate(request.model_dump(exclude={"q", "perm"}))
    try:
        return analysis_controller.analyze(request.q, request.perm, options)
    except (ValueError, CapacityError) as e:
        raise _http_error(e)


@router.get(
    "/survey/{q}",
    response_model=SurveyReport,
    response_model_exclude_none=True,
    summary="Survey every permutation of q symbols",
    responses=_ERRORS,
)
def survey(
    q: int,
    mod_max: Optional[int] = None,
    n_convention: Optional[str] = None,
    seed: Optional[str] = None,
) -> SurveyReport:
    """Unset parameters fall back to SETTINGS, as in AnalysisOptions."""
    overrides = {"mod_max": mod_max, "n_convention": n_convention, "seed": seed}
    try:
        options = AnalysisOptions.model_validate({key: value for key, value in overrides.items() if value is not None})
    except ValueError as e:
        raise HTTPException(status_code=status.HTTP_400_BAD_REQUEST, detail=str(e))
    try:
        return analysis_controller.survey(q, options)
    except (ValueError, CapacityError) as e:
        raise _http_error(e)


@router.post(
    "/diagram",
    response_model=DiagramResponse,
    summary="Export the ordered Bratteli diagram as DOT",
    responses=_ERRORS,
)
def diagram(request: DiagramRequest) -> DiagramResponse:
    try:
        return analysis_controller.export_dot(request)
    except (ValueError, CapacityError) as e:
        raise _http_error(e)
