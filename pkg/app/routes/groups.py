import logging
from typing import Optional

from fastapi import APIRouter, Query

from app.engine.builder import build_from_spec
from app.engine.classifier import describe_structure, verify_iff
from app.engine.errors import EngineError
from app.models.group_spec import GroupSpec
from app.models.report import AnalysisReport, StructureSummary
from app.routes.common import http_error

logger = logging.getLogger(__name__)

router = APIRouter(
    prefix="/groups",
    tags=["groups"],
    responses={
        400: {"description": "Invalid group"},
        409: {"description": "Group algebra is not Lie nilpotent"},
        413: {"description": "Size cap exceeded"},
    },
)


@router.post("/analyze", response_model=AnalysisReport)
def analyze_group(
    spec: GroupSpec,
    direct: Optional[bool] = Query(None, description="Force (true) or skip (false) the direct ideal-chain oracle"),
    max_dim: Optional[int] = Query(None, ge=1, description="Override the direct-oracle cap on |G|"),
    units: Optional[bool] = Query(None, description="Force (true) or skip (false) the unit group class"),
):
    """
    Analyze one group: gate, dimension subgroups, Lie nilpotency indices,
    theorem conditions and the verdict of every two-way check.

    A group that fails the Lie nilpotency gate is not an error; the report
    carries verdict "not applicable".
    """
    logger.info(f"Analyze request for {spec.name} ({spec.kind})")
    try:
        G = build_from_spec(spec)
        return verify_iff(G, spec.name, spec.characteristic, direct=direct, max_dim=max_dim, units=units)
    except (EngineError, ValueError) as e:
        raise http_error(e)


@router.post("/structure", response_model=StructureSummary)
def group_structure(spec: GroupSpec):
    try:
        return describe_structure(build_from_spec(spec))
    except (EngineError, ValueError) as e:
        raise http_error(e)
