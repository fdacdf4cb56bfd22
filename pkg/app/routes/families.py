from typing import Dict, List

from fastapi import APIRouter, HTTPException, Request, status

from app.engine.errors import EngineError
from app.engine.families import family
from app.models.group_spec import FAMILY_PARAMS, GroupSpec
from app.routes.common import http_error

router = APIRouter(
    prefix="/families",
    tags=["families"],
    responses={404: {"description": "Unknown family"}},
)


@router.get("/", response_model=List[Dict])
async def list_families():
    return [{"name": name, "params": list(params)} for name, params in FAMILY_PARAMS.items()]


@router.get("/{name}", response_model=GroupSpec, response_model_exclude_none=True)
async def get_family_member(name: str, request: Request):
    """Family member as a spec, parameters passed as query integers, e.g. /families/dihedral?order=16"""
    if name not in FAMILY_PARAMS:
        raise HTTPException(
            status_code=status.HTTP_404_NOT_FOUND,
            detail=f"Family '{name}' not found; available: {sorted(FAMILY_PARAMS)}",
        )
    try:
        params = {key: int(value) for key, value in request.query_params.items()}
    except ValueError:
        raise HTTPException(
            status_code=status.HTTP_422_UNPROCESSABLE_ENTITY,
            detail={"message": "family parameters must be integers", "expected": list(FAMILY_PARAMS[name])},
        )
    try:
        return family(name, params)
    except (EngineError, ValueError) as e:
        raise http_error(e)
