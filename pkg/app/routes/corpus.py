import logging
from typing import Optional

from fastapi import APIRouter, Depends, HTTPException, Query, status

from app.corpus import CorpusDataManager, analyze_spec, get_corpus_data_manager, verify_corpus
from app.engine.errors import EngineError
from app.models.group_spec import GroupSpec
from app.models.pagination import CorpusEntry, PaginatedResponse, paginate
from app.models.report import AnalysisReport, VerificationSummary
from app.routes.common import http_error

logger = logging.getLogger(__name__)

router = APIRouter(
    prefix="/corpus",
    tags=["corpus"],
    responses={404: {"description": "Not found"}},
)


def _get_spec_or_404(name: str, data_manager: CorpusDataManager) -> GroupSpec:
    spec = data_manager.get_spec(name)
    if spec is None:
        raise HTTPException(
            status_code=status.HTTP_404_NOT_FOUND,
            detail=f"Corpus group '{name}' not found",
        )
    return spec


@router.get("/", response_model=PaginatedResponse[CorpusEntry])
async def list_corpus(
    kind: Optional[str] = Query(None, description="Filter by spec kind (perm, matrix, product, family)"),
    characteristic: Optional[int] = Query(None, description="Filter by declared characteristic"),
    limit: int = Query(10, ge=1, le=100),
    offset: int = Query(0, ge=0),
    data_manager: CorpusDataManager = Depends(get_corpus_data_manager),
):
    specs = data_manager.get_all_specs()
    entries = [
        CorpusEntry(
            name=s.name,
            kind=s.kind,
            description=s.description,
            characteristic=s.characteristic,
            pinned=s.expected is not None,
        )
        for s in specs
        if (kind is None or s.kind == kind)
        and (characteristic is None or s.characteristic == characteristic)
    ]
    return paginate(entries, limit, offset, len(specs), {"kind": kind, "characteristic": characteristic})


@router.get("/verify", response_model=VerificationSummary)
def verify_all(
    jobs: int = Query(1, ge=1, le=32),
    data_manager: CorpusDataManager = Depends(get_corpus_data_manager),
):
    logger.info(f"Verifying corpus at {data_manager.corpus_dir} with {jobs} jobs")
    summary = verify_corpus(data_manager.get_all_specs(), jobs)
    summary.errors.update({f"file {k}": v for k, v in data_manager.load_errors.items()})
    return summary


@router.get("/{name}", response_model=GroupSpec, response_model_exclude_none=True)
async def get_corpus_spec(name: str, data_manager: CorpusDataManager = Depends(get_corpus_data_manager)):
    return _get_spec_or_404(name, data_manager)


@router.get("/{name}/report", response_model=AnalysisReport)
def get_corpus_report(
    name: str,
    direct: Optional[bool] = Query(None),
    data_manager: CorpusDataManager = Depends(get_corpus_data_manager),
):
    spec = _get_spec_or_404(name, data_manager)
    try:
        return analyze_spec(spec, direct=direct)
    except (EngineError, ValueError) as e:
        raise http_error(e)
