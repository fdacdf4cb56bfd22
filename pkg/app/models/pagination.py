from typing import Any, Dict, Generic, List, Optional, TypeVar

from pydantic import BaseModel, ConfigDict, Field

T = TypeVar('T')


class PaginationMetadata(BaseModel):
    """Metadata for paginated responses"""
    total_count: int = Field(..., description="Total number of corpus entries")
    filtered_count: int = Field(..., description="Number of entries after applying filters")
    limit: int = Field(..., description="Maximum number of entries returned per page")
    offset: int = Field(..., description="Number of entries skipped")
    has_more: bool = Field(..., description="Whether there are more entries after this page")
    current_page: int
    total_pages: int
    filters_applied: Dict[str, Any] = Field(default_factory=dict)

    model_config = ConfigDict(json_schema_extra={
        "example": {
            "total_count": 31,
            "filtered_count": 4,
            "limit": 10,
            "offset": 0,
            "has_more": False,
            "current_page": 1,
            "total_pages": 1,
            "filters_applied": {"kind": "matrix"},
        }
    })


class PaginatedResponse(BaseModel, Generic[T]):
    """Generic paginated response wrapper with metadata"""
    items: List[T]
    metadata: PaginationMetadata


class CorpusEntry(BaseModel):
    name: str
    kind: str
    description: Optional[str] = None
    characteristic: Optional[int] = None
    pinned: bool = Field(False, description="Whether the spec carries expected values")


def paginate(items: List[T], limit: int, offset: int, total_count: int, filters: Dict[str, Any]) -> Dict[str, Any]:
    page = items[offset:offset + limit]
    return {
        "items": page,
        "metadata": PaginationMetadata(
            total_count=total_count,
            filtered_count=len(items),
            limit=limit,
            offset=offset,
            has_more=offset + limit < len(items),
            current_page=offset // limit + 1,
            total_pages=max(1, -(-len(items) // limit)),
            filters_applied={k: v for k, v in filters.items() if v is not None},
        ),
    }
