# app/config.py
import os
from functools import lru_cache

from dotenv import load_dotenv
from pydantic import BaseModel, Field

load_dotenv()

DEFAULT_CORPUS_DIR = os.path.join(os.path.dirname(__file__), "data", "corpus")


class Settings(BaseModel):
    element_cap: int = Field(4096, ge=1, description="Largest group materialized as a multiplication table")
    oracle_max_dim: int = Field(256, ge=1, description="Largest |G| for the direct ideal-chain oracle")
    unit_group_cap: int = Field(2 ** 15, ge=1, description="Largest unit group enumerated")
    identity_samples: int = Field(1000, ge=0, description="Random triples per group for the commutator identity")
    corpus_dir: str = Field(DEFAULT_CORPUS_DIR, description="Directory of shipped group specs")
    log_level: str = Field("WARNING")


@lru_cache
def get_settings() -> Settings:
    return Settings(
        element_cap=int(os.getenv("LIE_ELEMENT_CAP", 4096)),
        oracle_max_dim=int(os.getenv("LIE_ORACLE_MAX_DIM", 256)),
        unit_group_cap=int(os.getenv("LIE_UNIT_GROUP_CAP", 2 ** 15)),
        identity_samples=int(os.getenv("LIE_IDENTITY_SAMPLES", 1000)),
        corpus_dir=os.getenv("LIE_CORPUS_DIR", DEFAULT_CORPUS_DIR),
        log_level=os.getenv("LIE_LOG_LEVEL", "WARNING"),
    )
