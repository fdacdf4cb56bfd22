"""Turn a parsed group spec into a multiplication table."""
from __future__ import annotations

import logging
from typing import Optional

from app.config import get_settings
from app.engine.errors import GroupTooLarge
from app.engine.families import family
from app.engine.group_core import GroupTable, build_group, direct_product, permutation_from_cycles
from app.models.group_spec import GroupSpec

logger = logging.getLogger(__name__)


def resolve_family(spec: GroupSpec, cap: Optional[int] = None) -> GroupSpec:
    """Replace a family reference by its concrete generators, keeping name and pins"""
    if spec.kind != "family":
        return spec
    concrete = family(spec.family, spec.params, cap)
    return concrete.model_copy(update={
        "name": spec.name,
        "characteristic": spec.characteristic,
        "expected": spec.expected,
        "description": spec.description or concrete.description,
    })


def build_from_spec(spec: GroupSpec, cap: Optional[int] = None) -> GroupTable:
    cap = cap or get_settings().element_cap
    spec = resolve_family(spec, cap)
    if spec.kind == "perm":
        gens = [permutation_from_cycles(cycles, spec.degree) for cycles in spec.generators]
        G = build_group(gens, cap=cap)
    elif spec.kind == "matrix":
        G = build_group(spec.matrices(), p=spec.p, cap=cap)
    else:
        G = build_from_spec(spec.factors[0], cap)
        for factor in spec.factors[1:]:
            H = build_from_spec(factor, cap)
            if G.order * H.order > cap:
                raise GroupTooLarge(f"group too large: product order {G.order * H.order} exceeds {cap}")
            G = direct_product(G, H, cap=cap)
    logger.info(f"Spec {spec.name}: built group of order {G.order}")
    return G
