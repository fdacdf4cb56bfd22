"""Built-in group families, emitted as ordinary group specs."""
from __future__ import annotations

import logging
from typing import Callable, Dict, List, Optional, Sequence

from app.config import get_settings
from app.engine.errors import GroupTooLarge
from app.engine.group_core import exact_log, is_prime
from app.models.group_spec import FAMILY_PARAMS, GroupSpec

logger = logging.getLogger(__name__)


def images_to_cycles(images: Sequence[int]) -> List[List[int]]:
    """0-based image list -> cycles of 1-based points, fixed points dropped"""
    seen = set()
    cycles = []
    for start in range(len(images)):
        if start in seen or images[start] == start:
            continue
        cycle = []
        x = start
        while x not in seen:
            seen.add(x)
            cycle.append(x + 1)
            x = images[x]
        cycles.append(cycle)
    return cycles


def _require(condition: bool, message: str):
    if not condition:
        raise ValueError(message)


def _perm_spec(name: str, family: str, params: Dict[str, int], degree: int, gens: List[Sequence[int]]) -> GroupSpec:
    return GroupSpec(
        name=name,
        kind="perm",
        description=f"{family} {params}",
        degree=degree,
        generators=[images_to_cycles(g) for g in gens],
    )


def _metacyclic(order: int, r: int, square: int) -> List[List[int]]:
    """Right regular representation of <x, y | x^m, y^2 = x^square, y^-1 x y = x^r>.

    Element x^i y^j sits at index i + m*j.
    """
    m = order // 2

    def times(i: int, j: int, k: int, l: int):
        i2 = (i + k * (r if j else 1)) % m
        if j + l == 2:
            return (i2 + square) % m, 0
        return i2, j + l

    gens = []
    for k, l in ((1, 0), (0, 1)):
        images = [0] * order
        for j in range(2):
            for i in range(m):
                a, b = times(i, j, k, l)
                images[i + m * j] = a + m * b
        gens.append(images)
    return gens


def cyclic(order: int) -> GroupSpec:
    _require(order >= 1, "cyclic order must be positive")
    return _perm_spec(f"C{order}", "cyclic", {"order": order}, order, [[(i + 1) % order for i in range(order)]])


def elementary(p: int, rank: int) -> GroupSpec:
    _require(is_prime(p) and rank >= 1, "elementary needs a prime p and rank >= 1")
    gens = []
    for b in range(rank):
        images = list(range(p * rank))
        for i in range(p):
            images[b * p + i] = b * p + (i + 1) % p
        gens.append(images)
    return _perm_spec(f"C{p}^{rank}", "elementary", {"p": p, "rank": rank}, p * rank, gens)


def dihedral(order: int) -> GroupSpec:
    _require(order >= 6 and order % 2 == 0, "dihedral order must be even and at least 6")
    m = order // 2
    rotation = [(i + 1) % m for i in range(m)]
    reflection = [(m - i) % m for i in range(m)]
    return _perm_spec(f"D{order}", "dihedral", {"order": order}, m, [rotation, reflection])


def _two_power(order: int, least: int, family: str):
    _require(exact_log(order, 2) is not None and order >= least, f"{family} order must be a power of 2, at least {least}")


def quaternion(order: int) -> GroupSpec:
    _two_power(order, 8, "quaternion")
    m = order // 2
    return _perm_spec(f"Q{order}", "quaternion", {"order": order}, order, _metacyclic(order, m - 1, m // 2))


def semidihedral(order: int) -> GroupSpec:
    _two_power(order, 16, "semidihedral")
    m = order // 2
    return _perm_spec(f"SD{order}", "semidihedral", {"order": order}, order, _metacyclic(order, m // 2 - 1, 0))


def modular_maximal_cyclic(order: int) -> GroupSpec:
    _two_power(order, 16, "modular_maximal_cyclic")
    m = order // 2
    return _perm_spec(f"M{order}", "modular_maximal_cyclic", {"order": order}, order, _metacyclic(order, m // 2 + 1, 0))


def elementary_matrix(n: int, i: int, j: int, scale: int = 1) -> List[List[int]]:
    """I + scale * E_ij, 1-based indices"""
    rows = [[int(a == b) for b in range(n)] for a in range(n)]
    rows[i - 1][j - 1] += scale
    return rows


def unitriangular(n: int, p: int) -> GroupSpec:
    _require(is_prime(p) and n >= 2, "unitriangular needs n >= 2 and a prime p")
    return GroupSpec(
        name=f"UT{n}({p})",
        kind="matrix",
        description=f"unitriangular {{'n': {n}, 'p': {p}}}",
        dim=n,
        p=p,
        generators=[elementary_matrix(n, i, i + 1) for i in range(1, n)],
    )


def heisenberg(p: int) -> GroupSpec:
    spec = unitriangular(3, p)
    return spec.model_copy(update={"name": f"Heis({p})", "description": f"heisenberg {{'p': {p}}}"})


def wreath_cyclic(p: int) -> GroupSpec:
    """C_p wr C_p on p^2 points: one block cycle plus the block shift"""
    _require(is_prime(p), "wreath_cyclic needs a prime p")
    degree = p * p
    base = list(range(degree))
    for i in range(p):
        base[i] = (i + 1) % p
    shift = [((b + 1) % p) * p + i for b in range(p) for i in range(p)]
    return _perm_spec(f"C{p}wrC{p}", "wreath_cyclic", {"p": p}, degree, [base, shift])


FAMILIES: Dict[str, Callable[..., GroupSpec]] = {
    "cyclic": cyclic,
    "elementary": elementary,
    "dihedral": dihedral,
    "quaternion": quaternion,
    "semidihedral": semidihedral,
    "modular_maximal_cyclic": modular_maximal_cyclic,
    "unitriangular": unitriangular,
    "wreath_cyclic": wreath_cyclic,
    "heisenberg": heisenberg,
}


def family_order(name: str, params: Dict[str, int]) -> int:
    if name in ("unitriangular", "heisenberg"):
        n = params.get("n", 3)
        return params["p"] ** (n * (n - 1) // 2)
    if name == "elementary":
        return params["p"] ** params["rank"]
    if name == "wreath_cyclic":
        return params["p"] ** (params["p"] + 1)
    return params["order"]


def family(name: str, params: Dict[str, int], cap: Optional[int] = None) -> GroupSpec:
    if name not in FAMILIES:
        raise ValueError(f"unknown family '{name}'")
    expected = FAMILY_PARAMS[name]
    if set(params) != set(expected):
        raise ValueError(f"family '{name}' takes parameters {list(expected)}")
    cap = cap or get_settings().element_cap
    order = family_order(name, params)
    if order > cap:
        raise GroupTooLarge(f"group too large: {name} {params} has order {order}, cap {cap}")
    spec = FAMILIES[name](**params)
    logger.debug(f"Family {name} {params} -> {spec.name}")
    return spec
