"""Finite groups realized as multiplication tables.

Element 0 is always the identity. Products of group elements are read from the
table, so every subgroup routine below is a handful of numpy gathers.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from functools import cached_property
from math import lcm
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from app.config import get_settings
from app.engine.errors import (
    GroupTooLarge,
    InvalidGenerator,
    NonabelianSubgroup,
    ProductNotSubgroup,
)
from app.engine.linalg import rank_mod_p

logger = logging.getLogger(__name__)

# Pairs (a, b) evaluated per numpy batch when enumerating commutators
COMMUTATOR_BATCH = 1 << 22


# ────────────────────────────────────────────────
# Integer helpers
# ────────────────────────────────────────────────

def prime_factors(n: int) -> Dict[int, int]:
    factors: Dict[int, int] = {}
    q = 2
    while q * q <= n:
        while n % q == 0:
            factors[q] = factors.get(q, 0) + 1
            n //= q
        q += 1
    if n > 1:
        factors[n] = factors.get(n, 0) + 1
    return factors


def is_prime(n: int) -> bool:
    return n >= 2 and prime_factors(n) == {n: 1}


def prime_power_log(n: int) -> Optional[Tuple[int, int]]:
    """(q, k) with n = q^k for a prime q, or None"""
    factors = prime_factors(n)
    if len(factors) != 1:
        return None
    (q, k), = factors.items()
    return q, k


def exact_log(value: int, p: int) -> Optional[int]:
    k = 0
    while value > 1 and value % p == 0:
        value //= p
        k += 1
    return k if value == 1 else None


# ────────────────────────────────────────────────
# Domain types
# ────────────────────────────────────────────────

@dataclass(frozen=True, eq=False)
class GroupTable:
    mult: np.ndarray = field(repr=False)
    inv: np.ndarray = field(repr=False)
    generators: Tuple[int, ...] = ()
    labels: Optional[Tuple[str, ...]] = field(default=None, repr=False)
    identity: int = 0

    @property
    def order(self) -> int:
        return int(self.mult.shape[0])

    def label(self, x: int) -> str:
        if self.labels is not None:
            return self.labels[x]
        return f"g{x}"

    @cached_property
    def element_orders(self) -> np.ndarray:
        base = np.arange(self.order)
        orders = np.zeros(self.order, dtype=np.int64)
        current = base.copy()
        k = 1
        while True:
            done = (current == 0) & (orders == 0)
            orders[done] = k
            if orders.all():
                return orders
            current = self.mult[current, base]
            k += 1

    @cached_property
    def whole(self) -> "Subgroup":
        return Subgroup(self, tuple(range(self.order)))

    @cached_property
    def trivial(self) -> "Subgroup":
        return Subgroup(self, (0,))

    def generating_set(self) -> np.ndarray:
        if self.generators:
            return np.asarray(self.generators, dtype=np.int64)
        return np.arange(1, self.order, dtype=np.int64)


@dataclass(frozen=True)
class Subgroup:
    parent: GroupTable = field(repr=False)
    members: Tuple[int, ...]

    @property
    def order(self) -> int:
        return len(self.members)

    def __len__(self) -> int:
        return len(self.members)

    @cached_property
    def array(self) -> np.ndarray:
        return np.asarray(self.members, dtype=np.int64)

    @cached_property
    def mask(self) -> np.ndarray:
        mask = np.zeros(self.parent.order, dtype=bool)
        mask[self.array] = True
        return mask

    def contains(self, x: int) -> bool:
        return bool(self.mask[x])

    @property
    def is_trivial(self) -> bool:
        return len(self.members) == 1

    def issubset(self, other: "Subgroup") -> bool:
        return bool(other.mask[self.array].all())


def _subgroup_from_mask(G: GroupTable, mask: np.ndarray) -> Subgroup:
    return Subgroup(G, tuple(int(x) for x in np.nonzero(mask)[0]))


@dataclass(frozen=True)
class AbelianType:
    factors: Tuple[int, ...] = ()

    @property
    def order(self) -> int:
        result = 1
        for f in self.factors:
            result *= f
        return result

    def is_type(self, *factors: int) -> bool:
        return self.factors == tuple(sorted(factors, reverse=True))

    def __str__(self) -> str:
        if not self.factors:
            return "1"
        return " x ".join(f"C{f}" for f in self.factors)


@dataclass(frozen=True)
class CentralSeries:
    terms: Tuple[Subgroup, ...]
    nilpotent: bool

    @property
    def cl(self) -> Optional[int]:
        return len(self.terms) - 1 if self.nilpotent else None

    def gamma(self, i: int) -> Subgroup:
        """γ_i, 1-based; trivial past the end of a terminating series"""
        if i - 1 < len(self.terms):
            return self.terms[i - 1]
        if not self.nilpotent:
            return self.terms[-1]
        return self.terms[0].parent.trivial


@dataclass(frozen=True)
class SubgroupProfile:
    order: int
    is_abelian: bool
    is_cyclic: bool
    exponent: int
    is_normal: bool
    is_central: bool
    # None when H is nonabelian, where Ω_1 is not defined
    omega1: Optional[Subgroup] = field(default=None, repr=False)


# ────────────────────────────────────────────────
# Construction
# ────────────────────────────────────────────────

def permutation_from_cycles(cycles: Sequence[Sequence[int]], degree: int) -> Tuple[int, ...]:
    """0-based image tuple of a permutation written as cycles of 1-based points"""
    images = list(range(degree))
    seen = set()
    for cycle in cycles:
        for point in cycle:
            if not 1 <= point <= degree:
                raise ValueError(f"point {point} outside 1..{degree}")
            if point in seen:
                raise ValueError(f"repeated point {point}")
            seen.add(point)
        for a, b in zip(cycle, list(cycle[1:]) + list(cycle[:1])):
            images[a - 1] = b - 1
    return tuple(images)


def cycle_notation(images: Sequence[int]) -> str:
    seen = set()
    parts = []
    for start in range(len(images)):
        if start in seen or images[start] == start:
            continue
        cycle = [start]
        seen.add(start)
        x = images[start]
        while x != start:
            cycle.append(x)
            seen.add(x)
            x = images[x]
        parts.append("(" + " ".join(str(c + 1) for c in cycle) + ")")
    return "".join(parts) or "()"


def _enumerate_closure(gens: List[np.ndarray], identity: np.ndarray, compose, cap: int):
    index = {identity.tobytes(): 0}
    elements = [identity]
    parent: List[Tuple[int, int]] = [(-1, -1)]
    right: List[List[int]] = []
    i = 0
    while i < len(elements):
        x = elements[i]
        row = []
        for s, g in enumerate(gens):
            y = compose(x, g)
            key = y.tobytes()
            j = index.get(key)
            if j is None:
                if len(elements) >= cap:
                    raise GroupTooLarge(f"group too large: closure exceeds {cap} elements")
                j = len(elements)
                index[key] = j
                elements.append(y)
                parent.append((i, s))
            row.append(j)
        right.append(row)
        i += 1
    return elements, np.asarray(right, dtype=np.int64).reshape(len(elements), len(gens)), parent


def _table_from_closure(right: np.ndarray, parent: List[Tuple[int, int]]) -> np.ndarray:
    n = right.shape[0]
    dtype = np.uint16 if n <= np.iinfo(np.uint16).max else np.int32
    mult = np.empty((n, n), dtype=dtype)
    mult[:, 0] = np.arange(n)
    for j in range(1, n):
        k, s = parent[j]
        mult[:, j] = right[mult[:, k].astype(np.int64), s]
    return mult


def _inverse_table(mult: np.ndarray) -> np.ndarray:
    return np.argmax(mult == 0, axis=1).astype(np.int64)


def build_group(generators: Sequence, *, p: Optional[int] = None, cap: Optional[int] = None) -> GroupTable:
    """Close a generating set under composition.

    Permutations are 0-based image sequences of a common degree and compose
    left to right (x*y applies x first). With ``p`` given, generators are
    square matrices over F_p and compose by the matrix product.
    """
    cap = cap or get_settings().element_cap
    if not generators:
        raise InvalidGenerator("invalid generator: generating set is empty")

    if p is None:
        gens = [np.asarray(g, dtype=np.int64) for g in generators]
        degree = len(gens[0])
        for g in gens:
            if g.ndim != 1 or len(g) != degree or sorted(g.tolist()) != list(range(degree)):
                raise InvalidGenerator(f"invalid generator: {g.tolist()} is not a permutation of degree {degree}")
        identity = np.arange(degree, dtype=np.int64)
        elements, right, parent = _enumerate_closure(gens, identity, lambda x, g: g[x], cap)
        labels = tuple(cycle_notation(e.tolist()) for e in elements)
    else:
        gens = [np.mod(np.asarray(g, dtype=np.int64), p) for g in generators]
        dim = gens[0].shape[0]
        for g in gens:
            if g.shape != (dim, dim):
                raise InvalidGenerator(f"invalid generator: expected a {dim}x{dim} matrix, got shape {g.shape}")
            if rank_mod_p(g, p) != dim:
                raise InvalidGenerator("invalid generator: matrix is not invertible mod p")
        identity = np.eye(dim, dtype=np.int64)
        elements, right, parent = _enumerate_closure(gens, identity, lambda x, g: np.mod(x @ g, p), cap)
        labels = None

    mult = _table_from_closure(right, parent)
    G = GroupTable(
        mult=mult,
        inv=_inverse_table(mult),
        generators=tuple(sorted({int(j) for j in right[0]} - {0})),
        labels=labels,
    )
    logger.info(f"Built group of order {G.order} from {len(generators)} generators")
    return G


def direct_product(G: GroupTable, H: GroupTable, *, cap: Optional[int] = None) -> GroupTable:
    cap = cap or get_settings().element_cap
    n_g, n_h = G.order, H.order
    n = n_g * n_h
    if n > cap:
        raise GroupTooLarge(f"group too large: {n_g} x {n_h} exceeds {cap} elements")
    mg = G.mult.astype(np.int32)
    mh = H.mult.astype(np.int32)
    table = (mg[:, None, :, None] * n_h + mh[None, :, None, :]).reshape(n, n)
    dtype = np.uint16 if n <= np.iinfo(np.uint16).max else np.int32
    inv = (G.inv[:, None] * n_h + H.inv[None, :]).reshape(n).astype(np.int64)
    generators = {int(g) * n_h for g in G.generators} | {int(h) for h in H.generators}
    labels = None
    if G.labels is not None and H.labels is not None:
        labels = tuple(f"({a}, {b})" for a in G.labels for b in H.labels)
    return GroupTable(
        mult=table.astype(dtype),
        inv=inv,
        generators=tuple(sorted(generators - {0})),
        labels=labels,
    )


# ────────────────────────────────────────────────
# Elementwise operations
# ────────────────────────────────────────────────

def commutator(G: GroupTable, x, y):
    """(x, y) = x^-1 y^-1 x y, elementwise over broadcast index arrays"""
    m = G.mult
    return m[m[G.inv[x], G.inv[y]], m[x, y]]


def power_elements(G: GroupTable, xs, q: int) -> np.ndarray:
    result = np.zeros_like(np.asarray(xs, dtype=np.int64))
    base = np.asarray(xs, dtype=np.int64)
    e = q
    while e:
        if e & 1:
            result = G.mult[result, base].astype(np.int64)
        base = G.mult[base, base].astype(np.int64)
        e >>= 1
    return result


# ────────────────────────────────────────────────
# Subgroup calculus
# ────────────────────────────────────────────────

def _close_mask(G: GroupTable, mask: np.ndarray, gens: np.ndarray):
    frontier = np.nonzero(mask)[0]
    while frontier.size:
        products = np.unique(G.mult[np.ix_(frontier, gens)].ravel())
        new = products[~mask[products]]
        mask[new] = True
        frontier = new


def subgroup_closure(G: GroupTable, seed: Iterable[int]) -> Subgroup:
    seed = np.unique(np.asarray(list(seed) if not isinstance(seed, np.ndarray) else seed, dtype=np.int64))
    if seed.size and (seed.min() < 0 or seed.max() >= G.order):
        raise ValueError(f"seed indices must lie in 0..{G.order - 1}")
    mask = np.zeros(G.order, dtype=bool)
    mask[0] = True
    gens: List[int] = []
    for x in seed:
        if not mask[x]:
            gens.append(int(x))
            _close_mask(G, mask, np.asarray(gens, dtype=np.int64))
    return _subgroup_from_mask(G, mask)


def commutator_subgroup(G: GroupTable, A: Subgroup, B: Subgroup) -> Subgroup:
    a, b = A.array, B.array
    seen = np.zeros(G.order, dtype=bool)
    rows = max(1, COMMUTATOR_BATCH // len(b))
    for start in range(0, len(a), rows):
        values = commutator(G, a[start:start + rows, None], b[None, :])
        seen[values.ravel()] = True
    return subgroup_closure(G, np.nonzero(seen)[0])


def lower_central_series(G: GroupTable) -> CentralSeries:
    terms = [G.whole]
    while not terms[-1].is_trivial:
        nxt = commutator_subgroup(G, terms[-1], G.whole)
        if nxt == terms[-1]:
            logger.debug(f"Lower central series stabilizes at order {nxt.order}: not nilpotent")
            return CentralSeries(tuple(terms), nilpotent=False)
        terms.append(nxt)
    logger.debug(f"Lower central series orders: {[t.order for t in terms]}")
    return CentralSeries(tuple(terms), nilpotent=True)


def power_subgroup(G: GroupTable, H: Subgroup, q: int) -> Subgroup:
    if q < 1:
        raise ValueError("power exponent must be positive")
    if q == 1:
        return H
    return subgroup_closure(G, power_elements(G, H.array, q))


def is_normal(G: GroupTable, H: Subgroup) -> bool:
    h = H.array
    for g in G.generating_set():
        conjugates = G.mult[G.mult[G.inv[g], h], g]
        if not H.mask[conjugates].all():
            return False
    return True


def subgroup_product(G: GroupTable, A: Subgroup, B: Subgroup) -> Subgroup:
    if B.issubset(A):
        return A
    if A.issubset(B):
        return B
    if not (is_normal(G, A) or is_normal(G, B)):
        raise ProductNotSubgroup("product may not be a subgroup: neither factor is normal")
    mask = np.zeros(G.order, dtype=bool)
    b = B.array
    rows = max(1, COMMUTATOR_BATCH // len(b))
    for start in range(0, len(A.array), rows):
        mask[G.mult[A.array[start:start + rows, None], b[None, :]].ravel()] = True
    return _subgroup_from_mask(G, mask)


def is_abelian(G: GroupTable, H: Subgroup) -> bool:
    block = G.mult[np.ix_(H.array, H.array)]
    return bool((block == block.T).all())


def abelian_type(G: GroupTable, H: Subgroup) -> AbelianType:
    """Elementary divisors from the order-counting profile |{h : h^(q^k) = 1}|"""
    if not is_abelian(G, H):
        raise NonabelianSubgroup("nonabelian subgroup")
    orders = G.element_orders[H.array]
    factors: List[int] = []
    for q in sorted(prime_factors(H.order)):
        logs = [0]
        k = 0
        while True:
            k += 1
            count = int(np.count_nonzero((q ** k) % orders == 0))
            logs.append(exact_log(count, q))
            if logs[-1] == logs[-2]:
                break
        at_least = [logs[i] - logs[i - 1] for i in range(1, len(logs))] + [0]
        for k in range(len(at_least) - 1, 0, -1):
            exactly = at_least[k - 1] - at_least[k]
            factors.extend([q ** k] * exactly)
    return AbelianType(tuple(factors))


def exponent(G: GroupTable, H: Subgroup) -> int:
    return lcm(*(int(o) for o in np.unique(G.element_orders[H.array])))


def is_cyclic(G: GroupTable, H: Subgroup) -> bool:
    return bool((G.element_orders[H.array] == H.order).any())


def center(G: GroupTable) -> Subgroup:
    gens = G.generating_set()
    if gens.size == 0:
        return G.whole
    left = G.mult[:, gens]
    right = G.mult[gens, :].T
    return _subgroup_from_mask(G, (left == right).all(axis=1))


def in_center(G: GroupTable, x: int) -> bool:
    gens = G.generating_set()
    return bool((G.mult[x, gens] == G.mult[gens, x]).all())


def omega1(G: GroupTable, H: Subgroup) -> Subgroup:
    """Subgroup generated by the elements of prime order of an abelian H"""
    if not is_abelian(G, H):
        raise NonabelianSubgroup("nonabelian subgroup: Ω_1 is defined here for abelian subgroups only")
    orders = G.element_orders[H.array]
    prime_order = np.array([is_prime(int(o)) for o in orders], dtype=bool)
    return subgroup_closure(G, H.array[prime_order])


def structural_queries(G: GroupTable, H: Subgroup, with_omega1: Optional[bool] = None) -> SubgroupProfile:
    """Order, cyclicity, exponent, normality and centrality of H.

    Ω_1(H) is included when H is abelian; passing ``with_omega1=True`` requests
    it explicitly and raises NonabelianSubgroup for a nonabelian H.
    """
    abelian = is_abelian(G, H)
    if with_omega1 is None:
        with_omega1 = abelian
    return SubgroupProfile(
        order=H.order,
        is_abelian=abelian,
        is_cyclic=is_cyclic(G, H),
        exponent=exponent(G, H),
        is_normal=is_normal(G, H),
        is_central=all(in_center(G, int(x)) for x in H.array),
        omega1=omega1(G, H) if with_omega1 else None,
    )


# ────────────────────────────────────────────────
# Table audits
# ────────────────────────────────────────────────

def validate_table(G: GroupTable, samples: int = 4096, seed: int = 0) -> List[str]:
    """Problems with the table axioms; exhaustive associativity up to order 64"""
    n = G.order
    m = G.mult.astype(np.int64)
    problems = []
    ids = np.arange(n)
    if not ((m[0] == ids).all() and (m[:, 0] == ids).all()):
        problems.append("identity row or column is not the identity map")
    if not (m[ids, G.inv] == 0).all():
        problems.append("inverse table is wrong")
    if not (np.sort(m, axis=1) == ids).all() or not (np.sort(m, axis=0) == ids[:, None]).all():
        problems.append("table is not a latin square")
    if n <= 64:
        x, y, z = np.meshgrid(ids, ids, ids, indexing="ij")
    else:
        rng = np.random.default_rng(seed)
        x, y, z = rng.integers(0, n, size=(3, samples))
    if not (m[m[x, y], z] == m[x, m[y, z]]).all():
        problems.append("multiplication is not associative")
    return problems


def check_commutator_identity(G: GroupTable, samples: int = 1000, seed: int = 0) -> int:
    """Count random triples violating (xy, z) = (x, z)((x, z), y)(y, z)"""
    if samples <= 0:
        return 0
    rng = np.random.default_rng(seed)
    x, y, z = rng.integers(0, G.order, size=(3, samples))
    xz = commutator(G, x, z)
    lhs = commutator(G, G.mult[x, y], z)
    rhs = G.mult[G.mult[xz, commutator(G, xz, y)], commutator(G, y, z)]
    return int(np.count_nonzero(lhs != rhs))
