"""The modular group algebra F_p[G] as dense vectors over the group table.

Coefficient vectors are indexed by group elements. Translation tables turn
left and right multiplication by a group element into a column gather:

    g * v  ==  v[left[g]]        v * g  ==  v[right[g]]
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, List, Optional, Sequence

import numpy as np

from app.config import get_settings
from app.engine.errors import (
    InternalConsistencyError,
    MismatchedParents,
    OracleOutOfRange,
    UnitGroupTooLarge,
)
from app.engine.group_core import GroupTable, Subgroup, exact_log
from app.engine.lie_dim import DimensionSeries, require_gate
from app.engine.linalg import SubspaceBasis, mod_matmul, to_gf

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class AlgebraVector:
    parent: GroupTable = field(repr=False)
    p: int
    coeffs: np.ndarray

    def __eq__(self, other) -> bool:
        if not isinstance(other, AlgebraVector):
            return NotImplemented
        return self.parent is other.parent and self.p == other.p and np.array_equal(self.coeffs, other.coeffs)

    @property
    def support(self) -> List[int]:
        return [int(x) for x in np.nonzero(self.coeffs)[0]]

    @property
    def weight(self) -> int:
        return int(np.count_nonzero(self.coeffs))

    def is_zero(self) -> bool:
        return not self.coeffs.any()


@dataclass
class LieChain:
    """R^{(k)} or R^{[k]} for k = 1, 2, ... ending at the first zero term"""

    kind: str
    subspaces: List[SubspaceBasis]

    @property
    def dims(self) -> List[int]:
        return [s.dim for s in self.subspaces]

    @property
    def index(self) -> int:
        return len(self.subspaces)

    def term(self, k: int) -> SubspaceBasis:
        if k - 1 < len(self.subspaces):
            return self.subspaces[k - 1]
        last = self.subspaces[-1]
        return SubspaceBasis(last.p, last.n)


class GroupAlgebra:
    def __init__(self, G: GroupTable, p: int):
        self.G = G
        self.p = p
        self.n = G.order

    @cached_property
    def left(self) -> np.ndarray:
        return self.G.mult[self.G.inv, :].astype(np.int64)

    @cached_property
    def right(self) -> np.ndarray:
        return self.G.mult[:, self.G.inv].T.astype(np.int64)

    def vector(self, coeffs: Sequence[int]) -> AlgebraVector:
        coeffs = to_gf(coeffs, self.p)
        if coeffs.shape != (self.n,):
            raise ValueError(f"expected {self.n} coefficients, got shape {coeffs.shape}")
        return AlgebraVector(self.G, self.p, coeffs)

    def basis(self, g: int) -> AlgebraVector:
        coeffs = np.zeros(self.n, dtype=np.int64)
        coeffs[g] = 1
        return AlgebraVector(self.G, self.p, coeffs)

    def one(self) -> AlgebraVector:
        return self.basis(self.G.identity)

    def _check(self, *vectors: AlgebraVector):
        for v in vectors:
            if v.parent is not self.G or v.p != self.p:
                raise MismatchedParents("mismatched parents: vectors belong to different group algebras")

    def multiply(self, a: AlgebraVector, b: AlgebraVector) -> AlgebraVector:
        self._check(a, b)
        # (ab)_h = sum_x a_x b_{x^-1 h}; row x of b[left] is x * b
        return AlgebraVector(self.G, self.p, mod_matmul(a.coeffs, b.coeffs[self.left], self.p))

    def add(self, a: AlgebraVector, b: AlgebraVector) -> AlgebraVector:
        self._check(a, b)
        return AlgebraVector(self.G, self.p, np.mod(a.coeffs + b.coeffs, self.p))

    def lie_bracket(self, a: AlgebraVector, b: AlgebraVector) -> AlgebraVector:
        ab = self.multiply(a, b).coeffs
        ba = self.multiply(b, a).coeffs
        return AlgebraVector(self.G, self.p, np.mod(ab - ba, self.p))

    def bracket_with_elements(self, rows: np.ndarray, elements: np.ndarray) -> np.ndarray:
        """[v, g] for every row v and element g; shape (rows * elements, n)"""
        rows = np.atleast_2d(rows)
        right = rows[:, self.right[elements]]
        left = rows[:, self.left[elements]]
        return np.mod(right - left, self.p).reshape(-1, self.n)

    def translates(self, rows: np.ndarray, elements: np.ndarray) -> np.ndarray:
        rows = np.atleast_2d(rows)
        both = np.concatenate([rows[:, self.left[elements]], rows[:, self.right[elements]]], axis=1)
        return both.reshape(-1, self.n)

    def augmentation_rows(self) -> np.ndarray:
        """Rows g - 1 for every g in G"""
        rows = np.eye(self.n, dtype=np.int64)
        rows[:, self.G.identity] = np.mod(rows[:, self.G.identity] - 1, self.p)
        return rows


def _oracle_range(G: GroupTable, cap: Optional[int]):
    cap = cap or get_settings().oracle_max_dim
    if G.order > cap:
        raise OracleOutOfRange(f"oracle out of range: |G| = {G.order} exceeds the direct-oracle cap {cap}")


def ideal_closure(G: GroupTable, p: int, span, algebra: Optional[GroupAlgebra] = None) -> SubspaceBasis:
    """Two-sided ideal generated by ``span``, closed under translation by the generators of G"""
    algebra = algebra or GroupAlgebra(G, p)
    basis = SubspaceBasis(p, G.order)
    if len(span) and isinstance(span[0], AlgebraVector):
        span = [v.coeffs for v in span]
    rows = np.asarray(span, dtype=np.int64).reshape(-1, G.order) if len(span) else np.zeros((0, G.order), np.int64)
    frontier = basis.extend(rows)
    gens = G.generating_set()
    while frontier.shape[0] and basis.dim < G.order:
        frontier = basis.extend(algebra.translates(frontier, gens))
    return basis


def upper_lie_chain(G: GroupTable, p: int, cap: Optional[int] = None) -> LieChain:
    _oracle_range(G, cap)
    series = require_gate(G, p)
    algebra = GroupAlgebra(G, p)
    gens = G.generating_set()
    limit = series.gamma(2).order + 1
    chain = [SubspaceBasis.whole_space(p, G.order)]
    while chain[-1].dim:
        if len(chain) >= limit:
            raise OracleOutOfRange(f"oracle out of range: upper chain did not vanish by step {limit}")
        brackets = algebra.bracket_with_elements(chain[-1].rows, gens)
        chain.append(ideal_closure(G, p, brackets, algebra))
        logger.debug(f"dim R^({len(chain)}) = {chain[-1].dim}")
    logger.info(f"Upper Lie chain over F_{p}, |G| = {G.order}: dims {[c.dim for c in chain]}")
    return LieChain("upper", chain)


def lower_lie_chain(G: GroupTable, p: int, cap: Optional[int] = None) -> LieChain:
    _oracle_range(G, cap)
    series = require_gate(G, p)
    algebra = GroupAlgebra(G, p)
    everything = np.arange(G.order)
    limit = series.gamma(2).order + 1
    chain = [SubspaceBasis.whole_space(p, G.order)]
    words = chain[0]
    while chain[-1].dim:
        if len(chain) >= limit:
            raise OracleOutOfRange(f"oracle out of range: lower chain did not vanish by step {limit}")
        # left-normed brackets need every group element in the last slot
        nxt = SubspaceBasis(p, G.order)
        for row in words.rows:
            nxt.extend(algebra.bracket_with_elements(row, everything))
        words = nxt
        chain.append(ideal_closure(G, p, words.rows, algebra))
        logger.debug(f"dim R^[{len(chain)}] = {chain[-1].dim}, dim W = {words.dim}")
    logger.info(f"Lower Lie chain over F_{p}, |G| = {G.order}: dims {[c.dim for c in chain]}")
    return LieChain("lower", chain)


def chain_inclusion_failures(lower: LieChain, upper: LieChain) -> List[int]:
    """Steps k where R^[k] is not contained in R^(k)"""
    steps = max(lower.index, upper.index)
    return [k for k in range(1, steps + 1) if not lower.term(k).is_subspace_of(upper.term(k))]


def chain_descent_failures(chain: LieChain) -> List[int]:
    return [k for k in range(1, chain.index) if not chain.term(k + 1).is_subspace_of(chain.term(k))]


def dimension_subgroups_direct(G: GroupTable, p: int, upper: Optional[LieChain] = None,
                               cap: Optional[int] = None) -> DimensionSeries:
    """D_(m) = G ∩ (1 + R^(m)), read off by membership of g - 1"""
    upper = upper or upper_lie_chain(G, p, cap)
    rows = GroupAlgebra(G, p).augmentation_rows()
    terms: List[Subgroup] = []
    for m in range(1, upper.index + 1):
        inside = upper.term(m).contains_rows(rows)
        terms.append(Subgroup(G, tuple(int(g) for g in np.nonzero(inside)[0])))
        if terms[-1].is_trivial:
            break
    return DimensionSeries(p, tuple(terms), "direct")


# ────────────────────────────────────────────────
# Unit group of F_2[G]
# ────────────────────────────────────────────────

class UnitGroupF2:
    """U(F_2[G]) = 1 + Δ(G) for a 2-group G, elements packed as bitmasks.

    Bit x of a mask is the coefficient of group element x, so the identity
    unit is mask 1. Multiplying a whole array of units by a fixed unit is a
    linear map on masks and runs through per-byte lookup tables.
    """

    def __init__(self, G: GroupTable):
        self.G = G
        self.n = G.order
        self.size = 1 << self.n
        self.nbytes = (self.n + 7) // 8
        self.mult = G.mult.astype(np.int64)
        self._right: Dict[int, np.ndarray] = {}
        self._left: Dict[int, np.ndarray] = {}
        weights = np.zeros(self.size, dtype=np.int64)
        masks = np.arange(self.size, dtype=np.int64)
        for x in range(self.n):
            weights += (masks >> x) & 1
        self.is_unit = (weights & 1).astype(bool)

    @property
    def order(self) -> int:
        return self.size // 2

    def _tables(self, images: List[int]) -> np.ndarray:
        values = np.arange(256, dtype=np.int64)
        tables = np.zeros((self.nbytes, 256), dtype=np.int64)
        for x, image in enumerate(images):
            k, j = divmod(x, 8)
            tables[k] ^= np.where((values >> j) & 1, image, 0)
        return tables

    def _bits(self, mask: int) -> List[int]:
        return [x for x in range(self.n) if mask >> x & 1]

    def _mask(self, elements) -> int:
        mask = 0
        for e in elements:
            mask ^= 1 << int(e)
        return mask

    def right_table(self, b: int) -> np.ndarray:
        if b not in self._right:
            support = self._bits(b)
            self._right[b] = self._tables([self._mask(self.mult[x, support]) for x in range(self.n)])
        return self._right[b]

    def left_table(self, b: int) -> np.ndarray:
        if b not in self._left:
            support = self._bits(b)
            self._left[b] = self._tables([self._mask(self.mult[support, y]) for y in range(self.n)])
        return self._left[b]

    @staticmethod
    def _apply(tables: np.ndarray, masks: np.ndarray) -> np.ndarray:
        result = np.zeros_like(masks)
        for k in range(tables.shape[0]):
            result ^= tables[k][(masks >> (8 * k)) & 0xFF]
        return result

    def times(self, masks: np.ndarray, b: int) -> np.ndarray:
        return self._apply(self.right_table(b), masks)

    def mul(self, a: int, b: int) -> int:
        return int(self.times(np.array([a], dtype=np.int64), b)[0])

    def inverse(self, u: int) -> int:
        previous, current = 1, u
        while current != 1:
            previous, current = current, self.mul(current, u)
        return previous

    def conjugate(self, a: int, x: int) -> int:
        """x^-1 a x"""
        left = int(self._apply(self.left_table(self.inverse(x)), np.array([a], dtype=np.int64))[0])
        return self.mul(left, x)

    def commutator(self, a: int, b: int) -> int:
        return self.mul(self.mul(self.inverse(a), self.inverse(b)), self.mul(a, b))

    def _close(self, member: np.ndarray, gens: List[int], frontier: np.ndarray):
        while frontier.size:
            images = np.unique(np.concatenate([self.times(frontier, g) for g in gens]))
            images = images[~member[images]]
            member[images] = True
            frontier = images

    def _adjoin(self, member: np.ndarray, gens: List[int], g: int):
        gens.append(g)
        self._close(member, gens, np.flatnonzero(member))

    def generating_set(self) -> List[int]:
        member = np.zeros(self.size, dtype=bool)
        member[1] = True
        gens: List[int] = []
        for g in self.G.generating_set():
            if not member[1 << int(g)]:
                self._adjoin(member, gens, 1 << int(g))
        while True:
            remaining = np.flatnonzero(self.is_unit & ~member)
            if remaining.size == 0:
                return gens
            self._adjoin(member, gens, int(remaining[0]))

    def normal_closure(self, seeds: Sequence[int], conjugators: Sequence[int]):
        member = np.zeros(self.size, dtype=bool)
        member[1] = True
        gens: List[int] = []
        queue = list(seeds)
        while queue:
            t = queue.pop()
            if member[t]:
                continue
            self._adjoin(member, gens, t)
            queue.extend(self.conjugate(t, x) for x in conjugators)
        return member, gens

    def nilpotency_class(self) -> int:
        units = self.generating_set()
        level, size, cl = units, self.order, 0
        while True:
            cl += 1
            seeds = {self.commutator(a, x) for a in level for x in units}
            member, level = self.normal_closure(sorted(seeds), units)
            count = int(np.count_nonzero(member))
            logger.debug(f"|γ_{cl + 1}(U)| = {count}")
            if count == 1:
                return cl
            if count == size:
                raise InternalConsistencyError("unit group of a modular 2-group algebra is not nilpotent")
            size = count


def unit_group_class(G: GroupTable, p: int = 2, size_cap: Optional[int] = None) -> int:
    """Nilpotency class of U(F_2[G]) for a small 2-group G"""
    size_cap = size_cap or get_settings().unit_group_cap
    if p != 2 or exact_log(G.order, 2) is None:
        raise ValueError("unit group enumeration needs p = 2 and a 2-group G")
    if 2 ** (G.order - 1) > size_cap:
        raise UnitGroupTooLarge(f"unit group too large: 2^{G.order - 1} units exceed the cap {size_cap}")
    cl = UnitGroupF2(G).nilpotency_class()
    logger.info(f"U(F_2[G]) for |G| = {G.order} has class {cl}")
    return cl
