"""Lie dimension subgroups and the upper Lie nilpotency index via Jennings' theory."""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from app.engine.errors import InternalConsistencyError, NotLieNilpotent
from app.engine.group_core import (
    CentralSeries,
    GroupTable,
    Subgroup,
    commutator_subgroup,
    exact_log,
    exponent,
    is_prime,
    lower_central_series,
    power_subgroup,
    prime_factors,
    prime_power_log,
    subgroup_product,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class GateStatus:
    """Whether F_p[G] is Lie nilpotent: G nilpotent and G' a finite p-group"""

    nilpotent: bool
    p: Optional[int]
    n: Optional[int]
    cl: Optional[int]
    reason: Optional[str] = None

    @property
    def passed(self) -> bool:
        return self.reason is None

    @property
    def label(self) -> str:
        return "Lie nilpotent" if self.passed else "not Lie nilpotent"


@dataclass(frozen=True)
class DimensionSeries:
    p: int
    terms: Tuple[Subgroup, ...]
    method: str

    def term(self, k: int) -> Subgroup:
        """D_(k), 1-based; trivial past the end"""
        if k - 1 < len(self.terms):
            return self.terms[k - 1]
        return self.terms[0].parent.trivial

    def orders(self) -> List[int]:
        return [t.order for t in self.terms]

    def same_terms(self, other: "DimensionSeries") -> bool:
        return [t.members for t in self.terms] == [t.members for t in other.terms]


@dataclass(frozen=True)
class DSequence:
    p: int
    n: int
    d: Dict[int, int] = field(default_factory=dict)
    exp_log: int = 0

    def get(self, k: int) -> int:
        return self.d.get(k, 0)


@dataclass(frozen=True)
class ShalevViolation:
    clause: str
    m: Optional[int]
    detail: str


def ceil_div(a: int, b: int) -> int:
    return -(-a // b)


def nu_p_prime(x: int, p: int) -> int:
    """Largest divisor of x coprime to p"""
    while x and x % p == 0:
        x //= p
    return x


def lie_gate(G: GroupTable, p: Optional[int] = None, series: Optional[CentralSeries] = None) -> GateStatus:
    if p is not None and not is_prime(p):
        raise ValueError(f"characteristic must be prime, got {p}")
    series = series or lower_central_series(G)
    if not series.nilpotent:
        return GateStatus(False, p, None, None, "KG not Lie nilpotent: G is not nilpotent")
    derived = series.gamma(2)
    if derived.is_trivial:
        if p is None:
            p = min(prime_factors(G.order), default=2)
        return GateStatus(True, p, 0, series.cl)
    power = prime_power_log(derived.order)
    if power is None:
        return GateStatus(True, p, None, series.cl, "KG not Lie nilpotent: G' is not a p-group")
    q, n = power
    if p is not None and p != q:
        return GateStatus(True, p, None, series.cl, f"KG not Lie nilpotent: G' is a {q}-group, not a {p}-group")
    return GateStatus(True, q, n, series.cl)


def require_gate(G: GroupTable, p: int, series: Optional[CentralSeries] = None) -> CentralSeries:
    series = series or lower_central_series(G)
    gate = lie_gate(G, p, series)
    if not gate.passed:
        raise NotLieNilpotent(gate.reason)
    return series


def _term_cap(G: GroupTable, series: CentralSeries) -> int:
    return series.gamma(2).order + 2


def dimension_series_product(G: GroupTable, p: int, series: Optional[CentralSeries] = None) -> DimensionSeries:
    """D_(m+1) = product of γ_j^(p^i) over (j-1)p^i >= m"""
    series = require_gate(G, p, series)
    derived = series.gamma(2)
    l = exact_log(exponent(G, derived), p)
    factors: List[Tuple[int, int, Subgroup]] = []
    for j in range(2, len(series.terms)):
        gamma = series.gamma(j)
        for i in range(l + 1):
            powered = power_subgroup(G, gamma, p ** i)
            if powered.is_trivial:
                break
            factors.append((j, i, powered))

    terms = [G.whole, derived]
    while not terms[-1].is_trivial:
        if len(terms) > _term_cap(G, series):
            raise InternalConsistencyError("dimension series did not terminate")
        m = len(terms)
        D = G.trivial
        for j, i, powered in factors:
            if (j - 1) * p ** i >= m:
                D = subgroup_product(G, D, powered)
        terms.append(D)
    logger.debug(f"Product-formula dimension series orders: {[t.order for t in terms]}")
    return DimensionSeries(p, tuple(terms), "product")


def dimension_series_recursive(G: GroupTable, p: int, series: Optional[CentralSeries] = None) -> DimensionSeries:
    """D_(m+1) = (D_(m), G) * D_(ceil(m/p)+1)^p for m >= 2"""
    series = require_gate(G, p, series)
    terms = [G.whole, series.gamma(2)]
    while not terms[-1].is_trivial:
        if len(terms) > _term_cap(G, series):
            raise InternalConsistencyError("dimension series did not terminate")
        m = len(terms)
        left = commutator_subgroup(G, terms[m - 1], G.whole)
        right = power_subgroup(G, terms[ceil_div(m, p)], p)
        terms.append(subgroup_product(G, left, right))
    logger.debug(f"Recursive dimension series orders: {[t.order for t in terms]}")
    return DimensionSeries(p, tuple(terms), "recursive")


def d_sequence(G: GroupTable, series: DimensionSeries) -> DSequence:
    p = series.p
    derived = series.term(2)
    n = exact_log(derived.order, p)
    l = exact_log(exponent(G, derived), p)
    if n is None or l is None:
        raise InternalConsistencyError(f"|D_(2)| = {derived.order} is not a power of {p}")
    d: Dict[int, int] = {}
    for k in range(2, len(series.terms)):
        index = series.term(k).order // series.term(k + 1).order
        log = exact_log(index, p)
        if log is None:
            raise InternalConsistencyError(f"[D_({k}) : D_({k + 1})] = {index} is not a power of {p}")
        if log:
            d[k] = log
    return DSequence(p=p, n=n, d=d, exp_log=l)


def upper_index_jennings(ds: DSequence) -> int:
    return 2 + (ds.p - 1) * sum((k - 1) * dk for k, dk in ds.d.items())


def maximal_value(p: int, n: int) -> int:
    return p ** n + 1


def almost_maximal_value(p: int, n: int) -> int:
    return p ** n - p + 2


def _is_power_of(m: int, p: int) -> bool:
    return exact_log(m, p) is not None


def shalev_checks(ds: DSequence, series: DimensionSeries, t_lower: Optional[int] = None) -> List[ShalevViolation]:
    """Self-audit of a d-sequence against Shalev's structural constraints.

    All five clauses are theorems, so anything returned here points at an
    engine defect (or a corrupted input).
    """
    p, n, l = ds.p, ds.n, ds.exp_log
    last = len(series.terms)
    violations: List[ShalevViolation] = []

    for m in range(1, last + 1):
        if ds.get(m + 1) != 0 or series.term(m + 1).is_trivial:
            continue
        if _is_power_of(m, p):
            violations.append(ShalevViolation("i", m, f"d_({m + 1}) = 0 with m a power of {p} but D_({m + 1}) != 1"))
        if l >= 1 and m % p ** (l - 1) == 0:
            violations.append(ShalevViolation("ii", m, f"d_({m + 1}) = 0 with p^(l-1) | m but D_({m + 1}) != 1"))

    if p >= 5 and n >= 1:
        t = t_lower if t_lower is not None else upper_index_jennings(ds)
        if t < p ** n + 1 and t > p ** (n - 1) + 2 * p - 1:
            violations.append(ShalevViolation("iii", None, f"t_L = {t} exceeds p^(n-1)+2p-1 = {p ** (n - 1) + 2 * p - 1}"))

    for m in range(1, last + 1):
        if any(ds.get(l_ + 1) == 0 for l_ in range(m, p * m)) and ds.get(p * m + 1) > ds.get(m + 1):
            violations.append(ShalevViolation("iv", m, f"d_({p * m + 1}) = {ds.get(p * m + 1)} > d_({m + 1}) = {ds.get(m + 1)}"))

    for m in range(1, last + 1):
        if ds.get(m + 1) != 0:
            continue
        for l_ in range(m, last + 1):
            if nu_p_prime(l_, p) >= nu_p_prime(m, p) and ds.get(l_ + 1) != 0:
                violations.append(ShalevViolation("v", m, f"d_({m + 1}) = 0 but d_({l_ + 1}) = {ds.get(l_ + 1)}"))
                break

    for v in violations:
        logger.warning(f"Shalev clause ({v.clause}) violated at m={v.m}: {v.detail}")
    return violations
