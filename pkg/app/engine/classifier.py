"""Structural conditions for the three small Lie nilpotency index values, and the
two-way check of each classification against computed indices."""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Set, Tuple

from app.config import get_settings
from app.engine.errors import NonabelianSubgroup, NotLieNilpotent
from app.engine.group_core import (
    CentralSeries,
    GroupTable,
    abelian_type,
    center,
    check_commutator_identity,
    exact_log,
    exponent,
    is_abelian,
    is_cyclic,
    lower_central_series,
    omega1,
    power_subgroup,
)
from app.engine.lie_dim import (
    DSequence,
    almost_maximal_value,
    d_sequence,
    dimension_series_product,
    dimension_series_recursive,
    lie_gate,
    maximal_value,
    shalev_checks,
    upper_index_jennings,
)
from app.engine.modular_algebra import (
    chain_descent_failures,
    chain_inclusion_failures,
    dimension_subgroups_direct,
    lower_lie_chain,
    unit_group_class,
    upper_lie_chain,
)
from app.models.report import (
    AnalysisReport,
    CheckResult,
    Gamma3Descriptor,
    OracleStatus,
    StructureSummary,
    Verdict,
)

logger = logging.getLogger(__name__)


# ────────────────────────────────────────────────
# Structure of G' and γ_3
# ────────────────────────────────────────────────

@dataclass(frozen=True)
class GroupShape:
    """The invariants every theorem condition is phrased in"""

    p: int
    cl: int
    gprime_order: int
    gprime_abelian: bool
    gprime_factors: Tuple[int, ...]
    gamma3_order: int
    gamma3_cyclic: bool
    gamma3_is_squares: bool
    squares_in_gamma3: bool
    gamma3_is_omega1: Optional[bool]

    def gprime_is(self, *factors: int) -> bool:
        return self.gprime_abelian and self.gprime_factors == tuple(sorted(factors, reverse=True))

    @property
    def gamma3_elementary_rank2(self) -> bool:
        return self.gamma3_order == 4 and not self.gamma3_cyclic


def group_shape(G: GroupTable, p: int, series: CentralSeries) -> GroupShape:
    derived, gamma3 = series.gamma(2), series.gamma(3)
    squares = power_subgroup(G, derived, 2)
    abelian = is_abelian(G, derived)
    return GroupShape(
        p=p,
        cl=series.cl,
        gprime_order=derived.order,
        gprime_abelian=abelian,
        gprime_factors=abelian_type(G, derived).factors if abelian else (),
        gamma3_order=gamma3.order,
        gamma3_cyclic=is_cyclic(G, gamma3),
        gamma3_is_squares=gamma3.members == squares.members,
        squares_in_gamma3=squares.issubset(gamma3),
        gamma3_is_omega1=gamma3.members == omega1(G, derived).members if abelian else None,
    )


def gamma3_descriptor(shape: GroupShape) -> Gamma3Descriptor:
    return Gamma3Descriptor(
        order=shape.gamma3_order,
        is_cyclic=shape.gamma3_cyclic,
        equals_gprime_squared=shape.gamma3_is_squares,
        equals_omega1=shape.gamma3_is_omega1,
    )


def gprime_type_label(G: GroupTable, series: CentralSeries) -> str:
    try:
        return str(abelian_type(G, series.gamma(2)))
    except NonabelianSubgroup:
        return "nonabelian"


def describe_structure(G: GroupTable) -> StructureSummary:
    series = lower_central_series(G)
    derived = series.gamma(2)
    gamma3 = None
    if series.nilpotent:
        gate = lie_gate(G, series=series)
        gamma3 = gamma3_descriptor(group_shape(G, gate.p or 2, series))
    return StructureSummary(
        order=G.order,
        nilpotent=series.nilpotent,
        cl=series.cl,
        lower_central_orders=[t.order for t in series.terms],
        gprime_order=derived.order,
        gprime_type=gprime_type_label(G, series),
        gprime_exponent=exponent(G, derived),
        center_order=center(G).order,
        gamma3=gamma3,
    )


# ────────────────────────────────────────────────
# Theorem conditions
# ────────────────────────────────────────────────

@dataclass(frozen=True)
class TheoremCondition:
    id: str
    family: str
    predicate: Callable[[GroupShape], bool]
    # form as printed, when it differs from the one the d-sequence forces
    literal: Optional[Callable[[GroupShape], bool]] = None

    def holds(self, shape: GroupShape, literal: bool = False) -> bool:
        if literal and self.literal is not None:
            return self.literal(shape)
        return self.predicate(shape)

    def target(self, p: int, gprime_order: int) -> int:
        return target_value(self.family, p, gprime_order)


TARGETS: Dict[str, Tuple[int, int]] = {
    # family -> (a, b) with target |G'| - a*p + b
    "T1": (4, 5),
    "T2": (3, 4),
    "T3": (2, 3),
}

TARGET_LABELS = {"T1": "|G'|-4p+5", "T2": "|G'|-3p+4", "T3": "|G'|-2p+3"}


def target_value(family: str, p: int, gprime_order: int) -> int:
    a, b = TARGETS[family]
    return gprime_order - a * p + b


def unit_target_value(family: str, p: int, gprime_order: int) -> int:
    return target_value(family, p, gprime_order) - 1


def _c4c2_gamma3_listed(s: GroupShape) -> bool:
    # ⟨b⟩, ⟨a²b⟩ or ⟨a²⟩×⟨b⟩ for G' = ⟨a⟩×⟨b⟩, up to Aut(C4×C2)
    return bool(s.gamma3_is_omega1) or (s.gamma3_order == 2 and not s.gamma3_is_squares)


CONDITIONS: Tuple[TheoremCondition, ...] = (
    TheoremCondition("T1.i", "T1", lambda s: s.p == 2 and s.cl == 2 and s.gprime_is(2, 2, 2)),
    TheoremCondition("T1.ii", "T1", lambda s: s.p == 5 and s.cl == 2 and s.gprime_is(5, 5)),
    TheoremCondition("T2.i", "T2", lambda s: s.p == 2 and s.cl == 3 and s.gprime_is(2, 2, 2) and s.gamma3_cyclic),
    TheoremCondition(
        "T2.ii", "T2",
        predicate=lambda s: s.p == 2 and s.gprime_is(4, 2) and s.gamma3_is_squares,
        literal=lambda s: s.p == 2 and s.gprime_is(4, 2) and s.squares_in_gamma3,
    ),
    TheoremCondition("T2.iii", "T2", lambda s: s.p == 5 and s.cl == 3 and s.gprime_is(5, 5)),
    TheoremCondition(
        "T3.i", "T3",
        lambda s: s.p == 2 and s.cl == 3 and s.gprime_is(2, 2, 2) and s.gamma3_elementary_rank2,
    ),
    TheoremCondition(
        "T3.ii", "T3",
        predicate=lambda s: s.p == 2 and s.cl == 3 and s.gprime_is(4, 2) and _c4c2_gamma3_listed(s),
        literal=lambda s: s.p == 2 and s.gprime_is(4, 2) and _c4c2_gamma3_listed(s),
    ),
    TheoremCondition(
        "T3.iii", "T3",
        predicate=lambda s: s.p == 3 and s.cl == 2 and s.gprime_is(3, 3),
        literal=lambda s: s.p == 3 and s.cl == 3 and s.gprime_is(3, 3),
    ),
)

CONDITIONS_BY_ID = {c.id: c for c in CONDITIONS}


def _gated_shape(G: GroupTable, p: Optional[int]) -> GroupShape:
    series = lower_central_series(G)
    gate = lie_gate(G, p, series)
    if not gate.passed:
        raise NotLieNilpotent(gate.reason)
    return group_shape(G, gate.p, series)


def condition_match(G: GroupTable, p: Optional[int] = None, literal: bool = False,
                    shape: Optional[GroupShape] = None) -> Set[str]:
    shape = shape or _gated_shape(G, p)
    return {c.id for c in CONDITIONS if c.holds(shape, literal)}


def matched_families(ids: Set[str]) -> Set[str]:
    return {CONDITIONS_BY_ID[i].family for i in ids}


# ────────────────────────────────────────────────
# d-sequence cases
# ────────────────────────────────────────────────

LEMMA_CASES: Dict[str, Tuple[int, int, Dict[int, int]]] = {
    "L2.i": (2, 3, {2: 3}),
    "L2.ii": (3, 3, {2: 1, 4: 1, 6: 1}),
    "L2.iii": (5, 2, {2: 2}),
    "L4.i": (2, 3, {2: 2, 3: 1}),
    "L4.ii": (3, 3, {2: 1, 4: 1, 7: 1}),
    "L4.iii": (5, 2, {2: 1, 3: 1}),
    "L7.i": (2, 3, {2: 1, 3: 2}),
    "L7.ii": (3, 2, {2: 2}),
}

# cases representable as d-vectors that no group realizes
EXCLUDED_CASES = {"L2.ii", "L4.ii"}

LEMMA_FOR_FAMILY = {"T1": "L2", "T2": "L4", "T3": "L7"}


def lemma_d_match(p: int, n: int, ds: DSequence) -> Set[str]:
    return {
        case for case, (q, size, d) in LEMMA_CASES.items()
        if q == p and size == n and ds.d == d
    }


# ────────────────────────────────────────────────
# Full analysis
# ────────────────────────────────────────────────

class _Ledger:
    def __init__(self):
        self.checks: List[CheckResult] = []
        self.findings: List[str] = []

    def check(self, name: str, passed: bool, detail: str = ""):
        self.checks.append(CheckResult(name=name, passed=bool(passed), detail=detail))
        if not passed:
            logger.error(f"Check {name} failed: {detail}")

    def finding(self, text: str):
        self.findings.append(text)
        logger.warning(text)


def _iff_checks(ledger: _Ledger, label: str, t: int, p: int, gprime_order: int, families: Set[str]):
    for family in TARGETS:
        target = target_value(family, p, gprime_order)
        attained = t == target
        matched = family in families
        ledger.check(
            f"iff_{label}_{family}",
            attained == matched,
            f"{label} = {t}, target {TARGET_LABELS[family]} = {target}, condition matched: {matched}",
        )


def verify_iff(
    G: GroupTable,
    name: str = "G",
    p: Optional[int] = None,
    *,
    direct: Optional[bool] = None,
    max_dim: Optional[int] = None,
    units: Optional[bool] = None,
    unit_cap: Optional[int] = None,
    samples: Optional[int] = None,
) -> AnalysisReport:
    """Compute every index for G and check each classification in both directions.

    ``direct`` and ``units`` default to "run when within the configured caps";
    passing True forces the computation and lets a cap error propagate.
    A forced computation on a group that fails the gate raises NotLieNilpotent.
    """
    settings = get_settings()
    max_dim = max_dim or settings.oracle_max_dim
    unit_cap = unit_cap or settings.unit_group_cap
    samples = settings.identity_samples if samples is None else samples

    series = lower_central_series(G)
    gate = lie_gate(G, p, series)
    if not gate.passed:
        if direct or units:
            raise NotLieNilpotent(gate.reason)
        logger.info(f"{name}: {gate.reason}")
        return AnalysisReport(
            name=name,
            order=G.order,
            p=gate.p,
            cl=series.cl,
            gate=gate.label,
            gate_reason=gate.reason,
            gprime_type=gprime_type_label(G, series),
            verdict=Verdict.NOT_APPLICABLE,
        )

    p = gate.p
    ledger = _Ledger()
    shape = group_shape(G, p, series)
    gprime_order = shape.gprime_order

    product = dimension_series_product(G, p, series)
    recursive = dimension_series_recursive(G, p, series)
    ds = d_sequence(G, product)
    t_upper = upper_index_jennings(ds)

    ledger.check("d_sum", sum(ds.d.values()) == ds.n, f"sum of d = {sum(ds.d.values())}, n = {ds.n}")
    ledger.check("series_recursive_product", recursive.same_terms(product),
                 f"recursive orders {recursive.orders()}, product orders {product.orders()}")
    ledger.check("upper_bound", 2 <= t_upper <= gprime_order + 1, f"t^L = {t_upper}, |G'| + 1 = {gprime_order + 1}")
    if is_cyclic(G, series.gamma(2)):
        ledger.check("cyclic_gprime_maximal", t_upper == maximal_value(p, ds.n),
                     f"G' cyclic, t^L = {t_upper}, |G'| + 1 = {maximal_value(p, ds.n)}")
    if gprime_order == 8 and not shape.gprime_abelian:
        ledger.check("gprime_order_8_abelian", False, "nilpotent group with nonabelian G' of order 8")
        ledger.finding(f"{name}: nonabelian commutator subgroup of order 8")

    failures = check_commutator_identity(G, samples)
    ledger.check("commutator_identity", failures == 0, f"{failures} of {samples} sampled triples fail")

    # oracle
    t_direct_upper = t_direct_lower = None
    lower_dims: List[int] = []
    upper_dims: List[int] = []
    run_direct = direct if direct is not None else G.order <= max_dim
    oracle = OracleStatus.SKIPPED
    if run_direct:
        upper = upper_lie_chain(G, p, max_dim)
        lower = lower_lie_chain(G, p, max_dim)
        oracle = OracleStatus.RAN
        t_direct_upper, t_direct_lower = upper.index, lower.index
        upper_dims, lower_dims = upper.dims, lower.dims
        direct_series = dimension_subgroups_direct(G, p, upper)
        ledger.check("series_direct_product", direct_series.same_terms(product),
                     f"direct orders {direct_series.orders()}, product orders {product.orders()}")
        ledger.check("oracle_upper_index", t_direct_upper == t_upper,
                     f"direct t^L = {t_direct_upper}, Jennings t^L = {t_upper}")
        inclusion = chain_inclusion_failures(lower, upper)
        ledger.check("chain_inclusion", not inclusion, f"R^[k] not inside R^(k) at k = {inclusion}")
        descent = chain_descent_failures(upper) + chain_descent_failures(lower)
        ledger.check("chain_descent", not descent, f"non-descending steps {descent}")
        ledger.check("lower_le_upper", t_direct_lower <= t_direct_upper,
                     f"t_L = {t_direct_lower}, t^L = {t_direct_upper}")
        if p >= 5:
            ledger.check("equal_indices_large_p", t_direct_lower == t_direct_upper,
                         f"p = {p}, t_L = {t_direct_lower}, t^L = {t_direct_upper}")
    else:
        logger.info(f"{name}: oracle skipped at |G| = {G.order}")

    violations = shalev_checks(ds, product, t_direct_lower)
    ledger.check("shalev", not violations,
                 "; ".join(f"({v.clause}) at m={v.m}: {v.detail}" for v in violations))

    # classification
    matches = condition_match(G, p, shape=shape)
    literal = condition_match(G, p, literal=True, shape=shape)
    families = matched_families(matches)
    _iff_checks(ledger, "tU", t_upper, p, gprime_order, families)
    if t_direct_lower is not None:
        _iff_checks(ledger, "tL", t_direct_lower, p, gprime_order, families)
        if matches:
            ledger.check("matched_equal_indices", t_direct_lower == t_upper,
                         f"matched {sorted(matches)}, t_L = {t_direct_lower}, t^L = {t_upper}")
    ledger.check("single_target", len(families) <= 1, f"matched families {sorted(families)}")

    for cid in sorted(literal ^ matches):
        family = CONDITIONS_BY_ID[cid].family
        side = "as printed" if cid in literal else "in refined form only"
        ledger.finding(
            f"{name}: condition {cid} holds {side}; t^L = {t_upper}, "
            f"{TARGET_LABELS[family]} = {target_value(family, p, gprime_order)}"
        )

    cases = lemma_d_match(p, ds.n, ds)
    for family, lemma in LEMMA_FOR_FAMILY.items():
        if t_upper == target_value(family, p, gprime_order):
            hits = [c for c in cases if c.startswith(lemma + ".")]
            ledger.check(f"lemma_{lemma}", len(hits) == 1, f"t^L attains {TARGET_LABELS[family]}, cases {hits}")
    excluded = cases & EXCLUDED_CASES
    ledger.check("excluded_lemma_cases", not excluded, f"realized {sorted(excluded)}")
    for case in sorted(excluded):
        ledger.finding(f"{name}: d-sequence realizes excluded case {case}")

    # units
    t_unit = None
    small_enough = p == 2 and exact_log(G.order, 2) is not None and 2 ** (G.order - 1) <= unit_cap
    if units or (units is None and small_enough):
        t_unit = unit_group_class(G, p, unit_cap)
        if t_direct_lower is not None:
            ledger.check("unit_class", t_unit == t_direct_lower - 1,
                         f"cl(U) = {t_unit}, t_L - 1 = {t_direct_lower - 1}")
        for family in TARGETS:
            ledger.check(
                f"unit_iff_{family}",
                (t_unit == unit_target_value(family, p, gprime_order)) == (family in families),
                f"cl(U) = {t_unit}, target {unit_target_value(family, p, gprime_order)}",
            )

    verdict = Verdict.CONSISTENT if all(c.passed for c in ledger.checks) else Verdict.INCONSISTENT
    logger.info(f"{name}: t^L = {t_upper}, matches {sorted(matches)}, verdict {verdict.value}")
    return AnalysisReport(
        name=name,
        order=G.order,
        p=p,
        n=ds.n,
        l=ds.exp_log,
        cl=series.cl,
        gate=gate.label,
        gprime_type=gprime_type_label(G, series),
        gamma3=gamma3_descriptor(shape),
        d_sequence=dict(sorted(ds.d.items())),
        tU_jennings=t_upper,
        tU_direct=t_direct_upper,
        tL_direct=t_direct_lower,
        unit_class=t_unit,
        matches=sorted(matches),
        verdict=verdict,
        oracle=oracle,
        literal_matches=sorted(literal),
        lemma_cases=sorted(cases),
        maximal_value=maximal_value(p, ds.n),
        almost_maximal_value=almost_maximal_value(p, ds.n),
        lower_dims=lower_dims,
        upper_dims=upper_dims,
        dimension_orders=product.orders(),
        checks=ledger.checks,
        findings=ledger.findings,
    )
