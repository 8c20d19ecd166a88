"""Interval lattices of subgroups, normality graphs, and garlands.

The interval Lat(bottom, top) is enumerated by breadth-first closure: for
each known member H, one representative per H-double-coset of the remaining
elements is adjoined and the generated subgroup recorded, until a fixpoint.
Double-coset representatives suffice because <H, h1*g*h2> = <H, g>; with a
representative per single coset this is the same fixpoint, so this realises
the coset-deduplicated scan.  Completeness follows by induction along any
maximal chain: each covering step K over H equals <H, g> for every
g in K \\ H.

Edges of the normality graph join every comparable pair with the smaller
subgroup normal in the larger (no Hasse restriction); garlands are the
connected components.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .config import DEFAULT_CAPS, Caps
from .etale import (
    AlgebraSpec,
    additive_span_check,
    select_all_units,
    select_norm_one,
    span_absorbs_units,
)
from .matrix_group import (
    GL,
    SL,
    AmbientGroup,
    HypothesisFailure,
    Subgroup,
    extend_subgroup,
    intersect_with_ambient,
    is_normal_in,
    normalizer_brute,
    normalizer_formula,
    torus_subgroup,
)


class LatticeError(Exception):
    pass


class NonExhaustiveError(LatticeError):
    pass


@dataclass
class IntervalLattice:
    bottom: Subgroup
    top: Subgroup
    ambient: AmbientGroup
    members: tuple[Subgroup, ...]  # sorted by (order, id)
    exhaustive: bool = True

    def __post_init__(self):
        self.by_id = {m.id: m for m in self.members}

    def member_orders(self) -> list[int]:
        return [m.order for m in self.members]

    def __len__(self) -> int:
        return len(self.members)


def _double_coset_reps(amb: AmbientGroup, h: Subgroup, domain: np.ndarray) -> list[int]:
    """One representative per H-double-coset meeting the domain, H's own excluded."""
    amb._ensure()
    rep_of = np.full(amb.order, -1, dtype=np.int32)
    right_reps: list[int] = []
    for x in domain:
        x = int(x)
        if rep_of[x] >= 0:
            continue
        right_reps.append(x)
        rep_of[amb.rmul(h.indices, x)] = x
    h_coset_rep = int(rep_of[amb.identity_index])
    consumed = np.zeros(amb.order, dtype=bool)
    reps: list[int] = []
    for x in right_reps:
        if x == h_coset_rep or consumed[x]:
            continue
        reps.append(x)
        consumed[rep_of[amb.lmul(x, h.indices)]] = True
    return reps


def enumerate_interval(
    bottom: Subgroup,
    ambient: AmbientGroup,
    within: Subgroup | None = None,
    max_members: int | None = None,
) -> IntervalLattice:
    """All subgroups H with bottom <= H <= top (top = within or the ambient)."""
    if bottom.ambient != ambient:
        raise LatticeError("bottom subgroup lives in a different ambient group")
    if within is None:
        top = Subgroup(ambient, np.arange(ambient.order, dtype=np.int32))
    else:
        top = within
        if not bottom.is_subset_of(top):
            raise LatticeError("bottom is not contained in the given top subgroup")
    domain = top.indices
    members: dict[str, Subgroup] = {bottom.id: bottom}
    queue = [bottom]
    exhaustive = True
    while queue:
        h = queue.pop(0)
        for g in _double_coset_reps(ambient, h, domain):
            k = extend_subgroup(h, g)
            known = members.get(k.id)
            if known is None:
                members[k.id] = k
                queue.append(k)
                if max_members is not None and len(members) > max_members:
                    exhaustive = False
                    queue.clear()
                    break
            elif not known.same_elements(k):  # digest collision guard
                raise LatticeError("subgroup id collision; widen the digest")
        if not exhaustive:
            break
    ordered = tuple(sorted(members.values(), key=lambda s: (s.order, s.id)))
    return IntervalLattice(bottom=bottom, top=top, ambient=ambient, members=ordered, exhaustive=exhaustive)


@dataclass
class NormalityGraph:
    vertices: tuple[str, ...]
    edges: tuple[tuple[str, str], ...]  # (smaller id, larger id), sorted
    bottom_id: str
    top_id: str


def normality_graph(lat: IntervalLattice) -> NormalityGraph:
    """Edge for every comparable pair whose smaller member is normal in the larger."""
    if not lat.exhaustive:
        raise NonExhaustiveError("normality graph requires an exhaustive lattice")
    edges = []
    ms = lat.members
    for i, a in enumerate(ms):
        for b in ms[i + 1 :]:
            if a.order >= b.order or b.order % a.order != 0:
                continue
            if not a.is_subset_of(b):
                continue
            if is_normal_in(a, b):
                edges.append((a.id, b.id))
    return NormalityGraph(
        vertices=tuple(m.id for m in ms),
        edges=tuple(sorted(edges)),
        bottom_id=lat.bottom.id,
        top_id=lat.top.id if lat.top.id in lat.by_id else lat.members[-1].id,
    )


class _UnionFind:
    def __init__(self, items: Sequence[str]):
        self.parent = {x: x for x in items}

    def find(self, x: str) -> str:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a: str, b: str) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[rb] = ra


@dataclass
class Garland:
    member_ids: tuple[str, ...]
    is_lower: bool
    is_upper: bool


def garlands(graph: NormalityGraph) -> list[Garland]:
    """Connected components of the normality graph, lower/upper flagged."""
    uf = _UnionFind(graph.vertices)
    for a, b in graph.edges:
        uf.union(a, b)
    comps: dict[str, list[str]] = {}
    for v in graph.vertices:
        comps.setdefault(uf.find(v), []).append(v)
    out = []
    for vs in comps.values():
        vs.sort()
        out.append(
            Garland(
                member_ids=tuple(vs),
                is_lower=graph.bottom_id in vs,
                is_upper=graph.top_id in vs,
            )
        )
    out.sort(key=lambda g: (not g.is_lower, not g.is_upper, g.member_ids))
    return out


# ---------------------------------------------------------------------------
# verification


def _is_f3_plus_f3(spec: AlgebraSpec) -> bool:
    return spec.base.q == 3 and spec.degrees == (1, 1)


def _split_family_over_f3(spec: AlgebraSpec) -> bool:
    """S = F_3 + ... + F_3 over F_3, the known small-field garland failures."""
    return spec.base.q == 3 and spec.n >= 2 and all(d == 1 for d in spec.degrees)


def record_hypotheses(spec: AlgebraSpec, ambient_kind: str) -> dict:
    """The hypothesis record attached to every verification report.

    units_span / norm_one_span are the additive-generation conditions for the
    torus and its determinant-one part; norm_one_absorbs_units is the weaker
    premise (every unit is a combination of norm-one units) that drives the
    GL-vs-SL normalizer intersection identity.  large_field_regime marks the
    range (q >= 13, characteristic not 2 or 3) in which the interval
    description of the lower garland is guaranteed; outside it the
    description can fail and failures are reported as expected.
    """
    units = additive_span_check(spec, select_all_units)
    norm_one = additive_span_check(spec, select_norm_one)
    q = spec.base.q
    f2_factors = sum(1 for d in spec.degrees if d == 1) if q == 2 else 0
    rec = {
        "units_span": units.spans,
        "norm_one_span": norm_one.spans,
        "norm_one_absorbs_units": span_absorbs_units(spec, select_norm_one),
        "not_f3_plus_f3": not _is_f3_plus_f3(spec),
        "at_most_two_f2_factors": f2_factors <= 2,
        "sum_of_fields": True,
        "large_field_regime": q >= 13 and spec.base.p not in (2, 3),
        "split_family_over_f3": _split_family_over_f3(spec),
        "ambient_span": units.spans if ambient_kind == GL else (units.spans and norm_one.spans),
    }
    return rec


def formula_expected(hyp: dict, ambient_kind: str) -> bool:
    """Whether the semidirect-product normalizer description is guaranteed."""
    if ambient_kind == GL:
        return hyp["units_span"]
    return hyp["units_span"] and hyp["norm_one_span"]


def garland_expected(hyp: dict, ambient_kind: str) -> bool:
    """Whether lower garland = interval is guaranteed for this case."""
    return formula_expected(hyp, ambient_kind) and hyp["large_field_regime"]


CONFIRMED = "confirmed"
EXPECTED_COUNTEREXAMPLE = "expected_counterexample"
UNEXPECTED_MISMATCH = "unexpected_mismatch"


def _verdict(ok: bool, must: bool) -> str:
    if ok:
        return CONFIRMED
    return UNEXPECTED_MISMATCH if must else EXPECTED_COUNTEREXAMPLE


@dataclass
class VerificationReport:
    case: dict
    hypotheses: dict
    torus_order: int
    normalizer_brute_order: int
    normalizer_formula_order: int
    formula_equals_brute: bool
    lattice_member_count: int
    lattice_orders: list[int]
    lower_garland: list[str]
    interval: list[str]
    equal: bool
    extra_members: list[dict]  # lower garland members outside the interval
    garland_count: int
    upper_garland_size: int
    idempotent_normalizer: bool
    normalizer_of_normalizer_order: int
    verdicts: dict
    overall: str
    exhaustive: bool = True
    timings_ms: dict = field(default_factory=dict)
    formula_closure_failure: dict | None = None

    def to_dict(self) -> dict:
        """Stable document; timings are deliberately excluded."""
        return {
            "case": self.case,
            "hypotheses": self.hypotheses,
            "torus_order": self.torus_order,
            "normalizers": {
                "brute_order": self.normalizer_brute_order,
                "formula_order": self.normalizer_formula_order,
                "formula_equals_brute": self.formula_equals_brute,
                "formula_closure_failure": self.formula_closure_failure,
            },
            "lattice": {
                "member_count": self.lattice_member_count,
                "orders": self.lattice_orders,
                "exhaustive": self.exhaustive,
            },
            "garland": {
                "lower": self.lower_garland,
                "interval": self.interval,
                "equal": self.equal,
                "extra_members": self.extra_members,
                "garland_count": self.garland_count,
                "upper_size": self.upper_garland_size,
            },
            "idempotence": {
                "holds": self.idempotent_normalizer,
                "normalizer_order": self.normalizer_brute_order,
                "normalizer_of_normalizer_order": self.normalizer_of_normalizer_order,
            },
            "verdicts": self.verdicts,
            "overall": self.overall,
        }


def verify_lower_garland(spec: AlgebraSpec, ambient: AmbientGroup, caps: Caps = DEFAULT_CAPS) -> VerificationReport:
    """Full verification for one algebra/ambient case.

    Computes the torus, both normalizers, the interval lattice, its
    normality graph and garlands, and checks (a) formula vs brute
    normalizer, (b) lower garland vs the interval up to the normalizer,
    (c) idempotence of the normalizer; every check records a verdict against
    what the hypothesis record predicts, so failures outside the guaranteed
    regime are reported, not asserted.
    """
    timings: dict[str, float] = {}
    t0 = time.perf_counter()
    hyp = record_hypotheses(spec, ambient.kind)
    torus = torus_subgroup(spec, ambient)
    timings["torus"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    brute = normalizer_brute(ambient, torus)
    closure_failure = None
    try:
        formula = normalizer_formula(spec, ambient)
        formula_order = formula.order
        formula_eq = formula.same_elements(brute)
    except HypothesisFailure as exc:
        closure_failure = exc.payload
        formula_order = 0
        formula_eq = False
    second = normalizer_brute(ambient, brute)
    idempotent = second.same_elements(brute)
    timings["normalizers"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    lat = enumerate_interval(torus, ambient)
    graph = normality_graph(lat)
    gls = garlands(graph)
    lower = next(g for g in gls if g.is_lower)
    upper = next(g for g in gls if g.is_upper)
    interval_ids = sorted(m.id for m in lat.members if m.is_subset_of(brute))
    equal = sorted(lower.member_ids) == interval_ids
    extra = [
        {"id": mid, "order": lat.by_id[mid].order}
        for mid in lower.member_ids
        if mid not in set(interval_ids)
    ]
    extra.sort(key=lambda d: (d["order"], d["id"]))
    timings["lattice"] = time.perf_counter() - t0

    verdicts = {
        "normalizer_formula": _verdict(formula_eq, formula_expected(hyp, ambient.kind)),
        "lower_garland": _verdict(equal, garland_expected(hyp, ambient.kind)),
        "idempotence": _verdict(idempotent, garland_expected(hyp, ambient.kind)),
    }
    if UNEXPECTED_MISMATCH in verdicts.values():
        overall = UNEXPECTED_MISMATCH
    elif EXPECTED_COUNTEREXAMPLE in verdicts.values():
        overall = EXPECTED_COUNTEREXAMPLE
    else:
        overall = CONFIRMED

    case = dict(spec.serialize())
    case["ambient"] = ambient.kind.lower()
    case["n"] = spec.n
    case["q"] = spec.base.q
    case["ambient_order"] = ambient.order
    return VerificationReport(
        case=case,
        hypotheses=hyp,
        torus_order=torus.order,
        normalizer_brute_order=brute.order,
        normalizer_formula_order=formula_order,
        formula_equals_brute=formula_eq,
        lattice_member_count=len(lat),
        lattice_orders=lat.member_orders(),
        lower_garland=sorted(lower.member_ids),
        interval=interval_ids,
        equal=equal,
        extra_members=extra,
        garland_count=len(gls),
        upper_garland_size=len(upper.member_ids),
        idempotent_normalizer=idempotent,
        normalizer_of_normalizer_order=second.order,
        verdicts=verdicts,
        overall=overall,
        exhaustive=lat.exhaustive,
        timings_ms={k: round(v * 1000.0, 3) for k, v in timings.items()},
        formula_closure_failure=closure_failure,
    )


@dataclass
class RestrictionReport:
    case: dict
    intersection_identity_holds: bool  # N_SL(T') == N_GL(T) cut down to SL
    equal: bool
    gl_interval_size: int
    sl_interval_size: int
    verdict: str

    def to_dict(self) -> dict:
        return {
            "case": self.case,
            "intersection_identity_holds": self.intersection_identity_holds,
            "equal": self.equal,
            "gl_interval_size": self.gl_interval_size,
            "sl_interval_size": self.sl_interval_size,
            "verdict": self.verdict,
        }


def interval_restriction_check(spec: AlgebraSpec, gl: AmbientGroup, sl: AmbientGroup) -> RestrictionReport:
    """Does cutting Lat(T, N_GL T) down to SL give exactly Lat(T', N_SL T')?

    Whenever the normalizer intersection identity holds the answer is yes;
    the identity itself is recorded so hypothesis failures explain mismatches.
    """
    if gl.kind != GL or sl.kind != SL or gl.field != sl.field or gl.n != sl.n:
        raise LatticeError("expected matching GL and SL ambients")
    torus = torus_subgroup(spec, gl)
    n_gl = normalizer_brute(gl, torus)
    torus_sl = torus_subgroup(spec, sl)
    n_sl = normalizer_brute(sl, torus_sl)
    identity_holds = intersect_with_ambient(n_gl, sl).same_elements(n_sl)

    l0 = enumerate_interval(torus, gl, within=n_gl)
    l0_sl = enumerate_interval(torus_sl, sl, within=n_sl)
    lhs = {intersect_with_ambient(h, sl).key_tuple() for h in l0.members}
    rhs = {h.key_tuple() for h in l0_sl.members}
    equal = lhs == rhs
    verdict = _verdict(equal, must=identity_holds)
    case = dict(spec.serialize())
    case["n"] = spec.n
    case["q"] = spec.base.q
    return RestrictionReport(
        case=case,
        intersection_identity_holds=identity_holds,
        equal=equal,
        gl_interval_size=len(l0),
        sl_interval_size=len(l0_sl),
        verdict=verdict,
    )
