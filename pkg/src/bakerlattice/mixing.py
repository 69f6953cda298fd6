"""Estimators for the five infinite-volume mixing notions.

Global-local correlations mu((F o T^n) g) for a tail-modeled site function F
and a finite weighted-strip local observable g reduce exactly to
sum_terms weight * height * (n-step site evolution of F)(strip site); the
brute-force itinerary enumeration provides an independent exact oracle for
the same quantity.  Global-global quantities are exact box averages of the
evolved product.  Everything stays rational when the inputs are rational;
rate extraction is the one float step.

Notions measured (t the time, V a box of the exhaustive family):
  M1  Av((F o T^t) G) -> Av(F) Av(G)           (average of the product exists)
  M2  mu_V((F o T^t) G) -> Av(F) Av(G)         (joint limit in t and V)
  M3  mu((F o T^t) g) -> 0 for mu(g) = 0
  M4  mu((F o T^t) g) -> Av(F) mu(g)
  M5  sup over g != 0 of |mu((F o T^t) g) - Av(F) mu(g)| / mu(|g|) -> 0
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm

import numpy as np

from .lattice import WalkDistribution
from .observables import (
    NON_CONVERGENT,
    Box,
    BoxFamily,
    CellObservable,
    PeriodicTail,
    SiteObservable,
    box_average,
    box_average_product,
    evolve_site,
)
from .phase import (
    DEFAULT_BUDGET,
    PartitionTable,
    Strip,
    cylinder_interval,
    push_strip,
)
from .rational import format_rational, to_jsonable


class NotComputableType:
    """Sentinel: the requested limit is outside the analytic tail models."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "NotComputable"


NOT_COMPUTABLE = NotComputableType()


@dataclass(frozen=True)
class LocalObservable:
    """Finite weighted combination of full-width strips."""

    terms: tuple[tuple[Strip, Fraction], ...]

    def __post_init__(self):
        if not self.terms:
            raise ValueError("local observable needs at least one strip term")
        dims = {len(strip.site) for strip, _ in self.terms}
        if len(dims) != 1:
            raise ValueError("strip sites must share a dimension")

    @property
    def dim(self) -> int:
        return len(self.terms[0][0].site)

    def mass(self) -> Fraction:
        return sum((w * s.height for s, w in self.terms), Fraction(0))

    def abs_mass(self) -> Fraction:
        return sum((abs(w) * s.height for s, w in self.terms), Fraction(0))

    @classmethod
    def unit_square(cls, site) -> "LocalObservable":
        return cls(((Strip.unit(site), Fraction(1)),))

    @classmethod
    def from_strip(cls, strip: Strip, weight=Fraction(1)) -> "LocalObservable":
        return cls(((strip, Fraction(weight)),))


# ---------------------------------------------------------------------------
# correlations


def correlate_global_local(
    f: SiteObservable, g: LocalObservable, p: WalkDistribution, n: int
):
    """mu((F o T^n) g), exactly, through the n-step site evolution of f.

    The integral of a stable site function over a full-width strip only sees
    the strip's site and height, so the correlation is the weighted sum of
    the evolved values at the strip sites.
    """
    ev = evolve_site(f, p, n)
    return sum((w * s.height * ev.value(s.site) for s, w in g.terms), Fraction(0))


def m5_gap(
    f: SiteObservable,
    p: WalkDistribution,
    n: int,
    m_offset: int = 0,
    family: BoxFamily | None = None,
):
    """Exact sup over unit-mass strip observables of the M4 deviation at time n.

    The supremum over weighted strips of |mu((F o T^n) g) - Av(F) mu(g)| /
    mu(|g|) is attained on single strips and equals
    sup_alpha |(evolved f)(alpha) - Av(f)|, which the tail model makes exact.
    For a depth-m observable pair the gap reported at time n is the depth-0
    gap at n - 2m (m forward steps absorb the contracting digits of F, m
    backward steps those of g).
    """
    if family is None:
        family = BoxFamily.translation_invariant(f.dim)
    if m_offset < 0:
        raise ValueError("depth offset must be nonnegative")
    if n < 2 * m_offset:
        raise ValueError(f"time {n} is below the depth offset 2m = {2 * m_offset}")
    av = f.analytic_average(family)
    if av is None or av is NON_CONVERGENT:
        raise ValueError("M5 gap needs an observable with an analytic average")
    return evolve_site(f, p, n - 2 * m_offset).sup_deviation(av)


def m2_entry(
    f: SiteObservable, g: SiteObservable, p: WalkDistribution, n: int, box: Box
):
    """mu_V((F o T^n) G) over V = box x [0,1)^2, exactly."""
    return box_average_product(evolve_site(f, p, n), g, box)


def m1_limit(f: SiteObservable, g: SiteObservable, p: WalkDistribution, n: int):
    """Av((F o T^n) G) for periodic F, when the product average factorizes.

    Periodic F times periodic G: exact mean over the joint period cell of
    (evolved f) * g.  G constant outside a box: the localized part washes
    out, leaving constant * Av(evolved f).  Anything else is NOT_COMPUTABLE
    (a statement about the tail models, not a mixing failure).
    """
    if not isinstance(f.tail, PeriodicTail):
        raise ValueError("M1 limit needs a periodic first observable")
    ev = evolve_site(f, p, n)
    family = BoxFamily.translation_invariant(f.dim)
    gt = g.tail
    if isinstance(gt, PeriodicTail):
        joint = Box(
            tuple(0 for _ in range(f.dim)),
            tuple(lcm(ev.tail.period[i], gt.period[i]) - 1 for i in range(f.dim)),
        )
        return box_average_product(ev, g, joint)
    if hasattr(gt, "constant"):
        return gt.constant * ev.analytic_average(family)
    if hasattr(gt, "constants"):
        values = set(gt.constants.values())
        if len(values) == 1:
            return next(iter(values)) * ev.analytic_average(family)
    return NOT_COMPUTABLE


def itinerary_oracle(
    F,
    Q: Strip,
    p: WalkDistribution,
    n: int,
    budget: int = DEFAULT_BUDGET,
    table: PartitionTable | None = None,
):
    """Ground truth mu((F o T^n) 1_Q) by exact enumeration of the N^n strips.

    Accepts a site observable or a depth-m cell observable; for the latter
    each image strip is integrated cell by cell (forward digits weight the
    full-width coordinate by cylinder widths, backward digits intersect the
    strip interval with contracting cylinders).
    """
    if table is None:
        table = PartitionTable.from_walk(p)
    pushed = push_strip(Q, p, n, budget=budget, table=table)
    if isinstance(F, SiteObservable):
        return sum((c.height * F.value(c.site) for c in pushed.components), Fraction(0))
    if not isinstance(F, CellObservable):
        raise TypeError("oracle needs a site observable or a cell observable")
    m = F.depth
    if p.size ** (n + 2 * m) > budget:
        raise ValueError("cell oracle would exceed the enumeration budget")
    by_site: dict = {}
    for (site, word), value in F.values.items():
        by_site.setdefault(site, []).append((word[:m], word[m:], value - F.default))
    total = F.default * pushed.total_height()
    for comp in pushed.components:
        for back, fwd, excess in by_site.get(comp.site, ()):
            width = Fraction(1)
            for d in fwd:
                width *= table.cell_weight(d - 1)
            c_lo, c_hi = cylinder_interval(table, back)
            overlap = min(comp.hi, c_hi) - max(comp.lo, c_lo)
            if overlap > 0:
                total += excess * width * overlap
    return total


# ---------------------------------------------------------------------------
# reports


@dataclass(eq=False)
class CorrelationReport:
    """Series of one mixing estimator plus everything needed to reproduce it."""

    kind: str  # M1 | M2 | M3 | M4 | M5
    series: dict  # M2: (n, r) -> value; others: n -> value
    target: object
    gap_series: dict = field(default_factory=dict)
    metadata: dict = field(default_factory=dict)
    eps_scan: dict = field(default_factory=dict)

    def deviations(self) -> dict:
        if self.target is None or self.target is NON_CONVERGENT:
            return {}
        return {k: abs(v - self.target) for k, v in self.series.items()}

    def to_json_dict(self) -> dict:
        return to_jsonable(
            {
                "kind": self.kind,
                "target": None if self.target is NON_CONVERGENT else self.target,
                "series": {_key_str(k): v for k, v in sorted(self.series.items())},
                "gap_series": {_key_str(k): v for k, v in sorted(self.gap_series.items())},
                "eps_scan": self.eps_scan,
                "metadata": self.metadata,
            }
        )

    def write_csv(self, path):
        devs = self.deviations()
        with open(path, "w", newline="") as fh:
            for key, value in self.metadata.items():
                if isinstance(value, (str, int, float)):
                    fh.write(f"# {key}={value}\n")
            writer = csv.writer(fh)
            if self.kind == "M5":
                writer.writerow(["n", "gap", "target_zero"])
                for n, v in sorted(self.series.items()):
                    writer.writerow([n, _cell(v), 0])
            elif self.kind == "M2":
                writer.writerow(["n", "r", "value", "target", "deviation"])
                for (n, r), v in sorted(self.series.items()):
                    writer.writerow([n, r, _cell(v), _cell(self.target), _cell(devs.get((n, r)))])
            else:
                writer.writerow(["n", "value", "target", "deviation"])
                for n, v in sorted(self.series.items()):
                    writer.writerow([n, _cell(v), _cell(self.target), _cell(devs.get(n))])


def _key_str(key) -> str:
    if isinstance(key, tuple):
        return ",".join(str(k) for k in key)
    return str(key)


def _cell(value):
    if value is None:
        return ""
    if value is NON_CONVERGENT:
        return "NonConvergent"
    if isinstance(value, (Fraction, int)):
        return format_rational(Fraction(value))
    return repr(float(value))


def m5_report(
    f: SiteObservable,
    p: WalkDistribution,
    n_list,
    family: BoxFamily | None = None,
    m_offset: int = 0,
    metadata: dict | None = None,
) -> CorrelationReport:
    series = {int(n): m5_gap(f, p, int(n), m_offset, family) for n in n_list}
    return CorrelationReport(
        "M5",
        series,
        Fraction(0),
        gap_series=dict(series),
        metadata={"m_offset": m_offset, **(metadata or {})},
    )


def m4_report(
    f: SiteObservable,
    g: LocalObservable,
    p: WalkDistribution,
    n_list,
    family: BoxFamily | None = None,
    metadata: dict | None = None,
) -> CorrelationReport:
    if family is None:
        family = BoxFamily.translation_invariant(f.dim)
    av = f.analytic_average(family)
    target = None if av is NON_CONVERGENT else av * g.mass()
    series = {int(n): correlate_global_local(f, g, p, int(n)) for n in n_list}
    gaps = {}
    if av is not NON_CONVERGENT and av is not None:
        gaps = {n: m5_gap(f, p, n, 0, family) * g.abs_mass() for n in series}
    return CorrelationReport("M4", series, target, gap_series=gaps, metadata=metadata or {})


def m2_table(
    f: SiteObservable,
    g: SiteObservable,
    p: WalkDistribution,
    n_list,
    r_list,
    family: BoxFamily | None = None,
    eps_schedule=(Fraction(1, 10), Fraction(1, 100), Fraction(1, 1000)),
    metadata: dict | None = None,
) -> CorrelationReport:
    """Matrix of box averages mu_V((F o T^n) G) plus the eps-M certificate scan.

    For each eps of the schedule, the scan looks for the smallest threshold M
    such that every computed entry with n >= M and box volume >= M deviates
    from Av(F) Av(G) by less than eps; ``None`` records that no threshold
    within the scanned grid certifies the joint limit (which is how the
    centered-family sign counterexample shows up).
    """
    if family is None:
        family = BoxFamily.translation_invariant(f.dim)
    av_f = f.analytic_average(family)
    av_g = g.analytic_average(family)
    have_target = not (
        av_f is None or av_g is None or av_f is NON_CONVERGENT or av_g is NON_CONVERGENT
    )
    target = av_f * av_g if have_target else NON_CONVERGENT
    series = {}
    for n in sorted(int(n) for n in n_list):
        ev = evolve_site(f, p, n)
        for r in sorted(int(r) for r in r_list):
            series[(n, r)] = box_average_product(ev, g, Box.centered(origin_of(f.dim), r))
    scan = {}
    if have_target:
        volumes = {(2 * r + 1) ** f.dim for _, r in series}
        thresholds = sorted({n for n, _ in series} | volumes)
        for eps in eps_schedule:
            found = None
            for M in thresholds:
                qualifying = [
                    abs(v - target)
                    for (n, r), v in series.items()
                    if n >= M and (2 * r + 1) ** f.dim >= M
                ]
                if qualifying and all(d < eps for d in qualifying):
                    found = M
                    break
            scan[format_rational(Fraction(eps))] = found
    return CorrelationReport(
        "M2", series, target, metadata=metadata or {}, eps_scan=scan
    )


def origin_of(dim: int) -> tuple[int, ...]:
    return (0,) * dim


def m1_report(
    f: SiteObservable,
    g: SiteObservable,
    p: WalkDistribution,
    n_list,
    metadata: dict | None = None,
) -> CorrelationReport:
    family = BoxFamily.translation_invariant(f.dim)
    av_f = f.analytic_average(family)
    av_g = g.analytic_average(family)
    target = None
    if av_f not in (None, NON_CONVERGENT) and av_g not in (None, NON_CONVERGENT):
        target = av_f * av_g
    series = {int(n): m1_limit(f, g, p, int(n)) for n in n_list}
    if any(v is NOT_COMPUTABLE for v in series.values()):
        raise ValueError("M1 series not computable for these tail models")
    return CorrelationReport("M1", series, target, metadata=metadata or {})


# ---------------------------------------------------------------------------
# rate extraction


@dataclass(frozen=True)
class RateFit:
    """Least-squares decay rates of |value - target| in n and in log n."""

    exponential_rate: float | None  # value ~ exp(-rate * n)
    polynomial_exponent: float | None  # value ~ n^(-exponent)
    floor: bool
    points_used: int

    FLOOR = 1e-14


def rate_profile(series, target=Fraction(0)) -> RateFit:
    """Fit decay rates to a series n -> value against its target.

    Accepts a plain mapping or a CorrelationReport (whose own target is then
    used).  Values within 1e-14 of the target are treated as numerical
    floor; a series entirely at floor gets the floor flag instead of rates.
    """
    if isinstance(series, CorrelationReport):
        if series.kind == "M2":
            raise ValueError("rate fitting needs a single-index series, not an M2 matrix")
        target = series.target if series.target is not None else target
        series = series.series
    if len(series) < 4:
        raise ValueError("rate fitting needs at least 4 points")
    ns, devs = [], []
    for n, v in sorted(series.items()):
        d = abs(float(v) - float(target))
        if d > RateFit.FLOOR:
            ns.append(float(n))
            devs.append(d)
    if len(ns) < 2:
        return RateFit(None, None, True, len(ns))
    logs = np.log(devs)
    exp_slope = np.polyfit(ns, logs, 1)[0]
    poly_slope = np.polyfit(np.log(ns), logs, 1)[0]
    return RateFit(-float(exp_slope), -float(poly_slope), False, len(ns))


# ---------------------------------------------------------------------------
# implication audit: M5 => M4 => M3, and the M5 => M2 route


@dataclass(frozen=True, eq=False)
class M4AuditRow:
    observable: int
    local: int
    n: int
    deviation: object
    bound: object
    zero_mean: bool

    @property
    def ok(self) -> bool:
        return self.deviation <= self.bound


@dataclass(frozen=True, eq=False)
class M2AuditRow:
    observable: int
    other: int
    n: int
    r: int
    term1: object  # |Av F| * |mu_V(G) - Av G|
    term2: object  # decomposition defect (identically 0 for box families)
    term3: object  # gap * mu_V(|G|)
    measured: object

    @property
    def bound(self):
        return self.term1 + self.term2 + self.term3

    @property
    def ok(self) -> bool:
        return self.measured <= self.bound


@dataclass(eq=False)
class AuditRecord:
    m4_rows: tuple
    m2_rows: tuple
    metadata: dict

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.m4_rows) and all(r.ok for r in self.m2_rows)

    def write_csv(self, path):
        with open(path, "w", newline="") as fh:
            for key, value in self.metadata.items():
                if isinstance(value, (str, int, float)):
                    fh.write(f"# {key}={value}\n")
            writer = csv.writer(fh)
            writer.writerow(["n", "r", "term1", "term2", "term3", "bound", "measured"])
            for row in self.m2_rows:
                writer.writerow(
                    [
                        row.n,
                        row.r,
                        _cell(row.term1),
                        _cell(row.term2),
                        _cell(row.term3),
                        _cell(row.bound),
                        _cell(row.measured),
                    ]
                )

    def to_json_dict(self) -> dict:
        return to_jsonable(
            {
                "ok": self.ok,
                "m4": [
                    {
                        "observable": r.observable,
                        "local": r.local,
                        "n": r.n,
                        "deviation": r.deviation,
                        "bound": r.bound,
                        "zero_mean": r.zero_mean,
                        "ok": r.ok,
                    }
                    for r in self.m4_rows
                ],
                "m2": [
                    {
                        "observable": r.observable,
                        "other": r.other,
                        "n": r.n,
                        "r": r.r,
                        "term1": r.term1,
                        "term2": r.term2,
                        "term3": r.term3,
                        "bound": r.bound,
                        "measured": r.measured,
                        "ok": r.ok,
                    }
                    for r in self.m2_rows
                ],
                "metadata": self.metadata,
            }
        )


def implication_audit(
    p: WalkDistribution,
    globals_: list[SiteObservable],
    locals_: list[LocalObservable],
    n_list,
    r_list,
    family: BoxFamily | None = None,
    metadata: dict | None = None,
) -> AuditRecord:
    """Numerical audit of the implication chain on a suite of observables.

    M5 bounds M4 (and M3 for zero-mean locals): every correlation deviation
    must sit below gap * mu(|g|).  The M5-to-M2 route decomposes G over the
    squares of the box: with g_alpha = G 1_{square alpha} the deviation
    |mu_V((F o T^n) G) - Av F Av G| is dominated by
    |Av F| |mu_V(G) - Av G|  +  0  +  gap * mu_V(|G|),
    the middle term being exactly zero here because the decomposition is
    exact on every box.  All comparisons are exact for rational inputs.
    """
    if family is None:
        family = BoxFamily.translation_invariant(p.dim)
    n_list = sorted(int(n) for n in n_list)
    r_list = sorted(int(r) for r in r_list)
    m4_rows = []
    m2_rows = []
    for fi, f in enumerate(globals_):
        av_f = f.analytic_average(family)
        if av_f is None or av_f is NON_CONVERGENT:
            continue
        gaps = {n: m5_gap(f, p, n, 0, family) for n in n_list}
        for gi, g in enumerate(locals_):
            for n in n_list:
                dev = abs(correlate_global_local(f, g, p, n) - av_f * g.mass())
                m4_rows.append(
                    M4AuditRow(fi, gi, n, dev, gaps[n] * g.abs_mass(), g.mass() == 0)
                )
        for gi, G in enumerate(globals_):
            av_g = G.analytic_average(family)
            if av_g is None or av_g is NON_CONVERGENT:
                continue
            abs_G = _absolute_observable(G)
            for n in n_list:
                ev = evolve_site(f, p, n)
                for r in r_list:
                    box = Box.centered((0,) * p.dim, r)
                    entry = box_average_product(ev, G, box)
                    term1 = abs(av_f) * abs(box_average(G, box) - av_g)
                    term3 = gaps[n] * box_average(abs_G, box)
                    m2_rows.append(
                        M2AuditRow(
                            fi,
                            gi,
                            n,
                            r,
                            term1,
                            Fraction(0),
                            term3,
                            abs(entry - av_f * av_g),
                        )
                    )
    return AuditRecord(tuple(m4_rows), tuple(m2_rows), metadata or {})


def _absolute_observable(g: SiteObservable) -> SiteObservable:
    """|G| with the same tail structure."""
    t = g.tail
    if isinstance(t, PeriodicTail):
        return SiteObservable(g.dim, PeriodicTail(t.period, {k: abs(v) for k, v in t.table.items()}))
    if hasattr(t, "constants"):
        return SiteObservable(
            g.dim,
            type(t)(
                {k: abs(v) for k, v in t.constants.items()},
                t.box,
                {k: abs(v) for k, v in t.table.items()},
            ),
        )
    if hasattr(t, "constant"):
        return SiteObservable(
            g.dim,
            type(t)(abs(t.constant), t.box, {k: abs(v) for k, v in t.table.items()}),
        )
    raise ValueError("cannot take the absolute value of a raw evaluator")
