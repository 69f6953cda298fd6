"""Global and local observables with exactly computable infinite-volume data.

A global observable here is a bounded site function carrying a *tail model*
that pins down its behavior outside a finite window: periodic, constant
outside a box, or constant per orthant outside a box.  The tail model is
what makes suprema, box averages and infinite-volume averages exact instead
of sampled.  Cell observables refine site functions by a finite amount of
expanding/contracting coordinate structure; they reduce exactly to site
functions after composing with enough forward steps.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Callable, Mapping

import numpy as np

from .lattice import (
    Site,
    WalkDistribution,
    convolution_power,
    origin,
)
from .phase import DEFAULT_BUDGET, BudgetExceededError, PartitionTable, PhasePoint
from .rational import format_rational, parse_rational


class NonConvergentType:
    """Sentinel: the infinite-volume average does not exist for this family."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "NonConvergent"


NON_CONVERGENT = NonConvergentType()


# ---------------------------------------------------------------------------
# boxes and box families


@dataclass(frozen=True)
class Box:
    """Product of integer intervals [lo_i, hi_i] (inclusive)."""

    lo: Site
    hi: Site

    def __post_init__(self):
        if len(self.lo) != len(self.hi):
            raise ValueError("box bounds must share a dimension")
        if any(a > b for a, b in zip(self.lo, self.hi)):
            raise ValueError(f"empty box: lo={self.lo}, hi={self.hi}")

    @classmethod
    def centered(cls, center, radius: int) -> "Box":
        if radius < 0:
            raise ValueError("radius must be nonnegative")
        c = tuple(int(v) for v in center)
        return cls(tuple(v - radius for v in c), tuple(v + radius for v in c))

    @property
    def dim(self) -> int:
        return len(self.lo)

    @property
    def size(self) -> int:
        out = 1
        for a, b in zip(self.lo, self.hi):
            out *= b - a + 1
        return out

    def contains(self, site: Site) -> bool:
        return all(a <= s <= b for a, s, b in zip(self.lo, site, self.hi))

    def sites(self):
        return itertools.product(*(range(a, b + 1) for a, b in zip(self.lo, self.hi)))

    def dilate(self, amount: int) -> "Box":
        return Box(tuple(a - amount for a in self.lo), tuple(b + amount for b in self.hi))

    def hull(self, other: "Box") -> "Box":
        return Box(
            tuple(min(a, c) for a, c in zip(self.lo, other.lo)),
            tuple(max(b, d) for b, d in zip(self.hi, other.hi)),
        )

    @classmethod
    def spanning(cls, sites, dim: int) -> "Box":
        pts = list(sites)
        if not pts:
            return cls(origin(dim), origin(dim))
        return cls(
            tuple(min(s[i] for s in pts) for i in range(dim)),
            tuple(max(s[i] for s in pts) for i in range(dim)),
        )


TRANSLATION_INVARIANT = "translationInvariant"
CENTERED_ONLY = "centeredOnly"


@dataclass(frozen=True)
class BoxFamily:
    """Exhaustive family of boxes determining the infinite-volume limit.

    The translation-invariant family contains boxes around every center; the
    centered-only family restricts to boxes around the origin, which accepts
    more observables as averageable but is blind to where mass sits.
    """

    dim: int
    kind: str

    def __post_init__(self):
        if self.kind not in (TRANSLATION_INVARIANT, CENTERED_ONLY):
            raise ValueError(f"unknown family kind {self.kind!r}")

    @classmethod
    def translation_invariant(cls, dim: int) -> "BoxFamily":
        return cls(dim, TRANSLATION_INVARIANT)

    @classmethod
    def centered_only(cls, dim: int) -> "BoxFamily":
        return cls(dim, CENTERED_ONLY)

    @property
    def translation_invariant_p(self) -> bool:
        return self.kind == TRANSLATION_INVARIANT

    def centers(self, extra_random: int = 8, seed: int = 0) -> list[Site]:
        """Sample centers for uniformity diagnostics.

        Centered-only: just the origin.  Translation-invariant: the origin,
        axis points at geometric distances up to 10^3, and a few seeded
        random centers in the same range.
        """
        if self.kind == CENTERED_ONLY:
            return [origin(self.dim)]
        centers = {origin(self.dim)}
        for axis in range(self.dim):
            for mag in (1, 10, 100, 1000):
                for sign in (1, -1):
                    c = [0] * self.dim
                    c[axis] = sign * mag
                    centers.add(tuple(c))
        rng = np.random.default_rng(seed)
        for _ in range(extra_random):
            centers.add(tuple(int(v) for v in rng.integers(-1000, 1001, size=self.dim)))
        return sorted(centers)


# ---------------------------------------------------------------------------
# tail models and site observables


@dataclass(frozen=True)
class PeriodicTail:
    period: tuple[int, ...]
    table: dict  # residue tuple -> value

    def __post_init__(self):
        if any(l < 1 for l in self.period):
            raise ValueError("periods must be positive")
        cell = itertools.product(*(range(l) for l in self.period))
        missing = [r for r in cell if r not in self.table]
        if missing:
            raise ValueError(f"periodic table misses residues, e.g. {missing[0]}")


@dataclass(frozen=True)
class ConstantOutsideBoxTail:
    constant: object
    box: Box
    table: dict  # site -> value, keys inside box

    def __post_init__(self):
        for s in self.table:
            if not self.box.contains(s):
                raise ValueError(f"table site {s} outside the declared box")


@dataclass(frozen=True)
class OrthantTail:
    """Constant on each orthant outside the box; coordinate 0 counts as positive."""

    constants: dict  # sign tuple in {-1,+1}^d -> value
    box: Box
    table: dict

    def __post_init__(self):
        d = self.box.dim
        for signs in itertools.product((-1, 1), repeat=d):
            if signs not in self.constants:
                raise ValueError(f"missing orthant constant for signs {signs}")
        for s in self.table:
            if not self.box.contains(s):
                raise ValueError(f"table site {s} outside the declared box")


@dataclass(frozen=True)
class CustomTail:
    """Raw evaluator with a declared bound; averages are only estimated."""

    evaluator: Callable
    declared_bound: float


def _signs(site: Site) -> tuple[int, ...]:
    return tuple(1 if c >= 0 else -1 for c in site)


@dataclass(frozen=True)
class SiteObservable:
    dim: int
    tail: object

    def value(self, site):
        site = tuple(int(c) for c in site)
        t = self.tail
        if isinstance(t, PeriodicTail):
            return t.table[tuple(c % l for c, l in zip(site, t.period))]
        if isinstance(t, ConstantOutsideBoxTail):
            return t.table.get(site, t.constant)
        if isinstance(t, OrthantTail):
            return t.table.get(site, t.constants[_signs(site)])
        return t.evaluator(site)

    def bound(self):
        t = self.tail
        if isinstance(t, PeriodicTail):
            return max(abs(v) for v in t.table.values())
        if isinstance(t, ConstantOutsideBoxTail):
            vals = [abs(t.constant)] + [abs(v) for v in t.table.values()]
            return max(vals)
        if isinstance(t, OrthantTail):
            vals = [abs(v) for v in t.constants.values()]
            vals += [abs(v) for v in t.table.values()]
            return max(vals)
        return t.declared_bound

    def analytic_average(self, family: BoxFamily):
        """Exact infinite-volume average, NON_CONVERGENT, or None (no analytic path)."""
        t = self.tail
        if isinstance(t, PeriodicTail):
            cell = 1
            for l in t.period:
                cell *= l
            return sum(t.table.values()) / Fraction(cell)
        if isinstance(t, ConstantOutsideBoxTail):
            return t.constant
        if isinstance(t, OrthantTail):
            values = set(t.constants.values())
            if len(values) == 1:
                return next(iter(values))
            if family.translation_invariant_p:
                return NON_CONVERGENT
            # centered boxes weight every orthant equally in the limit
            return sum(t.constants.values()) / Fraction(2**self.dim)
        return None

    def sup_deviation(self, center):
        """Exact sup over all sites of |value - center|; needs a tail model."""
        t = self.tail
        if isinstance(t, PeriodicTail):
            return max(abs(v - center) for v in t.table.values())
        if isinstance(t, ConstantOutsideBoxTail):
            devs = [abs(t.constant - center)] + [abs(v - center) for v in t.table.values()]
            return max(devs)
        if isinstance(t, OrthantTail):
            devs = [abs(v - center) for v in t.constants.values()]
            devs += [abs(v - center) for v in t.table.values()]
            return max(devs)
        raise ValueError("sup deviation needs a tail model, not a raw evaluator")


def periodic_observable(period, table: Mapping) -> SiteObservable:
    period = tuple(int(l) for l in period)
    clean = {}
    for residue, v in table.items():
        key = (residue,) if isinstance(residue, int) else tuple(int(c) for c in residue)
        clean[tuple(c % l for c, l in zip(key, period))] = parse_rational(v) if not isinstance(v, float) else v
    return SiteObservable(len(period), PeriodicTail(period, clean))


def constant_observable(dim: int, value) -> SiteObservable:
    value = parse_rational(value) if not isinstance(value, float) else value
    return SiteObservable(dim, PeriodicTail((1,) * dim, {origin(dim): value}))


def localized_observable(dim: int, constant, box: Box, table: Mapping) -> SiteObservable:
    constant = parse_rational(constant) if not isinstance(constant, float) else constant
    clean = {tuple(int(c) for c in s): (parse_rational(v) if not isinstance(v, float) else v) for s, v in table.items()}
    return SiteObservable(dim, ConstantOutsideBoxTail(constant, box, clean))


def orthant_observable(dim: int, constants: Mapping, box: Box, table: Mapping) -> SiteObservable:
    consts = {tuple(s): parse_rational(v) if not isinstance(v, float) else v for s, v in constants.items()}
    clean = {tuple(int(c) for c in s): (parse_rational(v) if not isinstance(v, float) else v) for s, v in table.items()}
    return SiteObservable(dim, OrthantTail(consts, box, clean))


def sign_observable() -> SiteObservable:
    """The 1d sign function on sites: -1 for alpha < 0, +1 for alpha >= 0."""
    return orthant_observable(
        1,
        {(1,): Fraction(1), (-1,): Fraction(-1)},
        Box((0,), (0,)),
        {(0,): Fraction(1)},
    )


def custom_observable(dim: int, evaluator: Callable, bound: float) -> SiteObservable:
    return SiteObservable(dim, CustomTail(evaluator, bound))


# ---------------------------------------------------------------------------
# box sums and averages


def _orthant_form(obs: SiteObservable):
    """(window_lo, window_hi, c_neg, c_pos) for 1d eventually-constant tails."""
    t = obs.tail
    if isinstance(t, ConstantOutsideBoxTail):
        return t.box.lo[0], t.box.hi[0], t.constant, t.constant
    if isinstance(t, OrthantTail):
        # widen so that everything right of the window is a nonnegative site
        return min(t.box.lo[0], 0), max(t.box.hi[0], -1), t.constants[(-1,)], t.constants[(1,)]
    return None


def _box_sum_1d_tail(forms, box: Box):
    lo, hi = box.lo[0], box.hi[0]
    wlo = min(f[0] for f in forms)
    whi = max(f[1] for f in forms)
    neg_count = max(0, min(hi, wlo - 1) - lo + 1)
    pos_count = max(0, hi - max(lo, whi + 1) + 1)
    c_neg = 1
    c_pos = 1
    for f in forms:
        c_neg *= f[2]
        c_pos *= f[3]
    return c_neg * neg_count + c_pos * pos_count, max(wlo, lo), min(whi, hi)


def _product_value(observables, site):
    out = 1
    for obs in observables:
        out *= obs.value(site)
    return out


def _residue_count(rho: int, l: int, a: int, b: int) -> int:
    """Number of integers in [a, b] congruent to rho mod l."""
    return (b - rho) // l + (rho - a) // l + 1


def _box_sum(observables, box: Box):
    """Exact sum over the box of the pointwise product of the observables."""
    if box.dim == 1:
        forms = [_orthant_form(o) for o in observables]
        if all(f is not None for f in forms):
            total, wlo, whi = _box_sum_1d_tail(forms, box)
            for a in range(wlo, whi + 1):
                total += _product_value(observables, (a,))
            return total
    if all(isinstance(o.tail, PeriodicTail) for o in observables):
        joint = tuple(
            lcm(*(o.tail.period[i] for o in observables)) for i in range(box.dim)
        )
        total = 0
        for residue in itertools.product(*(range(l) for l in joint)):
            count = 1
            for rho, l, a, b in zip(residue, joint, box.lo, box.hi):
                count *= _residue_count(rho, l, a, b)
                if count == 0:
                    break
            if count:
                total += _product_value(observables, residue) * count
        return total
    total = 0
    for site in box.sites():
        total += _product_value(observables, site)
    return total


def box_average(f: SiteObservable, box: Box):
    """(2r+1)^-d-normalized sum of f over the box; exact for exact tables."""
    return _box_sum([f], box) / Fraction(box.size)


def box_average_product(f: SiteObservable, g: SiteObservable, box: Box):
    """Normalized box sum of the pointwise product f*g."""
    return _box_sum([f, g], box) / Fraction(box.size)


# ---------------------------------------------------------------------------
# infinite-volume average estimation


@dataclass(frozen=True)
class AverageEstimate:
    """Result of an infinite-volume average computation.

    ``value`` is exact whenever the tail model admits an analytic limit for
    the chosen family.  ``uniformity_defect`` is the measured max deviation
    of box averages from the value over the sampled centers at the largest
    radius; when the limit does not exist it records the spread (max minus
    min) across centers instead, which is the witness of nonconvergence.
    """

    value: object
    uniformity_defect: object
    radii_used: tuple[int, ...]
    non_convergent: bool = False


def estimate_average(
    f: SiteObservable,
    family: BoxFamily,
    radii,
    extra_random_centers: int = 8,
    seed: int = 0,
) -> AverageEstimate:
    radii = tuple(sorted(int(r) for r in radii))
    if not radii:
        raise ValueError("need a nonempty radii schedule")
    r_max = radii[-1]
    centers = family.centers(extra_random_centers, seed)
    analytic = f.analytic_average(family)

    samples = [box_average(f, Box.centered(c, r_max)) for c in centers]
    if analytic is NON_CONVERGENT:
        spread = max(samples) - min(samples)
        return AverageEstimate(NON_CONVERGENT, spread, radii, non_convergent=True)
    if analytic is not None:
        defect = max(abs(s - analytic) for s in samples)
        return AverageEstimate(analytic, defect, radii)

    # no analytic path (raw evaluator): extrapolate the centered sequence
    seq = [float(box_average(f, Box.centered(origin(f.dim), r))) for r in radii]
    value = _aitken_limit(seq)
    defect = max(abs(float(s) - value) for s in samples)
    return AverageEstimate(value, defect, radii)


def _aitken_limit(seq: list[float]) -> float:
    if len(seq) < 3:
        return seq[-1]
    x0, x1, x2 = seq[-3], seq[-2], seq[-1]
    denom = x2 - 2 * x1 + x0
    if abs(denom) < 1e-300:
        return x2
    return x2 - (x2 - x1) ** 2 / denom


# ---------------------------------------------------------------------------
# cell observables and the stable reduction


@dataclass(frozen=True)
class CellObservable:
    """Function of (site, m backward digits, m forward digits).

    Words are tuples of 1-based cell indices: the first ``depth`` entries are
    the contracting-coordinate digits (most recent arrival first), the last
    ``depth`` the expanding-coordinate digits (next departure first).  Keys
    absent from ``values`` take ``default``.
    """

    dim: int
    depth: int
    values: dict  # (site, word) -> value
    default: Fraction = Fraction(0)

    def __post_init__(self):
        for (site, word), _ in self.values.items():
            if len(word) != 2 * self.depth:
                raise ValueError(
                    f"word {word} has length {len(word)}, expected {2 * self.depth}"
                )
            if any(d < 1 for d in word):
                raise ValueError("digits are 1-based cell indices")

    def bound(self):
        vals = [abs(self.default)] + [abs(v) for v in self.values.values()]
        return max(vals)

    def scale(self, factor) -> "CellObservable":
        return CellObservable(
            self.dim,
            self.depth,
            {k: factor * v for k, v in self.values.items()},
            factor * self.default,
        )

    def add(self, other: "CellObservable") -> "CellObservable":
        if (self.dim, self.depth) != (other.dim, other.depth):
            raise ValueError("can only add cell observables of equal dimension and depth")
        keys = set(self.values) | set(other.values)
        merged = {}
        for k in keys:
            v = self.values.get(k, self.default) + other.values.get(k, other.default)
            merged[k] = v
        return CellObservable(self.dim, self.depth, merged, self.default + other.default)

    def evaluate(self, x: PhasePoint, p: WalkDistribution) -> object:
        """Value at a phase point, by extracting digits from both coordinates."""
        table = PartitionTable.from_walk(p)
        fwd, back = [], []
        y = x.y1
        for _ in range(self.depth):
            k = table.locate(y)
            fwd.append(k + 1)
            y = (y - table.cumulative[k]) / table.cell_weight(k)
        y = x.y2
        for _ in range(self.depth):
            k = table.locate(y)
            back.append(k + 1)
            y = (y - table.cumulative[k]) / table.cell_weight(k)
        return self.values.get((x.site, tuple(back) + tuple(fwd)), self.default)


def reduce_to_site(F: CellObservable, p: WalkDistribution, budget: int = DEFAULT_BUDGET) -> SiteObservable:
    """Collapse a depth-m cell observable to the site function of its stable shift.

    Composing F with m forward steps clears the backward digits; the result
    depends on the expanding coordinate only, and its square integral at
    site alpha collects every explicit cell at weight = exact cell measure.
    Correlations of a depth-m pair reduce to depth-0 correlations at time
    n - 2m, so callers pairing the output with shifted local observables
    must offset indices by 2m.
    """
    if p.size ** (2 * F.depth) > budget:
        raise BudgetExceededError(
            f"N^(2m) = {p.size}^{2 * F.depth} exceeds the cell budget {budget}"
        )
    m = F.depth
    contrib: dict = {}
    for (site, word), val in F.values.items():
        back, fwd = word[:m], word[m:]
        if any(d > p.size for d in word):
            raise ValueError(f"digit out of range for a walk with {p.size} directions")
        measure = Fraction(1)
        for d in word:
            measure *= p.support[d - 1][1]
        alpha = list(site)
        for d in back:
            step_vec = p.support[d - 1][0]
            alpha = [a - b for a, b in zip(alpha, step_vec)]
        key = tuple(alpha)
        contrib[key] = contrib.get(key, Fraction(0)) + measure * (val - F.default)
    table = {s: F.default + v for s, v in contrib.items() if v != 0}
    box = Box.spanning(table.keys(), F.dim)
    return SiteObservable(F.dim, ConstantOutsideBoxTail(F.default, box, table))


# ---------------------------------------------------------------------------
# site evolution (the n-step reduction of F o T^n)


def evolve_site(f: SiteObservable, p: WalkDistribution, n: int) -> SiteObservable:
    """Site function alpha -> sum_beta p^(n)_beta f(alpha + beta), exactly.

    The tail model transforms along: periodic stays periodic with the same
    period; constant-outside-box keeps its constant with the box dilated by
    n * max|beta|; the orthant model likewise (dimension 1 only, where the
    evolved function is again constant per side beyond a finite window).
    """
    if n < 0:
        raise ValueError("evolution steps must be nonnegative")
    if f.dim != p.dim:
        raise ValueError("observable and walk dimensions differ")
    pn = convolution_power(p, n)
    t = f.tail
    if isinstance(t, PeriodicTail):
        new_table = {}
        for residue in t.table:
            acc = 0
            for beta, w in pn.entries.items():
                shifted = tuple((r + b) % l for r, b, l in zip(residue, beta, t.period))
                acc += w * t.table[shifted]
            new_table[residue] = acc
        return SiteObservable(f.dim, PeriodicTail(t.period, new_table))
    if isinstance(t, ConstantOutsideBoxTail):
        reach = n * p.max_step
        new_box = t.box.dilate(reach)
        new_table = {}
        for site in new_box.sites():
            acc = 0
            for beta, w in pn.entries.items():
                acc += w * f.value(tuple(a + b for a, b in zip(site, beta)))
            new_table[site] = acc
        return SiteObservable(f.dim, ConstantOutsideBoxTail(t.constant, new_box, new_table))
    if isinstance(t, OrthantTail):
        if f.dim != 1:
            raise ValueError(
                "evolution of orthant tails is exactly representable only in dimension 1"
            )
        reach = n * p.max_step
        lo = min(0, t.box.lo[0]) - reach
        hi = max(-1, t.box.hi[0]) + reach
        new_box = Box((lo,), (hi,))
        new_table = {}
        for site in new_box.sites():
            acc = 0
            for beta, w in pn.entries.items():
                acc += w * f.value((site[0] + beta[0],))
            new_table[site] = acc
        return SiteObservable(f.dim, OrthantTail(t.constants, new_box, new_table))
    raise ValueError("evolution needs a tail model (periodic, boxed, or orthant)")


def av_invariance_check(f: SiteObservable, p: WalkDistribution, n: int, family: BoxFamily | None = None):
    """|Av(f evolved n steps) - Av(f)|; contractually 0 for analytic tails."""
    if family is None:
        family = BoxFamily.translation_invariant(f.dim)
    before = f.analytic_average(family)
    if before is None or before is NON_CONVERGENT:
        raise ValueError("observable does not admit an analytic average for this family")
    after = evolve_site(f, p, n).analytic_average(family)
    return abs(after - before)


# ---------------------------------------------------------------------------
# config (de)serialization


def _parse_value(v):
    if isinstance(v, float):
        return v
    return parse_rational(v)


def _parse_table(table: Mapping) -> dict:
    out = {}
    for key, v in table.items():
        coords = tuple(int(c) for c in str(key).split(","))
        out[coords] = _parse_value(v)
    return out


def observable_from_config(dim: int, cfg: Mapping):
    kind = cfg.get("kind")
    if kind == "periodic":
        return periodic_observable(cfg["period"], _parse_table(cfg["table"]))
    if kind == "constantOutsideBox":
        box = Box.centered(cfg.get("center", origin(dim)), int(cfg.get("radius", 0)))
        return localized_observable(dim, cfg["constant"], box, _parse_table(cfg.get("table", {})))
    if kind == "orthant":
        box = Box.centered(cfg.get("center", origin(dim)), int(cfg.get("radius", 0)))
        constants = {
            tuple(int(c) for c in str(k).split(",")): _parse_value(v)
            for k, v in cfg["constants"].items()
        }
        return orthant_observable(dim, constants, box, _parse_table(cfg.get("table", {})))
    if kind == "sign1d":
        if dim != 1:
            raise ValueError("sign1d needs a one-dimensional walk")
        return sign_observable()
    if kind == "cell":
        depth = int(cfg["m"])
        values = {}
        for rec in cfg["values"]:
            site = tuple(int(c) for c in rec["site"])
            word = tuple(int(d) for d in rec.get("back", ())) + tuple(int(d) for d in rec.get("fwd", ()))
            values[(site, word)] = _parse_value(rec["value"])
        return CellObservable(dim, depth, values, _parse_value(cfg.get("default", 0)))
    raise ValueError(f"unknown observable kind {kind!r}")


def observable_to_config(obs) -> dict:
    if isinstance(obs, CellObservable):
        return {
            "kind": "cell",
            "m": obs.depth,
            "default": format_rational(Fraction(obs.default)),
            "values": [
                {
                    "site": list(site),
                    "back": list(word[: obs.depth]),
                    "fwd": list(word[obs.depth :]),
                    "value": format_rational(Fraction(v)),
                }
                for (site, word), v in sorted(obs.values.items())
            ],
        }
    t = obs.tail
    if isinstance(t, PeriodicTail):
        return {
            "kind": "periodic",
            "period": list(t.period),
            "table": {",".join(map(str, r)): format_rational(Fraction(v)) for r, v in sorted(t.table.items())},
        }
    if isinstance(t, ConstantOutsideBoxTail):
        return {
            "kind": "constantOutsideBox",
            "constant": format_rational(Fraction(t.constant)),
            "box": {"lo": list(t.box.lo), "hi": list(t.box.hi)},
            "table": {",".join(map(str, s)): format_rational(Fraction(v)) for s, v in sorted(t.table.items())},
        }
    if isinstance(t, OrthantTail):
        return {
            "kind": "orthant",
            "constants": {",".join(map(str, s)): format_rational(Fraction(v)) for s, v in sorted(t.constants.items())},
            "box": {"lo": list(t.box.lo), "hi": list(t.box.hi)},
            "table": {",".join(map(str, s)): format_rational(Fraction(v)) for s, v in sorted(t.table.items())},
        }
    raise ValueError("raw evaluators have no config form")
