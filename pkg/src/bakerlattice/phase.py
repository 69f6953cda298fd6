"""The baker-map lattice realizing a random walk on Z^d.

Phase space is Z^d x [0,1)^2.  One step stretches the first square
coordinate by the inverse weight of the partition cell it falls in,
contracts the second by that weight, and translates the lattice index by
the corresponding step.  Full-width horizontal strips decompose exactly
under iteration into itinerary-labeled strips, which is the ground truth
against which all correlation formulas are checked.
"""

from __future__ import annotations

import csv
from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .lattice import (
    LatticeSignal,
    Site,
    WalkDistribution,
    convolution_power,
)
from .rational import format_rational, parse_rational

DEFAULT_BUDGET = 10**7


class BudgetExceededError(RuntimeError):
    """Itinerary enumeration would exceed the configured component budget."""


def _check_unit(value, name: str):
    if not 0 <= value < 1:
        raise ValueError(f"{name} must lie in [0, 1), got {value}")


@dataclass(frozen=True)
class PhasePoint:
    """A point (site; y1, y2): y1 is the expanding coordinate, y2 the contracting one."""

    site: Site
    y1: object
    y2: object

    def __post_init__(self):
        _check_unit(self.y1, "y1")
        _check_unit(self.y2, "y2")


@dataclass(frozen=True)
class PartitionTable:
    """Cumulative cell boundaries 0 = q_0 < q_1 < ... < q_N = 1.

    ``order`` maps cell index k (0-based) to an index into the walk support;
    the default is the identity (lexicographic enumeration).  Alternative
    orders produce conjugate systems and exist so tests can confirm that
    exported quantities do not depend on the enumeration.
    """

    walk: WalkDistribution
    order: tuple[int, ...]
    cumulative: tuple[Fraction, ...]

    @classmethod
    def from_walk(cls, p: WalkDistribution, order=None) -> "PartitionTable":
        if order is None:
            order = tuple(range(p.size))
        else:
            order = tuple(int(i) for i in order)
            if sorted(order) != list(range(p.size)):
                raise ValueError("order must be a permutation of the support indices")
        bounds = [Fraction(0)]
        for k in order:
            bounds.append(bounds[-1] + p.support[k][1])
        if bounds[-1] != 1:
            raise ValueError("partition widths must sum to 1")
        return cls(p, order, tuple(bounds))

    @property
    def size(self) -> int:
        return self.walk.size

    def cell_step(self, k: int) -> Site:
        return self.walk.support[self.order[k]][0]

    def cell_weight(self, k: int) -> Fraction:
        return self.walk.support[self.order[k]][1]

    def locate(self, y) -> int:
        """0-based index k of the half-open cell [q_k, q_{k+1}) containing y."""
        _check_unit(y, "coordinate")
        return bisect_right(self.cumulative, y) - 1


def step(x: PhasePoint, p: WalkDistribution, table: PartitionTable | None = None) -> PhasePoint:
    """One forward step; exact when the coordinates of x are rational."""
    if table is None:
        table = PartitionTable.from_walk(p)
    k = table.locate(x.y1)
    q, w = table.cumulative[k], table.cell_weight(k)
    site = tuple(a + b for a, b in zip(x.site, table.cell_step(k)))
    return PhasePoint(site, (x.y1 - q) / w, w * x.y2 + q)


def inverse_step(x: PhasePoint, p: WalkDistribution, table: PartitionTable | None = None) -> PhasePoint:
    """The unique preimage under ``step``; the cell is selected by y2."""
    if table is None:
        table = PartitionTable.from_walk(p)
    k = table.locate(x.y2)
    q, w = table.cumulative[k], table.cell_weight(k)
    site = tuple(a - b for a, b in zip(x.site, table.cell_step(k)))
    return PhasePoint(site, w * x.y1 + q, (x.y2 - q) / w)


@dataclass(frozen=True)
class Strip:
    """Full-width strip {site} x [0,1) x [lo, hi) with rational endpoints."""

    site: Site
    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        object.__setattr__(self, "lo", parse_rational(self.lo))
        object.__setattr__(self, "hi", parse_rational(self.hi))
        if not (0 <= self.lo < self.hi <= 1):
            raise ValueError(f"strip interval must satisfy 0 <= lo < hi <= 1, got [{self.lo}, {self.hi})")

    @property
    def height(self) -> Fraction:
        return self.hi - self.lo

    @classmethod
    def unit(cls, site) -> "Strip":
        return cls(tuple(site), Fraction(0), Fraction(1))


@dataclass(frozen=True)
class ItineraryComponent:
    word: tuple[int, ...]  # 1-based cell indices, first step first
    site: Site
    lo: Fraction
    hi: Fraction

    @property
    def height(self) -> Fraction:
        return self.hi - self.lo


@dataclass(frozen=True)
class ItineraryPushforward:
    """Exact decomposition of the n-step image of a strip into N^n strips."""

    depth: int
    base: Strip
    components: tuple[ItineraryComponent, ...]

    def total_height(self) -> Fraction:
        return sum((c.height for c in self.components), Fraction(0))

    def site_masses(self) -> dict:
        """Height collected per site, divided by the base height.

        Summing the exact itinerary heights site by site must reproduce the
        n-step law of the walk; this is the strip-wise consistency check
        between the enumeration path and the convolution path.
        """
        masses: dict = {}
        h = self.base.height
        for c in self.components:
            masses[c.site] = masses.get(c.site, Fraction(0)) + c.height / h
        return masses


def push_strip(
    strip: Strip,
    p: WalkDistribution,
    n: int,
    budget: int = DEFAULT_BUDGET,
    table: PartitionTable | None = None,
) -> ItineraryPushforward:
    """Push a full-width strip forward n steps, exactly.

    The image of a strip of height h under one step consists of N strips,
    one per partition cell k, at site + step(k), with interval
    q_k + w_k * [lo, hi).  Raises BudgetExceededError when N^n would exceed
    ``budget`` (callers should switch to the convolution path instead).
    """
    if n < 0:
        raise ValueError("depth must be nonnegative")
    if table is None:
        table = PartitionTable.from_walk(p)
    if p.size**n > budget:
        raise BudgetExceededError(
            f"N^n = {p.size}^{n} exceeds the itinerary budget {budget}"
        )
    comps = [ItineraryComponent((), strip.site, strip.lo, strip.hi)]
    for _ in range(n):
        nxt = []
        for c in comps:
            for k in range(table.size):
                q, w = table.cumulative[k], table.cell_weight(k)
                nxt.append(
                    ItineraryComponent(
                        c.word + (k + 1,),
                        tuple(a + b for a, b in zip(c.site, table.cell_step(k))),
                        q + w * c.lo,
                        q + w * c.hi,
                    )
                )
        comps = nxt
    return ItineraryPushforward(n, strip, tuple(comps))


def cylinder_interval(table: PartitionTable, word) -> tuple[Fraction, Fraction]:
    """Half-open interval of the cylinder with digit word (outermost digit first).

    Digits are 1-based cell indices; the empty word gives [0, 1).
    """
    lo, hi = Fraction(0), Fraction(1)
    for digit in reversed(tuple(word)):
        k = digit - 1
        q, w = table.cumulative[k], table.cell_weight(k)
        lo, hi = q + w * lo, q + w * hi
    return lo, hi


# ---------------------------------------------------------------------------
# Monte Carlo check that the site process follows the prescribed walk


@dataclass(frozen=True, eq=False)
class SiteHistogram:
    walk: WalkDistribution
    steps: int
    samples: int
    seed: int
    counts: dict  # Site -> int

    def exact_law(self) -> LatticeSignal:
        return convolution_power(self.walk, self.steps)

    def empirical_mean(self) -> tuple[float, ...]:
        total = [0.0] * self.walk.dim
        for site, c in self.counts.items():
            for i, coord in enumerate(site):
                total[i] += coord * c
        return tuple(t / self.samples for t in total)

    def write_csv(self, path, metadata: dict | None = None):
        law = self.exact_law()
        sites = sorted(set(self.counts) | set(law.entries))
        with open(path, "w", newline="") as fh:
            fh.write(f"# seed={self.seed} steps={self.steps} samples={self.samples}\n")
            for key, value in (metadata or {}).items():
                fh.write(f"# {key}={value}\n")
            writer = csv.writer(fh)
            writer.writerow(
                [f"site_{i}" for i in range(self.walk.dim)]
                + ["count", "empirical_p", "exact_p"]
            )
            for site in sites:
                count = self.counts.get(site, 0)
                writer.writerow(
                    list(site)
                    + [count, repr(count / self.samples), format_rational(law[site])]
                )


def simulate_walk(
    p: WalkDistribution,
    n: int,
    samples: int,
    seed: int,
    streams: int = 8,
) -> SiteHistogram:
    """Iterate the map on uniform random points of the origin square.

    Points use binary64 arithmetic (orbits only feed statistical checks; the
    exact machinery lives in the strip algebra).  Samples are split across
    ``streams`` PCG64 child generators spawned from the seed and merged by
    summation, so the result is reproducible and order-independent.
    """
    if samples < 1:
        raise ValueError("need at least one sample")
    table = PartitionTable.from_walk(p)
    bounds = np.array([float(q) for q in table.cumulative])
    widths = np.array([float(table.cell_weight(k)) for k in range(table.size)])
    steps_arr = np.array([table.cell_step(k) for k in range(table.size)], dtype=np.int64)

    counts: dict = {}
    children = np.random.SeedSequence(seed).spawn(streams)
    base, extra = divmod(samples, streams)
    for i, child in enumerate(children):
        m = base + (1 if i < extra else 0)
        if m == 0:
            continue
        rng = np.random.default_rng(child)
        y1 = rng.random(m)
        pos = np.zeros((m, p.dim), dtype=np.int64)
        for _ in range(n):
            k = np.searchsorted(bounds, y1, side="right") - 1
            k = np.minimum(k, table.size - 1)
            pos += steps_arr[k]
            y1 = (y1 - bounds[k]) / widths[k]
            y1 = np.clip(y1, 0.0, np.nextafter(1.0, 0.0))
        sites, site_counts = np.unique(pos, axis=0, return_counts=True)
        for site, c in zip(sites, site_counts):
            key = tuple(int(v) for v in site)
            counts[key] = counts.get(key, 0) + int(c)
    return SiteHistogram(p, n, samples, seed, counts)
