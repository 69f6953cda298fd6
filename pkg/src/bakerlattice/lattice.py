"""Exact arithmetic on finitely supported functions over the lattice Z^d.

Walk distributions are finite probability vectors with exact rational
weights.  Signals are finitely supported real/complex functions on Z^d;
whenever every value is rational, convolutions, moments, drift and the
boundary-defect computation stay rational, so tests can assert equalities
instead of tolerances.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm, sqrt
from typing import Iterable, Mapping

from .rational import format_rational, is_exact, parse_rational

Site = tuple[int, ...]


class DimensionMismatchError(ValueError):
    """Operands live on lattices of different dimension."""


def _as_site(coords, dim: int | None = None) -> Site:
    site = tuple(int(c) for c in coords)
    if any(c != int(c) for c in coords):
        raise TypeError(f"lattice point must have integer coordinates: {coords!r}")
    if dim is not None and len(site) != dim:
        raise DimensionMismatchError(f"expected dimension {dim}, got point {site}")
    return site


def origin(dim: int) -> Site:
    return (0,) * dim


@dataclass(frozen=True, eq=True)
class LatticeSignal:
    """Finitely supported function on Z^d; exact zeros are never stored."""

    dim: int
    entries: dict

    @classmethod
    def from_entries(cls, dim: int, entries: Mapping) -> "LatticeSignal":
        clean = {}
        for coords, value in entries.items():
            if value == 0:
                continue
            clean[_as_site(coords, dim)] = value
        return cls(dim, clean)

    @classmethod
    def delta(cls, dim: int) -> "LatticeSignal":
        return cls(dim, {origin(dim): Fraction(1)})

    def __getitem__(self, coords) -> object:
        return self.entries.get(_as_site(coords, self.dim), 0)

    def __len__(self) -> int:
        return len(self.entries)

    @property
    def is_exact(self) -> bool:
        return all(is_exact(v) for v in self.entries.values())

    def mass(self):
        return sum(self.entries.values())

    def support_radius(self) -> tuple[int, ...]:
        """Per-axis bound max |alpha_i| over the support (0 if empty)."""
        if not self.entries:
            return (0,) * self.dim
        return tuple(max(abs(s[i]) for s in self.entries) for i in range(self.dim))

    def shift(self, gamma) -> "LatticeSignal":
        g = _as_site(gamma, self.dim)
        return LatticeSignal(
            self.dim,
            {tuple(a + b for a, b in zip(s, g)): v for s, v in self.entries.items()},
        )

    def modulate(self, zeta) -> "LatticeSignal":
        """Multiply entries by the character exp(i zeta . alpha); values go complex."""
        import cmath

        out = {}
        for s, v in self.entries.items():
            phase = cmath.exp(1j * sum(z * c for z, c in zip(zeta, s)))
            out[s] = complex(v) * phase
        return LatticeSignal(self.dim, out)

    def scale(self, factor) -> "LatticeSignal":
        if factor == 0:
            return LatticeSignal(self.dim, {})
        return LatticeSignal(self.dim, {s: factor * v for s, v in self.entries.items()})

    def __add__(self, other: "LatticeSignal") -> "LatticeSignal":
        if self.dim != other.dim:
            raise DimensionMismatchError("signal dimensions differ")
        out = dict(self.entries)
        for s, v in other.entries.items():
            w = out.get(s, 0) + v
            if w == 0:
                out.pop(s, None)
            else:
                out[s] = w
        return LatticeSignal(self.dim, out)

    def __sub__(self, other: "LatticeSignal") -> "LatticeSignal":
        return self + other.scale(-1)


@dataclass(frozen=True)
class WalkDistribution:
    """Finite-support step distribution {p_beta} on Z^d with rational weights.

    The support is kept in lexicographic order; this fixes the enumeration
    j -> beta^(j) used by the phase-space partition.  N = 1 is rejected by
    default (a single deterministic step carries no randomness) but can be
    allowed where only the characteristic function is needed.
    """

    dim: int
    support: tuple[tuple[Site, Fraction], ...]

    @classmethod
    def from_weights(cls, dim: int, weights: Mapping, allow_trivial: bool = False) -> "WalkDistribution":
        items = []
        for coords, w in weights.items():
            site = _as_site((coords,) if isinstance(coords, int) else coords, dim)
            weight = parse_rational(w)
            if weight <= 0:
                raise ValueError(f"weight for step {site} must be positive, got {weight}")
            items.append((site, weight))
        items.sort(key=lambda it: it[0])
        sites = [s for s, _ in items]
        if len(set(sites)) != len(sites):
            raise ValueError("support points must be pairwise distinct")
        total = sum(w for _, w in items)
        if total != 1:
            raise ValueError(f"weights must sum to 1 exactly, got {total}")
        if len(items) < 2 and not allow_trivial:
            raise ValueError("walk needs at least two active directions (N >= 2)")
        return cls(dim, tuple(items))

    @property
    def size(self) -> int:
        return len(self.support)

    @property
    def sites(self) -> tuple[Site, ...]:
        return tuple(s for s, _ in self.support)

    @property
    def weights(self) -> tuple[Fraction, ...]:
        return tuple(w for _, w in self.support)

    @property
    def max_weight(self) -> Fraction:
        return max(self.weights)

    @property
    def max_step(self) -> int:
        """max |beta|_inf over the support."""
        return max(max(abs(c) for c in s) for s in self.sites)

    def signal(self) -> LatticeSignal:
        return LatticeSignal(self.dim, dict(self.support))

    def to_json_dict(self) -> dict:
        return {
            "dim": self.dim,
            "support": [
                {"beta": list(site), "p": format_rational(w)} for site, w in self.support
            ],
        }

    @classmethod
    def from_json_dict(cls, data: Mapping, allow_trivial: bool = False) -> "WalkDistribution":
        dim = int(data["dim"])
        weights = {tuple(entry["beta"]): parse_rational(entry["p"]) for entry in data["support"]}
        return cls.from_weights(dim, weights, allow_trivial=allow_trivial)


# ---------------------------------------------------------------------------
# convolution


def _integer_form(sig: LatticeSignal) -> tuple[dict, int]:
    """Common-denominator form (integer numerators, positive denominator)."""
    den = 1
    for v in sig.entries.values():
        den = lcm(den, Fraction(v).denominator)
    nums = {s: int(v * den) for s, v in sig.entries.items()}
    return nums, den


def _convolve_integer(a: dict, b: dict) -> dict:
    out: dict = {}
    if len(a) > len(b):  # iterate the smaller outer dict
        a, b = b, a
    for sa, va in a.items():
        for sb, vb in b.items():
            key = tuple(x + y for x, y in zip(sa, sb))
            out[key] = out.get(key, 0) + va * vb
    return out


def convolve(a: LatticeSignal, b: LatticeSignal) -> LatticeSignal:
    """(a * b)_alpha = sum_beta a_beta b_{alpha-beta}; exact on rational input."""
    if a.dim != b.dim:
        raise DimensionMismatchError("cannot convolve signals of different dimension")
    if a.is_exact and b.is_exact:
        na, da = _integer_form(a)
        nb, db = _integer_form(b)
        nums = _convolve_integer(na, nb)
        den = da * db
        return LatticeSignal.from_entries(a.dim, {s: Fraction(n, den) for s, n in nums.items()})
    out: dict = {}
    for sa, va in a.entries.items():
        for sb, vb in b.entries.items():
            key = tuple(x + y for x, y in zip(sa, sb))
            out[key] = out.get(key, 0) + va * vb
    return LatticeSignal.from_entries(a.dim, out)


def convolution_power(p: WalkDistribution, n: int) -> LatticeSignal:
    """n-step law p^(n) (p^(0) = delta_0), by repeated squaring, exact."""
    if n < 0:
        raise ValueError("power must be nonnegative")
    nums, den = _integer_form(p.signal())
    acc_nums, acc_den = {origin(p.dim): 1}, 1
    base_nums, base_den = nums, den
    k = n
    while k:
        if k & 1:
            acc_nums = _convolve_integer(acc_nums, base_nums)
            acc_den *= base_den
        k >>= 1
        if k:
            base_nums = _convolve_integer(base_nums, base_nums)
            base_den *= base_den
    return LatticeSignal.from_entries(
        p.dim, {s: Fraction(v, acc_den) for s, v in acc_nums.items()}
    )


# ---------------------------------------------------------------------------
# moments and drift


def drift(p: WalkDistribution) -> tuple[Fraction, ...]:
    """Mean step v = sum_beta beta p_beta, exact per component."""
    return tuple(
        sum((w * s[i] for s, w in p.support), Fraction(0)) for i in range(p.dim)
    )


def moment(p: WalkDistribution, k: int) -> float:
    """sum_beta |beta|^k p_beta with the Euclidean norm, reported as float.

    Even k goes through exact rational |beta|^2 powers before the final
    conversion; odd k needs one square root per support point.
    """
    if k < 1:
        raise ValueError("moment order must be >= 1")
    if k % 2 == 0:
        total = sum(
            (w * Fraction(sum(c * c for c in s)) ** (k // 2) for s, w in p.support),
            Fraction(0),
        )
        return float(total)
    return float(sum(float(w) * sqrt(sum(c * c for c in s)) ** k for s, w in p.support))


# ---------------------------------------------------------------------------
# irreducibility (span of step differences)


@dataclass(frozen=True)
class SpanVerdict:
    """Outcome of the step-difference span computation.

    ``basis`` holds a Hermite-form basis (staircase rows, positive pivots)
    of the subgroup generated by {beta^(j) - beta^(j')}.  The subgroup is all
    of Z^d exactly when there are d rows, each with pivot 1.
    """

    full: bool
    basis: tuple[Site, ...]

    @property
    def verdict(self) -> str:
        return "FullLattice" if self.full else "Sublattice"


def _hermite_basis(rows: Iterable[Site], dim: int) -> list[list[int]]:
    work = [list(r) for r in rows if any(r)]
    basis: list[list[int]] = []
    col = 0
    while work and col < dim:
        pivot_rows = [r for r in work if r[col] != 0]
        rest = [r for r in work if r[col] == 0]
        if not pivot_rows:
            col += 1
            continue
        while len(pivot_rows) > 1:
            pivot_rows.sort(key=lambda r: abs(r[col]))
            piv = pivot_rows[0]
            reduced = [piv]
            for row in pivot_rows[1:]:
                q = row[col] // piv[col]
                new = [x - q * y for x, y in zip(row, piv)]
                if new[col] != 0:
                    reduced.append(new)
                elif any(new):
                    rest.append(new)
            pivot_rows = reduced
        piv = pivot_rows[0]
        if piv[col] < 0:
            piv = [-x for x in piv]
        basis.append(piv)
        work = rest
        col += 1
    # reduce entries above each pivot for a canonical form
    for i in reversed(range(len(basis))):
        pcol = next(j for j, x in enumerate(basis[i]) if x != 0)
        for k in range(i):
            q = basis[k][pcol] // basis[i][pcol]
            if q:
                basis[k] = [x - q * y for x, y in zip(basis[k], basis[i])]
    return basis


def span_check(p: WalkDistribution, base_index: int = 0) -> SpanVerdict:
    """Decide whether the step differences generate all of Z^d.

    The verdict does not depend on ``base_index`` (the subgroup generated by
    {beta^(j) - beta^(j')} is the same for every j'); the parameter exists so
    that this invariance can be exercised directly.
    """
    if p.size < 2:
        raise ValueError("span check needs at least two support points")
    base = p.sites[base_index]
    rows = [tuple(a - b for a, b in zip(s, base)) for s in p.sites]
    basis = _hermite_basis(rows, p.dim)
    full = len(basis) == p.dim and all(
        next(x for x in row if x != 0) == 1 for row in basis
    )
    return SpanVerdict(full, tuple(tuple(r) for r in basis))


# ---------------------------------------------------------------------------
# boundary defect of centered boxes (compatibility of dynamics and averaging)


def a1_defect(p: WalkDistribution, r: int) -> Fraction:
    """Exact ratio mu(T V_r symdiff V_r) / mu(V_r) for V_r over the box B_{0,r}.

    Mass leaving the box under one step and mass entering it are counted per
    step beta; for a box of side 2r+1 both counts equal
    (2r+1)^d - prod_i max(0, 2r+1 - |beta_i|).
    """
    if r < 1:
        raise ValueError("box radius must be >= 1")
    side = 2 * r + 1
    volume = side**p.dim
    total = Fraction(0)
    for site, w in p.support:
        stay = 1
        for c in site:
            stay *= max(0, side - abs(c))
        total += w * 2 * (volume - stay)
    return total / volume


def a1_boundary_constant(p: WalkDistribution) -> Fraction:
    """Explicit constant bounding r * a1_defect(p, r) for every r >= 1."""
    return p.dim * sum((w * max(abs(c) for c in s) for s, w in p.support), Fraction(0))
