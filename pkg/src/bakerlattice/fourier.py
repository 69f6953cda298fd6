"""Harmonic analysis on the torus T^d for lattice signals.

Conventions.  The transform of a signal a is
a~(theta) = sum_alpha a_alpha exp(i alpha . theta), sampled on the uniform
grid theta in (2pi/M) {0, ..., M-1}^d.  All torus integrals use normalized
Haar measure, so L^1 and L^2 norms are plain grid means; M-point quadrature
integrates a trigonometric polynomial exactly as long as no nonzero
frequency of the integrand is a multiple of M (the aliasing rule), which is
what every "exact below bandwidth" contract below refers to.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial, lcm, sqrt

import numpy as np

from .lattice import (
    LatticeSignal,
    WalkDistribution,
    convolution_power,
    convolve,
    drift,
    origin,
    span_check,
)
from .rational import is_exact, nearest_integer, parse_rational


class AliasingError(ValueError):
    """The grid is too coarse for the requested quadrature to be exact."""


@dataclass(frozen=True, eq=False)
class TorusGrid:
    """Samples of a function on the uniform M^d grid of the torus."""

    dim: int
    points_per_axis: int
    values: np.ndarray

    def __post_init__(self):
        if self.points_per_axis < 3:
            raise ValueError("grid needs at least 3 points per axis")
        if self.values.shape != (self.points_per_axis,) * self.dim:
            raise ValueError("value array shape does not match the grid")

    def theta_axis(self) -> np.ndarray:
        M = self.points_per_axis
        return 2.0 * np.pi * np.arange(M) / M

    def principal_theta_axis(self) -> np.ndarray:
        """Angles mapped to (-pi, pi] (for ball membership and |theta| weights)."""
        th = self.theta_axis()
        return np.where(th > np.pi, th - 2.0 * np.pi, th)

    def principal_radius(self) -> np.ndarray:
        """|theta| over the grid with principal-value angles."""
        axes = np.meshgrid(*([self.principal_theta_axis()] * self.dim), indexing="ij")
        return np.sqrt(sum(ax**2 for ax in axes))


def smallest_grid(bandwidth: int) -> int:
    """Smallest power of two strictly larger than twice the bandwidth."""
    M = 4
    while M <= 2 * bandwidth:
        M *= 2
    return M


def char_function(a: LatticeSignal, grid_size: int) -> TorusGrid:
    """Sample a~ on the grid; exact up to rounding for any finite support.

    On grid points exp(i alpha theta_k) only depends on alpha mod M, so the
    samples are the scaled inverse FFT of the wrapped coefficient array.
    """
    M = int(grid_size)
    if M < 3:
        raise ValueError("grid needs at least 3 points per axis")
    arr = np.zeros((M,) * a.dim, dtype=complex)
    for site, v in a.entries.items():
        idx = tuple(c % M for c in site)
        arr[idx] += complex(v)
    values = np.fft.ifftn(arr) * (M**a.dim)
    return TorusGrid(a.dim, M, values)


# ---------------------------------------------------------------------------
# the box kernel and its transform


def box_signal(dim: int, r: int) -> LatticeSignal:
    """Uniform probability (2r+1)^-d on the centered box of radius r."""
    if r < 1:
        raise ValueError("box radius must be >= 1")
    weight = Fraction(1, (2 * r + 1) ** dim)
    entries = {}

    def fill(prefix):
        if len(prefix) == dim:
            entries[tuple(prefix)] = weight
            return
        for c in range(-r, r + 1):
            fill(prefix + [c])

    fill([])
    return LatticeSignal(dim, entries)


def _dirichlet_axis(r: int, theta: np.ndarray) -> np.ndarray:
    """Normalized Dirichlet kernel sin((r+1/2)t) / ((2r+1) sin(t/2)).

    The closed form is a removable singularity at t = 0 (mod 2pi); within
    1e-6 of it the direct sum (1 + 2 sum_a cos(a t)) / (2r+1) is used
    instead.  Both branches equal the transform of the uniform box weights.
    """
    t = np.asarray(theta, dtype=float)
    half = np.sin(t / 2.0)
    near = np.abs(half) < 1e-6
    safe_half = np.where(near, 1.0, half)
    closed = np.sin((r + 0.5) * t) / ((2 * r + 1) * safe_half)
    direct = np.ones_like(t)
    for a in range(1, r + 1):
        direct = direct + 2.0 * np.cos(a * t)
    direct = direct / (2 * r + 1)
    return np.where(near, direct, closed)


def box_kernel_hat(r: int, theta):
    """Transform of the box kernel at angles theta.

    Scalars and 1-d arrays are read as d = 1 evaluation points; an array of
    shape (..., d) is read as d-dimensional points and the per-axis kernels
    are multiplied.
    """
    if r < 1:
        raise ValueError("box radius must be >= 1")
    arr = np.asarray(theta, dtype=float)
    if arr.ndim <= 1:
        out = _dirichlet_axis(r, arr)
        return float(out) if arr.ndim == 0 else out
    return np.prod(_dirichlet_axis(r, arr), axis=-1)


def box_kernel_grid(dim: int, r: int, grid_size: int) -> TorusGrid:
    """Box kernel transform on the full grid, via its product structure."""
    M = int(grid_size)
    axis = _dirichlet_axis(r, 2.0 * np.pi * np.arange(M) / M)
    values = axis
    for _ in range(dim - 1):
        values = np.multiply.outer(values, axis)
    return TorusGrid(dim, M, values.astype(complex))


# ---------------------------------------------------------------------------
# pairings and norms


@dataclass(frozen=True)
class PairingResult:
    """Both sides of the duality sum_alpha conj(a) b = int conj(a~) b~."""

    lattice_value: object
    grid_value: complex


def _conj(v):
    return v.conjugate() if isinstance(v, complex) else v


def parseval_pairing(a: LatticeSignal, b: LatticeSignal, grid_size: int) -> PairingResult:
    """Lattice-side inner product and its grid quadrature.

    Requires M > per-axis support radius of a plus that of b, so that the
    quadrature of conj(a~) b~ sees no aliased frequency; under that
    precondition the two values agree to rounding (about 1e-10 relative).
    """
    if a.dim != b.dim:
        raise ValueError("signals live on lattices of different dimension")
    M = int(grid_size)
    ra, rb = a.support_radius(), b.support_radius()
    if any(M <= x + y for x, y in zip(ra, rb)):
        raise AliasingError(
            f"grid {M} too small for support radii {ra} + {rb}; aliasing would corrupt the quadrature"
        )
    if a.is_exact and b.is_exact:
        lattice = sum(
            (a.entries[s] * b.entries[s] for s in set(a.entries) & set(b.entries)),
            Fraction(0),
        )
    else:
        lattice = sum(
            _conj(a.entries[s]) * b.entries[s] for s in set(a.entries) & set(b.entries)
        )
    ga = char_function(a, M).values
    gb = char_function(b, M).values
    grid = complex(np.mean(np.conj(ga) * gb))
    return PairingResult(lattice, grid)


def a_norm(a: LatticeSignal):
    """l^1 norm of the coefficients (the absolutely-convergent-series norm).

    Exact (a Fraction) when the signal is exact, float otherwise.
    """
    if a.is_exact:
        return sum((abs(v) for v in a.entries.values()), Fraction(0))
    return float(sum(abs(v) for v in a.entries.values()))


def h_norm(a: LatticeSignal, nu_bar: int) -> float:
    """|a_0| + sum_i (sum_alpha |alpha_i^nu_bar a_alpha|^2)^(1/2)."""
    if nu_bar < 1:
        raise ValueError("derivative order must be >= 1")
    zero = abs(complex(a[origin(a.dim)]))
    total = zero
    for i in range(a.dim):
        sq = sum(abs(complex(v)) ** 2 * s[i] ** (2 * nu_bar) for s, v in a.entries.items())
        total += sqrt(sq)
    return float(total)


@lru_cache(maxsize=None)
def _nested_tail_constant(d: int) -> float:
    """Upper bound for the nested sum over 0 < |b_1| <= ... <= |b_d| of b_d^(-2 nu_bar).

    Collapsing the ordered tuples gives 2^d sum_l C(l+d-2, d-1) l^(-2 nu_bar);
    the sum is truncated at l = 10^6 and the tail is dominated by the
    comparison integral, keeping the result an upper bound.
    """
    nu_bar = d // 2 + 1
    limit = 10**6
    ls = np.arange(1, limit + 1, dtype=float)
    comb = np.ones_like(ls)
    for i in range(1, d):
        comb *= (ls + i - 1) / i
    partial = (2.0**d) * float(np.sum(comb * ls ** (-2.0 * nu_bar)))
    # integral comparison: C(x+d-2, d-1) <= (x+d-2)^(d-1) / (d-1)!
    decay = 2 * nu_bar - (d - 1)
    tail = (
        (2.0**d)
        / factorial(d - 1)
        * ((limit + d - 2) / limit) ** (d - 1)
        * limit ** (1 - decay)
        / (decay - 1)
    )
    return partial + tail


def nowak_constant(d: int) -> float:
    """Constant C_d with ||a||_l1 <= C_d ||a~||_{H^nu_bar} on Z^d (d <= 4)."""
    if not 1 <= d <= 4:
        raise ValueError("constant table is precomputed for d <= 4 only")
    return max(1.0, factorial(d - 1) * sqrt(_nested_tail_constant(d)))


def nowak_check(a: LatticeSignal) -> bool:
    """Verify the l^1 versus Sobolev coefficient inequality for one signal."""
    nu_bar = a.dim // 2 + 1
    lhs = float(a_norm(a))
    rhs = nowak_constant(a.dim) * h_norm(a, nu_bar)
    return lhs <= rhs * (1 + 1e-12) + 1e-12


# ---------------------------------------------------------------------------
# schedules


@dataclass(frozen=True)
class FourierConfig:
    """Exponent bookkeeping for the defect-decay diagnostics.

    nu is the Sobolev derivative order max(2, floor(d/2)+1); nu_bar the
    embedding order floor(d/2)+1.  The box radius schedule is
    r_n = ceil(n^eps) (computed in integer arithmetic, no float powers), and
    the shrinking ball has radius n^(-(1-eps)/2).  Hard requirement:
    0 < eps < 1/3.  The sharper bound eps < 1/(2(5 nu + 2 + d/2)) that the
    decay *proof* needs is exposed as ``eps_proof_bound`` and reported, not
    enforced: the measured decay is meaningful for any eps below 1/3.
    """

    dim: int
    eps: Fraction

    def __post_init__(self):
        object.__setattr__(self, "eps", parse_rational(self.eps))
        if not 0 < self.eps < Fraction(1, 3):
            raise ValueError(f"eps must lie in (0, 1/3), got {self.eps}")

    @property
    def nu(self) -> int:
        return max(2, self.dim // 2 + 1)

    @property
    def nu_bar(self) -> int:
        return self.dim // 2 + 1

    @property
    def eps_proof_bound(self) -> Fraction:
        return min(Fraction(1, 3), 1 / (2 * (5 * self.nu + 2 + Fraction(self.dim, 2))))

    @property
    def eps_within_proof_bound(self) -> bool:
        return self.eps < self.eps_proof_bound

    def radius(self, n: int) -> int:
        """r_n = ceil(n^eps), exactly: the least r with r^q >= n^p for eps = p/q."""
        if n < 1:
            raise ValueError("schedule index must be >= 1")
        p, q = self.eps.numerator, self.eps.denominator
        target = n**p
        r = 1
        while r**q < target:
            r += 1
        return r

    def ball_radius(self, n: int) -> float:
        return float(n) ** (-(1.0 - float(self.eps)) / 2.0)


# ---------------------------------------------------------------------------
# the defect signal p^(n) - q^(r_n) * p^(n) and its norms


@dataclass(frozen=True, eq=False)
class DefectNorms:
    n: int
    r: int
    a_norm: float
    l1_grid: float
    sobolev: float
    bound: float

    @property
    def h_total(self) -> float:
        return self.l1_grid + self.sobolev


def _derivative_weighted(sig: LatticeSignal, axis: int, order: int) -> LatticeSignal:
    """Signal with entries (i alpha_axis)^order a_alpha: the transform of d^order a~."""
    out = {}
    for s, v in sig.entries.items():
        w = (1j * s[axis]) ** order
        if w != 0:
            out[s] = complex(v) * w
    return LatticeSignal(sig.dim, out)


def defect_signal(
    p: WalkDistribution,
    n: int,
    config: FourierConfig,
    grid_size: int | None = None,
) -> tuple[LatticeSignal, DefectNorms]:
    """Exact g^(n) = p^(n) - q^(r_n) * p^(n), with its decay norms record.

    The recorded quantities are the exact l^1 coefficient norm, the grid
    L^1 norm of g~, the Sobolev part sum_i ||d_i^nu g~||_{L^2} (derivatives
    taken exactly on the lattice side, integrated by grid quadrature), and
    the embedding bound C_d (L^1 + Sobolev) that must dominate the l^1 norm.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    r = config.radius(n)
    pn = convolution_power(p, n)
    g = pn - convolve(box_signal(p.dim, r), pn)
    radius = max(g.support_radius()) if g.entries else 0
    M = int(grid_size) if grid_size else smallest_grid(radius)
    if M <= 2 * radius:
        raise AliasingError(
            f"grid {M} below the Sobolev quadrature bandwidth {2 * radius + 1}"
        )
    gt = char_function(g, M)
    l1 = float(np.mean(np.abs(gt.values)))
    sob = 0.0
    for axis in range(p.dim):
        wsig = _derivative_weighted(g, axis, config.nu)
        wt = char_function(wsig, M)
        sob += sqrt(float(np.mean(np.abs(wt.values) ** 2)))
    an = float(a_norm(g))
    bound = nowak_constant(p.dim) * (l1 + sob)
    return g, DefectNorms(n, r, an, l1, sob, bound)


# ---------------------------------------------------------------------------
# drift removal


@dataclass(frozen=True, eq=False)
class DriftRemoval:
    """Multiplier bookkeeping for walks with nonzero mean step.

    delta is the componentwise nearest integer to n v (exact ties resolved
    toward zero), so |delta_i / n - v_i| <= 1/(2n); ``gradient_at_zero``
    holds the exact values |v_i - delta_i / n|.
    """

    n: int
    delta: tuple[int, ...]
    gradient_at_zero: tuple[Fraction, ...]

    @property
    def gradient_bound(self) -> Fraction:
        return Fraction(1, 2 * self.n)


def drift_removed_char(
    p: WalkDistribution, n: int, grid_size: int
) -> tuple[TorusGrid, DriftRemoval]:
    """Grid samples of p~(theta) exp(-i (delta . theta) / n), plus diagnostics.

    For zero-drift walks delta = 0 and the returned grid equals the plain
    characteristic function sample for sample.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    v = drift(p)
    delta = tuple(nearest_integer(n * vi) for vi in v)
    grid = char_function(p.signal(), grid_size)
    values = grid.values
    if any(delta):
        M = grid.points_per_axis
        theta = grid.theta_axis()
        for axis, d_i in enumerate(delta):
            if d_i == 0:
                continue
            phase = np.exp(-1j * (d_i / n) * theta)
            shape = [1] * p.dim
            shape[axis] = M
            values = values * phase.reshape(shape)
    removal = DriftRemoval(n, delta, tuple(abs(vi - Fraction(di, n)) for vi, di in zip(v, delta)))
    return TorusGrid(p.dim, grid.points_per_axis, values), removal


# ---------------------------------------------------------------------------
# spectral correlation for periodic site functions


@dataclass(frozen=True)
class PeriodicPairing:
    """Space-side and spectral-side values of sum_alpha conj(f_alpha) p^(n)_alpha."""

    space_value: object
    spectral_value: complex


def periodic_pairing(
    table: dict,
    period,
    p: WalkDistribution,
    n: int,
    grid_size: int | None = None,
) -> PeriodicPairing:
    """Pair a periodic site function with the n-step law, both ways.

    Space side: the exact lattice sum over the support of p^(n).  Spectral
    side: the function is a finite combination of characters at frequencies
    2 pi k / L, so the pairing is the sum over those frequencies of
    conj(c_k) p~(-theta_k)^n with c_k from the FFT of the period cell.
    """
    period = tuple(int(l) for l in period)
    if grid_size:
        M = int(grid_size)
    else:
        base = lcm(*period)
        M = base * (-(-3 // base))  # smallest multiple of the joint period >= 3
    for l in period:
        if M % l:
            raise ValueError(f"grid {M} must be a multiple of every period, got {period}")
    dim = p.dim
    if len(period) != dim:
        raise ValueError("period tuple does not match the walk dimension")
    pn = convolution_power(p, n)
    exact = all(is_exact(v) for v in table.values())
    space = Fraction(0) if exact else 0.0
    for site, w in pn.entries.items():
        residue = tuple(c % l for c, l in zip(site, period))
        space = space + table[residue] * w

    tile = np.zeros((M,) * dim)
    for idx in np.ndindex(*(M,) * dim):
        residue = tuple(c % l for c, l in zip(idx, period))
        tile[idx] = float(table[residue])
    coeffs = np.fft.fftn(tile) / (M**dim)
    p_grid = char_function(p.signal(), M).values
    flipped = p_grid
    for axis in range(dim):
        flipped = np.take(flipped, (-np.arange(M)) % M, axis=axis)
    spectral = complex(np.sum(np.conj(coeffs) * flipped**n))
    return PeriodicPairing(space, spectral)


# ---------------------------------------------------------------------------
# local behavior of p~ and the defect derivatives


@dataclass(frozen=True, eq=False)
class TailRow:
    n: int
    ball_radius: float
    max_modulus_outside: float
    neg_log_power: float
    kappa_residual: float


@dataclass(frozen=True, eq=False)
class XiRow:
    j: int
    r: int
    value: Fraction


@dataclass(frozen=True, eq=False)
class DerivativeRow:
    n: int
    r: int
    max_derivative_in_ball: float
    shape: float
    ratio: float


@dataclass(frozen=True, eq=False)
class LocalBoundsReport:
    full_lattice: bool
    max_modulus_off_zero: float
    witness: tuple | None  # (theta tuple, modulus) with modulus 1 off the origin
    quadratic_coefficient: float
    quadratic_ball: float
    kappa_hat: float | None
    tail_rows: tuple[TailRow, ...]
    xi_rows: tuple[XiRow, ...]
    derivative_rows: tuple[DerivativeRow, ...]
    flagged_n: tuple[int, ...]
    grid_size: int

    def to_json_dict(self) -> dict:
        from .rational import to_jsonable

        return to_jsonable(self)


def taylor_coefficient(j: int, r: int) -> Fraction:
    """Order-2j Taylor coefficient of the 1d box kernel transform at 0.

    xi_j(r) = (-1)^j / (2j)! * (2r+1)^-1 * sum_{a=-r}^r a^(2j), via the exact
    power sum (xi_1(r) = -r(r+1)/6).
    """
    if j < 0 or r < 1:
        raise ValueError("need j >= 0 and r >= 1")
    if j == 0:
        return Fraction(1)
    power_sum = 2 * sum(a ** (2 * j) for a in range(1, r + 1))
    return Fraction((-1) ** j * power_sum, factorial(2 * j) * (2 * r + 1))


def local_bounds_report(
    p: WalkDistribution,
    n_list,
    config: FourierConfig,
    grid_size: int,
    quadratic_ball: float = 0.5,
    taylor_orders=(1, 2, 3),
    shape_tolerance: float = 5.0,
) -> LocalBoundsReport:
    """Measured versions of the local estimates feeding the decay argument.

    (a) the largest c with |p~| <= 1 - c |theta|^2 on a small ball around 0;
    (b) the decay of max |p~|^n outside the shrinking ball, with the fitted
        kappa such that every sampled n obeys max <= exp(-kappa n^eps);
    (c) exact Taylor coefficients of the box kernel transform;
    (d) max |d_i^nu g~^(n)| over the shrinking ball against the reference
        shape r^(2 nu) n^((-2 + 2 eps + nu(1+eps))/2); entries whose ratio to
        the shape exceeds ``shape_tolerance`` times the median ratio are
        flagged (asymptotic bounds may be violated at small n; that is a
        flag, not a failure).

    A walk whose step differences span a proper sublattice has |p~| = 1
    somewhere off 0; the report then carries the witness grid point.
    """
    n_list = sorted(int(n) for n in n_list)
    M = int(grid_size)
    verdict = span_check(p)
    grid = char_function(p.signal(), M)
    modulus = np.abs(grid.values)
    radius = grid.principal_radius()

    off_zero = np.ones_like(modulus, dtype=bool)
    off_zero[(0,) * p.dim] = False
    max_off = float(np.max(modulus[off_zero]))
    witness = None
    if not verdict.full:
        flat = np.where(off_zero, modulus, -1.0)
        idx = np.unravel_index(int(np.argmax(flat)), flat.shape)
        theta = tuple(float(grid.principal_theta_axis()[i]) for i in idx)
        witness = (theta, float(modulus[idx]))

    in_ball = (radius > 0) & (radius <= quadratic_ball)
    c_hat = float(np.min((1.0 - modulus[in_ball]) / radius[in_ball] ** 2)) if in_ball.any() else 0.0

    tail_rows = []
    kappas = []
    for n in n_list:
        rho = config.ball_radius(n)
        outside = radius > rho
        if not outside.any():
            continue
        mmax = float(np.max(modulus[outside]))
        neg_log = -n * np.log(mmax) if mmax > 0 else float("inf")
        kappas.append(neg_log / float(n) ** float(config.eps))
        tail_rows.append(TailRow(n, rho, mmax**n, neg_log, 0.0))
    kappa_hat = min(kappas) if kappas else None
    if kappa_hat is not None:
        tail_rows = [
            TailRow(
                row.n,
                row.ball_radius,
                row.max_modulus_outside,
                row.neg_log_power,
                row.neg_log_power - kappa_hat * float(row.n) ** float(config.eps),
            )
            for row in tail_rows
        ]

    xi_by_key = {}
    for n in n_list:
        r = config.radius(n)
        for j in taylor_orders:
            xi_by_key.setdefault((j, r), XiRow(j, r, taylor_coefficient(j, r)))
    xi_rows = tuple(xi_by_key[k] for k in sorted(xi_by_key))

    deriv_rows = []
    for n in n_list:
        r = config.radius(n)
        pn = convolution_power(p, n)
        g = pn - convolve(box_signal(p.dim, r), pn)
        rho = config.ball_radius(n)
        in_b = radius <= rho
        best = 0.0
        for axis in range(p.dim):
            wt = char_function(_derivative_weighted(g, axis, config.nu), M)
            best = max(best, float(np.max(np.abs(wt.values)[in_b])))
        exponent = (-2.0 + 2.0 * float(config.eps) + config.nu * (1.0 + float(config.eps))) / 2.0
        shape = r ** (2 * config.nu) * float(n) ** exponent
        deriv_rows.append(DerivativeRow(n, r, best, shape, best / shape))

    flagged = []
    if deriv_rows:
        ratios = sorted(row.ratio for row in deriv_rows)
        median = ratios[len(ratios) // 2]
        flagged = [row.n for row in deriv_rows if median > 0 and row.ratio > shape_tolerance * median]

    return LocalBoundsReport(
        full_lattice=verdict.full,
        max_modulus_off_zero=max_off,
        witness=witness,
        quadratic_coefficient=c_hat,
        quadratic_ball=quadratic_ball,
        kappa_hat=kappa_hat,
        tail_rows=tuple(tail_rows),
        xi_rows=xi_rows,
        derivative_rows=tuple(deriv_rows),
        flagged_n=tuple(flagged),
        grid_size=M,
    )
