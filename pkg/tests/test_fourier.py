"""Torus-side machinery: characters, kernels, norms, schedules, decay."""

import random
from fractions import Fraction
from math import pi, sqrt

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bakerlattice import (
    AliasingError,
    FourierConfig,
    LatticeSignal,
    WalkDistribution,
    a_norm,
    box_kernel_hat,
    box_signal,
    char_function,
    convolution_power,
    convolve,
    defect_signal,
    drift_removed_char,
    h_norm,
    local_bounds_report,
    nowak_check,
    nowak_constant,
    parseval_pairing,
    periodic_pairing,
    preset,
    smallest_grid,
    taylor_coefficient,
)
from bakerlattice.fourier import _derivative_weighted
from conftest import random_signal, random_walk

APERY = 1.2020569031595943  # zeta(3)


# ---------------------------------------------------------------------------
# characteristic functions


def test_char_delta_is_one():
    grid = char_function(LatticeSignal.delta(2), 8)
    assert np.allclose(grid.values, 1.0)


def test_char_third_walk_closed_form(third):
    grid = char_function(third.signal(), 64)
    theta = grid.theta_axis()
    assert np.allclose(grid.values, (1 + 2 * np.cos(theta)) / 3, atol=1e-12)
    assert grid.values[32] == pytest.approx(-1 / 3, abs=1e-12)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10**6), st.integers(1, 2))
def test_char_is_one_at_zero_for_walks(seed, dim):
    p = random_walk(random.Random(seed), dim)
    grid = char_function(p.signal(), 8)
    assert grid.values[(0,) * dim] == pytest.approx(1.0, abs=1e-14)


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 10**6), st.integers(1, 2))
def test_convolution_theorem_on_grid(seed, dim):
    rng = random.Random(seed)
    a = random_signal(rng, dim, radius=4)
    b = random_signal(rng, dim, radius=4)
    M = 32
    lhs = char_function(convolve(a, b), M).values
    rhs = char_function(a, M).values * char_function(b, M).values
    assert np.max(np.abs(lhs - rhs)) < 1e-12


# ---------------------------------------------------------------------------
# box kernel


def test_box_kernel_normalization_and_hand_value():
    assert box_kernel_hat(1, 0.0) == pytest.approx(1.0, abs=1e-15)
    assert box_kernel_hat(1, pi) == pytest.approx(-1 / 3, abs=1e-14)


@pytest.mark.parametrize("r", [1, 2, 5, 13, 30])
def test_box_kernel_matches_direct_transform(r):
    grid = char_function(box_signal(1, r), 128)
    kernel = box_kernel_hat(r, grid.theta_axis())
    assert np.max(np.abs(kernel - grid.values.real)) < 1e-12
    assert np.max(np.abs(grid.values.imag)) < 1e-12


def test_box_kernel_2d_factorizes():
    pts = np.array([[0.3, 1.1], [pi, 0.4], [2.0, 2.0]])
    expect = box_kernel_hat(2, pts[:, 0]) * box_kernel_hat(2, pts[:, 1])
    assert np.allclose(box_kernel_hat(2, pts), expect, atol=1e-14)


# ---------------------------------------------------------------------------
# Parseval pairing


def test_parseval_delta():
    d = LatticeSignal.delta(1)
    res = parseval_pairing(d, d, 8)
    assert res.lattice_value == 1
    assert res.grid_value == pytest.approx(1.0, abs=1e-12)


def test_parseval_walk_self_pairing(third):
    res = parseval_pairing(third.signal(), third.signal(), 16)
    assert res.lattice_value == Fraction(1, 3)
    assert abs(res.grid_value - 1 / 3) < 1e-12


def test_parseval_aliasing_flagged(third):
    p4 = convolution_power(third, 4)
    with pytest.raises(AliasingError):
        parseval_pairing(p4, p4, 8)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6), st.integers(1, 2))
def test_parseval_sides_agree(seed, dim):
    rng = random.Random(seed)
    a = random_signal(rng, dim, radius=5)
    b = random_signal(rng, dim, radius=5)
    res = parseval_pairing(a, b, 16)
    scale = max(1.0, float(a_norm(a)) * float(a_norm(b)))
    assert abs(complex(res.lattice_value) - res.grid_value) < 1e-10 * scale


# ---------------------------------------------------------------------------
# norms and the embedding constant


def test_norms_on_delta_and_spike():
    d = LatticeSignal.delta(1)
    assert a_norm(d) == 1 and h_norm(d, 1) == 1.0
    spike = LatticeSignal.from_entries(1, {(2,): 1})
    assert a_norm(spike) == 1
    assert h_norm(spike, 1) == 2.0


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6), st.integers(-5, 5))
def test_a_norm_translation_invariant(seed, shift):
    sig = random_signal(random.Random(seed), 1)
    assert a_norm(sig.shift((shift,))) == a_norm(sig)


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10**6))
def test_a_norm_modulation_invariant(seed):
    rng = random.Random(seed)
    sig = random_signal(rng, 1)
    zeta = rng.uniform(-pi, pi)
    assert float(a_norm(sig.modulate((zeta,)))) == pytest.approx(float(a_norm(sig)), rel=1e-12)


def test_h_norm_brute_force_agreement():
    rng = random.Random(3)
    for dim in (1, 2):
        sig = random_signal(rng, dim, radius=4)
        nu_bar = dim // 2 + 1
        expected = abs(complex(sig[(0,) * dim]))
        for i in range(dim):
            expected += sqrt(
                sum(abs(complex(v)) ** 2 * s[i] ** (2 * nu_bar) for s, v in sig.entries.items())
            )
        assert h_norm(sig, nu_bar) == pytest.approx(expected, rel=1e-13)


def test_embedding_constant_values():
    assert nowak_constant(1) == pytest.approx(pi / sqrt(3), abs=1e-3)
    # collapsed nested sums have closed forms in low dimension
    assert nowak_constant(2) == pytest.approx(sqrt(4 * APERY), rel=1e-5)
    assert nowak_constant(3) == pytest.approx(2 * sqrt(4 * (pi**2 / 6 + APERY)), rel=1e-5)
    with pytest.raises(ValueError):
        nowak_constant(5)


def test_embedding_check_random_signals():
    for dim in (1, 2, 3):
        assert nowak_check(LatticeSignal.delta(dim))
    rng = random.Random(17)
    for dim in (1, 2, 3):
        for _ in range(30):
            assert nowak_check(random_signal(rng, dim, radius=6))


# ---------------------------------------------------------------------------
# schedules


def test_config_eps_validation():
    with pytest.raises(ValueError):
        FourierConfig(1, Fraction(2, 5))
    with pytest.raises(ValueError):
        FourierConfig(1, 0)
    fc = FourierConfig(1, "1/10")
    assert fc.nu == 2 and fc.nu_bar == 1
    assert fc.eps_proof_bound == Fraction(1, 25)
    assert not fc.eps_within_proof_bound
    assert FourierConfig(1, "1/30").eps_within_proof_bound


def test_radius_schedule_is_exact_ceiling():
    fc = FourierConfig(1, "1/10")
    assert fc.radius(1024) == 2  # 1024^(1/10) = 2 exactly
    assert fc.radius(1025) == 3  # just above an exact power
    assert fc.radius(1) == 1
    fc2 = FourierConfig(1, "1/4")
    assert [fc2.radius(n) for n in (16, 17, 81)] == [2, 3, 3]


def test_ball_radius_shrinks():
    fc = FourierConfig(1, "1/10")
    assert fc.ball_radius(4) > fc.ball_radius(64) > fc.ball_radius(1024) > 0


def test_smallest_grid():
    assert smallest_grid(0) == 4
    assert smallest_grid(10) == 32
    assert smallest_grid(16) == 64


# ---------------------------------------------------------------------------
# defect signal


def test_defect_mass_zero_exactly(third):
    fc = FourierConfig(1, "1/10")
    g, _ = defect_signal(third, 4, fc)
    assert g.mass() == 0


def test_defect_a_norm_matches_direct_rational(third):
    fc = FourierConfig(1, "1/10")
    g, norms = defect_signal(third, 4, fc)
    # independent route: naive convolutions, then the plain absolute sum
    p4 = convolution_power(third, 4)
    direct = p4 - convolve(box_signal(1, fc.radius(4)), p4)
    assert g.entries == direct.entries
    exact = sum((abs(v) for v in direct.entries.values()), Fraction(0))
    assert norms.a_norm == pytest.approx(float(exact), rel=1e-14)


def test_defect_sobolev_matches_lattice_parseval(third):
    fc = FourierConfig(1, "1/10")
    g, norms = defect_signal(third, 8, fc, grid_size=256)
    exact = sqrt(sum(float(v) ** 2 * s[0] ** 4 for s, v in g.entries.items()))
    assert norms.sobolev == pytest.approx(exact, rel=1e-10)


def test_defect_norms_decrease_and_respect_bound(third):
    fc = FourierConfig(1, "1/10")
    rows = [defect_signal(third, n, fc, 1024)[1] for n in (4, 16, 64, 256)]
    totals = [row.h_total for row in rows]
    assert all(a > b for a, b in zip(totals, totals[1:]))
    for row in rows:
        assert row.a_norm <= row.bound + 1e-8


def test_defect_grid_too_small_raises(third):
    fc = FourierConfig(1, "1/10")
    with pytest.raises(AliasingError):
        defect_signal(third, 64, fc, grid_size=64)


def test_derivative_weights_match_finite_differences(third):
    """Frequency-side derivative values against central differences."""
    fc = FourierConfig(1, "1/10")
    g, _ = defect_signal(third, 4, fc, grid_size=512)
    M = 512
    gt = char_function(g, M).values
    dd = char_function(_derivative_weighted(g, 0, 2), M).values
    h = 2 * pi / M
    fd = (np.roll(gt, -1) - 2 * gt + np.roll(gt, 1)) / h**2
    assert np.max(np.abs(fd - dd)) < 1e-3


# ---------------------------------------------------------------------------
# drift removal


def test_drift_removal_zero_drift_identity(third):
    grid, removal = drift_removed_char(third, 9, 64)
    assert removal.delta == (0,)
    assert np.array_equal(grid.values, char_function(third.signal(), 64).values)


@pytest.mark.parametrize("n,delta", [(3, 1), (10, 3), (100, 33)])
def test_drift_removal_nearest_integer(drifted, n, delta):
    _, removal = drift_removed_char(drifted, n, 32)
    assert removal.delta == (delta,)
    assert all(g <= removal.gradient_bound for g in removal.gradient_at_zero)


def test_drift_removal_deterministic_step_multiplier_is_one():
    # a point mass at +1 (allowed here for the multiplier only): the phase
    # factor cancels the character exactly, leaving the constant 1
    p = WalkDistribution.from_weights(1, {(1,): 1}, allow_trivial=True)
    for n in (1, 4, 9):
        grid, removal = drift_removed_char(p, n, 32)
        assert removal.delta == (n,)
        assert np.max(np.abs(grid.values - 1.0)) < 1e-12


def test_drift_removal_tie_toward_zero():
    p = WalkDistribution.from_weights(1, {(0,): Fraction(1, 2), (1,): Fraction(1, 2)})
    _, removal = drift_removed_char(p, 1, 32)  # n v = 1/2 exactly
    assert removal.delta == (0,)
    assert removal.gradient_at_zero == (Fraction(1, 2),)


def test_drift_multiplier_preserves_modulus(drifted):
    grid, _ = drift_removed_char(drifted, 7, 64)
    plain = char_function(drifted.signal(), 64)
    assert np.allclose(np.abs(grid.values), np.abs(plain.values), atol=1e-14)


# ---------------------------------------------------------------------------
# spectral pairing for periodic functions


@pytest.mark.parametrize("n", [1, 2, 5, 16, 64])
def test_periodic_pairing_identity(third, n):
    pairing = periodic_pairing({(0,): Fraction(1), (1,): Fraction(-1)}, (2,), third, n)
    assert pairing.space_value == Fraction(-1, 3) ** n
    assert abs(complex(pairing.space_value) - pairing.spectral_value) < 1e-10
    # the space side is the unit-square global-local correlation
    from bakerlattice import LocalObservable, correlate_global_local, periodic_observable

    parity = periodic_observable((2,), {(0,): 1, (1,): -1})
    corr = correlate_global_local(parity, LocalObservable.unit_square((0,)), third, n)
    assert corr == pairing.space_value


def test_periodic_pairing_random_tables(third):
    rng = random.Random(23)
    for _ in range(10):
        L = rng.randint(1, 4)
        table = {(i,): Fraction(rng.randint(-5, 5), rng.randint(1, 5)) for i in range(L)}
        n = rng.randint(0, 20)
        pairing = periodic_pairing(table, (L,), third, n, grid_size=4 * L)
        pn = convolution_power(third, n)
        direct = sum((table[(s[0] % L,)] * w for s, w in pn.entries.items()), Fraction(0))
        assert pairing.space_value == direct
        assert abs(complex(direct) - pairing.spectral_value) < 1e-10


# ---------------------------------------------------------------------------
# local bounds report


def test_local_report_third_walk(third):
    fc = FourierConfig(1, "1/10")
    rep = local_bounds_report(third, [4, 16, 64], fc, 512)
    assert rep.full_lattice and rep.witness is None
    assert rep.max_modulus_off_zero < 1
    assert rep.quadratic_coefficient == pytest.approx(1 / 3, abs=0.02)
    assert rep.kappa_hat is not None and rep.kappa_hat > 0
    assert all(row.kappa_residual >= -1e-12 for row in rep.tail_rows)
    assert rep.derivative_rows and all(row.ratio > 0 for row in rep.derivative_rows)


def test_local_report_reducible_witness(reducible):
    fc = FourierConfig(1, "1/10")
    rep = local_bounds_report(reducible, [4, 16], fc, 512)
    assert not rep.full_lattice
    theta, modulus = rep.witness
    assert theta[0] == pytest.approx(pi, abs=1e-12)
    assert modulus == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize("r", [1, 2, 5, 10, 100])
def test_taylor_coefficients(r):
    assert taylor_coefficient(1, r) == Fraction(-r * (r + 1), 6)
    assert taylor_coefficient(0, r) == 1
    # second order from the exact power sum
    s4 = 2 * sum(a**4 for a in range(1, r + 1))
    assert taylor_coefficient(2, r) == Fraction(s4, 24 * (2 * r + 1))


def test_all_full_presets_have_modulus_below_one():
    fc = FourierConfig(1, "1/10")
    rep = local_bounds_report(preset("third-walk"), [4], fc, 256)
    assert rep.full_lattice and rep.max_modulus_off_zero < 1
    rep2d = local_bounds_report(preset("lazy-2d"), [4], FourierConfig(2, "1/10"), 64)
    assert rep2d.full_lattice and rep2d.max_modulus_off_zero < 1
    # the drifted preset steps on {-1, +1}: differences span 2Z, modulus 1 at pi
    repd = local_bounds_report(preset("drifted-1d"), [4], fc, 256)
    assert not repd.full_lattice
    assert repd.witness[1] == pytest.approx(1.0, abs=1e-12)
