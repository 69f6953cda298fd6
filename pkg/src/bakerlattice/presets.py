"""Bundled walk distributions used throughout the tests, demos and CLI."""

from fractions import Fraction

from .lattice import WalkDistribution


def third_walk() -> WalkDistribution:
    """Same-site and nearest-neighbor steps on Z, probability 1/3 each."""
    third = Fraction(1, 3)
    return WalkDistribution.from_weights(1, {(-1,): third, (0,): third, (1,): third})


def drifted_1d() -> WalkDistribution:
    return WalkDistribution.from_weights(1, {(1,): Fraction(2, 3), (-1,): Fraction(1, 3)})


def reducible_1d() -> WalkDistribution:
    """Steps {0, 2}: differences span 2Z, so the walk never mixes parity."""
    return WalkDistribution.from_weights(1, {(0,): Fraction(1, 2), (2,): Fraction(1, 2)})


def lazy_2d() -> WalkDistribution:
    fifth = Fraction(1, 5)
    return WalkDistribution.from_weights(
        2,
        {(0, 0): fifth, (1, 0): fifth, (-1, 0): fifth, (0, 1): fifth, (0, -1): fifth},
    )


PRESETS = {
    "third-walk": third_walk,
    "drifted-1d": drifted_1d,
    "reducible-1d": reducible_1d,
    "lazy-2d": lazy_2d,
}


def preset(name: str) -> WalkDistribution:
    try:
        return PRESETS[name]()
    except KeyError:
        raise ValueError(f"unknown preset {name!r}; available: {sorted(PRESETS)}") from None
