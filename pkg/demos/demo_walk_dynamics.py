#!/usr/bin/env python3
"""A walking tour of the baker lattice.

The phase space is Z^d x [0,1)^2: one unit square per lattice site.  One
step of the map cuts the square into vertical slabs whose widths are the
step probabilities, stretches the chosen slab to full width, contracts the
second coordinate by the same factor, and moves to the neighboring site.
Watching only the site coordinate gives back the random walk.
"""

from fractions import Fraction

from bakerlattice import (
    PhasePoint,
    Strip,
    convolution_power,
    inverse_step,
    preset,
    push_strip,
    simulate_walk,
    step,
)

p = preset("third-walk")
print("Walk:", p.to_json_dict())
print()

# --- exact orbits ---------------------------------------------------------
x = PhasePoint((0,), Fraction(1, 2), Fraction(1, 5))
print("A single exact orbit (everything stays rational):")
y = x
for k in range(4):
    print(f"  T^{k} x = site {y.site[0]:+d},  y1 = {y.y1},  y2 = {y.y2}")
    y = step(y, p)
back = y
for _ in range(4):
    back = inverse_step(back, p)
print("Undoing four steps returns the start exactly:", back == x)
print()

# --- strips decompose exactly ---------------------------------------------
q = Strip((0,), Fraction(0), Fraction(1, 2))
pushed = push_strip(q, p, 2)
print(f"The strip {{0}} x [0,1) x [0,1/2) splits after 2 steps into {len(pushed.components)} strips:")
for c in pushed.components[:5]:
    print(f"  word {c.word} -> site {c.site[0]:+d}, interval [{c.lo}, {c.hi}), height {c.height}")
print("  ...")
print("Total height is conserved exactly:", pushed.total_height() == q.height)

masses = pushed.site_masses()
law = convolution_power(p, 2)
print("Collecting heights per site reproduces the 2-step law exactly:",
      masses == law.entries)
print()

# --- Monte Carlo agrees with the exact law ---------------------------------
hist = simulate_walk(p, 4, 200000, seed=2024)
law4 = convolution_power(p, 4)
print("200000 simulated points after 4 steps, against the exact law p^(4):")
print(f"  {'site':>5} {'count':>8} {'empirical':>11} {'exact':>9}")
for site in sorted(law4.entries):
    c = hist.counts.get(site, 0)
    print(f"  {site[0]:>5} {c:>8} {c / 200000:>11.5f} {float(law4[site]):>9.5f}")
