"""Measurement outcomes, exact probabilities, and the update rule.

A measurement is a commuting set of observables; its outcomes partition the
ontic space.  Probabilities come out as exact fractions, and after an
outcome the new description is the smallest valid state compatible with the
prior knowledge and repeatability of the outcome.
"""

from toytheory import (
    bell_pair, discrete_space, make_measurement, outcome_for_label,
    outcome_probability, outcomes, render_grid, toy_bit, update_state,
)

print(__doc__)

sp1 = discrete_space(2, 1)
mz = make_measurement(sp1, [(1, 0)])

print("Measuring the position of toy + (position completely unknown):")
for out in outcomes(mz):
    print(f"  P(q = {out.label[0]}) = {outcome_probability(toy_bit('+'), mz, out)}")

out0 = outcome_for_label(mz, (0,))
post = update_state(toy_bit("+"), mz, out0)
print("after outcome 0 the state collapses to toy 0:",
      render_grid(post).to_ascii())

print("\nThe correlated pair (q1 = q2, p1 = p2 at d=2):")
bell = bell_pair(2)
print(render_grid(bell).to_ascii())

mz_b = make_measurement(discrete_space(2, 2), [(0, 0, 1, 0)])
out = outcome_for_label(mz_b, (0,))
print(f"\nP(q_B = 0) = {outcome_probability(bell, mz_b, out)}")
post = update_state(bell, mz_b, out)
print("update keeps the correlation: the post state is toy0 (x) toy0:")
print(render_grid(post).to_ascii())
print("\nre-measuring q_B now gives 0 with certainty:",
      outcome_probability(post, mz_b, out))
