"""Forgetting as a physical process with explicit memories.

Copy two system bits into two memory bits, then swap the second memory with
a fully mixed environment.  The record of the second measurement is gone -
its system+memory pair ends fully mixed - while the first survives.  Along
the way: not every union of states is a valid expression of ignorance.
"""

from toytheory import run_forgetting, mixture_support, render_grid, tensor, toy_bit

print(__doc__)

report = run_forgetting()
for key, value in report.verdict.items():
    print(f"  {key}: {value}")

print("\nThe three-state union that no valid state of knowledge matches")
print("(12 of 16 boxes filled):")
union = mixture_support([
    tensor(toy_bit("0"), toy_bit("0")),
    tensor(toy_bit("1"), toy_bit("0")),
    tensor(toy_bit("1"), toy_bit("1")),
])
print(render_grid(union).to_ascii())
