"""Toy bits, grid diagrams, and the knowledge balance principle.

A d=2 system has four ontic states, drawn as boxes 1..4 with the convention
box = 1 + 2q + p.  A state of knowledge fills the boxes compatible with what
is known: pure states fill two, the fully mixed state fills all four, and
nothing in between is allowed.
"""

from toytheory import (
    NotIsotropic, discrete_space, knowledge_bits, make_state, mixture_support,
    render_grid, is_valid_support, tensor, toy_bit,
)

print(__doc__)

for name in ("0", "1", "+", "-", "i", "-i", "mix"):
    s = toy_bit(name)
    print(f"toy {name:>2}:  {render_grid(s).to_ascii()}   "
          f"(knows {knowledge_bits(s)} bit)")

print("\nKnowing q and p together violates classical complementarity:")
try:
    make_state(discrete_space(2, 1), [(1, 0), (0, 1)], (0, 0))
except NotIsotropic as e:
    print(f"  rejected: {e}")

print("\nMixing toy 0 with toy 1 gives the fully mixed state:")
print(render_grid(mixture_support([toy_bit("0"), toy_bit("1")])).to_ascii())

print("\nBut the union of toy 0 and toy + covers three boxes, and no valid")
print("state has a three-box support:")
sup = mixture_support([toy_bit("0"), toy_bit("+")])
print(render_grid(sup).to_ascii())
print(f"  valid? {is_valid_support(sup) is not None}")

print("\nTwo toy bits are drawn on a 4x4 grid (rows: system A, bottom-up;")
print("columns: system B, left to right).  toy1 (x) toy0:")
print(render_grid(tensor(toy_bit("1"), toy_bit("0"))).to_ascii())
