"""Measurement as a physical process: copying an observable into a memory.

The analogue of a pointer-coupling measurement is a symplectic transform
that correlates a chosen observable f of the information system with a
pointer observable v of a memory system.  If f was known, the memory ends in
a definite state; if not, the memory's reduced state is fully mixed - the
global correlation carries the information.
"""

from toytheory import (
    apply_to_state, cnot_gate, discrete_space, marginal, maximally_mixed,
    observable, observable_copy_transform, render_grid, states_equal, tensor,
    toy_bit,
)

print(__doc__)

sp2 = discrete_space(2, 2)

print("The simplest copy is the toy CNOT, writing q of the control into the")
print("target.  On toy1 (x) toy0 it produces toy1 (x) toy1:")
out = apply_to_state(cnot_gate(sp2, 0, 1), tensor(toy_bit("1"), toy_bit("0")))
print(render_grid(out).to_ascii())

print("\nOn toy+ (x) toy0 (control position unknown) it entangles:")
out = apply_to_state(cnot_gate(sp2, 0, 1), tensor(toy_bit("+"), toy_bit("0")))
print(render_grid(out).to_ascii())
print("each marginal alone is fully mixed:",
      states_equal(marginal(out, [0]), maximally_mixed(discrete_space(2, 1))))

print("\nAn arbitrary observable copies the same way.  Copy f = p of the")
print("information system into v = q of the memory (memory listed first):")
info = discrete_space(2, 1)
mem = discrete_space(2, 1)
t = observable_copy_transform(observable(info, (0, 1)), observable(mem, (1, 0)))
joint = tensor(toy_bit("0"), toy_bit("+"))   # memory q=0, information p=0
out = apply_to_state(t, joint)
print("after the copy, v_mem - f_info is known with value",
      out.value_of((1, 0, 0, 1)))
print("memory marginal (f was known, so the pointer is definite):")
print(render_grid(marginal(out, [0])).to_ascii())

joint = tensor(toy_bit("0"), toy_bit("0"))   # information p unknown
out = apply_to_state(t, joint)
print("\nwith f unknown, the pointer's reduced state is fully mixed:")
print(render_grid(marginal(out, [0])).to_ascii())
