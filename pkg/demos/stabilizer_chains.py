"""Stabilizer chains at work: orders, membership, sampling, separation orders.

Everything downstream rests on this kernel: a deterministic Schreier-Sims
chain gives exact group orders, membership tests, pointwise stabilizers and
exactly uniform random elements.
"""

import random
from collections import Counter

from lawless import perm

# a mystery subgroup of S_8
gens = [perm.parse_permutation("(1 2 3 4 5 6 7 8)"), perm.parse_permutation("(1 2)", degree=8)]
chain = perm.build_bsgs(perm.group(gens, degree=8))
print("order of <(1..8), (1 2)>:", perm.group_order(chain), "(8! =", 40320, ")")
print("base:", chain.base)

odd = perm.parse_permutation("(1 2)", degree=8)
even = perm.parse_permutation("(1 2 3)", degree=8)
A8 = perm.build_bsgs(perm.standard_group("alternating", 8))
print("(1 2) in A_8:", perm.contains(A8, odd), "| (1 2 3) in A_8:", perm.contains(A8, even))
print()

# pointwise stabilizers realize the G_Y of the separation story
stab = perm.pointwise_stabilizer(A8, [1, 2, 3])
print("A_8 stabilizer of {1,2,3}: order", perm.group_order(stab), "(5!/2 =", 60, ")")
print("its orbit of 4:", sorted(perm.orbit(perm.group(stab.generators(), 8), 4)))
print()

# separation order: the worst minimum orbit size over all n-point stabilizers
for n in (1, 2, 3):
    print(f"A_8 separates in order ({n}, {perm.separation_order(A8, n)})")
print()

# exactly uniform sampling via one transversal pick per level
rng = random.Random(1)
counts = Counter(perm.uniform_element(A8, rng).images[0] for _ in range(20000))
print("image of point 1 under 20000 uniform draws (should be flat):")
print("  ", dict(sorted((k + 1, v) for k, v in counts.items())))
