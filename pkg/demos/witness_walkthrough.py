"""Walk through a witness construction step by step.

A group action separates its set when every pointwise stabilizer of a finite
set moves every outside point.  For such an action no reduced word is a law:
this script builds the certificate for the commutator word over the natural
action of the alternating group on ten points, printing each trajectory
extension and every repair.
"""

from lawless import perm, separation, words

word = words.parse_word("abAB")
chain = perm.build_bsgs(perm.standard_group("alternating", 10))
action = separation.perm_action(chain, name="alt:10")

print(f"word: {word} (length {len(word.letters)}, rank {word.rank})")
print(f"group: natural A_10, order {perm.group_order(chain)}")
print()

trace = separation.witness(word, action, x0=1)

print("trajectory:", " -> ".join(str(x) for x in trace.trajectory))
print("substitution tuple:")
for i, g in enumerate(trace.tuple_, start=1):
    print(f"  generator {i} -> {perm.cycle_form(g)}")
print()

print(f"{len(trace.modifications)} repair(s) were needed:")
for m in trace.modifications:
    print(
        f"  step {m.step}: landed on trajectory point #{m.collided_with}; "
        f"kept points {list(m.fixed_points)} fixed and spliced in {perm.cycle_form(m.mover)}"
    )
print()

# the final check: the word value genuinely moves the start point
value = words.evaluate(word, trace.tuple_, perm.compose, perm.inverse, perm.identity_perm(10))
print(f"w(tuple) = {perm.cycle_form(value)} sends 1 to {perm.act(1, value)}")
print("verified:", separation.verify_trace(trace, action))

# the same machinery rejects any tampering
trace.trajectory[2] = trace.trajectory[1]
print("after tampering with the trajectory:", separation.verify_trace(trace, action))
