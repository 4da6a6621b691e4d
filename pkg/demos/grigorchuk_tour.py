"""The Grigorchuk generators as wreath recursions, and rigid stabilizers.

The four involutions a, b, c, d act on the infinite binary tree by the
recursion a = swap, b = (a, c), c = (a, d), d = (1, b).  All statements are
depth-quantified: "identity to depth D" is an exact statement about the
level-D truncation.
"""

from lawless import trees

gens = trees.grigorchuk_generators()

print("action on a few strings:")
for name in "abcd":
    images = {s: trees.act_on_string(gens[name], s) for s in ["00", "01", "10", "11"]}
    print(f"  {name}: {images}")
print()

print("defining relations of the generating set, checked to depth 14:")
for word in ["aa", "bb", "cc", "dd", "bcd"]:
    print(f"  {word} = 1: {trees.is_identity_to_depth(word, 14, gens)}")
print()

print("the dihedral relation (ad)^4 = 1, and its failure at lower powers:")
for reps in (1, 2, 3, 4):
    word = "ad" * reps
    print(f"  (ad)^{reps} trivial to depth 8: {trees.is_identity_to_depth(word, 8, gens)}")
print()

# sections: the recursion is self-similar
b1 = trees.section(gens["b"], "1")
print("section of b at vertex 1 is the state:", b1.root_state)
print("section of d at vertex 0 is the state:", trees.section(gens["d"], "0").root_state)
print()

# rigid stabilizers: words supported entirely inside one subtree
for vertex in ("1", "0"):
    found = trees.rist_search(gens, vertex, max_len=3, depth=8)
    print(f"words of length <= 3 supported inside subtree {vertex}: {found[:8]}{'...' if len(found) > 8 else ''}")
print()
print("so the rigid stabilizer of vertex 1 is visibly nontrivial (d lives there),")
print("while no single generator is supported inside subtree 0.")
