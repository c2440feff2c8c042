"""Double cosets of finite permutation-group pairs.

Walks through the basic vocabulary: permutations, stabilizer chains,
right-coset indices, and the double-coset table with its R-indices.
"""

from heckelab.permgroup import (DoubleCosetTable, Permutation, dihedral_square,
                                r_index, right_coset_index, symmetric_group)

# The classic warm-up pair: S_4 over the dihedral group of the square.
G = symmetric_group(4)
H = dihedral_square()
print(f"|G| = {G.order()}, |H| = {H.order()}")

# Right cosets H\G: canonical representatives are the lexicographic minima
# of their cosets, so the identity always represents H itself at index 0.
cosets = right_coset_index(G, H)
print(f"{len(cosets)} right cosets, representatives:")
for i, rep in enumerate(cosets.representatives):
    print(f"  {i}: {rep.cycle_string()}")

# Double cosets H\G/H partition G; sizes are |H| times the number of right
# cosets swallowed by each class.
table = DoubleCosetTable(G, H, cosets)
print(f"\n{len(table)} double cosets:")
for entry in table.entries:
    print(f"  rep {entry.representative.cycle_string():<10} size {entry.size:>3}  "
          f"R = {entry.r_index}, R(inverse) = {entry.r_index_inv}")

# R(x) counts the right cosets inside HxH and equals [H : H ∩ x^{-1}Hx].
x = table.entries[1].representative
print(f"\nr_index of {x.cycle_string()}: {r_index(x, H)}")
print(f"r_index of the identity: {r_index(Permutation.identity(4), H)}")

# The flagship pair of the package: S_8 over the depth-3 binary tree group.
from heckelab.treefam import q_group

Q3 = q_group(2, 3)
big = DoubleCosetTable(symmetric_group(8), Q3)
print(f"\n(S_8, Q_3): |Q_3| = {Q3.order()}, index {len(big.cosets)}, "
      f"{len(big)} double cosets")
print("sizes:", [e.size for e in big.entries])
print("sum  :", sum(e.size for e in big.entries), "= 8! =", 40320)
print("unimodular (R(x) = R(x^-1) everywhere):", big.is_unimodular())
