"""Almost automorphisms of the rooted tree, with finite data.

An element is given by two complete finite subtrees, a leaf bijection, and
a finitary twist per leaf; composition refines representatives to a common
interface, and the canonical form is the unique minimal representative.
The bridge to the algebra side: an element acting off the radius-n ball
induces a level permutation whose canonical double coset under the ball
group is a complete two-sided invariant.
"""

import random

from heckelab.permgroup import Permutation
from heckelab.spheromorph import (AlmostAutomorphism, canonical_form, compose,
                                  double_coset_key, inverse,
                                  is_in_level_subgroup, minimal_level,
                                  random_tree_automorphism, to_json_dict)
from heckelab.treefam import TreeShape

shape = TreeShape(2, 2)

# A plain tree automorphism: root portrait swapping the two halves, with a
# deeper twist below the left child.
g = AlmostAutomorphism.automorphism(shape, {(): (1, 0), (0,): (1, 0)})
print("g =", g)
print("g maps address 001 to", g.apply_to_address((0, 0, 1)))

# A genuine almost automorphism: transpose two level-2 vertices that sit
# under different parents.  No tree automorphism does that.
sigma = Permutation.from_cycles(4, (1, 2))
h = AlmostAutomorphism.from_level_permutation(shape, 2, sigma)
print("\nh =", h)
print("h in level-1 subgroup:", is_in_level_subgroup(h, 1))
print("h in level-2 subgroup:", is_in_level_subgroup(h, 2))
print("minimal level of h:", minimal_level(h))
print("minimal level of g:", minimal_level(g))

# Group structure on canonical forms.
k = compose(g, h)
print("\ng·h =", k)
print("(g·h)·(g·h)^{-1} is the identity:", compose(k, inverse(k)).is_identity())
print("canonical form of g·h:", canonical_form(k))

# Double-coset keys: tree automorphisms key to the identity class, while h
# represents a nontrivial class of the level-2 pair.
rng = random.Random(0)
phi = random_tree_automorphism(shape, rng)
print("\nkey of a random automorphism:", double_coset_key(phi, 2).images)
print("key of h:", double_coset_key(h, 2).images)
print("key is two-sided invariant:",
      double_coset_key(compose(compose(phi, h), phi), 2) == double_coset_key(h, 2))

# Elements serialize to a small JSON text format (see the `spher` CLI).
print("\nJSON form of g:", to_json_dict(g))
