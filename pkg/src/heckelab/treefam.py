"""Rooted trees with root degree k and branching degree d, and their
ball automorphism groups realized as permutation groups on ordered levels.

Vertices are addressed by words: the root is the empty word, a level-n
vertex is c_1 c_2 ... c_n with c_1 in {0..k-1} and c_i in {0..d-1} for
i >= 2.  Level sets are totally ordered lexicographically by address;
this ordering pins every group embedding to a concrete permutation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ScaleError
from .permgroup import PermGroup, Permutation

#: largest level set realized as explicit permutations (desk-scale cap)
LEVEL_POINT_CAP = 64


@dataclass(frozen=True)
class TreeShape:
    """Branching data: root has k children, every other vertex has d."""

    d: int
    k: int

    def __post_init__(self):
        if self.d < 2 or self.k < 2:
            raise ValueError("tree degrees must be at least 2")

    def level_size(self, n: int) -> int:
        if n < 0:
            raise ValueError("level must be nonnegative")
        if n == 0:
            return 1
        return self.k * self.d ** (n - 1)

    def arity(self, address: tuple) -> int:
        """Number of children of the vertex at `address`."""
        return self.k if len(address) == 0 else self.d

    def vertices(self, n: int) -> list:
        """All level-n addresses in lexicographic order."""
        level = [()]
        for _ in range(n):
            level = [v + (c,) for v in level for c in range(self.arity(v))]
        return level

    def ball(self, n: int) -> list:
        """All addresses of the radius-n ball, sorted by (level, address)."""
        out = []
        for j in range(n + 1):
            out.extend(self.vertices(j))
        return out


def level_size(shape: TreeShape, n: int) -> int:
    return shape.level_size(n)


def closed_form_order(shape: TreeShape, n: int) -> int:
    """Order of the ball automorphism group: k! times d! per deeper internal vertex."""
    internal = sum(shape.level_size(j) for j in range(1, n))
    return math.factorial(shape.k) * math.factorial(shape.d) ** internal


def _check_cap(shape: TreeShape, n: int):
    size = shape.level_size(n)
    if size > LEVEL_POINT_CAP:
        raise ScaleError(
            f"level {n} has {size} vertices, above the cap {LEVEL_POINT_CAP}")


def _subtree_swap(shape: TreeShape, n: int, vertex: tuple, c: int) -> Permutation:
    """Swap the subtrees below children c and c+1 of `vertex`, seen on level n."""
    leaves = shape.vertices(n)
    position = {addr: i for i, addr in enumerate(leaves)}
    depth = len(vertex)
    images = list(range(len(leaves)))
    a, b = vertex + (c,), vertex + (c + 1,)
    for i, addr in enumerate(leaves):
        if addr[:depth + 1] == a:
            images[i] = position[b + addr[depth + 1:]]
        elif addr[:depth + 1] == b:
            images[i] = position[a + addr[depth + 1:]]
    return Permutation(images)


def ball_aut_group(shape: TreeShape, n: int) -> PermGroup:
    """Automorphisms of the radius-n ball acting on the ordered level set V_n.

    Generated by child swaps at every internal vertex; the order matches
    closed_form_order(shape, n).
    """
    if n < 1:
        raise ValueError("ball automorphism groups are built for n >= 1")
    _check_cap(shape, n)
    gens = []
    for depth in range(n):
        for vertex in shape.vertices(depth):
            for c in range(shape.arity(vertex) - 1):
                gens.append(_subtree_swap(shape, n, vertex, c))
    group = PermGroup(shape.level_size(n), gens)
    assert group.order() == closed_form_order(shape, n)
    return group


def q_group(d: int, l: int) -> PermGroup:
    """Depth-l quotient of the automorphism group of the regular tree (k = d)."""
    return ball_aut_group(TreeShape(d, d), l)


@dataclass(frozen=True)
class LevelGroupSpec:
    """Which tree group to realize: P_n of T_{d,k} or Q_l of the regular tree.

    The depth groups are the ball groups of the regular tree (k = d), so a
    "depth" spec is the same realization with k forced to d.
    """

    kind: str          # "ball" or "depth"
    d: int
    k: int
    level: int

    def __post_init__(self):
        if self.kind not in ("ball", "depth"):
            raise ValueError(f"unknown level-group kind {self.kind!r}")

    @property
    def shape(self) -> TreeShape:
        return TreeShape(self.d, self.d if self.kind == "depth" else self.k)

    @property
    def points(self) -> int:
        return self.shape.level_size(self.level)

    def order(self) -> int:
        return closed_form_order(self.shape, self.level)

    def realize(self) -> PermGroup:
        return ball_aut_group(self.shape, self.level)

    def label(self) -> str:
        letter = "Q" if self.kind == "depth" else "P"
        return f"(S_{self.points}, {letter}_{self.level})"


def restriction_to_level(shape: TreeShape, n: int, p: Permutation) -> Permutation:
    """Project a level-(n+1) permutation of ball-automorphism type to level n.

    A ball automorphism maps sibling blocks rigidly, so the image of a
    level-n vertex is the parent of the image of its first child.
    """
    parents = shape.vertices(n)
    children = shape.vertices(n + 1)
    parent_pos = {addr: i for i, addr in enumerate(parents)}
    images = []
    for v in parents:
        first_child_index = children.index(v + (0,))
        images.append(parent_pos[children[p(first_child_index)][:-1]])
    return Permutation(images)


@dataclass(frozen=True)
class WreathEmbedding:
    """Block data identifying S_{d^l} ^ {|V_n|} ⋊ S_{|V_n|} inside S_{|V_{n+l}|}.

    Level-(n+l) addresses are grouped by their level-n prefix; each block is
    a contiguous run of d^l addresses in lexicographic order, matching the
    level-l ordering of the regular tree with k = d.
    """

    shape: TreeShape
    l: int
    n: int

    def __post_init__(self):
        _check_cap(self.shape, self.n + self.l)

    @property
    def block_count(self) -> int:
        return self.shape.level_size(self.n)

    @property
    def block_size(self) -> int:
        return self.shape.d ** self.l

    @property
    def total_points(self) -> int:
        return self.shape.level_size(self.n + self.l)

    def blocks(self) -> list:
        D = self.block_size
        return [list(range(i * D, (i + 1) * D)) for i in range(self.block_count)]

    def block_embed(self, i: int, p: Permutation) -> Permutation:
        """Image of a permutation of d^l points acting inside block i."""
        if p.degree != self.block_size:
            raise ValueError(f"expected a permutation of {self.block_size} points")
        D = self.block_size
        images = list(range(self.total_points))
        for r in range(D):
            images[i * D + r] = i * D + p(r)
        return Permutation(images)

    def top_embed(self, sigma: Permutation) -> Permutation:
        """Image of a block permutation moving the |V_n| blocks rigidly."""
        if sigma.degree != self.block_count:
            raise ValueError(f"expected a permutation of {self.block_count} blocks")
        D = self.block_size
        images = [sigma(i) * D + r for i in range(self.block_count) for r in range(D)]
        return Permutation(images)

    def base_copies(self, group: PermGroup) -> list:
        """Generators of every block copy of `group` (degree d^l)."""
        return [self.block_embed(i, g)
                for i in range(self.block_count) for g in group.generators]

    def spanned_group(self) -> PermGroup:
        """Subgroup generated by the Q_l block copies and the P_n block action."""
        base = q_group(self.shape.d, self.l)
        top = ball_aut_group(self.shape, self.n)
        gens = self.base_copies(base)
        gens.extend(self.top_embed(s) for s in top.generators)
        return PermGroup(self.total_points, gens)

    def equals_ball_group(self) -> bool:
        """Exactly Q_l^{|V_n|} ⋊ P_n == P_{n+l}: orders plus containment both ways."""
        spanned = self.spanned_group()
        ball = ball_aut_group(self.shape, self.n + self.l)
        return (spanned.order() == ball.order()
                and ball.contains_group(spanned)
                and spanned.contains_group(ball))


def wreath_embed(d: int, l: int, n: int, k: int) -> WreathEmbedding:
    return WreathEmbedding(TreeShape(d, k), l, n)
