"""Finite-data calculus for almost automorphisms of the rooted tree.

An element is a triple (A, B, φ): two complete finite subtrees containing
the root with equally many leaves, a leaf bijection, and for each leaf a
finitary twist describing how the full subtree hanging at that leaf maps
onto the subtree at the image leaf.  A twist is a portrait: a finite map
from relative addresses to child permutations, trivial almost everywhere.

Two data sets represent the same group element when they agree after
refinement; the canonical form is the unique minimal representative,
obtained by greedily merging sibling leaf blocks whose data collapses into
a single vertex map, deepest blocks first.

The bridge to the double-coset picture: an element representable with
A = B = (radius-n ball) induces a permutation of the ordered level set,
and its canonical double coset under the ball automorphism group is the
complete invariant of its two-sided orbit under tree automorphisms.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import LevelError, ScaleError
from .permgroup import PermGroup, Permutation
from .treefam import TreeShape, ball_aut_group

# -- portraits (finitary subtree twists) -------------------------------------------

def _portrait_apply(portrait: dict, rel: tuple) -> tuple:
    out = []
    cur = ()
    for c in rel:
        perm = portrait.get(cur)
        out.append(perm[c] if perm is not None else c)
        cur = cur + (c,)
    return tuple(out)


def _portrait_preimage(portrait: dict, rel: tuple) -> tuple:
    out = []
    cur = ()
    for letter in rel:
        perm = portrait.get(cur)
        c = perm.index(letter) if perm is not None else letter
        out.append(c)
        cur = cur + (c,)
    return tuple(out)


def _portrait_compose(first: dict, second: dict) -> dict:
    """Portrait of (apply `first`, then `second`)."""
    addresses = set(first)
    addresses.update(_portrait_preimage(first, r) for r in second)
    out = {}
    for r in addresses:
        p1 = first.get(r)
        p2 = second.get(_portrait_apply(first, r))
        if p1 is None and p2 is None:
            continue
        if p1 is None:
            perm = tuple(p2)
        elif p2 is None:
            perm = tuple(p1)
        else:
            perm = tuple(p2[c] for c in p1)
        if any(i != x for i, x in enumerate(perm)):
            out[r] = perm
    return out


def _portrait_invert(portrait: dict) -> dict:
    out = {}
    for r, perm in portrait.items():
        inv = [0] * len(perm)
        for i, x in enumerate(perm):
            inv[x] = i
        out[_portrait_apply(portrait, r)] = tuple(inv)
    return out


def _portrait_restrict(portrait: dict, c: int) -> dict:
    """Portrait of the induced map on the child-c subtree."""
    return {r[1:]: perm for r, perm in portrait.items() if r and r[0] == c}


def _portrait_normalize(portrait: dict) -> dict:
    return {tuple(r): tuple(perm) for r, perm in portrait.items()
            if any(i != x for i, x in enumerate(perm))}


# -- complete subtrees ----------------------------------------------------------------

def _tree_vertices(leaves) -> set:
    verts = set()
    for leaf in leaves:
        for j in range(len(leaf) + 1):
            verts.add(leaf[:j])
    return verts


def _check_complete(shape: TreeShape, leaves) -> None:
    leaves = set(leaves)
    verts = _tree_vertices(leaves)
    for v in verts:
        if v in leaves:
            if any(v + (c,) in verts for c in range(shape.arity(v))):
                raise ValueError(f"leaf {v} has descendants in the subtree")
        else:
            missing = [c for c in range(shape.arity(v)) if v + (c,) not in verts]
            if missing:
                raise ValueError(f"internal vertex {v} is missing children {missing}")


@dataclass(frozen=True)
class AlmostAutomorphism:
    """Immutable finite-data representative of an almost automorphism."""

    shape: TreeShape
    leaf_map: dict
    twists: dict

    def __post_init__(self):
        leaf_map = {tuple(a): tuple(b) for a, b in self.leaf_map.items()}
        _check_complete(self.shape, leaf_map.keys())
        images = list(leaf_map.values())
        if len(set(images)) != len(images):
            raise ValueError("leaf map is not injective")
        _check_complete(self.shape, images)
        twists = {}
        for a in leaf_map:
            portrait = _portrait_normalize(self.twists.get(a, {}))
            for r, perm in portrait.items():
                arity = self.shape.arity(a + r)
                if sorted(perm) != list(range(arity)):
                    raise ValueError(
                        f"twist at leaf {a}, address {r} is not a permutation "
                        f"of {arity} children")
            twists[a] = portrait
        object.__setattr__(self, "leaf_map", leaf_map)
        object.__setattr__(self, "twists", twists)

    # -- basics -----------------------------------------------------------------------

    @classmethod
    def identity(cls, shape: TreeShape) -> "AlmostAutomorphism":
        return cls(shape, {(): ()}, {(): {}})

    @classmethod
    def automorphism(cls, shape: TreeShape, portrait: dict) -> "AlmostAutomorphism":
        """A tree automorphism given by its root portrait."""
        return cls(shape, {(): ()}, {(): portrait})

    @classmethod
    def from_level_permutation(cls, shape: TreeShape, n: int, sigma: Permutation,
                               twists: dict | None = None) -> "AlmostAutomorphism":
        """Element with A = B = the radius-n ball and the given level action."""
        level = shape.vertices(n)
        if sigma.degree != len(level):
            raise ValueError(f"permutation degree differs from |V_{n}|")
        leaf_map = {a: level[sigma(i)] for i, a in enumerate(level)}
        return cls(shape, leaf_map, twists or {})

    def leaves(self) -> list:
        return sorted(self.leaf_map)

    def image_leaves(self) -> list:
        return sorted(self.leaf_map.values())

    def data_equal(self, other: "AlmostAutomorphism") -> bool:
        return (self.shape == other.shape and self.leaf_map == other.leaf_map
                and self.twists == other.twists)

    def __eq__(self, other):
        if not isinstance(other, AlmostAutomorphism):
            return NotImplemented
        return canonical_form(self).data_equal(canonical_form(other))

    def __hash__(self):
        c = canonical_form(self)
        return hash((c.shape,
                     tuple(sorted(c.leaf_map.items())),
                     tuple(sorted((a, tuple(sorted(t.items())))
                                  for a, t in c.twists.items()))))

    def is_identity(self) -> bool:
        c = canonical_form(self)
        return c.leaf_map == {(): ()} and not c.twists[()]

    # -- refinement ---------------------------------------------------------------------

    def expand_leaf(self, a: tuple) -> "AlmostAutomorphism":
        """Split leaf a into its children, pushing the twist data down."""
        b = self.leaf_map[a]
        portrait = self.twists[a]
        arity = self.shape.arity(a)
        root_perm = portrait.get((), tuple(range(arity)))
        leaf_map = {x: y for x, y in self.leaf_map.items() if x != a}
        twists = {x: t for x, t in self.twists.items() if x != a}
        for c in range(arity):
            child = a + (c,)
            leaf_map[child] = b + (root_perm[c],)
            twists[child] = _portrait_restrict(portrait, c)
        return AlmostAutomorphism(self.shape, leaf_map, twists)

    def refined_to_domain(self, target_vertices: set) -> "AlmostAutomorphism":
        """Expand until every domain leaf is a leaf of the target subtree."""
        cur = self
        while True:
            internal = [a for a in cur.leaf_map if a + (0,) in target_vertices]
            if not internal:
                return cur
            cur = cur.expand_leaf(min(internal, key=lambda v: (len(v), v)))

    def refined_to_image(self, target_vertices: set) -> "AlmostAutomorphism":
        """Expand until every image leaf is a leaf of the target subtree."""
        cur = self
        while True:
            internal = [a for a, b in cur.leaf_map.items()
                        if b + (0,) in target_vertices]
            if not internal:
                return cur
            cur = cur.expand_leaf(min(internal, key=lambda v: (len(v), v)))

    # -- evaluation ------------------------------------------------------------------------

    def apply_to_address(self, address: tuple) -> tuple:
        """Image of a vertex lying strictly below some domain leaf."""
        address = tuple(address)
        for j in range(len(address) + 1):
            prefix = address[:j]
            if prefix in self.leaf_map:
                rel = address[j:]
                return self.leaf_map[prefix] + _portrait_apply(self.twists[prefix], rel)
        raise ValueError(f"address {address} is not below a domain leaf")

    def __repr__(self):
        pairs = ", ".join(
            f"{''.join(map(str, a)) or 'root'}→{''.join(map(str, b)) or 'root'}"
            for a, b in sorted(self.leaf_map.items()))
        twisted = sum(1 for t in self.twists.values() if t)
        return f"AlmostAutomorphism({pairs}; {twisted} twisted leaves)"


# -- group operations ------------------------------------------------------------------------

def compose(g: AlmostAutomorphism, h: AlmostAutomorphism) -> AlmostAutomorphism:
    """The element "apply g, then h"."""
    if g.shape != h.shape:
        raise ValueError("elements live on different tree shapes")
    interface = _tree_vertices(set(g.leaf_map.values()) | set(h.leaf_map.keys()))
    g2 = g.refined_to_image(interface)
    h2 = h.refined_to_domain(interface)
    leaf_map = {}
    twists = {}
    for a, b in g2.leaf_map.items():
        leaf_map[a] = h2.leaf_map[b]
        twists[a] = _portrait_compose(g2.twists[a], h2.twists[b])
    return AlmostAutomorphism(g.shape, leaf_map, twists)


def inverse(g: AlmostAutomorphism) -> AlmostAutomorphism:
    leaf_map = {b: a for a, b in g.leaf_map.items()}
    twists = {g.leaf_map[a]: _portrait_invert(t) for a, t in g.twists.items()}
    return AlmostAutomorphism(g.shape, leaf_map, twists)


def canonical_form(g: AlmostAutomorphism) -> AlmostAutomorphism:
    """The unique minimal representative.

    Greedily merges sibling leaf blocks (deepest first, then by address)
    whose images form a full sibling block; idempotent.
    """
    leaf_map = dict(g.leaf_map)
    twists = dict(g.twists)
    shape = g.shape
    while True:
        candidates = {}
        for a in leaf_map:
            if a:
                candidates.setdefault(a[:-1], []).append(a)
        merged = False
        for parent in sorted(candidates, key=lambda v: (-len(v), v)):
            children = candidates[parent]
            if len(children) != shape.arity(parent):
                continue
            images = [leaf_map[parent + (c,)] for c in range(shape.arity(parent))]
            heads = [img[:-1] for img in images if img]
            if len(heads) != len(images) or len(set(heads)) != 1:
                continue
            target = heads[0]
            letters = [img[-1] for img in images]
            if sorted(letters) != list(range(shape.arity(target))):
                continue
            portrait = {(): tuple(letters)}
            for c in range(shape.arity(parent)):
                child_twist = twists[parent + (c,)]
                for r, perm in child_twist.items():
                    portrait[(c,) + r] = perm
            for c in range(shape.arity(parent)):
                del leaf_map[parent + (c,)]
                del twists[parent + (c,)]
            leaf_map[parent] = target
            twists[parent] = _portrait_normalize(portrait)
            merged = True
            break
        if not merged:
            return AlmostAutomorphism(shape, leaf_map, twists)


# -- level subgroups and the double-coset bridge ------------------------------------------------

def is_in_level_subgroup(g: AlmostAutomorphism, n: int) -> bool:
    """Whether g is represented by a forest automorphism off the radius-n ball."""
    c = canonical_form(g)
    if any(len(a) > n for a in c.leaf_map):
        return False
    if any(len(b) > n for b in c.leaf_map.values()):
        return False
    ball = _tree_vertices(set(g.shape.vertices(n)))
    refined = c.refined_to_domain(ball)
    return all(len(b) == n for b in refined.leaf_map.values())


def minimal_level(g: AlmostAutomorphism, n_max: int = 16) -> int | None:
    """Least n with g in the level-n subgroup, or None below n_max."""
    for n in range(n_max + 1):
        if is_in_level_subgroup(g, n):
            return n
    return None


def level_permutation(g: AlmostAutomorphism, n: int) -> Permutation:
    """The induced permutation of the ordered level set V_n."""
    if not is_in_level_subgroup(g, n):
        raise LevelError(f"element does not act on the complement of the {n}-ball")
    ball = _tree_vertices(set(g.shape.vertices(n)))
    refined = canonical_form(g).refined_to_domain(ball)
    level = g.shape.vertices(n)
    position = {addr: i for i, addr in enumerate(level)}
    return Permutation([position[refined.leaf_map[a]] for a in level])


_LEVEL_GROUP_CACHE = {}


def _level_group(shape: TreeShape, n: int) -> PermGroup:
    key = (shape.d, shape.k, n)
    if key not in _LEVEL_GROUP_CACHE:
        _LEVEL_GROUP_CACHE[key] = ball_aut_group(shape, n)
    return _LEVEL_GROUP_CACHE[key]


def double_coset_key(g: AlmostAutomorphism, n: int) -> Permutation:
    """Canonical representative of the two-sided tree-automorphism orbit.

    Twists are discarded: they are absorbed into the compact side, so the
    key depends only on the level-n permutation modulo the ball group on
    both sides.
    """
    sigma = level_permutation(g, n)
    return _level_group(g.shape, n).min_in_double_coset(sigma)


# -- randomized elements (seeded, for property suites) --------------------------------------------

def random_portrait(shape: TreeShape, root: tuple, rng, depth: int = 2,
                    density: float = 0.35) -> dict:
    """Random finitary portrait for the subtree at `root`, nontrivial down to
    `depth` levels below it."""
    portrait = {}
    frontier = [()]
    for _ in range(depth + 1):
        next_frontier = []
        for rel in frontier:
            arity = shape.arity(root + rel)
            if rng.random() < density:
                perm = list(range(arity))
                rng.shuffle(perm)
                portrait[rel] = tuple(perm)
            next_frontier.extend(rel + (c,) for c in range(arity))
        frontier = next_frontier
    return _portrait_normalize(portrait)


def random_element(shape: TreeShape, rng, expansions: int = 3,
                   twist_depth: int = 2) -> AlmostAutomorphism:
    """Seeded random finitary element: random trees, leaf bijection, twists."""

    def random_tree(count):
        leaves = [()]
        for _ in range(count):
            pick = leaves[rng.randrange(len(leaves))]
            leaves.remove(pick)
            leaves.extend(pick + (c,) for c in range(shape.arity(pick)))
        return sorted(leaves)

    count = rng.randrange(expansions + 1)
    domain = random_tree(count)
    image = random_tree(count)
    rng.shuffle(image)
    leaf_map = dict(zip(domain, image))
    twists = {a: random_portrait(shape, a, rng, depth=twist_depth)
              for a in domain if rng.random() < 0.7}
    return AlmostAutomorphism(shape, leaf_map, twists)


def random_tree_automorphism(shape: TreeShape, rng, depth: int = 3) -> AlmostAutomorphism:
    """Random finitary automorphism of the whole tree (an element of K)."""
    return AlmostAutomorphism.automorphism(
        shape, random_portrait(shape, (), rng, depth=depth, density=0.5))


# -- text format -----------------------------------------------------------------------------------

FORMAT = "heckelab/spheromorph/v1"


def _address_to_text(addr: tuple) -> str:
    if any(c > 9 for c in addr):
        raise ValueError("text format supports digits 0..9 only")
    return "".join(map(str, addr))


def _address_from_text(text) -> tuple:
    if isinstance(text, (list, tuple)):
        return tuple(int(c) for c in text)
    return tuple(int(c) for c in str(text))


def to_json_dict(g: AlmostAutomorphism) -> dict:
    vertices_a = sorted(_tree_vertices(set(g.leaf_map)), key=lambda v: (len(v), v))
    vertices_b = sorted(_tree_vertices(set(g.leaf_map.values())),
                        key=lambda v: (len(v), v))
    return {
        "format": FORMAT,
        "d": g.shape.d,
        "k": g.shape.k,
        "A": [_address_to_text(v) for v in vertices_a],
        "B": [_address_to_text(v) for v in vertices_b],
        "phi": [[_address_to_text(a), _address_to_text(b)]
                for a, b in sorted(g.leaf_map.items())],
        "twists": {
            _address_to_text(a): [[_address_to_text(r), list(perm)]
                                  for r, perm in sorted(t.items())]
            for a, t in sorted(g.twists.items()) if t
        },
    }


def from_json_dict(data: dict) -> AlmostAutomorphism:
    if data.get("format") != FORMAT:
        raise ValueError(f"unsupported element format {data.get('format')!r}")
    shape = TreeShape(int(data["d"]), int(data["k"]))
    leaf_map = {_address_from_text(a): _address_from_text(b)
                for a, b in data["phi"]}
    twists = {}
    for leaf, entries in data.get("twists", {}).items():
        twists[_address_from_text(leaf)] = {
            _address_from_text(r): tuple(perm) for r, perm in entries}
    g = AlmostAutomorphism(shape, leaf_map, twists)
    declared_a = {_address_from_text(v) for v in data["A"]}
    if declared_a != _tree_vertices(set(g.leaf_map)):
        raise ValueError("declared domain tree disagrees with the leaf map")
    declared_b = {_address_from_text(v) for v in data["B"]}
    if declared_b != _tree_vertices(set(g.leaf_map.values())):
        raise ValueError("declared image tree disagrees with the leaf map")
    return g
