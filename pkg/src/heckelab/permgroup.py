"""Finite permutation groups: stabilizer chains, cosets, double cosets.

Permutations act on {0..m-1} and compose left to right: ``(p * q)`` means
"apply p, then q", so ``(p * q)[i] == q[p[i]]``.  Groups carry a
deterministic stabilizer chain with the full base 0, 1, ..., m-1, which
gives fast order/membership and, crucially, lexicographically minimal
coset representatives: the subgroup at level i fixes every point below i,
so a greedy descent of the chain computes min(H g) under the total order
"lexicographic on image arrays".

Double cosets H\\G/H are computed as orbits of H acting by right
translation on the right-coset index, never on raw group elements.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .errors import ContainmentError, DomainMismatchError, MalformedPermutationError, ScaleError

#: right-coset spaces larger than this are refused (spec desk-scale cap)
COSET_INDEX_CAP = 100_000

#: exhaustive element enumeration is refused beyond this order
ENUMERATION_CAP = 1_000_000


def _mul(p, q):
    # apply p, then q
    return tuple(q[x] for x in p)


def _inv(p):
    out = [0] * len(p)
    for i, x in enumerate(p):
        out[x] = i
    return tuple(out)


class Permutation:
    """A bijection of {0..m-1}, stored as the tuple of point images."""

    __slots__ = ("images",)

    def __init__(self, images):
        images = tuple(images)
        if sorted(images) != list(range(len(images))):
            raise MalformedPermutationError(
                f"not a bijection of 0..{len(images) - 1}: {images!r}")
        object.__setattr__(self, "images", images)

    @classmethod
    def identity(cls, m: int) -> "Permutation":
        return cls(range(m))

    @classmethod
    def from_cycles(cls, m: int, *cycles) -> "Permutation":
        """Build from disjoint (or successively applied) cycles of points."""
        images = list(range(m))
        for cycle in cycles:
            for a, b in zip(cycle, cycle[1:]):
                images[a] = b
            if cycle:
                images[cycle[-1]] = cycle[0]
        return cls(images)

    @property
    def degree(self) -> int:
        return len(self.images)

    def __call__(self, point: int) -> int:
        return self.images[point]

    def __mul__(self, other: "Permutation") -> "Permutation":
        if len(self.images) != len(other.images):
            raise DomainMismatchError("degree mismatch in product")
        p = Permutation.__new__(Permutation)
        object.__setattr__(p, "images", _mul(self.images, other.images))
        return p

    def inverse(self) -> "Permutation":
        p = Permutation.__new__(Permutation)
        object.__setattr__(p, "images", _inv(self.images))
        return p

    def is_identity(self) -> bool:
        return all(i == x for i, x in enumerate(self.images))

    def __setattr__(self, name, value):
        raise AttributeError("Permutation is immutable")

    def __eq__(self, other):
        return isinstance(other, Permutation) and self.images == other.images

    def __lt__(self, other):
        return self.images < other.images

    def __le__(self, other):
        return self.images <= other.images

    def __hash__(self):
        return hash(self.images)

    def cycle_string(self) -> str:
        seen = set()
        parts = []
        for i in range(len(self.images)):
            if i in seen or self.images[i] == i:
                continue
            cyc = [i]
            j = self.images[i]
            while j != i:
                seen.add(j)
                cyc.append(j)
                j = self.images[j]
            parts.append("(" + " ".join(map(str, cyc)) + ")")
        return "".join(parts) or "()"

    def __repr__(self):
        return f"Permutation({list(self.images)})"


def _wrap(images) -> Permutation:
    p = Permutation.__new__(Permutation)
    object.__setattr__(p, "images", tuple(images))
    return p


class _Level:
    """One stabilizer-chain level: base point, own generators, Schreier vector."""

    __slots__ = ("base", "gens", "gen_set", "orbit", "done")

    def __init__(self, base: int, m: int):
        self.base = base
        self.gens = []                        # raw image tuples first moving this base
        self.gen_set = set()
        self.orbit = {base: tuple(range(m))}  # point -> transversal u with u[base] = point
        self.done = set()                     # processed (point, generator) pairs

    def extend_orbit(self, gens):
        """Grow the orbit under `gens`, keeping existing transversal entries."""
        queue = sorted(self.orbit)
        while queue:
            point = queue.pop(0)
            u = self.orbit[point]
            for g in gens:
                image = g[point]
                if image not in self.orbit:
                    self.orbit[image] = _mul(u, g)
                    queue.append(image)


class PermGroup:
    """Permutation group with a deterministic full-base stabilizer chain.

    The stabilizer chain uses the base 0, 1, ..., m-1 in order, so the
    subgroup at level i fixes every point below i pointwise.
    """

    def __init__(self, degree: int, generators):
        self.degree = degree
        gens = []
        for g in generators:
            if not isinstance(g, Permutation):
                g = Permutation(g)
            if g.degree != degree:
                raise DomainMismatchError(
                    f"generator degree {g.degree} != group degree {degree}")
            gens.append(g)
        self.generators = tuple(gens)
        self._levels = [_Level(b, degree) for b in range(degree)]
        for g in self.generators:
            self._store(g.images)
        self._close()
        self._order = 1
        for level in self._levels:
            self._order *= len(level.orbit)

    # -- chain construction -------------------------------------------------

    def _store(self, p):
        """File a strong generator at the level of its first moved point."""
        for i, x in enumerate(p):
            if x != i:
                level = self._levels[i]
                if p not in level.gen_set:
                    level.gens.append(p)
                    level.gen_set.add(p)
                    return True
                return False
        return False

    def _close(self):
        """Fixed-point closure: orbits stable and all Schreier residues trivial."""
        dirty = True
        while dirty:
            dirty = False
            for i in range(self.degree):
                level = self._levels[i]
                # strong generators of the level-i stabilizer live at levels >= i
                gens = [g for lv in self._levels[i:] for g in lv.gens]
                if not gens:
                    continue
                level.extend_orbit(gens)
                for point in sorted(level.orbit):
                    u = level.orbit[point]
                    for g in gens:
                        key = (point, g)
                        if key in level.done:
                            continue
                        level.done.add(key)
                        target = level.orbit[g[point]]
                        schreier = _mul(_mul(u, g), _inv(target))
                        residue, stop = self._sift_images(schreier, i + 1)
                        if stop < self.degree and self._store(residue):
                            dirty = True

    def _sift_images(self, p, start=0):
        """Strip p through levels from `start`; return (residue, stop level)."""
        for i in range(start, self.degree):
            level = self._levels[i]
            point = p[level.base]
            if point == level.base:
                continue
            u = level.orbit.get(point)
            if u is None:
                return p, i
            p = _mul(p, _inv(u))
        return p, self.degree

    # -- queries -------------------------------------------------------------

    def order(self) -> int:
        return self._order

    @property
    def base_points(self) -> tuple:
        """Chain base points with nontrivial orbits, in increasing order."""
        return tuple(level.base for level in self._levels if len(level.orbit) > 1)

    def transversal(self, base: int) -> dict:
        """Orbit-to-representative map of the chain level at `base`."""
        return {point: _wrap(u) for point, u in self._levels[base].orbit.items()}

    def __contains__(self, p: Permutation) -> bool:
        if p.degree != self.degree:
            return False
        residue, stop = self._sift_images(p.images)
        return stop == self.degree

    def contains_group(self, other: "PermGroup") -> bool:
        return other.degree == self.degree and all(g in self for g in other.generators)

    def is_subgroup_of(self, other: "PermGroup") -> bool:
        return other.contains_group(self)

    def same_group(self, other: "PermGroup") -> bool:
        return self.order() == other.order() and self.contains_group(other)

    def elements(self, cap: int = ENUMERATION_CAP):
        """All elements in a deterministic order (product over transversals)."""
        if self.order() > cap:
            raise ScaleError(
                f"enumeration of order {self.order()} exceeds cap {cap}")
        return [_wrap(t) for t in self._element_tuples(0)]

    def _element_tuples(self, i):
        if i == self.degree:
            return [tuple(range(self.degree))]
        deeper = self._element_tuples(i + 1)
        level = self._levels[i]
        if len(level.orbit) == 1:
            return deeper
        out = []
        for point in sorted(level.orbit):
            u = level.orbit[point]
            out.extend(_mul(s, u) for s in deeper)
        return out

    def sample(self, rng) -> Permutation:
        """Uniform random element; rng is a random.Random-like object."""
        e = tuple(range(self.degree))
        for i in reversed(range(self.degree)):
            level = self._levels[i]
            if len(level.orbit) == 1:
                continue
            point = rng.choice(sorted(level.orbit))
            e = _mul(e, level.orbit[point])
        return _wrap(e)

    # -- canonical coset representatives --------------------------------------

    def min_in_right_coset(self, g: Permutation) -> Permutation:
        """Lexicographically minimal element of the right coset (self)·g."""
        return _wrap(self._min_coset_images(g.images))

    def _min_coset_images(self, g):
        # h = s·u with s in the stabilizer and u the transversal element, so
        # (h·g)[base] = g[u[base]]; minimize level by level.
        cur = g
        for level in self._levels:
            orbit = level.orbit
            if len(orbit) == 1:
                continue
            best = min(orbit, key=cur.__getitem__)
            if best != level.base:
                cur = _mul(orbit[best], cur)
        return cur

    def min_in_double_coset(self, g: Permutation) -> Permutation:
        """Lexicographically minimal element of (self)·g·(self)."""
        start = self._min_coset_images(g.images)
        seen = {start}
        queue = [start]
        best = start
        gens = [h.images for h in self.generators]
        while queue:
            r = queue.pop()
            for h in gens:
                c = self._min_coset_images(_mul(r, h))
                if c not in seen:
                    seen.add(c)
                    queue.append(c)
                    if c < best:
                        best = c
        return _wrap(best)


def build_chain(generators, degree: int) -> PermGroup:
    """Construct a PermGroup from generator image arrays."""
    return PermGroup(degree, generators)


# -- standard groups ----------------------------------------------------------

def trivial_group(degree: int) -> PermGroup:
    return PermGroup(degree, [])


def symmetric_group(degree: int) -> PermGroup:
    if degree <= 1:
        return trivial_group(max(degree, 1))
    gens = [Permutation.from_cycles(degree, (0, 1))]
    if degree > 2:
        gens.append(Permutation.from_cycles(degree, tuple(range(degree))))
    return PermGroup(degree, gens)


def cyclic_group(degree: int) -> PermGroup:
    return PermGroup(degree, [Permutation.from_cycles(degree, tuple(range(degree)))])


def dihedral_square() -> PermGroup:
    """Symmetries of a square with vertices 0,1,2,3 in cyclic order (order 8)."""
    return PermGroup(4, [Permutation.from_cycles(4, (0, 1, 2, 3)),
                         Permutation.from_cycles(4, (0, 2))])


# -- coset index ---------------------------------------------------------------

def _check_subgroup(G: PermGroup, H: PermGroup):
    if G.degree != H.degree:
        raise DomainMismatchError("subgroup acts on a different point set")
    if not H.is_subgroup_of(G):
        raise ContainmentError("claimed subgroup is not contained in the group")


class CosetIndex:
    """The right-coset space H\\G with canonical (lex-minimal) representatives.

    Representatives are sorted lexicographically, which puts the identity
    (the representative of the coset H itself) at index 0.
    """

    def __init__(self, G: PermGroup, H: PermGroup):
        _check_subgroup(G, H)
        size = G.order() // H.order()
        if size > COSET_INDEX_CAP:
            raise ScaleError(
                f"right-coset space of size {size} exceeds cap {COSET_INDEX_CAP}")
        self.group = G
        self.subgroup = H
        start = H._min_coset_images(tuple(range(G.degree)))
        seen = {start}
        queue = [start]
        gens = [g.images for g in G.generators]
        while queue:
            r = queue.pop()
            for g in gens:
                c = H._min_coset_images(_mul(r, g))
                if c not in seen:
                    seen.add(c)
                    queue.append(c)
        reps = sorted(seen)
        if len(reps) != size:
            raise RuntimeError(
                f"coset enumeration found {len(reps)} cosets, expected {size}")
        self.representatives = tuple(_wrap(r) for r in reps)
        self._where = {r: i for i, r in enumerate(reps)}

    def __len__(self):
        return len(self.representatives)

    def coset_of(self, p: Permutation) -> int:
        """Index of the right coset H·p."""
        return self._where[self.subgroup._min_coset_images(p.images)]


def right_coset_index(G: PermGroup, H: PermGroup) -> CosetIndex:
    return CosetIndex(G, H)


# -- double cosets --------------------------------------------------------------

@dataclass(frozen=True)
class DoubleCosetEntry:
    representative: Permutation
    size: int
    right_cosets: tuple
    r_index: int
    r_index_inv: int


class DoubleCosetTable:
    """The set H\\G/H: canonical representatives, sizes, coset contents.

    Entries are sorted by representative (lex order on image arrays); the
    class of H itself therefore sits at index 0 with the identity as its
    representative.
    """

    def __init__(self, G: PermGroup, H: PermGroup, cosets: CosetIndex | None = None):
        self.cosets = cosets if cosets is not None else CosetIndex(G, H)
        if self.cosets.group is not G or self.cosets.subgroup is not H:
            _check_subgroup(G, H)
        self.group = G
        self.subgroup = H
        reps = self.cosets.representatives
        gens = [h.images for h in H.generators]
        assign = [-1] * len(reps)
        blocks = []
        for seed in range(len(reps)):
            if assign[seed] >= 0:
                continue
            block = [seed]
            assign[seed] = len(blocks)
            queue = [seed]
            while queue:
                i = queue.pop()
                r = reps[i].images
                for h in gens:
                    j = self.cosets.coset_of(_wrap(_mul(r, h)))
                    if assign[j] < 0:
                        assign[j] = len(blocks)
                        block.append(j)
                        queue.append(j)
            blocks.append(sorted(block))
        # canonical representative of a class is the minimum over its cosets'
        # canonical representatives, i.e. the minimum of the double coset
        keyed = sorted(blocks, key=lambda b: reps[b[0]].images)
        order_h = H.order()
        entries = []
        for block in keyed:
            entries.append({
                "rep": reps[block[0]],
                "cosets": tuple(block),
                "r": len(block),
            })
        inv_class = []
        lookup = {}
        for ci, e in enumerate(entries):
            for c in e["cosets"]:
                lookup[c] = ci
        self._class_of_coset = tuple(lookup[i] for i in range(len(reps)))
        final = []
        for e in entries:
            inv_idx = self._class_of_coset[self.cosets.coset_of(e["rep"].inverse())]
            final.append(DoubleCosetEntry(
                representative=e["rep"],
                size=order_h * e["r"],
                right_cosets=e["cosets"],
                r_index=e["r"],
                r_index_inv=entries[inv_idx]["r"],
            ))
            inv_class.append(inv_idx)
        self.entries = tuple(final)
        self.inverse_class = tuple(inv_class)
        assert sum(e.size for e in self.entries) == G.order()

    def __len__(self):
        return len(self.entries)

    def class_of_coset(self, coset: int) -> int:
        return self._class_of_coset[coset]

    def class_of(self, p: Permutation) -> int:
        return self._class_of_coset[self.cosets.coset_of(p)]

    def is_unimodular(self) -> bool:
        """Whether every class satisfies R(rep) == R(rep^{-1})."""
        return all(e.r_index == e.r_index_inv for e in self.entries)

    # -- serialization ----------------------------------------------------------

    FORMAT = "heckelab/dctable/v1"

    def to_json_dict(self, descriptor=None) -> dict:
        return {
            "format": self.FORMAT,
            "descriptor": descriptor or {},
            "m": self.group.degree,
            "group_generators": [list(g.images) for g in self.group.generators],
            "subgroup_generators": [list(g.images) for g in self.subgroup.generators],
            "coset_representatives": [list(r.images) for r in self.cosets.representatives],
            "entries": [
                {
                    "representative": list(e.representative.images),
                    "size": e.size,
                    "right_cosets": list(e.right_cosets),
                    "r_index": e.r_index,
                    "r_index_inv": e.r_index_inv,
                }
                for e in self.entries
            ],
        }

    def save(self, path, descriptor=None):
        with open(path, "w") as fh:
            json.dump(self.to_json_dict(descriptor), fh)

    @classmethod
    def from_json_dict(cls, data: dict) -> "DoubleCosetTable":
        """Reconstruct a cached table, revalidating its invariants cheaply.

        Groups are rebuilt from the stored generators; coset representatives
        are checked to be canonical and correctly counted; entry sizes must
        partition |G| and match |H| times the coset counts.
        """
        if data.get("format") != cls.FORMAT:
            raise ValueError(f"unsupported table format {data.get('format')!r}")
        m = data["m"]
        G = PermGroup(m, data["group_generators"])
        H = PermGroup(m, data["subgroup_generators"])
        _check_subgroup(G, H)
        reps = [tuple(r) for r in data["coset_representatives"]]
        if len(reps) != G.order() // H.order():
            raise ValueError("cached table has the wrong number of cosets")
        if reps != sorted(reps):
            raise ValueError("cached coset representatives are not sorted")
        for r in reps:
            if H._min_coset_images(r) != r:
                raise ValueError("cached coset representative is not canonical")
        cosets = CosetIndex.__new__(CosetIndex)
        cosets.group = G
        cosets.subgroup = H
        cosets.representatives = tuple(_wrap(r) for r in reps)
        cosets._where = {r: i for i, r in enumerate(reps)}

        table = cls.__new__(cls)
        table.group = G
        table.subgroup = H
        table.cosets = cosets
        order_h = H.order()
        entries = []
        covered = []
        lookup = {}
        for ci, raw in enumerate(data["entries"]):
            block = tuple(raw["right_cosets"])
            entry = DoubleCosetEntry(
                representative=_wrap(tuple(raw["representative"])),
                size=raw["size"],
                right_cosets=block,
                r_index=raw["r_index"],
                r_index_inv=raw["r_index_inv"],
            )
            if entry.size != order_h * len(block) or entry.r_index != len(block):
                raise ValueError("cached entry sizes are inconsistent")
            if entry.representative.images != reps[block[0]]:
                raise ValueError("cached entry representative is not minimal")
            covered.extend(block)
            for c in block:
                lookup[c] = ci
            entries.append(entry)
        if sorted(covered) != list(range(len(reps))):
            raise ValueError("cached entries do not partition the coset space")
        table.entries = tuple(entries)
        table._class_of_coset = tuple(lookup[i] for i in range(len(reps)))
        inverse_class = [
            table._class_of_coset[cosets.coset_of(e.representative.inverse())]
            for e in entries]
        for e, inv in zip(entries, inverse_class):
            if e.r_index_inv != entries[inv].r_index:
                raise ValueError("cached inverse indices are inconsistent")
        table.inverse_class = tuple(inverse_class)
        return table

    @classmethod
    def load(cls, path) -> "DoubleCosetTable":
        with open(path) as fh:
            return cls.from_json_dict(json.load(fh))


def double_cosets(G: PermGroup, H: PermGroup) -> DoubleCosetTable:
    return DoubleCosetTable(G, H)


def r_index(x: Permutation, H: PermGroup) -> int:
    """Number of right cosets H·y contained in H·x·H.

    Equals the index [H : H ∩ x^{-1}Hx]; computed as the orbit of the coset
    H·x under right translation by H.
    """
    if x.degree != H.degree:
        raise DomainMismatchError("element degree differs from subgroup degree")
    start = H._min_coset_images(x.images)
    seen = {start}
    queue = [start]
    gens = [h.images for h in H.generators]
    while queue:
        r = queue.pop()
        for h in gens:
            c = H._min_coset_images(_mul(r, h))
            if c not in seen:
                seen.add(c)
                queue.append(c)
    return len(seen)
