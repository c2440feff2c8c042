"""Exact *-algebra of a small finite group: the brute-force ground truth.

Elements are complex-rational functions on an enumerated permutation group,
multiplied by convolution (f·g)(x) = sum over uv = x of f(u) g(v).  All
arithmetic is exact (arbitrary-precision integers over a common
denominator); floating point never enters this module.

The averaging projections p_H = (1/|H|) * sum of H and the corners
p_H C[G] p_H computed here serve as the independent oracle for the
double-coset picture of the same algebras.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from ._exactvec import ExactVector
from .errors import ContainmentError, InvarianceError, PairMismatchError, ScaleError
from .permgroup import DoubleCosetTable, PermGroup, Permutation, _inv, _mul

#: largest group this oracle will enumerate
ORACLE_CAP = 10_000

#: full Cayley tables are precomputed below this order
TABLE_CAP = 4096


class EnumeratedGroup:
    """A finite group with elements listed, indexed, and multipliable by index.

    Elements are sorted lexicographically by image tuple, which places the
    identity at index 0.
    """

    def __init__(self, group: PermGroup, cap: int = ORACLE_CAP):
        if group.order() > cap:
            raise ScaleError(
                f"group of order {group.order()} exceeds the oracle cap {cap}")
        self.group = group
        self.elements = tuple(sorted(group.elements()))
        self.index = {p.images: i for i, p in enumerate(self.elements)}
        self.inverse_index = np.array(
            [self.index[p.inverse().images] for p in self.elements], dtype=np.int32)
        self._table = None

    def __len__(self):
        return len(self.elements)

    @property
    def order(self) -> int:
        return len(self.elements)

    def table(self):
        """Cayley table by index, built on first use (small groups only)."""
        if self._table is None:
            if self.order > TABLE_CAP:
                raise ScaleError(
                    f"Cayley table for order {self.order} above cap {TABLE_CAP}")
            n = self.order
            tbl = np.empty((n, n), dtype=np.int32)
            images = [p.images for p in self.elements]
            index = self.index
            for i, p in enumerate(images):
                row = tbl[i]
                for j, q in enumerate(images):
                    row[j] = index[_mul(p, q)]
            self._table = tbl
        return self._table

    def mul(self, i: int, j: int) -> int:
        if self._table is not None or self.order <= TABLE_CAP:
            return int(self.table()[i, j])
        return self.index[_mul(self.elements[i].images, self.elements[j].images)]

    def index_of(self, p: Permutation) -> int:
        try:
            return self.index[p.images]
        except KeyError:
            raise ContainmentError("permutation is not an element of this group") from None

    def subgroup_indices(self, H: PermGroup) -> list:
        try:
            return sorted(self.index[p.images] for p in H.elements())
        except KeyError:
            raise ContainmentError("claimed subgroup is not contained in the group") from None


class AlgebraElement:
    """A finitely supported exact function on an enumerated group."""

    __slots__ = ("carrier", "vec")

    def __init__(self, carrier: EnumeratedGroup, vec: ExactVector):
        if len(vec) != len(carrier):
            raise ValueError("coefficient vector length differs from group order")
        self.carrier = carrier
        self.vec = vec

    # -- constructors ---------------------------------------------------------

    @classmethod
    def zero(cls, carrier: EnumeratedGroup) -> "AlgebraElement":
        return cls(carrier, ExactVector.zeros(len(carrier)))

    @classmethod
    def delta(cls, carrier: EnumeratedGroup, p: Permutation) -> "AlgebraElement":
        re = np.zeros(len(carrier), dtype=object)
        re[carrier.index_of(p)] = 1
        return cls(carrier, ExactVector(1, re, None, reduce_terms=False))

    @classmethod
    def from_coefficients(cls, carrier: EnumeratedGroup, coeffs: dict) -> "AlgebraElement":
        """Build from {Permutation: Fraction or (re, im) pair}."""
        values = [0] * len(carrier)
        for p, c in coeffs.items():
            values[carrier.index_of(p)] = c
        return cls(carrier, ExactVector.from_fractions(values))

    # -- linear structure -------------------------------------------------------

    def _same_carrier(self, other: "AlgebraElement"):
        if self.carrier is not other.carrier:
            raise PairMismatchError("elements live on different groups")

    def __add__(self, other):
        self._same_carrier(other)
        return AlgebraElement(self.carrier, self.vec + other.vec)

    def __sub__(self, other):
        self._same_carrier(other)
        return AlgebraElement(self.carrier, self.vec - other.vec)

    def __neg__(self):
        return AlgebraElement(self.carrier, -self.vec)

    def scaled(self, scalar) -> "AlgebraElement":
        return AlgebraElement(self.carrier, self.vec.scaled(scalar))

    def __eq__(self, other):
        return (isinstance(other, AlgebraElement)
                and self.carrier is other.carrier and self.vec == other.vec)

    def __hash__(self):
        return hash(self.vec)

    def is_zero(self) -> bool:
        return self.vec.is_zero()

    # -- *-algebra operations ----------------------------------------------------

    def __mul__(self, other):
        return convolve(self, other)

    def star(self) -> "AlgebraElement":
        """Involution f*(x) = conj(f(x^{-1}))."""
        return AlgebraElement(
            self.carrier, self.vec.permuted(self.carrier.inverse_index).conjugate())

    def trace(self):
        """The canonical trace f -> f(e), as a (re, im) pair of Fractions."""
        return self.vec.coeff(0)

    def coeff(self, p: Permutation):
        return self.vec.coeff(self.carrier.index_of(p))

    def support_elements(self):
        return [self.carrier.elements[i] for i in self.vec.support()]

    def conjugated_by(self, a: Permutation) -> "AlgebraElement":
        """The function x -> f(a x a^{-1}); a must normalize the carrier group."""
        els = self.carrier.elements
        a_img, a_inv = a.images, a.inverse().images
        try:
            idx = np.array(
                [self.carrier.index[_mul(_mul(a_img, p.images), a_inv)] for p in els],
                dtype=np.int32)
        except KeyError:
            raise ContainmentError(
                "conjugation does not preserve the carrier group") from None
        return AlgebraElement(self.carrier, self.vec.permuted(idx))

    def __repr__(self):
        terms = []
        for i in self.vec.support()[:6]:
            re, im = self.vec.coeff(i)
            terms.append(f"{re}{f'+{im}i' if im else ''}·{self.carrier.elements[i].cycle_string()}")
        more = "" if len(self.vec.support()) <= 6 else ", ..."
        return f"AlgebraElement({', '.join(terms)}{more})"


def convolve(f: AlgebraElement, g: AlgebraElement) -> AlgebraElement:
    """Exact convolution product on the group algebra."""
    f._same_carrier(g)
    carrier = f.carrier
    n = len(carrier)
    supp_f = f.vec.support()
    supp_g = g.vec.support()
    res_re = np.zeros(n, dtype=object)
    res_im = np.zeros(n, dtype=object)
    has_im = False
    if not supp_f or not supp_g:
        return AlgebraElement.zero(carrier)

    if carrier.order <= TABLE_CAP:
        targets = carrier.table()[np.ix_(supp_f, supp_g)].ravel()

        def scatter(acc, left, right):
            contrib = np.multiply.outer(left, right).ravel()
            np.add.at(acc, targets, contrib)

        fre = f.vec.re[supp_f]
        gre = g.vec.re[supp_g]
        scatter(res_re, fre, gre)
        fim = f.vec.im[supp_f] if f.vec.im is not None else None
        gim = g.vec.im[supp_g] if g.vec.im is not None else None
        if fim is not None and gim is not None:
            scatter(res_re, -fim, gim)
        if gim is not None:
            scatter(res_im, fre, gim)
            has_im = True
        if fim is not None:
            scatter(res_im, fim, gre)
            has_im = True
    else:
        els = [p.images for p in carrier.elements]
        index = carrier.index
        f_im = f.vec.im
        g_im = g.vec.im
        for i in supp_f:
            pi = els[i]
            a = int(f.vec.re[i])
            b = int(f_im[i]) if f_im is not None else 0
            for j in supp_g:
                t = index[_mul(pi, els[j])]
                c = int(g.vec.re[j])
                d = int(g_im[j]) if g_im is not None else 0
                res_re[t] += a * c - b * d
                if b or d:
                    res_im[t] += a * d + b * c
                    has_im = True

    vec = ExactVector(f.vec.den * g.vec.den, res_re, res_im if has_im else None)
    return AlgebraElement(carrier, vec)


def projector(carrier: EnumeratedGroup, H: PermGroup) -> AlgebraElement:
    """The averaging idempotent p_H = (1/|H|) * sum of the elements of H."""
    idxs = carrier.subgroup_indices(H)
    re = np.zeros(len(carrier), dtype=object)
    for i in idxs:
        re[i] = 1
    return AlgebraElement(carrier, ExactVector(len(idxs), re))


def corner_basis(carrier: EnumeratedGroup, H: PermGroup,
                 table: DoubleCosetTable | None = None) -> list:
    """Basis p_H δ_x p_H of the corner, x over double-coset representatives."""
    if table is None:
        table = DoubleCosetTable(carrier.group, H)
    p = projector(carrier, H)
    return [convolve(convolve(p, AlgebraElement.delta(carrier, e.representative)), p)
            for e in table.entries]


def corner_trace(f: AlgebraElement, subgroup_order: int):
    """Canonical trace of the corner p_H C[G] p_H, normalized so tr(p_H) = 1."""
    re, im = f.trace()
    return re * subgroup_order, im * subgroup_order


def invariant_subalgebra(elements: list, action: PermGroup) -> list:
    """Orbit sums of basis elements under conjugation by the given group.

    Every generator of `action` must permute `elements` (up to equality of
    exact coefficients); the returned list contains one sum per orbit, in
    order of first occurrence.
    """
    if not elements:
        return []
    maps = []
    for a in action.generators:
        images = []
        for f in elements:
            fa = f.conjugated_by(a)
            try:
                images.append(elements.index(fa))
            except ValueError:
                raise InvarianceError(
                    f"conjugation by {a.cycle_string()} does not permute "
                    "the given basis") from None
        maps.append(images)
    seen = [False] * len(elements)
    sums = []
    for seed in range(len(elements)):
        if seen[seed]:
            continue
        orbit = {seed}
        queue = [seed]
        while queue:
            i = queue.pop()
            for m in maps:
                j = m[i]
                if j not in orbit:
                    orbit.add(j)
                    queue.append(j)
        total = elements[seed]
        for i in sorted(orbit):
            seen[i] = True
            if i != seed:
                total = total + elements[i]
        sums.append(total)
    return sums
