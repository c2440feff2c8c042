"""The Hecke algebra of a finite pair (G, H) on its double-coset basis.

The algebra acts on the coset space H\\G from the left:

    [λ(f) ξ](Hx) = sum over Hy of f(H x y^{-1}) ξ(Hy),

so each basis element e_D (the indicator of the double coset D, value 1 on
the whole coset) becomes a zero-one matrix of size |G|/|H|, and the whole
algebra is the span of matrices constant on the cells {(i, j) : r_i r_j^{-1}
in D}.  Products are computed through structure constants extracted from
these matrices, never through element-level convolution over G; the group
algebra corner p_H C[G] p_H is kept available as an independent oracle via
corner_isomorphism_check.

The canonical trace is the vector state at the base coset, τ(f) =
⟨λ(f) δ_H, δ_H⟩, which is the coefficient of f on e_H.  It is tracial here
because R(x) = R(x^{-1}) holds for every double coset; the constructor
verifies this and refuses pairs where it fails rather than carrying a
modular correction.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from ._exactvec import ExactVector
from .errors import PairMismatchError, ScaleError
from .groupalg import (AlgebraElement, EnumeratedGroup, ORACLE_CAP, convolve as
                       group_convolve, corner_basis, corner_trace, projector)
from .permgroup import (DoubleCosetTable, PermGroup, Permutation, _inv, _mul,
                        symmetric_group)
from .treefam import TreeShape, ball_aut_group, q_group


@dataclass(frozen=True)
class GelfandReport:
    """Outcome of the commutativity test, with a witness when it fails."""

    commutative: bool
    witness: tuple | None = None      # (class index, class index)
    entry: tuple | None = None        # (row, col, commutator value)


class HeckePair:
    """A pair (G, H) together with its double-coset table and λ-matrices."""

    def __init__(self, G: PermGroup, H: PermGroup,
                 table: DoubleCosetTable | None = None, name: str = ""):
        self.group = G
        self.subgroup = H
        self.name = name
        self.table = table if table is not None else DoubleCosetTable(G, H)
        if not self.table.is_unimodular():
            raise RuntimeError(
                "pair fails R(x) = R(x^{-1}); the canonical vector state "
                "would not be tracial, refusing to build the algebra")
        self.cosets = self.table.cosets
        self.size = len(self.cosets)
        self.dim = len(self.table)
        assert self.table.entries[0].representative.is_identity()
        self.r_indices = np.array([e.r_index for e in self.table.entries], dtype=np.int64)
        self.star_map = np.array(self.table.inverse_class, dtype=np.int32)
        self.class_of_coset = np.array(self.table._class_of_coset, dtype=np.int32)
        self.first_coset = np.array([e.right_cosets[0] for e in self.table.entries],
                                    dtype=np.int32)
        self.cell_class = self._build_cell_table()
        self._struct = None
        self._struct_obj = None

    def _build_cell_table(self):
        reps = [r.images for r in self.cosets.representatives]
        invs = [_inv(r) for r in reps]
        n = self.size
        sub = self.subgroup
        where = self.cosets._where
        cls = self.class_of_coset
        cell = np.empty((n, n), dtype=np.int32)
        for j in range(n):
            inv_j = invs[j]
            col = cell[:, j]
            for i in range(n):
                col[i] = cls[where[sub._min_coset_images(_mul(reps[i], inv_j))]]
        return cell

    # -- basis and λ ------------------------------------------------------------

    def basis_matrix(self, j: int):
        """Integer λ-matrix of the basis element e_j."""
        return (self.cell_class == j).astype(np.int64)

    def lambda_of_coefficients(self, coefficients):
        """λ-matrix of the element with the given coefficient vector."""
        return np.asarray(coefficients)[self.cell_class]

    def structure_constants(self):
        """Integer tensor N[d, e, f] with e_d e_e = sum_f N[d,e,f] e_f.

        Extracted from λ-matrix products applied to the base-coset columns;
        constancy on each double-coset cell class is verified exactly.
        """
        if self._struct is None:
            dim, size = self.dim, self.size
            indicator = np.zeros((size, dim), dtype=np.int64)
            indicator[np.arange(size), self.class_of_coset] = 1
            struct = np.empty((dim, dim, dim), dtype=np.int64)
            for d in range(dim):
                M = self.basis_matrix(d)
                prod = M @ indicator          # column f is M @ 1_{class f}
                for e in range(dim):
                    col = prod[:, e]
                    vals = col[self.first_coset]
                    for f in range(dim):
                        cosets = self.table.entries[f].right_cosets
                        if any(col[c] != vals[f] for c in cosets):
                            raise AssertionError(
                                "product of basis elements is not bi-invariant")
                    struct[d, e] = vals
            self._struct = struct
            self._struct_obj = struct.astype(object)
        return self._struct

    # -- element constructors -----------------------------------------------------

    def zero(self, precision: str = "exact") -> "HeckeElement":
        if precision == "exact":
            return HeckeElement(self, exact=ExactVector.zeros(self.dim))
        return HeckeElement(self, approx=np.zeros(self.dim, dtype=np.complex128))

    def unit(self, precision: str = "exact") -> "HeckeElement":
        return self.basis_element(0, precision)

    def basis_element(self, j: int, precision: str = "exact") -> "HeckeElement":
        if precision == "exact":
            re = np.zeros(self.dim, dtype=object)
            re[j] = 1
            return HeckeElement(self, exact=ExactVector(1, re, None, reduce_terms=False))
        coef = np.zeros(self.dim, dtype=np.complex128)
        coef[j] = 1.0
        return HeckeElement(self, approx=coef)

    def basis(self, precision: str = "exact") -> list:
        return [self.basis_element(j, precision) for j in range(self.dim)]

    def element_from_fractions(self, values) -> "HeckeElement":
        return HeckeElement(self, exact=ExactVector.from_fractions(values))

    def element_from_floats(self, values) -> "HeckeElement":
        return HeckeElement(self, approx=np.asarray(values, dtype=np.complex128))

    def random_exact_element(self, rng, span: int = 3) -> "HeckeElement":
        """Gaussian-integer coefficients drawn uniformly from [-span, span]."""
        re = np.array([int(rng.integers(-span, span + 1)) for _ in range(self.dim)],
                      dtype=object)
        im = np.array([int(rng.integers(-span, span + 1)) for _ in range(self.dim)],
                      dtype=object)
        return HeckeElement(self, exact=ExactVector(1, re, im))

    # -- algebra-level checks -------------------------------------------------------

    def is_commutative(self) -> GelfandReport:
        """Gelfand-pair test: do all pairs of basis λ-matrices commute?

        Deterministic basis order, short-circuiting on the first failure;
        the witness reports one nonzero entry of the commutator matrix.
        """
        struct = self.structure_constants()
        for d in range(self.dim):
            for e in range(d + 1, self.dim):
                if not np.array_equal(struct[d, e], struct[e, d]):
                    C = (self.basis_matrix(d) @ self.basis_matrix(e)
                         - self.basis_matrix(e) @ self.basis_matrix(d))
                    rows, cols = np.nonzero(C)
                    r, c = int(rows[0]), int(cols[0])
                    return GelfandReport(False, witness=(d, e),
                                         entry=(r, c, int(C[r, c])))
        return GelfandReport(True)

    def __repr__(self):
        label = self.name or f"|G|={self.group.order()},|H|={self.subgroup.order()}"
        return f"HeckePair({label}, dim={self.dim}, cosets={self.size})"


class HeckeElement:
    """Element of H(G, H) over the double-coset basis, exact or float."""

    __slots__ = ("pair", "exact", "approx")

    def __init__(self, pair: HeckePair, exact: ExactVector | None = None,
                 approx=None):
        if (exact is None) == (approx is None):
            raise ValueError("element needs exactly one of exact/approx data")
        self.pair = pair
        self.exact = exact
        self.approx = None if approx is None else np.asarray(approx, dtype=np.complex128)

    @property
    def precision(self) -> str:
        return "exact" if self.exact is not None else "float"

    def coefficients_complex(self) -> np.ndarray:
        return self.exact.to_complex() if self.exact is not None else self.approx.copy()

    def to_float(self) -> "HeckeElement":
        if self.approx is not None:
            return self
        return HeckeElement(self.pair, approx=self.exact.to_complex())

    def _same_pair(self, other: "HeckeElement"):
        if self.pair is not other.pair:
            raise PairMismatchError("elements belong to different Hecke pairs")

    def __add__(self, other):
        self._same_pair(other)
        if self.exact is not None and other.exact is not None:
            return HeckeElement(self.pair, exact=self.exact + other.exact)
        return HeckeElement(self.pair,
                            approx=self.coefficients_complex() + other.coefficients_complex())

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        if self.exact is not None:
            return HeckeElement(self.pair, exact=-self.exact)
        return HeckeElement(self.pair, approx=-self.approx)

    def scaled(self, scalar) -> "HeckeElement":
        if self.exact is not None and not isinstance(scalar, (float, complex)):
            return HeckeElement(self.pair, exact=self.exact.scaled(scalar))
        return HeckeElement(self.pair, approx=self.coefficients_complex() * scalar)

    def __mul__(self, other):
        return convolve(self, other)

    def __eq__(self, other):
        if not isinstance(other, HeckeElement) or self.pair is not other.pair:
            return False
        if self.exact is not None and other.exact is not None:
            return self.exact == other.exact
        return np.array_equal(self.coefficients_complex(), other.coefficients_complex())

    def __hash__(self):
        return hash(self.exact) if self.exact is not None else hash(self.approx.tobytes())

    def is_zero(self) -> bool:
        if self.exact is not None:
            return self.exact.is_zero()
        return not self.approx.any()

    def lambda_matrix(self):
        """The action matrix on ℓ²(H\\G); integer-exact data yields object dtype."""
        if self.exact is not None:
            num = self.exact.re[self.pair.cell_class]
            if self.exact.im is not None:
                return (num, self.exact.im[self.pair.cell_class], self.exact.den)
            return (num, None, self.exact.den)
        return self.approx[self.pair.cell_class]

    def lambda_matrix_complex(self) -> np.ndarray:
        return self.coefficients_complex()[self.pair.cell_class]

    def star(self) -> "HeckeElement":
        """Adjoint: λ(star(f)) is the conjugate transpose of λ(f)."""
        if self.exact is not None:
            return HeckeElement(
                self.pair, exact=self.exact.permuted(self.pair.star_map).conjugate())
        return HeckeElement(self.pair, approx=np.conj(self.approx[self.pair.star_map]))

    def trace(self):
        """⟨λ(f) δ_H, δ_H⟩ = the coefficient of f on e_H.

        Returns a (re, im) pair of Fractions for exact elements, a complex
        number for float ones.
        """
        if self.exact is not None:
            return self.exact.coeff(0)
        return complex(self.approx[0])

    def coeff(self, j: int):
        if self.exact is not None:
            return self.exact.coeff(j)
        return complex(self.approx[j])

    def __repr__(self):
        if self.exact is not None:
            body = ", ".join(f"e{j}:{self.exact.coeff(j)}" for j in self.exact.support())
        else:
            body = np.array2string(self.approx, precision=4)
        return f"HeckeElement[{self.precision}]({body})"


def convolve(f: HeckeElement, g: HeckeElement) -> HeckeElement:
    """Product in H(G, H); λ(f·g) = λ(f) λ(g) exactly on exact inputs."""
    f._same_pair(g)
    pair = f.pair
    if f.exact is not None and g.exact is not None:
        pair.structure_constants()
        struct = pair._struct_obj
        re = np.zeros(pair.dim, dtype=object)
        im = np.zeros(pair.dim, dtype=object)
        has_im = False
        fim = f.exact.im
        gim = g.exact.im
        for d in f.exact.support():
            a = int(f.exact.re[d])
            b = int(fim[d]) if fim is not None else 0
            for e in g.exact.support():
                c = int(g.exact.re[e])
                dd = int(gim[e]) if gim is not None else 0
                block = struct[d, e]
                re = re + block * (a * c - b * dd)
                if b or dd:
                    im = im + block * (a * dd + b * c)
                    has_im = True
        vec = ExactVector(f.exact.den * g.exact.den, re, im if has_im else None)
        return HeckeElement(pair, exact=vec)
    # float path: pull the product back through the base-coset columns
    lf = f.to_float().lambda_matrix_complex()
    col = g.coefficients_complex()[pair.class_of_coset]
    values = lf @ col
    return HeckeElement(pair, approx=values[pair.first_coset])


def trace_inner_product(f: HeckeElement, g: HeckeElement):
    """τ(star(f)·g), the GNS inner product of the canonical trace."""
    return convolve(f.star(), g).trace()


def trace_norm_formula(f: HeckeElement):
    """Σ_D R(rep_D) |c_D|² as a Fraction; equals τ(star(f)·f) for exact f."""
    assert f.exact is not None
    total = Fraction(0)
    for j in range(f.pair.dim):
        re, im = f.exact.coeff(j)
        total += int(f.pair.r_indices[j]) * (re * re + im * im)
    return total


# -- pairs from tree data ----------------------------------------------------------

def pair_for_depth(d: int, l: int) -> HeckePair:
    """The pair (S_{d^l}, Q_l): ambient symmetric group on the level set of
    the regular tree, against the depth-l tree-automorphism quotient."""
    points = d ** l
    return HeckePair(symmetric_group(points), q_group(d, l), name=f"(S_{points}, Q_{l})")


def pair_for_level(shape: TreeShape, n: int) -> HeckePair:
    """The pair (S_{|V_n|}, P_n) for the tree with root degree k."""
    points = shape.level_size(n)
    return HeckePair(symmetric_group(points), ball_aut_group(shape, n),
                     name=f"(S_{points}, P_{n})")


# -- oracle bridge -------------------------------------------------------------------

def corner_isomorphism_check(pair: HeckePair, carrier: EnumeratedGroup | None = None):
    """Exact comparison with the group-algebra corner p_H C[G] p_H.

    The linear map sends e_D to (|D|/|H|) · p_H δ_{rep_D} p_H; this check
    verifies it is unital, multiplicative, star-preserving, trace-preserving
    (Hecke trace against |H|·f(e)), and injective, entirely in rational
    arithmetic.  Returns (ok, detail); on failure detail names the first
    broken axiom and the basis indices involved.
    """
    if pair.group.order() > ORACLE_CAP:
        raise ScaleError(
            f"group order {pair.group.order()} exceeds oracle cap {ORACLE_CAP}")
    if carrier is None:
        carrier = EnumeratedGroup(pair.group)
    h_order = pair.subgroup.order()
    p = projector(carrier, pair.subgroup)
    raw = corner_basis(carrier, pair.subgroup, pair.table)
    images = [raw[j].scaled(Fraction(pair.table.entries[j].size, h_order))
              for j in range(pair.dim)]

    def embed(element: HeckeElement) -> AlgebraElement:
        total = AlgebraElement.zero(carrier)
        for j in element.exact.support():
            total = total + images[j].scaled(element.exact.coeff(j))
        return total

    if images[0] != p:
        return False, {"axiom": "unit", "detail": "image of e_H is not p_H"}
    for i in range(pair.dim):
        if images[i].is_zero():
            return False, {"axiom": "injective", "detail": f"image of e_{i} vanishes"}
        for j in range(i + 1, pair.dim):
            if images[i] == images[j]:
                return False, {"axiom": "injective", "detail": (i, j)}
    basis = pair.basis()
    for i in range(pair.dim):
        if embed(basis[i].star()) != images[i].star():
            return False, {"axiom": "star", "detail": i}
        tr_hecke = basis[i].trace()
        if corner_trace(images[i], h_order) != tr_hecke:
            return False, {"axiom": "trace", "detail": i}
        for j in range(pair.dim):
            lhs = embed(convolve(basis[i], basis[j]))
            rhs = group_convolve(images[i], images[j])
            if lhs != rhs:
                return False, {"axiom": "multiplicative", "detail": (i, j)}
    return True, {"dim": pair.dim}
