"""Macaulay duality layer: from a dual generator F to the annihilator ideal,
the finite-dimensional local algebra A_F = R/Ann(F) with an explicit
multiplication table, Hilbert functions, socles and quotients.

Ann(F) is represented as a canonical subspace at truncation degree
deg(F) + 1; this is lossless because every operator of higher order kills F.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .core import (DUAL, RING, Echelon, MonoIndex, Poly, PreconditionError,
                   SubspaceBasis, derivative_action, kernel_of_rows,
                   leading_form, mono_degree, mono_key, mono_mul,
                   monomials_of_degree, monomials_upto, subspace_from_polys,
                   _canonical_subspace, _poly_to_introw,
                   _poly_to_scaled_introw)


@dataclass(frozen=True)
class AnnihilatorIdeal:
    """Degree-truncated annihilator of a dual polynomial (or any ideal
    handed over as a canonical subspace at its truncation)."""

    nvars: int
    truncation: int
    basis: SubspaceBasis
    source: Optional[Poly] = None

    @property
    def quotient_dim(self) -> int:
        from .core import count_monomials_upto
        return count_monomials_upto(self.nvars, self.truncation) - self.basis.dim


@dataclass(frozen=True)
class HilbertFunction:
    values: tuple

    @property
    def dimension(self) -> int:
        return sum(self.values)

    def series_coefficients(self, n: int) -> list:
        return [self.values[i] if i < len(self.values) else 0
                for i in range(n + 1)]


def annihilator(f: Poly) -> AnnihilatorIdeal:
    """Kernel of g -> g.F on operators of degree <= deg(F) + 1."""
    if f.space != DUAL:
        raise PreconditionError("dual generator must live in the y-variables")
    if f.is_zero():
        raise PreconditionError("zero dual generator")
    h = f.nvars
    trunc = f.degree() + 1
    opidx = MonoIndex(h, trunc)
    residx = MonoIndex(h, f.degree())
    rows = []
    scales = []
    for m in opidx.monos:
        img = derivative_action(Poly.monomial(RING, h, m), f)
        row, scale = _poly_to_scaled_introw(img, residx)
        rows.append(row)
        scales.append(scale)
    kernel = kernel_of_rows(rows, scales)
    ech = Echelon()
    for vec in kernel:
        ech.insert(dict(vec))
    basis = _canonical_subspace(ech, opidx, trunc)
    return AnnihilatorIdeal(h, trunc, basis, f)


class LocalAlgebra:
    """Finite-dimensional commutative local algebra with a fixed monomial
    basis (constant first) and an exact multiplication table.

    ``labels`` are the standard monomials: the greedy-first monomials whose
    cosets are linearly independent modulo the defining subspace.  ``nf``
    maps every ring monomial of degree <= socle_degree to its coordinate
    vector; higher monomials reduce to zero.
    """

    __slots__ = ("nvars", "labels", "label_index", "table", "nf",
                 "socle_degree", "graded", "_mpowers")

    def __init__(self, nvars: int, labels: Sequence[tuple], table, nf: dict):
        self.nvars = nvars
        self.labels = tuple(labels)
        self.label_index = {m: i for i, m in enumerate(self.labels)}
        self.table = table  # table[i][j] = coordinate tuple of labels[i]*labels[j]
        self.nf = nf
        self._mpowers = None
        self.socle_degree = self._socle_degree()
        self.graded = self._check_graded()

    # -- construction helpers -------------------------------------------------
    @property
    def dim(self) -> int:
        return len(self.labels)

    @property
    def max_ideal_indices(self) -> tuple:
        return tuple(range(1, self.dim))

    def zero_vector(self) -> tuple:
        return (Fraction(0),) * self.dim

    def unit_vector(self, i: int) -> tuple:
        return tuple(Fraction(1) if j == i else Fraction(0)
                     for j in range(self.dim))

    def multiply(self, u: Sequence[Fraction], v: Sequence[Fraction]) -> tuple:
        out = [Fraction(0)] * self.dim
        for i, a in enumerate(u):
            if not a:
                continue
            for j, b in enumerate(v):
                if not b:
                    continue
                c = a * b
                for k, t in enumerate(self.table[i][j]):
                    if t:
                        out[k] += c * t
        return tuple(out)

    def reduce_monomial(self, m: tuple) -> tuple:
        if sum(m) > self.socle_degree:
            return self.zero_vector()
        return self.nf[m]

    def coords_of(self, p: Poly) -> tuple:
        """Coordinates of the coset of a ring polynomial."""
        if p.space != RING or p.nvars != self.nvars:
            raise PreconditionError("element must be a ring polynomial in the "
                                    "algebra's variables")
        out = [Fraction(0)] * self.dim
        for m, c in p.terms.items():
            vec = self.reduce_monomial(m)
            for k, t in enumerate(vec):
                if t:
                    out[k] += c * t
        return tuple(out)

    def element_poly(self, vec: Sequence[Fraction]) -> Poly:
        return Poly(RING, self.nvars,
                    {self.labels[i]: c for i, c in enumerate(vec) if c})

    # -- structure -------------------------------------------------------------
    def _power_subspaces(self):
        """Echelons of the powers of the maximal ideal, by coordinate index."""
        if self._mpowers is not None:
            return self._mpowers
        powers = []
        current = [self.unit_vector(i) for i in range(1, self.dim)]
        while True:
            ech = Echelon()
            basis = []
            for v in current:
                row = _vec_to_introw(v)
                if row and ech.insert(row):
                    basis.append(v)
            powers.append((ech, basis))
            if ech.rank == 0:
                break
            nxt = []
            for t in range(1, self.dim):
                et = self.unit_vector(t)
                for v in basis:
                    nxt.append(self.multiply(et, v))
            current = nxt
        self._mpowers = powers
        return powers

    def _socle_degree(self) -> int:
        powers = self._power_subspaces()
        # powers[k] is m^{k+1}; socle degree = number of nonzero powers
        return sum(1 for ech, _ in powers if ech.rank > 0)

    def _check_graded(self) -> bool:
        for i in range(self.dim):
            di = mono_degree(self.labels[i])
            for j in range(self.dim):
                d = di + mono_degree(self.labels[j])
                for k, c in enumerate(self.table[i][j]):
                    if c and mono_degree(self.labels[k]) != d:
                        return False
        return True

    def hilbert_function(self) -> HilbertFunction:
        powers = self._power_subspaces()
        dims = [self.dim] + [ech.rank for ech, _ in powers]
        values = [dims[k] - dims[k + 1] for k in range(len(dims) - 1)]
        while values and values[-1] == 0:
            values.pop()
        return HilbertFunction(tuple(values))

    def socle(self) -> SubspaceBasis:
        """Annihilator of the maximal ideal, as a subspace spanned by
        combinations of the basis monomials."""
        rows = []
        scales = []
        for i in range(self.dim):
            frac_row = {}
            denom = 1
            for t in range(1, self.dim):
                prod = self.table[i][t]
                for k, c in enumerate(prod):
                    if c:
                        frac_row[(t, k)] = c
                        denom = denom * c.denominator // math.gcd(
                            denom, c.denominator)
            rows.append({k: int(c * denom) for k, c in frac_row.items()})
            scales.append(denom)
        kernel = kernel_of_rows(rows, scales)
        polys = []
        for vec in kernel:
            polys.append(Poly(RING, self.nvars,
                              {self.labels[i]: Fraction(c)
                               for i, c in vec.items()}))
        maxdeg = max((mono_degree(m) for m in self.labels), default=0)
        return subspace_from_polys(polys, self.nvars, maxdeg)

    def is_gorenstein(self) -> bool:
        return self.socle().dim == 1


def _vec_to_introw(vec: Sequence[Fraction]) -> dict:
    denom = 1
    for c in vec:
        denom = denom * c.denominator // math.gcd(denom, c.denominator)
    return {i: int(c * denom) for i, c in enumerate(vec) if c}


def _algebra_from_defining_subspace(nvars: int, trunc: int,
                                    basis: SubspaceBasis) -> LocalAlgebra:
    """Quotient of the truncated ring by a degree-truncated ideal subspace.

    The subspace must contain every monomial of degree trunc (so that the
    quotient is a genuine algebra with m^trunc = 0) and must not contain the
    constants.
    """
    nf_rows = {}
    for r in basis.rows:
        row = dict(r)
        nf_rows[max(row, key=mono_key)] = row
    pivot_set = set(nf_rows)
    labels = [m for m in monomials_upto(nvars, trunc) if m not in pivot_set]
    if not labels or sum(labels[0]) != 0:
        raise PreconditionError("defining ideal contains the constants")
    if any(mono_degree(m) >= trunc for m in labels):
        raise PreconditionError("defining subspace is not an ideal truncation")
    label_index = {m: i for i, m in enumerate(labels)}
    d = len(labels)

    nf: dict = {}

    def normal_form(m: tuple) -> tuple:
        cached = nf.get(m)
        if cached is not None:
            return cached
        if m in label_index:
            vec = tuple(Fraction(1) if k == label_index[m] else Fraction(0)
                        for k in range(d))
        else:
            row = nf_rows[m]
            pc = row[m]
            out = [Fraction(0)] * d
            for mono, c in row.items():
                if mono == m:
                    continue
                # tails of canonical rows are supported on standard monomials
                out[label_index[mono]] = Fraction(-c, pc)
            vec = tuple(out)
        nf[m] = vec
        return vec

    for m in monomials_upto(nvars, trunc - 1):
        normal_form(m)

    zero = (Fraction(0),) * d
    table = []
    for i, a in enumerate(labels):
        row = []
        for j, b in enumerate(labels):
            m = mono_mul(a, b)
            if sum(m) >= trunc:
                row.append(zero)
            else:
                row.append(normal_form(m))
        table.append(tuple(row))
    return LocalAlgebra(nvars, labels, tuple(table), nf)


def algebra_from_dual(f: Poly) -> LocalAlgebra:
    """The Gorenstein local algebra A_F = R/Ann(F)."""
    ann = annihilator(f)
    return _algebra_from_defining_subspace(ann.nvars, ann.truncation, ann.basis)


def hilbert_function(a: LocalAlgebra) -> HilbertFunction:
    return a.hilbert_function()


def socle(a: LocalAlgebra) -> SubspaceBasis:
    return a.socle()


def q0(f: Poly) -> LocalAlgebra:
    """Top subquotient of the associated graded algebra: the graded algebra
    defined by the leading form of F."""
    if f.is_zero():
        raise PreconditionError("zero dual generator")
    return algebra_from_dual(leading_form(f))


def is_nondegenerate(f3: Poly, n: int) -> bool:
    """True when the order-(d-1) derivatives of the degree-d form span an
    n-dimensional space of linear forms."""
    if f3.is_zero() or not f3.is_homogeneous():
        raise PreconditionError("non-degeneracy is defined for nonzero forms")
    d = f3.degree()
    if d < 1:
        raise PreconditionError("the form must have positive degree")
    if f3.nvars < n or any(v > n for v in f3.variables_used()):
        raise PreconditionError(f"form does not live in the first {n} variables")
    ech = Echelon()
    residx = MonoIndex(f3.nvars, 1)
    for m in monomials_of_degree(f3.nvars, d - 1):
        img = derivative_action(Poly.monomial(RING, f3.nvars, m), f3)
        row = _poly_to_introw(img, residx)
        if row:
            ech.insert(row)
    return ech.rank == n


def quotient_by(a: LocalAlgebra, elements: Sequence) -> LocalAlgebra:
    """Quotient of ``a`` by the ideal generated by the given elements
    (coordinate vectors or ring polynomials), as a LocalAlgebra."""
    vecs = []
    for e in elements:
        vec = a.coords_of(e) if isinstance(e, Poly) else tuple(e)
        if len(vec) != a.dim:
            raise PreconditionError("element has wrong coordinate length")
        if vec[0] != 0:
            raise PreconditionError(
                "element outside the maximal ideal (quotient would be the zero ring)")
        vecs.append(vec)

    ideal = Echelon()
    for vec in vecs:
        for i in range(a.dim):
            prod = a.multiply(a.unit_vector(i), vec)
            row = _vec_to_introw(prod)
            if row:
                ideal.insert(row)

    # canonical reduced form for direct normal-form lookups
    from .core import _row_combine, _row_primitive
    reduced = {}
    for piv in sorted(ideal.pivots):
        row = dict(ideal.pivots[piv])
        for k in sorted(row):
            if k != piv and k in reduced and k in row:
                row = _row_combine(row, reduced[k], k)
        reduced[piv] = _row_primitive(row)

    keep = [i for i in range(a.dim) if i not in reduced]
    if 0 not in keep:
        raise PreconditionError("ideal contains a unit")
    new_index = {old: new for new, old in enumerate(keep)}
    d = len(keep)

    def project(vec) -> tuple:
        out = [Fraction(c) for c in vec]
        for piv in sorted(reduced, reverse=True):
            c = out[piv]
            if not c:
                continue
            row = reduced[piv]
            scale = Fraction(c, row[piv])
            for k, v in row.items():
                out[k] -= scale * v
        return tuple(out[i] for i in keep)

    labels = [a.labels[i] for i in keep]
    table = tuple(tuple(project(a.table[i][j]) for j in keep) for i in keep)
    nf = {m: project(vec) for m, vec in a.nf.items()}
    return LocalAlgebra(a.nvars, labels, table, nf)
