"""Exact polynomial core: rational-coefficient multivariate polynomials,
the contraction action of ring variables on the dual polynomial space, and
canonical echelon representations of coefficient subspaces.

Coefficients are arbitrary-precision rationals throughout; there is no
floating point anywhere.  The ambient power-series ring is always handled
through a degree truncation: every subspace lives inside the (finite
dimensional) space of polynomials of degree <= D for some explicit D.

All values are immutable after construction and every function is pure, so
everything in this module is safe to share across threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations_with_replacement
from typing import Iterable, Iterator, Optional, Sequence

RING = "x"  # variables that act by differentiation
DUAL = "y"  # polynomials being differentiated

Mono = tuple  # exponent vector (tuple of non-negative ints); degree = sum


class PreconditionError(ValueError):
    """A documented mathematical precondition was violated."""


# ---------------------------------------------------------------------------
# monomials
#
# Canonical order: by degree first, then with variable 1 most significant and
# larger exponents first, so enumeration reads 1, x1, x2, ..., x1^2, x1*x2, ...
# This is the fixed total order behind every echelon form in the package.

def mono_degree(m: Mono) -> int:
    return sum(m)


def mono_key(m: Mono):
    """Sort key realizing the canonical ascending monomial order."""
    return (sum(m), tuple(-e for e in m))


def mono_mul(a: Mono, b: Mono) -> Mono:
    return tuple(x + y for x, y in zip(a, b))


def mono_divides(a: Mono, b: Mono) -> bool:
    """True if x^a divides x^b."""
    return all(x <= y for x, y in zip(a, b))


def monomials_of_degree(nvars: int, d: int) -> Iterator[Mono]:
    for picks in combinations_with_replacement(range(nvars), d):
        e = [0] * nvars
        for i in picks:
            e[i] += 1
        yield tuple(e)


def monomials_upto(nvars: int, maxdeg: int) -> Iterator[Mono]:
    for d in range(maxdeg + 1):
        yield from monomials_of_degree(nvars, d)


def count_monomials_upto(nvars: int, maxdeg: int) -> int:
    return math.comb(nvars + maxdeg, nvars)


class MonoIndex:
    """Bidirectional map between monomials of degree <= maxdeg and dense
    integer column indices following the canonical order."""

    def __init__(self, nvars: int, maxdeg: int):
        self.nvars = nvars
        self.maxdeg = maxdeg
        self.monos = list(monomials_upto(nvars, maxdeg))
        self.index = {m: i for i, m in enumerate(self.monos)}

    def __len__(self) -> int:
        return len(self.monos)


# ---------------------------------------------------------------------------
# polynomials

class Poly:
    """Immutable multivariate polynomial with exact rational coefficients.

    ``space`` tags which variable family the polynomial lives in: RING ("x",
    operators) or DUAL ("y", differentiated polynomials).  Operations never
    mix the two families implicitly.
    """

    __slots__ = ("space", "nvars", "terms")

    def __init__(self, space: str, nvars: int, terms: dict):
        if space not in (RING, DUAL):
            raise ValueError(f"unknown variable space {space!r}")
        if nvars < 1:
            raise ValueError("need at least one variable")
        clean = {}
        for m, c in terms.items():
            c = Fraction(c)
            if c == 0:
                continue
            if len(m) != nvars or any(e < 0 for e in m):
                raise ValueError(f"bad exponent vector {m!r} for nvars={nvars}")
            clean[tuple(m)] = c
        object.__setattr__(self, "space", space)
        object.__setattr__(self, "nvars", nvars)
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, *a):
        raise AttributeError("Poly is immutable")

    # -- constructors -------------------------------------------------------
    @classmethod
    def zero(cls, space: str, nvars: int) -> "Poly":
        return cls(space, nvars, {})

    @classmethod
    def constant(cls, space: str, nvars: int, c) -> "Poly":
        return cls(space, nvars, {(0,) * nvars: Fraction(c)})

    @classmethod
    def variable(cls, space: str, nvars: int, i: int) -> "Poly":
        """The variable with 1-based index i."""
        if not 1 <= i <= nvars:
            raise ValueError(f"variable index {i} out of range 1..{nvars}")
        e = [0] * nvars
        e[i - 1] = 1
        return cls(space, nvars, {tuple(e): Fraction(1)})

    @classmethod
    def monomial(cls, space: str, nvars: int, m: Mono, c=1) -> "Poly":
        return cls(space, nvars, {tuple(m): Fraction(c)})

    # -- basic queries -------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        """Total degree; the zero polynomial has degree -1 by convention."""
        if not self.terms:
            return -1
        return max(sum(m) for m in self.terms)

    def coefficient(self, m: Mono) -> Fraction:
        return self.terms.get(tuple(m), Fraction(0))

    def variables_used(self) -> set:
        used = set()
        for m in self.terms:
            for i, e in enumerate(m):
                if e:
                    used.add(i + 1)
        return used

    def is_homogeneous(self) -> bool:
        degs = {sum(m) for m in self.terms}
        return len(degs) <= 1

    def __eq__(self, other) -> bool:
        return (isinstance(other, Poly) and self.space == other.space
                and self.nvars == other.nvars and self.terms == other.terms)

    def __hash__(self):
        return hash((self.space, self.nvars,
                     tuple(sorted(self.terms.items()))))

    def __repr__(self):
        from . import parser  # local import; parser owns formatting
        return f"Poly({self.space!r}, {self.nvars}, {parser.print_poly(self)!r})"

    # -- arithmetic ----------------------------------------------------------
    def _check_compatible(self, other: "Poly"):
        if self.space != other.space:
            raise PreconditionError(
                f"mixed variable spaces {self.space!r} and {other.space!r}")
        if self.nvars != other.nvars:
            raise PreconditionError(
                f"mixed variable counts {self.nvars} and {other.nvars}")

    def __add__(self, other: "Poly") -> "Poly":
        self._check_compatible(other)
        terms = dict(self.terms)
        for m, c in other.terms.items():
            terms[m] = terms.get(m, Fraction(0)) + c
        return Poly(self.space, self.nvars, terms)

    def __neg__(self) -> "Poly":
        return Poly(self.space, self.nvars,
                    {m: -c for m, c in self.terms.items()})

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __mul__(self, other: "Poly") -> "Poly":
        self._check_compatible(other)
        terms = {}
        for ma, ca in self.terms.items():
            for mb, cb in other.terms.items():
                m = mono_mul(ma, mb)
                terms[m] = terms.get(m, Fraction(0)) + ca * cb
        return Poly(self.space, self.nvars, terms)

    def scale(self, c) -> "Poly":
        c = Fraction(c)
        return Poly(self.space, self.nvars,
                    {m: c * v for m, v in self.terms.items()})

    def embed(self, nvars: int) -> "Poly":
        """Re-read the polynomial in a larger variable set (zero-padding)."""
        if nvars < self.nvars:
            raise ValueError("cannot shrink the variable set")
        pad = (0,) * (nvars - self.nvars)
        return Poly(self.space, nvars,
                    {m + pad: c for m, c in self.terms.items()})


def poly_add(p: Poly, q: Poly) -> Poly:
    return p + q


def poly_mul(p: Poly, q: Poly) -> Poly:
    return p * q


def leading_form(p: Poly) -> Poly:
    """Homogeneous component of top degree."""
    if p.is_zero():
        raise PreconditionError("the zero polynomial has no leading form")
    d = p.degree()
    return Poly(p.space, p.nvars,
                {m: c for m, c in p.terms.items() if sum(m) == d})


def derivative_action(f: Poly, g: Poly) -> Poly:
    """Apply f, read as a constant-coefficient differential operator, to g.

    Each ring monomial x^a acts as the iterated partial derivative of
    multi-order a on the dual variables.  Bilinear in both arguments, and
    turns multiplication in the ring into composition of operators.
    """
    if f.space != RING or g.space != DUAL:
        raise PreconditionError("action takes a ring operator and a dual polynomial")
    if f.nvars != g.nvars:
        raise PreconditionError(
            f"mixed variable counts {f.nvars} and {g.nvars}")
    out: dict = {}
    for a, ca in f.terms.items():
        for b, cb in g.terms.items():
            if not mono_divides(a, b):
                continue
            scale = 1
            for ai, bi in zip(a, b):
                for k in range(ai):
                    scale *= bi - k
            m = tuple(bi - ai for ai, bi in zip(a, b))
            c = ca * cb * scale
            out[m] = out.get(m, Fraction(0)) + c
    return Poly(DUAL, g.nvars, out)


def apolar_pairing(f: Poly, g: Poly) -> Fraction:
    """Constant term of f acting on g (the apolarity pairing in equal degree)."""
    r = derivative_action(f, g)
    return r.coefficient((0,) * g.nvars)


# ---------------------------------------------------------------------------
# exact linear algebra over the rationals
#
# Rows are sparse dicts {column index: integer coefficient}, kept primitive
# (content 1, positive pivot).  Pivot of a row is its largest column index;
# with columns ordered by the canonical monomial order this makes the
# non-pivot columns exactly the greedy-first "standard" monomials.

def _row_primitive(row: dict) -> dict:
    g = 0
    for v in row.values():
        g = math.gcd(g, v)
        if g == 1:
            break
    if g > 1:
        row = {k: v // g for k, v in row.items()}
    if row[max(row)] < 0:
        row = {k: -v for k, v in row.items()}
    return row


def _row_combine(row: dict, prow: dict, col: int) -> dict:
    """Eliminate ``col`` from row using pivot row prow; keeps integers and
    strips common content to control growth."""
    a = row[col]
    b = prow[col]
    g = math.gcd(a, b)
    mb, ma = b // g, a // g
    new = {k: mb * v for k, v in row.items()}
    for k, v in prow.items():
        w = new.get(k, 0) - ma * v
        if w:
            new[k] = w
        else:
            new.pop(k, None)
    if new:
        g = 0
        for v in new.values():
            g = math.gcd(g, v)
            if g == 1:
                return new
        if g > 1:
            new = {k: v // g for k, v in new.items()}
    return new


class Echelon:
    """Sparse integer row-echelon accumulator (not fully reduced).

    Supports incremental insertion, membership tests and rank queries;
    `canonical_rows` produces the fully reduced canonical form on demand.
    """

    __slots__ = ("pivots",)

    def __init__(self):
        self.pivots: dict = {}  # pivot column -> primitive row

    def copy(self) -> "Echelon":
        e = Echelon.__new__(Echelon)
        e.pivots = dict(self.pivots)
        return e

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def reduce(self, row: dict) -> dict:
        row = dict(row)
        while row:
            c = max(row)
            prow = self.pivots.get(c)
            if prow is None:
                return row
            row = _row_combine(row, prow, c)
        return row

    def reduce_full(self, row: dict) -> dict:
        """Eliminate every pivot column from the row (not just leading ones);
        the residue is supported on non-pivot columns only."""
        row = dict(row)
        while True:
            hit = [c for c in row if c in self.pivots]
            if not hit:
                return row
            c = max(hit)
            row = _row_combine(row, self.pivots[c], c)

    def insert(self, row: dict) -> bool:
        """Add the row's span; True if the rank grew."""
        row = self.reduce(row)
        if not row:
            return False
        row = _row_primitive(row)
        self.pivots[max(row)] = row
        return True

    def contains(self, row: dict) -> bool:
        return not self.reduce(row)

    def canonical_rows(self) -> list:
        """Fully reduced rows (each pivot column cleared from all other
        rows), primitive, sorted by pivot column.  This representation is
        unique for the subspace."""
        reduced: dict = {}
        for c in sorted(self.pivots):
            row = self.pivots[c]
            out = {}
            for k, v in row.items():
                out[k] = v
            # clear smaller pivot columns from the tail
            for k in sorted(out):
                if k != c and k in reduced and k in out:
                    out = _row_combine(out, reduced[k], k)
            reduced[c] = _row_primitive(out)
        return [reduced[c] for c in sorted(reduced)]


def kernel_of_rows(rows: Sequence[dict], scales: Optional[Sequence[int]] = None) -> list:
    """Left kernel of the matrix whose i-th row is ``rows[i]``.

    Returns primitive integer combination vectors u (dicts {i: coeff}) with
    sum_i u[i] * rows[i] = 0, one per kernel dimension, in a deterministic
    order.  Columns may be any sortable keys.

    When ``scales`` is given, rows[i] is understood as scales[i] times the
    caller's true row, and the returned combinations refer to the true rows
    (coefficients are multiplied back by the scales).
    """
    pivots: dict = {}  # col -> (wrow, augrow)
    kernel = []
    for idx, w in enumerate(rows):
        w = {k: v for k, v in w.items() if v}
        aug = {idx: 1}
        while w:
            c = max(w)
            hit = pivots.get(c)
            if hit is None:
                break
            pw, paug = hit
            a, b = w[c], pw[c]
            g = math.gcd(a, b)
            mb, ma = b // g, a // g
            nw = {k: mb * v for k, v in w.items()}
            for k, v in pw.items():
                t = nw.get(k, 0) - ma * v
                if t:
                    nw[k] = t
                else:
                    nw.pop(k, None)
            naug = {k: mb * v for k, v in aug.items()}
            for k, v in paug.items():
                t = naug.get(k, 0) - ma * v
                if t:
                    naug[k] = t
                else:
                    naug.pop(k, None)
            # joint content strip keeps the invariant aug . rows == w
            g = 0
            for v in nw.values():
                g = math.gcd(g, v)
                if g == 1:
                    break
            if g != 1:
                for v in naug.values():
                    g = math.gcd(g, v)
                    if g == 1:
                        break
            if g > 1:
                nw = {k: v // g for k, v in nw.items()}
                naug = {k: v // g for k, v in naug.items()}
            w, aug = nw, naug
        if w:
            pivots[max(w)] = (w, aug)
        else:
            if scales is not None:
                aug = {k: v * scales[k] for k, v in aug.items()}
            kernel.append(_row_primitive(aug))
    return kernel


# ---------------------------------------------------------------------------
# coefficient subspaces of the truncated ring

@dataclass(frozen=True)
class SubspaceBasis:
    """Canonical reduced basis of a subspace of polynomials of degree <= maxdeg.

    Rows are primitive integer coefficient vectors in fully reduced echelon
    form with respect to the canonical monomial order, so two subspaces are
    equal exactly when their SubspaceBasis values are equal.
    """

    nvars: int
    maxdeg: int
    rows: tuple  # tuple of rows; row = tuple of (mono, int) sorted by mono_key

    @property
    def dim(self) -> int:
        return len(self.rows)

    def row_polys(self, space: str = RING) -> list:
        return [Poly(space, self.nvars, dict(r)) for r in self.rows]

    def pivots(self) -> list:
        return [max(dict(r), key=mono_key) for r in self.rows]

    def contains(self, p: Poly) -> bool:
        if p.nvars != self.nvars:
            raise PreconditionError("variable count mismatch")
        if p.is_zero():
            return True
        if p.degree() > self.maxdeg:
            return False
        ech = Echelon()
        idx = MonoIndex(self.nvars, self.maxdeg)
        for r in self.rows:
            ech.pivots[max(idx.index[m] for m, _ in r)] = {
                idx.index[m]: c for m, c in r}
        return ech.contains(_poly_to_introw(p, idx))

    def restrict(self, maxdeg: int) -> "SubspaceBasis":
        """Intersection with the polynomials of degree <= maxdeg.

        Valid because every row's support is degree-bounded by its pivot in
        the canonical (degree-first) order."""
        if maxdeg > self.maxdeg:
            raise PreconditionError("cannot restrict upward")
        rows = tuple(r for r in self.rows
                     if sum(max(dict(r), key=mono_key)) <= maxdeg)
        return SubspaceBasis(self.nvars, maxdeg, rows)


def _poly_to_introw(p: Poly, idx: MonoIndex) -> dict:
    denom = 1
    for c in p.terms.values():
        denom = denom * c.denominator // math.gcd(denom, c.denominator)
    return {idx.index[m]: int(c * denom) for m, c in p.terms.items()}


def _poly_to_scaled_introw(p: Poly, idx: MonoIndex):
    """(integer row, scale): row equals scale times the polynomial."""
    denom = 1
    for c in p.terms.values():
        denom = denom * c.denominator // math.gcd(denom, c.denominator)
    return {idx.index[m]: int(c * denom) for m, c in p.terms.items()}, denom


def _canonical_subspace(ech: Echelon, idx: MonoIndex, maxdeg: int) -> SubspaceBasis:
    rows = []
    for r in ech.canonical_rows():
        row = tuple(sorted(((idx.monos[k], v) for k, v in r.items()),
                           key=lambda t: mono_key(t[0])))
        rows.append(row)
    rows.sort(key=lambda row: mono_key(row[-1][0]))
    return SubspaceBasis(idx.nvars, maxdeg, tuple(rows))


def subspace_from_polys(polys: Iterable[Poly], nvars: int, maxdeg: int) -> SubspaceBasis:
    idx = MonoIndex(nvars, maxdeg)
    ech = Echelon()
    for p in polys:
        if p.is_zero():
            continue
        if p.nvars != nvars:
            raise PreconditionError("variable count mismatch")
        if p.degree() > maxdeg:
            raise PreconditionError("polynomial exceeds the truncation degree")
        ech.insert(_poly_to_introw(p, idx))
    return _canonical_subspace(ech, idx, maxdeg)


def subspace_equal(a: SubspaceBasis, b: SubspaceBasis) -> bool:
    if a.nvars != b.nvars or a.maxdeg != b.maxdeg:
        raise PreconditionError("subspaces live in different truncations")
    return a.rows == b.rows


# ---------------------------------------------------------------------------
# truncated ideal spans
#
# The span of { m*g : m monomial, g generator, deg(m*g) <= D } is represented
# implicitly: monomial generators contribute every monomial they divide
# (never materialized), and only the residue of the non-monomial generators'
# multiples is kept in an echelon over the small set of non-divisible
# "staircase" columns.  This keeps all ideal computations at desk scale even
# when the ambient truncation has thousands of monomials.

class TruncatedIdealSpan:
    def __init__(self, generators: Sequence[Poly], nvars: int, maxdeg: int):
        self.nvars = nvars
        self.maxdeg = maxdeg
        mongens: list = []
        others: list = []
        for g in generators:
            if g.is_zero():
                continue
            if g.nvars != nvars:
                raise PreconditionError("generator variable count mismatch")
            if g.degree() > maxdeg:
                raise PreconditionError("generator exceeds the truncation degree")
            if len(g.terms) == 1:
                mongens.append(next(iter(g.terms)))
            else:
                others.append(g)
        # keep only divisibility-minimal monomial generators
        mongens.sort(key=mono_key)
        minimal: list = []
        for m in mongens:
            if not any(mono_divides(p, m) for p in minimal):
                minimal.append(m)
        self.mongens = minimal
        # staircase: monomials <= maxdeg divisible by no monomial generator
        self.staircase = self._nondivisible_upto(maxdeg)
        self.stair_index = {m: i for i, m in enumerate(self.staircase)}
        self.residual = Echelon()
        for g in others:
            dg = g.degree()
            denom = 1
            for c in g.terms.values():
                denom = denom * c.denominator // math.gcd(denom, c.denominator)
            gint = {m: int(c * denom) for m, c in g.terms.items()}
            for mult in self._nondivisible_upto(maxdeg - dg):
                row = {}
                for t, c in gint.items():
                    mt = mono_mul(mult, t)
                    if not self._divisible(mt):
                        row[self.stair_index[mt]] = c
                if row:
                    self.residual.insert(row)

    def _divisible(self, m: Mono) -> bool:
        return any(mono_divides(p, m) for p in self.mongens)

    def _nondivisible_upto(self, maxdeg: int) -> list:
        """Monomials of degree <= maxdeg not divisible by any monomial
        generator, in canonical order.  This set is downward closed, so a
        breadth-first walk from 1 enumerates it without touching the rest
        of the (possibly huge) truncation."""
        if maxdeg < 0:
            return []
        zero = (0,) * self.nvars
        if self._divisible(zero):
            return []
        found = {zero}
        frontier = [zero]
        for _ in range(maxdeg):
            new = []
            for m in frontier:
                for i in range(self.nvars):
                    child = m[:i] + (m[i] + 1,) + m[i + 1:]
                    if child in found or self._divisible(child):
                        continue
                    found.add(child)
                    new.append(child)
            frontier = new
        return sorted(found, key=mono_key)

    # -- queries -------------------------------------------------------------
    def quotient_dim(self) -> int:
        """Dimension of (polynomials of degree <= maxdeg) / span."""
        return len(self.staircase) - self.residual.rank

    def windowed_quotient_dim(self, window: int) -> int:
        """Dimension of P_{<=window} / (span /\\ P_{<=window}).

        The restriction of the span to the window is spanned by the rows
        whose pivot has degree <= window (the column order is degree
        compatible), together with the divisible monomials there."""
        stairs = sum(1 for m in self.staircase if sum(m) <= window)
        pivots = sum(1 for c in self.residual.pivots
                     if sum(self.staircase[c]) <= window)
        return stairs - pivots

    def span_dim(self) -> int:
        return count_monomials_upto(self.nvars, self.maxdeg) - self.quotient_dim()

    def reduce_poly(self, p: Poly) -> dict:
        """Residue of p modulo the span, as an integer row over staircase
        columns (empty dict iff p lies in the span)."""
        if p.is_zero():
            return {}
        if p.degree() > self.maxdeg:
            raise PreconditionError("polynomial exceeds the truncation degree")
        denom = 1
        for c in p.terms.values():
            denom = denom * c.denominator // math.gcd(denom, c.denominator)
        row = {}
        for m, c in p.terms.items():
            if not self._divisible(m):
                row[self.stair_index[m]] = int(c * denom)
        return self.residual.reduce(row)

    def contains(self, p: Poly) -> bool:
        return not self.reduce_poly(p)

    def restricted_subspace(self, maxdeg: int) -> SubspaceBasis:
        """The part of the span supported in degree <= maxdeg, materialized
        as a canonical SubspaceBasis (kept for moderate truncations)."""
        if maxdeg > self.maxdeg:
            raise PreconditionError("cannot restrict upward")
        idx = MonoIndex(self.nvars, maxdeg)
        ech = Echelon()
        stairset = set(self.staircase)
        for m in idx.monos:
            if m not in stairset:
                ech.insert({idx.index[m]: 1})
        for c in sorted(self.residual.pivots):
            row = self.residual.pivots[c]
            pivmono = self.staircase[c]
            if sum(pivmono) <= maxdeg:
                ech.insert({idx.index[self.staircase[k]]: v
                            for k, v in row.items()})
        return _canonical_subspace(ech, idx, maxdeg)

    def to_subspace_basis(self) -> SubspaceBasis:
        return self.restricted_subspace(self.maxdeg)


def span_to_degree(generators: Sequence[Poly], nvars: int, maxdeg: int) -> SubspaceBasis:
    """Canonical basis of { sum m_i g_i : monomial multiples of total degree
    <= maxdeg } inside the truncated ring."""
    for g in generators:
        if g.degree() > maxdeg:
            raise PreconditionError("truncation below a generator degree")
    return TruncatedIdealSpan(generators, nvars, maxdeg).to_subspace_basis()


def solve_linear(rows: Sequence[Sequence[Fraction]], rhs: Sequence[Fraction]):
    """One exact solution of the dense system rows . x = rhs, or None if
    inconsistent.  Free variables are set to zero (small systems only)."""
    m = [list(map(Fraction, r)) + [Fraction(v)] for r, v in zip(rows, rhs)]
    nrows = len(m)
    ncols = len(rows[0]) if rows else 0
    pivots = []
    r = 0
    for c in range(ncols):
        pr = next((i for i in range(r, nrows) if m[i][c]), None)
        if pr is None:
            continue
        m[r], m[pr] = m[pr], m[r]
        pv = m[r][c]
        m[r] = [v / pv for v in m[r]]
        for i in range(nrows):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    for i in range(r, nrows):
        if m[i][ncols]:
            return None
    x = [Fraction(0)] * ncols
    for i, c in enumerate(pivots):
        x[c] = m[i][ncols]
    return x


def truncated_ideal_subspace(generators: Sequence[Poly], nvars: int, deg: int,
                             target_dim: Optional[int] = None,
                             max_slack: int = 4):
    """Degree-<=deg part of the ideal generated by ``generators``.

    The naive span at truncation deg can miss low-degree ideal elements that
    only arise from cancelling higher-degree multiples, so the span is taken
    at deg + slack and restricted back down, raising slack until the result
    stops growing (or hits ``target_dim`` when the caller knows the answer).
    Returns (SubspaceBasis, certified) where certified means target_dim was
    reached.
    """
    prev = None
    for slack in range(max_slack + 1):
        span = TruncatedIdealSpan(generators, nvars, deg + slack)
        sub = span.restricted_subspace(deg)
        if target_dim is not None and sub.dim == target_dim:
            return sub, True
        if prev is not None and sub.dim == prev.dim:
            return sub, target_dim is None
        prev = sub
    return prev, False
