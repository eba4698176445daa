"""The one-parameter ideal family behind smoothability: replacing the last
tail square x_h^2 - 2*sigma by x_h^2 - b*x_h - 2*sigma deforms A = R/J_0
flatly; at b != 0 the fiber splits as K + A' with A' one tail variable
shorter.

Fibers at b != 0 are no longer killed by a fixed power of the maximal
ideal, so quotient dimensions are certified by stabilization: the dimension
of P_{<=D}/span is computed at D, D+1, D+2 and trusted only when constant.

The intersection identity J_b = (x_1,..,x_{h-1},x_h-b) /\\ (J_b + (x_h^2))
is an identity of ideals; truncated spans always differ from it near the
truncation edge (x_h^D - b*x_h^{D-1} lies in both right-hand spans but
needs a degree-(D+1) multiple on the left), so the check compares all three
spans on the window of degrees <= D - 3, where the spans are complete.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .apolarity import annihilator, is_nondegenerate
from .core import (DUAL, RING, Echelon, Poly, PreconditionError,
                   SubspaceBasis, TruncatedIdealSpan, derivative_action,
                   mono_degree)
from .resolution import ResourceLimitError
from .structure import (_require_cubic, dual_generator, solve_sigma,
                        structure_generators)

STABILIZE_START = 6
STABILIZE_CAP = 10


@dataclass(frozen=True)
class FamilySpec:
    n: int
    h: int
    f3: Poly     # non-degenerate cubic in the first n dual variables
    sigma: Poly  # cubic witness in the first n ring variables
    samples: tuple

    def __post_init__(self):
        _require_cubic(self.f3, self.n)
        if not is_nondegenerate(self.f3, self.n):
            raise PreconditionError("degenerate cubic")
        if self.n >= self.h:
            raise PreconditionError("the family requires n < h")
        sig = self.sigma
        if any(v > self.n for v in sig.variables_used()):
            raise PreconditionError("sigma uses variables beyond the first n")
        check = derivative_action(sig.embed(self.f3.nvars), self.f3)
        if check != Poly.constant(DUAL, self.f3.nvars, 1):
            raise PreconditionError("sigma . F3 = 1 fails")

    @property
    def expected_dim(self) -> int:
        return 2 + self.h + self.n


@dataclass(frozen=True)
class FiberReport:
    b: Fraction
    fiber_dimension: int
    truncation_used: int
    stabilized: bool
    coprime: Optional[bool] = None
    intersection_verified: Optional[bool] = None
    split_dimension_check: Optional[bool] = None


def family_spec(f3: Poly, n: int, h: int, sigma: Optional[Poly] = None,
                samples: Sequence = (0, 1, -1, 2, Fraction(1, 2))) -> FamilySpec:
    if sigma is None:
        sigma = solve_sigma(f3, n)
    return FamilySpec(n, h, f3, sigma,
                      tuple(Fraction(b) for b in samples))


def family_generators(spec: FamilySpec, b) -> list:
    """Generators of J_b in h variables: the structure generators with the
    last tail square replaced by x_h^2 - b*x_h - 2*sigma."""
    sigma_n = Poly(RING, spec.n,
                   {m[: spec.n]: c for m, c in spec.sigma.terms.items()})
    gens = structure_generators(spec.f3, spec.n, spec.h, sigma_n,
                                tail_end=spec.h - 1)
    h = spec.h
    xh = Poly.variable(RING, h, h)
    last = xh * xh - xh.scale(Fraction(b)) - sigma_n.embed(h).scale(2)
    gens.append(last)
    return gens


def family_ideal(spec: FamilySpec, b, maxdeg: int) -> SubspaceBasis:
    """Span of the J_b generator multiples of degree <= maxdeg."""
    if maxdeg < 4:
        raise PreconditionError("family truncation must be at least 4")
    gens = family_generators(spec, b)
    return TruncatedIdealSpan(gens, spec.h, maxdeg).to_subspace_basis()


def fiber_dimension(generators: Sequence[Poly], nvars: int, maxdeg: int):
    """(fiber dimension measured at truncation maxdeg, stabilized).

    The dimension is that of P_{<=maxdeg-3} modulo the degree-<=maxdeg span
    of the generators: the raw quotient at the truncation itself always
    carries one phantom dimension (the monomial x_h^maxdeg only arises from
    a multiple one degree higher), so the count is taken on the window where
    the span is complete, three degrees (the maximal generator degree) below
    the truncation.  stabilized is True when the value repeats at maxdeg+1
    and maxdeg+2.
    """
    if maxdeg < 4:
        raise PreconditionError("truncation must be at least 4")
    dims = [TruncatedIdealSpan(generators, nvars, d).windowed_quotient_dim(d - 3)
            for d in (maxdeg, maxdeg + 1, maxdeg + 2)]
    return dims[0], dims[0] == dims[1] == dims[2]


def _stabilized_dimension(generators: Sequence[Poly], nvars: int):
    for d in range(STABILIZE_START, STABILIZE_CAP + 1):
        dim, ok = fiber_dimension(generators, nvars, d)
        if ok:
            return dim, d
    raise ResourceLimitError(
        f"fiber dimension did not stabilize up to truncation {STABILIZE_CAP}")


def check_flat_family(spec: FamilySpec) -> list:
    """Fiber dimension (with stabilization) at every sample; at b != 0 also
    the coprimality, intersection and splitting checks."""
    reports = []
    for b in spec.samples:
        gens = family_generators(spec, b)
        dim, used = _stabilized_dimension(gens, spec.h)
        if b == 0:
            reports.append(FiberReport(b, dim, used, True))
        else:
            reports.append(check_decomposition(spec, b, used,
                                               _precomputed=(gens, dim)))
    return reports


def _point_ideal_generators(spec: FamilySpec, b) -> list:
    h = spec.h
    gens = [Poly.variable(RING, h, i) for i in range(1, h)]
    gens.append(Poly.variable(RING, h, h) - Poly.constant(RING, h, b))
    return gens


def _quotient_coords(span: TruncatedIdealSpan, window: int):
    """Coordinate map onto P_{<=window} modulo the span (coordinates are the
    span's staircase monomials of degree <= window that are not residual
    pivots).  Full reduction keeps images inside the window because the
    column order is degree-compatible."""
    pivot_cols = set(span.residual.pivots)
    coords = [i for i, m in enumerate(span.staircase)
              if i not in pivot_cols and mono_degree(m) <= window]
    coord_index = {c: k for k, c in enumerate(coords)}

    def image(p: Poly) -> dict:
        import math
        if p.is_zero():
            return {}
        denom = 1
        for c in p.terms.values():
            denom = denom * c.denominator // math.gcd(denom, c.denominator)
        row = {}
        for m, c in p.terms.items():
            if not span._divisible(m):
                row[span.stair_index[m]] = int(c * denom)
        residue = span.residual.reduce_full(row)
        return {coord_index[c]: v for c, v in residue.items()}

    return coords, coord_index, image


def check_decomposition(spec: FamilySpec, b, maxdeg: Optional[int] = None,
                        _precomputed=None) -> FiberReport:
    """At b != 0: verify that the point ideal and J_b + (x_h^2) are coprime,
    that they intersect exactly in J_b (on the complete degree window), and
    that the fiber dimension is 1 + dim A'."""
    b = Fraction(b)
    if b == 0:
        raise PreconditionError("the decomposition checks need b != 0")
    h = spec.h
    if _precomputed is None:
        gens = family_generators(spec, b)
        if maxdeg is None:
            dim, maxdeg = _stabilized_dimension(gens, spec.h)
        else:
            dim, ok = fiber_dimension(gens, spec.h, maxdeg)
            if not ok:
                raise ResourceLimitError(
                    f"fiber dimension not stabilized at truncation {maxdeg}")
    else:
        gens, dim = _precomputed
        if maxdeg is None:
            dim, maxdeg = _stabilized_dimension(gens, spec.h)

    point_gens = _point_ideal_generators(spec, b)
    xh = Poly.variable(RING, h, h)

    # coprimality: the union of the point ideal and J_b + (x_h^2) spans 1
    union = TruncatedIdealSpan(gens + [xh * xh] + point_gens, h, maxdeg)
    coprime = union.contains(Poly.constant(RING, h, 1))

    # intersection identity on the window where truncated spans are complete
    window = maxdeg - 3
    v_span = TruncatedIdealSpan(gens, h, maxdeg)
    # every J_b generator vanishes at (0, ..., 0, b), so span(J_b) sits
    # inside the point ideal's span (the full evaluation kernel)
    point = (Fraction(0),) * (h - 1) + (b,)
    for g in gens:
        val = sum(c * _eval_mono(m, point) for m, c in g.terms.items())
        if val != 0:
            raise AssertionError("family generator misses the split point")
    w2_span = TruncatedIdealSpan(gens + [xh * xh], h, maxdeg)

    _coords, _coord_index, image = _quotient_coords(v_span, window)
    # images of W1 = evaluation kernel restricted to the window; each image
    # may carry its own overall scale, which is harmless for span data, so
    # every W1 element is reduced in one piece
    w1_vectors = []
    one = Poly.constant(RING, h, 1)
    for m in v_span.staircase:
        if mono_degree(m) > window or not any(m):
            continue
        p = Poly.monomial(RING, h, m) - one.scale(_eval_mono(m, point))
        vec = image(p)
        if vec:
            w1_vectors.append(vec)
    # images of W2 = span(J_b + (x_h^2)) restricted to the window
    w2_vectors = []
    stairset = set(w2_span.staircase)
    for m in v_span.staircase:
        if mono_degree(m) > window:
            continue
        if m not in stairset:  # monomial multiples of x_h^2 inside W2
            vec = image(Poly.monomial(RING, h, m))
            if vec:
                w2_vectors.append(vec)
    for col in sorted(w2_span.residual.pivots):
        pivmono = w2_span.staircase[col]
        if mono_degree(pivmono) > window:
            continue
        row = w2_span.residual.pivots[col]
        p = Poly(RING, h, {w2_span.staircase[c]: Fraction(v)
                           for c, v in row.items()})
        vec = image(p)
        if vec:
            w2_vectors.append(vec)

    e1 = Echelon()
    r1 = sum(1 for v in w1_vectors if e1.insert(_fracvec_to_introw(v)))
    e2 = Echelon()
    r2 = sum(1 for v in w2_vectors if e2.insert(_fracvec_to_introw(v)))
    eu = Echelon()
    for v in w1_vectors + w2_vectors:
        eu.insert(_fracvec_to_introw(v))
    intersection_trivial = (e1.rank + e2.rank == eu.rank)

    # splitting: dim A_b = 1 + dim A'
    sigma_n = Poly(RING, spec.n,
                   {m[: spec.n]: c for m, c in spec.sigma.terms.items()})
    if spec.h - 1 == spec.n:
        f3n = Poly(DUAL, spec.n,
                   {m[: spec.n]: c for m, c in spec.f3.terms.items()})
        aprime_dim = annihilator(f3n).quotient_dim
    else:
        aprime_gens = structure_generators(spec.f3, spec.n, spec.h - 1, sigma_n)
        aprime_dim, _used = _stabilized_dimension(aprime_gens, spec.h - 1)
    split_ok = dim == 1 + aprime_dim

    return FiberReport(b, dim, maxdeg, True, coprime,
                       intersection_trivial, split_ok)


def verify_specialization_at_zero(spec: FamilySpec) -> bool:
    """J_0 equals Ann(F3 + tail) exactly, as degree-<=4 truncations."""
    from math import comb

    from .core import subspace_equal, truncated_ideal_subspace
    gens = family_generators(spec, 0)
    ann = annihilator(dual_generator(spec.f3, spec.n, spec.h))
    target = comb(spec.h + 4, spec.h) - spec.expected_dim
    sub, _certified = truncated_ideal_subspace(gens, spec.h, 4,
                                               target_dim=target)
    return subspace_equal(sub, ann.basis)


def _eval_mono(m, point) -> Fraction:
    out = Fraction(1)
    for e, v in zip(m, point):
        if e:
            if v == 0:
                return Fraction(0)
            out *= v ** e
    return out


def _fracvec_to_introw(vec: dict) -> dict:
    import math
    denom = 1
    for v in vec.values():
        f = Fraction(v)
        denom = denom * f.denominator // math.gcd(denom, f.denominator)
    return {k: int(Fraction(v) * denom) for k, v in vec.items()}
