"""The socle-degree-3 structure theorem made executable: the witness form
sigma with sigma.F3 = 1, the explicit ideal

    Ann(F3)R + (x_i x_j, x_j^2 - 2 sigma)   for tail variables j,

and the verification that it coincides with the annihilator of
F = F3 + y_{n+1}^2 + ... + y_h^2, plus the socle-2 normal-form ideal.

Ideal subspaces are the true degree-<=4 truncations of the ideals: the
naive span of generator multiples up to degree 4 provably misses elements
(x_j^4 arises only from degree-5 multiples cancelling), so spans are taken
with slack and restricted back down, certified by the colength the theorem
predicts.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Optional

from .apolarity import AnnihilatorIdeal, annihilator, is_nondegenerate
from .core import (DUAL, RING, Poly, PreconditionError, SubspaceBasis,
                   derivative_action, monomials_of_degree, subspace_equal,
                   truncated_ideal_subspace)


@dataclass(frozen=True)
class StructureData:
    n: int
    h: int
    f3: Poly      # non-degenerate cubic in the first n variables
    sigma: Poly   # cubic witness with sigma . f3 = 1
    ideal: AnnihilatorIdeal


def _factorial_of_mono(m) -> int:
    out = 1
    for e in m:
        for k in range(2, e + 1):
            out *= k
    return out


def solve_sigma(f3: Poly, n: int) -> Poly:
    """Deterministic cubic form sigma in the first n ring variables with
    sigma . f3 = 1: supported on the earliest degree-3 monomial pairing
    nontrivially with f3."""
    _require_cubic(f3, n)
    for m in monomials_of_degree(n, 3):
        padded = m + (0,) * (f3.nvars - n)
        c = f3.coefficient(padded)
        if c:
            return Poly.monomial(RING, n, m,
                                 Fraction(1, _factorial_of_mono(m)) / c)
    raise PreconditionError("cubic form with no degree-3 support")


def _require_cubic(f3: Poly, n: int):
    if f3.space != DUAL:
        raise PreconditionError("the cubic must live in the dual variables")
    if f3.is_zero() or not f3.is_homogeneous() or f3.degree() != 3:
        raise PreconditionError("expected a nonzero homogeneous cubic")
    if any(v > n for v in f3.variables_used()):
        raise PreconditionError(f"cubic uses variables beyond the first {n}")


def structure_generators(f3: Poly, n: int, h: int, sigma: Poly,
                         tail_end: Optional[int] = None) -> list:
    """Generating set of the structure ideal in h variables: the annihilator
    of f3 inside the first n variables, the cross products x_i*x_j for tail
    j, and the tail squares x_j^2 - 2*sigma.  ``tail_end`` bounds which
    variables get a square generator (used by the deformation family)."""
    if tail_end is None:
        tail_end = h
    f3n = Poly(DUAL, n, {m[:n]: c for m, c in f3.terms.items()})
    ann_n = annihilator(f3n)
    gens = [p.embed(h) for p in ann_n.basis.row_polys(RING)]
    two_sigma = sigma.embed(h).scale(2)
    for j in range(n + 1, h + 1):
        xj = Poly.variable(RING, h, j)
        for i in range(1, j):
            gens.append(Poly.variable(RING, h, i) * xj)
        if j <= tail_end:
            gens.append(xj * xj - two_sigma)
    return gens


def _check_structure_inputs(f3: Poly, n: int, h: int, sigma: Poly):
    _require_cubic(f3, n)
    if not is_nondegenerate(f3, n):
        raise PreconditionError("degenerate cubic: its second derivatives "
                                f"span fewer than {n} linear forms")
    if not (1 <= n <= h):
        raise PreconditionError("need 1 <= n <= h")
    if sigma.space != RING or sigma.nvars < n:
        raise PreconditionError("sigma must be a ring form in the first n variables")
    if any(v > n for v in sigma.variables_used()):
        raise PreconditionError("sigma uses variables beyond the first n")
    pairing = derivative_action(sigma.embed(f3.nvars) if sigma.nvars < f3.nvars
                                else sigma, f3)
    if pairing != Poly.constant(DUAL, f3.nvars, 1):
        raise PreconditionError("sigma . F3 = 1 fails")


def structure_ideal(f3: Poly, n: int, h: int, sigma: Poly) -> AnnihilatorIdeal:
    """Degree-<=4 truncation of the structure-theorem ideal; for n = h this
    is just the annihilator of the cubic."""
    _check_structure_inputs(f3, n, h, sigma)
    if n == h:
        f3h = Poly(DUAL, h, {m[:h]: c for m, c in f3.terms.items()})
        return annihilator(f3h)
    sigma_n = Poly(RING, n, {m[:n]: c for m, c in sigma.terms.items()})
    gens = structure_generators(f3, n, h, sigma_n)
    target = comb(h + 4, h) - (2 + h + n)  # theorem: colength is 2 + h + n
    sub, _certified = truncated_ideal_subspace(gens, h, 4, target_dim=target)
    return AnnihilatorIdeal(h, 4, sub)


def structure_data(f3: Poly, n: int, h: int,
                   sigma: Optional[Poly] = None) -> StructureData:
    if sigma is None:
        sigma = solve_sigma(f3, n)
    ideal = structure_ideal(f3, n, h, sigma)
    return StructureData(n, h, f3, sigma, ideal)


def dual_generator(f3: Poly, n: int, h: int) -> Poly:
    """F = F3 + y_{n+1}^2 + ... + y_h^2 in h dual variables."""
    _require_cubic(f3, n)
    f = Poly(DUAL, h, {m[:n] + (0,) * (h - n): c for m, c in f3.terms.items()})
    for j in range(n + 1, h + 1):
        yj = Poly.variable(DUAL, h, j)
        f = f + yj * yj
    return f


def verify_structure_lemma(f3: Poly, n: int, h: int, sigma: Poly) -> bool:
    """Exact check that the structure ideal equals Ann(F3 + tail) as
    subspaces at truncation degree 4."""
    lhs = structure_ideal(f3, n, h, sigma)
    rhs = annihilator(dual_generator(f3, n, h))
    return subspace_equal(lhs.basis, rhs.basis)


def socle2_ideal(h: int) -> AnnihilatorIdeal:
    """Normal-form ideal of the socle-2 Gorenstein algebra of embedding
    dimension h: all products x_i*x_j plus the differences x_u^2 - x_1^2."""
    if h < 2:
        raise PreconditionError("socle-2 normal form needs embedding dimension > 1")
    gens = []
    for i in range(1, h + 1):
        for j in range(i + 1, h + 1):
            gens.append(Poly.variable(RING, h, i) * Poly.variable(RING, h, j))
    x1 = Poly.variable(RING, h, 1)
    for u in range(2, h + 1):
        xu = Poly.variable(RING, h, u)
        gens.append(xu * xu - x1 * x1)
    target = comb(h + 3, h) - (h + 2)
    sub, _certified = truncated_ideal_subspace(gens, h, 3, target_dim=target)
    return AnnihilatorIdeal(h, 3, sub)
