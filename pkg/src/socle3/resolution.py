"""Residue-field Betti numbers by stepwise minimal free resolutions over a
finite-dimensional local algebra, plus the rational-series side: truncated
series arithmetic, the socle-reduction identities, the main reduction to the
top graded subquotient, the Koszul closed form, and Hankel-based detection
of rational Poincare series.

The syzygy linear algebra is exact and sparse.  For a graded algebra the
constraint columns of distinct internal degrees never interact, so the
elimination automatically splits into small strands; local (non-graded)
algebras run as a single block.  Cost grows with the ambient kernel
dimension d * b_i, which is why a resource guard (SOCLE3_MAX_DIM) refuses
computations that would thrash rather than finish.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .apolarity import LocalAlgebra, quotient_by
from .core import Echelon, PreconditionError, kernel_of_rows, mono_degree, solve_linear

DEFAULT_MAX_DIM = 4000


class ResourceLimitError(RuntimeError):
    """A resolution step would exceed the configured size guard."""


def _max_dim(override: Optional[int]) -> int:
    if override is not None:
        return override
    env = os.environ.get("SOCLE3_MAX_DIM")
    if env:
        return int(env)
    return DEFAULT_MAX_DIM


@dataclass(frozen=True)
class BettiSequence:
    values: tuple
    algebra_dim: int
    source: str  # "direct-resolution" or "formula-expansion"

    def __iter__(self):
        return iter(self.values)

    def __getitem__(self, i):
        return self.values[i]

    def __len__(self):
        return len(self.values)


@dataclass(frozen=True)
class ResolutionStep:
    index: int
    rank: int
    # presentation[r][comp] = coordinate tuple (in A) of the comp-component
    # of the r-th minimal generator of the syzygy module
    presentation: tuple


class Resolution:
    """Minimal free resolution of the residue field over ``algebra``,
    extended step by step; ``betti`` holds b_0..b_N so far."""

    def __init__(self, algebra: LocalAlgebra, max_dim: Optional[int] = None):
        self.algebra = algebra
        self.max_dim = _max_dim(max_dim)
        self.betti = [1]
        d = algebra.dim
        # sparse copy of the multiplication table for the hot loops
        self._table = [[tuple((k, f) for k, f in enumerate(algebra.table[i][j])
                              if f)
                        for j in range(d)] for i in range(d)]
        # generators of the current syzygy module, as sparse integer rows
        # over (component, algebra-basis-index) pairs
        self._gens = [{(0, t): 1} for t in range(1, d)]
        self._gen_count_prev = 1
        self.steps: list = []
        self._minimalize_current(index=1)

    # -- helpers ---------------------------------------------------------------
    def _module_multiply(self, t: int, vec: dict):
        """e_t * vec over the free module; vec is an integer row over
        (comp, beta) pairs.  Returns (integer row, scale) with
        row == scale * (true product)."""
        table = self._table
        out: dict = {}
        for (comp, beta), c in vec.items():
            for k, f in table[t][beta]:
                key = (comp, k)
                v = out.get(key, Fraction(0)) + c * f
                if v:
                    out[key] = v
                else:
                    out.pop(key, None)
        denom = 1
        for c in out.values():
            denom = denom * c.denominator // math.gcd(denom, c.denominator)
        return {k: int(c * denom) for k, c in out.items()}, denom

    def _minimalize_current(self, index: int):
        """Replace the current generator list by a minimal one (a basis of
        Z modulo m*Z) and record the Betti number."""
        d = self.algebra.dim
        mz = Echelon()
        for z in self._gens:
            for t in range(1, d):
                row, _scale = self._module_multiply(t, z)
                if row:
                    mz.insert(_flatten(row, d))
        sel = mz
        chosen = []
        for z in self._gens:
            if sel.insert(_flatten(z, d)):
                chosen.append(z)
        self.betti.append(len(chosen))
        self._gens = chosen
        self.steps.append(ResolutionStep(
            index=index, rank=len(chosen),
            presentation=self._presentation(chosen)))

    def _presentation(self, gens) -> tuple:
        d = self.algebra.dim
        zero = self.algebra.zero_vector()
        rows = []
        for z in gens:
            comps: dict = {}
            for (comp, beta), c in z.items():
                vec = comps.setdefault(comp, [Fraction(0)] * d)
                vec[beta] += c
            rows.append(tuple(tuple(comps[j]) if j in comps else zero
                              for j in range(self._gen_count_prev)))
        return tuple(rows)

    def extend_once(self):
        """One syzygy step: kernel of the current presentation, then minimal
        generators of that kernel."""
        d = self.algebra.dim
        p = len(self._gens)
        ambient = d * p
        if ambient > self.max_dim:
            raise ResourceLimitError(
                f"resolution step needs exact linear algebra in dimension "
                f"{ambient} (kernel ambient d*b_i = {d}*{p}); the guard is "
                f"{self.max_dim} (override with SOCLE3_MAX_DIM)")
        labels = self.algebra.labels
        # rows ordered deep-first so that socle rows become kernel vectors
        # immediately and never join the elimination
        order = sorted(range(d), key=lambda a: (-mono_degree(labels[a]), a))
        rows = []
        scales = []
        tags = []
        for alpha in order:
            for j in range(p):
                row, scale = self._module_multiply(alpha, self._gens[j])
                rows.append(row)
                scales.append(scale)
                tags.append((j, alpha))
        kernel = kernel_of_rows(rows, scales)
        gens = []
        for combo in kernel:
            vec: dict = {}
            for ridx, c in combo.items():
                j, alpha = tags[ridx]
                vec[(j, alpha)] = vec.get((j, alpha), 0) + c
            vec = {k: v for k, v in vec.items() if v}
            for (j, alpha) in vec:
                if alpha == 0:
                    raise AssertionError("non-minimal syzygy (unit entry)")
            gens.append(vec)
        self._gen_count_prev = p
        self._gens = gens
        self._minimalize_current(index=len(self.betti))

    def extend_to(self, n: int):
        while len(self.betti) - 1 < n:
            self.extend_once()


def _flatten(vec: dict, d: int) -> dict:
    return {comp * d + beta: c for (comp, beta), c in vec.items()}


def betti_numbers(algebra: LocalAlgebra, n: int,
                  max_dim: Optional[int] = None) -> BettiSequence:
    """b_i = dim Tor_i(K, K) for i = 0..n, by direct minimal resolution."""
    if n < 0:
        raise PreconditionError("need n >= 0")
    res = Resolution(algebra, max_dim=max_dim)
    res.extend_to(n)
    return BettiSequence(tuple(res.betti[: n + 1]), algebra.dim,
                         "direct-resolution")


def resolution_steps(algebra: LocalAlgebra, n: int,
                     max_dim: Optional[int] = None) -> list:
    res = Resolution(algebra, max_dim=max_dim)
    res.extend_to(n)
    return res.steps


# ---------------------------------------------------------------------------
# truncated power series over the rationals

def series_mul(a: Sequence, b: Sequence, n: int) -> list:
    out = [Fraction(0)] * (n + 1)
    for i, x in enumerate(a[: n + 1]):
        if not x:
            continue
        for j, y in enumerate(b[: n + 1 - i]):
            if y:
                out[i + j] += Fraction(x) * y
    return out


def series_inverse(a: Sequence, n: int) -> list:
    a0 = Fraction(a[0]) if a else Fraction(0)
    if a0 == 0:
        raise PreconditionError("series with zero constant term has no inverse")
    inv = [Fraction(0)] * (n + 1)
    inv[0] = 1 / a0
    for k in range(1, n + 1):
        s = Fraction(0)
        for j in range(1, min(k, len(a) - 1) + 1):
            s += Fraction(a[j]) * inv[k - j]
        inv[k] = -s / a0
    return inv


def series_div(num: Sequence, den: Sequence, n: int) -> list:
    return series_mul(num, series_inverse(den, n), n)


def _as_int_series(values: Sequence) -> list:
    out = []
    for v in values:
        f = Fraction(v)
        if f.denominator != 1:
            raise PreconditionError(f"non-integer series coefficient {f}")
        out.append(int(f))
    return out


@dataclass(frozen=True)
class RationalFunction:
    """num/den with integer coefficient lists ascending in z, stored in
    lowest terms with a positive denominator constant term."""

    num: tuple
    den: tuple

    @staticmethod
    def make(num: Sequence, den: Sequence) -> "RationalFunction":
        num = [Fraction(c) for c in num]
        den = [Fraction(c) for c in den]
        while num and not num[-1]:
            num.pop()
        while den and not den[-1]:
            den.pop()
        if not den or den[0] == 0:
            raise PreconditionError("denominator needs a nonzero constant term")
        if num:
            g = _poly_gcd(num, den)
            if len(g) > 1:
                num = _poly_divide_exact(num, g)
                den = _poly_divide_exact(den, g)
        return RationalFunction(_primitive_int(num, den[0] < 0),
                                _primitive_int(den, den[0] < 0))

    def series(self, n: int) -> list:
        return _as_int_series(series_div(self.num, self.den, n))

    def __str__(self):
        return f"({_poly_str(self.num)})/({_poly_str(self.den)})"


def _poly_str(coeffs) -> str:
    parts = []
    for i, c in enumerate(coeffs):
        if not c:
            continue
        if i == 0:
            parts.append(str(c))
        else:
            z = "z" if i == 1 else f"z^{i}"
            if c == 1:
                term = z
            elif c == -1:
                term = f"-{z}"
            else:
                term = f"{c}*{z}"
            parts.append(term)
    if not parts:
        return "0"
    out = parts[0]
    for t in parts[1:]:
        out += f" - {t[1:]}" if t.startswith("-") else f" + {t}"
    return out


def _poly_gcd(a, b):
    a = [Fraction(c) for c in a]
    b = [Fraction(c) for c in b]
    while b and any(b):
        a, b = b, _poly_mod(a, b)
    # normalize monic
    while a and not a[-1]:
        a.pop()
    if a:
        lead = a[-1]
        a = [c / lead for c in a]
    return a


def _poly_mod(a, b):
    a = list(a)
    while a and not a[-1]:
        a.pop()
    db = len(b) - 1
    while len(a) - 1 >= db and any(a):
        f = a[-1] / b[-1]
        shift = len(a) - 1 - db
        for i, c in enumerate(b):
            a[i + shift] -= f * c
        while a and not a[-1]:
            a.pop()
    return a


def _poly_divide_exact(a, b):
    a = [Fraction(c) for c in a]
    out = [Fraction(0)] * (len(a) - len(b) + 1)
    while len(a) >= len(b) and any(a):
        f = a[-1] / b[-1]
        shift = len(a) - len(b)
        out[shift] = f
        for i, c in enumerate(b):
            a[i + shift] -= f * c
        while a and not a[-1]:
            a.pop()
    return out


def _primitive_int(coeffs, negate: bool) -> tuple:
    denom = 1
    for c in coeffs:
        denom = denom * c.denominator // math.gcd(denom, c.denominator)
    ints = [int(c * denom) for c in coeffs]
    g = 0
    for v in ints:
        g = math.gcd(g, v)
    if g > 1:
        ints = [v // g for v in ints]
    if negate:
        ints = [-v for v in ints]
    return tuple(ints)


def series_expand(f: RationalFunction, n: int) -> list:
    """First n+1 Taylor coefficients of f at z = 0 (must be integers)."""
    return f.series(n)


# ---------------------------------------------------------------------------
# the socle-degree-3 formulas

def main_theorem_prediction(betti_q0: Sequence, h: int, n: int, order: int,
                            variant: str = "proof-consistent"):
    """Betti numbers of the full algebra predicted from those of the top
    graded subquotient B:   P_A = P_B / (1 - (h-n) z P_B).

    ``variant="as-displayed"`` drops the factor z (the shape the source
    display carries); it has no power-series expansion when h = n + 1 and
    returns None in that case.
    """
    if h < n:
        raise PreconditionError("need h >= n")
    pb = list(betti_q0)[: order + 1]
    if len(pb) < order + 1:
        raise PreconditionError("Q(0) Betti numbers do not cover the order")
    k = h - n
    if variant == "proof-consistent":
        den = [Fraction(1)] + [-k * Fraction(pb[i]) for i in range(order)]
    elif variant == "as-displayed":
        den = [1 - k * Fraction(pb[0])] + [-k * Fraction(pb[i])
                                           for i in range(1, order + 1)]
        if den[0] == 0:
            return None
    else:
        raise ValueError(f"unknown variant {variant!r}")
    out = series_div(pb, den, order)
    try:
        return _as_int_series(out)
    except PreconditionError:
        return [Fraction(c) for c in out]


def koszul_formula(h: int, n: int) -> RationalFunction:
    """Closed form when the top subquotient is Koszul: 1/(1 - hz + nz^2 - z^3),
    obtained from the main reduction applied to P_B = 1/H_B(-z)."""
    if not 1 <= n <= h:
        raise PreconditionError("need 1 <= n <= h")
    return RationalFunction.make([1], [1, -h, n, -1])


def is_koszul_numerically(b: LocalAlgebra, order: int,
                          max_dim: Optional[int] = None) -> bool:
    """Necessary numerical Koszul condition P_B(z) * H_B(-z) = 1 through
    z^order; only meaningful for graded algebras."""
    if not b.graded:
        raise PreconditionError("numerical Koszul test needs a graded algebra")
    p = betti_numbers(b, order, max_dim=max_dim).values
    hf = b.hilbert_function().series_coefficients(order)
    halt = [(-1) ** i * hf[i] for i in range(order + 1)]
    prod = series_mul(p, halt, order)
    return prod[0] == 1 and all(c == 0 for c in prod[1:])


@dataclass(frozen=True)
class SocleFormulasReport:
    direct: tuple
    eq1_applicable: bool
    eq1_reason: str
    eq1_predicted: Optional[tuple]
    eq1_matches: Optional[bool]
    eq2_applicable: bool
    eq2_reason: str
    eq2_predicted: Optional[tuple]
    eq2_matches: Optional[bool]

    @property
    def all_applicable_match(self) -> bool:
        ok = True
        if self.eq1_applicable:
            ok = ok and bool(self.eq1_matches)
        if self.eq2_applicable:
            ok = ok and bool(self.eq2_matches)
        return ok


def verify_socle_formulas(a: LocalAlgebra, order: int,
                          max_dim: Optional[int] = None) -> SocleFormulasReport:
    """Check the two reductions against direct resolutions through z^order:

      (1)  P_A = P_{A/xA} / (1 - z P_{A/xA})  for a socle element x not in m^2;
      (2)  P_A = P_{A/(0:m)} / (1 + z^2 P_{A/(0:m)})  for A Gorenstein.

    Inapplicable checks are skipped with a reason.
    """
    from .apolarity import _vec_to_introw

    direct = betti_numbers(a, order, max_dim=max_dim).values
    socle_rows = a.socle().row_polys()
    socle_vecs = [a.coords_of(p) for p in socle_rows]

    eq1_pred = eq1_match = None
    eq1_ok, eq1_reason = False, ""
    mm = Echelon()
    for i in range(1, a.dim):
        for j in range(1, a.dim):
            row = _vec_to_introw(a.multiply(a.unit_vector(i), a.unit_vector(j)))
            if row:
                mm.insert(row)
    candidate = None
    for vec in socle_vecs:
        if vec[0] != 0:
            continue
        if not mm.contains(_vec_to_introw(vec)):
            candidate = vec
            break
    if candidate is None:
        eq1_reason = "no socle element outside the square of the maximal ideal"
    else:
        q = quotient_by(a, [candidate])
        pq = betti_numbers(q, order, max_dim=max_dim).values
        den = [Fraction(1)] + [-Fraction(pq[i]) for i in range(order)]
        eq1_pred = tuple(_as_int_series(series_div(pq, den, order)))
        eq1_match = eq1_pred == tuple(direct)
        eq1_ok = True

    eq2_pred = eq2_match = None
    eq2_ok, eq2_reason = False, ""
    emb_dim = a.hilbert_function().values[1] if a.dim > 1 else 0
    if len(socle_vecs) != 1:
        eq2_reason = f"not Gorenstein (socle dimension {len(socle_vecs)})"
    elif a.dim == 1:
        eq2_reason = "algebra is the residue field"
    elif emb_dim < 2:
        # the socle-quotient identity genuinely fails for hypersurfaces:
        # K[x]/(x^4) has P = 1/(1-z) but the formula predicts 1/(1-z+z^2)
        eq2_reason = ("socle-quotient identity requires embedding dimension"
                      " >= 2 (hypersurface exception)")
    else:
        q = quotient_by(a, [socle_vecs[0]])
        pq = betti_numbers(q, order, max_dim=max_dim).values
        den = [Fraction(1), Fraction(0)] + [Fraction(pq[i])
                                            for i in range(order - 1)]
        eq2_pred = tuple(_as_int_series(series_div(pq, den, order)))
        eq2_match = eq2_pred == tuple(direct)
        eq2_ok = True

    return SocleFormulasReport(tuple(direct),
                               eq1_ok, eq1_reason, eq1_pred, eq1_match,
                               eq2_ok, eq2_reason, eq2_pred, eq2_match)


# ---------------------------------------------------------------------------
# rationality detection

def fit_rational(series: Sequence[int], max_deg: int):
    """Smallest rational function (degrees <= max_deg) whose expansion
    reproduces the whole series, solving the Hankel system on all but the
    last two coefficients and using those two as a predictive check.
    Returns None when nothing fits within the bound."""
    c = [Fraction(v) for v in series]
    if len(c) < 2 * max_deg + 2:
        raise PreconditionError(
            f"need at least {2 * max_deg + 2} coefficients for max_deg={max_deg}")
    solve_len = len(c) - 2
    shapes = sorted(((nd, dd) for nd in range(max_deg + 1)
                     for dd in range(max_deg + 1)),
                    key=lambda s: (max(s), s[0] + s[1], s[0], s[1]))
    for nd, dd in shapes:
        rows = []
        rhs = []
        for i in range(nd + 1, solve_len):
            rows.append([c[i - j] if i - j >= 0 else Fraction(0)
                         for j in range(1, dd + 1)])
            rhs.append(-c[i])
        if rows:
            sol = solve_linear(rows, rhs)
            if sol is None:
                continue
        else:
            sol = [Fraction(0)] * dd
        den = [Fraction(1)] + list(sol)
        num = [c[i] + sum(den[j] * c[i - j] for j in range(1, min(i, dd) + 1))
               for i in range(nd + 1)]
        expansion = series_div(num, den, len(c) - 1)
        if expansion == c:
            return RationalFunction.make(num, den)
    return None
