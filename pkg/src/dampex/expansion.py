"""Moment-built expansion polynomials and their algebraic identities.

Three kinds of polynomials in the frequency variable are built from a
moment table:

* kind ``"A"`` — the order-k profile polynomial, layered sums
  |xi|^{k-2j} * sum_{|alpha| <= 2j} M_alpha (i xi)^alpha (even k; the odd
  branch uses |xi|^{k-1-2j} and |alpha| <= 2j+1).
* kind ``"B"`` — the order-k increment, same layers with |alpha| == 2j
  (resp. 2j+1).  Every term has total degree exactly k, which gives the
  homogeneity B(xi/c) = c^{-k} B(xi).
* kind ``"C"`` — the flat moment layer sum_{|alpha| == k} M_alpha (i xi)^alpha,
  the increment of the plain heat flow.

Terms are kept unsimplified (radial power and monomial separate) so each
polynomial mirrors its defining formula one-to-one; ``canonical()`` expands
the radial powers into monomials for structural checks.  A term
(coefficient, p, alpha) means coefficient * |xi|^p * xi^alpha with the
i^{|alpha|} factor folded into the complex coefficient.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import InsufficientOrderError
from .indices import Alpha, degree, i_power, indices_of_degree, multi_factorial
from .initial_data import MomentTable

KINDS = ("A", "B", "C")


@dataclass(frozen=True)
class Term:
    coefficient: complex
    radial_power: int
    monomial: Alpha

    @property
    def total_degree(self) -> int:
        return self.radial_power + degree(self.monomial)


@dataclass(frozen=True, eq=False)
class ExpansionPolynomial:
    kind: str
    order: int
    dimension: int
    terms: tuple[Term, ...]

    def __call__(self, xi):
        """Evaluate at one point (shape (n,), compensated summation) or a
        batch (shape (m, n), vectorized)."""
        pts = np.asarray(xi, dtype=float)
        if pts.ndim == 1:
            return self._eval_point(pts)
        s = np.sum(pts * pts, axis=-1)
        acc = np.zeros(pts.shape[:-1], dtype=complex)
        for t in self.terms:
            mono = np.ones_like(s)
            for j, a in enumerate(t.monomial):
                if a:
                    mono = mono * pts[..., j] ** a
            acc = acc + t.coefficient * s ** (t.radial_power // 2) * mono
        return acc

    def _eval_point(self, pt) -> complex:
        if pt.shape != (self.dimension,):
            raise ValueError("point length must equal the dimension")
        s = float(pt @ pt)
        re, im = [], []
        for t in self.terms:
            mono = 1.0
            for j, a in enumerate(t.monomial):
                if a:
                    mono *= float(pt[j]) ** a
            val = t.coefficient * s ** (t.radial_power // 2) * mono
            re.append(val.real)
            im.append(val.imag)
        return complex(math.fsum(re), math.fsum(im))

    def magnitude(self, xi) -> float:
        """Sum of absolute term values at a point: the roundoff unit of an
        evaluation, robust against cancellation across terms."""
        pt = np.asarray(xi, dtype=float)
        s = float(pt @ pt)
        return math.fsum(
            abs(t.coefficient) * s ** (t.radial_power // 2)
            * math.prod(abs(float(pt[j])) ** a
                        for j, a in enumerate(t.monomial) if a)
            for t in self.terms)

    @cached_property
    def canonical(self) -> tuple[tuple[Alpha, complex], ...]:
        """Pure-monomial form: radial powers expanded, like terms collected,
        exact-zero coefficients dropped.  Sorted by monomial."""
        acc: dict[Alpha, complex] = {}
        for t in self.terms:
            half = t.radial_power // 2
            for m in indices_of_degree(self.dimension, half):
                mult = math.factorial(half) // multi_factorial(m)
                mono = tuple(2 * mj + aj for mj, aj in zip(m, t.monomial))
                acc[mono] = acc.get(mono, 0.0) + mult * t.coefficient
        return tuple(sorted((mono, c) for mono, c in acc.items() if c != 0))

    @property
    def is_structurally_zero(self) -> bool:
        return not self.canonical

    @property
    def total_degree(self) -> int:
        return max((t.total_degree for t in self.terms), default=0)


def _layers(kind: str, k: int):
    """(radial_power, layer_degree, exact) triples for each defining layer."""
    exact = kind in ("B", "C")
    if kind == "C":
        return [(0, k, True)]
    if k % 2 == 0:
        return [(k - 2 * j, 2 * j, exact) for j in range(k // 2 + 1)]
    return [(k - 1 - 2 * j, 2 * j + 1, exact) for j in range((k - 1) // 2 + 1)]


def build_expansion(kind: str, k: int, table: MomentTable) -> ExpansionPolynomial:
    """Build the kind/order polynomial from a moment table.

    Kind "A" accepts k = -1 and yields the empty (identically zero)
    polynomial; exact-zero moments produce no terms.
    """
    if kind not in KINDS:
        raise ValueError(f"kind must be one of {KINDS}")
    if kind == "A" and k == -1:
        return ExpansionPolynomial(kind="A", order=-1,
                                   dimension=table.dimension, terms=())
    if k < 0:
        raise ValueError("order must be nonnegative")
    if table.order < k:
        raise InsufficientOrderError(
            f"table holds moments to order {table.order}, need {k}")
    terms = []
    for p, layer_degree, exact in _layers(kind, k):
        degrees = [layer_degree] if exact else range(layer_degree + 1)
        for d in degrees:
            for alpha in indices_of_degree(table.dimension, d):
                if table.is_exact_zero(alpha):
                    continue
                coeff = i_power(d) * table.moment(alpha)
                terms.append(Term(coefficient=coeff, radial_power=p,
                                  monomial=alpha))
    return ExpansionPolynomial(kind=kind, order=k, dimension=table.dimension,
                               terms=tuple(terms))


def combine(polys, kind="sum") -> ExpansionPolynomial:
    """Plain term-list sum of polynomials over one dimension."""
    polys = list(polys)
    if not polys:
        raise ValueError("nothing to combine")
    dims = {p.dimension for p in polys}
    if len(dims) != 1:
        raise ValueError("polynomials must share one dimension")
    terms = tuple(t for p in polys for t in p.terms)
    order = max(p.order for p in polys)
    return ExpansionPolynomial(kind=kind, order=order, dimension=dims.pop(),
                               terms=terms)


def heat_partial_sum(table: MomentTable, order: int) -> ExpansionPolynomial:
    """sum_{|alpha| <= order} M_alpha (i xi)^alpha; order -1 gives zero."""
    if order < 0:
        return ExpansionPolynomial(kind="sum", order=-1,
                                   dimension=table.dimension, terms=())
    return combine([build_expansion("C", j, table) for j in range(order + 1)])


# ---------------------------------------------------------------------------
# Checkable identities


@dataclass(frozen=True)
class PropertyReport:
    name: str
    order: int
    sample_size: int
    max_deviation: float     # relative to the sample-wide value scale
    scale: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.max_deviation <= self.tolerance


def _sample_matrix(xi_sample, dimension):
    pts = np.asarray(xi_sample, dtype=float)
    if pts.ndim == 1:
        pts = pts[:, None]
    if pts.shape[-1] != dimension:
        raise ValueError("sample points must match the dimension")
    return pts


def check_property_A(table: MomentTable, k: int, xi_sample,
                     tolerance=1e-12) -> PropertyReport:
    """Additivity: profile_k(xi) == profile_{k-1}(xi) + increment_k(xi)."""
    pts = _sample_matrix(xi_sample, table.dimension)
    a_k = build_expansion("A", k, table)
    a_prev = build_expansion("A", k - 1, table)
    b_k = build_expansion("B", k, table)
    devs, scales = [], [1.0]
    for p in pts:
        lhs = a_k(p)
        rhs = a_prev(p) + b_k(p)
        devs.append(abs(lhs - rhs))
        scales.append(a_k.magnitude(p))
    scale = max(scales)
    return PropertyReport(name="additivity", order=k, sample_size=len(pts),
                          max_deviation=max(devs) / scale, scale=scale,
                          tolerance=tolerance)


def check_property_B(table: MomentTable, k: int, xi_sample,
                     tolerance=1e-12) -> PropertyReport:
    """Recurrence: increment_k(xi) == |xi|^2 increment_{k-2}(xi) + top layer."""
    if k < 2:
        raise ValueError("the recurrence needs k >= 2")
    pts = _sample_matrix(xi_sample, table.dimension)
    b_k = build_expansion("B", k, table)
    b_prev = build_expansion("B", k - 2, table)
    top = build_expansion("C", k, table)
    devs, scales = [], [1.0]
    for p in pts:
        lhs = b_k(p)
        rhs = float(p @ p) * b_prev(p) + top(p)
        devs.append(abs(lhs - rhs))
        scales.append(b_k.magnitude(p))
    scale = max(scales)
    return PropertyReport(name="recurrence", order=k, sample_size=len(pts),
                          max_deviation=max(devs) / scale, scale=scale,
                          tolerance=tolerance)


def check_property_C(poly: ExpansionPolynomial, c: float, xi_sample,
                     tolerance=1e-12) -> PropertyReport:
    """Homogeneity: increment_k(xi/c) == c^{-k} increment_k(xi)."""
    if poly.kind != "B":
        raise ValueError("homogeneity holds for kind 'B' polynomials")
    if c <= 0:
        raise ValueError("c must be positive")
    pts = _sample_matrix(xi_sample, poly.dimension)
    devs, scales = [], [1e-300]
    for p in pts:
        lhs = poly(p / c)
        rhs = c ** (-poly.order) * poly(p)
        devs.append(abs(lhs - rhs))
        scales.append(max(poly.magnitude(p / c),
                          c ** (-poly.order) * poly.magnitude(p)))
    scale = max(scales)
    return PropertyReport(name="homogeneity", order=poly.order,
                          sample_size=len(pts), max_deviation=max(devs) / scale,
                          scale=scale, tolerance=tolerance)


# ---------------------------------------------------------------------------
# Physical-space reading of P(xi) e^{-t |xi|^2}


@dataclass(frozen=True)
class HeatKernelTerm:
    """moment * (-Laplacian)^laplacian_power  d^derivative  G(t, x)."""
    moment: float
    laplacian_power: int
    derivative: Alpha


def inverse_transform_terms(poly: ExpansionPolynomial, t: float):
    """Describe P(xi) e^{-t|xi|^2} as a sum of heat-kernel derivatives.

    Purely structural metadata; no numeric inverse transform is performed.
    Radial powers are even by construction, so the Laplacian powers are
    integers.
    """
    if t <= 0:
        raise ValueError("t must be positive")
    out = []
    for term in poly.terms:
        if term.radial_power % 2:
            raise ValueError("radial powers must be even")
        d = degree(term.monomial)
        moment = term.coefficient * i_power(d).conjugate()
        out.append(HeatKernelTerm(moment=float(moment.real),
                                  laplacian_power=term.radial_power // 2,
                                  derivative=term.monomial))
    return tuple(out)
