"""Exact frequency-side evaluation of the damped-wave solution.

After a Fourier transform the Cauchy problem
u_tt - Lap u + u_t - Lap u_t = 0, u(0) = u_0, u_t(0) = u_1 becomes, for
each frequency xi, the scalar ODE

    w'' + (1 + |xi|^2) w' + |xi|^2 w = 0,
    w(0) = u0_hat(xi),  w'(0) = u1_hat(xi),

whose modes decay like e^{-t|xi|^2} and e^{-t}.  Four algebraically
equivalent closed forms are provided; their denominators 1 - |xi|^2
degenerate on the unit sphere, where only the "regular" form stays
well-posed.  Representation ids:

    "2.1"  split form, low-frequency orientation
    "2.2"  grouped form (one coefficient per datum)
    "2.3"  split form, high-frequency orientation
    "2.4"  regular form  e^{-t} u0_hat + K(t,|xi|^2) (u0_hat + u1_hat)

with K(t,s) = (e^{-ts} - e^{-t})/(1 - s), continued by t e^{-t} at s = 1.
The default policy uses "2.1" inside |xi| <= 1 - eps, "2.3" outside
|xi| >= 1 + eps and "2.4" on the band in between, evaluated through the
cancellation-safe factorization K = t e^{-t} phi(t (1 - s)) with
phi(z) = (e^z - 1)/z.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import SingularEvaluationError
from .initial_data import InitialDatum, add_data

REPRESENTATIONS = ("2.1", "2.2", "2.3", "2.4")
SINGULAR_GUARD = 1e-12      # forced split forms must stay this far from s = 1
PHI_SWITCH = 0.5            # |z| below which the expm1 factorization is used


def _phi(z):
    """(e^z - 1)/z with the removable singularity filled in."""
    z = np.asarray(z, dtype=float)
    safe = np.where(z == 0.0, 1.0, z)
    return np.where(z == 0.0, 1.0, np.expm1(safe) / safe)


def stable_heat_difference(t: float, s):
    """(e^{-t s} - e^{-t}) / (1 - s), continued across s = 1.

    Uses t e^{-t} phi(t (1 - s)) where the subtraction would cancel and the
    direct quotient elsewhere (where the two exponentials are well separated).
    """
    s = np.asarray(s, dtype=float)
    z = t * (1.0 - s)
    out = np.empty_like(s)
    small = np.abs(z) <= PHI_SWITCH
    if np.any(small):
        out[small] = t * np.exp(-t) * _phi(z[small])
    big = ~small
    if np.any(big):
        out[big] = (np.exp(-t * s[big]) - np.exp(-t)) / (1.0 - s[big])
    return out


@dataclass(frozen=True, eq=False)
class SpectralSolution:
    """Evaluator for the transformed solution of one initial-data pair."""

    u0: InitialDatum
    u1: InitialDatum
    band_halfwidth: float = 1e-3
    low_radius: float = 0.5
    high_radius: float = 2.0

    def __post_init__(self):
        if self.u0.dimension != self.u1.dimension:
            raise ValueError("u0 and u1 must share one dimension")
        if not (0.0 < self.band_halfwidth < 0.5):
            raise ValueError("band halfwidth must lie in (0, 0.5)")
        if not (0.0 < self.low_radius < 1.0 < self.high_radius):
            raise ValueError("region thresholds must bracket the unit sphere")

    @property
    def dimension(self) -> int:
        return self.u0.dimension

    @cached_property
    def v(self) -> InitialDatum:
        return add_data(self.u0, self.u1)

    # -- evaluation -----------------------------------------------------------

    def evaluate(self, t: float, xi, rep: str | None = None):
        """Transformed solution at time t >= 0 on points of shape (..., n).

        ``rep`` forces one representation id; the default policy switches by
        frequency region and is continuous across the unit sphere.
        """
        if t < 0:
            raise ValueError("t must be nonnegative")
        pts = np.asarray(xi, dtype=float)
        scalar_in = pts.ndim == 1
        pts = np.atleast_2d(pts)
        if pts.shape[-1] != self.dimension:
            raise ValueError(f"points must have trailing dimension {self.dimension}")
        s = np.sum(pts * pts, axis=-1)
        f0 = self.u0.fourier_transform(pts)
        f1 = self.u1.fourier_transform(pts)
        if rep is None:
            out = self._auto(t, s, f0, f1)
        else:
            if rep not in REPRESENTATIONS:
                raise ValueError(f"rep must be one of {REPRESENTATIONS}")
            if rep != "2.4" and np.any(np.abs(s - 1.0) <= SINGULAR_GUARD):
                bad = float(np.sqrt(s[np.abs(s - 1.0) <= SINGULAR_GUARD][0]))
                raise SingularEvaluationError(
                    f"representation {rep} is singular at |xi| = 1 "
                    f"(requested |xi| = {bad!r})", radius=bad)
            out = _REP_FORMULAS[rep](t, s, f0, f1)
        return out[0] if scalar_in else out

    def _auto(self, t, s, f0, f1):
        eps = self.band_halfwidth
        low = s <= (1.0 - eps) ** 2
        high = s >= (1.0 + eps) ** 2
        band = ~(low | high)
        out = np.empty(s.shape, dtype=complex)
        if np.any(low):
            out[low] = _rep_21(t, s[low], f0[low], f1[low])
        if np.any(high):
            out[high] = _rep_23(t, s[high], f0[high], f1[high])
        if np.any(band):
            out[band] = _rep_24(t, s[band], f0[band], f1[band])
        return out

    # -- helpers --------------------------------------------------------------

    def residual(self, t: float, xi, poly):
        """Pointwise gap u_hat(t, xi) - poly(xi) e^{-t |xi|^2}.

        ``poly`` is any callable on points (an expansion polynomial); this is
        the integrand of every region norm used in the decay estimates.
        """
        pts = np.asarray(xi, dtype=float)
        scalar_in = pts.ndim == 1
        pts = np.atleast_2d(pts)
        s = np.sum(pts * pts, axis=-1)
        out = self.evaluate(t, pts) - poly(pts) * np.exp(-t * s)
        return out[0] if scalar_in else out


def _rep_21(t, s, f0, f1):
    denom = 1.0 - s
    return (np.exp(-t * s) * (f0 + f1) - np.exp(-t) * (s * f0 + f1)) / denom


def _rep_22(t, s, f0, f1):
    denom = 1.0 - s
    c0 = (np.exp(-t * s) - s * np.exp(-t)) / denom
    c1 = (np.exp(-t * s) - np.exp(-t)) / denom
    return c0 * f0 + c1 * f1


def _rep_23(t, s, f0, f1):
    denom = s - 1.0
    return (np.exp(-t) * (s * f0 + f1) - np.exp(-t * s) * (f0 + f1)) / denom


def _rep_24(t, s, f0, f1):
    return np.exp(-t) * f0 + stable_heat_difference(t, s) * (f0 + f1)


_REP_FORMULAS = {"2.1": _rep_21, "2.2": _rep_22, "2.3": _rep_23, "2.4": _rep_24}


@dataclass(frozen=True, eq=False)
class LowFrequencySymbol:
    """v_hat(xi) / (1 - |xi|^2): the stationary low-frequency factor that the
    profile polynomials approximate on |xi| <= 1/2."""

    v: InitialDatum
    guard: float = SINGULAR_GUARD

    def __call__(self, xi):
        pts = np.asarray(xi, dtype=float)
        scalar_in = pts.ndim == 1
        pts = np.atleast_2d(pts)
        s = np.sum(pts * pts, axis=-1)
        bad = np.abs(s - 1.0) <= self.guard
        if np.any(bad):
            radius = float(np.sqrt(s[bad][0]))
            raise SingularEvaluationError(
                f"the symbol is undefined on |xi| = 1 (requested |xi| = {radius!r})",
                radius=radius)
        out = self.v.fourier_transform(pts) / (1.0 - s)
        return out[0] if scalar_in else out


def evaluate_heat(v: InitialDatum, t: float, xi):
    """Transformed heat flow e^{-t |xi|^2} v_hat(xi)."""
    if t < 0:
        raise ValueError("t must be nonnegative")
    pts = np.asarray(xi, dtype=float)
    scalar_in = pts.ndim == 1
    pts = np.atleast_2d(pts)
    s = np.sum(pts * pts, axis=-1)
    out = np.exp(-t * s) * v.fourier_transform(pts)
    return out[0] if scalar_in else out
