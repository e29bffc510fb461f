"""Analytic solutions in the small-separation regime (gamma = gamma0).

In this regime the singlet population is conserved, so every trajectory is
classified by its singlet fidelity F alone: the stationary state is an
explicit one-parameter family, separable for F < 1/4, maximally mixed at
F = 1/4, and a Werner state built on the singlet for F > 1/4.  The module
also carries the fidelity geometry of the maximally entangled family and the
exact finite-time trajectory of real X-states, including the dipole-dipole
concurrence oscillations.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import DegenerateAt, NotPSD, NotXForm, OutOfRange, TraceNotOne
from .qstate import (
    CollectiveElements,
    DensityMatrix,
    PROB_TOL,
    make_density,
    x_initial,
)

_F_MIXED_TOL = 1e-12
_X_FORM_TOL = 1e-12

SEPARABLE_MIXTURE = "SeparableMixture"
MAXIMALLY_MIXED = "MaximallyMixed"
WERNER_SINGLET = "WernerSinglet"


@dataclass(frozen=True)
class AsymptoticClass:
    """Classification of the stationary state reached from fidelity F.

    kind is SeparableMixture (F < 1/4, weight p = 1 - 4F), MaximallyMixed
    (F = 1/4 within 1e-12), or WernerSinglet (F > 1/4, Werner weight
    p = (4F - 1)/3).  concurrence is max(0, 2F - 1).
    """

    fidelity: float
    kind: str
    p: float
    concurrence: float


class Populations(NamedTuple):
    aa: float
    ss: float
    ee: float
    gg: float


def populations_closed(init: CollectiveElements, t, gamma0: float = 1.0) -> Populations:
    """Exact populations at time t for gamma = gamma0.

    The antisymmetric population is constant; the rest relax through
    exp(-6 gamma0 t) and exp(-2 gamma0 t) toward the common value
    (1 - aa(0))/3.  t may be a scalar or an array.
    """
    t = np.asarray(t, dtype=float)
    if np.any(t < 0.0):
        raise OutOfRange("t must be non-negative")
    aa0, ss0, ee0, gg0 = init.aa, init.ss, init.ee, init.gg
    e6 = np.exp(-6.0 * gamma0 * t)
    e2 = np.exp(-2.0 * gamma0 * t)
    rest = (1.0 - aa0) / 3.0
    aa = np.broadcast_to(aa0, t.shape).copy() if t.shape else aa0
    ss = rest + e6 * (aa0 + 3.0 * ss0 - 1.0) / 3.0
    ee = rest + e6 * (1.0 - aa0 - 3.0 * ss0) / 6.0 + e2 * (aa0 + ss0 + 2.0 * ee0 - 1.0) / 2.0
    gg = rest + e6 * (1.0 - aa0 - 3.0 * ss0) / 6.0 + e2 * (aa0 + ss0 + 2.0 * gg0 - 1.0) / 2.0
    return Populations(aa=aa, ss=ss, ee=ee, gg=gg)


def asymptotic_state(fidelity: float) -> DensityMatrix:
    """Stationary state for gamma = gamma0, parametrized by singlet fidelity."""
    if not 0.0 <= fidelity <= 1.0:
        raise OutOfRange(f"fidelity must lie in [0, 1], got {fidelity}")
    outer = (1.0 - fidelity) / 3.0
    inner = (1.0 + 2.0 * fidelity) / 6.0
    cross = (1.0 - 4.0 * fidelity) / 6.0
    m = np.zeros((4, 4), dtype=complex)
    m[0, 0] = outer
    m[3, 3] = outer
    m[1, 1] = inner
    m[2, 2] = inner
    m[1, 2] = cross
    m[2, 1] = cross
    return make_density(m)


def classify_asymptotic(fidelity: float) -> AsymptoticClass:
    """Three-way classification of the stationary state by fidelity."""
    if not 0.0 <= fidelity <= 1.0:
        raise OutOfRange(f"fidelity must lie in [0, 1], got {fidelity}")
    conc = max(0.0, 2.0 * fidelity - 1.0)
    if abs(fidelity - 0.25) <= _F_MIXED_TOL:
        return AsymptoticClass(fidelity=fidelity, kind=MAXIMALLY_MIXED, p=0.0, concurrence=conc)
    if fidelity < 0.25:
        return AsymptoticClass(
            fidelity=fidelity, kind=SEPARABLE_MIXTURE, p=1.0 - 4.0 * fidelity, concurrence=conc
        )
    return AsymptoticClass(
        fidelity=fidelity, kind=WERNER_SINGLET, p=(4.0 * fidelity - 1.0) / 3.0, concurrence=conc
    )


def fidelity_product(overlap_sq: float) -> float:
    """Singlet fidelity of a product state from the squared single-atom overlap."""
    if not 0.0 <= overlap_sq <= 1.0:
        raise OutOfRange(f"squared overlap must lie in [0, 1], got {overlap_sq}")
    return 0.5 * (1.0 - overlap_sq)


def fidelity_max_entangled(a: float, theta: float) -> float:
    """Singlet fidelity (1 - a^2)(1 - cos theta)/2 of the maximally entangled family."""
    if not 0.0 <= a <= 1.0:
        raise OutOfRange(f"a must lie in [0, 1], got {a}")
    return float(0.5 * (1.0 - a * a) * (1.0 - np.cos(theta)))


def region_E_contains(a: float, theta: float) -> bool:
    """Whether (a, theta) yields an entangled stationary state (fidelity > 1/2).

    The fidelity inequality is the normative definition; it coincides with
    the arccos-bounded angular window on 0 <= a <= 1/sqrt(2) (see
    ``region_E_boundary_theta``), which degenerates at a = 1.
    """
    if a == 1.0:
        raise DegenerateAt("region boundary is undefined at a = 1")
    if not 0.0 <= a < 1.0:
        raise OutOfRange(f"a must lie in [0, 1), got {a}")
    if not 0.0 <= theta <= 2.0 * np.pi:
        raise OutOfRange(f"theta must lie in [0, 2*pi], got {theta}")
    return bool(fidelity_max_entangled(a, theta) > 0.5)


def region_E_boundary_theta(a: float) -> float:
    """Lower angular boundary arccos(a^2/(a^2 - 1)) of the entangled region.

    Defined for 0 <= a <= 1/sqrt(2); the window is (boundary, 2*pi - boundary).
    """
    if a == 1.0:
        raise DegenerateAt("region boundary is undefined at a = 1")
    if not 0.0 <= a <= 1.0 / np.sqrt(2.0) + 1e-15:
        raise OutOfRange(f"a must lie in [0, 1/sqrt(2)], got {a}")
    arg = a * a / (a * a - 1.0)
    return float(np.arccos(np.clip(arg, -1.0, 1.0)))


def quarter_curve_theta(a: float) -> float:
    """Angle at which the maximally entangled family has fidelity exactly 1/4.

    theta = arccos((2 a^2 - 1)/(2 (a^2 - 1))), defined for a in [0, sqrt(3)/2].
    """
    if not 0.0 <= a <= np.sqrt(3.0) / 2.0 + 1e-15:
        raise OutOfRange(f"a must lie in [0, sqrt(3)/2], got {a}")
    arg = (2.0 * a * a - 1.0) / (2.0 * (a * a - 1.0))
    return float(np.arccos(np.clip(arg, -1.0, 1.0)))


@dataclass(frozen=True)
class XStateInit:
    """Initial data of a real X-state: inner populations r22, r33 and coherence r23."""

    r22: float
    r33: float
    r23: float

    def __post_init__(self):
        if abs(self.r22 + self.r33 - 1.0) > PROB_TOL:
            raise TraceNotOne(abs(self.r22 + self.r33 - 1.0))
        det = self.r22 * self.r33 - self.r23 * self.r23
        if self.r22 < -PROB_TOL or self.r33 < -PROB_TOL or det < -PROB_TOL:
            raise NotPSD(min(self.r22, self.r33, det))

    def to_density(self) -> DensityMatrix:
        return x_initial(self.r22, self.r33, self.r23)

    @property
    def fidelity(self) -> float:
        return 0.5 * (1.0 - 2.0 * self.r23)


def as_x_init(rho: DensityMatrix, tol: float = _X_FORM_TOL) -> XStateInit:
    """Extract (r22, r33, r23) from a state, or raise NotXForm if it is outside the family."""
    m = rho.matrix
    mask = np.ones((4, 4), dtype=bool)
    mask[1:3, 1:3] = False
    stray = float(np.abs(m[mask]).max())
    if stray > tol:
        raise NotXForm(f"support outside the inner block (max stray element {stray:.3e})")
    if abs(m[1, 2].imag) > tol:
        raise NotXForm(f"coherence is not real (imaginary part {m[1, 2].imag:.3e})")
    return XStateInit(r22=float(m[1, 1].real), r33=float(m[2, 2].real),
                      r23=float(m[1, 2].real))


def _x_state_parts(init: XStateInit, omega: float, t, gamma0: float):
    t = np.asarray(t, dtype=float)
    if np.any(t < 0.0):
        raise OutOfRange("t must be non-negative")
    e6 = np.exp(-6.0 * gamma0 * t)
    e2 = np.exp(-2.0 * gamma0 * t)
    plus = 1.0 + 2.0 * init.r23
    diff = init.r22 - init.r33
    corners = plus * (1.0 - e6) / 6.0
    base = (1.0 - init.r23) / 3.0 + e6 * plus / 6.0
    osc = 0.5 * e2 * np.cos(2.0 * omega * t) * diff
    re23 = (4.0 * init.r23 - 1.0) / 6.0 + e6 * plus / 6.0
    im23 = 0.5 * e2 * np.sin(2.0 * omega * t) * diff
    return corners, base, osc, re23, im23


def x_state_trajectory(init: XStateInit, omega: float, t: float,
                       gamma0: float = 1.0) -> DensityMatrix:
    """Exact state at time t for gamma = gamma0, starting from a real X-state.

    The corner populations grow identically, the inner populations carry a
    cos(2 omega t) oscillation, and the coherence acquires the matching
    imaginary part (i/2) e^{-2 gamma0 t} sin(2 omega t) (r22 - r33).
    """
    corners, base, osc, re23, im23 = _x_state_parts(init, omega, float(t), gamma0)
    m = np.zeros((4, 4), dtype=complex)
    m[0, 0] = corners
    m[3, 3] = corners
    m[1, 1] = base + osc
    m[2, 2] = base - osc
    m[1, 2] = re23 + 1j * im23
    m[2, 1] = np.conj(m[1, 2])
    return make_density(m)


def x_state_concurrence(init: XStateInit, omega: float, t, gamma0: float = 1.0):
    """Concurrence along the X-state trajectory, 2(|rho23(t)| - rho11(t)) clipped at 0.

    Equals 2 sqrt(A^2 + B^2 sin^2(2 omega t)) - 2 rho11(t) with
    A = (4 r23 - 1 + e^{-6 gamma0 t}(1 + 2 r23))/6 and
    B = e^{-2 gamma0 t}(r22 - r33)/2.  t may be a scalar or an array.
    """
    t_arr = np.asarray(t, dtype=float)
    corners, _, _, re23, im23 = _x_state_parts(init, omega, t_arr, gamma0)
    value = 2.0 * np.sqrt(re23 * re23 + im23 * im23) - 2.0 * corners
    value = np.maximum(0.0, value)
    return float(value) if t_arr.shape == () else value
