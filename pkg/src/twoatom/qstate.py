"""Two-qubit density matrices, the collective basis, and initial-state constructors.

The canonical product basis is ordered

    f1 = |1>|1>,  f2 = |1>|0>,  f3 = |0>|1>,  f4 = |0>|0>,

with the excited state |1> = (1, 0)^T and the ground state |0> = (0, 1)^T of
each atom.  The collective basis {e, s, a, g} consists of the doubly excited
state e = f1, the ground state g = f4, and the symmetric/antisymmetric
single-excitation combinations s = (f2 + f3)/sqrt(2), a = (f2 - f3)/sqrt(2).
All state types are immutable values; all functions are pure.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    NotAProbabilityVector,
    NotHermitian,
    NotNormalized,
    NotPSD,
    OutOfRange,
    TraceNotOne,
)

HERMITICITY_TOL = 1e-10
TRACE_TOL = 1e-10
PSD_TOL = 1e-9
NORM_TOL = 1e-12
PROB_TOL = 1e-12

_SQRT2 = np.sqrt(2.0)

# Collective-state vectors in canonical coordinates.
KET_E = np.array([1.0, 0.0, 0.0, 0.0], dtype=complex)
KET_S = np.array([0.0, 1.0, 1.0, 0.0], dtype=complex) / _SQRT2
KET_A = np.array([0.0, 1.0, -1.0, 0.0], dtype=complex) / _SQRT2
KET_G = np.array([0.0, 0.0, 0.0, 1.0], dtype=complex)
KET_PLUS = np.array([1.0, 0.0, 0.0, 1.0], dtype=complex) / _SQRT2
KET_MINUS = np.array([1.0, 0.0, 0.0, -1.0], dtype=complex) / _SQRT2

# Change of basis: columns are e, s, a, g in canonical coordinates.
_V_COLLECTIVE = np.column_stack([KET_E, KET_S, KET_A, KET_G])

_ANCHORS = {"a": KET_A, "s": KET_S, "plus": KET_PLUS, "minus": KET_MINUS}

for _arr in (KET_E, KET_S, KET_A, KET_G, KET_PLUS, KET_MINUS, _V_COLLECTIVE):
    _arr.setflags(write=False)


@dataclass(frozen=True)
class Qubit:
    """Single-atom pure state with amplitudes c0 on the ground and c1 on the excited state."""

    c0: complex
    c1: complex

    def __post_init__(self):
        c0 = complex(self.c0)
        c1 = complex(self.c1)
        norm_sq = abs(c0) ** 2 + abs(c1) ** 2
        if not np.isfinite(norm_sq) or abs(norm_sq - 1.0) > NORM_TOL:
            raise NotNormalized(abs(norm_sq - 1.0))
        object.__setattr__(self, "c0", c0)
        object.__setattr__(self, "c1", c1)

    def vector(self) -> np.ndarray:
        """Coordinates in the (|1>, |0>) ordering used by the canonical basis."""
        return np.array([self.c1, self.c0], dtype=complex)


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Validated 4x4 Hermitian, unit-trace, positive-semidefinite matrix."""

    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        if m.shape != (4, 4):
            raise OutOfRange(f"density matrix must be 4x4, got shape {m.shape}")
        if not np.all(np.isfinite(m.view(float))):
            raise OutOfRange("density matrix contains non-finite entries")
        herm_residual = np.abs(m - m.conj().T).max()
        if herm_residual > HERMITICITY_TOL:
            raise NotHermitian(herm_residual)
        trace_residual = abs(m.trace() - 1.0)
        if trace_residual > TRACE_TOL:
            raise TraceNotOne(trace_residual)
        min_eig = float(np.linalg.eigvalsh(m)[0])
        if min_eig < -PSD_TOL:
            raise NotPSD(min_eig)
        m = m.copy()
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)


@dataclass(frozen=True)
class CollectiveElements:
    """Matrix elements in the collective basis {e, s, a, g}.

    Populations ee, ss, aa, gg are real; the six independent coherences are
    complex, with the remaining entries fixed by Hermiticity.  Instances also
    carry time derivatives of these elements, which do not satisfy the state
    invariants (unit population sum); use ``validate`` to check a state.
    """

    ee: float
    ss: float
    aa: float
    gg: float
    eg: complex
    as_: complex
    ae: complex
    ag: complex
    se: complex
    sg: complex

    def validate(self, trace_tol: float = TRACE_TOL, pop_tol: float = PSD_TOL) -> None:
        pops = (self.ee, self.ss, self.aa, self.gg)
        if abs(sum(pops) - 1.0) > trace_tol:
            raise TraceNotOne(abs(sum(pops) - 1.0))
        low = min(pops)
        if low < -pop_tol:
            raise NotPSD(low)


@dataclass(frozen=True)
class SystemParams:
    """Physical rates, all in units of the single-atom decay rate gamma0.

    omega0 is the atomic transition frequency, omega the dipole-dipole
    coupling strength, gamma0 the single-atom decay rate (sets the time
    unit), and gamma the collective damping rate.  Only 0 <= gamma <= gamma0
    is admissible.
    """

    omega0: float = 0.0
    omega: float = 0.0
    gamma0: float = 1.0
    gamma: float = 1.0

    def __post_init__(self):
        vals = (self.omega0, self.omega, self.gamma0, self.gamma)
        if not all(np.isfinite(v) for v in vals):
            raise OutOfRange("parameters must be finite")
        if self.gamma0 <= 0.0:
            raise OutOfRange(f"gamma0 must be positive, got {self.gamma0}")
        if self.omega0 < 0.0:
            raise OutOfRange(f"omega0 must be non-negative, got {self.omega0}")
        if not 0.0 <= self.gamma <= self.gamma0:
            raise OutOfRange(
                f"collective damping must satisfy 0 <= gamma <= gamma0, got gamma={self.gamma}"
            )


def make_density(m: np.ndarray) -> DensityMatrix:
    """Validate a 4x4 array as a density matrix.

    Raises NotHermitian, TraceNotOne or NotPSD, naming the violated
    invariant and its residual.
    """
    return DensityMatrix(np.asarray(m, dtype=complex))


def _projector(vec: np.ndarray) -> np.ndarray:
    return np.outer(vec, vec.conj())


def to_collective(rho: DensityMatrix) -> CollectiveElements:
    """Express a density matrix through its collective-basis elements."""
    c = _V_COLLECTIVE.conj().T @ rho.matrix @ _V_COLLECTIVE
    return CollectiveElements(
        ee=float(c[0, 0].real),
        ss=float(c[1, 1].real),
        aa=float(c[2, 2].real),
        gg=float(c[3, 3].real),
        eg=complex(c[0, 3]),
        as_=complex(c[2, 1]),
        ae=complex(c[2, 0]),
        ag=complex(c[2, 3]),
        se=complex(c[1, 0]),
        sg=complex(c[1, 3]),
    )


def from_collective(c: CollectiveElements) -> DensityMatrix:
    """Rebuild the canonical-basis density matrix from collective elements."""
    m = np.empty((4, 4), dtype=complex)
    m[0, 0] = c.ee
    m[1, 1] = c.ss
    m[2, 2] = c.aa
    m[3, 3] = c.gg
    m[0, 3] = c.eg
    m[3, 0] = np.conj(c.eg)
    m[2, 1] = c.as_
    m[1, 2] = np.conj(c.as_)
    m[2, 0] = c.ae
    m[0, 2] = np.conj(c.ae)
    m[2, 3] = c.ag
    m[3, 2] = np.conj(c.ag)
    m[1, 0] = c.se
    m[0, 1] = np.conj(c.se)
    m[1, 3] = c.sg
    m[3, 1] = np.conj(c.sg)
    return make_density(_V_COLLECTIVE @ m @ _V_COLLECTIVE.conj().T)


def product_state(psi: Qubit, phi: Qubit) -> DensityMatrix:
    """Projector onto the separable pure state psi (x) phi."""
    vec = np.kron(psi.vector(), phi.vector())
    return make_density(_projector(vec))


def max_entangled(a: float, theta1: float, theta2: float) -> DensityMatrix:
    """Member of the three-parameter family of maximally entangled pure states.

    The underlying state vector is

        (a f1 + sqrt(1-a^2) e^{i theta1} f2 + sqrt(1-a^2) e^{i theta2} f3
           - a e^{i(theta1+theta2)} f4) / sqrt(2),

    which has concurrence 1 for every admissible (a, theta1, theta2).
    """
    if not 0.0 <= a <= 1.0:
        raise OutOfRange(f"a must lie in [0, 1], got {a}")
    for name, th in (("theta1", theta1), ("theta2", theta2)):
        if not 0.0 <= th <= 2.0 * np.pi:
            raise OutOfRange(f"{name} must lie in [0, 2*pi], got {th}")
    b = np.sqrt(1.0 - a * a)
    vec = np.array(
        [
            a,
            b * np.exp(1j * theta1),
            b * np.exp(1j * theta2),
            -a * np.exp(1j * (theta1 + theta2)),
        ],
        dtype=complex,
    ) / _SQRT2
    return make_density(_projector(vec))


def werner_state(p: float, anchor: str = "a") -> DensityMatrix:
    """Mixture (1-p) I/4 + p |anchor><anchor| for anchor in {a, s, plus, minus}."""
    if not 0.0 <= p <= 1.0:
        raise OutOfRange(f"p must lie in [0, 1], got {p}")
    if anchor not in _ANCHORS:
        raise OutOfRange(f"anchor must be one of {sorted(_ANCHORS)}, got {anchor!r}")
    m = (1.0 - p) * np.eye(4, dtype=complex) / 4.0 + p * _projector(_ANCHORS[anchor])
    return make_density(m)


def bell_diagonal(p1: float, p2: float, p3: float, p4: float) -> DensityMatrix:
    """Convex combination p1|+><+| + p2|-><-| + p3|s><s| + p4|a><a|."""
    probs = np.array([p1, p2, p3, p4], dtype=float)
    if np.any(probs < -PROB_TOL) or abs(probs.sum() - 1.0) > PROB_TOL:
        raise NotAProbabilityVector(
            f"weights must be non-negative and sum to 1, got {probs.tolist()}"
        )
    m = (
        p1 * _projector(KET_PLUS)
        + p2 * _projector(KET_MINUS)
        + p3 * _projector(KET_S)
        + p4 * _projector(KET_A)
    )
    return make_density(m)


def x_initial(r22: float, r33: float, r23: float) -> DensityMatrix:
    """Real single-excitation X-state: populations r22, r33 and coherence r23.

    Requires r22 + r33 = 1 and r22*r33 >= r23^2 (positivity of the inner block).
    """
    if abs(r22 + r33 - 1.0) > PROB_TOL:
        raise TraceNotOne(abs(r22 + r33 - 1.0))
    if r22 < -PROB_TOL or r33 < -PROB_TOL or r22 * r33 - r23 * r23 < -PROB_TOL:
        raise NotPSD(min(r22, r33, r22 * r33 - r23 * r23))
    m = np.zeros((4, 4), dtype=complex)
    m[1, 1] = r22
    m[2, 2] = r33
    m[1, 2] = r23
    m[2, 1] = r23
    return make_density(m)


def pure_phi(phi: float) -> DensityMatrix:
    """Projector onto cos(phi)|0>|1> + sin(phi)|1>|0|, phi in [0, pi].

    Equivalent to x_initial(sin(phi)^2, cos(phi)^2, sin(phi)cos(phi)); its
    singlet fidelity is (1 - sin(2 phi))/2.
    """
    if not 0.0 <= phi <= np.pi:
        raise OutOfRange(f"phi must lie in [0, pi], got {phi}")
    vec = np.zeros(4, dtype=complex)
    vec[1] = np.sin(phi)
    vec[2] = np.cos(phi)
    return make_density(_projector(vec))


def random_qubit(rng: np.random.Generator) -> Qubit:
    """Haar-random single-qubit pure state."""
    z = rng.standard_normal(2) + 1j * rng.standard_normal(2)
    z /= np.linalg.norm(z)
    return Qubit(c0=z[0], c1=z[1])


def random_density(rng: np.random.Generator) -> DensityMatrix:
    """Random full-rank density matrix from the Ginibre ensemble."""
    g = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    m = g @ g.conj().T
    return make_density(m / m.trace().real)


def density_to_pairs(rho: DensityMatrix) -> list:
    """Row-major list of 16 [re, im] pairs (the JSON wire format)."""
    flat = rho.matrix.reshape(16)
    return [[float(z.real), float(z.imag)] for z in flat]


def density_from_pairs(pairs) -> DensityMatrix:
    """Inverse of density_to_pairs."""
    arr = np.asarray(pairs, dtype=float)
    if arr.shape != (16, 2):
        raise OutOfRange(f"expected 16 [re, im] pairs, got shape {arr.shape}")
    return make_density((arr[:, 0] + 1j * arr[:, 1]).reshape(4, 4))
