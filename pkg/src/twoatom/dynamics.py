"""Master-equation dynamics of two atoms in a maximally noisy environment.

Two independent backends evolve the same generator:

* ``evolve_numeric`` integrates the full 4x4 matrix equation
  drho/dt = -i[H, rho] + L_N(rho), where H carries the transition frequency
  omega0 and the dipole-dipole coupling omega, and the noise generator L_N
  has equal upward and downward transition rates (gamma0 on each atom,
  gamma across atoms).
* ``evolve_collective`` integrates the ten element-wise equations of motion
  in the collective basis {e, s, a, g}, closed under Hermitian conjugation.

Both use classical fixed-step RK4; because the system is linear and
time-independent the two routes must agree to round-off, which makes the
collective backend a cross-check of the matrix one (and vice versa).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .entanglement import concurrence, fidelity_singlet, purity
from .errors import OutOfRange, StepTooLarge, ValidationError
from .qstate import CollectiveElements, DensityMatrix, SystemParams, make_density

_SIGMA_P = np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex)  # |1><0|, raising
_SIGMA_M = _SIGMA_P.conj().T
_SIGMA_3 = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)
_I2 = np.eye(2, dtype=complex)

_SP_A = np.kron(_SIGMA_P, _I2)
_SM_A = np.kron(_SIGMA_M, _I2)
_SP_B = np.kron(_I2, _SIGMA_P)
_SM_B = np.kron(_I2, _SIGMA_M)

_H_FREE = np.kron(_SIGMA_3, _I2) + np.kron(_I2, _SIGMA_3)
_H_DIP = np.kron(_SIGMA_P, _SIGMA_M) + np.kron(_SIGMA_M, _SIGMA_P)

_MAX_DT = 0.01
_SAMPLE_HERM_TOL = 1e-9
_TRACE_DRIFT_RATE = 1e-8
_PURITY_SLACK = 1e-10


@dataclass(frozen=True)
class IntegratorConfig:
    """Fixed-step RK4 configuration; times are in units of 1/gamma0.

    The step must satisfy dt <= 0.01/max(1, omega0/gamma0, |omega|/gamma0);
    the parameter-independent part (dt <= 0.01) is enforced here, the rest
    when the configuration meets a SystemParams in an evolve call.
    """

    dt: float = 0.001
    t_end: float = 20.0
    sample_every: int = 10

    def __post_init__(self):
        if not (np.isfinite(self.dt) and self.dt > 0.0):
            raise OutOfRange(f"dt must be positive, got {self.dt}")
        if not (np.isfinite(self.t_end) and self.t_end > 0.0):
            raise OutOfRange(f"t_end must be positive, got {self.t_end}")
        if int(self.sample_every) != self.sample_every or self.sample_every < 1:
            raise OutOfRange(f"sample_every must be a positive integer, got {self.sample_every}")
        if self.dt > _MAX_DT * (1.0 + 1e-12):
            raise StepTooLarge(f"dt={self.dt} exceeds the stability bound {_MAX_DT}")


@dataclass(frozen=True, eq=False)
class TrajectorySample:
    t: float
    rho: DensityMatrix
    concurrence: float
    fidelity: float
    purity: float


@dataclass(frozen=True, eq=False)
class Trajectory:
    """Time-ordered samples of (t, rho, concurrence, fidelity, purity)."""

    params: SystemParams
    samples: tuple

    def times(self) -> np.ndarray:
        return np.array([s.t for s in self.samples])

    def concurrences(self) -> np.ndarray:
        return np.array([s.concurrence for s in self.samples])

    def fidelities(self) -> np.ndarray:
        return np.array([s.fidelity for s in self.samples])

    def purities(self) -> np.ndarray:
        return np.array([s.purity for s in self.samples])

    def states(self) -> np.ndarray:
        return np.stack([s.rho.matrix for s in self.samples])

    @property
    def final(self) -> TrajectorySample:
        return self.samples[-1]


@lru_cache(maxsize=64)
def _generator_terms(params: SystemParams):
    """Hamiltonian, ordered sandwich terms and the anticommutator kernel K.

    The sandwich list and K are accumulated pairwise in the same order so
    that L_N applied to the identity cancels exactly in floating point.
    """
    h = params.omega0 * _H_FREE + params.omega * _H_DIP
    pairs = (
        (_SP_A, _SM_A, _SM_A, _SP_A, params.gamma0),
        (_SP_B, _SM_B, _SM_B, _SP_B, params.gamma0),
        (_SP_A, _SM_B, _SM_A, _SP_B, params.gamma),
        (_SP_B, _SM_A, _SM_B, _SP_A, params.gamma),
    )
    k = np.zeros((4, 4), dtype=complex)
    for sp_j, sm_k, sm_j, sp_k, rate in pairs:
        k = k + rate * (sp_j @ sm_k + sm_j @ sp_k)
    return h, pairs, k


def _rhs_matrix(m: np.ndarray, params: SystemParams) -> np.ndarray:
    h, pairs, k = _generator_terms(params)
    out = -1j * (h @ m - m @ h)
    for sp_j, sm_k, sm_j, sp_k, rate in pairs:
        out = out + rate * (sp_j @ m @ sm_k + sm_j @ m @ sp_k)
    return out - 0.5 * (k @ m + m @ k)


def lindblad_rhs(rho: DensityMatrix, params: SystemParams) -> np.ndarray:
    """Right-hand side -i[H, rho] + L_N(rho); traceless and Hermitian."""
    return _rhs_matrix(rho.matrix, params)


def verify_unital(params: SystemParams) -> float:
    """Max-norm of the generator applied to the identity; zero for every parameter set."""
    return float(np.abs(_rhs_matrix(np.eye(4, dtype=complex), params)).max())


@lru_cache(maxsize=64)
def _liouvillian(params: SystemParams) -> np.ndarray:
    """16x16 matrix of the generator acting on row-major vectorized states."""
    lmat = np.empty((16, 16), dtype=complex)
    basis = np.zeros((4, 4), dtype=complex)
    for idx in range(16):
        basis.flat[idx] = 1.0
        lmat[:, idx] = _rhs_matrix(basis, params).reshape(16)
        basis.flat[idx] = 0.0
    lmat.setflags(write=False)
    return lmat


def _check_step_bound(params: SystemParams, cfg: IntegratorConfig) -> None:
    scale = max(1.0, params.omega0 / params.gamma0, abs(params.omega) / params.gamma0)
    bound = _MAX_DT / scale
    if cfg.dt > bound * (1.0 + 1e-12):
        raise StepTooLarge(
            f"dt={cfg.dt} exceeds the stability bound {bound:.6g} for these parameters"
        )


def _sample_indices(n_steps: int, sample_every: int) -> np.ndarray:
    idx = list(range(0, n_steps + 1, sample_every))
    if idx[-1] != n_steps:
        idx.append(n_steps)
    return np.array(idx, dtype=int)


def _num_steps(cfg: IntegratorConfig) -> int:
    return max(1, int(round(cfg.t_end / cfg.dt)))


def _rk4_samples(lmat: np.ndarray, v0: np.ndarray, dt: float, n_steps: int,
                 sample_every: int):
    """RK4 on dv/dt = L v, sampling every ``sample_every`` steps plus the endpoint.

    v0 may be a single vector (16,) or a batch (n, 16); the linear map is
    applied via right-multiplication by L^T.
    """
    lt = np.ascontiguousarray(lmat.T)
    idx = _sample_indices(n_steps, sample_every)
    out = np.empty((len(idx),) + v0.shape, dtype=complex)
    v = v0.astype(complex, copy=True)
    out[0] = v
    pos = 1
    half = 0.5 * dt
    sixth = dt / 6.0
    for step in range(1, n_steps + 1):
        k1 = v @ lt
        k2 = (v + half * k1) @ lt
        k3 = (v + half * k2) @ lt
        k4 = (v + dt * k3) @ lt
        v = v + sixth * (k1 + 2.0 * (k2 + k3) + k4)
        if pos < len(idx) and step == idx[pos]:
            out[pos] = v
            pos += 1
    return idx, out


def evolve_numeric(rho0: DensityMatrix, params: SystemParams,
                   cfg: IntegratorConfig) -> Trajectory:
    """Integrate the master equation with classical fixed-step RK4.

    Every stored sample is re-validated: Hermiticity to 1e-9 before
    re-symmetrization by (m + m^dag)/2, trace drift below 1e-8 per unit
    time, positivity, and non-increasing purity (slack 1e-10).  A violation
    raises StepTooLarge reporting the time and residual.
    """
    _check_step_bound(params, cfg)
    n_steps = _num_steps(cfg)
    idx, vs = _rk4_samples(_liouvillian(params), rho0.matrix.reshape(16),
                           cfg.dt, n_steps, cfg.sample_every)
    samples = []
    prev_purity = np.inf
    for i, v in zip(idx, vs):
        t = float(i * cfg.dt)
        m = v.reshape(4, 4)
        herm_residual = float(np.abs(m - m.conj().T).max())
        if herm_residual > _SAMPLE_HERM_TOL:
            raise StepTooLarge(f"Hermiticity residual {herm_residual:.3e} at t={t:.6g}")
        m = (m + m.conj().T) / 2.0
        trace_residual = abs(m.trace().real - 1.0)
        if trace_residual > _TRACE_DRIFT_RATE * max(1.0, t):
            raise StepTooLarge(f"trace drift {trace_residual:.3e} at t={t:.6g}")
        try:
            rho = make_density(m)
        except ValidationError as exc:
            raise StepTooLarge(f"invalid state at t={t:.6g}: {exc}") from exc
        p = purity(rho)
        if p > prev_purity + _PURITY_SLACK:
            raise StepTooLarge(
                f"purity increased by {p - prev_purity:.3e} at t={t:.6g}"
            )
        prev_purity = p
        samples.append(
            TrajectorySample(t=t, rho=rho, concurrence=concurrence(rho),
                             fidelity=fidelity_singlet(rho), purity=p)
        )
    return Trajectory(params=params, samples=tuple(samples))


def evolve_many(rho0s: np.ndarray, params: SystemParams, cfg: IntegratorConfig):
    """Batched RK4 for a stack of initial states, sharing one parameter set.

    Returns (times, states) with states of shape (n_samples, n_states, 4, 4),
    Hermitized and validated in bulk.  Used by verification sweeps where
    per-sample Trajectory objects would dominate the cost.
    """
    rho0s = np.asarray(rho0s, dtype=complex)
    if rho0s.ndim == 2:
        rho0s = rho0s[None]
    _check_step_bound(params, cfg)
    n_steps = _num_steps(cfg)
    idx, vs = _rk4_samples(_liouvillian(params), rho0s.reshape(-1, 16),
                           cfg.dt, n_steps, cfg.sample_every)
    times = idx * cfg.dt
    mats = vs.reshape(len(idx), -1, 4, 4)
    dag = mats.conj().transpose(0, 1, 3, 2)
    herm_residual = float(np.abs(mats - dag).max())
    if herm_residual > _SAMPLE_HERM_TOL:
        raise StepTooLarge(f"Hermiticity residual {herm_residual:.3e} in batch run")
    mats = (mats + dag) / 2.0
    traces = np.einsum("snii->sn", mats).real
    drift = np.abs(traces - 1.0).max(axis=1)
    allowed = _TRACE_DRIFT_RATE * np.maximum(1.0, times)
    if np.any(drift > allowed):
        bad = int(np.argmax(drift - allowed))
        raise StepTooLarge(f"trace drift {drift[bad]:.3e} at t={times[bad]:.6g}")
    min_eig = float(np.linalg.eigvalsh(mats).min())
    if min_eig < -1e-9:
        raise StepTooLarge(f"negative eigenvalue {min_eig:.3e} in batch run")
    return times, mats


# Collective-basis element order used throughout this backend.
_COLLECTIVE_ORDER = ("ee", "ss", "aa", "gg", "eg", "as_", "ae", "ag", "se", "sg")


@lru_cache(maxsize=64)
def _collective_matrices(params: SystemParams):
    """Coefficient matrices (m1, m2) with dy/dt = m1 y + m2 conj(y).

    y holds (ee, ss, aa, gg, eg, as, ae, ag, se, sg).  The populations decay
    with the enhanced rate gamma0+gamma (symmetric) and the reduced rate
    gamma0-gamma (antisymmetric); the conjugate couplings close the ae/ag
    and se/sg coherence blocks under Hermiticity.
    """
    g0, g = params.gamma0, params.gamma
    w, w0 = params.omega, params.omega0
    m1 = np.zeros((10, 10), dtype=complex)
    m2 = np.zeros((10, 10), dtype=complex)
    m1[0, 0] = -2.0 * g0
    m1[0, 1] = g0 + g
    m1[0, 2] = g0 - g
    m1[1, 1] = -2.0 * (g0 + g)
    m1[1, 0] = m1[1, 3] = g0 + g
    m1[2, 2] = -2.0 * (g0 - g)
    m1[2, 0] = m1[2, 3] = g0 - g
    m1[3, 3] = -2.0 * g0
    m1[3, 1] = g0 + g
    m1[3, 2] = g0 - g
    m1[4, 4] = -(2.0 * g0 + 4.0j * w0)
    m1[5, 5] = -(2.0 * g0 - 2.0j * w)
    m1[6, 6] = g - 2.0 * g0 + 1j * (w + 2.0 * w0)
    m2[6, 7] = -(g0 - g)
    m1[7, 7] = g - 2.0 * g0 + 1j * (w - 2.0 * w0)
    m2[7, 6] = -(g0 - g)
    m1[8, 8] = -(g + 2.0 * g0) + 1j * (-w + 2.0 * w0)
    m2[8, 9] = g0 + g
    m1[9, 9] = -(g + 2.0 * g0) - 1j * (w + 2.0 * w0)
    m2[9, 8] = g0 + g
    m1.setflags(write=False)
    m2.setflags(write=False)
    return m1, m2


def _pack_collective(c: CollectiveElements) -> np.ndarray:
    return np.array([getattr(c, name) for name in _COLLECTIVE_ORDER], dtype=complex)


def _unpack_collective(y: np.ndarray) -> CollectiveElements:
    return CollectiveElements(
        ee=float(y[0].real), ss=float(y[1].real), aa=float(y[2].real),
        gg=float(y[3].real), eg=complex(y[4]), as_=complex(y[5]),
        ae=complex(y[6]), ag=complex(y[7]), se=complex(y[8]), sg=complex(y[9]),
    )


def collective_rhs(c: CollectiveElements, params: SystemParams) -> CollectiveElements:
    """Time derivatives of the ten independent collective-basis elements."""
    m1, m2 = _collective_matrices(params)
    y = _pack_collective(c)
    return _unpack_collective(m1 @ y + m2 @ np.conj(y))


def evolve_collective(c0: CollectiveElements, params: SystemParams,
                      cfg: IntegratorConfig):
    """Integrate the element-wise collective equations with the same RK4 grid.

    Returns (times, samples) where samples is a list of CollectiveElements.
    Serves as the independent cross-check backend for evolve_numeric.
    """
    _check_step_bound(params, cfg)
    m1, m2 = _collective_matrices(params)
    n_steps = _num_steps(cfg)
    idx = _sample_indices(n_steps, cfg.sample_every)
    y = _pack_collective(c0)
    out = [_unpack_collective(y)]
    half = 0.5 * cfg.dt
    sixth = cfg.dt / 6.0
    pos = 1

    def deriv(z):
        return m1 @ z + m2 @ np.conj(z)

    for step in range(1, n_steps + 1):
        k1 = deriv(y)
        k2 = deriv(y + half * k1)
        k3 = deriv(y + half * k2)
        k4 = deriv(y + cfg.dt * k3)
        y = y + sixth * (k1 + 2.0 * (k2 + k3) + k4)
        if pos < len(idx) and step == idx[pos]:
            out.append(_unpack_collective(y))
            pos += 1
    return idx * cfg.dt, out


TRAJECTORY_CSV_HEADER = "t,concurrence,fidelity,purity," + ",".join(
    f"rho_re_{i}{j},rho_im_{i}{j}" for i in range(4) for j in range(4)
)


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def write_trajectory_csv(traj: Trajectory, fp) -> None:
    """Serialize a trajectory in the canonical CSV layout (17 significant digits)."""
    fp.write(TRAJECTORY_CSV_HEADER + "\n")
    for s in traj.samples:
        fields = [s.t, s.concurrence, s.fidelity, s.purity]
        for z in s.rho.matrix.reshape(16):
            fields.append(z.real)
            fields.append(z.imag)
        fp.write(",".join(_fmt(x) for x in fields) + "\n")
