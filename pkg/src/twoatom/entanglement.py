"""Entanglement and state-quality measures for two-qubit density matrices.

Wootters concurrence is provided in two independent formulations so each can
serve as an oracle for the other: the eigenvalue route through the
non-Hermitian product rho * rho_tilde, and the literal Hermitian
matrix-square-root route.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import EigenFailure, OutOfRange
from .qstate import DensityMatrix, PSD_TOL, make_density

_SIGMA_1 = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
_SIGMA_2 = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
_SIGMA_3 = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)
_I2 = np.eye(2, dtype=complex)

_SPIN_FLIP_OP = np.kron(_SIGMA_2, _SIGMA_2)

# Eigenvalues of a PSD matrix below this are round-off zeros.  Taking their
# square roots would seed ~1e-8 junk in the null directions of the root.
_RANK_CLAMP_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class LocalUnitary:
    """4x4 unitary of exact tensor-product form, with its conventional label."""

    u: np.ndarray
    label: str


_UNITARY_FACTORS = {
    "Us": (_SIGMA_3, _I2),
    "Uplus": (_I2, 1j * _SIGMA_2),
    "Uminus": (_I2, _SIGMA_1),
}


def local_unitary(label: str) -> LocalUnitary:
    """One of the single-atom unitaries mapping the singlet onto s, + or -.

    Us = sigma3 (x) I maps a -> s, Uplus = I (x) i*sigma2 maps a -> +,
    Uminus = I (x) sigma1 maps a -> -.
    """
    try:
        fa, fb = _UNITARY_FACTORS[label]
    except KeyError:
        raise OutOfRange(f"label must be one of {sorted(_UNITARY_FACTORS)}, got {label!r}") from None
    u = np.kron(fa, fb)
    u.setflags(write=False)
    return LocalUnitary(u=u, label=label)


def spin_flip(rho: DensityMatrix) -> np.ndarray:
    """(sigma2 (x) sigma2) conj(rho) (sigma2 (x) sigma2); an involution."""
    return _SPIN_FLIP_OP @ rho.matrix.conj() @ _SPIN_FLIP_OP


def _wootters_from_lambdas(lambdas: np.ndarray) -> float:
    lam = np.sort(lambdas)[::-1]
    return float(max(0.0, lam[0] - lam[1] - lam[2] - lam[3]))


def _psd_factor(m: np.ndarray) -> np.ndarray:
    """Factor X with m = X X^dag from the eigendecomposition of a PSD matrix."""
    try:
        w, v = np.linalg.eigh(m)
    except np.linalg.LinAlgError as exc:
        raise EigenFailure(f"eigendecomposition failed: {exc}") from exc
    if w[0] < -PSD_TOL:
        raise EigenFailure(f"negative eigenvalue {w[0]:.3e} in state factorization")
    return v * np.sqrt(np.clip(w, 0.0, None))


def concurrence(rho: DensityMatrix) -> float:
    """Wootters concurrence via the tau-matrix of a pure-state decomposition.

    With rho = X X^dag, the singular values of the complex symmetric matrix
    tau = X^T (sigma2 (x) sigma2) X are exactly the square roots of the
    eigenvalues of rho * rho_tilde; sorted descending they give
    C = max(0, l1 - l2 - l3 - l4).  Working on the square-root scale keeps
    absolute round-off at machine precision; extracting the squared spectrum
    directly would lose the small coefficients near rank changes.
    """
    x = _psd_factor(rho.matrix)
    tau = x.T @ _SPIN_FLIP_OP @ x
    try:
        lambdas = np.linalg.svd(tau, compute_uv=False)
    except np.linalg.LinAlgError as exc:
        raise EigenFailure(f"singular value extraction failed: {exc}") from exc
    return _wootters_from_lambdas(lambdas)


def _psd_sqrt(m: np.ndarray) -> np.ndarray:
    """Hermitian square root of a PSD matrix.

    Eigenvalues inside [-PSD_TOL, _RANK_CLAMP_TOL] are treated as exact
    zeros so the root carries no sqrt(round-off) junk in null directions.
    """
    try:
        w, v = np.linalg.eigh(m)
    except np.linalg.LinAlgError as exc:
        raise EigenFailure(f"eigendecomposition failed: {exc}") from exc
    if w[0] < -PSD_TOL:
        raise EigenFailure(f"negative eigenvalue {w[0]:.3e} in Hermitian square root")
    w = np.where(w < _RANK_CLAMP_TOL, 0.0, w)
    return (v * np.sqrt(w)) @ v.conj().T


def concurrence_sqrt_form(rho: DensityMatrix) -> float:
    """Wootters concurrence from rho_hat = sqrt(sqrt(rho) rho_tilde sqrt(rho)).

    C = max(0, 2 max_eig(rho_hat) - tr rho_hat).  The spectrum of rho_hat is
    obtained as the singular values of sqrt(rho) @ sqrt(rho_tilde), whose
    Gram matrix is the argument of the outer square root.  Kept as an
    independent cross-check of ``concurrence``.
    """
    g = _psd_sqrt(rho.matrix) @ _psd_sqrt(spin_flip(rho))
    try:
        sig = np.linalg.svd(g, compute_uv=False)
    except np.linalg.LinAlgError as exc:
        raise EigenFailure(f"singular value extraction failed: {exc}") from exc
    return float(max(0.0, 2.0 * sig[0] - sig.sum()))


def fidelity_singlet(rho: DensityMatrix) -> float:
    """Overlap <a|rho|a> with the singlet, equal to (rho22 + rho33)/2 - Re rho23."""
    m = rho.matrix
    f = 0.5 * (m[1, 1].real + m[2, 2].real) - m[1, 2].real
    return float(min(1.0, max(0.0, f)))


def purity(rho: DensityMatrix) -> float:
    """tr rho^2, between 1/4 (maximally mixed) and 1 (pure)."""
    m = rho.matrix
    return float(np.vdot(m, m).real)


def apply_local(u: LocalUnitary, rho: DensityMatrix) -> DensityMatrix:
    """Conjugate a state by a local unitary; concurrence is invariant."""
    return make_density(u.u @ rho.matrix @ u.u.conj().T)
