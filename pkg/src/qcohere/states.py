"""Pure states over a fixed basis: canonical forms, tensor powers, support."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DensityMatrixError, NormalizationError, ParameterError, ResourceLimitError
from .simplex import ATOL, prob_vector

# amplitudes with modulus at or below this do not count toward the support
SUPPORT_TOL = 1e-9
# default cap on the output length of tensor_power
TENSOR_CAP = 1_000_000


def pure_state(amplitudes) -> np.ndarray:
    """Validate and return a complex amplitude vector with unit norm (1e-9)."""
    psi = np.atleast_1d(np.asarray(amplitudes, dtype=complex)).copy()
    if psi.ndim != 1 or psi.size == 0:
        raise NormalizationError("expected a non-empty 1-d sequence")
    n2 = float((psi.real**2 + psi.imag**2).sum())
    if abs(n2 - 1.0) > ATOL:
        raise NormalizationError(f"squared norm {n2!r}, expected 1 within {ATOL:.0e}")
    return psi


def squared_amplitudes(psi) -> np.ndarray:
    psi = pure_state(psi)
    return prob_vector(psi.real**2 + psi.imag**2)


@dataclass(frozen=True)
class Canonicalization:
    """Sorted nonnegative form of a state plus the incoherent unitary reaching it.

    canonical = P @ D @ original, where D = diag(phases) strips entrywise
    phases and P is the permutation matrix with P[k, permutation[k]] = 1.
    ``permutation`` is a 0-based index array; ``state`` is real, nonnegative
    and non-increasing.
    """

    state: np.ndarray
    permutation: np.ndarray
    phases: np.ndarray

    def matrix(self) -> np.ndarray:
        """The incoherent unitary P @ D mapping the original state to ``state``."""
        d = self.state.size
        m = np.zeros((d, d), dtype=complex)
        m[np.arange(d), self.permutation] = self.phases[self.permutation]
        return m

    def inverse_matrix(self) -> np.ndarray:
        return self.matrix().conj().T


def canonicalize(psi) -> Canonicalization:
    """Strip phases and sort moduli non-increasing (stable on ties)."""
    psi = pure_state(psi)
    mod = np.abs(psi)
    perm = np.argsort(-mod, kind="stable")
    phases = np.ones(psi.size, dtype=complex)
    nz = mod > 0.0
    phases[nz] = psi[nz].conj() / mod[nz]
    return Canonicalization(state=mod[perm], permutation=perm, phases=phases)


def tensor_power(psi, n: int, max_amplitudes: int = TENSOR_CAP) -> np.ndarray:
    """n-fold Kronecker power of ``psi`` (row-major, last factor fastest)."""
    psi = pure_state(psi)
    if n < 1:
        raise ParameterError(f"copy count must be >= 1, got {n}")
    if psi.size**n > max_amplitudes:
        raise ResourceLimitError(
            f"{psi.size}^{n} amplitudes exceed the cap of {max_amplitudes}"
        )
    out = psi
    for _ in range(n - 1):
        out = np.kron(out, psi)
    return out


def support_size(psi, tol: float = SUPPORT_TOL) -> int:
    """Number of amplitudes with modulus above ``tol``."""
    psi = np.asarray(psi, dtype=complex)
    return int(np.count_nonzero(np.abs(psi) > tol))


def check_density(rho, atol: float = ATOL) -> np.ndarray:
    """Validate a density matrix (hermitian, unit trace, PSD within ``atol``)."""
    rho = np.asarray(rho, dtype=complex)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise DensityMatrixError(f"expected a square matrix, got shape {rho.shape}")
    if float(np.abs(rho - rho.conj().T).max()) > atol:
        raise DensityMatrixError("matrix is not hermitian")
    tr = float(rho.trace().real)
    if abs(tr - 1.0) > atol:
        raise DensityMatrixError(f"trace {tr!r}, expected 1 within {atol:.0e}")
    w = np.linalg.eigvalsh((rho + rho.conj().T) / 2.0)
    if float(w.min()) < -atol:
        raise DensityMatrixError(f"negative eigenvalue {w.min():.3e}")
    return rho


def pure_density(psi) -> np.ndarray:
    psi = pure_state(psi)
    return np.outer(psi, psi.conj())


def fidelity_pure(a, b) -> float:
    """|<a|b>|^2 for two amplitude vectors."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    return float(abs(np.vdot(a, b)) ** 2)
