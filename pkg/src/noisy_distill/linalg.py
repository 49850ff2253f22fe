"""Small dense complex-matrix helpers for 2-, 4- and 16-dimensional operators.

Site ordering is A1 (x) B1 (x) A2 (x) B2 everywhere; the left tensor factor
owns the most significant index.
"""
import numpy as np

from .constants import EXACT_TOL, PSD_TOL
from .errors import DimensionMismatch, InvalidState, NonUnitary

PHI_PLUS = np.array([1, 0, 0, 1], dtype=complex) / np.sqrt(2)
PHI_PLUS_PROJ = np.outer(PHI_PLUS, PHI_PLUS.conj())

# fixed probe vectors for the cheap PSD check
_rng = np.random.default_rng(20240101)
_PROBES = {
    d: _rng.normal(size=(24, d)) + 1j * _rng.normal(size=(24, d)) for d in (2, 4, 16)
}


def _square(m, name="matrix"):
    m = np.asarray(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionMismatch(f"{name} must be square, got shape {m.shape}")
    return m


def tensor(*ops):
    """Kronecker product of the given operators, left factor most significant."""
    if not ops:
        raise ValueError("tensor() needs at least one operand")
    out = np.asarray(ops[0], dtype=complex)
    for op in ops[1:]:
        out = np.kron(out, np.asarray(op, dtype=complex))
    return out


def dagger(m):
    return np.asarray(m).conj().T


def is_unitary(u, tol=EXACT_TOL):
    u = _square(u, "u")
    return np.max(np.abs(dagger(u) @ u - np.eye(u.shape[0]))) <= tol


def conjugate(rho, u):
    """Return ``u @ rho @ u^dagger``; ``u`` must be unitary."""
    rho = _square(rho, "rho")
    u = _square(u, "u")
    if u.shape != rho.shape:
        raise DimensionMismatch(f"operator shape {u.shape} does not match state {rho.shape}")
    if not is_unitary(u):
        raise NonUnitary("conjugate() requires a unitary operator")
    return u @ rho @ dagger(u)


def partial_trace_second_pair(rho16):
    """Trace out A2 B2 from a 16x16 operator on A1 B1 A2 B2.

    The result is the (possibly sub-normalized) 4x4 operator on A1 B1.
    """
    rho16 = _square(rho16, "rho16")
    if rho16.shape != (16, 16):
        raise DimensionMismatch(f"expected a 16x16 operator, got {rho16.shape}")
    return np.einsum("iaja->ij", rho16.reshape(4, 4, 4, 4))


def singlet_fidelity(rho4):
    """Overlap <phi+|rho|phi+> of a two-qubit operator."""
    rho4 = _square(rho4, "rho4")
    if rho4.shape != (4, 4):
        raise DimensionMismatch(f"expected a 4x4 operator, got {rho4.shape}")
    return float(np.real(PHI_PLUS.conj() @ rho4 @ PHI_PLUS))


def is_hermitian(m, tol=EXACT_TOL):
    m = _square(m)
    return np.max(np.abs(m - dagger(m))) <= tol


def check_density_matrix(m, tol=EXACT_TOL, psd_tol=PSD_TOL, full=False):
    """Validate a density matrix and return it as a complex array.

    Hermiticity and unit trace are checked to ``tol``; positivity is checked
    on a fixed set of probe vectors (``<v|m|v> >= -psd_tol``), or on the full
    spectrum when ``full`` is set.
    """
    m = _square(np.asarray(m, dtype=complex), "density matrix")
    if not is_hermitian(m, tol):
        raise InvalidState("density matrix is not Hermitian")
    if abs(np.trace(m) - 1) > tol:
        raise InvalidState(f"density matrix has trace {np.trace(m).real:.3g}")
    probes = _PROBES.get(m.shape[0])
    if probes is not None:
        norms = np.einsum("ki,ki->k", probes.conj(), probes).real
        vals = np.einsum("ki,ij,kj->k", probes.conj(), m, probes).real / norms
        if np.min(vals) < -psd_tol:
            raise InvalidState("density matrix is not positive semidefinite")
    if full and np.min(np.linalg.eigvalsh(m)) < -psd_tol:
        raise InvalidState("density matrix is not positive semidefinite")
    return m
