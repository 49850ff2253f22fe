"""Werner states, twirling, the bilateral CNOT and the post-selection projector."""
import itertools
from functools import lru_cache

import numpy as np

from .errors import OutOfRange
from .linalg import PHI_PLUS_PROJ, check_density_matrix, dagger, singlet_fidelity, tensor

I2 = np.eye(2, dtype=complex)
P0 = np.diag([1, 0]).astype(complex)
P1 = np.diag([0, 1]).astype(complex)


def _check_fidelity(F):
    if not 0.0 <= F <= 1.0:
        raise OutOfRange(f"fidelity must lie in [0, 1], got {F}")


def werner_state(F):
    """Two-qubit Werner state with singlet fidelity ``F`` w.r.t. |phi+>."""
    _check_fidelity(F)
    return F * PHI_PLUS_PROJ + (1 - F) / 3 * (np.eye(4) - PHI_PLUS_PROJ)


def is_entangled(F):
    return F > 0.5


def twirl(rho):
    """Project a two-qubit state onto the Werner family, keeping its fidelity."""
    rho = check_density_matrix(rho)
    return werner_state(min(max(singlet_fidelity(rho), 0.0), 1.0))


@lru_cache(maxsize=None)
def clifford_group_1q():
    """The 24 single-qubit Clifford unitaries, one representative per phase class."""
    h = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
    s = np.diag([1, 1j])
    group = [I2]
    frontier = [I2]
    while frontier:
        new = []
        for g in frontier:
            for gen in (h, s):
                cand = gen @ g
                if not any(_equal_up_to_phase(cand, k) for k in group):
                    group.append(cand)
                    new.append(cand)
        frontier = new
    return tuple(group)


def _equal_up_to_phase(a, b, tol=1e-9):
    # |tr(a^dagger b)| = dim iff a and b differ by a global phase
    return abs(abs(np.trace(dagger(a) @ b)) - a.shape[0]) < tol


def twirl_sampled(rho):
    """Average ``(U (x) U*) rho (U (x) U*)^dagger`` over the single-qubit Clifford group.

    The Clifford group is a unitary 2-design, so this reproduces the Haar
    twirl exactly; it is used to cross-check :func:`twirl`.
    """
    rho = check_density_matrix(rho)
    cliffords = clifford_group_1q()
    out = np.zeros((4, 4), dtype=complex)
    for u in cliffords:
        v = tensor(u, u.conj())
        out += v @ rho @ dagger(v)
    return out / len(cliffords)


@lru_cache(maxsize=None)
def _bilateral_cnot():
    u = np.zeros((16, 16), dtype=complex)
    for a1, b1, a2, b2 in itertools.product((0, 1), repeat=4):
        src = 8 * a1 + 4 * b1 + 2 * a2 + b2
        dst = 8 * a1 + 4 * b1 + 2 * (a1 ^ a2) + (b1 ^ b2)
        u[dst, src] = 1
    u.setflags(write=False)
    return u


def bilateral_cnot():
    """CNOT A1->A2 together with CNOT B1->B2, in the A1 B1 A2 B2 basis."""
    return _bilateral_cnot().copy()


def cnot():
    """Two-qubit CNOT, control on the first factor."""
    return tensor(P0, I2) + tensor(P1, np.array([[0, 1], [1, 0]]))


def post_selection_projector(p0=P0, p1=P1):
    """Identity on A1 B1 times ``p0 (x) p0 + p1 (x) p1`` on A2 B2.

    Passing noisy effects for ``p0``/``p1`` gives the imperfect-measurement
    operator (then no longer a projector).
    """
    return tensor(np.eye(4), tensor(p0, p0) + tensor(p1, p1))


def post_selector():
    return post_selection_projector()


def noisy_measurement_effects(eta):
    """Effects ``eta P_x + (1 - eta) P_{x+1}`` for x = 0, 1."""
    if not 0.5 <= eta <= 1.0:
        raise OutOfRange(f"eta must lie in [1/2, 1], got {eta}")
    return eta * P0 + (1 - eta) * P1, eta * P1 + (1 - eta) * P0
