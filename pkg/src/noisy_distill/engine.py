"""One round of the recurrence protocol: exact density-matrix evaluation and closed forms.

Every branch of the noisy round is kept as an unnormalized pair
(numerator, denominator): the numerator is <phi+| tr_{A2B2}[...] |phi+>
and the denominator the acceptance probability. A distribution mixes the
pairs linearly and is normalized once at the end.
"""
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .constants import ZERO_PSUCC
from .errors import OutOfRange, ZeroSuccessProbability
from .linalg import PHI_PLUS, partial_trace_second_pair, singlet_fidelity
from .noise import NOISE_TYPES, NoiseDistribution, _error_operators, type_index
from .states import (
    _bilateral_cnot,
    noisy_measurement_effects,
    post_selection_projector,
    werner_state,
)

CLASS_TAGS = ("I", "M", "C1", "C2")


@dataclass(frozen=True)
class DistillOutcome:
    fidelity_out: float
    p_succ: float

    def __iter__(self):
        return iter((self.fidelity_out, self.p_succ))


def _check_fidelity(F):
    if not 0.0 <= F <= 1.0:
        raise OutOfRange(f"fidelity must lie in [0, 1], got {F}")


@lru_cache(maxsize=4096)
def _after_cnot(F):
    w = werner_state(F)
    u = _bilateral_cnot()
    rho = u @ np.kron(w, w) @ u.T
    rho.setflags(write=False)
    return rho


def _normalize(num, den):
    if den < ZERO_PSUCC:
        raise ZeroSuccessProbability(f"acceptance probability {den:.3g} is zero")
    return DistillOutcome(float(num / den), float(den))


def _branch_pairs(F, indices, measurement=None):
    """(numerators, denominators) for the listed error types, by direct simulation."""
    rho = _after_cnot(F)
    ops = _error_operators()[indices]
    proj = post_selection_projector() if measurement is None else measurement
    # sigma rho sigma^dagger for every listed type at once
    noisy = ops @ rho @ ops.conj().transpose(0, 2, 1)
    kept = noisy @ proj
    reduced = np.einsum("niaja->nij", kept.reshape(-1, 4, 4, 4, 4))
    num = np.einsum("i,nij,j->n", PHI_PLUS.conj(), reduced, PHI_PLUS).real
    den = np.einsum("nii->n", reduced).real
    return num, den


def single_error_fidelity(F, t):
    """Unnormalized (numerator, denominator) when error ``t`` happens with certainty."""
    _check_fidelity(F)
    w = werner_state(F)
    rho = _bilateral_cnot() @ np.kron(w, w) @ _bilateral_cnot().T
    s = _error_operators()[type_index(t)]
    rho = s @ rho @ s.conj().T
    reduced = partial_trace_second_pair(rho @ post_selection_projector())
    return singlet_fidelity(reduced), float(np.trace(reduced).real)


def branch_table(grid):
    """Oracle numerators and denominators for all 256 types on a fidelity grid.

    Returns two arrays of shape (256, len(grid)).
    """
    grid = [float(F) for F in grid]
    for F in grid:
        _check_fidelity(F)
    idx = np.arange(len(NOISE_TYPES))
    num = np.empty((len(NOISE_TYPES), len(grid)))
    den = np.empty_like(num)
    for j, F in enumerate(grid):
        num[:, j], den[:, j] = _branch_pairs(F, idx)
    return num, den


def _mix(F, d, measurement=None):
    idx = np.flatnonzero(d.weights)
    idx = np.concatenate(([0], idx[idx != 0]))
    num, den = _branch_pairs(F, idx, measurement)
    q = d.probabilities()[idx]
    return float(q @ num), float(q @ den)


def ideal_round(F):
    """Noise-free round: build rho_W(F)^(x)2, apply the bilateral CNOT, post-select."""
    _check_fidelity(F)
    num, den = _branch_pairs(F, np.array([0]))
    return _normalize(num[0], den[0])


def noisy_round_oracle(F, d):
    """Exact noisy round for distribution ``d`` (all branches simulated)."""
    _check_fidelity(F)
    return _normalize(*_mix(F, d))


def noisy_round_noisy_measurement(F, d, eta):
    """Noisy round with channel noise ``d`` and imperfect measurement effects.

    Uses the noisy effects ``eta P_x + (1-eta) P_{x+1}`` directly in the
    post-selection operator instead of converting them into channel noise.
    """
    _check_fidelity(F)
    e0, e1 = noisy_measurement_effects(eta)
    return _normalize(*_mix(F, d, post_selection_projector(e0, e1)))


def fidelity_increment(F, d):
    return noisy_round_oracle(F, d).fidelity_out - F


def iterate_protocol(F0, d, max_rounds, tol=1e-12):
    """Apply the noisy round repeatedly, re-twirling to a Werner state each time.

    Returns ``[(0, F0, nan), (1, F1, p_succ1), ...]``; stops early once the
    fidelity changes by less than ``tol``.
    """
    _check_fidelity(F0)
    if max_rounds < 1:
        raise OutOfRange("max_rounds must be at least 1")
    rows = [(0, F0, float("nan"))]
    F = F0
    for n in range(1, max_rounds + 1):
        out = noisy_round_oracle(F, d)
        F_new = min(max(out.fidelity_out, 0.0), 1.0)
        rows.append((n, F_new, out.p_succ))
        if abs(F_new - F) < tol:
            break
        F = F_new
    return rows


# --- closed forms --------------------------------------------------------


def ideal_numerator(F):
    return (10 * F * F - 2 * F + 1) / 9


def ideal_denominator(F):
    return (8 * F * F - 4 * F + 5) / 9


def ideal_round_closed(F):
    return DistillOutcome(ideal_numerator(F) / ideal_denominator(F), ideal_denominator(F))


@dataclass(frozen=True)
class ClassFidelityTerms:
    """Unnormalized numerator and acceptance probability of each error class at one F."""

    F: float
    numerator_ideal: float
    numerator_I: float
    numerator_M: float
    numerator_C1: float
    numerator_C2: float
    denominator_ideal: float
    denominator_I: float
    denominator_M: float
    denominator_C1: float
    denominator_C2: float

    def numerator(self, tag):
        return getattr(self, f"numerator_{tag}")

    def denominator(self, tag):
        return getattr(self, f"denominator_{tag}")

    def pair(self, tag):
        return self.numerator(tag), self.denominator(tag)


def analytic_class_terms(F):
    _check_fidelity(F)
    n_ideal = ideal_numerator(F)
    d_ideal = ideal_denominator(F)
    return ClassFidelityTerms(
        F=F,
        numerator_ideal=n_ideal,
        numerator_I=n_ideal,
        numerator_M=(1 + F - 2 * F * F) / 9,
        numerator_C1=2 * F * (1 - F) / 3,
        numerator_C2=2 * (1 - F) ** 2 / 9,
        denominator_ideal=d_ideal,
        denominator_I=d_ideal,
        # an M error swaps the accepted and rejected parity outcomes
        denominator_M=1 - d_ideal,
        denominator_C1=d_ideal,
        denominator_C2=d_ideal,
    )


def noisy_round_analytic(F, weights_per_class, p=None):
    """Closed-form round for class weights ``(w_I, w_M, w_C1, w_C2)`` with total ``p``."""
    w = np.asarray(weights_per_class, dtype=float)
    if w.shape != (4,) or np.any(w < 0):
        raise OutOfRange("class weights must be four non-negative numbers")
    if p is None:
        p = float(w.sum())
    if abs(w.sum() - p) > 1e-12 or p > 1 + 1e-12:
        raise OutOfRange(f"class weights sum to {w.sum()}, expected p={p} <= 1")
    terms = analytic_class_terms(F)
    num = (1 - p) * terms.numerator_ideal
    den = (1 - p) * terms.denominator_ideal
    for wk, tag in zip(w, CLASS_TAGS):
        num += wk * terms.numerator(tag)
        den += wk * terms.denominator(tag)
    return _normalize(num, den)


def depolarizing_psucc(F, p):
    """Acceptance probability under uniform (depolarizing) noise of weight p."""
    return ((5 - 4 * F + 8 * F * F) - p / 2 * (1 - 4 * F) ** 2) / 9
