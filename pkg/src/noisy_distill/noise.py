"""Pauli channels, four-site Pauli error types and weighted noise distributions.

A noise type is a 4-letter string over ``IXYZ`` naming the Pauli error on
A1, B1, A2, B2. The 256 types are indexed in canonical order IIII, IIIX,
IIIY, IIIZ, IIXI, ..., ZZZZ.
"""
from dataclasses import dataclass
from functools import lru_cache
import itertools

import numpy as np

from .constants import EXACT_TOL
from .errors import OutOfRange
from .linalg import tensor

LABELS = "IXYZ"
PHASE_TYPE = frozenset("IZ")
BIT_TYPE = frozenset("XY")

PAULI = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}

# (x, z) symplectic bits; Pauli products modulo phase are XORs of these
_XZ = {"I": (0, 0), "X": (1, 0), "Y": (1, 1), "Z": (0, 1)}
_FROM_XZ = {v: k for k, v in _XZ.items()}

NOISE_TYPES = tuple("".join(t) for t in itertools.product(LABELS, repeat=4))
_INDEX = {t: i for i, t in enumerate(NOISE_TYPES)}
N_TYPES = len(NOISE_TYPES)


def pauli_matrix(label):
    try:
        return PAULI[label].copy()
    except KeyError:
        raise ValueError(f"unknown Pauli label {label!r}") from None


def is_phase_type(label):
    return label in PHASE_TYPE


def validate_noise_type(t):
    t = str(t).upper()
    if len(t) != 4 or any(c not in LABELS for c in t):
        raise ValueError(f"noise type must be 4 letters from IXYZ, got {t!r}")
    return t


def type_index(t):
    return _INDEX[validate_noise_type(t)]


def pauli_product(a, b):
    """Product of two Pauli strings, ignoring the global phase."""
    return "".join(
        _FROM_XZ[(_XZ[x][0] ^ _XZ[y][0], _XZ[x][1] ^ _XZ[y][1])] for x, y in zip(a, b)
    )


@lru_cache(maxsize=None)
def _error_operators():
    ops = np.array([tensor(*(PAULI[c] for c in t)) for t in NOISE_TYPES])
    ops.setflags(write=False)
    return ops


def error_operator(t):
    """16x16 operator sigma_i (x) sigma_j (x) sigma_k (x) sigma_l for type ``ijkl``."""
    return _error_operators()[type_index(t)].copy()


@lru_cache(maxsize=None)
def _product_table():
    # table[a, b] = index of pauli_product(type a, type b)
    code = np.array([sum(_XZ[c][0] << (2 * (3 - n)) | _XZ[c][1] << (2 * (3 - n) + 1)
                         for n, c in enumerate(t)) for t in NOISE_TYPES])
    by_code = np.empty(256, dtype=int)
    by_code[code] = np.arange(256)
    table = by_code[code[:, None] ^ code[None, :]]
    table.setflags(write=False)
    return table


@dataclass(frozen=True)
class PauliChannel:
    """Single-qubit channel rho -> (1-q) rho + sum_i r_i sigma_i rho sigma_i."""

    r_x: float = 0.0
    r_y: float = 0.0
    r_z: float = 0.0

    def __post_init__(self):
        if min(self.r_x, self.r_y, self.r_z) < 0 or self.q > 1 + EXACT_TOL:
            raise OutOfRange(f"invalid Pauli channel rates {self.r_x, self.r_y, self.r_z}")

    @property
    def q(self):
        return self.r_x + self.r_y + self.r_z

    @classmethod
    def depolarizing(cls, q):
        return cls(q / 3, q / 3, q / 3)

    def apply(self, m):
        m = np.asarray(m, dtype=complex)
        out = (1 - self.q) * m
        for r, s in ((self.r_x, PAULI["X"]), (self.r_y, PAULI["Y"]), (self.r_z, PAULI["Z"])):
            out = out + r * (s @ m @ s)
        return out


def self_duality_check(ch, rho, obs):
    """Return ``(tr[N(rho) A], tr[rho N(A)])``; equal for any Pauli channel."""
    rho = np.asarray(rho, dtype=complex)
    obs = np.asarray(obs, dtype=complex)
    return (
        complex(np.trace(ch.apply(rho) @ obs)).real,
        complex(np.trace(rho @ ch.apply(obs))).real,
    )


class NoiseDistribution:
    """Weights C_ijkl >= 0 over the 256 noise types.

    The channel is ``(1 - p) id + sum_t C_t sigma_t (.) sigma_t`` with
    ``p = sum_t C_t``. The IIII weight is stored like any other, so the total
    mass of the no-error branch is ``1 - p + C_IIII``.
    """

    __slots__ = ("_w",)

    def __init__(self, weights=None):
        if weights is None:
            w = np.zeros(N_TYPES)
        elif isinstance(weights, dict):
            w = np.zeros(N_TYPES)
            for t, c in weights.items():
                w[type_index(t)] += c
        else:
            w = np.array(weights, dtype=float)
            if w.shape != (N_TYPES,):
                raise ValueError(f"weights must have length {N_TYPES}, got shape {w.shape}")
        if np.any(w < 0):
            raise OutOfRange("noise weights must be non-negative")
        if w.sum() > 1 + EXACT_TOL:
            raise OutOfRange(f"total noise weight {w.sum()} exceeds 1")
        w.setflags(write=False)
        self._w = w

    @property
    def weights(self):
        return self._w

    @property
    def p(self):
        return float(self._w.sum())

    @property
    def identity_mass(self):
        return 1.0 - self.p + float(self._w[0])

    def weight(self, t):
        return float(self._w[type_index(t)])

    def probabilities(self):
        """Full probability vector over the 256 conjugations (IIII first)."""
        q = self._w.copy()
        q[0] += 1.0 - self.p
        return q

    def support(self):
        return [(NOISE_TYPES[i], float(self._w[i])) for i in np.flatnonzero(self._w)]

    def compose(self, other):
        return compose_distributions(self, other)

    def __eq__(self, other):
        if not isinstance(other, NoiseDistribution):
            return NotImplemented
        return np.array_equal(self._w, other._w)

    def __hash__(self):
        return hash(self._w.tobytes())

    def __repr__(self):
        items = ", ".join(f"{t}: {c:.6g}" for t, c in self.support()[:6])
        more = "" if len(self.support()) <= 6 else ", ..."
        return f"NoiseDistribution(p={self.p:.6g}, {{{items}{more}}})"

    def to_text(self):
        """Serialize as lines ``IJKL weight``, nonzero weights only, canonical order."""
        return "".join(f"{t} {c!r}\n" for t, c in self.support())

    @classmethod
    def from_text(cls, text):
        weights = {}
        for lineno, line in enumerate(text.splitlines(), 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) != 2:
                raise ValueError(f"line {lineno}: expected 'IJKL weight', got {line!r}")
            t = validate_noise_type(parts[0])
            weights[t] = weights.get(t, 0.0) + float(parts[1])
        return cls(weights)


def _check_p(p):
    if not 0.0 <= p <= 1.0:
        raise OutOfRange(f"p must lie in [0, 1], got {p}")


def no_noise():
    return NoiseDistribution()


def depolarizing_distribution(p):
    """Uniform weight p/256 on every type, IIII included."""
    _check_p(p)
    return NoiseDistribution(np.full(N_TYPES, p / N_TYPES))


def single_type_distribution(t, p):
    _check_p(p)
    return NoiseDistribution({validate_noise_type(t): p})


def uniform_over(types, p):
    """Weight p split evenly over ``types``."""
    _check_p(p)
    types = [validate_noise_type(t) for t in types]
    return NoiseDistribution({t: p / len(types) for t in types})


def absorb_measurement_noise(eta):
    """Bit-flip noise on A2, B2 equivalent to measuring with effects ``eta P_x + (1-eta) P_{x+1}``."""
    if not 0.5 <= eta <= 1.0:
        raise OutOfRange(f"eta must lie in [1/2, 1], got {eta}")
    flip = 1.0 - eta
    return NoiseDistribution({"IIXI": eta * flip, "IIIX": flip * eta, "IIXX": flip * flip})


def compose_distributions(a, b):
    """Distribution of the product error when ``a`` and ``b`` act in sequence.

    Pauli conjugations compose by multiplying the Pauli strings (phases drop),
    so the full probability vectors convolve over the Pauli group. The
    no-error branch of the result is the product of the two no-error branches.
    """
    qa, qb = a.probabilities(), b.probabilities()
    r = np.zeros(N_TYPES)
    np.add.at(r, _product_table().ravel(), np.outer(qa, qb).ravel())
    r[0] -= (1.0 - a.p) * (1.0 - b.p)
    r[0] = max(r[0], 0.0)
    return NoiseDistribution(r)
