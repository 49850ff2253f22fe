import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import reference
from conftest import random_density, random_hermitian
from noisy_distill.engine import noisy_round_noisy_measurement, noisy_round_oracle
from noisy_distill.errors import OutOfRange
from noisy_distill.noise import (
    NOISE_TYPES,
    NoiseDistribution,
    PauliChannel,
    absorb_measurement_noise,
    compose_distributions,
    depolarizing_distribution,
    error_operator,
    no_noise,
    pauli_matrix,
    pauli_product,
    self_duality_check,
    single_type_distribution,
)
from noisy_distill.states import post_selector


def test_pauli_algebra():
    X, Y, Z, I = (pauli_matrix(c) for c in "XYZI")
    np.testing.assert_allclose(X @ X, I)
    np.testing.assert_allclose(X @ Y, 1j * Z)
    for a, b in itertools.product("IXYZ", repeat=2):
        assert np.trace(pauli_matrix(a) @ pauli_matrix(b)) == pytest.approx(2 * (a == b))


def test_canonical_order():
    assert len(NOISE_TYPES) == 256 == len(set(NOISE_TYPES))
    assert NOISE_TYPES[:6] == ("IIII", "IIIX", "IIIY", "IIIZ", "IIXI", "IIXX")
    assert NOISE_TYPES[-1] == "ZZZZ"


def test_error_operators():
    np.testing.assert_array_equal(error_operator("IIII"), np.eye(16))
    np.testing.assert_allclose(error_operator("XXXX") @ error_operator("XXXX"), np.eye(16))
    for t in NOISE_TYPES:
        s = error_operator(t)
        np.testing.assert_allclose(s.conj().T @ s, np.eye(16), atol=1e-14)
    s, P = error_operator("ZZII"), post_selector()
    np.testing.assert_allclose(s @ P, P @ s)


def test_pauli_product_matches_matrices():
    for a, b in itertools.combinations(["IXYZ", "YYXZ", "ZIXY", "XXXX"], 2):
        prod = error_operator(a) @ error_operator(b)
        ref = error_operator(pauli_product(a, b))
        phase = np.trace(ref.conj().T @ prod) / 16
        assert abs(abs(phase) - 1) < 1e-12
        np.testing.assert_allclose(prod, phase * ref, atol=1e-12)


def test_depolarizing_distribution():
    assert not np.any(depolarizing_distribution(0).weights)
    np.testing.assert_allclose(depolarizing_distribution(1).weights, 1 / 256)
    assert depolarizing_distribution(0.3).p == pytest.approx(0.3, abs=1e-14)
    with pytest.raises(OutOfRange):
        depolarizing_distribution(1.5)


def test_single_type_distribution():
    d = single_type_distribution("IIIX", 0.4)
    assert d.weight("IIIX") == 0.4 and d.p == pytest.approx(0.4)
    assert single_type_distribution("IIIX", 0) == no_noise()
    with pytest.raises(OutOfRange):
        single_type_distribution("IIIX", -0.1)
    with pytest.raises(ValueError):
        single_type_distribution("IIQX", 0.1)


def test_identity_type_is_harmless():
    for p in (0.3, 0.9):
        a = noisy_round_oracle(0.7, single_type_distribution("IIII", p))
        b = noisy_round_oracle(0.7, no_noise())
        assert a.fidelity_out == pytest.approx(b.fidelity_out, abs=1e-14)
        assert a.p_succ == pytest.approx(b.p_succ, abs=1e-14)


def test_absorb_measurement_noise_weights():
    assert absorb_measurement_noise(1.0) == no_noise()
    d = absorb_measurement_noise(0.98)
    assert d.weight("IIXI") == pytest.approx(0.98 * 0.02)
    assert d.weight("IIIX") == pytest.approx(0.98 * 0.02)
    assert d.weight("IIXX") == pytest.approx(0.02 ** 2)
    assert d.identity_mass == pytest.approx(0.98 ** 2)
    with pytest.raises(OutOfRange):
        absorb_measurement_noise(0.4)


@pytest.mark.parametrize("eta", [0.98, 0.96])
@pytest.mark.parametrize("F", [0.3, 0.55, 0.7, 0.9, 1.0])
def test_absorbed_measurement_equals_noisy_projectors(eta, F):
    base = single_type_distribution("IZXI", 0.05)
    absorbed = noisy_round_oracle(F, compose_distributions(base, absorb_measurement_noise(eta)))
    explicit = noisy_round_noisy_measurement(F, base, eta)
    assert abs(absorbed.fidelity_out - explicit.fidelity_out) < 1e-12
    assert abs(absorbed.p_succ - explicit.p_succ) < 1e-12
    # and against the loop-based reference with noisy effects
    effects = (eta * np.diag([1.0, 0]) + (1 - eta) * np.diag([0, 1.0]),
               eta * np.diag([0, 1.0]) + (1 - eta) * np.diag([1.0, 0]))
    ref = reference.mixture(F, {"IZXI": 0.05}, effects)
    assert explicit.fidelity_out == pytest.approx(ref[0], abs=1e-12)


def _brute_convolve(a, b):
    # full probability vectors, 256 x 256 pairs, products by matrix multiplication
    qa, qb = a.probabilities(), b.probabilities()
    out = np.zeros(256)
    for i, s in enumerate(NOISE_TYPES):
        for j, t in enumerate(NOISE_TYPES):
            if qa[i] and qb[j]:
                out[NOISE_TYPES.index(pauli_product(s, t))] += qa[i] * qb[j]
    return out


def test_compose_examples():
    d = depolarizing_distribution(0.2)
    np.testing.assert_allclose(compose_distributions(no_noise(), d).weights, d.weights, atol=1e-15)
    np.testing.assert_allclose(compose_distributions(d, no_noise()).weights, d.weights, atol=1e-15)
    xx = compose_distributions(single_type_distribution("IIXI", 1), single_type_distribution("IIXI", 1))
    assert xx.identity_mass == pytest.approx(1.0)
    assert xx.support() == [("IIII", 1.0)]


def test_compose_matches_brute_force(rng):
    for _ in range(3):
        w1 = rng.random(256) * (rng.random(256) < 0.1)
        w2 = rng.random(256) * (rng.random(256) < 0.1)
        a = NoiseDistribution(0.5 * w1 / w1.sum())
        b = NoiseDistribution(0.3 * w2 / w2.sum())
        c = compose_distributions(a, b)
        np.testing.assert_allclose(c.probabilities(), _brute_convolve(a, b), atol=1e-15)
        assert c.identity_mass == pytest.approx(_brute_convolve(a, b)[0], abs=1e-15)


def test_compose_associative(rng):
    ds = []
    for _ in range(3):
        w = rng.random(256) * (rng.random(256) < 0.2)
        ds.append(NoiseDistribution(rng.random() * w / w.sum()))
    a, b, c = ds
    left = compose_distributions(compose_distributions(a, b), c)
    right = compose_distributions(a, compose_distributions(b, c))
    np.testing.assert_allclose(left.weights, right.weights, atol=1e-14)


@given(st.floats(0, 1), st.sampled_from(NOISE_TYPES))
@settings(max_examples=30, deadline=None)
def test_constructors_sum_to_p(p, t):
    assert abs(depolarizing_distribution(p).p - p) < 1e-14
    assert abs(single_type_distribution(t, p).p - p) < 1e-14


def test_text_roundtrip():
    d = compose_distributions(single_type_distribution("XYZI", 0.1), absorb_measurement_noise(0.96))
    assert NoiseDistribution.from_text(d.to_text()) == d
    parsed = NoiseDistribution.from_text("# comment\nIIIX 0.25\n\nzzzz 0.125  # trailing\n")
    assert parsed.weight("IIIX") == 0.25 and parsed.weight("ZZZZ") == 0.125
    with pytest.raises(ValueError):
        NoiseDistribution.from_text("IIIX")
    with pytest.raises(OutOfRange):
        NoiseDistribution.from_text("IIIX 0.7\nIIXI 0.7")


def test_distribution_is_immutable():
    d = depolarizing_distribution(0.1)
    with pytest.raises(ValueError):
        d.weights[0] = 1


def test_self_duality(rng):
    for _ in range(50):
        ch = PauliChannel(*(rng.dirichlet(np.ones(4))[:3]))
        a, b = self_duality_check(ch, random_density(rng, 2), random_hermitian(rng, 2))
        assert abs(a - b) < 1e-12
    rho, obs = random_density(rng, 2), random_hermitian(rng, 2)
    a, b = self_duality_check(PauliChannel(), rho, obs)
    assert a == pytest.approx(np.trace(rho @ obs).real) == pytest.approx(b)
    a, b = self_duality_check(PauliChannel.depolarizing(0.3), rho, np.eye(2))
    assert a == pytest.approx(1) and b == pytest.approx(1)
    with pytest.raises(OutOfRange):
        PauliChannel(0.5, 0.5, 0.5)
