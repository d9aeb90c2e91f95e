import math

import numpy as np
import pytest

from alpha_fidelity import channels
from alpha_fidelity.errors import ParameterError, SizeError
from alpha_fidelity.fidelity import alpha_fidelity_qubit
from alpha_fidelity.models import (
    ExactEcho,
    IsingChain,
    OscillatorBath,
    ThermalState,
    dephasing_gamma,
    dephasing_map,
    dephasing_pair_alpha_fidelity,
    ising_dephasing_map,
    ising_ground_state,
    ising_spectrum,
    jc_coefficients,
    jc_map,
    log_partition,
    loschmidt_exact_small,
    loschmidt_ground,
    thermal_excited_population,
    thermal_renyi_divergence,
    truncated_thermal_weights,
)
from alpha_fidelity.optimize import TimeGrid, infimum_over_time


def test_bath_validation():
    with pytest.raises(ParameterError):
        OscillatorBath(())
    with pytest.raises(ParameterError):
        OscillatorBath.single_mode(-1.0)
    bath = OscillatorBath(((1.0, 0.5), (2.0, 1j)))
    np.testing.assert_allclose(bath.coupling_strengths, [0.5, 1.0])
    assert bath.scaled(3.0).omegas.tolist() == [3.0, 3.0]


def test_thermal_state_temperatures():
    assert math.isinf(ThermalState.from_temperature(0.0).beta)
    assert ThermalState(4.0).temperature == 0.25
    with pytest.raises(ParameterError):
        ThermalState(0.0)


def test_dephasing_gamma_examples():
    bath = OscillatorBath.single_mode(1.0, 1.0)
    assert dephasing_gamma(bath, 0.5, 0.0) == 1.0
    assert dephasing_gamma(bath, 0.0, math.pi) == pytest.approx(math.exp(-8.0))
    hot = dephasing_gamma(bath, 1.0, math.pi)
    assert hot == pytest.approx(math.exp(-8.0 / math.tanh(0.5)))
    assert hot < dephasing_gamma(bath, 0.0, math.pi)
    with pytest.raises(ParameterError):
        dephasing_gamma(bath, 0.5, -1.0)


def test_dephasing_map_is_periodic():
    bath = OscillatorBath.single_mode(2.0, 0.7)
    induced = dephasing_map(bath, 0.4)
    assert induced.period == pytest.approx(math.pi)
    assert induced(0.0).allclose(channels.identity())
    for t in (0.3, 1.1, 2.5):
        assert induced(t + induced.period).allclose(induced(t), tol=1e-12)
    assert dephasing_map(OscillatorBath(((1.0, 1.0), (2.0, 1.0))), 0.4).period is None


def test_dephasing_pair_closed_form():
    assert dephasing_pair_alpha_fidelity(0.4, 0.4, 0.7) == pytest.approx(1.0)
    with pytest.raises(ParameterError):
        dephasing_pair_alpha_fidelity(1.2, 0.4, 0.7)
    for gamma1, gamma2 in [(0.1, 0.8), (0.0, 1.0), (0.6, 0.3)]:
        for a in (0.5, 0.75, 0.9):
            assert dephasing_pair_alpha_fidelity(gamma1, gamma2, a) == pytest.approx(
                alpha_fidelity_qubit((gamma1, 0, 0), (gamma2, 0, 0), a), abs=1e-10
            )


def test_dephasing_pair_infimum_over_a_period():
    bath = OscillatorBath.single_mode(1.0, 1.0)
    cold, hot = dephasing_map(bath, 0.25), dephasing_map(bath, 0.75)
    grid = TimeGrid(2.0 * math.pi, 256)
    _, value = infimum_over_time(
        lambda t: dephasing_pair_alpha_fidelity(
            cold(t).dephasing_factor(), hot(t).dephasing_factor(), 0.8
        ),
        grid,
    )
    scan = [
        dephasing_pair_alpha_fidelity(
            dephasing_gamma(bath, 0.25, t), dephasing_gamma(bath, 0.75, t), 0.8
        )
        for t in np.linspace(0.0, 2.0 * math.pi, 20001)
    ]
    assert value <= min(scan) + 1e-9


def test_log_partition():
    bath = OscillatorBath.single_mode(1.0)
    assert log_partition(bath, 2.0) == pytest.approx(-1.0 - math.log(1.0 - math.exp(-2.0)))
    pair = OscillatorBath(((1.0, 1.0), (3.0, 1.0)))
    assert log_partition(pair, 0.7) == pytest.approx(
        log_partition(OscillatorBath.single_mode(1.0), 0.7)
        + log_partition(OscillatorBath.single_mode(3.0), 0.7)
    )
    assert log_partition(bath, math.inf) == -math.inf
    with pytest.raises(ParameterError):
        log_partition(bath, 0.0)


def test_thermal_renyi_divergence():
    bath = OscillatorBath.single_mode(1.0)
    assert thermal_renyi_divergence(bath, 2.0, 2.0, 0.5) == 0.0
    ground = thermal_renyi_divergence(bath, math.inf, 1.5, 0.6)
    assert ground == pytest.approx(-math.log(1.0 - math.exp(-1.5)))
    assert thermal_renyi_divergence(bath, 1e3, 1.5, 0.6) == pytest.approx(ground, abs=1e-12)
    assert thermal_renyi_divergence(bath, 1.5, math.inf, 0.6) == pytest.approx(
        0.6 / 0.4 * -math.log(1.0 - math.exp(-1.5))
    )
    values = [thermal_renyi_divergence(bath, 4.0, 1.3, a) for a in (0.2, 0.4, 0.6, 0.8)]
    assert all(v >= 0.0 for v in values)
    assert values == sorted(values)


def test_excited_population_and_weights():
    assert thermal_excited_population(1.0, 1.0) == pytest.approx(1.0 / (1.0 + math.e))
    assert thermal_excited_population(1.0, 0.0) == 0.0
    weights = truncated_thermal_weights(1.0, 0.8, 10)
    assert weights.sum() == pytest.approx(1.0)
    np.testing.assert_allclose(weights[1:] / weights[:-1], math.exp(-1.0 / 0.8))
    np.testing.assert_array_equal(truncated_thermal_weights(1.0, 0.0, 4), [1, 0, 0, 0, 0])
    with pytest.raises(ParameterError):
        truncated_thermal_weights(1.0, 0.8, 0)


def test_jc_map_starts_at_identity():
    assert jc_map(1.0, 1.0, 0.7)(0.0).allclose(channels.identity(), tol=1e-14)
    coeffs = jc_coefficients(1.0, 1.0, 0.0, 2.0)
    assert coeffs.tail_bound == 0.0
    assert coeffs.a == 1.0


def test_jc_channels_are_cptp():
    for temperature in (0.0, 0.3, 1.0, 1.5):
        induced = jc_map(1.0, 1.0, temperature)
        for t in np.linspace(0.0, 10.0, 21):
            assert channels.is_cptp(induced(float(t)))[0]


@pytest.mark.parametrize("temperature", [0.2, 0.5, 0.7, 1.0, 2.0])
def test_jc_truncation_error_within_tail_bound(temperature):
    for t in (0.4, 1.7, 3.3, 8.0):
        short = jc_coefficients(1.0, 1.0, temperature, t, n_trunc=10)
        long = jc_coefficients(1.0, 1.0, temperature, t, n_trunc=40)
        slack = 2.0 * short.tail_bound + 1e-12
        assert abs(short.a - long.a) <= slack
        assert abs(short.b - long.b) <= slack
        assert abs(short.c - long.c) <= slack
        if temperature <= 0.7:
            assert abs(short.a - long.a) <= 1e-6


def test_ising_chain_validation():
    for spins in (3, 2, 7):
        with pytest.raises(ParameterError):
            IsingChain(1.0, 0.5, 0.1, spins)
    with pytest.raises(ParameterError):
        IsingChain(0.0, 0.5, 0.1, 8)
    with pytest.raises(SizeError):
        ising_ground_state(IsingChain(1.0, 0.5, 0.1, 12))


def test_ising_spectrum_and_ground_echo():
    chain = IsingChain(1.0, 0.0, 0.1, 6)
    np.testing.assert_allclose(ising_spectrum(chain, 0.0).energies, 2.0)
    chain = IsingChain(1.0, 0.9, 0.1, 40)
    assert loschmidt_ground(chain, 0.0) == pytest.approx(1.0)
    assert isinstance(loschmidt_ground(chain, 0.5), float)
    values = loschmidt_ground(chain, np.linspace(0.0, 5.0, 50))
    assert values.shape == (50,)
    assert np.all((values >= 0.0) & (values <= 1.0))
    unperturbed = IsingChain(1.0, 0.9, 0.0, 40)
    np.testing.assert_allclose(loschmidt_ground(unperturbed, np.linspace(0.0, 5.0, 11)), 1.0)


@pytest.mark.parametrize("field", [0.01, 0.9, 1.8])
def test_ground_echo_matches_dense_diagonalization(field):
    chain = IsingChain(1.0, field, 0.1, 8)
    times = np.linspace(0.0, 10.0, 200)
    exact = loschmidt_exact_small(chain, None, times)
    np.testing.assert_allclose(loschmidt_ground(chain, times), exact, atol=1e-8)


def test_exact_echo_rejects_wrong_state_length():
    with pytest.raises(ParameterError):
        ExactEcho(IsingChain(1.0, 0.5, 0.1, 4), np.ones(8))


def test_ising_dephasing_maps():
    chain = IsingChain(1.0, 0.9, 0.1, 6)
    ground = ising_dephasing_map(chain)
    exact = ising_dephasing_map(chain, keep_phase=True)
    for t in (0.0, 0.7, 2.2):
        echo = loschmidt_ground(chain, t)
        assert ground(t).dephasing_factor() == pytest.approx(math.sqrt(echo), abs=1e-12)
        coherence = complex(exact(t).linear[0, 0], exact(t).linear[0, 1])
        assert abs(coherence) ** 2 == pytest.approx(echo, abs=1e-8)
        assert channels.is_cptp(exact(t))[0]
