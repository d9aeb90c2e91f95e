import math

import numpy as np
import pytest

from alpha_fidelity.errors import (
    CrossoverNotFound,
    EmptyIntervalError,
    IdenticalUnitariesError,
    ParameterError,
)
from alpha_fidelity.fidelity import pure_state_fidelity
from alpha_fidelity.models import (
    ExactEcho,
    IsingChain,
    OscillatorBath,
    dephasing_map,
    ising_ground_state,
    jc_map,
    loschmidt_ground,
    thermal_renyi_divergence,
)
from alpha_fidelity.optimize import OptimizerConfig, TimeGrid, find_root
from alpha_fidelity.protocols import (
    EXCLUSION_ALPHA_GRID,
    detect_revival,
    exclusion_lhs,
    exclusion_rhs,
    exclusion_verdict,
    frequency_crossover,
    hillery_reference_thresholds,
    kl_thermometry_bounds,
    limiting_temperature,
    loschmidt_bound_curves,
    loschmidt_bounds_from_fidelity,
    min_processor_dimension,
    pauli_dimension_bound,
    pauli_unitary_overlaps,
    prog_overlap_bound,
    programming_thresholds,
    thermalized_probe_bounds,
    thermometry_bounds,
)

FAST = OptimizerConfig(starts=4)
EPS_3 = 1.0 - math.sqrt(0.5)
EPS_4 = (3.0 - math.sqrt(6.0)) / 3.0


# ------------------------------------------------------------------
# Programming
# ------------------------------------------------------------------


def test_programming_thresholds():
    cuts = dict((d, eps) for eps, d in programming_thresholds(4))
    assert cuts[2] == pytest.approx(1.0, abs=1e-12)
    assert cuts[3] == pytest.approx(EPS_3, abs=1e-12)
    assert cuts[4] == pytest.approx(EPS_4, abs=1e-12)
    for d, eps in ((3, EPS_3), (4, EPS_4)):
        root = find_root(lambda e: (2.0 - e) * e - 1.0 / (d - 1), 0.0, 1.0)
        assert root == pytest.approx(eps, abs=2e-12)
    with pytest.raises(ParameterError):
        programming_thresholds(1)


def test_prog_overlap_bound():
    assert prog_overlap_bound(0.0, 0.0) == 0.0
    assert prog_overlap_bound(0.5, 0.0) == pytest.approx(0.75)
    assert prog_overlap_bound(0.1, 0.75) == pytest.approx(0.19 / 0.5)
    with pytest.raises(IdenticalUnitariesError):
        prog_overlap_bound(0.1, 1.0)
    with pytest.raises(ParameterError):
        prog_overlap_bound(1.5, 0.0)


def test_pauli_overlaps_vanish():
    overlaps = pauli_unitary_overlaps(FAST)
    off_diagonal = overlaps[~np.eye(4, dtype=bool)]
    assert np.all(off_diagonal <= 1e-9)


@pytest.mark.parametrize(
    "epsilon, expected",
    [(0.0, 4), (0.05, 4), (0.1, 4), (0.2, 3), (0.25, 3), (0.3, 2), (0.45, 2)],
)
def test_pauli_dimension_staircase(epsilon, expected):
    assert pauli_dimension_bound(epsilon, np.zeros((4, 4))).min_dim == expected


def test_dimension_at_the_cuts_and_monotone():
    zeros = np.zeros((4, 4))
    assert pauli_dimension_bound(EPS_4, zeros).min_dim == 3
    assert pauli_dimension_bound(EPS_3, zeros).min_dim == 2
    dims = [pauli_dimension_bound(float(e), zeros).min_dim for e in np.linspace(0.0, 0.5, 101)]
    assert all(later <= earlier for earlier, later in zip(dims, dims[1:]))
    assert pauli_dimension_bound(0.1, cfg=FAST).min_dim == 4


def test_min_processor_dimension_validation():
    with pytest.raises(ParameterError):
        min_processor_dimension(3, np.zeros((4, 4)))
    with pytest.raises(ParameterError):
        min_processor_dimension(2, np.array([[0.0, -0.1], [-0.1, 0.0]]))
    assert min_processor_dimension(2, np.array([[0.0, 1.0], [1.0, 0.0]])).min_dim == 1


def test_reference_thresholds_are_weaker():
    (h4, d4), (h3, d3) = hillery_reference_thresholds()
    assert (d4, d3) == (4, 3)
    assert h4 < h3 < EPS_4 < EPS_3


# ------------------------------------------------------------------
# Exclusion of environment Hamiltonians
# ------------------------------------------------------------------


def test_exclusion_lhs():
    bath = OscillatorBath.single_mode(1.0)
    assert exclusion_lhs(bath, 2.0, 2.0, 0.4) == 0.0
    for a in (0.2, 0.5, 0.9):
        value = exclusion_lhs(bath, 4.0, 4.0 / 3.0, a)
        assert value <= 0.0
        assert value == pytest.approx((a - 1.0) * thermal_renyi_divergence(bath, 4.0, 4.0 / 3.0, a), abs=1e-12)
    curve = [exclusion_lhs(OscillatorBath.single_mode(w), 4.0, 4.0 / 3.0, 0.5) for w in np.linspace(1.0, 5.0, 9)]
    assert curve == sorted(curve)
    with pytest.raises(ParameterError):
        exclusion_lhs(bath, math.inf, 1.0, 0.5)


def test_exclusion_rhs_of_identical_maps():
    bath = OscillatorBath.single_mode(1.0)
    induced = dephasing_map(bath, 0.5)
    grid = TimeGrid(2.0 * math.pi, 32)
    assert exclusion_rhs(induced, induced, 0.7, grid) == 0.0
    twin = dephasing_map(bath, 0.5)
    assert exclusion_rhs(induced, twin, 0.7, grid) == pytest.approx(0.0, abs=1e-12)


def _fig3_maps():
    bath = OscillatorBath.single_mode(1.0, 1.0)
    return dephasing_map(bath, 0.25), dephasing_map(bath, 0.75)


def test_true_frequency_is_compatible():
    map1, map2 = _fig3_maps()
    grid = TimeGrid(2.0 * math.pi, 256)
    rhs = [exclusion_rhs(map1, map2, a, grid) for a in EXCLUSION_ALPHA_GRID]
    verdict = exclusion_verdict(OscillatorBath.single_mode(1.0), 4.0, 4.0 / 3.0, rhs)
    assert verdict.compatible
    assert all(r <= 0.0 for r in rhs)
    with pytest.raises(ParameterError):
        exclusion_verdict(OscillatorBath.single_mode(1.0), 4.0, 4.0 / 3.0, rhs[:-1])


def test_exclusion_rhs_switches_channel_order_below_half():
    map1, map2 = _fig3_maps()
    grid = TimeGrid(2.0 * math.pi, 64)
    # F_α(E₂, E₁) = F_{1−α}(E₁, E₂) for the dephasing closed form
    assert exclusion_rhs(map1, map2, 0.3, grid) == pytest.approx(exclusion_rhs(map1, map2, 0.7, grid), abs=1e-12)
    assert exclusion_rhs(map1, map2, 0.3, grid) != pytest.approx(exclusion_rhs(map2, map1, 0.3, grid), abs=1e-6)


def test_frequency_crossover():
    map1, map2 = _fig3_maps()
    grid = TimeGrid(2.0 * math.pi, 256)
    rhs = [exclusion_rhs(map1, map2, a, grid) for a in EXCLUSION_ALPHA_GRID]
    crossover = frequency_crossover(
        map1, map2, 4.0, 4.0 / 3.0, np.linspace(2.0, 5.0, 31), rhs_curve=rhs
    )
    assert crossover == pytest.approx(3.1, abs=0.05)
    for hypothesis, compatible in ((3.0, True), (3.25, False)):
        verdict = exclusion_verdict(OscillatorBath.single_mode(hypothesis), 4.0, 4.0 / 3.0, rhs)
        assert verdict.compatible is compatible
    high = exclusion_verdict(OscillatorBath.single_mode(crossover + 0.1), 4.0, 4.0 / 3.0, rhs)
    low = exclusion_verdict(OscillatorBath.single_mode(crossover - 0.1), 4.0, 4.0 / 3.0, rhs)
    assert not high.compatible
    assert low.compatible
    with pytest.raises(CrossoverNotFound):
        frequency_crossover(map1, map2, 4.0, 4.0 / 3.0, [1.0, 1.5, 2.0], rhs_curve=rhs)
    with pytest.raises(CrossoverNotFound):
        frequency_crossover(map1, map2, 4.0, 4.0 / 3.0, [4.0, 5.0], rhs_curve=rhs)


# ------------------------------------------------------------------
# Thermometry
# ------------------------------------------------------------------


def test_limiting_temperature():
    t_lim = limiting_temperature()
    assert 1.0 <= t_lim <= 1.1
    beta = 1.0 / t_lim
    assert abs(0.5 * beta + math.log(1.0 - math.exp(-beta))) <= 1e-11


def test_kl_thermometry_bounds():
    assert kl_thermometry_bounds(0.0) == (0.0, None)
    lower, upper = kl_thermometry_bounds(0.2)
    assert lower == pytest.approx(-1.0 / math.log(1.0 - math.exp(-0.2)))
    assert upper == pytest.approx(2.5)
    with pytest.raises(ParameterError):
        kl_thermometry_bounds(-0.1)
    with pytest.raises(ParameterError):
        kl_thermometry_bounds(math.inf)


def test_thermalized_probe_at_unit_temperature():
    probe = thermalized_probe_bounds(1.0)
    assert probe.excited_population == pytest.approx(0.268941, abs=1e-6)
    assert probe.bounds.lower == pytest.approx(0.76146, abs=1e-3)
    assert probe.bounds.upper == pytest.approx(1.59611, abs=1e-3)
    assert probe.bounds.upper_valid
    assert probe.limit_fidelity(0.5) == pytest.approx(math.sqrt(1.0 - probe.excited_population))
    assert not thermalized_probe_bounds(1.2).bounds.upper_valid
    with pytest.raises(ParameterError):
        thermalized_probe_bounds(0.0)


def test_thermalized_probe_sandwich():
    t_lim = limiting_temperature()
    for temperature in np.arange(0.01, t_lim, 0.001):
        bounds = thermalized_probe_bounds(float(temperature)).bounds
        assert bounds.lower <= temperature + 1e-9
        assert bounds.upper >= temperature - 1e-9


def test_thermometry_of_identical_maps():
    induced = jc_map(1.0, 1.0, 0.0)
    bounds = thermometry_bounds(induced, induced, grid=TimeGrid(10.0, 32), refine_probe=False)
    assert bounds.lower == 0.0
    assert bounds.upper is None
    assert not bounds.upper_valid
    assert bounds.best_alpha is None
    with pytest.raises(ParameterError):
        thermometry_bounds(induced, induced)


def test_thermometry_sandwiches_the_true_temperature():
    map0 = jc_map(1.0, 1.0, 0.0)
    grid = TimeGrid(10.0, 128)
    for temperature in np.linspace(0.075, 1.5, 20):
        bounds = thermometry_bounds(map0, jc_map(1.0, 1.0, float(temperature)), grid=grid, cfg=FAST)
        assert bounds.lower <= temperature + 1e-6
        assert (bounds.best_alpha is None) == (bounds.lower == 0.0)
        if bounds.upper_valid:
            assert bounds.upper >= temperature - 1e-6


def test_thermometry_reports_in_frequency_units():
    map0, map_t = jc_map(1.0, 2.0, 0.0), jc_map(1.0, 2.0, 1.0)
    grid = TimeGrid(10.0, 64)
    scaled = thermometry_bounds(map0, map_t, omega=2.0, grid=grid, refine_probe=False)
    plain = thermometry_bounds(map0, map_t, omega=1.0, grid=grid, refine_probe=False)
    assert scaled.lower == pytest.approx(2.0 * plain.lower)


# ------------------------------------------------------------------
# Loschmidt echo
# ------------------------------------------------------------------


def test_loschmidt_bounds_limits():
    assert loschmidt_bounds_from_fidelity(1.0, 0.3) == (0.3, 0.3)
    assert loschmidt_bounds_from_fidelity(0.0, 0.3) == (0.0, 1.0)
    with pytest.raises(EmptyIntervalError):
        loschmidt_bounds_from_fidelity(1.2, 0.3)
    with pytest.raises(ParameterError):
        loschmidt_bounds_from_fidelity(0.9, 1.5)


def test_loschmidt_bounds_match_a_grid_search():
    l_ref, fid = 0.5, 0.98
    x = math.sqrt(l_ref)
    y = np.linspace(0.0, 1.0, 1_000_001)
    h = 0.5 * np.sqrt((1.0 - x) * (1.0 - y)) + 0.5 * np.sqrt((1.0 + x) * (1.0 + y))
    feasible = y[h >= fid]
    lower, upper = loschmidt_bounds_from_fidelity(fid, l_ref)
    assert lower == pytest.approx(feasible.min() ** 2, abs=5e-6)
    assert upper == pytest.approx(feasible.max() ** 2, abs=5e-6)
    assert lower <= l_ref <= upper


def test_loschmidt_interval_contains_the_true_echo():
    chain = IsingChain(1.0, 0.9, 0.1, 8)
    reference = ExactEcho(chain)
    other_state = ising_ground_state(chain, field=0.95)
    other = ExactEcho(chain, other_state)
    fid = pure_state_fidelity(reference.state, other_state, 0.5)
    assert 0.9 < fid < 1.0
    for t in np.linspace(0.0, 5.0, 26):
        lower, upper = loschmidt_bounds_from_fidelity(fid, reference.echo(float(t)))
        echo = other.echo(float(t))
        assert lower - 1e-9 <= echo <= upper + 1e-9


def test_bound_curves_share_the_grid():
    chain = IsingChain(1.0, 0.01, 0.1, 400)
    times = np.linspace(0.0, 3.0, 61)
    reference, lower, upper = loschmidt_bound_curves(chain, 0.98, times)
    np.testing.assert_allclose(reference, loschmidt_ground(chain, times))
    assert np.all(lower <= reference + 1e-12)
    assert np.all(reference <= upper + 1e-12)


def test_detect_revival_synthetic():
    times = [0.0, 1.0, 2.0, 3.0]
    verdict = detect_revival(times, [1.0, 0.5, 0.7, 0.9], [0.0, 0.1, 0.4, 0.6])
    assert verdict.revival
    assert verdict.minimum_time == 1.0
    assert verdict.minimum_level == 0.5
    assert verdict.crossing_time == 3.0

    verdict = detect_revival(times, [1.0, 0.5, 0.7, 0.9], [0.0, 0.1, 0.4, 0.45])
    assert not verdict.revival
    assert verdict.minimum_time == 1.0

    assert not detect_revival(times, [0.4] * 4, [0.5] * 4).revival
    assert not detect_revival(times, [1.0, 0.9, 0.8, 0.7], [0.9, 0.8, 0.7, 0.6]).revival
    touching = [0.0, 0.1, 0.4, 0.5 + 2e-5]
    assert not detect_revival(times, [1.0, 0.5, 0.7, 0.9], touching).revival
    assert detect_revival(times, [1.0, 0.5, 0.7, 0.9], touching, margin=1e-5).revival
    with pytest.raises(ParameterError):
        detect_revival(times, [1.0], [0.0])


@pytest.mark.parametrize(
    "field, fid, expected",
    [(0.01, 0.98, True), (0.01, 0.966675, False), (1.8, 0.999, True), (1.8, 0.99761, False)],
)
def test_revival_verdicts_for_large_ring(field, fid, expected):
    chain = IsingChain(1.0, field, 0.1, 4000)
    times = np.linspace(0.0, 3.0, 601)
    _, lower, upper = loschmidt_bound_curves(chain, fid, times)
    verdict = detect_revival(times, upper, lower)
    assert verdict.revival is expected
    assert verdict.minimum_time is not None
