import mpmath as mp
import numpy as np
import pytest

from nsshare.linalg import effect_matrix
from nsshare.measurements import (
    alice_bob_setting,
    charlie_setting,
    gamma_sequence,
    validity_region,
)

from conftest import SX, SZ

# frozen from the recursion at delta=pi/4, epsilon=0.001 (cross-checked below
# against a 60-digit evaluation of the raw formula)
GAMMA_1 = 0.41462777593546814
GAMMA_2 = 0.91935445783192908
GAMMA_3 = 2.99841023752770529


def mp_gamma_sequence(delta, epsilon, n, variant="printed", dps=60):
    """Independent oracle: the recursion exactly as written, in mpmath."""
    with mp.workdps(dps):
        delta = mp.mpf(delta)
        epsilon = mp.mpf(epsilon)
        gammas = []
        sqrts = []
        for k in range(1, n + 1):
            prod = mp.mpf(1)
            for s in sqrts:
                prod *= 1 + s
            g = (1 + epsilon) * (2 ** (k - 1) - mp.cos(delta) * prod) / mp.sin(delta)
            if variant == "normalized":
                g /= 2 ** (k - 1)
            gammas.append(g)
            if not 0 <= g <= 1:
                break
            sqrts.append(mp.sqrt(1 - g * g))
        valid = 0
        for g in gammas:
            if 0 <= g <= 1:
                valid += 1
            else:
                break
        return [float(g) for g in gammas], valid


def test_alice_setting_input0():
    setting = alice_bob_setting("A", 0)
    assert np.allclose(setting.matrices()[0], np.diag([1.0, 0.0]))


def test_bob_setting_input1():
    setting = alice_bob_setting("B", 1)
    assert np.allclose(setting.matrices()[0], (np.eye(2) + SX) / 2)


def test_alice_bob_completeness():
    for party in ("A", "B"):
        for input_bit in (0, 1):
            m0, m1 = alice_bob_setting(party, input_bit).matrices()
            assert np.max(np.abs(m0 + m1 - np.eye(2))) < 1e-15


def test_alice_bob_rejects_charlie():
    with pytest.raises(ValueError):
        alice_bob_setting("C", 0)


def test_charlie_theta_zero_sharp():
    setting = charlie_setting(0.0, 1.0, 0)
    assert np.allclose(setting.matrices()[0], np.diag([1.0, 0.0]))


def test_charlie_unsharp_branch():
    setting = charlie_setting(np.pi / 4, 1.0, 1)
    expected = (np.eye(2) + (SZ + SX) / np.sqrt(2)) / 2
    assert np.max(np.abs(setting.matrices()[0] - expected)) < 1e-15


def test_charlie_fully_unsharp():
    setting = charlie_setting(np.pi / 4, 0.0, 1)
    assert np.allclose(setting.matrices()[0], np.eye(2) / 2)


def test_charlie_sharp_branch_ignores_gamma():
    # input 0 is projective regardless of the round's sharpness
    for gamma in (0.0, 0.3, 1.0):
        m = charlie_setting(0.7, gamma, 0).matrices()[0]
        vals = np.sort(np.linalg.eigvalsh(m))
        assert np.allclose(vals, [0.0, 1.0])


def test_charlie_rejects_bad_gamma():
    with pytest.raises(ValueError, match="gamma"):
        charlie_setting(np.pi / 4, 1.5, 1)


def test_charlie_completeness(rng):
    for _ in range(100):
        theta = rng.uniform(0, np.pi / 2)
        gamma = rng.uniform(0, 1)
        for z in (0, 1):
            m0, m1 = charlie_setting(theta, gamma, z).matrices()
            assert np.max(np.abs(m0 + m1 - np.eye(2))) < 1e-12


def test_setting_effects_match_effect_matrix():
    setting = charlie_setting(0.3, 0.5, 1)
    m0, m1 = setting.matrices()
    assert np.allclose(m0, effect_matrix(setting.effects[0]))
    assert np.allclose(m1, effect_matrix(setting.effects[1]))


def test_gamma_sequence_frozen_point():
    schedule = gamma_sequence(np.pi / 4, 0.001, 3)
    assert len(schedule.gammas) == 3
    assert abs(schedule.gammas[0] - GAMMA_1) < 1e-12
    assert abs(schedule.gammas[1] - GAMMA_2) < 1e-12
    assert abs(schedule.gammas[2] - GAMMA_3) < 1e-11
    assert schedule.valid_upto == 2


def test_gamma_sequence_stops_after_first_invalid():
    schedule = gamma_sequence(np.pi / 4, 0.001, 6)
    # gamma_3 leaves [0, 1]; nothing past it is computed
    assert len(schedule.gammas) == 3
    assert schedule.valid_upto == 2


def test_gamma1_closed_form_small_delta():
    schedule = gamma_sequence(0.05, 0.001, 1)
    assert abs(schedule.gammas[0] - 1.001 * np.tan(0.025)) < 1e-15


def test_gamma1_approaches_tan_pi_eighth():
    schedule = gamma_sequence(np.pi / 4, 1e-12, 1)
    assert abs(schedule.gammas[0] - np.tan(np.pi / 8)) < 1e-11


def test_gamma1_closed_form_random(rng):
    for _ in range(1000):
        delta = rng.uniform(1e-3, np.pi / 4)
        epsilon = rng.uniform(1e-6, 0.5)
        g1 = gamma_sequence(delta, epsilon, 1).gammas[0]
        reference = (1 + epsilon) * (1 - np.cos(delta)) / np.sin(delta)
        assert abs(g1 - reference) < 1e-12


def test_gamma_sequence_matches_highprecision_oracle():
    for delta in (np.pi / 4, 0.3, 0.01, 1e-4, 1e-8, 1e-12):
        ours = gamma_sequence(delta, 0.001, 8)
        ref_gammas, ref_valid = mp_gamma_sequence(delta, "0.001", 8)
        assert ours.valid_upto == ref_valid, delta
        assert len(ours.gammas) == len(ref_gammas), delta
        for mine, ref in zip(ours.gammas, ref_gammas):
            assert abs(mine - ref) <= 1e-13 * max(1.0, abs(ref)), delta


def test_gamma_sequence_normalized_variant():
    schedule = gamma_sequence(np.pi / 4, 0.001, 8, variant="normalized")
    assert schedule.valid_upto == 8
    ref_gammas, ref_valid = mp_gamma_sequence(np.pi / 4, "0.001", 8, variant="normalized")
    assert ref_valid == 8
    for mine, ref in zip(schedule.gammas, ref_gammas):
        assert abs(mine - ref) < 1e-13
    # both variants share gamma_1
    printed = gamma_sequence(np.pi / 4, 0.001, 1)
    assert abs(schedule.gammas[0] - printed.gammas[0]) < 1e-15


def test_gamma_sequence_validates_arguments():
    with pytest.raises(ValueError):
        gamma_sequence(0.0, 0.001, 1)
    with pytest.raises(ValueError):
        gamma_sequence(np.pi / 2, 0.001, 1)
    with pytest.raises(ValueError):
        gamma_sequence(0.3, 0.0, 1)
    with pytest.raises(ValueError):
        gamma_sequence(0.3, 0.001, 0)
    with pytest.raises(ValueError):
        gamma_sequence(0.3, 0.001, 1, variant="other")


def test_validity_region_endpoint_cases():
    assert validity_region(1, 0.001) == pytest.approx(np.pi / 4, abs=0)
    assert validity_region(2, 0.001) == pytest.approx(np.pi / 4, abs=0)


def test_validity_region_n3():
    delta = validity_region(3, 0.001)
    assert 0.28 < delta < np.pi / 4
    assert gamma_sequence(delta, 0.001, 3).valid_upto == 3
    # just past the boundary the schedule must fail
    assert gamma_sequence(min(delta + 1e-3, np.pi / 4), 0.001, 3).valid_upto < 3


def test_validity_region_nonincreasing_and_valid():
    previous = None
    for n in range(1, 9):
        delta = validity_region(n, 0.001)
        assert delta is not None and delta > 0
        schedule = gamma_sequence(delta, 0.001, n)
        assert schedule.valid_upto >= n
        assert all(0.0 <= g <= 1.0 for g in schedule.gammas[:n])
        if previous is not None:
            assert delta <= previous + 1e-6
        previous = delta


def test_validity_region_tiny_deltas_verified_by_mp():
    # the deep end of the search: deltas near 1e-18 and 1e-37 remain valid
    # under a 120-digit evaluation of the raw recursion
    for n in (6, 7, 8):
        delta = validity_region(n, 0.001)
        assert delta is not None and 0 < delta < 1e-6
        _, valid = mp_gamma_sequence(delta, "0.001", n, dps=120)
        assert valid >= n


def test_validity_region_normalized_variant():
    for n in (1, 4, 8):
        assert validity_region(n, 0.001, variant="normalized") == pytest.approx(np.pi / 4, abs=0)
