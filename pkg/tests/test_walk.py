import numpy as np
import pytest

from qwcomplexity import evolve, initial_state, probability_distribution, step


def amplitude(state, which, x):
    arr = state.A if which == "A" else state.B
    return arr[x + state.t]


def test_initial_state_amplitudes():
    s = initial_state(np.pi / 4)
    assert amplitude(s, "A", 0) == pytest.approx(1 / np.sqrt(2))
    assert amplitude(s, "B", 0) == pytest.approx(1j / np.sqrt(2))
    assert s.norm() == pytest.approx(1.0, abs=1e-12)


def test_theta_normalised_mod_two_pi():
    assert initial_state(np.pi / 4 + 2 * np.pi).theta == pytest.approx(np.pi / 4)


def test_single_step_hand_computed():
    s = step(initial_state(np.pi / 4))
    assert amplitude(s, "A", 1) == pytest.approx((1 + 1j) / 2)
    assert amplitude(s, "B", -1) == pytest.approx((-1 + 1j) / 2)


def test_identity_coin_translates():
    s = initial_state(0.0)
    a0, b0 = s.A[0], s.B[0]
    for t in range(1, 6):
        s = step(s)
        assert amplitude(s, "A", t) == pytest.approx(a0)
        assert amplitude(s, "B", -t) == pytest.approx(b0)


def test_step_preserves_norm():
    s = initial_state(1.1)
    for _ in range(20):
        s = step(s)
        assert s.norm() == pytest.approx(1.0, abs=1e-12)


def test_evolve_lengths_and_final_time():
    states = evolve(np.pi / 4, 7)
    assert len(states) == 8
    assert states[-1].t == 7
    assert states[0].t == 0


def test_evolve_zero_steps():
    states = evolve(np.pi / 4, 0)
    assert len(states) == 1


def test_evolve_rejects_negative():
    with pytest.raises(ValueError):
        evolve(np.pi / 4, -1)


def test_distribution_t1_half_half():
    dist = probability_distribution(evolve(np.pi / 4, 1)[-1])
    assert dist.p[dist.x == 1] == pytest.approx(0.5)
    assert dist.p[dist.x == -1] == pytest.approx(0.5)


def test_distribution_t0_is_delta():
    dist = probability_distribution(initial_state(0.3))
    assert dist.p[0] == pytest.approx(1.0)


def test_identity_coin_ballistic_split():
    dist = probability_distribution(evolve(0.0, 5)[-1])
    assert dist.p[dist.x == 5] == pytest.approx(0.5)
    assert dist.p[dist.x == -5] == pytest.approx(0.5)


def test_distribution_sums_to_one():
    for theta in (0.0, np.pi / 8, np.pi / 4, 2 * np.pi / 3):
        dist = probability_distribution(evolve(theta, 25)[-1])
        assert np.all(dist.p >= 0)
        assert dist.p.sum() == pytest.approx(1.0, abs=1e-12)


def test_norm_conserved_100_steps():
    s = initial_state(np.pi / 4)
    for _ in range(100):
        s = step(s)
    assert abs(s.norm() - 1.0) <= 1e-12


def test_parity_support():
    for t, s in enumerate(evolve(np.pi / 4, 11)):
        dist = probability_distribution(s)
        occupied = dist.x[dist.p > 1e-14]
        assert np.all((occupied + t) % 2 == 0)


def test_symmetric_distribution_at_pi_over_4():
    for s in evolve(np.pi / 4, 30):
        dist = probability_distribution(s)
        assert np.abs(dist.p - dist.p[::-1]).max() <= 1e-10


def test_ballistic_support_edge():
    for theta in (0.1, np.pi / 4, 2 * np.pi / 3):
        s = evolve(theta, 12)[-1]
        dist = probability_distribution(s)
        assert max(abs(dist.x[dist.p > 0])) == 12
