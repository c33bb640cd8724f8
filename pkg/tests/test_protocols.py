"""Tests for the bomb/mine, repeated, Zeno and cavity protocols."""

import math

import numpy as np
import pytest

from ifmlab.core import EXPLOSION, OutcomeDistribution
from ifmlab.errors import DegenerateNetworkError, DomainError
from ifmlab.networks import D1, D2
from ifmlab.protocols import (
    ABSORBED,
    LEFT,
    OBJECT,
    RIGHT,
    SAFE,
    UNDECIDED,
    CavityConfig,
    ZenoConfig,
    efficiency,
    ev_mine_test,
    penrose_bomb_test,
    reflectivity_for_efficiency,
    repeated_ev,
    repeated_ev_rounds,
    xray_cavity,
    xray_protocol,
    zeno_ifm,
)


def enumerate_rounds(R, depth):
    """Explicit round-by-round bookkeeping of the repeated mine test."""
    p_d2, p_expl, p_d1 = R * (1 - R), R, (1 - R) ** 2
    success = fail = rounds = 0.0
    alive = 1.0
    for k in range(1, depth + 1):
        success += alive * p_d2
        fail += alive * p_expl
        rounds += k * alive * (p_d2 + p_expl)
        alive *= p_d1
    return success, fail, rounds


class TestEfficiency:
    def test_good_bomb(self):
        assert efficiency(OutcomeDistribution({D2: 0.25, EXPLOSION: 0.5, D1: 0.25}), D2, EXPLOSION) == pytest.approx(1 / 3)

    def test_no_failures(self):
        assert efficiency(OutcomeDistribution({D2: 0.25, D1: 0.75}), D2, EXPLOSION) == 1.0

    def test_neither_outcome(self):
        assert efficiency(OutcomeDistribution({D1: 1.0}), D2, EXPLOSION) == 0.0

    def test_numerically_zero_success(self):
        assert efficiency(OutcomeDistribution({D2: 5e-13, D1: 1.0 - 5e-13}), D2, EXPLOSION) == 0.0

    def test_small_success_above_tolerance(self):
        assert efficiency(OutcomeDistribution({D2: 2e-12, D1: 1.0 - 2e-12}), D2, EXPLOSION) == 1.0


class TestMineTest:
    def test_symmetric_good_bomb(self):
        out = ev_mine_test(0.5, object_present=True)
        assert out[EXPLOSION] == pytest.approx(0.5, abs=1e-12)
        assert out[D1] == pytest.approx(0.25, abs=1e-12)
        assert out[D2] == pytest.approx(0.25, abs=1e-12)
        assert out.efficiency == pytest.approx(1 / 3, abs=1e-12)
        assert out.single_shot_efficiency == pytest.approx(0.25, abs=1e-12)

    def test_symmetric_dud(self):
        out = ev_mine_test(0.5, object_present=False)
        assert out[D1] == pytest.approx(1.0, abs=1e-12)
        assert out[D2] <= 1e-12
        assert out.efficiency == 0.0

    def test_quarter_reflectivity(self):
        out = ev_mine_test(0.25, object_present=True)
        assert out[EXPLOSION] == pytest.approx(0.25, abs=1e-12)
        assert out[D2] == pytest.approx(0.1875, abs=1e-12)
        assert out[D1] == pytest.approx(0.5625, abs=1e-12)

    def test_closed_form(self):
        rng = np.random.default_rng(100)
        for R in rng.uniform(1e-6, 1 - 1e-6, size=100):
            out = ev_mine_test(float(R))
            assert out[EXPLOSION] == pytest.approx(R, abs=1e-12)
            assert out[D2] == pytest.approx(R * (1 - R), abs=1e-12)
            assert out[D1] == pytest.approx((1 - R) ** 2, abs=1e-12)

    def test_dud_never_reaches_dark_port(self):
        for R in np.linspace(0.01, 0.99, 99):
            assert ev_mine_test(float(R), object_present=False)[D2] <= 1e-12

    def test_efficiency_invariant(self):
        for R in (0.1, 0.3, 0.5, 0.8):
            out = ev_mine_test(R)
            assert out.efficiency == pytest.approx(out[D2] / (out[D2] + out[EXPLOSION]), abs=1e-15)

    @pytest.mark.parametrize("R", [0.0, 1.0])
    def test_degenerate(self, R):
        with pytest.raises(DegenerateNetworkError):
            ev_mine_test(R)

    def test_out_of_range(self):
        with pytest.raises(DomainError):
            ev_mine_test(2.0)

    def test_penrose_is_the_symmetric_mine_test(self):
        for present in (True, False):
            assert penrose_bomb_test(present).distribution == ev_mine_test(0.5, present).distribution


class TestRepeated:
    @pytest.mark.parametrize("R, eta", [(0.5, 1 / 3), (0.25, 0.75 / 1.75), (0.1, 0.9 / 1.9), (0.01, 0.99 / 1.99)])
    def test_efficiency(self, R, eta):
        out = repeated_ev(R)
        assert out.efficiency == pytest.approx(eta, abs=1e-12)
        assert out[D2] == pytest.approx(eta, abs=1e-12)
        assert out[EXPLOSION] == pytest.approx(1 - eta, abs=1e-12)

    @pytest.mark.parametrize("R", [0.5, 0.1])
    def test_matches_round_enumeration(self, R):
        success, fail, _ = enumerate_rounds(R, depth=64)
        assert repeated_ev(R).efficiency == pytest.approx(success / (success + fail), abs=1e-12)

    def test_rounds_expected(self):
        _, _, rounds = enumerate_rounds(0.5, depth=2000)
        assert repeated_ev(0.5).rounds_expected == pytest.approx(4 / 3, abs=1e-12)
        assert rounds == pytest.approx(4 / 3, abs=1e-12)

    def test_approaches_one_half(self):
        etas = [repeated_ev(10.0 ** -k).efficiency for k in range(1, 7)]
        assert all(a < b for a, b in zip(etas, etas[1:]))
        assert all(e < 0.5 for e in etas)
        assert 0.4999985 <= etas[-1] < 0.5

    def test_strictly_decreasing_in_R(self):
        etas = [repeated_ev(float(R)).efficiency for R in np.linspace(0.001, 0.999, 999)]
        assert all(a > b for a, b in zip(etas, etas[1:]))
        assert max(etas) < 0.5

    def test_truncated_rounds_converge(self):
        short = repeated_ev_rounds(0.5, 1)
        assert short.as_dict() == pytest.approx({D2: 0.25, EXPLOSION: 0.5, UNDECIDED: 0.25}, abs=1e-12)
        long = repeated_ev_rounds(0.5, 60)
        assert long[D2] == pytest.approx(1 / 3, abs=1e-12)
        assert long[UNDECIDED] < 1e-30

    def test_zero_rounds(self):
        assert repeated_ev_rounds(0.3, 0)[UNDECIDED] == 1.0

    @pytest.mark.parametrize("eta", [0.1, 1 / 3, 0.45, 0.499])
    def test_reflectivity_for_efficiency(self, eta):
        assert repeated_ev(reflectivity_for_efficiency(eta)).efficiency == pytest.approx(eta, abs=1e-12)

    def test_reflectivity_for_unreachable_efficiency(self):
        with pytest.raises(DomainError):
            reflectivity_for_efficiency(0.5)


class TestZeno:
    def test_single_stage_always_explodes(self):
        out = zeno_ifm(ZenoConfig(1, object_present=True))
        assert out[EXPLOSION] == pytest.approx(1.0, abs=1e-12)
        assert out[SAFE] == pytest.approx(0.0, abs=1e-12)
        assert out.efficiency == pytest.approx(0.0, abs=1e-12)

    def test_ten_stages(self):
        out = zeno_ifm(ZenoConfig(10))
        assert out[SAFE] == pytest.approx(math.cos(math.pi / 20) ** 20, abs=1e-12)
        assert out[SAFE] == pytest.approx(0.7805, abs=1e-4)

    def test_thousand_stages(self):
        out = zeno_ifm(ZenoConfig(1000))
        assert out[SAFE] >= 0.997
        assert out.efficiency >= 0.997

    def test_strictly_increasing_and_matches_closed_form(self):
        previous = -1.0
        for n in range(1, 1001):
            success = zeno_ifm(ZenoConfig(n))[SAFE]
            assert success == pytest.approx(math.cos(math.pi / (2 * n)) ** (2 * n), abs=1e-10)
            assert previous < success <= 1.0
            previous = success

    @pytest.mark.parametrize("n", [1, 2, 10, 1000])
    def test_object_absent(self, n):
        out = zeno_ifm(ZenoConfig(n, object_present=False))
        assert out[OBJECT] == pytest.approx(1.0, abs=1e-12)
        assert out[EXPLOSION] == 0.0
        assert out.efficiency == 0.0

    @pytest.mark.parametrize("n", [0, -3, 2.5, True])
    def test_bad_cycles(self, n):
        with pytest.raises(DomainError):
            ZenoConfig(n)


class TestXrayCavity:
    def test_no_absorber_transfers_right(self):
        dist = xray_cavity(CavityConfig(0.001, 50, absorber_present=False))
        theta = math.asin(math.sqrt(0.001))
        assert dist[RIGHT] == pytest.approx(math.sin(50 * theta) ** 2, abs=1e-12)
        assert dist[RIGHT] >= 0.999

    def test_absorber_keeps_photon_left(self):
        dist = xray_cavity(CavityConfig(0.001, 50, absorber_present=True))
        assert dist[LEFT] == pytest.approx(0.999 ** 50, abs=1e-12)
        assert 0.949 <= dist[LEFT] <= 0.953
        assert 0.047 <= dist[ABSORBED] <= 0.051
        assert dist[RIGHT] == 0.0

    def test_zero_bounces(self):
        assert xray_cavity(CavityConfig(0.001, 0)).as_dict() == {ABSORBED: 0.0, LEFT: 1.0, RIGHT: 0.0}

    @pytest.mark.parametrize("n", [1, 50, 1000])
    def test_decoupled_modes(self, n):
        assert xray_cavity(CavityConfig(1e-18, n, absorber_present=False))[LEFT] == pytest.approx(1.0, abs=1e-9)

    def test_half_transfer(self):
        assert xray_cavity(CavityConfig(0.001, 25, absorber_present=False))[RIGHT] == pytest.approx(0.5, abs=0.01)

    def test_sums_to_one(self):
        for c in (1e-6, 1e-3, 0.1, 0.5, 0.9):
            for n in (0, 1, 7, 50, 300):
                for absorber in (True, False):
                    dist = xray_cavity(CavityConfig(c, n, absorber))
                    assert sum(dist.probs.values()) == pytest.approx(1.0, abs=1e-12)

    @pytest.mark.parametrize("c, n", [(1e-4, 1), (1e-4, 10), (1e-4, 100), (1e-4, 500), (1e-5, 2000)])
    def test_absorbed_fraction_is_linear_for_weak_coupling(self, c, n):
        absorbed = xray_cavity(CavityConfig(c, n, absorber_present=True))[ABSORBED]
        assert absorbed == pytest.approx(n * c, rel=0.1)

    def test_protocol_scores_left_as_detection(self):
        out = xray_protocol(CavityConfig())
        assert out.success_label == LEFT
        assert out.efficiency == pytest.approx(0.999 ** 50, abs=1e-12)

    @pytest.mark.parametrize("kwargs", [
        {"coupler_transmission": 0.0},
        {"coupler_transmission": 1.0},
        {"bounces": -1},
        {"bounces": 2.0},
    ])
    def test_bad_config(self, kwargs):
        with pytest.raises(DomainError):
            CavityConfig(**kwargs)
