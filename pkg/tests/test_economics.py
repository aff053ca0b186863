import pytest

from forkbench import economics as e
from forkbench.errors import RangeError
from forkbench.model import PowerSplit

NET = e.NetworkParams(difficulty=31.25e12)


class TestNetworkParams:
    def test_validation(self):
        with pytest.raises(RangeError):
            e.NetworkParams(difficulty=0.0)
        with pytest.raises(RangeError):
            e.NetworkParams(difficulty=1.0, t_avg=0.0)
        with pytest.raises(RangeError):
            e.NetworkParams(difficulty=1.0, p_e=1.0)


class TestHashrate:
    def test_value(self):
        assert e.hashrate_from_difficulty(NET) == pytest.approx(2.237e20, rel=1e-3)

    def test_linear_in_difficulty(self):
        doubled = e.NetworkParams(difficulty=2 * 31.25e12)
        assert e.hashrate_from_difficulty(doubled) == pytest.approx(
            2.0 * e.hashrate_from_difficulty(NET), rel=1e-12
        )


class TestSecretSearch:
    def test_eight_bytes_one_percent(self):
        assert e.secret_search_time(8, 0.01, NET) == pytest.approx(8.246, rel=1e-3)

    def test_each_byte_multiplies_by_256(self):
        assert e.secret_search_time(9, 0.01, NET) == pytest.approx(
            256.0 * e.secret_search_time(8, 0.01, NET), rel=1e-12
        )

    @pytest.mark.parametrize("b", range(1, 17))
    @pytest.mark.parametrize("fr", [0.001, 0.01, 0.1, 1.0])
    def test_round_trip(self, b, fr):
        t = e.secret_search_time(b, fr, NET)
        assert e.required_hidden_bytes(t, fr, NET) == pytest.approx(b, abs=1e-9)

    def test_required_bytes_monotone(self):
        b1 = e.required_hidden_bytes(10.0, 0.01, NET)
        b2 = e.required_hidden_bytes(1000.0, 0.01, NET)
        assert b2 > b1

    def test_validation(self):
        with pytest.raises(RangeError):
            e.secret_search_time(0, 0.01, NET)
        with pytest.raises(RangeError):
            e.secret_search_time(8, 0.0, NET)
        with pytest.raises(RangeError):
            e.required_hidden_bytes(0.0, 0.01, NET)


class TestFindProbability:
    def test_one_interval_full_power(self):
        assert e.find_probability(600.0, 1.0, NET) == pytest.approx(0.64, abs=1e-15)

    def test_zero_time(self):
        assert e.find_probability(0.0, 0.3, NET) == 0.0

    def test_limit_is_alpha_e(self):
        assert e.find_probability(1e9, 0.3, NET) == pytest.approx(0.3, abs=1e-9)

    def test_monotone_in_time_linear_in_alpha(self):
        times = [0.0, 100.0, 600.0, 3600.0]
        probs = [e.find_probability(t, 1.0, NET) for t in times]
        assert all(p2 >= p1 for p1, p2 in zip(probs, probs[1:]))
        assert e.find_probability(600.0, 0.5, NET) == pytest.approx(0.32, abs=1e-15)


class TestDosViability:
    def test_small_attack_not_viable(self):
        s = e.DosScenario(100, 600.0, PowerSplit.from_attack(0.2, 0.0))
        v = e.dos_viability(s, NET)
        assert not v.viable
        assert v.expected_blocks == pytest.approx(0.2)
        assert v.threshold == 101.0

    def test_long_challenge_viable(self):
        s = e.DosScenario(1, 60 * 600.0, PowerSplit.from_attack(0.4, 0.0))
        assert e.dos_viability(s, NET).viable

    def test_monotone_in_challenge_period(self):
        flags = [
            e.dos_viability(
                e.DosScenario(5, tc, PowerSplit.from_attack(0.3, 0.0)), NET
            ).viable
            for tc in (600.0, 6000.0, 60000.0, 600000.0)
        ]
        assert flags == sorted(flags)  # false ... true, flips at most once

    def test_validation(self):
        with pytest.raises(RangeError):
            e.DosScenario(0, 600.0, PowerSplit.from_attack(0.2, 0.0))
        with pytest.raises(RangeError):
            e.DosScenario(1, 0.0, PowerSplit.from_attack(0.2, 0.0))
