from __future__ import annotations

from mpmath import mp, mpc, mpf
import pytest

from siegel_volume.errors import DomainError
from siegel_volume.theta import (
    Characteristic,
    SiegelPoint1,
    SiegelPoint2,
    even_characteristics,
    theta1,
    theta2,
    theta2_dx1,
    theta_table,
    truncation_radius,
)

GENERIC = SiegelPoint2(mpf("0.13"), mpf("-0.21"), mpf("0.34"), mpf("1.1"), mpf("0.25"), mpf("1.3"))


def _close(a, b, tol=mpf(10) ** -24):
    return abs(a - b) <= tol * max(1, abs(b))


def test_characteristic_parsing():
    ch = Characteristic.parse("0110")
    assert ch.a == (0, 1)
    assert ch.b == (1, 0)
    assert ch.label == "0110"
    assert ch.is_even
    assert Characteristic.parse("1111").is_even
    assert not Characteristic.parse("1010").is_even
    with pytest.raises(DomainError):
        Characteristic.parse("012")


def test_even_characteristic_counts():
    assert len(even_characteristics(1)) == 3
    labels = [ch.label for ch in even_characteristics(2)]
    assert labels == ["0000", "0001", "0010", "0011", "0100", "0110", "1000", "1001", "1100", "1111"]


def test_point_validation():
    with pytest.raises(DomainError):
        SiegelPoint1(0, 0)
    with pytest.raises(DomainError):
        SiegelPoint2(0, 0, 0, 1, 1, 1)


def test_truncation_radius_grows_as_eigenvalue_shrinks():
    assert truncation_radius(0.2, 1e-20) > truncation_radius(1.0, 1e-20)
    assert truncation_radius(1.0, 1e-20, derivative=True) >= truncation_radius(1.0, 1e-20)
    with pytest.raises(DomainError):
        truncation_radius(0.0, 1e-20)
    with pytest.raises(DomainError):
        truncation_radius(1e-9, 1e-40)


def test_theta1_jacobi_identity(cfg):
    tau = SiegelPoint1(mpf("0.2"), mpf("0.9"))
    t00, t01, t10 = (theta1(ch, tau, cfg) for ch in even_characteristics(1))
    with cfg.workdps():
        assert _close(t00**4, t01**4 + t10**4)


def test_odd_characteristics_vanish(cfg):
    for label in ("1010", "0101", "1011", "1101", "1110", "0111"):
        assert theta2(Characteristic.parse(label), GENERIC, cfg) == 0
    assert theta1(Characteristic.parse("11"), SiegelPoint1(0, 1), cfg) == 0


def test_diagonal_factorization(cfg):
    tau = SiegelPoint2.diagonal(mpc("0.1", "1.2"), mpc("-0.3", "0.95"))
    for ch in even_characteristics(2):
        product = theta2(ch, tau, cfg)
        summed = theta2(ch, tau, cfg, radius=12)
        with cfg.workdps():
            assert abs(product - summed) < mpf(10) ** -24


def test_theta_1111_vanishes_on_diagonal(cfg):
    tau = SiegelPoint2.diagonal(mpc("0.1", "1.2"), mpc("-0.3", "0.95"))
    assert theta_table(tau, cfg)[Characteristic.parse("1111")] == 0


def test_table_matches_individual_evaluation(cfg):
    table = theta_table(GENERIC, cfg)
    for ch in even_characteristics(2):
        with cfg.workdps():
            assert _close(table[ch], theta2(ch, GENERIC, cfg))


@pytest.mark.parametrize(
    ("shift", "phase"),
    [((2, 0, 0), lambda ch: mpc(0, 1) ** ch.a[0]), ((0, 0, 2), lambda ch: mpc(0, 1) ** ch.a[1])],
)
def test_periodicity_up_to_phase(cfg, shift, phase):
    moved = theta_table(GENERIC.translated(*shift), cfg)
    base = theta_table(GENERIC, cfg)
    for ch in even_characteristics(2):
        with cfg.workdps():
            assert _close(moved[ch], phase(ch) * base[ch])


def test_off_diagonal_periodicity(cfg):
    moved = theta_table(GENERIC.translated(0, 2, 0), cfg)
    base = theta_table(GENERIC, cfg)
    for ch in even_characteristics(2):
        sign = (-1) ** (ch.a[0] * ch.a[1])
        with cfg.workdps():
            assert _close(moved[ch], sign * base[ch])


def test_translation_is_exact_outside_working_precision(cfg):
    with cfg.workdps():
        tau = SiegelPoint2(
            mpf("0.1234567890123456789012345678"), mpf("-0.21"), mpf("0.34"), mpf("1.1"), mpf("0.25"), mpf("1.3")
        )
    back = tau.translated(2, -1, 3).translated(-2, 1, -3)
    assert (back.x1, back.x12, back.x2) == (tau.x1, tau.x12, tau.x2)


def test_dx1_matches_finite_difference(cfg):
    ch = Characteristic.parse("1000")
    with cfg.workdps():
        h = mpf(10) ** -12
        plus = theta2(ch, GENERIC, cfg, radius=12)
        shifted = SiegelPoint2(GENERIC.x1 + h, GENERIC.x12, GENERIC.x2, GENERIC.y1, GENERIC.y12, GENERIC.y2)
        numeric = (theta2(ch, shifted, cfg, radius=12) - plus) / h
        exact = theta2_dx1(ch, GENERIC, cfg)
        assert abs(numeric - exact) < mpf(10) ** -9 * max(1, abs(exact))


def test_mp_precision_restored(cfg):
    before = mp.dps
    theta_table(GENERIC, cfg)
    assert mp.dps == before
