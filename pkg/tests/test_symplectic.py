from __future__ import annotations

from mpmath import mp, mpc, mpf
import pytest

from siegel_volume.checks import reduction_roundtrip_suite
from siegel_volume.errors import DomainError
from siegel_volume.symplectic import (
    ReductionResult1,
    SymplecticMatrix,
    act,
    act1,
    cocycle,
    complete_pair,
    default_candidate_set,
    generators,
    is_reduced1,
    is_reduced2,
    load_candidate_set,
    minkowski_reduce_y,
    pair_key,
    parse_candidate_rows,
    random_word,
    reduce1,
    reduce2,
)
from siegel_volume.theta import SiegelPoint1, SiegelPoint2


def test_generators_are_symplectic_and_invertible():
    ident = SymplecticMatrix.identity()
    for m in generators():
        assert m @ m.inverse() == ident
        assert m.inverse() @ m == ident


def test_non_symplectic_matrix_rejected():
    with pytest.raises(DomainError):
        SymplecticMatrix(((1, 1), (0, 2)))
    with pytest.raises(DomainError):
        SymplecticMatrix.rotation(((2, 0), (0, 1)))


def test_candidate_set_covers_bounded_pairs():
    cands = default_candidate_set()
    keys = [pair_key(m.c, m.d) for m in cands]
    assert len(set(keys)) == len(keys)
    for m in cands:
        assert m.c != ((0, 0), (0, 0))
        assert all(abs(v) <= 2 for row in (*m.c, *m.d) for v in row)
    assert pair_key(((1, 0), (0, 1)), ((0, 0), (0, 0))) in keys
    assert pair_key(((1, -1), (-1, 1)), ((1, 0), (0, 1))) in keys
    assert any(m.c[0][1] for m in cands)
    assert len(cands) > 135


def test_pair_key_ignores_row_operations():
    c, d = ((1, -1), (-1, 1)), ((1, 0), (0, 1))
    # rows mixed by [[1, 1], [0, 1]]
    assert pair_key(((0, 0), (-1, 1)), ((1, 1), (0, 1))) == pair_key(c, d)
    with pytest.raises(DomainError):
        pair_key(((1, 1), (1, 1)), ((0, 0), (0, 0)))


def test_complete_pair_keeps_lower_blocks():
    c, d = ((2, 1), (1, 1)), ((0, 1), (1, -1))
    m = complete_pair(c, d)
    assert (m.c, m.d) == (c, d)
    with pytest.raises(DomainError):
        complete_pair(((1, 0), (0, 0)), ((0, 1), (0, 0)))


def test_reduce1_inversion(cfg):
    with cfg.workdps():
        start = SiegelPoint1(0, mpf("0.2"))
    result = reduce1(start, cfg)
    assert isinstance(result, ReductionResult1)
    with cfg.workdps():
        assert abs(result.point.tau - mpc(0, 5)) < mpf(10) ** -25
        image, _ = act1(result.transformation, start, cfg)
        assert abs(image.tau - result.point.tau) < mpf(10) ** -25
    assert is_reduced1(result.point)


def test_reduce1_closed_left_wall(cfg):
    result = reduce1(SiegelPoint1(mpf("0.5"), mpf("1.5")), cfg)
    with cfg.workdps():
        assert result.point.x == mpf("-0.5")
    unit = reduce1(SiegelPoint1.from_complex(mp.expjpi(mpf(1) / 3)), cfg)
    assert unit.point.x <= 0


def test_reduce1_random_points(cfg, rng):
    for _ in range(20):
        tau = SiegelPoint1(rng.uniform(-3, 3), rng.uniform(0.01, 2))
        result = reduce1(tau, cfg)
        assert is_reduced1(result.point)


def test_minkowski_reduce_y():
    (y1, y12, y2), u = minkowski_reduce_y((mpf(5), mpf(3), mpf(2)))
    assert y1 <= y2
    assert 0 <= 2 * y12 <= y1
    assert y1 * y2 - y12**2 == mpf(5 * 2 - 9)
    det = u[0][0] * u[1][1] - u[0][1] * u[1][0]
    assert det in {1, -1}
    with pytest.raises(DomainError):
        minkowski_reduce_y((mpf(1), mpf(2), mpf(1)))


def test_act_composition(cfg, rng):
    tau = SiegelPoint2(mpf("0.1"), mpf("0.2"), mpf("-0.1"), mpf("1.1"), mpf("0.3"), mpf("0.9"))
    a = random_word(rng, 3)
    b = random_word(rng, 3)
    step, det_b = act(b, tau, cfg)
    twice, det_a = act(a, step, cfg)
    once, det_ab = act(a @ b, tau, cfg)
    with cfg.workdps():
        assert mp.mnorm(twice.matrix() - once.matrix(), 1) < mpf(10) ** -20
        assert abs(det_a * det_b - det_ab) < mpf(10) ** -20 * abs(det_ab)


def test_cocycle_composes_on_long_words(cfg, rng):
    tau = SiegelPoint2(mpf("0.13"), mpf("-0.21"), mpf("0.34"), mpf("0.8"), mpf("0.15"), mpf("1.3"))
    for _ in range(5):
        a = random_word(rng, 6)
        b = random_word(rng, 6)
        step, _ = act(b, tau, cfg)
        with cfg.workdps():
            product_of_factors = cocycle(a, step, cfg) * cocycle(b, tau, cfg)
            assert abs(product_of_factors - cocycle(a @ b, tau, cfg)) < mpf(10) ** -18 * abs(product_of_factors)


def test_degree1_words_compose(cfg, rng):
    tau = SiegelPoint1(mpf("0.3"), mpf("1.7"))
    for _ in range(5):
        a = random_word(rng, 6, g=1)
        b = random_word(rng, 6, g=1)
        step, jb = act1(b, tau, cfg)
        twice, ja = act1(a, step, cfg)
        once, jab = act1(a @ b, tau, cfg)
        with cfg.workdps():
            assert abs(twice.tau - once.tau) < mpf(10) ** -18 * abs(once.tau)
            assert abs(ja * jb - jab) < mpf(10) ** -18 * abs(jab)


def test_reduce2_det_y_never_decreases(cfg):
    tau = SiegelPoint2(mpf("0.4"), mpf("0.1"), mpf("-0.3"), mpf("0.35"), mpf("0.05"), mpf("0.5"))
    result = reduce2(tau, cfg)
    history = result.det_y_history
    assert len(history) == result.steps
    with cfg.workdps():
        assert abs(history[0] - tau.det_y) < mpf(10) ** -20
        for before, after in zip(history, history[1:]):
            assert after > before
        assert abs(history[-1] - result.point.det_y) < mpf(10) ** -20


def test_reduce2_reaches_reduced_point(cfg, rng):
    tau = SiegelPoint2(mpf("0.4"), mpf("0.1"), mpf("-0.3"), mpf("0.35"), mpf("0.05"), mpf("0.5"))
    result = reduce2(tau, cfg)
    assert is_reduced2(result.point, cfg)
    assert result.point.det_y >= tau.det_y
    image, _ = act(result.transformation, tau, cfg)
    with cfg.workdps():
        assert mp.mnorm(image.matrix() - result.point.matrix(), 1) < mpf(10) ** -20


@pytest.mark.slow
def test_reduce2_is_stable_under_the_group(cfg, rng):
    tau = SiegelPoint2(mpf("0.11"), mpf("0.07"), mpf("-0.23"), mpf("1.2"), mpf("0.31"), mpf("1.4"))
    base = reduce2(tau, cfg).point
    for _ in range(3):
        image, _ = act(random_word(rng, 6), tau, cfg)
        again = reduce2(image, cfg).point
        with cfg.workdps():
            assert mp.mnorm(again.matrix() - base.matrix(), 1) < mpf(10) ** -9


@pytest.mark.slow
def test_reduction_round_trip_on_long_words(cfg):
    result = reduction_roundtrip_suite(cfg, n=3, word_length=6)
    assert result.require().passed


def test_parse_candidate_rows():
    ident = " ".join(str(v) for v in SymplecticMatrix.j().flat())
    parsed = parse_candidate_rows(["# header", "", ident + "  # J"])
    assert parsed == (SymplecticMatrix.j(),)
    with pytest.raises(DomainError, match="expected 16 integers"):
        parse_candidate_rows(["1 0 0 1"])
    with pytest.raises(DomainError, match=":1:"):
        parse_candidate_rows(["1 1 0 0 0 1 0 0 0 0 1 0 0 0 0 2"])
    with pytest.raises(DomainError, match="empty"):
        parse_candidate_rows(["# nothing"])


def test_load_candidate_set(tmp_path):
    path = tmp_path / "candidates.txt"
    path.write_text(" ".join(str(v) for v in SymplecticMatrix.j().flat()) + "\n", encoding="utf-8")
    assert load_candidate_set(path) == (SymplecticMatrix.j(),)
