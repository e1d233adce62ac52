from __future__ import annotations

from fractions import Fraction

from mpmath import mp, mpc, mpf
import pytest

from siegel_volume.checks import (
    boundary_suite,
    delta_routes_suite,
    igusa_relation_suite,
    norm_invariance_suite,
    splitting_suite,
)
from siegel_volume.errors import CalibrationError, DomainError
from siegel_volume.forms import (
    CHI10_2,
    CHI12_2,
    DELTA_1,
    E4_1,
    E4_2,
    E6_1,
    E6_2,
    EllipticPoint,
    FormName,
    FormSpec,
    TripleSystem,
    eisenstein_q_coefficients,
    elliptic_vanishing_order,
    enumerate_syzygous_quadruples,
    enumerate_syzygous_triples,
    eval_form,
    fourier_coefficients,
    load_sign_table,
    log_petersson_norm_float,
    measure_splitting_constant,
    petersson_norm,
    save_sign_table,
)
from siegel_volume.symplectic import SymplecticMatrix, act1
from siegel_volume.theta import SiegelPoint1, SiegelPoint2

DIAG = SiegelPoint2.diagonal(mpc("0.17", "1.05"), mpc("-0.31", "1.4"))


def test_form_spec_parsing():
    assert FormSpec.parse("e4") == E4_2
    assert FormSpec.parse("E6/1") == E6_1
    assert FormSpec.parse("delta") == DELTA_1
    assert FormSpec.parse("chi12", 2) == CHI12_2
    assert str(CHI10_2) == "CHI10/2"
    assert CHI10_2.weight == 10
    with pytest.raises(DomainError):
        FormSpec.parse("E8")
    with pytest.raises(DomainError):
        FormSpec(FormName.CHI10, 1)
    with pytest.raises(DomainError):
        FormSpec(FormName.DELTA, 2)


def test_syzygous_counts():
    system = enumerate_syzygous_triples()
    assert len(system.triples) == 60
    assert system.candidates_scanned == 120
    complements = enumerate_syzygous_quadruples()
    assert len(complements.quadruples) == 15
    assert all(len(s) == 6 for s in complements.sextets)


def test_triple_system_validation():
    system = enumerate_syzygous_triples()
    with pytest.raises(DomainError):
        system.with_signs([1] * 59)
    with pytest.raises(DomainError):
        system.with_signs([2] * 60)
    with pytest.raises(CalibrationError):
        system.sign(system.triples[0])


def test_degree_mismatch(cfg):
    with pytest.raises(DomainError, match="degree mismatch"):
        eval_form(E4_2, SiegelPoint1(0, 1), cfg)


def test_degree1_values_at_i(cfg):
    i = SiegelPoint1(0, 1)
    with cfg.workdps():
        assert abs(eval_form(E6_1, i, cfg)) < mpf(10) ** -25
        e4 = eval_form(E4_1, i, cfg)
        assert abs(e4**3 - 1728 * eval_form(DELTA_1, i, cfg)) < mpf(10) ** -24 * abs(e4) ** 3


def test_identity_suites(cfg, triples):
    assert igusa_relation_suite(cfg, n=10).require().passed
    assert delta_routes_suite(cfg, n=5).require().passed
    assert splitting_suite(cfg, triples, n=4).require().passed
    assert boundary_suite(cfg, triples, n=3).require().passed


@pytest.mark.slow
def test_norm_invariance(cfg, triples):
    assert norm_invariance_suite(cfg, triples, n=4).require().passed


def test_degree1_norm_invariance(cfg):
    tau = SiegelPoint1(mpf("0.21"), mpf("1.3"))
    image, _ = act1(SymplecticMatrix(((2, 1), (1, 1))), tau, cfg)
    for form in (E4_1, E6_1, DELTA_1):
        with cfg.workdps():
            before = petersson_norm(form, tau, cfg)
            assert abs(petersson_norm(form, image, cfg) - before) < mpf(10) ** -20 * before


def test_calibration_result(triples):
    assert triples.signs is not None
    assert len(triples.signs) == 60
    assert triples.passing_assignments >= 1


def test_splitting_constant(cfg):
    with cfg.workdps():
        assert abs(measure_splitting_constant(cfg) - 12) < mpf(10) ** -20


def test_chi10_vanishes_on_diagonal(cfg):
    assert eval_form(CHI10_2, DIAG, cfg) == 0


def test_flipped_sign_breaks_splitting(cfg, triples):
    assert triples.signs is not None
    flip = next(n for n, t in enumerate(triples.triples) if 9 not in t)
    signs = list(triples.signs)
    signs[flip] = -signs[flip]
    broken = triples.with_signs(signs)
    with cfg.workdps():
        expected = eval_form(E6_1, SiegelPoint1(DIAG.x1, DIAG.y1), cfg) * eval_form(
            E6_1, SiegelPoint1(DIAG.x2, DIAG.y2), cfg
        )
        assert abs(eval_form(E6_2, DIAG, cfg, triples) - expected) < mpf(10) ** -20 * abs(expected)
        assert abs(eval_form(E6_2, DIAG, cfg, broken) - expected) > mpf(10) ** -6 * abs(expected)


@pytest.mark.slow
def test_every_visible_sign_flip_fails_splitting(cfg, triples):
    assert triples.signs is not None
    # 1111 vanishes on the diagonal, so triples through index 9 are invisible there
    for n, triple in enumerate(triples.triples):
        if 9 in triple:
            continue
        signs = list(triples.signs)
        signs[n] = -signs[n]
        result = splitting_suite(cfg, triples.with_signs(signs), n=1)
        assert not result.passed, triple


def test_sign_table_round_trip(tmp_path, triples):
    path = tmp_path / "signs.txt"
    save_sign_table(path, triples)
    assert path.read_text(encoding="utf-8").startswith("# e6-signs version 1\n")
    assert load_sign_table(path).signs == triples.signs


def test_sign_table_rejects_incomplete_file(tmp_path):
    path = tmp_path / "signs.txt"
    path.write_text("# e6-signs version 1\n0 1 2 1\n", encoding="utf-8")
    with pytest.raises(DomainError, match="exactly once"):
        load_sign_table(path)
    path.write_text("# other\n", encoding="utf-8")
    with pytest.raises(DomainError, match="header"):
        load_sign_table(path)


def test_unsigned_system_cannot_evaluate_e6(cfg):
    with pytest.raises(CalibrationError):
        eval_form(E6_2, DIAG, cfg, TripleSystem(enumerate_syzygous_triples().triples))


@pytest.mark.parametrize(
    ("form", "point", "order"),
    [
        (E6_1, EllipticPoint.I, Fraction(1, 2)),
        (E4_1, EllipticPoint.OMEGA, Fraction(1, 3)),
        (E4_1, EllipticPoint.I, Fraction(0)),
        (E6_1, EllipticPoint.OMEGA, Fraction(0)),
    ],
)
def test_elliptic_vanishing_orders(cfg, form, point, order):
    assert elliptic_vanishing_order(form, point, cfg).orbifold_order == order


def test_eisenstein_coefficients():
    assert eisenstein_q_coefficients(4, 3) == (1, 240, 2160, 6720)
    assert eisenstein_q_coefficients(6, 2) == (1, -504, -16632)


def test_float_path_matches_mpmath(cfg):
    for form in (E4_1, E6_1, DELTA_1):
        tau = SiegelPoint1(mpf("0.3"), mpf("1.1"))
        with cfg.workdps():
            exact = float(mp.log(petersson_norm(form, tau, cfg)))
        assert log_petersson_norm_float(form, 0.3, 1.1) == pytest.approx(exact, abs=1e-10)


def test_fourier_grid_validation(cfg):
    with pytest.raises(DomainError, match="grid too small"):
        fourier_coefficients([CHI10_2], [(3, 1, 3)], cfg, grid=6)
    with pytest.raises(DomainError):
        fourier_coefficients([E4_1], [(0, 0, 0)], cfg)


@pytest.mark.slow
def test_fourier_coefficients(cfg, triples):
    indices = [(0, 0, 0), (1, 0, 0), (1, 1, 1), (1, 0, 1), (1, -1, 1), (1, 2, 1), (1, -2, 1)]
    forms = [E4_2, E6_2, CHI10_2, CHI12_2]
    c = fourier_coefficients(forms, indices, cfg, triples=triples)
    tol = 1e-8
    assert abs(c[E4_2, (0, 0, 0)] - 1) < tol
    assert abs(c[E4_2, (1, 0, 0)] - 240) < tol
    assert abs(c[E6_2, (0, 0, 0)] - 1) < tol
    assert abs(c[E6_2, (1, 0, 0)] + 504) < tol
    assert abs(c[CHI10_2, (1, 1, 1)] - 1) < tol
    assert abs(c[CHI10_2, (1, -1, 1)] - 1) < tol
    assert abs(c[CHI10_2, (1, 0, 1)] + 2) < tol
    assert abs(c[CHI12_2, (0, 0, 0)]) < tol
    chi12_row = sum(c[CHI12_2, (1, l, 1)] for l in range(-2, 3))
    assert abs(chi12_row - 12) < tol
    assert abs(c[CHI12_2, (1, 1, 1)] - c[CHI12_2, (1, -1, 1)]) < tol
    for value in c.values():
        assert abs(value.imag) < tol
        assert abs(value.real - mp.nint(value.real)) < tol
