from __future__ import annotations

from mpmath import mpf
import pytest

from siegel_volume.errors import DomainError
from siegel_volume.fiber import (
    LINEAR_FORMS,
    FiberTarget,
    IntegerPolynomial5,
    ProjectivePointFp,
    check_prime,
    chi10_squared_y,
    compare_with_stated,
    default_system,
    e4_y,
    enumerate_solutions,
    load_or_reconstruct,
    load_polynomial,
    monomials,
    quartic,
    reconstruct_polynomial,
    save_polynomial,
    standard_monomials,
    stated_solutions,
    symbolic_polynomial,
    theta_fourth_power_forms,
    y_coordinates,
)
from siegel_volume.forms import CHI10_2, CHI12_2, E4_2, E6_2, eval_form
from siegel_volume.theta import SiegelPoint2

TAU = SiegelPoint2(mpf("0.12"), mpf("0.05"), mpf("-0.2"), mpf("1.15"), mpf("0.2"), mpf("1.35"))

STATED_F3_POINTS = [
    "(0:0:1:0:1)",
    "(0:0:1:1:0)",
    "(0:1:0:0:1)",
    "(0:1:0:1:0)",
    "(1:0:0:0:1)",
    "(1:0:0:1:0)",
]


def _y(i):
    return IntegerPolynomial5.variable(i)


def test_polynomial_arithmetic():
    p = _y(0) + _y(1) * 2
    assert (p * p).coefficient((1, 1, 0, 0, 0)) == 4
    assert (p - p) == IntegerPolynomial5()
    assert (p**3).degree == 3
    assert (p**3).is_homogeneous()
    assert not (p + IntegerPolynomial5.constant(1)).is_homogeneous()
    assert p((2, 3, 0, 0, 0)) == 8
    with pytest.raises(DomainError):
        IntegerPolynomial5({(1, 0, 0, 0, 0): 0.5})  # type: ignore[dict-item]
    with pytest.raises(DomainError):
        IntegerPolynomial5({(1, 0, 0): 1})


def test_rows_round_trip():
    poly = quartic()
    assert IntegerPolynomial5.from_rows(poly.rows()) == poly
    with pytest.raises(DomainError, match="duplicate"):
        IntegerPolynomial5.from_rows([(1, 1, 0, 0, 0, 0), (2, 1, 0, 0, 0, 0)])


def test_evaluate_mod_matches_integer_evaluation(rng):
    poly = quartic() * 3 + e4_y() * _y(4) * _y(2)
    points = rng.integers(-20, 20, size=(50, 5))
    columns = [points[:, i] for i in range(5)]
    fast = poly.evaluate_mod(columns, 7)
    for row, value in zip(points, fast, strict=True):
        assert poly(tuple(int(v) for v in row)) % 7 == value


def test_standard_monomial_counts():
    assert len(monomials(6)) == 210
    assert len(standard_monomials(6)) == 195
    assert len(standard_monomials(3)) == 35
    assert len(standard_monomials(2)) == 15


def test_normal_form():
    assert quartic().normal_form() == IntegerPolynomial5()
    assert (quartic() * _y(0)).normal_form() == IntegerPolynomial5()
    reduced = (_y(3) ** 2 * _y(4) ** 2).normal_form()
    assert all(not (e[3] >= 2 and e[4] >= 2) for e, _ in reduced)
    assert (reduced - _y(3) ** 2 * _y(4) ** 2).normal_form() == IntegerPolynomial5()


def test_quartic_is_symmetric():
    assert quartic().is_symmetric()
    assert e4_y().is_symmetric()
    assert not (_y(0) * _y(0)).is_symmetric()


def test_transcribed_factors_agree_with_theta_linear_forms():
    assert chi10_squared_y() == symbolic_polynomial(FiberTarget.CHI10_SQUARED_Y)
    assert e4_y() == symbolic_polynomial(FiberTarget.E4_Y)
    assert symbolic_polynomial(FiberTarget.QUARTIC) == quartic()


def test_theta_fourth_powers_are_linear(cfg):
    fitted = theta_fourth_power_forms(cfg)
    assert {ch.label: v for ch, v in fitted.items()} == LINEAR_FORMS


def test_theta_point_lies_on_quartic(cfg):
    ys = y_coordinates(TAU, cfg)
    with cfg.workdps():
        scale = max(abs(v) for v in ys) ** 4
        assert abs(quartic()(ys)) < mpf(10) ** -20 * scale


def test_forms_in_y_coordinates(cfg, triples):
    ys = y_coordinates(TAU, cfg)

    def close(a, b):
        return abs(a - b) < mpf(10) ** -18 * max(1, abs(b))

    with cfg.workdps():
        assert close(e4_y()(ys), 4 * eval_form(E4_2, TAU, cfg))
        assert close(chi10_squared_y()(ys), 2**24 * eval_form(CHI10_2, TAU, cfg) ** 2)
        assert close(symbolic_polynomial(FiberTarget.E6_Y, triples)(ys), 4 * eval_form(E6_2, TAU, cfg, triples))
        assert close(symbolic_polynomial(FiberTarget.CHI12_Y)(ys), 2**15 * eval_form(CHI12_2, TAU, cfg))


def test_e6_leading_term(triples):
    # 0000, 0011 and 1111 sit at indices 0, 3 and 9
    assert (0, 3, 9) in triples.triples
    forms = [IntegerPolynomial5.linear(v) for v in LINEAR_FORMS.values()]
    lead = forms[9] * forms[0] * forms[3] * triples.sign((0, 3, 9))
    rest = IntegerPolynomial5()
    for (i, j, k), s in zip(triples.triples, triples.signs, strict=True):
        if (i, j, k) != (0, 3, 9):
            rest = rest + forms[i] * forms[j] * forms[k] * s
    e6 = symbolic_polynomial(FiberTarget.E6_Y, triples)
    assert rest + lead == e6
    assert e6.is_homogeneous()
    assert e6.degree == 3
    assert e6.is_symmetric()


def test_polynomial_file_round_trip(tmp_path):
    path = tmp_path / "e4.txt"
    save_polynomial(path, FiberTarget.E4_Y, e4_y())
    assert path.read_text(encoding="utf-8").startswith("# polynomial E4_y degree 2\n")
    assert load_polynomial(path) == e4_y()


def test_reconstruct_e4(cfg, tmp_path):
    poly = load_or_reconstruct(FiberTarget.E4_Y, cfg, tmp_path)
    assert poly == e4_y().normal_form()
    assert (tmp_path / "e4_y.txt").exists()
    assert load_or_reconstruct(FiberTarget.E4_Y, cfg, tmp_path) == poly


def test_reconstruct_rejects_exact_targets(cfg):
    with pytest.raises(DomainError):
        reconstruct_polynomial(FiberTarget.QUARTIC, cfg)


@pytest.mark.slow
@pytest.mark.parametrize("target", [FiberTarget.E6_Y, FiberTarget.CHI12_Y])
def test_reconstruction_matches_symbolic(cfg, triples, target):
    poly = reconstruct_polynomial(target, cfg, triples)
    assert poly == symbolic_polynomial(target, triples).normal_form()


def test_check_prime():
    with pytest.raises(DomainError, match="embedding not defined at 2"):
        check_prime(2)
    with pytest.raises(DomainError, match="not prime"):
        check_prime(9)
    with pytest.raises(DomainError, match="at most"):
        check_prime(103)
    check_prime(101)


def test_projective_points():
    point = ProjectivePointFp.normalized(3, [0, 0, 2, 0, 2])
    assert point.coordinates == (0, 0, 1, 0, 1)
    assert str(point) == "(0:0:1:0:1)"
    assert point.line() == "3: (0:0:1:0:1)"
    with pytest.raises(DomainError):
        ProjectivePointFp(3, (0, 0, 2, 0, 2))
    with pytest.raises(DomainError):
        ProjectivePointFp.normalized(5, [0, 5, 0, 10, 0])


def test_solutions_over_f3(triples):
    system = default_system(triples=triples)
    solutions = enumerate_solutions(3, system)
    found = [str(p) for p in solutions]
    assert len(found) == 25
    assert set(STATED_F3_POINTS) <= set(found)
    assert {"(0:1:1:1:1)", "(0:1:2:1:2)", "(1:1:1:0:0)"} <= set(found)
    assert all(system.satisfied_by(p) for p in solutions)


def test_f3_discrepancy_against_stated_points(triples):
    solutions = enumerate_solutions(3, default_system(triples=triples))
    discrepancy = compare_with_stated(3, solutions)
    assert discrepancy is not None
    assert discrepancy.missing == ()
    assert len(discrepancy.extra) == 19
    assert "19 points beyond the stated set" in str(discrepancy)
    assert discrepancy.to_json()["missing"] == []
    assert [str(p) for p in stated_solutions(3)] == STATED_F3_POINTS
    assert compare_with_stated(5, []) is None


@pytest.mark.parametrize("p", [5, 7, 11, 13])
def test_no_solutions_for_larger_primes(triples, p):
    assert enumerate_solutions(p, default_system(triples=triples)) == []


def test_enumerate_rejects_two(triples):
    with pytest.raises(DomainError, match="embedding not defined at 2"):
        enumerate_solutions(2, default_system(triples=triples))

