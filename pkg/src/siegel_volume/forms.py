"""Siegel and elliptic modular forms built from theta constants."""

from __future__ import annotations

import cmath
from collections import deque
from dataclasses import dataclass, field
from enum import StrEnum
from fractions import Fraction
from functools import cache, lru_cache
from itertools import combinations, product
import logging
import math
from typing import TYPE_CHECKING

import mpmath
from mpmath import mp, mpc, mpf
import numpy as np

from . import storage
from .errors import CalibrationError, DomainError
from .symplectic import act, generators
from .theta import (
    SiegelPoint1,
    SiegelPoint2,
    even_characteristics,
    theta_table,
    theta_table1,
)

if TYPE_CHECKING:
    from collections.abc import Sequence
    from pathlib import Path

    from numpy.typing import NDArray

    from .numerics import PrecisionConfig
    from .symplectic import SymplecticMatrix
    from .theta import Characteristic

log = logging.getLogger(__name__)

SIGN_TABLE_VERSION = 1
CALIBRATION_SEED = 20_240_601
SPLITTING_TOLERANCE = 1e-10
FLOAT_Q_TERMS = 16
FOURIER_INDEX = tuple[int, int, int]


class FormName(StrEnum):
    E4 = "E4"
    E6 = "E6"
    DELTA = "DELTA"
    CHI10 = "CHI10"
    CHI12 = "CHI12"


WEIGHTS = {
    FormName.E4: 4,
    FormName.E6: 6,
    FormName.DELTA: 12,
    FormName.CHI10: 10,
    FormName.CHI12: 12,
}
_DEFINED = {
    1: frozenset({FormName.E4, FormName.E6, FormName.DELTA}),
    2: frozenset({FormName.E4, FormName.E6, FormName.CHI10, FormName.CHI12}),
}


@dataclass(frozen=True)
class FormSpec:
    """A named modular form of degree 1 or 2."""

    name: FormName
    degree: int

    def __post_init__(self) -> None:
        if self.degree not in _DEFINED or self.name not in _DEFINED[self.degree]:
            raise DomainError(f"{self.name} is not defined in degree {self.degree}")

    @classmethod
    def parse(cls, text: str, degree: int | None = None) -> FormSpec:
        """Parse ``E4``, ``delta``, ``chi12`` or ``E6/1``; DELTA implies degree 1."""

        name_part, _, degree_part = text.strip().partition("/")
        try:
            name = FormName(name_part.upper())
        except ValueError as exc:
            raise DomainError(f"unknown form {text!r}") from exc
        if degree_part:
            degree = int(degree_part)
        if degree is None:
            degree = 1 if name == FormName.DELTA else 2
        return cls(name, degree)

    @property
    def weight(self) -> int:
        return WEIGHTS[self.name]

    def __str__(self) -> str:
        return f"{self.name.value}/{self.degree}"


E4_1 = FormSpec(FormName.E4, 1)
E6_1 = FormSpec(FormName.E6, 1)
DELTA_1 = FormSpec(FormName.DELTA, 1)
E4_2 = FormSpec(FormName.E4, 2)
E6_2 = FormSpec(FormName.E6, 2)
CHI10_2 = FormSpec(FormName.CHI10, 2)
CHI12_2 = FormSpec(FormName.CHI12, 2)
DEGREE2_FORMS = (E4_2, E6_2, CHI10_2, CHI12_2)

type Triple = tuple[int, int, int]
type Point = SiegelPoint1 | SiegelPoint2


# ---------- syzygous systems ----------
@dataclass(frozen=True)
class TripleSystem:
    """Syzygous triples as indices into ``even_characteristics(2)``, with optional signs."""

    triples: tuple[Triple, ...]
    signs: tuple[int, ...] | None = None
    candidates_scanned: int = 0
    passing_assignments: int = 0

    def __post_init__(self) -> None:
        if self.signs is not None:
            if len(self.signs) != len(self.triples):
                raise DomainError("one sign per triple is required")
            if any(s not in {1, -1} for s in self.signs):
                raise DomainError("signs must be +1 or -1")

    def sign(self, triple: Triple) -> int:
        if self.signs is None:
            raise CalibrationError("E6 signs are not calibrated")
        return self.signs[self.triples.index(tuple(sorted(triple)))]  # type: ignore[arg-type]

    def with_signs(self, signs: Sequence[int], passing: int = 1) -> TripleSystem:
        return TripleSystem(self.triples, tuple(signs), self.candidates_scanned, passing)

    def characteristics(self, triple: Triple) -> tuple[Characteristic, ...]:
        even = even_characteristics(2)
        return tuple(even[i] for i in triple)


@dataclass(frozen=True)
class QuadrupleComplementSystem:
    """Sextets complementary to the syzygous quadruples."""

    quadruples: tuple[tuple[int, ...], ...]
    sextets: tuple[tuple[int, ...], ...]


def _is_syzygous(indices: Sequence[int]) -> bool:
    even = even_characteristics(2)
    total = even[indices[0]]
    for i in indices[1:]:
        total += even[i]
    return total.is_even


@cache
def enumerate_syzygous_triples() -> TripleSystem:
    """Scan all unordered triples of even characteristics for an even sum."""

    scanned = 0
    kept: list[Triple] = []
    for triple in combinations(range(len(even_characteristics(2))), 3):
        scanned += 1
        if _is_syzygous(triple):
            kept.append(triple)
    log.debug("syzygous triples: kept %d of %d", len(kept), scanned)
    return TripleSystem(tuple(kept), None, scanned)


@cache
def enumerate_syzygous_quadruples() -> QuadrupleComplementSystem:
    n = len(even_characteristics(2))
    quads = tuple(
        quad
        for quad in combinations(range(n), 4)
        if all(_is_syzygous(t) for t in combinations(quad, 3))
    )
    sextets = tuple(tuple(i for i in range(n) if i not in quad) for quad in quads)
    return QuadrupleComplementSystem(quads, sextets)


# ---------- values from theta tables ----------
def _fourth_powers(table: dict[Characteristic, mpc]) -> list[mpc]:
    return [table[ch] ** 4 for ch in even_characteristics(2)]


def triple_monomials(table: dict[Characteristic, mpc]) -> list[mpc]:
    """(ϑ_{m₁}ϑ_{m₂}ϑ_{m₃})⁴ for each syzygous triple, in enumeration order."""

    f = _fourth_powers(table)
    return [f[i] * f[j] * f[k] for i, j, k in enumerate_syzygous_triples().triples]


def degree2_from_thetas(
    name: FormName, table: dict[Characteristic, mpc], triples: TripleSystem | None
) -> mpc:
    """Evaluate a degree 2 form from its ten even theta constants."""

    even = even_characteristics(2)
    match name:
        case FormName.E4:
            return mpmath.fsum(table[ch] ** 8 for ch in even) / 4
        case FormName.E6:
            if triples is None or triples.signs is None:
                raise CalibrationError("E6 needs a calibrated sign table")
            monomials = triple_monomials(table)
            return mpmath.fsum(s * m for s, m in zip(triples.signs, monomials, strict=True)) / 4
        case FormName.CHI10:
            return mpmath.fprod(table[ch] ** 2 for ch in even) / mpf(2) ** 12
        case FormName.CHI12:
            f = _fourth_powers(table)
            sextets = enumerate_syzygous_quadruples().sextets
            return mpmath.fsum(mpmath.fprod(f[i] for i in s) for s in sextets) / mpf(2) ** 15
        case _:
            raise DomainError(f"{name} is not defined in degree 2")


def degree1_from_thetas(name: FormName, table: dict[Characteristic, mpc]) -> mpc:
    t00, t01, t10 = (table[ch] for ch in even_characteristics(1))
    match name:
        case FormName.E4:
            return (t00**8 + t01**8 + t10**8) / 2
        case FormName.E6:
            a, b, c = t00**4, t01**4, t10**4
            return (a + b) * (a + c) * (b - c) / 2
        case FormName.DELTA:
            return (t00 * t01 * t10) ** 8 / 256
        case _:
            raise DomainError(f"{name} is not defined in degree 1")


def delta_theta(tau1: SiegelPoint1, cfg: PrecisionConfig) -> mpc:
    """Δ = 2⁻⁸(ϑ₀₀ϑ₀₁ϑ₁₀)⁸."""

    with cfg.workdps():
        return +degree1_from_thetas(FormName.DELTA, theta_table1(tau1, cfg))


def delta_q_product(tau1: SiegelPoint1, cfg: PrecisionConfig) -> mpc:
    """Δ = q∏(1 − qⁿ)²⁴ with q = e^{2πiτ₁}."""

    with cfg.workdps():
        q = mp.exp(2 * mpc(0, mp.pi) * tau1.tau)
        cutoff = cfg.tolerance() / 1000
        value = q
        qn = q
        while abs(qn) > cutoff:
            value *= (1 - qn) ** 24
            qn *= q
        return +value


def _check_degree(form: FormSpec, tau: Point) -> None:
    expected = SiegelPoint1 if form.degree == 1 else SiegelPoint2
    if not isinstance(tau, expected):
        raise DomainError(f"degree mismatch: {form} evaluated at a degree {3 - form.degree} point")


def eval_form(
    form: FormSpec,
    tau: Point,
    cfg: PrecisionConfig,
    triples: TripleSystem | None = None,
) -> mpc:
    """Value of ``form`` at ``tau`` with the normalizations of the theta formulas."""

    _check_degree(form, tau)
    with cfg.workdps():
        if isinstance(tau, SiegelPoint1):
            if form.name == FormName.DELTA:
                return delta_q_product(tau, cfg)
            return +degree1_from_thetas(form.name, theta_table1(tau, cfg))
        if form.name == FormName.E6 and triples is None:
            triples = load_or_calibrate(cfg)
        return +degree2_from_thetas(form.name, theta_table(tau, cfg), triples)


def petersson_norm(
    form: FormSpec,
    tau: Point,
    cfg: PrecisionConfig,
    triples: TripleSystem | None = None,
) -> mpf:
    """‖f(τ)‖ = |f(τ)|·((4π)^g det Im τ)^{k/2}."""

    value = eval_form(form, tau, cfg, triples)
    with cfg.workdps():
        four_pi = 4 * mp.pi
        if isinstance(tau, SiegelPoint1):
            scale = four_pi * tau.y
        else:
            scale = four_pi**2 * tau.det_y
        return +(abs(value) * scale ** (mpf(form.weight) / 2))


# ---------- E6 sign calibration ----------
def _calibration_points(
    n_diagonal: int, n_generic: int
) -> tuple[list[tuple[complex, complex]], list[tuple[complex, complex, complex]]]:
    rng = np.random.default_rng(CALIBRATION_SEED)
    diagonal = [
        (
            complex(rng.uniform(-0.5, 0.5), rng.uniform(0.8, 2.0)),
            complex(rng.uniform(-0.5, 0.5), rng.uniform(0.8, 2.0)),
        )
        for _ in range(n_diagonal)
    ]
    generic = []
    for _ in range(n_generic):
        y1, y2 = rng.uniform(0.9, 1.6, size=2)
        y12 = rng.uniform(-0.3, 0.3)
        x1, x12, x2 = rng.uniform(-0.5, 0.5, size=3)
        generic.append((complex(x1, y1), complex(x12, y12), complex(x2, y2)))
    return diagonal, generic


def _match_tolerance(cfg: PrecisionConfig) -> mpf:
    return mpf(10) ** (-(cfg.working_digits // 2))


def _theta_transformation(
    m: SymplecticMatrix, tau: SiegelPoint2, cfg: PrecisionConfig
) -> list[tuple[int, int]]:
    """(j, ρ) per even index i with ϑ_i(Mτ)⁴ = ρ·det(Cτ+D)²·ϑ_j(τ)⁴, ρ = ±1."""

    image, det = act(m, tau, cfg)
    before = _fourth_powers(theta_table(tau, cfg))
    after = _fourth_powers(theta_table(image, cfg))
    tol = _match_tolerance(cfg)
    out: list[tuple[int, int]] = []
    for i, value in enumerate(after):
        lhs = value / det**2
        hits = [
            (j, rho)
            for j, ref in enumerate(before)
            for rho in (1, -1)
            if abs(lhs - rho * ref) <= tol * abs(ref)
        ]
        if len(hits) != 1:
            raise CalibrationError(
                f"sign calibration failed: theta {even_characteristics(2)[i]} has {len(hits)} matches"
            )
        out.append(hits[0])
    if sorted(j for j, _ in out) != list(range(len(out))):
        raise CalibrationError("sign calibration failed: theta transformation is not a permutation")
    return out


def _propagate_orbits(
    system: TripleSystem, moves: list[list[tuple[int, int]]]
) -> tuple[list[int], list[int]]:
    """Relative signs and orbit labels from s(M·t) = s(t)·Πρ."""

    index = {t: n for n, t in enumerate(system.triples)}
    signs = [0] * len(system.triples)
    orbit = [-1] * len(system.triples)
    n_orbits = 0
    for seed in range(len(system.triples)):
        if signs[seed]:
            continue
        signs[seed] = 1
        orbit[seed] = n_orbits
        queue = deque([seed])
        while queue:
            cur = queue.popleft()
            for move in moves:
                image = tuple(sorted(move[i][0] for i in system.triples[cur]))
                eps = math.prod(move[i][1] for i in system.triples[cur])
                target = index[image]  # type: ignore[index]
                wanted = signs[cur] * eps
                if signs[target] == 0:
                    signs[target] = wanted
                    orbit[target] = n_orbits
                    queue.append(target)
                elif signs[target] != wanted:
                    raise CalibrationError(
                        f"sign calibration failed: conflicting signs on triple {system.triples[target]}"
                    )
        n_orbits += 1
    log.info("E6 calibration: %d triple orbit(s)", n_orbits)
    return signs, orbit


def _splitting_residual(
    signs: Sequence[int],
    diag_monomials: list[list[mpc]],
    expected: list[mpc],
) -> mpf:
    worst = mpf(0)
    for monomials, target in zip(diag_monomials, expected, strict=True):
        value = mpmath.fsum(s * m for s, m in zip(signs, monomials, strict=True)) / 4
        worst = max(worst, abs(value - target) / abs(target))
    return worst


def calibrate_e6_signs(
    cfg: PrecisionConfig, n_diagonal: int = 20, n_generic: int = 20
) -> TripleSystem:
    """Derive the E6 triple signs from modularity, splitting and the cusp value.

    Generators act on the even theta fourth powers by signed permutations; the
    induced action on triples fixes all signs within an orbit up to one global
    sign per orbit. Orbit signs are then chosen so that E6 splits on diagonal
    points, and every passing choice is verified for weight-6 invariance.
    """

    system = enumerate_syzygous_triples()
    diagonal, generic = _calibration_points(n_diagonal, n_generic)
    with cfg.workdps():
        base_point = SiegelPoint2.from_entries(*generic[0])
        moves = [_theta_transformation(m, base_point, cfg) for m in generators()]
        check = SiegelPoint2.from_entries(*generic[-1])
        if moves != [_theta_transformation(m, check, cfg) for m in generators()]:
            raise CalibrationError("sign calibration failed: theta transformation depends on the point")
        relative, orbit = _propagate_orbits(system, moves)
        n_orbits = max(orbit) + 1

        diag_monomials: list[list[mpc]] = []
        expected: list[mpc] = []
        for t1, t2 in diagonal:
            tau = SiegelPoint2.diagonal(t1, t2)
            diag_monomials.append(triple_monomials(theta_table(tau, cfg)))
            expected.append(
                eval_form(E6_1, SiegelPoint1.from_complex(t1), cfg)
                * eval_form(E6_1, SiegelPoint1.from_complex(t2), cfg)
            )

        passing: list[tuple[int, ...]] = []
        for orbit_signs in product((-1, 1), repeat=n_orbits):
            signs = tuple(r * orbit_signs[o] for r, o in zip(relative, orbit, strict=True))
            residual = _splitting_residual(signs, diag_monomials, expected)
            log.debug("orbit signs %s: splitting residual %s", orbit_signs, mp.nstr(residual, 5))
            if residual < SPLITTING_TOLERANCE:
                passing.append(signs)
        if not passing:
            raise CalibrationError("sign calibration failed: no assignment splits on the diagonal")
        passing.sort()
        if len(passing) > 1:
            log.warning("E6 calibration: %d sign assignments pass; pinning the first", len(passing))
        calibrated = system.with_signs(passing[0], len(passing))
        _verify_invariance(calibrated, generic, cfg)
    return calibrated


def _verify_invariance(
    system: TripleSystem, points: Sequence[tuple[complex, complex, complex]], cfg: PrecisionConfig
) -> None:
    worst = mpf(0)
    for entries in points:
        tau = SiegelPoint2.from_entries(*entries)
        base = degree2_from_thetas(FormName.E6, theta_table(tau, cfg), system)
        for m in generators():
            image, det = act(m, tau, cfg)
            moved = degree2_from_thetas(FormName.E6, theta_table(image, cfg), system)
            worst = max(worst, abs(moved - det**6 * base) / abs(det**6 * base))
    log.info("E6 calibration: worst cocycle residual %s", mp.nstr(worst, 5))
    if worst > SPLITTING_TOLERANCE:
        raise CalibrationError(f"sign calibration failed: cocycle residual {mp.nstr(worst, 5)}")


def sign_table_rows(system: TripleSystem) -> list[tuple[int, ...]]:
    if system.signs is None:
        raise CalibrationError("E6 signs are not calibrated")
    return [(*t, s) for t, s in zip(system.triples, system.signs, strict=True)]


def save_sign_table(path: Path, system: TripleSystem) -> None:
    storage.write_int_rows(path, sign_table_rows(system), header=f"e6-signs version {SIGN_TABLE_VERSION}")


def load_sign_table(path: Path) -> TripleSystem:
    """Read ``idx1 idx2 idx3 sign`` rows and check them against the enumeration."""

    header, rows = storage.read_int_rows(path, width=4)
    if header != f"e6-signs version {SIGN_TABLE_VERSION}":
        raise DomainError(f"{path}: unsupported sign table header {header!r}")
    system = enumerate_syzygous_triples()
    by_triple = {tuple(sorted(row[:3])): row[3] for row in rows}
    if set(by_triple) != set(system.triples) or len(rows) != len(system.triples):
        raise DomainError(f"{path}: sign table does not list every syzygous triple exactly once")
    return system.with_signs([by_triple[t] for t in system.triples])


@lru_cache(maxsize=8)
def load_or_calibrate(cfg: PrecisionConfig, path: Path | None = None) -> TripleSystem:
    """Calibrated triple system, read from ``path`` when it exists, else derived (and saved)."""

    if path is not None and path.exists():
        log.info("loading E6 sign table from %s", path)
        return load_sign_table(path)
    system = calibrate_e6_signs(cfg)
    if path is not None:
        save_sign_table(path, system)
    return system


# ---------- diagnostics ----------
def measure_splitting_constant(
    cfg: PrecisionConfig, points: Sequence[tuple[complex, complex]] = ((1.3j, 0.9j),)
) -> mpc:
    """Mean of χ₁₂(diag(τ₁, τ₂)) / (Δ(τ₁)Δ(τ₂)) over ``points``."""

    with cfg.workdps():
        ratios = []
        for t1, t2 in points:
            chi12 = eval_form(CHI12_2, SiegelPoint2.diagonal(t1, t2), cfg)
            deltas = eval_form(DELTA_1, SiegelPoint1.from_complex(t1), cfg) * eval_form(
                DELTA_1, SiegelPoint1.from_complex(t2), cfg
            )
            ratios.append(chi12 / deltas)
        return +(mpmath.fsum(ratios) / len(ratios))


class EllipticPoint(StrEnum):
    I = "i"
    OMEGA = "omega"

    @property
    def value_complex(self) -> mpc:
        if self is EllipticPoint.I:
            return mpc(0, 1)
        return mpc(-mpf(1) / 2, mp.sqrt(3) / 2)

    @property
    def stabilizer(self) -> int:
        return 2 if self is EllipticPoint.I else 3


@dataclass(frozen=True)
class VanishingOrder:
    """Order of a degree 1 form at an elliptic point, as a function and on the orbifold."""

    function_order: int
    stabilizer: int
    radius: float = field(default=0.05, compare=False)

    @property
    def orbifold_order(self) -> Fraction:
        return Fraction(self.function_order, self.stabilizer)


def elliptic_vanishing_order(
    form: FormSpec,
    point: EllipticPoint,
    cfg: PrecisionConfig,
    radius: float = 0.05,
    samples: int = 64,
    max_shrinks: int = 4,
) -> VanishingOrder:
    """Winding number of f around a small circle at ``point``."""

    if form.degree != 1:
        raise DomainError("vanishing orders are computed for degree 1 forms")
    with cfg.workdps():
        center = point.value_complex
        r = mpf(radius)
        for _ in range(max_shrinks + 1):
            values = []
            for k in range(samples + 1):
                z = center + r * mp.expjpi(mpf(2 * k) / samples)
                values.append(eval_form(form, SiegelPoint1.from_complex(z), cfg))
            magnitudes = [abs(v) for v in values]
            if min(magnitudes) > cfg.quadrature_tolerance * max(magnitudes):
                winding = mpmath.fsum(
                    mp.arg(values[k + 1] / values[k]) for k in range(samples)
                ) / (2 * mp.pi)
                order = int(mp.nint(winding))
                if abs(winding - order) < mpf("0.1"):
                    log.debug("%s at %s: winding %s", form, point.value, mp.nstr(winding, 8))
                    return VanishingOrder(order, point.stabilizer, float(r))
            r /= 2
    raise DomainError(f"{form} vanishes on every test circle around {point.value}")


# ---------- Fourier coefficients ----------
def fourier_coefficients(
    forms: Sequence[FormSpec],
    indices: Sequence[FOURIER_INDEX],
    cfg: PrecisionConfig,
    y: tuple[float, float, float] = (1.0, 0.0, 1.0),
    grid: int = 8,
    triples: TripleSystem | None = None,
) -> dict[tuple[FormSpec, FOURIER_INDEX], mpc]:
    """c(n, l, m) for several degree 2 forms from one torus quadrature.

    f(x + iy) is sampled on the grid³ torus of x = (x₁, x₁₂, x₂); the discrete
    Fourier sum is exact for trigonometric polynomials of degree below grid.
    """

    if any(f.degree != 2 for f in forms):
        raise DomainError("Fourier coefficients are computed for degree 2 forms")
    largest = max((abs(v) for idx in indices for v in idx), default=0)
    if grid % 2 or grid < 2 * largest + 2:
        raise DomainError(f"grid too small: need an even grid >= {2 * largest + 2}, got {grid}")
    if any(f.name == FormName.E6 for f in forms) and triples is None:
        triples = load_or_calibrate(cfg)

    with cfg.workdps():
        roots = [mp.expjpi(-mpf(2 * j) / grid) for j in range(grid)]
        sums = {(f, idx): mpc(0) for f in forms for idx in indices}
        y1, y12, y2 = (mpf(v) for v in y)
        for j1, j12, j2 in product(range(grid), repeat=3):
            tau = SiegelPoint2(mpf(j1) / grid, mpf(j12) / grid, mpf(j2) / grid, y1, y12, y2)
            table = theta_table(tau, cfg)
            values = {f: degree2_from_thetas(f.name, table, triples) for f in forms}
            for f, idx in sums:
                n, l, m = idx
                sums[f, idx] += values[f] * roots[(n * j1 + l * j12 + m * j2) % grid]
        out: dict[tuple[FormSpec, FOURIER_INDEX], mpc] = {}
        for (f, idx), total in sums.items():
            n, l, m = idx
            out[f, idx] = +(total / grid**3 * mp.exp(2 * mp.pi * (n * y1 + l * y12 + m * y2)))
        log.info("Fourier coefficients: %d forms x %d indices on a %d^3 grid", len(forms), len(indices), grid)
        return out


def fourier_coefficient(
    form: FormSpec,
    index: FOURIER_INDEX,
    cfg: PrecisionConfig,
    y: tuple[float, float, float] = (1.0, 0.0, 1.0),
    grid: int = 8,
    triples: TripleSystem | None = None,
) -> mpc:
    return fourier_coefficients([form], [index], cfg, y, grid, triples)[form, index]


# ---------- float fast path (degree 1) ----------
def divisor_sigma(n: int, power: int) -> int:
    return sum(d**power for d in range(1, n + 1) if n % d == 0)


@cache
def eisenstein_q_coefficients(k: int, terms: int) -> tuple[int, ...]:
    """Coefficients of E_k = 1 − (2k/B_k)Σσ_{k−1}(n)qⁿ up to q^{terms}."""

    num, den = mpmath.bernfrac(k)
    factor = -Fraction(2 * k) / Fraction(int(num), int(den))
    if factor.denominator != 1:
        raise DomainError(f"E_{k} does not have integral q-coefficients")
    return (1, *(int(factor) * divisor_sigma(n, k - 1) for n in range(1, terms + 1)))


def _float_value(name: FormName, q: complex) -> complex:
    if name == FormName.DELTA:
        value = q
        qn = q
        for _ in range(FLOAT_Q_TERMS):
            value *= (1 - qn) ** 24
            qn *= q
        return value
    coeffs = eisenstein_q_coefficients(WEIGHTS[name], FLOAT_Q_TERMS)
    acc = 0j
    for c in reversed(coeffs):
        acc = acc * q + c
    return acc


def log_petersson_norm_float(form: FormSpec, x: float, y: float) -> float:
    """log‖f(x + iy)‖ for degree 1 forms in double precision."""

    q = cmath.exp(2j * math.pi * complex(x, y))
    value = _float_value(form.name, q)
    return math.log(abs(value)) + form.weight / 2 * math.log(4 * math.pi * y)


def log_petersson_norm_array(
    form: FormSpec, x: NDArray[np.float64], y: NDArray[np.float64]
) -> NDArray[np.float64]:
    """Vectorized ``log_petersson_norm_float``."""

    q = np.exp(2j * np.pi * (x + 1j * y))
    if form.name == FormName.DELTA:
        value = q.copy()
        qn = q.copy()
        for _ in range(FLOAT_Q_TERMS):
            value *= (1 - qn) ** 24
            qn *= q
    else:
        coeffs = eisenstein_q_coefficients(form.weight, FLOAT_Q_TERMS)
        value = np.polynomial.polynomial.polyval(q, np.array(coeffs, dtype=np.float64))
    result: NDArray[np.float64] = np.log(np.abs(value)) + form.weight / 2 * np.log(4 * np.pi * y)
    return result
