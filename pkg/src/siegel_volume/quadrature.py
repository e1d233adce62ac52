"""Integrals of log-Petersson norms over the SL₂(ℤ) fundamental domain."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
import logging
import math
from typing import TYPE_CHECKING, Literal

from mpmath import mp, mpf
import numpy as np
from scipy import integrate as spyint

from .errors import DomainError, QuadratureError
from .forms import (
    CHI12_2,
    DELTA_1,
    E4_1,
    E6_1,
    EllipticPoint,
    FormName,
    FormSpec,
    elliptic_vanishing_order,
    log_petersson_norm_array,
    log_petersson_norm_float,
    petersson_norm,
)
from .numerics import fraction_to_mpf, zeta_negative, zeta_prime_negative
from .theta import SiegelPoint1, SiegelPoint2

if TYPE_CHECKING:
    from collections.abc import Callable, Sequence

    from numpy.typing import NDArray

    from .numerics import PrecisionConfig

log = logging.getLogger(__name__)

type Mode = Literal["adaptive", "monte_carlo"]
MODES: tuple[Mode, ...] = ("adaptive", "monte_carlo")
MIN_CUSP_CUTOFF = 2.0
MAX_EXCLUSION_RADIUS = 0.1
MC_CHUNK = 100_000
SQRT3_HALF = math.sqrt(3) / 2


@dataclass(frozen=True)
class IntegrationConfig:
    """Quadrature knobs; validated on construction."""

    cusp_cutoff: float = 20.0
    target_tolerance: float = 1e-8
    max_refinement_depth: int = 200
    singularity_exclusion_radius: float = 1e-3
    mode: Mode = "adaptive"
    rng_seed: int = 0
    monte_carlo_samples: int = 1_000_000

    def __post_init__(self) -> None:
        if not self.cusp_cutoff > MIN_CUSP_CUTOFF:
            raise DomainError(f"cusp_cutoff must exceed {MIN_CUSP_CUTOFF}, got {self.cusp_cutoff}")
        if not self.target_tolerance > 0:
            raise DomainError("target_tolerance must be positive")
        if self.max_refinement_depth < 1:
            raise DomainError("max_refinement_depth must be positive")
        if not 0 < self.singularity_exclusion_radius < MAX_EXCLUSION_RADIUS:
            raise DomainError(f"singularity_exclusion_radius must lie in (0, {MAX_EXCLUSION_RADIUS})")
        if self.mode not in MODES:
            raise DomainError(f"unknown integration mode {self.mode!r}")
        if self.monte_carlo_samples < 1:
            raise DomainError("monte_carlo_samples must be positive")


@dataclass(frozen=True)
class IntegralResult:
    value: float
    error_estimate: float
    tail_contribution: float
    singular_contribution_bound: float
    evaluations: int = 0

    def __post_init__(self) -> None:
        if not math.isfinite(self.value):
            raise QuadratureError("integral value is not finite", (-0.5, 0.5))
        if self.error_estimate < 0:
            raise DomainError("error_estimate must be non-negative")


@dataclass(frozen=True)
class Singularity:
    """A logarithmic singularity n·log|τ − τ₀| of the integrand inside the domain.

    ``fraction`` is the share of the exclusion disk lying in the domain.
    """

    x: float
    y: float
    order: int
    fraction: float
    regular_bound: float = 0.0


@dataclass(frozen=True)
class Integrand:
    """A real function on the fundamental domain together with its cusp tail."""

    name: str
    func: Callable[[float, float], float]
    tail: Callable[[float], float]
    batch: Callable[[NDArray[np.float64], NDArray[np.float64]], NDArray[np.float64]] | None = None
    singularities: tuple[Singularity, ...] = ()
    tail_truncation: Callable[[float], float] = field(default=lambda _y: 0.0)


def constant_integrand(value: float = 1.0) -> Integrand:
    """c·dμ; the tail over y > Y is c/(4πY)."""

    return Integrand(
        name=f"constant {value:g}",
        func=lambda _x, _y: value,
        tail=lambda cutoff: value / (4 * math.pi * cutoff),
        batch=lambda x, _y: np.full_like(x, value),
    )


def _cusp_tail(weight: int) -> Callable[[float], float]:
    def tail(cutoff: float) -> float:
        return weight / (8 * math.pi) * (math.log(4 * math.pi * cutoff) + 1) / cutoff

    return tail


def _cusp_truncation(cutoff: float) -> float:
    # |log f| ≤ 600e^{−2πy} above the cutoff for E4 and E6
    return 600 * math.exp(-2 * math.pi * cutoff) / (4 * math.pi * cutoff)


def _regular_bound(form: FormSpec, point: EllipticPoint, order: int) -> float:
    """Largest |log‖f‖ − n·log|τ − τ₀|| on a small circle around τ₀."""

    center = complex(point.value_complex)
    worst = 0.0
    for k in range(8):
        z = center + 0.02 * complex(math.cos(k * math.pi / 4), math.sin(k * math.pi / 4))
        value = log_petersson_norm_float(form, z.real, z.imag) - order * math.log(0.02)
        worst = max(worst, abs(value))
    return worst


def log_norm_integrand(form: FormSpec, cfg: PrecisionConfig) -> Integrand:
    """log‖f‖_Pet for a degree 1 form with f(i∞) = 1, singularities from its elliptic zeros."""

    if form.degree != 1 or form.name == FormName.DELTA:
        raise DomainError(f"log-norm integrands need a degree 1 form with f(i∞) = 1, got {form}")
    singularities: list[Singularity] = []
    for point in EllipticPoint:
        order = elliptic_vanishing_order(form, point, cfg).function_order
        if order == 0:
            continue
        bound = _regular_bound(form, point, order)
        if point is EllipticPoint.I:
            singularities.append(Singularity(0.0, 1.0, order, 0.5, bound))
        else:
            # ω and ω + 1 each carry a sixth of the disk
            singularities.append(Singularity(-0.5, SQRT3_HALF, order, 1 / 6, bound))
            singularities.append(Singularity(0.5, SQRT3_HALF, order, 1 / 6, bound))
    return Integrand(
        name=f"log|{form}|",
        func=lambda x, y: log_petersson_norm_float(form, x, y),
        tail=_cusp_tail(form.weight),
        batch=lambda x, y: log_petersson_norm_array(form, x, y),
        singularities=tuple(singularities),
        tail_truncation=_cusp_truncation,
    )


# ---------- domain ----------
def _lower_boundary(x: float, singularities: Sequence[Singularity], delta: float) -> float:
    lower = math.sqrt(max(0.0, 1 - x * x))
    for s in singularities:
        dx = x - s.x
        if abs(dx) < delta:
            lower = max(lower, s.y + math.sqrt(delta * delta - dx * dx))
    return lower


def _lower_boundary_array(
    x: NDArray[np.float64], singularities: Sequence[Singularity], delta: float
) -> NDArray[np.float64]:
    lower: NDArray[np.float64] = np.sqrt(np.clip(1 - x * x, 0.0, None))
    for s in singularities:
        dx = x - s.x
        inside = np.abs(dx) < delta
        top = s.y + np.sqrt(np.clip(delta * delta - dx * dx, 0.0, None))
        lower = np.where(inside, np.maximum(lower, top), lower)
    return lower


def singular_bound(singularities: Sequence[Singularity], delta: float) -> float:
    """Bound on the integrand's mass inside the exclusion disks."""

    total = 0.0
    for s in singularities:
        density = 2 * math.pi / (4 * math.pi * (s.y - delta) ** 2)
        log_part = s.order * delta**2 / 2 * (abs(math.log(delta)) + 0.5)
        total += s.fraction * density * (log_part + s.regular_bound * delta**2 / 2)
    return total


# ---------- adaptive ----------
def _breakpoints(delta: float) -> list[float]:
    return [-0.5, -0.5 + delta, -delta, 0.0, delta, 0.5 - delta, 0.5]


def _quad(
    f: Callable[[float], float], lo: float, hi: float, cfg: IntegrationConfig, epsabs: float
) -> tuple[float, float, bool]:
    out = spyint.quad(f, lo, hi, epsabs=epsabs, epsrel=0.0, limit=cfg.max_refinement_depth, full_output=1)
    # a fourth element (the message) is only present when QUADPACK reports ier > 0
    return float(out[0]), float(out[1]), len(out) > 3


def _integrate_adaptive(integrand: Integrand, cfg: IntegrationConfig) -> tuple[float, float, int]:
    delta = cfg.singularity_exclusion_radius
    top = 1 / cfg.cusp_cutoff
    inner_eps = cfg.target_tolerance / 10
    evaluations = 0
    inner_error = 0.0
    failures: list[tuple[float, float]] = []

    def inner(x: float) -> float:
        nonlocal evaluations, inner_error
        u_hi = 1 / _lower_boundary(x, integrand.singularities, delta)

        def g(u: float) -> float:
            nonlocal evaluations
            evaluations += 1
            return integrand.func(x, 1 / u)

        value, err, failed = _quad(g, top, u_hi, cfg, inner_eps)
        inner_error = max(inner_error, err)
        if failed and err > 10 * inner_eps:
            failures.append((x, err))
        return value / (4 * math.pi)

    total = 0.0
    total_error = 0.0
    worst: tuple[float, float] = (-0.5, 0.5)
    worst_error = -1.0
    edges = _breakpoints(delta)
    for lo, hi in zip(edges[:-1], edges[1:], strict=True):
        value, err, failed = _quad(inner, lo, hi, cfg, cfg.target_tolerance / len(edges))
        log.debug("cell [%.6g, %.6g]: %.12g +- %.3g", lo, hi, value, err)
        total += value
        total_error += err
        if err > worst_error:
            worst, worst_error = (lo, hi), err
        if failed:
            if err > 10 * cfg.target_tolerance:
                raise QuadratureError(f"quadrature for {integrand.name} did not converge", (lo, hi))
            log.warning("cell [%.6g, %.6g] hit the refinement limit (error %.3g)", lo, hi, err)
    if failures:
        x, err = max(failures, key=lambda item: item[1])
        raise QuadratureError(f"inner quadrature for {integrand.name} did not converge at x={x:.6g} ({err:.3g})", worst)
    return total, total_error + inner_error / (4 * math.pi), evaluations


# ---------- Monte Carlo ----------
def _integrate_monte_carlo(integrand: Integrand, cfg: IntegrationConfig) -> tuple[float, float, int]:
    if integrand.batch is None:
        raise DomainError(f"{integrand.name} has no vectorized form for Monte Carlo")
    rng = np.random.default_rng(cfg.rng_seed)
    u_lo, u_hi = 1 / cfg.cusp_cutoff, 1 / SQRT3_HALF
    box = (u_hi - u_lo) / (4 * math.pi)
    delta = cfg.singularity_exclusion_radius
    acc = 0.0
    acc_sq = 0.0
    remaining = cfg.monte_carlo_samples
    while remaining > 0:
        n = min(MC_CHUNK, remaining)
        remaining -= n
        x = rng.uniform(-0.5, 0.5, size=n)
        u = rng.uniform(u_lo, u_hi, size=n)
        y = 1 / u
        inside = y >= _lower_boundary_array(x, integrand.singularities, delta)
        values = np.zeros(n)
        if inside.any():
            values[inside] = integrand.batch(x[inside], y[inside])
        acc += float(values.sum())
        acc_sq += float((values * values).sum())
    n_total = cfg.monte_carlo_samples
    mean = acc / n_total
    variance = max(acc_sq / n_total - mean * mean, 0.0)
    sigma = math.sqrt(variance / n_total)
    return box * mean, 3 * box * sigma, n_total


def integrate_A1(integrand: Integrand, cfg: IntegrationConfig) -> IntegralResult:  # noqa: N802
    """∫ g dμ over the fundamental domain with dμ = dx dy / (4πy²).

    The truncated domain y ≤ Y minus the exclusion disks is integrated
    numerically in (x, u = 1/y); the part above Y is added in closed form.
    """

    if cfg.mode == "adaptive":
        body, error, evaluations = _integrate_adaptive(integrand, cfg)
    else:
        body, error, evaluations = _integrate_monte_carlo(integrand, cfg)
    tail = integrand.tail(cfg.cusp_cutoff)
    bound = singular_bound(integrand.singularities, cfg.singularity_exclusion_radius)
    truncation = integrand.tail_truncation(cfg.cusp_cutoff)
    log.info(
        "%s (%s): body %.12g, tail %.6g, singular bound %.3g, %d evaluations",
        integrand.name,
        cfg.mode,
        body,
        tail,
        bound,
        evaluations,
    )
    return IntegralResult(body + tail, error + truncation + bound, tail, bound, evaluations)


# ---------- Rohrlich ----------
@dataclass(frozen=True)
class DivisorPoint:
    """An orbifold zero of a degree 1 form; ``log_norm_delta`` is log‖Δ(τ₀)‖ when τ₀ is not elliptic."""

    tau: complex
    order: Fraction
    log_norm_delta: float | None = None


def _elliptic_point(tau: complex) -> EllipticPoint | None:
    for point in EllipticPoint:
        if abs(tau - complex(point.value_complex)) < 1e-12:
            return point
    return None


def rohrlich_rhs_from_divisor(
    weight: int, divisor: Sequence[DivisorPoint], cfg: PrecisionConfig
) -> mpf:
    """−k(ζ(−1)/2 + ζ′(−1)) − (1/12)Σ ord·log‖Δ(τ₀)‖."""

    with cfg.workdps():
        total = -weight * (fraction_to_mpf(zeta_negative(1)) / 2 + zeta_prime_negative(1, cfg))
        for point in divisor:
            if point.log_norm_delta is not None:
                log_delta = mpf(point.log_norm_delta)
            elif _elliptic_point(point.tau) is not None:
                tau0 = SiegelPoint1.from_complex(point.tau)
                log_delta = mp.log(petersson_norm(DELTA_1, tau0, cfg))
            else:
                raise DomainError(f"divisor point {point.tau} is not elliptic and carries no log-norm of Delta")
            total -= fraction_to_mpf(point.order) * log_delta / 12
        return +total


def elliptic_divisor(form: FormSpec, cfg: PrecisionConfig) -> list[DivisorPoint]:
    """Orbifold divisor of ``form`` on the fundamental domain, checked against the valence formula."""

    if form.degree != 1:
        raise DomainError("divisors are computed for degree 1 forms")
    if form.name == FormName.DELTA:
        raise DomainError("Rohrlich's formula needs f(i∞) = 1; Delta vanishes at the cusp")
    divisor = []
    for point in EllipticPoint:
        order = elliptic_vanishing_order(form, point, cfg).orbifold_order
        if order:
            divisor.append(DivisorPoint(complex(point.value_complex), order))
    if sum((p.order for p in divisor), Fraction(0)) != Fraction(form.weight, 12):
        raise DomainError(f"{form} has zeros away from the elliptic points")
    return divisor


def rohrlich_rhs(form: FormSpec, cfg: PrecisionConfig) -> mpf:
    return rohrlich_rhs_from_divisor(form.weight, elliptic_divisor(form, cfg), cfg)


# ---------- term (B) ----------
@dataclass(frozen=True)
class TermBResult:
    """The three summands of the second line of (B) and their sum."""

    humbert: float
    i_fiber: float
    point: float
    error_estimate: float
    integrals: dict[str, IntegralResult]

    @property
    def total(self) -> float:
        return self.humbert + self.i_fiber + self.point


def term_B_numeric(  # noqa: N802
    cfg: PrecisionConfig,
    icfg: IntegrationConfig | None = None,
    humbert_form: FormSpec = E6_1,
) -> TermBResult:
    """Numerical value of the second line of (B).

    The Humbert double integral factors into −8∫log‖f‖ for the form restricting
    it; the {i}×𝒜₁ term uses ∫log‖E4‖ and log‖E4(i)‖; the point term is
    −(1/6)log‖χ₁₂(diag(i, ω))‖.
    """

    icfg = icfg or IntegrationConfig()
    humbert_integral = integrate_A1(log_norm_integrand(humbert_form, cfg), icfg)
    e4_integral = (
        humbert_integral if humbert_form == E4_1 else integrate_A1(log_norm_integrand(E4_1, cfg), icfg)
    )
    with cfg.workdps():
        i = SiegelPoint1(0, 1)
        log_e4_i = float(mp.log(petersson_norm(E4_1, i, cfg)))
        omega = complex(EllipticPoint.OMEGA.value_complex)
        chi12_point = SiegelPoint2.diagonal(1j, omega)
        log_chi12 = float(mp.log(petersson_norm(CHI12_2, chi12_point, cfg)))
    humbert = -8 * humbert_integral.value
    i_fiber = -0.5 * log_e4_i - 6 * e4_integral.value
    point = -log_chi12 / 6
    error = 8 * humbert_integral.error_estimate + 6 * e4_integral.error_estimate
    log.info("term (B): humbert %.10g, i-fiber %.10g, point %.10g", humbert, i_fiber, point)
    return TermBResult(
        humbert,
        i_fiber,
        point,
        error,
        {f"log|{humbert_form}|": humbert_integral, f"log|{E4_1}|": e4_integral},
    )
