"""Numerical identity suites: Igusa relation, splitting, boundary and invariance."""

from __future__ import annotations

from dataclasses import dataclass
import logging
from typing import TYPE_CHECKING

from mpmath import mp, mpf
import numpy as np

from .errors import VerificationError
from .forms import (
    CHI10_2,
    CHI12_2,
    DEGREE2_FORMS,
    DELTA_1,
    E4_1,
    E4_2,
    E6_1,
    E6_2,
    delta_q_product,
    delta_theta,
    eval_form,
    load_or_calibrate,
    petersson_norm,
)
from .symplectic import act, random_word, reduce2
from .theta import SiegelPoint1, SiegelPoint2

if TYPE_CHECKING:
    from collections.abc import Callable

    from .forms import TripleSystem
    from .numerics import PrecisionConfig

log = logging.getLogger(__name__)

SUITE_SEED = 12


@dataclass(frozen=True)
class SuiteResult:
    name: str
    max_residual: float
    threshold: float
    samples: int

    @property
    def passed(self) -> bool:
        return self.max_residual < self.threshold

    def require(self) -> SuiteResult:
        if not self.passed:
            raise VerificationError(
                f"{self.name}: residual {self.max_residual:.3g} exceeds {self.threshold:.3g}"
            )
        return self


def _reduced_points1(rng: np.random.Generator, n: int) -> list[SiegelPoint1]:
    return [SiegelPoint1(rng.uniform(-0.5, 0.5), rng.uniform(1.0, 3.0)) for _ in range(n)]


def _generic_points2(rng: np.random.Generator, n: int) -> list[SiegelPoint2]:
    points = []
    for _ in range(n):
        y1, y2 = rng.uniform(0.9, 1.5, size=2)
        y12 = rng.uniform(-0.3, 0.3)
        x1, x12, x2 = rng.uniform(-0.5, 0.5, size=3)
        points.append(SiegelPoint2(x1, x12, x2, y1, y12, y2))
    return points


def _finish(name: str, worst: mpf, threshold: float, samples: int) -> SuiteResult:
    result = SuiteResult(name, float(worst), threshold, samples)
    log.info("%s: max residual %.3g over %d samples (%s)", name, result.max_residual, samples, "ok" if result.passed else "FAILED")
    return result


def igusa_relation_suite(cfg: PrecisionConfig, n: int = 100, seed: int = SUITE_SEED) -> SuiteResult:
    """E₄³ − E₆² = 1728Δ on reduced degree 1 points, relative to |E₄|³."""

    rng = np.random.default_rng(seed)
    worst = mpf(0)
    with cfg.workdps():
        for tau in _reduced_points1(rng, n):
            e4, e6, delta = (eval_form(f, tau, cfg) for f in (E4_1, E6_1, DELTA_1))
            worst = max(worst, abs(e4**3 - e6**2 - 1728 * delta) / abs(e4) ** 3)
    return _finish("igusa relation", worst, 1e-9, n)


def splitting_suite(
    cfg: PrecisionConfig, triples: TripleSystem | None = None, n: int = 100, seed: int = SUITE_SEED
) -> SuiteResult:
    """E₄, E₆ multiply, χ₁₂ = 12ΔΔ and χ₁₀ = 0 on diagonal points."""

    triples = triples or load_or_calibrate(cfg)
    rng = np.random.default_rng(seed)
    worst = mpf(0)
    with cfg.workdps():
        for t1, t2 in zip(_reduced_points1(rng, n), _reduced_points1(rng, n), strict=True):
            tau = SiegelPoint2.diagonal(t1.tau, t2.tau)
            for big, small in ((E4_2, E4_1), (E6_2, E6_1)):
                expected = eval_form(small, t1, cfg) * eval_form(small, t2, cfg)
                worst = max(worst, abs(eval_form(big, tau, cfg, triples) - expected) / abs(expected))
            deltas = eval_form(DELTA_1, t1, cfg) * eval_form(DELTA_1, t2, cfg)
            worst = max(worst, abs(eval_form(CHI12_2, tau, cfg) - 12 * deltas) / abs(12 * deltas))
            worst = max(worst, abs(eval_form(CHI10_2, tau, cfg)) / abs(deltas))
    return _finish("splitting", worst, 1e-9, n)


def boundary_suite(
    cfg: PrecisionConfig,
    triples: TripleSystem | None = None,
    n: int = 20,
    y1: float = 30.0,
    seed: int = SUITE_SEED,
) -> SuiteResult:
    """|E_k(τ) − E_k(τ₂)| as Im τ₁ grows, for k = 4, 6."""

    triples = triples or load_or_calibrate(cfg)
    rng = np.random.default_rng(seed)
    worst = mpf(0)
    with cfg.workdps():
        for t2 in _reduced_points1(rng, n):
            x1, x12 = rng.uniform(-0.5, 0.5, size=2)
            y12 = rng.uniform(-0.3, 0.3)
            tau = SiegelPoint2(x1, x12, t2.x, y1, y12, t2.y)
            for big, small in ((E4_2, E4_1), (E6_2, E6_1)):
                worst = max(worst, abs(eval_form(big, tau, cfg, triples) - eval_form(small, t2, cfg)))
    return _finish("boundary", worst, 1e-15, n)


def delta_routes_suite(cfg: PrecisionConfig, n: int = 20, seed: int = SUITE_SEED) -> SuiteResult:
    """The theta and q-product formulas for Δ agree."""

    rng = np.random.default_rng(seed)
    worst = mpf(0)
    with cfg.workdps():
        for tau in _reduced_points1(rng, n):
            q_route = delta_q_product(tau, cfg)
            worst = max(worst, abs(delta_theta(tau, cfg) - q_route) / abs(q_route))
    return _finish("delta routes", worst, 1e-20, n)


def norm_invariance_suite(
    cfg: PrecisionConfig,
    triples: TripleSystem | None = None,
    n: int = 50,
    word_length: int = 6,
    seed: int = SUITE_SEED,
) -> SuiteResult:
    """Petersson norms of the degree 2 forms under random symplectic words."""

    triples = triples or load_or_calibrate(cfg)
    rng = np.random.default_rng(seed)
    worst = mpf(0)
    with cfg.workdps():
        for tau in _generic_points2(rng, n):
            image, _ = act(random_word(rng, word_length), tau, cfg)
            for form in DEGREE2_FORMS:
                before = petersson_norm(form, tau, cfg, triples)
                after = petersson_norm(form, image, cfg, triples)
                worst = max(worst, abs(after - before) / before)
    return _finish("norm invariance", worst, 1e-8, n)


def reduction_roundtrip_suite(
    cfg: PrecisionConfig, n: int = 10, word_length: int = 6, seed: int = SUITE_SEED
) -> SuiteResult:
    """reduce2(Mτ) and reduce2(τ) land on the same point."""

    rng = np.random.default_rng(seed)
    worst = mpf(0)
    with cfg.workdps():
        for tau in _generic_points2(rng, n):
            image, _ = act(random_word(rng, word_length), tau, cfg)
            a = reduce2(tau, cfg).point.matrix()
            b = reduce2(image, cfg).point.matrix()
            worst = max(worst, mp.mnorm(a - b, 1))
    return _finish("reduction round trip", worst, 1e-9, n)


SUITES: dict[str, Callable[[PrecisionConfig], SuiteResult]] = {
    "igusa": igusa_relation_suite,
    "splitting": splitting_suite,
    "boundary": boundary_suite,
    "delta": delta_routes_suite,
    "invariance": norm_invariance_suite,
    "reduction": reduction_roundtrip_suite,
}


def run_suites(cfg: PrecisionConfig, names: list[str] | None = None) -> list[SuiteResult]:
    return [SUITES[name](cfg) for name in names or list(SUITES)]
