"""Degree 1 and degree 2 theta constants with characteristics."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cache
from itertools import product
import logging
import math
from typing import TYPE_CHECKING

from mpmath import mp, mpc, mpf
import numpy as np

from .errors import DomainError

if TYPE_CHECKING:
    from .numerics import PrecisionConfig

log = logging.getLogger(__name__)

MAX_TRUNCATION_RADIUS = 2000
_PHASES = ((1, 0), (0, 1), (-1, 0), (0, -1))  # i**m for m mod 4


@dataclass(frozen=True, order=True)
class Characteristic:
    """A theta characteristic (a, b) of 0/1 vectors of length g."""

    a: tuple[int, ...]
    b: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.a) != len(self.b) or len(self.a) not in {1, 2}:
            raise DomainError(f"characteristic vectors must both have length 1 or 2: {self}")
        if any(v not in {0, 1} for v in (*self.a, *self.b)):
            raise DomainError(f"characteristic entries must be 0 or 1: {self}")

    @classmethod
    def parse(cls, label: str) -> Characteristic:
        """Parse a label written a₁a₂b₁b₂ (or ab for degree 1), e.g. ``"0110"``."""

        if len(label) not in {2, 4} or set(label) - {"0", "1"}:
            raise DomainError(f"invalid characteristic label {label!r}")
        g = len(label) // 2
        bits = tuple(int(c) for c in label)
        return cls(bits[:g], bits[g:])

    @property
    def g(self) -> int:
        return len(self.a)

    @property
    def is_even(self) -> bool:
        return sum(x * y for x, y in zip(self.a, self.b, strict=True)) % 2 == 0

    @property
    def label(self) -> str:
        return "".join(str(v) for v in (*self.a, *self.b))

    def __add__(self, other: Characteristic) -> Characteristic:
        return Characteristic(
            tuple((x + y) % 2 for x, y in zip(self.a, other.a, strict=True)),
            tuple((x + y) % 2 for x, y in zip(self.b, other.b, strict=True)),
        )

    def component(self, i: int) -> Characteristic:
        """Degree 1 factor of a degree 2 characteristic."""

        return Characteristic((self.a[i],), (self.b[i],))

    def __str__(self) -> str:
        return self.label


@cache
def even_characteristics(g: int) -> tuple[Characteristic, ...]:
    """Even characteristics of degree g in lexicographic (a, b) order."""

    if g not in {1, 2}:
        raise DomainError(f"only degrees 1 and 2 are supported, got {g}")
    vectors = list(product((0, 1), repeat=g))
    chars = (Characteristic(a, b) for a in vectors for b in vectors)
    return tuple(sorted(c for c in chars if c.is_even))


def _as_mpf(value: object) -> mpf:
    return value if isinstance(value, mpf) else mpf(value)  # type: ignore[arg-type]


@dataclass(frozen=True)
class SiegelPoint1:
    """τ₁ = x + iy in the upper half plane."""

    x: mpf
    y: mpf

    def __post_init__(self) -> None:
        object.__setattr__(self, "x", _as_mpf(self.x))
        object.__setattr__(self, "y", _as_mpf(self.y))
        if self.y <= 0:
            raise DomainError(f"imaginary part must be positive, got {self.y}")

    @classmethod
    def from_complex(cls, tau: complex | mpc) -> SiegelPoint1:
        return cls(mpf(tau.real), mpf(tau.imag))

    @property
    def tau(self) -> mpc:
        return mpc(self.x, self.y)


@dataclass(frozen=True)
class SiegelPoint2:
    """τ = x + iy in the Siegel upper half space of degree 2.

    Entries are stored as (τ₁, τ₁₂, τ₂) = (x1 + i·y1, x12 + i·y12, x2 + i·y2).
    """

    x1: mpf
    x12: mpf
    x2: mpf
    y1: mpf
    y12: mpf
    y2: mpf

    def __post_init__(self) -> None:
        for name in ("x1", "x12", "x2", "y1", "y12", "y2"):
            object.__setattr__(self, name, _as_mpf(getattr(self, name)))
        if self.y1 <= 0 or self.det_y <= 0:
            raise DomainError("imaginary part must be positive definite")

    @classmethod
    def from_entries(
        cls, tau1: complex | mpc, tau12: complex | mpc, tau2: complex | mpc
    ) -> SiegelPoint2:
        return cls(
            mpf(tau1.real),
            mpf(tau12.real),
            mpf(tau2.real),
            mpf(tau1.imag),
            mpf(tau12.imag),
            mpf(tau2.imag),
        )

    @classmethod
    def diagonal(cls, tau1: complex | mpc, tau2: complex | mpc) -> SiegelPoint2:
        return cls.from_entries(tau1, 0, tau2)

    @classmethod
    def from_matrix(cls, tau: mp.matrix) -> SiegelPoint2:
        """Build from a 2×2 mpmath matrix, symmetrizing the off-diagonal entry."""

        return cls.from_entries(tau[0, 0], (tau[0, 1] + tau[1, 0]) / 2, tau[1, 1])

    @property
    def tau1(self) -> mpc:
        return mpc(self.x1, self.y1)

    @property
    def tau12(self) -> mpc:
        return mpc(self.x12, self.y12)

    @property
    def tau2(self) -> mpc:
        return mpc(self.x2, self.y2)

    @property
    def det_y(self) -> mpf:
        return self.y1 * self.y2 - self.y12**2

    @property
    def is_diagonal(self) -> bool:
        return self.x12 == 0 and self.y12 == 0

    def matrix(self) -> mp.matrix:
        return mp.matrix([[self.tau1, self.tau12], [self.tau12, self.tau2]])

    def translated(self, dx1: int = 0, dx12: int = 0, dx2: int = 0) -> SiegelPoint2:
        """Shift x by an integer matrix; the sums are exact at any working precision."""

        return SiegelPoint2(
            mp.fadd(self.x1, dx1, exact=True),
            mp.fadd(self.x12, dx12, exact=True),
            mp.fadd(self.x2, dx2, exact=True),
            self.y1,
            self.y12,
            self.y2,
        )

    def min_eigenvalue(self) -> float:
        y = np.array(
            [[float(self.y1), float(self.y12)], [float(self.y12), float(self.y2)]]
        )
        return float(np.linalg.eigvalsh(y)[0])


# ---------- truncation ----------
def _shell_size(k: int, g: int) -> int:
    return 2 if g == 1 else 8 * k


def truncation_radius(
    lam_min: float, tolerance: float, g: int = 2, *, derivative: bool = False
) -> int:
    """Smallest radius R whose dropped shells sum below ``tolerance``.

    A lattice point n with |n|∞ = k has |n + a/2| ≥ k − 1/2, so its term is
    bounded by exp(−π·λ_min·(k − 1/2)²), times π·k² for the x₁-derivative.
    The tail bound doubles the first omitted shell; successive shells shrink
    by more than half once R ≥ 1.
    """

    if lam_min <= 0:
        raise DomainError("imaginary part must be positive definite")
    radius = 1
    while True:
        k = radius + 1
        weight = 1 + math.pi * k * k if derivative else 1
        first = _shell_size(k, g) * weight * math.exp(-math.pi * lam_min * (k - 0.5) ** 2)
        if 2 * first < tolerance:
            return radius
        radius += 1
        if radius > MAX_TRUNCATION_RADIUS:
            raise DomainError(f"theta truncation radius exceeds {MAX_TRUNCATION_RADIUS}")


@cache
def _shell_order_1d(radius: int) -> tuple[int, ...]:
    return tuple(sorted(range(-radius, radius + 1), key=lambda n: (abs(n), n)))


@cache
def _shell_order_2d(radius: int) -> tuple[tuple[int, int], ...]:
    points = product(range(-radius, radius + 1), repeat=2)
    return tuple(sorted(points, key=lambda n: (max(abs(n[0]), abs(n[1])), n)))


def _phase(m: int) -> mpc:
    re, im = _PHASES[m % 4]
    return mpc(re, im)


# ---------- degree 1 ----------
def theta1(ch: Characteristic, tau1: SiegelPoint1, cfg: PrecisionConfig) -> mpc:
    """ϑ_{a,b}(τ₁) = Σₙ exp(πi((n + a/2)²τ₁ + (n + a/2)b))."""

    if ch.g != 1:
        raise DomainError(f"theta1 needs a degree 1 characteristic, got {ch}")
    if not ch.is_even:
        return mpc(0)
    (a,), (b,) = ch.a, ch.b
    with cfg.workdps():
        radius = truncation_radius(float(tau1.y), cfg.series_tolerance, g=1)
        pi_i_tau = mpc(0, mp.pi) * tau1.tau
        total = mpc(0)
        for n in _shell_order_1d(radius):
            u = n + mpf(a) / 2
            total += mp.exp(pi_i_tau * u * u) * _phase(b * (2 * n + a))
        return +total


def theta_table1(tau1: SiegelPoint1, cfg: PrecisionConfig) -> dict[Characteristic, mpc]:
    return {ch: theta1(ch, tau1, cfg) for ch in even_characteristics(1)}


# ---------- degree 2 ----------
def _lattice_terms(
    a: tuple[int, ...], tau: SiegelPoint2, radius: int
) -> dict[tuple[int, int], mpc]:
    """exp(πi·uᵗτu) with u = n + a/2 over the square |n|∞ ≤ radius.

    Row and column factors are exponentiated once; the τ₁₂ cross factor is
    advanced along each row by a constant multiplier.
    """

    pi_i = mpc(0, mp.pi)
    half = mpf(1) / 2
    offsets = range(-radius, radius + 1)
    u2s = {n2: n2 + a[1] * half for n2 in offsets}
    cols = {n2: mp.exp(pi_i * tau.tau2 * u2 * u2) for n2, u2 in u2s.items()}
    terms: dict[tuple[int, int], mpc] = {}
    for n1 in offsets:
        u1 = n1 + a[0] * half
        row = mp.exp(pi_i * tau.tau1 * u1 * u1)
        step = mp.exp(2 * pi_i * tau.tau12 * u1)
        cross = mp.exp(2 * pi_i * tau.tau12 * u1 * u2s[-radius])
        for n2 in offsets:
            terms[n1, n2] = row * cross * cols[n2]
            cross *= step
    return terms


def _characteristic_sum(
    ch: Characteristic,
    terms: dict[tuple[int, int], mpc],
    radius: int,
    *,
    derivative: bool = False,
) -> mpc:
    a1, a2 = ch.a
    b1, b2 = ch.b
    pi_i = mpc(0, mp.pi)
    total = mpc(0)
    for n1, n2 in _shell_order_2d(radius):
        term = terms[n1, n2] * _phase(b1 * (2 * n1 + a1) + b2 * (2 * n2 + a2))
        if derivative:
            u1 = n1 + mpf(a1) / 2
            term *= pi_i * u1 * u1
        total += term
    return total


def _radius_for(tau: SiegelPoint2, cfg: PrecisionConfig, *, derivative: bool) -> int:
    lam = tau.min_eigenvalue()
    radius = truncation_radius(lam, cfg.series_tolerance, derivative=derivative)
    log.debug("theta truncation: lambda_min=%.4g radius=%d", lam, radius)
    return radius


def theta2(
    ch: Characteristic,
    tau: SiegelPoint2,
    cfg: PrecisionConfig,
    radius: int | None = None,
) -> mpc:
    """Degree 2 theta constant ϑ_{a,b}(τ).

    Odd characteristics return exactly zero. Diagonal points use the product
    ϑ_{a₁,b₁}(τ₁)·ϑ_{a₂,b₂}(τ₂) unless an explicit radius is requested.
    """

    if ch.g != 2:
        raise DomainError(f"theta2 needs a degree 2 characteristic, got {ch}")
    if not ch.is_even:
        return mpc(0)
    with cfg.workdps():
        if radius is None and tau.is_diagonal:
            return +(
                theta1(ch.component(0), SiegelPoint1(tau.x1, tau.y1), cfg)
                * theta1(ch.component(1), SiegelPoint1(tau.x2, tau.y2), cfg)
            )
        if radius is None:
            radius = _radius_for(tau, cfg, derivative=False)
        terms = _lattice_terms(ch.a, tau, radius)
        return +_characteristic_sum(ch, terms, radius)


def theta2_dx1(
    ch: Characteristic,
    tau: SiegelPoint2,
    cfg: PrecisionConfig,
    radius: int | None = None,
) -> mpc:
    """∂ϑ_{a,b}/∂x₁ by termwise differentiation of the lattice sum."""

    if ch.g != 2:
        raise DomainError(f"theta2_dx1 needs a degree 2 characteristic, got {ch}")
    if not ch.is_even:
        return mpc(0)
    with cfg.workdps():
        if radius is None:
            radius = _radius_for(tau, cfg, derivative=True)
        terms = _lattice_terms(ch.a, tau, radius)
        return +_characteristic_sum(ch, terms, radius, derivative=True)


def theta_table(tau: SiegelPoint2, cfg: PrecisionConfig) -> dict[Characteristic, mpc]:
    """All ten even degree 2 theta constants, sharing lattice terms per a."""

    with cfg.workdps():
        if tau.is_diagonal:
            left = theta_table1(SiegelPoint1(tau.x1, tau.y1), cfg)
            right = theta_table1(SiegelPoint1(tau.x2, tau.y2), cfg)
            return {
                ch: +(left.get(ch.component(0), mpc(0)) * right.get(ch.component(1), mpc(0)))
                for ch in even_characteristics(2)
            }
        radius = _radius_for(tau, cfg, derivative=False)
        table: dict[Characteristic, mpc] = {}
        by_a: dict[tuple[int, ...], dict[tuple[int, int], mpc]] = {}
        for ch in even_characteristics(2):
            if ch.a not in by_a:
                by_a[ch.a] = _lattice_terms(ch.a, tau, radius)
            table[ch] = +_characteristic_sum(ch, by_a[ch.a], radius)
        return table
