"""Working precision, zeta values and exact constant combinations."""

from __future__ import annotations

from dataclasses import dataclass
from enum import StrEnum
from fractions import Fraction
import logging
from typing import TYPE_CHECKING

import mpmath
from mpmath import mp, mpf

from .errors import DomainError

if TYPE_CHECKING:
    from collections.abc import Iterator, Mapping
    from contextlib import AbstractContextManager

log = logging.getLogger(__name__)

DEFAULT_WORKING_DIGITS = 50
DEFAULT_SERIES_TOLERANCE = 1e-45
DEFAULT_QUADRATURE_TOLERANCE = 1e-8
MIN_WORKING_DIGITS = 15
GUARD_DIGITS = 10
SUPPORTED_NEGATIVE_ZETA = (1, 3)


@dataclass(frozen=True)
class PrecisionConfig:
    """Precision knobs shared by every high-precision evaluation."""

    working_digits: int = DEFAULT_WORKING_DIGITS
    series_tolerance: float = DEFAULT_SERIES_TOLERANCE
    quadrature_tolerance: float = DEFAULT_QUADRATURE_TOLERANCE

    def __post_init__(self) -> None:
        if self.working_digits < MIN_WORKING_DIGITS:
            raise DomainError(
                f"working_digits must be at least {MIN_WORKING_DIGITS}, got {self.working_digits}"
            )
        if not 0 < self.series_tolerance < 1:
            raise DomainError("series_tolerance must lie in (0, 1)")
        if not 0 < self.quadrature_tolerance < 1:
            raise DomainError("quadrature_tolerance must lie in (0, 1)")

    def workdps(self) -> AbstractContextManager[None]:
        """Scope mpmath to the working precision plus guard digits."""

        return mp.workdps(self.working_digits + GUARD_DIGITS)  # type: ignore[no-any-return]

    def tolerance(self) -> mpf:
        return mpf(self.series_tolerance)


def fraction_to_mpf(value: Fraction) -> mpf:
    return mpf(value.numerator) / value.denominator


# ---------- zeta ----------
def zeta_negative(n: int) -> Fraction:
    """Return ζ(−n) exactly as −B_{n+1}/(n+1)."""

    if n not in SUPPORTED_NEGATIVE_ZETA:
        raise DomainError(f"unsupported zeta argument: -{n}")
    num, den = mpmath.bernfrac(n + 1)
    return -Fraction(int(num), int(den)) / (n + 1)


def zeta_and_derivative(s: float | mpf, cfg: PrecisionConfig) -> tuple[mpf, mpf]:
    """Return (ζ(s), ζ′(s)) for real s > 1 by Euler–Maclaurin summation.

    The head is summed directly up to N − 1 with N = working_digits + 10; the
    Bernoulli correction terms are added until both the term and its
    s-derivative fall below a tenth of the series tolerance.

    Args:
        s: Real argument, strictly greater than 1.
        cfg: Precision settings.

    Returns:
        The pair (ζ(s), ζ′(s)) at working precision.
    """

    with cfg.workdps():
        s = mpf(s)
        if s <= 1:
            raise DomainError(f"zeta_and_derivative needs s > 1, got {s}")
        tol = cfg.tolerance() / 10
        head = cfg.working_digits + 10
        zeta = mpf(0)
        dzeta = mpf(0)
        for n in range(1, head):
            term = mpf(n) ** (-s)
            zeta += term
            dzeta -= term * mp.log(n)

        big_n = mpf(head)
        log_n = mp.log(big_n)
        power = big_n ** (-s)
        zeta += big_n * power / (s - 1) + power / 2
        dzeta -= log_n * big_n * power / (s - 1)
        dzeta -= big_n * power / (s - 1) ** 2
        dzeta -= log_n * power / 2

        rising = s
        d_rising = mpf(1)
        n_power = power / big_n
        for j in range(1, 4 * head):
            coeff = mp.bernoulli(2 * j) / mp.factorial(2 * j)
            term = coeff * rising * n_power
            d_term = coeff * n_power * (d_rising - log_n * rising)
            zeta += term
            dzeta += d_term
            if abs(term) < tol and abs(d_term) < tol:
                log.debug("Euler-Maclaurin at s=%s: N=%d, %d correction terms", s, head, j)
                break
            lo, hi = s + 2 * j - 1, s + 2 * j
            d_rising = d_rising * lo * hi + rising * (lo + hi)
            rising *= lo * hi
            n_power /= big_n**2
        else:
            raise DomainError(f"Euler-Maclaurin correction did not converge at s={s}")
        return +zeta, +dzeta


def zeta_log_derivative_negative(n: int, cfg: PrecisionConfig) -> mpf:
    """Return ζ′(−n)/ζ(−n) from the differentiated functional equation."""

    if n not in SUPPORTED_NEGATIVE_ZETA:
        raise DomainError(f"unsupported zeta argument: -{n}")
    with cfg.workdps():
        zeta_s, dzeta_s = zeta_and_derivative(1 + n, cfg)
        # cot(πs/2) vanishes at odd negative integers
        return +(mp.log(2 * mp.pi) - mp.digamma(1 + n) - dzeta_s / zeta_s)


def zeta_prime_negative(n: int, cfg: PrecisionConfig) -> mpf:
    """Return ζ′(−n) for n ∈ {1, 3}."""

    ratio = zeta_log_derivative_negative(n, cfg)
    with cfg.workdps():
        return +(fraction_to_mpf(zeta_negative(n)) * ratio)


# ---------- exact combinations ----------
class Basis(StrEnum):
    """Symbols an exact constant combination is built from."""

    ONE = "ONE"
    Z1 = "Z1"
    Z3 = "Z3"
    LOG2 = "LOG2"
    LOG3 = "LOG3"


BASIS_ORDER: tuple[Basis, ...] = tuple(Basis)


@dataclass(frozen=True)
class ConstantCombo:
    """Exact rational combination over ``Basis``; one coefficient per symbol."""

    coefficients: tuple[Fraction, ...] = (Fraction(0),) * len(BASIS_ORDER)

    def __post_init__(self) -> None:
        if len(self.coefficients) != len(BASIS_ORDER):
            raise DomainError(
                f"ConstantCombo needs {len(BASIS_ORDER)} coefficients, got {len(self.coefficients)}"
            )
        normalized: list[Fraction] = []
        for value in self.coefficients:
            if not isinstance(value, (Fraction, int)) or isinstance(value, bool):
                raise DomainError(f"coefficients must be rational, got {type(value)!r}")
            normalized.append(Fraction(value))
        object.__setattr__(self, "coefficients", tuple(normalized))

    @classmethod
    def of(cls, terms: Mapping[Basis, Fraction | int]) -> ConstantCombo:
        return cls(tuple(Fraction(terms.get(b, 0)) for b in BASIS_ORDER))

    def __getitem__(self, basis: Basis) -> Fraction:
        return self.coefficients[BASIS_ORDER.index(basis)]

    def items(self) -> Iterator[tuple[Basis, Fraction]]:
        return zip(BASIS_ORDER, self.coefficients, strict=True)

    def __add__(self, other: ConstantCombo) -> ConstantCombo:
        return ConstantCombo(
            tuple(a + b for a, b in zip(self.coefficients, other.coefficients, strict=True))
        )

    def __sub__(self, other: ConstantCombo) -> ConstantCombo:
        return self + (-other)

    def __neg__(self) -> ConstantCombo:
        return self.scaled(-1)

    def __mul__(self, factor: Fraction | int) -> ConstantCombo:
        return self.scaled(factor)

    __rmul__ = __mul__

    def scaled(self, factor: Fraction | int) -> ConstantCombo:
        if not isinstance(factor, (Fraction, int)) or isinstance(factor, bool):
            raise DomainError(f"combos scale by rationals only, got {type(factor)!r}")
        return ConstantCombo(tuple(c * factor for c in self.coefficients))

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coefficients)

    def as_dict(self) -> dict[str, str]:
        return {b.value: str(c) for b, c in self.items()}

    def __str__(self) -> str:
        parts = [f"{c}*{b.value}" for b, c in self.items() if c != 0]
        return " + ".join(parts) if parts else "0"


def basis_value(basis: Basis, cfg: PrecisionConfig) -> mpf:
    """Numeric value of a single basis symbol."""

    with cfg.workdps():
        match basis:
            case Basis.ONE:
                return mpf(1)
            case Basis.Z1:
                return zeta_log_derivative_negative(1, cfg)
            case Basis.Z3:
                return zeta_log_derivative_negative(3, cfg)
            case Basis.LOG2:
                return +mp.log(2)
            case Basis.LOG3:
                return +mp.log(3)


def combo_eval(combo: ConstantCombo, cfg: PrecisionConfig) -> mpf:
    """Evaluate Σ coefficient·value over the basis at working precision."""

    with cfg.workdps():
        total = mpf(0)
        for basis, coeff in combo.items():
            if coeff != 0:
                total += fraction_to_mpf(coeff) * basis_value(basis, cfg)
        return +total
