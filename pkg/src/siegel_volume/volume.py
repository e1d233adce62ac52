"""Exact assembly of the complex-fiber arithmetic volume of 𝒜₂."""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction
import logging
from typing import TYPE_CHECKING

from .errors import DomainError
from .numerics import Basis, ConstantCombo, PrecisionConfig, combo_eval, zeta_negative

if TYPE_CHECKING:
    from mpmath import mpf

    from .storage import JSONObject

log = logging.getLogger(__name__)

# 10·6·4·12: the weights of χ₁₀, E₆, E₄ and χ₁₂
WEIGHT_PRODUCT = 10 * 6 * 4 * 12
FINITE_CONTRIBUTION = "rational multiple of log 2 and log 3, undetermined"
PROOF_LOG2 = Fraction(-56, 15)
PROOF_LOG3 = Fraction(-2, 3)


def _zeta_product() -> Fraction:
    return zeta_negative(3) * zeta_negative(1)


def term_A() -> ConstantCombo:  # noqa: N802
    """(A) = 2880·ζ(−3)ζ(−1)·(4/3 + 2ζ′(−3)/ζ(−3) − ζ′(−1)/ζ(−1) + (6/5)log 2)."""

    prefactor = WEIGHT_PRODUCT * _zeta_product()
    inner = ConstantCombo.of(
        {Basis.ONE: Fraction(4, 3), Basis.Z3: 2, Basis.Z1: -1, Basis.LOG2: Fraction(6, 5)}
    )
    return inner * prefactor


def term_B() -> ConstantCombo:  # noqa: N802
    """(B) = −6(1/2 + ζ′(−1)/ζ(−1)) − (4/3)log 2 − (2/3)log 3."""

    return ConstantCombo.of(
        {Basis.ONE: -3, Basis.Z1: -6, Basis.LOG2: Fraction(-4, 3), Basis.LOG3: Fraction(-2, 3)}
    )


def main_theorem_form(c2: Fraction, c3: Fraction) -> ConstantCombo:
    """ζ(−3)ζ(−1)(17/6 + 2ζ′(−3)/ζ(−3) + 2ζ′(−1)/ζ(−1)) + c₂ log 2 + c₃ log 3."""

    zz = _zeta_product()
    return ConstantCombo.of(
        {
            Basis.ONE: zz * Fraction(17, 6),
            Basis.Z3: 2 * zz,
            Basis.Z1: 2 * zz,
            Basis.LOG2: c2,
            Basis.LOG3: c3,
        }
    )


def a1_volume_reference() -> ConstantCombo:
    """ĥvol(𝒜̄₁) = ζ(−1)(ζ′(−1)/ζ(−1) + 1/2)."""

    z1 = zeta_negative(1)
    return ConstantCombo.of({Basis.ONE: z1 / 2, Basis.Z1: z1})


@dataclass(frozen=True)
class Discrepancy:
    """A basis coefficient where the assembled value differs from a stated one."""

    reference: str
    basis: Basis
    computed: Fraction
    stated: Fraction

    @property
    def difference(self) -> Fraction:
        return self.computed - self.stated

    def __str__(self) -> str:
        return (
            f"{self.reference}: {self.basis.value} computed {self.computed}, "
            f"stated {self.stated} (difference {self.difference})"
        )


def compare(reference: str, computed: ConstantCombo, stated: ConstantCombo) -> tuple[Discrepancy, ...]:
    return tuple(
        Discrepancy(reference, basis, value, stated[basis])
        for basis, value in computed.items()
        if value != stated[basis]
    )


@dataclass(frozen=True)
class VolumeReport:
    term_A: ConstantCombo  # noqa: N815
    term_B: ConstantCombo  # noqa: N815
    assembled: ConstantCombo
    theorem_stated: ConstantCombo
    theorem_abstract: ConstantCombo
    c2_c3_computed: tuple[Fraction, Fraction]
    discrepancies: tuple[Discrepancy, ...]
    a1_reference: ConstantCombo
    numeric_values: dict[str, float] = field(default_factory=dict)
    finite_contribution: str = FINITE_CONTRIBUTION

    def combos(self) -> dict[str, ConstantCombo]:
        return {
            "term_A": self.term_A,
            "term_B": self.term_B,
            "assembled": self.assembled,
            "theorem_stated": self.theorem_stated,
            "theorem_abstract": self.theorem_abstract,
            "a1_reference": self.a1_reference,
        }

    def to_json(self) -> JSONObject:
        c2, c3 = self.c2_c3_computed
        return {
            "combos": {name: combo.as_dict() for name, combo in self.combos().items()},  # type: ignore[dict-item]
            "numeric_values": {k: repr(v) for k, v in self.numeric_values.items()},
            "c2_c3_computed": [str(c2), str(c3)],
            "discrepancies": [str(d) for d in self.discrepancies],
            "finite_contribution": self.finite_contribution,
        }


def assemble(cfg: PrecisionConfig | None = None) -> VolumeReport:
    """Combine (A) and (B), extract c₂ and c₃, and compare with the stated forms.

    Two references are compared: the proof's explicit log coefficients
    (−56/15, −2/3) and the theorem's symbolic form with c₂, c₃ taken from the
    assembly itself. The second comparison isolates the ζ part.
    """

    a, b = term_A(), term_B()
    assembled = (a + b) * Fraction(1, WEIGHT_PRODUCT)
    c2, c3 = assembled[Basis.LOG2], assembled[Basis.LOG3]
    stated = main_theorem_form(PROOF_LOG2, PROOF_LOG3)
    abstract = main_theorem_form(c2, c3)
    discrepancies = compare("proof", assembled, stated) + compare("theorem", assembled, abstract)
    for d in discrepancies:
        log.info("%s", d)
    report = VolumeReport(
        term_A=a,
        term_B=b,
        assembled=assembled,
        theorem_stated=stated,
        theorem_abstract=abstract,
        c2_c3_computed=(c2, c3),
        discrepancies=discrepancies,
        a1_reference=a1_volume_reference(),
    )
    if cfg is None:
        return report
    numeric = {name: float(combo_eval(combo, cfg)) for name, combo in report.combos().items()}
    return replace(report, numeric_values=numeric)


def numeric_value(combo: ConstantCombo, cfg: PrecisionConfig | None = None) -> mpf:
    return combo_eval(combo, cfg or PrecisionConfig())


def weight_scaled(report: VolumeReport, k: int) -> ConstantCombo:
    """Complex-fiber degree of the weight-k bundle: k⁴ times the assembled constant."""

    if k < 1:
        raise DomainError(f"weight must be a positive integer, got {k}")
    return report.assembled * k**4
