"""The quartic model of 𝒜₂ in ℙ⁴ and its modular-form equations over ℤ and F_p."""

from __future__ import annotations

from dataclasses import dataclass
from enum import StrEnum
from functools import cache
from itertools import product
import logging
import math
from typing import TYPE_CHECKING

from mpmath import mp, mpc, mpf
import numpy as np

from . import storage
from .errors import DomainError, ReconstructionError
from .forms import FormName, degree2_from_thetas, enumerate_syzygous_quadruples, load_or_calibrate
from .theta import Characteristic, SiegelPoint2, even_characteristics, theta_table

if TYPE_CHECKING:
    from collections.abc import Iterator, Mapping, Sequence
    from pathlib import Path

    from numpy.typing import NDArray

    from .forms import TripleSystem
    from .numerics import PrecisionConfig

log = logging.getLogger(__name__)

type Exponent = tuple[int, ...]

N_VARS = 5
MAX_PRIME = 101
RECONSTRUCTION_SEED = 6
SAMPLES_PER_UNKNOWN = 3
INTEGRALITY_SLACK = 1e-3
RESIDUAL_THRESHOLD = 1e-6
ENUMERATION_CHUNK = 1 << 20
LEADING_EXPONENT: Exponent = (0, 0, 0, 2, 2)
SYMMETRIES: tuple[tuple[int, ...], ...] = (
    (1, 0, 2, 3, 4),
    (0, 2, 1, 3, 4),
    (0, 1, 2, 4, 3),
)

# ϑ_m⁴ as integer linear forms in y₀..y₄
LINEAR_FORMS: dict[str, tuple[int, ...]] = {
    "0000": (0, 0, 1, 0, 0),
    "0001": (0, 0, 1, 0, 1),
    "0010": (1, 1, 1, 1, 1),
    "0011": (0, 0, 1, 1, 0),
    "0100": (0, 1, 0, 0, 0),
    "0110": (1, 0, 0, 0, 0),
    "1000": (-1, 0, 0, -1, 0),
    "1001": (0, -1, 0, -1, 0),
    "1100": (-1, 0, 0, 0, -1),
    "1111": (0, -1, 0, 0, -1),
}


# ---------- polynomials ----------
def _check_exponent(exp: Sequence[int]) -> Exponent:
    if len(exp) != N_VARS or any(not isinstance(e, int) or e < 0 for e in exp):
        raise DomainError(f"exponent must be {N_VARS} non-negative integers, got {exp!r}")
    return tuple(exp)


def _order_key(exp: Exponent) -> tuple[int, Exponent]:
    return exp[3] + exp[4], exp


class IntegerPolynomial5:
    """Polynomial in y₀..y₄ with integer coefficients; zero coefficients are never stored."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[Sequence[int], int] | None = None) -> None:
        clean: dict[Exponent, int] = {}
        for exp, coeff in (terms or {}).items():
            if not isinstance(coeff, int) or isinstance(coeff, bool):
                raise DomainError(f"coefficients must be integers, got {coeff!r}")
            key = _check_exponent(exp)
            total = clean.get(key, 0) + coeff
            if total:
                clean[key] = total
            else:
                clean.pop(key, None)
        self._terms = clean

    @classmethod
    def constant(cls, value: int) -> IntegerPolynomial5:
        return cls({(0,) * N_VARS: value})

    @classmethod
    def variable(cls, i: int) -> IntegerPolynomial5:
        return cls({tuple(int(j == i) for j in range(N_VARS)): 1})

    @classmethod
    def linear(cls, coeffs: Sequence[int]) -> IntegerPolynomial5:
        return cls({tuple(int(j == i) for j in range(N_VARS)): c for i, c in enumerate(coeffs)})

    @property
    def terms(self) -> dict[Exponent, int]:
        return dict(self._terms)

    def coefficient(self, exp: Sequence[int]) -> int:
        return self._terms.get(tuple(exp), 0)

    @property
    def degree(self) -> int:
        return max((sum(e) for e in self._terms), default=0)

    def is_homogeneous(self) -> bool:
        return len({sum(e) for e in self._terms}) <= 1

    def __len__(self) -> int:
        return len(self._terms)

    def __iter__(self) -> Iterator[tuple[Exponent, int]]:
        return iter(sorted(self._terms.items(), reverse=True))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, IntegerPolynomial5):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        return hash(frozenset(self._terms.items()))

    def __repr__(self) -> str:
        return f"IntegerPolynomial5({len(self)} terms, degree {self.degree})"

    def __add__(self, other: IntegerPolynomial5) -> IntegerPolynomial5:
        merged = dict(self._terms)
        for exp, coeff in other._terms.items():
            merged[exp] = merged.get(exp, 0) + coeff
        return IntegerPolynomial5(merged)

    def __neg__(self) -> IntegerPolynomial5:
        return IntegerPolynomial5({e: -c for e, c in self._terms.items()})

    def __sub__(self, other: IntegerPolynomial5) -> IntegerPolynomial5:
        return self + (-other)

    def __mul__(self, other: IntegerPolynomial5 | int) -> IntegerPolynomial5:
        if isinstance(other, int):
            return IntegerPolynomial5({e: c * other for e, c in self._terms.items()})
        out: dict[Exponent, int] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                key = tuple(a + b for a, b in zip(e1, e2, strict=True))
                out[key] = out.get(key, 0) + c1 * c2
        return IntegerPolynomial5(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> IntegerPolynomial5:
        result = IntegerPolynomial5.constant(1)
        for _ in range(n):
            result = result * self
        return result

    def __call__[T: (complex, mpc, mpf, int)](self, values: Sequence[T]) -> T:
        total: T = 0  # type: ignore[assignment]
        for exp, coeff in self._terms.items():
            term: T = coeff  # type: ignore[assignment]
            for v, e in zip(values, exp, strict=True):
                if e:
                    term = term * v**e
            total = total + term
        return total

    def evaluate_mod(self, columns: Sequence[NDArray[np.int64]], p: int) -> NDArray[np.int64]:
        """Values mod p at integer points given column-wise."""

        powers: list[list[NDArray[np.int64]]] = []
        top = self.degree
        for col in columns:
            table = [np.ones_like(col), col % p]
            for _ in range(2, top + 1):
                table.append((table[-1] * col) % p)
            powers.append(table)
        acc = np.zeros_like(columns[0])
        for exp, coeff in self._terms.items():
            term = np.full_like(columns[0], coeff % p)
            for i, e in enumerate(exp):
                if e:
                    term = (term * powers[i][e]) % p
            acc = (acc + term) % p
        return acc

    def permuted(self, perm: Sequence[int]) -> IntegerPolynomial5:
        """Substitute y_i → y_{perm[i]}."""

        out: dict[Exponent, int] = {}
        for exp, coeff in self._terms.items():
            new = [0] * N_VARS
            for i, e in enumerate(exp):
                new[perm[i]] = e
            out[tuple(new)] = coeff
        return IntegerPolynomial5(out)

    def normal_form(self) -> IntegerPolynomial5:
        """Unique representative modulo the quartic with no monomial divisible by y₃²y₄²."""

        tail = (IntegerPolynomial5({LEADING_EXPONENT: 1}) - quartic())._terms
        work = dict(self._terms)
        result: dict[Exponent, int] = {}
        while work:
            exp = max(work, key=_order_key)
            coeff = work.pop(exp)
            if all(a >= b for a, b in zip(exp, LEADING_EXPONENT, strict=True)):
                quotient = tuple(a - b for a, b in zip(exp, LEADING_EXPONENT, strict=True))
                for e2, c2 in tail.items():
                    key = tuple(a + b for a, b in zip(quotient, e2, strict=True))
                    value = work.get(key, 0) + coeff * c2
                    if value:
                        work[key] = value
                    else:
                        work.pop(key, None)
            else:
                result[exp] = coeff
        return IntegerPolynomial5(result)

    def is_symmetric(self) -> bool:
        """Invariance under S₃ on (y₀, y₁, y₂) and y₃ ↔ y₄, modulo the quartic."""

        reduced = self.normal_form()
        return all(self.permuted(s).normal_form() == reduced for s in SYMMETRIES)

    def rows(self) -> list[tuple[int, ...]]:
        return [(c, *e) for e, c in self]

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]]) -> IntegerPolynomial5:
        terms: dict[Exponent, int] = {}
        for row in rows:
            key = tuple(row[1:])
            if key in terms:
                raise DomainError(f"duplicate monomial {key}")
            terms[key] = row[0]
        return cls(terms)


def monomials(degree: int) -> tuple[Exponent, ...]:
    return tuple(
        sorted(e for e in product(range(degree + 1), repeat=N_VARS) if sum(e) == degree)
    )


@cache
def standard_monomials(degree: int) -> tuple[Exponent, ...]:
    """Degree-d monomials not divisible by y₃²y₄²; a basis modulo the quartic."""

    return tuple(e for e in monomials(degree) if not (e[3] >= 2 and e[4] >= 2))


def _y(i: int) -> IntegerPolynomial5:
    return IntegerPolynomial5.variable(i)


@cache
def quartic() -> IntegerPolynomial5:
    """(y₀y₁ + y₀y₂ + y₁y₂ − y₃y₄)² − 4y₀y₁y₂(y₀ + y₁ + y₂ + y₃ + y₄)."""

    y0, y1, y2, y3, y4 = (_y(i) for i in range(N_VARS))
    inner = y0 * y1 + y0 * y2 + y1 * y2 - y3 * y4
    return inner**2 - 4 * (y0 * y1 * y2 * (y0 + y1 + y2 + y3 + y4))


def _chi10_factors() -> list[IntegerPolynomial5]:
    y0, y1, y2, y3, y4 = (_y(i) for i in range(N_VARS))
    return [
        y0,
        y1,
        y2,
        -y2 - y4,
        y0 + y1 + y2 + y3 + y4,
        -y2 - y3,
        y0 + y3,
        -y1 - y3,
        y0 + y4,
        -y1 - y4,
    ]


@cache
def chi10_squared_y() -> IntegerPolynomial5:
    """Product of the ten linear factors; equals 2²⁴χ₁₀² on the quartic."""

    result = IntegerPolynomial5.constant(1)
    for factor in _chi10_factors():
        result = result * factor
    return result


@cache
def e4_y() -> IntegerPolynomial5:
    """Sum of the squared linear factors; equals 4·E₄."""

    result = IntegerPolynomial5()
    for factor in _chi10_factors():
        result = result + factor**2
    return result


# ---------- targets ----------
class FiberTarget(StrEnum):
    QUARTIC = "quartic"
    E4_Y = "E4_y"
    E6_Y = "E6_y"
    CHI10_SQUARED_Y = "chi10^2_y"
    CHI12_Y = "chi12_y"

    @property
    def degree(self) -> int:
        return {
            FiberTarget.QUARTIC: 4,
            FiberTarget.E4_Y: 2,
            FiberTarget.E6_Y: 3,
            FiberTarget.CHI10_SQUARED_Y: 10,
            FiberTarget.CHI12_Y: 6,
        }[self]


RECONSTRUCTIBLE = (FiberTarget.E4_Y, FiberTarget.E6_Y, FiberTarget.CHI12_Y)
_FORM_SCALE: dict[FiberTarget, tuple[FormName, int]] = {
    FiberTarget.E4_Y: (FormName.E4, 4),
    FiberTarget.E6_Y: (FormName.E6, 4),
    FiberTarget.CHI12_Y: (FormName.CHI12, 2**15),
}


def linear_form(ch: Characteristic) -> IntegerPolynomial5:
    return IntegerPolynomial5.linear(LINEAR_FORMS[ch.label])


def symbolic_polynomial(target: FiberTarget, triples: TripleSystem | None = None) -> IntegerPolynomial5:
    """Exact expansion of the theta formula for ``target`` in the linear forms."""

    even = even_characteristics(2)
    forms = [linear_form(ch) for ch in even]
    match target:
        case FiberTarget.QUARTIC:
            return quartic()
        case FiberTarget.E4_Y:
            return sum((f**2 for f in forms), IntegerPolynomial5())
        case FiberTarget.E6_Y:
            if triples is None or triples.signs is None:
                raise DomainError("E6_y needs a calibrated sign table")
            total = IntegerPolynomial5()
            for (i, j, k), s in zip(triples.triples, triples.signs, strict=True):
                total = total + forms[i] * forms[j] * forms[k] * s
            return total
        case FiberTarget.CHI10_SQUARED_Y:
            result = IntegerPolynomial5.constant(1)
            for f in forms:
                result = result * f
            return result
        case FiberTarget.CHI12_Y:
            total = IntegerPolynomial5()
            for sextet in enumerate_syzygous_quadruples().sextets:
                term = IntegerPolynomial5.constant(1)
                for i in sextet:
                    term = term * forms[i]
                total = total + term
            return total


# ---------- coordinates ----------
def y_from_table(table: Mapping[Characteristic, mpc]) -> tuple[mpc, ...]:
    """(y₀, …, y₄) from the even theta constants."""

    def fourth(label: str) -> mpc:
        return table[Characteristic.parse(label)] ** 4

    return (
        fourth("0110"),
        fourth("0100"),
        fourth("0000"),
        -fourth("1000") - fourth("0110"),
        -fourth("1100") - fourth("0110"),
    )


def y_coordinates(tau: SiegelPoint2, cfg: PrecisionConfig) -> tuple[mpc, ...]:
    with cfg.workdps():
        return tuple(+v for v in y_from_table(theta_table(tau, cfg)))


def sample_points(count: int, seed: int = RECONSTRUCTION_SEED) -> list[SiegelPoint2]:
    """Seeded points with Minkowski-reduced imaginary part and det y in [1, 4]."""

    rng = np.random.default_rng(seed)
    points: list[SiegelPoint2] = []
    while len(points) < count:
        y1 = rng.uniform(0.9, 1.8)
        y2 = rng.uniform(y1, 2.4)
        y12 = rng.uniform(0.0, y1 / 2)
        if not 1.0 <= y1 * y2 - y12 * y12 <= 4.0:
            continue
        x1, x12, x2 = rng.uniform(-0.5, 0.5, size=3)
        points.append(SiegelPoint2(x1, x12, x2, y1, y12, y2))
    return points


def theta_fourth_power_forms(cfg: PrecisionConfig, samples: int = 12) -> dict[Characteristic, tuple[int, ...]]:
    """Fit each ϑ_m⁴ as an integer combination of y₀..y₄ and check it against ``LINEAR_FORMS``."""

    even = even_characteristics(2)
    rows: list[list[complex]] = []
    values: dict[Characteristic, list[complex]] = {ch: [] for ch in even}
    with cfg.workdps():
        for tau in sample_points(samples, seed=RECONSTRUCTION_SEED + 1):
            table = theta_table(tau, cfg)
            rows.append([complex(v) for v in y_from_table(table)])
            for ch in even:
                values[ch].append(complex(table[ch] ** 4))
    a = np.array(rows)
    fitted: dict[Characteristic, tuple[int, ...]] = {}
    for ch in even:
        coeffs, *_ = np.linalg.lstsq(a, np.array(values[ch]), rcond=None)
        rounded = tuple(int(v) for v in np.rint(coeffs.real))
        if np.max(np.abs(coeffs - np.array(rounded))) > INTEGRALITY_SLACK:
            raise ReconstructionError(f"reconstruction failed: theta^4 of {ch} is not an integer form")
        if rounded != LINEAR_FORMS[ch.label]:
            raise ReconstructionError(f"reconstruction failed: theta^4 of {ch} fitted as {rounded}")
        fitted[ch] = rounded
    return fitted


# ---------- reconstruction ----------
def target_value(
    target: FiberTarget, table: Mapping[Characteristic, mpc], triples: TripleSystem | None
) -> mpc:
    name, scale = _FORM_SCALE[target]
    return scale * degree2_from_thetas(name, dict(table), triples)


def reconstruct_polynomial(
    target: FiberTarget,
    cfg: PrecisionConfig,
    triples: TripleSystem | None = None,
    seed: int = RECONSTRUCTION_SEED,
) -> IntegerPolynomial5:
    """Recover the integer polynomial of ``target`` in normal form from form evaluations.

    Unknowns are the coefficients of the standard monomials; rows come from
    SAMPLES_PER_UNKNOWN times as many seeded points, each scaled projectively
    by y₂. A float least-squares solve is refined once with a residual taken
    at working precision before rounding.
    """

    if target not in RECONSTRUCTIBLE:
        raise DomainError(f"{target} is not reconstructed numerically")
    if target is FiberTarget.E6_Y and triples is None:
        triples = load_or_calibrate(cfg)
    basis = standard_monomials(target.degree)
    points = sample_points(SAMPLES_PER_UNKNOWN * len(basis), seed)
    with cfg.workdps():
        mp_rows: list[list[mpc]] = []
        mp_rhs: list[mpc] = []
        normalized: list[tuple[mpc, ...]] = []
        for tau in points:
            table = theta_table(tau, cfg)
            ys = y_from_table(table)
            scale = ys[2]
            ys = tuple(v / scale for v in ys)
            normalized.append(ys)
            mp_rows.append([mp.fprod(v**e for v, e in zip(ys, exp, strict=True)) for exp in basis])
            mp_rhs.append(target_value(target, table, triples) / scale**target.degree)

        a = np.array([[complex(v) for v in row] for row in mp_rows])
        b = np.array([complex(v) for v in mp_rhs])
        a_real = np.vstack([a.real, a.imag])
        column_scale = np.linalg.norm(a_real, axis=0)
        a_real = a_real / column_scale

        def solve(rhs: NDArray[np.complex128]) -> NDArray[np.float64]:
            sol, *_ = np.linalg.lstsq(a_real, np.concatenate([rhs.real, rhs.imag]), rcond=None)
            result: NDArray[np.float64] = sol / column_scale
            return result

        x = solve(b)
        x_mp = [mpf(float(v)) for v in x]
        correction = np.array(
            [
                complex(rhs - mp.fsum(c * v for c, v in zip(x_mp, row, strict=True)))
                for row, rhs in zip(mp_rows, mp_rhs, strict=True)
            ]
        )
        x = x + solve(correction)
        rounded = np.rint(x)
        worst = float(np.max(np.abs(x - rounded)))
        log.info("%s: %d unknowns, %d samples, worst distance to Z %.3g", target, len(basis), len(points), worst)
        if worst > INTEGRALITY_SLACK:
            raise ReconstructionError(f"reconstruction failed: {target} coefficients are not integral ({worst:.3g})")

        poly = IntegerPolynomial5(
            {exp: int(c) for exp, c in zip(basis, rounded, strict=True) if int(c)}
        )
        norm = max(abs(v) for v in mp_rhs)
        residual = max(
            abs(poly(row_ys) - rhs)
            for row_ys, rhs in zip(normalized, mp_rhs, strict=True)
        ) / norm
        log.info("%s: relative residual %s", target, mp.nstr(residual, 5))
        if residual > RESIDUAL_THRESHOLD:
            raise ReconstructionError(f"reconstruction failed: residual {mp.nstr(residual, 5)} for {target}")
    if not poly.is_symmetric():
        raise ReconstructionError(f"reconstruction failed: {target} is not symmetric")
    return poly


def save_polynomial(path: Path, target: FiberTarget, poly: IntegerPolynomial5) -> None:
    storage.write_int_rows(path, poly.rows(), header=f"polynomial {target.value} degree {poly.degree}")


def load_polynomial(path: Path) -> IntegerPolynomial5:
    _, rows = storage.read_int_rows(path, width=N_VARS + 1)
    try:
        return IntegerPolynomial5.from_rows(rows)
    except DomainError as exc:
        raise DomainError(f"{path}: {exc}") from exc


def load_or_reconstruct(
    target: FiberTarget,
    cfg: PrecisionConfig,
    directory: Path | None = None,
    triples: TripleSystem | None = None,
) -> IntegerPolynomial5:
    path = directory / f"{target.name.lower()}.txt" if directory is not None else None
    if path is not None and path.exists():
        log.info("loading %s from %s", target, path)
        return load_polynomial(path)
    poly = reconstruct_polynomial(target, cfg, triples)
    if path is not None:
        save_polynomial(path, target, poly)
    return poly


# ---------- F_p points ----------
def _is_prime(n: int) -> bool:
    return n >= 2 and all(n % d for d in range(2, math.isqrt(n) + 1))


def check_prime(p: int) -> None:
    if p == 2:
        raise DomainError("embedding not defined at 2: the model is only defined over Z[1/2]")
    if not _is_prime(p):
        raise DomainError(f"{p} is not prime")
    if p > MAX_PRIME:
        raise DomainError(f"p must be at most {MAX_PRIME}, got {p}")


@dataclass(frozen=True, order=True)
class ProjectivePointFp:
    """(y₀ : … : y₄) over F_p with the first nonzero coordinate equal to 1."""

    p: int
    coordinates: tuple[int, ...]

    def __post_init__(self) -> None:
        check_prime(self.p)
        if len(self.coordinates) != N_VARS:
            raise DomainError(f"expected {N_VARS} coordinates")
        if any(not 0 <= c < self.p for c in self.coordinates):
            raise DomainError("coordinates must be reduced mod p")
        lead = next((c for c in self.coordinates if c), None)
        if lead is None:
            raise DomainError("the zero vector is not a projective point")
        if lead != 1:
            raise DomainError("coordinates are not normalized")

    @classmethod
    def normalized(cls, p: int, coords: Sequence[int]) -> ProjectivePointFp:
        reduced = [c % p for c in coords]
        lead = next((c for c in reduced if c), None)
        if lead is None:
            raise DomainError("the zero vector is not a projective point")
        inv = pow(lead, -1, p)
        return cls(p, tuple(c * inv % p for c in reduced))

    def __str__(self) -> str:
        return "(" + ":".join(str(c) for c in self.coordinates) + ")"

    def line(self) -> str:
        return f"{self.p}: {self}"


@dataclass(frozen=True)
class FiberSystem:
    """The five equations, each a product of polynomial factors."""

    equations: tuple[tuple[str, tuple[IntegerPolynomial5, ...]], ...]

    def satisfied_by(self, point: ProjectivePointFp) -> bool:
        for _, factors in self.equations:
            if math.prod(f(point.coordinates) for f in factors) % point.p:
                return False
        return True


def default_system(
    cfg: PrecisionConfig | None = None,
    triples: TripleSystem | None = None,
    e6: IntegerPolynomial5 | None = None,
    chi12: IntegerPolynomial5 | None = None,
) -> FiberSystem:
    """Quartic, χ₁₀² (as its linear factors), E₄, E₆ and χ₁₂ in the order they are tested."""

    if e6 is None:
        if triples is None:
            if cfg is None:
                raise DomainError("E6_y needs a calibrated sign table or a precision config")
            triples = load_or_calibrate(cfg)
        e6 = symbolic_polynomial(FiberTarget.E6_Y, triples)
    if chi12 is None:
        chi12 = symbolic_polynomial(FiberTarget.CHI12_Y).normal_form()
    return FiberSystem(
        (
            (FiberTarget.QUARTIC.value, (quartic(),)),
            (FiberTarget.CHI10_SQUARED_Y.value, tuple(_chi10_factors())),
            (FiberTarget.E4_Y.value, (e4_y(),)),
            (FiberTarget.E6_Y.value, (e6,)),
            (FiberTarget.CHI12_Y.value, (chi12,)),
        )
    )


def _projective_chunks(p: int) -> Iterator[NDArray[np.int64]]:
    """Normalized points of ℙ⁴(F_p) as (n, 5) arrays, grouped by the leading coordinate."""

    for lead in range(N_VARS):
        free = N_VARS - lead - 1
        # fix leading free coordinates until the block fits in a chunk
        fixed = 0
        while p ** (free - fixed) > ENUMERATION_CHUNK and fixed < free:
            fixed += 1
        tail = free - fixed
        grid = (
            np.stack(np.meshgrid(*[np.arange(p)] * tail, indexing="ij"), axis=-1).reshape(-1, tail)
            if tail
            else np.zeros((1, 0), dtype=np.int64)
        )
        for head in product(range(p), repeat=fixed):
            block = np.zeros((grid.shape[0], N_VARS), dtype=np.int64)
            block[:, lead] = 1
            block[:, lead + 1 : lead + 1 + fixed] = head
            block[:, lead + 1 + fixed :] = grid
            yield block


def enumerate_solutions(p: int, system: FiberSystem | None = None, cfg: PrecisionConfig | None = None) -> list[ProjectivePointFp]:
    """All points of ℙ⁴(F_p) where every equation of ``system`` vanishes mod p."""

    check_prime(p)
    system = system or default_system(cfg)
    found: list[ProjectivePointFp] = []
    scanned = 0
    for chunk in _projective_chunks(p):
        scanned += chunk.shape[0]
        candidates = chunk
        for _, factors in system.equations:
            columns = [candidates[:, i] for i in range(N_VARS)]
            value = np.ones(candidates.shape[0], dtype=np.int64)
            for factor in factors:
                value = (value * factor.evaluate_mod(columns, p)) % p
            candidates = candidates[value == 0]
            if not candidates.shape[0]:
                break
        found.extend(ProjectivePointFp(p, tuple(int(v) for v in row)) for row in candidates)
    expected = (p**N_VARS - 1) // (p - 1)
    if scanned != expected:
        raise DomainError(f"scanned {scanned} points of P^4(F_{p}), expected {expected}")
    log.info("p=%d: %d solutions among %d points", p, len(found), scanned)
    return sorted(found)


# ---------- comparison with the stated solution sets ----------
# points reported for the published system; other odd primes up to MAX_PRIME are stated empty
STATED_SOLUTIONS: dict[int, tuple[tuple[int, ...], ...]] = {
    3: (
        (0, 0, 1, 0, 1),
        (0, 0, 1, 1, 0),
        (0, 1, 0, 0, 1),
        (0, 1, 0, 1, 0),
        (1, 0, 0, 0, 1),
        (1, 0, 0, 1, 0),
    ),
}


def stated_solutions(p: int) -> list[ProjectivePointFp]:
    check_prime(p)
    return sorted(ProjectivePointFp(p, coords) for coords in STATED_SOLUTIONS.get(p, ()))


@dataclass(frozen=True)
class SolutionDiscrepancy:
    """Points where the enumerated solution set and the stated one disagree."""

    p: int
    missing: tuple[ProjectivePointFp, ...]
    extra: tuple[ProjectivePointFp, ...]

    def __str__(self) -> str:
        return (
            f"p={self.p}: {len(self.extra)} points beyond the stated set, "
            f"{len(self.missing)} stated points not found"
        )

    def to_json(self) -> dict[str, object]:
        return {
            "p": self.p,
            "missing": [str(point) for point in self.missing],
            "extra": [str(point) for point in self.extra],
        }


def compare_with_stated(p: int, solutions: Sequence[ProjectivePointFp]) -> SolutionDiscrepancy | None:
    """Diff ``solutions`` against the stated set for ``p``; ``None`` when they agree."""

    stated = set(stated_solutions(p))
    found = set(solutions)
    if stated == found:
        return None
    discrepancy = SolutionDiscrepancy(p, tuple(sorted(stated - found)), tuple(sorted(found - stated)))
    log.warning("fiber solutions disagree with the stated set: %s", discrepancy)
    return discrepancy
