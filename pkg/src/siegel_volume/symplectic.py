"""Sp₄(ℤ) action on ℍ₂ and fundamental-domain reduction."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cache
from itertools import combinations, product
import logging
import math
from typing import TYPE_CHECKING

from mpmath import mp, mpc, mpf
import numpy as np

from . import storage
from .errors import DomainError, ReductionError
from .theta import SiegelPoint1, SiegelPoint2

if TYPE_CHECKING:
    from collections.abc import Iterable, Sequence
    from pathlib import Path

    from numpy.typing import NDArray

    from .numerics import PrecisionConfig

log = logging.getLogger(__name__)

type IntMatrix = tuple[tuple[int, ...], ...]

DEFAULT_MAX_STEPS = 200
DET_IMPROVEMENT = mpf("1e-12")
CANDIDATE_ENTRY_BOUND = 2
FLOAT_SLACK = 1e-6


def _matmul(left: IntMatrix, right: IntMatrix) -> IntMatrix:
    return tuple(
        tuple(sum(left[i][k] * right[k][j] for k in range(len(right))) for j in range(len(right[0])))
        for i in range(len(left))
    )


def _transpose(m: IntMatrix) -> IntMatrix:
    return tuple(zip(*m, strict=True))


def _identity(n: int) -> IntMatrix:
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def _j_matrix(g: int) -> IntMatrix:
    rows: list[tuple[int, ...]] = []
    for i in range(2 * g):
        row = [0] * (2 * g)
        if i < g:
            row[i + g] = 1
        else:
            row[i - g] = -1
        rows.append(tuple(row))
    return tuple(rows)


def _block(m: IntMatrix, row: int, col: int, g: int) -> IntMatrix:
    return tuple(tuple(m[row * g + i][col * g + j] for j in range(g)) for i in range(g))


@dataclass(frozen=True)
class SymplecticMatrix:
    """Integer matrix M with MᵗJM = J, of size 2 (SL₂(ℤ)) or 4 (Sp₄(ℤ))."""

    entries: IntMatrix

    def __post_init__(self) -> None:
        rows = tuple(tuple(int(v) for v in row) for row in self.entries)
        n = len(rows)
        if n not in {2, 4} or any(len(row) != n for row in rows):
            raise DomainError(f"symplectic matrices must be 2x2 or 4x4, got {n} rows")
        object.__setattr__(self, "entries", rows)
        j = _j_matrix(n // 2)
        if _matmul(_matmul(_transpose(rows), j), rows) != j:
            raise DomainError(f"matrix is not symplectic: {rows}")

    @property
    def g(self) -> int:
        return len(self.entries) // 2

    @property
    def a(self) -> IntMatrix:
        return _block(self.entries, 0, 0, self.g)

    @property
    def b(self) -> IntMatrix:
        return _block(self.entries, 0, 1, self.g)

    @property
    def c(self) -> IntMatrix:
        return _block(self.entries, 1, 0, self.g)

    @property
    def d(self) -> IntMatrix:
        return _block(self.entries, 1, 1, self.g)

    def __matmul__(self, other: SymplecticMatrix) -> SymplecticMatrix:
        if self.g != other.g:
            raise DomainError("cannot multiply symplectic matrices of different degree")
        return SymplecticMatrix(_matmul(self.entries, other.entries))

    def inverse(self) -> SymplecticMatrix:
        """M⁻¹ = [[Dᵗ, −Bᵗ], [−Cᵗ, Aᵗ]]."""

        g = self.g
        at, bt, ct, dt = (_transpose(x) for x in (self.a, self.b, self.c, self.d))
        top = [tuple(dt[i]) + tuple(-v for v in bt[i]) for i in range(g)]
        bottom = [tuple(-v for v in ct[i]) + tuple(at[i]) for i in range(g)]
        return SymplecticMatrix(tuple(top + bottom))

    def flat(self) -> tuple[int, ...]:
        return tuple(v for row in self.entries for v in row)

    @classmethod
    def identity(cls, g: int = 2) -> SymplecticMatrix:
        return cls(_identity(2 * g))

    @classmethod
    def j(cls, g: int = 2) -> SymplecticMatrix:
        return cls(_j_matrix(g))

    @classmethod
    def from_blocks(
        cls, a: IntMatrix, b: IntMatrix, c: IntMatrix, d: IntMatrix
    ) -> SymplecticMatrix:
        top = tuple(tuple(a[i]) + tuple(b[i]) for i in range(len(a)))
        bottom = tuple(tuple(c[i]) + tuple(d[i]) for i in range(len(c)))
        return cls(top + bottom)

    @classmethod
    def translation(cls, s: IntMatrix) -> SymplecticMatrix:
        """τ ↦ τ + S for symmetric integral S."""

        g = len(s)
        return cls.from_blocks(_identity(g), s, _zero(g), _identity(g))

    @classmethod
    def rotation(cls, u: IntMatrix) -> SymplecticMatrix:
        """τ ↦ Uᵗ τ U for U ∈ GL₂(ℤ), as diag(Uᵗ, U⁻¹)."""

        det = u[0][0] * u[1][1] - u[0][1] * u[1][0]
        if det not in {1, -1}:
            raise DomainError(f"rotation needs a unimodular matrix, got det {det}")
        inv = ((u[1][1] * det, -u[0][1] * det), (-u[1][0] * det, u[0][0] * det))
        return cls.from_blocks(_transpose(u), _zero(2), _zero(2), inv)


def _zero(g: int) -> IntMatrix:
    return tuple((0,) * g for _ in range(g))


# ---------- action ----------
def _to_mp(m: IntMatrix) -> mp.matrix:
    return mp.matrix([[mpf(v) for v in row] for row in m])


def act(m: SymplecticMatrix, tau: SiegelPoint2, cfg: PrecisionConfig) -> tuple[SiegelPoint2, mpc]:
    """Return (Mτ, det(Cτ + D)) with Mτ = (Aτ + B)(Cτ + D)⁻¹."""

    if m.g != 2:
        raise DomainError("degree 2 points need a 4x4 symplectic matrix")
    with cfg.workdps():
        t = tau.matrix()
        denom = _to_mp(m.c) * t + _to_mp(m.d)
        numer = _to_mp(m.a) * t + _to_mp(m.b)
        image = numer * mp.inverse(denom)
        return SiegelPoint2.from_matrix(image), +mp.det(denom)


def act1(m: SymplecticMatrix, tau1: SiegelPoint1, cfg: PrecisionConfig) -> tuple[SiegelPoint1, mpc]:
    """Möbius action of SL₂(ℤ): return ((aτ + b)/(cτ + d), cτ + d)."""

    if m.g != 1:
        raise DomainError("degree 1 points need a 2x2 matrix")
    (a, b), (c, d) = m.entries
    with cfg.workdps():
        t = tau1.tau
        denom = c * t + d
        return SiegelPoint1.from_complex((a * t + b) / denom), +denom


def cocycle(m: SymplecticMatrix, tau: SiegelPoint2, cfg: PrecisionConfig) -> mpc:
    with cfg.workdps():
        return +mp.det(_to_mp(m.c) * tau.matrix() + _to_mp(m.d))


@cache
def generators() -> tuple[SymplecticMatrix, ...]:
    """J, the three elementary translations and two rotations."""

    return (
        SymplecticMatrix.j(),
        SymplecticMatrix.translation(((1, 0), (0, 0))),
        SymplecticMatrix.translation(((0, 0), (0, 1))),
        SymplecticMatrix.translation(((0, 1), (1, 0))),
        SymplecticMatrix.rotation(((1, 1), (0, 1))),
        SymplecticMatrix.rotation(((0, 1), (1, 0))),
    )


@cache
def _generators1() -> tuple[SymplecticMatrix, ...]:
    return (SymplecticMatrix(((0, -1), (1, 0))), SymplecticMatrix(((1, 1), (0, 1))))


def random_word(
    rng: np.random.Generator, length: int, g: int = 2
) -> SymplecticMatrix:
    """Product of ``length`` random generators or their inverses."""

    gens = generators() if g == 2 else _generators1()
    word = SymplecticMatrix.identity(g)
    for _ in range(length):
        step = gens[int(rng.integers(len(gens)))]
        if rng.integers(2):
            step = step.inverse()
        word = step @ word
    return word


# ---------- degree 1 reduction ----------
@dataclass(frozen=True)
class ReductionResult1:
    point: SiegelPoint1
    transformation: SymplecticMatrix
    steps: int


def _wall_tolerance() -> mpf:
    return mpf(10) ** (-(mp.dps - 5))


def reduce1(tau1: SiegelPoint1, cfg: PrecisionConfig, max_steps: int = 10_000) -> ReductionResult1:
    """Move τ₁ into the standard domain |x| ≤ 1/2, |τ| ≥ 1.

    Walls are closed on the left: x ∈ [−1/2, 1/2), and points on the unit
    circle are moved to x ≤ 0.
    """

    s_mat = SymplecticMatrix(((0, -1), (1, 0)))
    total = SymplecticMatrix.identity(1)
    steps = 0
    with cfg.workdps():
        t = tau1.tau
        eps = _wall_tolerance()
        while True:
            steps += 1
            if steps > max_steps:
                raise ReductionError(f"reduce1 exceeded {max_steps} steps", [str(t)])
            shift = int(mp.floor(t.real + mpf(1) / 2))
            if shift:
                t -= shift
                total = SymplecticMatrix(((1, -shift), (0, 1))) @ total
            if abs(t) < 1 - eps:
                t = -1 / t
                total = s_mat @ total
                continue
            break
        if abs(abs(t) - 1) <= eps and t.real > 0:
            t = -1 / t
            total = s_mat @ total
        return ReductionResult1(SiegelPoint1.from_complex(t), total, steps)


def is_reduced1(tau1: SiegelPoint1, tol: float = 1e-12) -> bool:
    t = tau1.tau
    return bool(-0.5 <= tau1.x < 0.5 and abs(t) >= 1 - tol)


# ---------- Minkowski ----------
def minkowski_reduce_y(
    y: tuple[mpf, mpf, mpf], max_steps: int = 10_000
) -> tuple[tuple[mpf, mpf, mpf], IntMatrix]:
    """Lagrange–Gauss reduction of the form y = (y1, y12, y2).

    Returns (y′, U) with y′ = UᵗyU, y′₁ ≤ y′₂ and 0 ≤ 2y′₁₂ ≤ y′₁.
    """

    y1, y12, y2 = y
    if y1 <= 0 or y1 * y2 - y12**2 <= 0:
        raise DomainError("y must be positive definite")
    u: IntMatrix = _identity(2)
    for _ in range(max_steps):
        if y1 > y2:
            y1, y2 = y2, y1
            u = _matmul(u, ((0, 1), (1, 0)))
        k = int(mp.floor(y12 / y1 + mpf(1) / 2))
        if k == 0:
            break
        y2 = y2 - 2 * k * y12 + k * k * y1
        y12 -= k * y1
        u = _matmul(u, ((1, -k), (0, 1)))
    else:
        raise ReductionError(f"Minkowski reduction exceeded {max_steps} steps")
    if y12 < 0:
        y12 = -y12
        u = _matmul(u, ((1, 0), (0, -1)))
    return (y1, y12, y2), u


# ---------- candidate set ----------
@dataclass(frozen=True)
class ReductionResult:
    """A reduced point, the matrix that maps the input onto it, and the step count.

    ``det_y_history`` holds det Im τ at the start of every step.
    """

    point: SiegelPoint2
    transformation: SymplecticMatrix
    steps: int
    det_y_history: tuple[mpf, ...] = ()


def _ext_gcd(a: int, b: int) -> tuple[int, int, int]:
    """(g, x, y) with x·a + y·b = g ≥ 0."""

    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q = a // b
        a, b = b, a - q * b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        return -a, -x0, -y0
    return a, x0, y0


def _maximal_minors(rows: IntMatrix) -> list[int]:
    return [rows[0][i] * rows[1][j] - rows[0][j] * rows[1][i] for i, j in combinations(range(4), 2)]


def pair_key(c: IntMatrix, d: IntMatrix) -> IntMatrix:
    """Hermite normal form of the 2×4 matrix (C D) under left multiplication by GL₂(ℤ).

    Pairs with the same key give the same |det(Cτ + D)|.
    """

    r0 = [*c[0], *d[0]]
    r1 = [*c[1], *d[1]]
    if not any(_maximal_minors((tuple(r0), tuple(r1)))):
        raise DomainError(f"(C, D) = ({c}, {d}) does not have rank 2")
    k = next(j for j in range(4) if r0[j] or r1[j])
    g, x, y = _ext_gcd(r0[k], r1[k])
    p, q = r0[k] // g, r1[k] // g
    r0, r1 = [x * u + y * v for u, v in zip(r0, r1, strict=True)], [-q * u + p * v for u, v in zip(r0, r1, strict=True)]
    pivot = next(j for j in range(k + 1, 4) if r1[j])
    if r1[pivot] < 0:
        r1 = [-v for v in r1]
    shift = r0[pivot] // r1[pivot]
    r0 = [u - shift * v for u, v in zip(r0, r1, strict=True)]
    return tuple(r0), tuple(r1)


def _solve_primitive(w: IntMatrix, target: tuple[int, int]) -> tuple[int, ...]:
    """Integer v with w·v = target, for a 2×4 matrix whose maximal minors are coprime."""

    rows = [list(r) for r in w]
    cols = [list(r) for r in _identity(4)]
    for row in range(2):
        for col in range(row + 1, 4):
            a, b = rows[row][row], rows[row][col]
            if b == 0:
                continue
            g, x, y = _ext_gcd(a, b)
            p, q = a // g, b // g
            for m in (rows, cols):
                for r in m:
                    left, right = r[row], r[col]
                    r[row], r[col] = x * left + y * right, -q * left + p * right
    h00, h10, h11 = rows[0][0], rows[1][0], rows[1][1]
    if abs(h00 * h11) != 1:
        raise DomainError(f"{w} is not primitive")
    z0 = target[0] * h00
    z1 = (target[1] - h10 * z0) * h11
    return tuple(cols[i][0] * z0 + cols[i][1] * z1 for i in range(4))


def _omega(u: Sequence[int], v: Sequence[int]) -> int:
    return u[0] * v[2] + u[1] * v[3] - u[2] * v[0] - u[3] * v[1]


def complete_pair(c: IntMatrix, d: IntMatrix) -> SymplecticMatrix:
    """A matrix in Sp₄(ℤ) with lower blocks (C, D), for a coprime symmetric pair."""

    r3 = (*c[0], *d[0])
    r4 = (*c[1], *d[1])
    if _omega(r3, r4):
        raise DomainError(f"(C, D) = ({c}, {d}) is not a symmetric pair")
    # rows of w are J·r₃ and J·r₄, so w·v = (ω(v, r₃), ω(v, r₄))
    w = tuple(tuple(r[2:]) + tuple(-v for v in r[:2]) for r in (r3, r4))
    r1 = _solve_primitive(w, (1, 0))
    r2 = _solve_primitive(w, (0, 1))
    b = _omega(r1, r2)
    r1 = tuple(u + b * v for u, v in zip(r1, r4, strict=True))
    return SymplecticMatrix((r1, r2, r3, r4))


@cache
def default_candidate_set() -> tuple[SymplecticMatrix, ...]:
    """Heuristic finite set for the determinant condition.

    One matrix per GL₂(ℤ)-class of coprime symmetric pairs (C, D) with C ≠ 0
    and all entries in [−2, 2]. J is the class of (I, 0); the other generators
    have C = 0 and |det D| = 1, so they never move a point.
    """

    bound = range(-CANDIDATE_ENTRY_BOUND, CANDIDATE_ENTRY_BOUND + 1)
    blocks: list[IntMatrix] = [((a, b), (c, d)) for a, b, c, d in product(bound, repeat=4)]
    zero = _zero(2)
    found: dict[IntMatrix, SymplecticMatrix] = {}
    for c in blocks:
        if c == zero:
            continue
        for d in blocks:
            # C Dᵗ symmetric
            if c[0][0] * d[1][0] + c[0][1] * d[1][1] != c[1][0] * d[0][0] + c[1][1] * d[0][1]:
                continue
            rows = ((*c[0], *d[0]), (*c[1], *d[1]))
            if math.gcd(*_maximal_minors(rows)) != 1:
                continue
            key = pair_key(c, d)
            if key not in found:
                found[key] = complete_pair(c, d)
    log.debug("candidate set: %d classes of coprime symmetric pairs", len(found))
    return tuple(found[key] for key in sorted(found))


def parse_candidate_rows(lines: Iterable[str], source: str = "<candidates>") -> tuple[SymplecticMatrix, ...]:
    """Parse 16 integers per line (row-major 4×4); blank lines and # comments are skipped."""

    out: list[SymplecticMatrix] = []
    for lineno, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            values = [int(v) for v in line.split()]
        except ValueError as exc:
            raise DomainError(f"{source}:{lineno}: expected integers") from exc
        if len(values) != 16:
            raise DomainError(f"{source}:{lineno}: expected 16 integers, got {len(values)}")
        rows = tuple(tuple(values[4 * i : 4 * i + 4]) for i in range(4))
        try:
            out.append(SymplecticMatrix(rows))
        except DomainError as exc:
            raise DomainError(f"{source}:{lineno}: {exc}") from exc
    if not out:
        raise DomainError(f"{source}: candidate set is empty")
    return tuple(out)


def load_candidate_set(path: Path) -> tuple[SymplecticMatrix, ...]:
    return parse_candidate_rows(storage.read_lines(path), str(path))


# ---------- degree 2 reduction ----------
def _translation_to_box(tau: SiegelPoint2) -> IntMatrix:
    half = mpf(1) / 2
    n1, n12, n2 = (int(mp.floor(v + half)) for v in (tau.x1, tau.x12, tau.x2))
    return ((-n1, -n12), (-n12, -n2))


def _candidate_blocks(cands: Sequence[SymplecticMatrix]) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
    return (
        np.array([m.c for m in cands], dtype=np.float64).reshape(-1, 2, 2),
        np.array([m.d for m in cands], dtype=np.float64).reshape(-1, 2, 2),
    )


def _approx_dets(tau: SiegelPoint2, blocks: tuple[NDArray[np.float64], NDArray[np.float64]]) -> NDArray[np.float64]:
    """|det(Cτ + D)| for every candidate in double precision."""

    c, d = blocks
    t = np.array([[complex(tau.tau1), complex(tau.tau12)], [complex(tau.tau12), complex(tau.tau2)]])
    m = c @ t + d
    return np.abs(m[:, 0, 0] * m[:, 1, 1] - m[:, 0, 1] * m[:, 1, 0])


def _best_candidate(
    tau: SiegelPoint2,
    cands: Sequence[SymplecticMatrix],
    blocks: tuple[NDArray[np.float64], NDArray[np.float64]],
    cfg: PrecisionConfig,
) -> tuple[SymplecticMatrix | None, mpf]:
    approx = _approx_dets(tau, blocks)
    best: SymplecticMatrix | None = None
    best_abs = mpf(1) - DET_IMPROVEMENT
    # the float pass only shortlists; the decision is taken at working precision
    for idx in np.flatnonzero(approx < float(best_abs) + FLOAT_SLACK):
        cand = cands[int(idx)]
        value = abs(cocycle(cand, tau, cfg))
        if value < best_abs:
            best, best_abs = cand, value
    if best is None:
        return None, mpf(float(approx.min())) if approx.size else mpf(1)
    return best, best_abs


def reduce2(
    tau: SiegelPoint2,
    cfg: PrecisionConfig,
    candidates: Sequence[SymplecticMatrix] | None = None,
    max_steps: int = DEFAULT_MAX_STEPS,
) -> ReductionResult:
    """Reduce τ against Minkowski, translation and determinant conditions.

    Each step Minkowski-reduces y, translates x into [−1/2, 1/2) and applies
    the candidate with the smallest |det(Cτ + D)| if it is below 1 − 10⁻¹².
    det Im τ strictly increases on every candidate step.
    """

    cands = default_candidate_set() if candidates is None else tuple(candidates)
    blocks = _candidate_blocks(cands)
    total = SymplecticMatrix.identity()
    trace: list[str] = []
    history: list[mpf] = []
    with cfg.workdps():
        current = tau
        for step in range(1, max_steps + 1):
            _, u = minkowski_reduce_y((current.y1, current.y12, current.y2))
            if u != _identity(2):
                rot = SymplecticMatrix.rotation(u)
                current, _ = act(rot, current, cfg)
                total = rot @ total
            shift = _translation_to_box(current)
            if shift != _zero(2):
                trans = SymplecticMatrix.translation(shift)
                current = current.translated(shift[0][0], shift[0][1], shift[1][1])
                total = trans @ total
            history.append(current.det_y)
            best, value = _best_candidate(current, cands, blocks, cfg)
            trace.append(f"step {step}: det y={mp.nstr(current.det_y, 12)} min|det(Ct+D)|={mp.nstr(value, 12)}")
            if best is None:
                log.debug("reduce2 finished after %d steps", step)
                return ReductionResult(current, total, step, tuple(history))
            current, _ = act(best, current, cfg)
            total = best @ total
    raise ReductionError(f"reduce2 exceeded {max_steps} steps", trace)


def is_reduced2(
    tau: SiegelPoint2,
    cfg: PrecisionConfig,
    candidates: Sequence[SymplecticMatrix] | None = None,
    tol: float = 1e-9,
) -> bool:
    """Check Minkowski, box and determinant conditions relative to ``candidates``."""

    cands = default_candidate_set() if candidates is None else tuple(candidates)
    approx = _approx_dets(tau, _candidate_blocks(cands))
    with cfg.workdps():
        minkowski = (
            tau.y1 <= tau.y2 + tol and -tol <= tau.y12 and 2 * tau.y12 <= tau.y1 + tol
        )
        box = all(-0.5 - tol <= v <= 0.5 + tol for v in (tau.x1, tau.x12, tau.x2))
        dets = all(
            abs(cocycle(cands[int(i)], tau, cfg)) >= 1 - tol
            for i in np.flatnonzero(approx < 1 - tol + FLOAT_SLACK)
        )
        return bool(minkowski and box and dets)
