"""Runtime settings management for siegel-volume."""

from __future__ import annotations

from dataclasses import asdict, dataclass, fields, replace
from pathlib import Path
import tomllib
from typing import TYPE_CHECKING

from .numerics import (
    DEFAULT_QUADRATURE_TOLERANCE,
    DEFAULT_SERIES_TOLERANCE,
    DEFAULT_WORKING_DIGITS,
    PrecisionConfig,
)
from .quadrature import IntegrationConfig

if TYPE_CHECKING:
    from .storage import JSONObject

DEFAULT_SETTINGS_FILENAME = "settings.toml"
PACKAGE_DIR = Path(__file__).resolve().parent
PROJECT_ROOT = PACKAGE_DIR.parent.parent
DEFAULT_SETTINGS_PATH = PROJECT_ROOT / DEFAULT_SETTINGS_FILENAME

DEFAULT_CUSP_CUTOFF = 20.0
DEFAULT_EXCLUSION_RADIUS = 1e-3
DEFAULT_MAX_REFINEMENT_DEPTH = 200
DEFAULT_MODE = "adaptive"
DEFAULT_RNG_SEED = 0
DEFAULT_MONTE_CARLO_SAMPLES = 1_000_000

_INT_KEYS = frozenset({"working_digits", "max_refinement_depth", "rng_seed", "monte_carlo_samples"})
_REAL_KEYS = frozenset(
    {"series_tolerance", "quadrature_tolerance", "cusp_cutoff", "exclusion_radius"}
)
_PATH_KEYS = frozenset({"sign_table", "candidate_set", "polynomial_dir"})


@dataclass(frozen=True)
class Settings:
    """Runtime settings loaded from settings.toml."""

    working_digits: int = DEFAULT_WORKING_DIGITS
    series_tolerance: float = DEFAULT_SERIES_TOLERANCE
    quadrature_tolerance: float = DEFAULT_QUADRATURE_TOLERANCE
    cusp_cutoff: float = DEFAULT_CUSP_CUTOFF
    exclusion_radius: float = DEFAULT_EXCLUSION_RADIUS
    max_refinement_depth: int = DEFAULT_MAX_REFINEMENT_DEPTH
    mode: str = DEFAULT_MODE
    rng_seed: int = DEFAULT_RNG_SEED
    monte_carlo_samples: int = DEFAULT_MONTE_CARLO_SAMPLES
    sign_table: Path | None = None
    candidate_set: Path | None = None
    polynomial_dir: Path | None = None

    def precision(self) -> PrecisionConfig:
        return PrecisionConfig(self.working_digits, self.series_tolerance, self.quadrature_tolerance)

    def integration(self) -> IntegrationConfig:
        return IntegrationConfig(
            cusp_cutoff=self.cusp_cutoff,
            target_tolerance=self.quadrature_tolerance,
            max_refinement_depth=self.max_refinement_depth,
            singularity_exclusion_radius=self.exclusion_radius,
            mode=self.mode,  # type: ignore[arg-type]
            rng_seed=self.rng_seed,
            monte_carlo_samples=self.monte_carlo_samples,
        )

    def as_json(self) -> JSONObject:
        return {k: str(v) if isinstance(v, Path) else v for k, v in asdict(self).items()}


def _coerce(key: str, raw: object, path: Path) -> object:
    if key in _INT_KEYS:
        if isinstance(raw, bool) or not isinstance(raw, int):
            raise SystemExit(f"ERROR: value for '{key}' in {path} must be an integer, got {type(raw)!r}.")
        return raw
    if key in _REAL_KEYS:
        if isinstance(raw, bool) or not isinstance(raw, (int, float)):
            raise SystemExit(f"ERROR: value for '{key}' in {path} must be a number, got {type(raw)!r}.")
        return float(raw)
    if not isinstance(raw, str):
        raise SystemExit(f"ERROR: value for '{key}' in {path} must be a string, got {type(raw)!r}.")
    stripped = raw.strip()
    if not stripped:
        return None
    if key in _PATH_KEYS:
        resolved = Path(stripped).expanduser()
        return resolved if resolved.is_absolute() else path.parent / resolved
    return stripped


def load_settings(path: Path) -> Settings:
    """Load runtime settings from TOML, falling back to defaults when missing."""

    base = Settings()
    if not path.exists():
        return base
    try:
        with path.open("rb") as f:
            data = tomllib.load(f)
    except (OSError, tomllib.TOMLDecodeError) as e:
        raise SystemExit(f"ERROR: cannot parse settings at {path}: {e}") from e
    if not isinstance(data, dict):
        raise SystemExit(f"ERROR: settings file {path} must contain a TOML table.")
    known = {field.name for field in fields(Settings)}
    unknown = sorted(set(data) - known)
    if unknown:
        raise SystemExit(f"ERROR: unknown settings in {path}: {', '.join(unknown)}.")
    overrides: dict[str, object] = {}
    for key in known:
        raw = data.get(key)
        if raw is None:
            continue
        value = _coerce(key, raw, path)
        if value is not None:
            overrides[key] = value
    return replace(base, **overrides)  # type: ignore[arg-type]
