"""Exception hierarchy for siegel-volume."""

from __future__ import annotations

from typing import TYPE_CHECKING

if TYPE_CHECKING:
    from collections.abc import Sequence


class SiegelVolumeError(Exception):
    """Base class for every error raised by the library."""


class DomainError(SiegelVolumeError, ValueError):
    """An argument lies outside the domain an operation supports."""


class CalibrationError(SiegelVolumeError):
    """No E6 sign assignment satisfies the calibration identities."""


class ReductionError(SiegelVolumeError):
    """Fundamental-domain reduction did not finish within its step budget."""

    def __init__(self, message: str, trace: Sequence[str] = ()) -> None:
        self.trace = tuple(trace)
        detail = "\n".join(self.trace[-10:])
        super().__init__(f"{message}\n{detail}" if detail else message)


class QuadratureError(SiegelVolumeError):
    """Adaptive quadrature failed to converge on some cell."""

    def __init__(self, message: str, worst_cell: tuple[float, float]) -> None:
        self.worst_cell = worst_cell
        super().__init__(
            f"{message} (worst cell x in [{worst_cell[0]:.6g}, {worst_cell[1]:.6g}])"
        )


class ReconstructionError(SiegelVolumeError):
    """Integer polynomial reconstruction failed."""


class VerificationError(SiegelVolumeError):
    """A numerical identity check exceeded its threshold."""
