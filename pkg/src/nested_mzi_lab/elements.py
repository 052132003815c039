"""Optical elements as pure field operators.

Mirror tilts act as linear phase ramps, Dove prisms as transverse parity, and
the beam splitters enter only through fixed per-path amplitudes.  The model
is 1-D in the interferometer plane, so the y-oriented prisms of the two
reference legs reduce to the identity and only the x-oriented prism in the
leg through mirror A survives.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import ConfigError, RegimeError
from .fields import TransverseField, parity_x

MAX_TILT = 1e-3  # paraxial guard on any single mirror angle, rad


class Mirror(Enum):
    A = "A"
    B = "B"
    C = "C"
    E = "E"
    F = "F"


#: Mirrors of the inner interferometer, the reference leg, and the outer loop.
INNER_MIRRORS = (Mirror.A, Mirror.B)
OUTER_MIRRORS = (Mirror.E, Mirror.F)


class Path(Enum):
    """The three unfolded source-to-detector paths."""

    EAF = "EAF"
    EBF = "EBF"
    C = "C"


class DovePlacement(Enum):
    BEFORE_INNER_MIRRORS = "before"
    AFTER_INNER_MIRRORS = "after"


@dataclass(frozen=True)
class DoveConfig:
    """Whether the prisms are inserted, and on which side of mirrors A/B."""

    enabled: bool = False
    placement: DovePlacement = DovePlacement.BEFORE_INNER_MIRRORS


@dataclass(frozen=True)
class TiltSet:
    """Signed small tilt angle of each mirror (rad) at one instant."""

    alpha_a: float = 0.0
    alpha_b: float = 0.0
    alpha_c: float = 0.0
    alpha_e: float = 0.0
    alpha_f: float = 0.0

    def __post_init__(self) -> None:
        for mirror, value in self.as_dict().items():
            if not abs(value) < MAX_TILT:
                raise ConfigError(
                    f"tilt of mirror {mirror.value} is {value:g} rad, "
                    f"outside the paraxial guard |alpha| < {MAX_TILT:g}"
                )

    def as_dict(self) -> dict[Mirror, float]:
        return {
            Mirror.A: self.alpha_a,
            Mirror.B: self.alpha_b,
            Mirror.C: self.alpha_c,
            Mirror.E: self.alpha_e,
            Mirror.F: self.alpha_f,
        }

    def angle(self, mirror: Mirror) -> float:
        return self.as_dict()[mirror]

    @classmethod
    def single(cls, mirror: Mirror, angle: float) -> "TiltSet":
        """Tilt set with one mirror tilted and the rest aligned."""
        return cls(**{f"alpha_{mirror.value.lower()}": angle})


def apply_tilt(f: TransverseField, alpha: float) -> TransverseField:
    """Mirror tilt by alpha: multiply by the momentum-kick phase exp(i k alpha x).

    Norm and centroid at the element plane are unchanged; the beam picks up
    the transverse momentum k*alpha.
    """
    if not abs(alpha) < MAX_TILT:
        raise RegimeError(f"tilt angle {alpha:g} rad outside |alpha| < {MAX_TILT:g}")
    if alpha == 0.0:
        return f
    ramp = np.exp(1j * f.k * alpha * f.grid.xs)
    return TransverseField(f.grid, f.amplitude * ramp, f.k)


def apply_dove_x(f: TransverseField) -> TransverseField:
    """Dove prism oriented in the interferometer plane: parity in x and k_x.

    Identical to parity_x; named for the element so scenario assembly reads
    like the apparatus.  Path-length and internal-reflection phases are
    compensated across legs and therefore dropped.
    """
    return parity_x(f)


_BRIGHT_AMPLITUDES = {
    Path.EAF: 1.0 / math.sqrt(3.0),
    Path.EBF: -1.0 / math.sqrt(3.0),
    Path.C: 1.0 / math.sqrt(3.0),
}


def path_amplitude(path: Path) -> float:
    """Net beam-splitter amplitude of one unfolded path at the bright output port.

    The three equal-weight paths carry +1/sqrt(3), -1/sqrt(3), +1/sqrt(3)
    for EAF, EBF, C; phases common to all paths are dropped.
    """
    return _BRIGHT_AMPLITUDES[path]
