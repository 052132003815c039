"""Two-state-vector bookkeeping over the path basis {A, B, C}.

Projector weak values depend only on the pre- and post-selected path states
(they are system quantities, blind to the meter and to the Dove prisms),
while the effective weak value of a mirror is the z-normalized first-order
coefficient of the detector centroid response to that mirror's tilt,
extracted from the numeric engine by central finite difference.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .elements import Mirror, TiltSet
from .errors import ConfigError, PostSelectionError
from .fields import GaussianSpec, centroid
from .interferometer import (
    SMALL_ANGLE_KAW,
    OutputPort,
    Scenario,
    detector_field_numeric,
)

_BASIS = (Mirror.A, Mirror.B, Mirror.C)


@dataclass(frozen=True)
class PathState:
    """Normalized complex amplitudes over the path basis (A, B, C)."""

    amplitudes: tuple[complex, complex, complex]

    def __post_init__(self) -> None:
        amps = tuple(complex(a) for a in self.amplitudes)
        object.__setattr__(self, "amplitudes", amps)
        nrm = math.sqrt(sum(abs(a) ** 2 for a in amps))
        if abs(nrm - 1.0) > 1e-12:
            raise ConfigError(f"path state norm {nrm!r} differs from 1 by more than 1e-12")

    def as_array(self) -> np.ndarray:
        return np.array(self.amplitudes, dtype=np.complex128)


@dataclass(frozen=True)
class TwoStateVector:
    """Forward-evolving ket and backward-evolving bra over the path basis.

    The bra is stored as the printed row of coefficients (not conjugated);
    the overlap convention <Phi|Psi> = sum_j post_j * pre_j together with the
    known projector weak values pins this choice.
    """

    pre: PathState
    post: PathState

    def __post_init__(self) -> None:
        if abs(self.overlap) <= 1e-12:
            raise PostSelectionError("post-selection orthogonal to the prepared state")

    @property
    def overlap(self) -> complex:
        return complex(np.dot(self.post.as_array(), self.pre.as_array()))


def paper_two_state_vector() -> TwoStateVector:
    """The canonical pre/post pair of the bright-port experiment.

    Pre and post both read (1, i, -1)/sqrt(3) over (A, B, C); their overlap
    is 1/3.
    """
    r = 1.0 / math.sqrt(3.0)
    state = PathState((r, 1j * r, -r))
    return TwoStateVector(pre=state, post=state)


def two_state_vector_for_port(port: OutputPort) -> TwoStateVector:
    """Two-state vector implied by the collected output port.

    The alternate-port bra is fixed by requiring the per-path products
    post_j * pre_j to match that port's net path amplitudes (same-sign inner
    arms, opposite-sign reference leg).
    """
    if port is OutputPort.BRIGHT:
        return paper_two_state_vector()
    r = 1.0 / math.sqrt(3.0)
    return TwoStateVector(
        pre=PathState((r, 1j * r, -r)),
        post=PathState((r, -1j * r, r)),
    )


def weak_value(tsv: TwoStateVector, op: np.ndarray) -> complex:
    """Weak value <Phi|op|Psi> / <Phi|Psi> of a 3x3 operator on the path basis."""
    matrix = np.asarray(op, dtype=np.complex128)
    if matrix.shape != (3, 3):
        raise ConfigError(f"operator must be 3x3 on the path basis, got shape {matrix.shape}")
    overlap = tsv.overlap
    if abs(overlap) <= 1e-12:
        raise PostSelectionError("post-selection orthogonal to the prepared state")
    return complex(tsv.post.as_array() @ matrix @ tsv.pre.as_array() / overlap)


def path_projector(mirror: Mirror) -> np.ndarray:
    """Projector onto the paths that visit the given mirror.

    A, B, C project onto single paths; E and F cover both inner paths, so
    their projectors equal Pi_A + Pi_B exactly.
    """
    diag = {
        Mirror.A: (1.0, 0.0, 0.0),
        Mirror.B: (0.0, 1.0, 0.0),
        Mirror.C: (0.0, 0.0, 1.0),
        Mirror.E: (1.0, 1.0, 0.0),
        Mirror.F: (1.0, 1.0, 0.0),
    }[mirror]
    return np.diag(np.array(diag, dtype=np.complex128))


def alpha_step(beam: GaussianSpec) -> float:
    """Finite-difference tilt step: k * alpha * w0 = 1e-2, mid small-angle regime."""
    return SMALL_ANGLE_KAW / (beam.k * beam.w0)


def effective_weak_value(scenario: Scenario, mirror: Mirror) -> float:
    """z-normalized first-order centroid response coefficient of one mirror.

    Central finite difference of the numeric-engine detector centroid with
    respect to the mirror's tilt, divided by the mirror-to-detector distance.
    Equals the projector weak value whenever even and odd meter modes follow
    the same path.
    """
    step = alpha_step(scenario.beam)
    up = centroid(detector_field_numeric(scenario, TiltSet.single(mirror, step)))
    down = centroid(detector_field_numeric(scenario, TiltSet.single(mirror, -step)))
    return (up - down) / (2.0 * step * scenario.mirror_distance(mirror))


@dataclass(frozen=True)
class WeakValueReport:
    """Projector weak values (Dove-independent) and effective values (Dove-aware)."""

    projector: dict[Mirror, complex]
    effective: dict[Mirror, float]
    dove_enabled: bool

    def to_text(self) -> str:
        lines = []
        for mirror in Mirror:
            value = self.projector[mirror]
            lines.append(f"projector_{mirror.value} = {value.real:.12g}{value.imag:+.12g}j")
        for mirror in Mirror:
            lines.append(f"effective_{mirror.value} = {self.effective[mirror]:.12g}")
        lines.append(f"dove_enabled = {str(self.dove_enabled).lower()}")
        return "\n".join(lines) + "\n"


def weak_value_report(scenario: Scenario) -> WeakValueReport:
    """Combine projector and effective weak values for every mirror.

    The projector values are computed from the output port's two-state
    vector alone; the Dove configuration never reaches that computation.
    """
    tsv = two_state_vector_for_port(scenario.output_port)
    projector = {m: weak_value(tsv, path_projector(m)) for m in Mirror}
    effective = {m: effective_weak_value(scenario, m) for m in Mirror}
    return WeakValueReport(
        projector=projector, effective=effective, dove_enabled=scenario.dove.enabled
    )
