"""Detector-plane observables and the dither-spectroscopy procedure.

The measured signal is the normalized split-detector difference, proportional
to the beam centroid for small displacements.  Every mirror oscillates at its
own frequency; a lock-in style single-bin Fourier projection of the signal at
each dither frequency recovers the per-mirror response amplitudes, and a peak
well above the noise floor at a mirror's frequency is that mirror's trace.
Photon-counting acquisition is modeled on top of the deterministic signal.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .elements import Mirror, TiltSet
from .errors import ConfigError, ZeroNormError
from .fields import TransverseField, ZERO_POWER
from .interferometer import Scenario, check_small_angle_regime, detector_field_numeric

#: Modeled detector dynamic range: the noise floor reported with a spectrum is
#: never taken below this fraction of the strongest dither peak, so that a
#: noiseless series still yields a meaningful absence threshold (5x the floor
#: equals 1e-3 of the maximum peak).
DYNAMIC_RANGE_FLOOR = 2e-4

DEFAULT_DITHER_AMPLITUDE = 1e-6  # rad, keeps k*alpha*w0 = 1e-2 for the default beam
#: Dither frequencies (Hz): integer cycles over the default window and free of
#: intermodulation collisions onto any signal bin up to fifth order.
DEFAULT_FREQUENCIES = {
    Mirror.A: 307.0,
    Mirror.B: 367.0,
    Mirror.C: 433.0,
    Mirror.E: 509.0,
    Mirror.F: 577.0,
}
DEFAULT_SAMPLE_RATE = 10_000.0
DEFAULT_DURATION = 1.0


@dataclass(frozen=True)
class DitherProtocol:
    """Per-mirror oscillation amplitudes/frequencies and the sampling window."""

    amp_a: float = DEFAULT_DITHER_AMPLITUDE
    amp_b: float = DEFAULT_DITHER_AMPLITUDE
    amp_c: float = DEFAULT_DITHER_AMPLITUDE
    amp_e: float = DEFAULT_DITHER_AMPLITUDE
    amp_f: float = DEFAULT_DITHER_AMPLITUDE
    freq_a: float = DEFAULT_FREQUENCIES[Mirror.A]
    freq_b: float = DEFAULT_FREQUENCIES[Mirror.B]
    freq_c: float = DEFAULT_FREQUENCIES[Mirror.C]
    freq_e: float = DEFAULT_FREQUENCIES[Mirror.E]
    freq_f: float = DEFAULT_FREQUENCIES[Mirror.F]
    sample_rate: float = DEFAULT_SAMPLE_RATE
    duration: float = DEFAULT_DURATION

    def __post_init__(self) -> None:
        if not (self.sample_rate > 0.0 and self.duration > 0.0):
            raise ConfigError("sample_rate and duration must be positive")
        count = self.sample_rate * self.duration
        if abs(count - round(count)) > 1e-9 or round(count) < 2:
            raise ConfigError(
                f"sample_rate * duration must be an integer >= 2, got {count!r}"
            )
        freqs = self.frequencies()
        amps = self.amplitudes()
        for mirror in Mirror:
            if freqs[mirror] <= 0.0:
                raise ConfigError(f"freq_{mirror.value} must be positive")
            if amps[mirror] < 0.0:
                raise ConfigError(f"amp_{mirror.value} must be >= 0")
            cycles = freqs[mirror] * self.duration
            if abs(cycles - round(cycles)) > 1e-9:
                raise ConfigError(
                    f"freq_{mirror.value} = {freqs[mirror]:g} Hz is not an integer "
                    f"number of cycles over {self.duration:g} s"
                )
        if len(set(freqs.values())) != len(freqs):
            raise ConfigError("dither frequencies must be pairwise distinct")
        resolution = 1.0 / self.duration
        ordered = sorted(freqs.values())
        for i, low in enumerate(ordered):
            for high in ordered[i + 1 :]:
                harmonic = round(high / low)
                if harmonic >= 2 and abs(high - harmonic * low) < resolution:
                    raise ConfigError(
                        f"frequencies {low:g} and {high:g} Hz are harmonically "
                        "related within the spectral resolution"
                    )
        if self.sample_rate <= 4.0 * max(freqs.values()):
            raise ConfigError("sample_rate must exceed 4x the highest dither frequency")

    def amplitudes(self) -> dict[Mirror, float]:
        return {
            Mirror.A: self.amp_a,
            Mirror.B: self.amp_b,
            Mirror.C: self.amp_c,
            Mirror.E: self.amp_e,
            Mirror.F: self.amp_f,
        }

    def frequencies(self) -> dict[Mirror, float]:
        return {
            Mirror.A: self.freq_a,
            Mirror.B: self.freq_b,
            Mirror.C: self.freq_c,
            Mirror.E: self.freq_e,
            Mirror.F: self.freq_f,
        }

    @property
    def sample_count(self) -> int:
        return round(self.sample_rate * self.duration)

    def times(self) -> np.ndarray:
        return np.arange(self.sample_count) / self.sample_rate

    def tilts_at(self, t: float) -> TiltSet:
        phase = 2.0 * math.pi * t
        return TiltSet(
            alpha_a=self.amp_a * math.sin(phase * self.freq_a),
            alpha_b=self.amp_b * math.sin(phase * self.freq_b),
            alpha_c=self.amp_c * math.sin(phase * self.freq_c),
            alpha_e=self.amp_e * math.sin(phase * self.freq_e),
            alpha_f=self.amp_f * math.sin(phase * self.freq_f),
        )


@dataclass(frozen=True)
class SpectrumReport:
    """Complex dither-frequency amplitudes of the detector signal, per mirror."""

    frequencies: dict[Mirror, float]
    amplitudes: dict[Mirror, complex]
    noise_floor: float

    def magnitude(self, mirror: Mirror) -> float:
        return abs(self.amplitudes[mirror])

    def peak_mirrors(self, factor: float = 5.0) -> set[Mirror]:
        """Mirrors whose dither peak exceeds factor times the noise floor."""
        return {
            m for m in Mirror if self.magnitude(m) > factor * self.noise_floor
        }


@dataclass(frozen=True)
class PhotonSample:
    """Detection positions drawn from a field's intensity distribution."""

    positions: np.ndarray
    seed: int
    count: int

    def __post_init__(self) -> None:
        pos = np.array(self.positions, dtype=np.float64, copy=True)
        if pos.shape != (self.count,) or self.count < 1:
            raise ConfigError("positions must be a 1-D array of length count >= 1")
        pos.flags.writeable = False
        object.__setattr__(self, "positions", pos)


def split_signal(f: TransverseField) -> float:
    """Normalized split-detector difference (P_right - P_left) / P_total.

    The x = 0 sample and the periodic boundary sample are split evenly
    between the halves, so the signal is exactly antisymmetric under parity.
    """
    a = f.amplitude
    intensity = a.real**2 + a.imag**2
    mid = f.grid.n // 2
    right = float(np.sum(intensity[mid + 1 :]))
    left = float(np.sum(intensity[1:mid]))
    total = right + left + float(intensity[0]) + float(intensity[mid])
    if total * f.grid.spacing < ZERO_POWER:
        raise ZeroNormError("zero-power field has no split signal")
    return (right - left) / total


def run_dither(scenario: Scenario, protocol: DitherProtocol) -> np.ndarray:
    """Split-detector time series while every mirror oscillates at its frequency.

    Each time sample evaluates the numeric engine at the instantaneous tilt
    set alpha_j(t) = A_j sin(2 pi f_j t).  The worst-case simultaneous crest
    must sit inside the small-angle regime.
    """
    amps = protocol.amplitudes()
    crest = TiltSet(
        alpha_a=amps[Mirror.A],
        alpha_b=amps[Mirror.B],
        alpha_c=amps[Mirror.C],
        alpha_e=amps[Mirror.E],
        alpha_f=amps[Mirror.F],
    )
    check_small_angle_regime(scenario, crest)
    series = np.empty(protocol.sample_count)
    for i, t in enumerate(protocol.times()):
        field = detector_field_numeric(scenario, protocol.tilts_at(t))
        series[i] = split_signal(field)
    return series


def spectrum(series: np.ndarray, protocol: DitherProtocol) -> SpectrumReport:
    """Single-bin Fourier projection of the signal at each dither frequency.

    amplitude_j = (2/T) * sum series(t) exp(-2 pi i f_j t) dt, so a pure
    sinusoid A sin(2 pi f_j t) reports |amplitude_j| = A.  The noise floor is
    the median off-bin magnitude of the full spectrum, regularized from below
    by the detector dynamic range (DYNAMIC_RANGE_FLOOR of the top peak).
    """
    series = np.asarray(series, dtype=np.float64)
    count = protocol.sample_count
    if series.shape != (count,):
        raise ConfigError(
            f"series length {series.shape} does not match protocol samples ({count},)"
        )
    times = protocol.times()
    amplitudes: dict[Mirror, complex] = {}
    for mirror, freq in protocol.frequencies().items():
        phase = np.exp(-2j * math.pi * freq * times)
        amplitudes[mirror] = complex(2.0 / count * np.sum(series * phase))
    full = np.abs(np.fft.rfft(series)) * (2.0 / count)
    signal_bins = {round(f * protocol.duration) for f in protocol.frequencies().values()}
    mask = np.ones(full.shape, dtype=bool)
    mask[0] = False  # DC carries the mean, not noise
    for b in signal_bins:
        if b < full.size:
            mask[b] = False
    median_off = float(np.median(full[mask])) if mask.any() else 0.0
    top = max(abs(a) for a in amplitudes.values())
    floor = max(median_off, DYNAMIC_RANGE_FLOOR * top)
    return SpectrumReport(
        frequencies=dict(protocol.frequencies()),
        amplitudes=amplitudes,
        noise_floor=floor,
    )


def sample_photons(f: TransverseField, count: int, seed: int) -> PhotonSample:
    """Draw photon detection positions from the field's intensity distribution.

    Inverse-transform sampling on the grid's cumulative distribution, with
    each sample's probability spread uniformly over its cell, so the sample
    mean is an unbiased estimate of the centroid.  Reproducible per seed.
    """
    if count < 1:
        raise ConfigError(f"photon count must be >= 1, got {count}")
    a = f.amplitude
    weights = a.real**2 + a.imag**2
    total = float(weights.sum())
    if total * f.grid.spacing < ZERO_POWER:
        raise ZeroNormError("cannot sample photons from a zero-power field")
    dx = f.grid.spacing
    edges = np.concatenate([f.grid.xs - 0.5 * dx, [f.grid.xs[-1] + 0.5 * dx]])
    cdf = np.concatenate([[0.0], np.cumsum(weights)]) / total
    rng = np.random.default_rng(seed)
    positions = np.interp(rng.random(count), cdf, edges)
    return PhotonSample(positions=positions, seed=seed, count=count)


def photon_dither_experiment(
    scenario: Scenario,
    protocol: DitherProtocol,
    photons_per_sample: int,
    seed: int,
) -> SpectrumReport:
    """Dither spectroscopy acquired photon by photon on the split detector.

    Per time sample, the number of right-half detections out of
    photons_per_sample follows the binomial law of the field's right-half
    probability; drawing that count directly is statistically identical to
    drawing individual positions (sample_photons) and counting sides.  Each
    time sample uses an independent, order-insensitive substream of the seed,
    and the empirical split signal converges to the deterministic series as
    photons_per_sample grows.
    """
    if photons_per_sample < 1:
        raise ConfigError(f"photons_per_sample must be >= 1, got {photons_per_sample}")
    series = run_dither(scenario, protocol)
    p_right = np.clip(0.5 * (1.0 + series), 0.0, 1.0)
    counts = np.empty_like(series)
    for i, p in enumerate(p_right):
        rng = np.random.default_rng([seed, i])
        counts[i] = rng.binomial(photons_per_sample, p)
    empirical = 2.0 * counts / photons_per_sample - 1.0
    return spectrum(empirical, protocol)


def default_protocol() -> DitherProtocol:
    return DitherProtocol()
