"""Wave-optics lab for mirror-tilt weak traces in a nested Mach-Zehnder interferometer.

The toolkit models the interferometer's three unfolded paths on a 1-D
transverse grid, computes projector and effective weak values, and reproduces
the split-detector dither spectroscopy that defines a mirror's weak trace,
with and without Dove prisms in the interferometer legs.
"""

from .detection import (
    DitherProtocol,
    PhotonSample,
    SpectrumReport,
    default_protocol,
    photon_dither_experiment,
    run_dither,
    sample_photons,
    spectrum,
    split_signal,
)
from .elements import (
    DoveConfig,
    DovePlacement,
    Mirror,
    Path,
    TiltSet,
    apply_dove_x,
    apply_tilt,
    path_amplitude,
)
from .errors import (
    AliasingError,
    ConfigError,
    GridMismatchError,
    GuardError,
    NestedMziError,
    PostSelectionError,
    RegimeError,
    ZeroNormError,
)
from .fields import (
    GaussianSpec,
    TransverseField,
    TransverseGrid,
    centroid,
    decompose_parity,
    gaussian_profile,
    inner_product,
    make_gaussian,
    momentum_centroid,
    norm,
    parity_x,
    power,
    propagate,
)
from .interferometer import (
    OutputPort,
    PathField,
    Preset,
    PRESET_NAMES,
    Scenario,
    alternate_port_field,
    check_small_angle_regime,
    default_beam,
    default_grid,
    default_scenario,
    detector_field_analytic,
    detector_field_numeric,
    field_before_F,
    load_preset,
    path_fields,
    port_amplitudes,
)
from .weak_values import (
    PathState,
    TwoStateVector,
    WeakValueReport,
    alpha_step,
    effective_weak_value,
    paper_two_state_vector,
    path_projector,
    two_state_vector_for_port,
    weak_value,
    weak_value_report,
)

__version__ = "0.1.0"
