"""Squeezed-light enhanced optomechanical displacement sensing."""

__version__ = "0.1.0"

from .gaussian import (  # noqa: E402
    GaussianState,
    UnphysicalStateError,
    beamsplitter,
    displace,
    is_physical,
    loss,
    phase_rotate,
    purity,
    quadrature_variance,
    squeeze,
    symplectic_eigenvalues,
    two_mode_squeeze,
    vacuum,
)
from .detection import (  # noqa: E402
    DetectionChain,
    SpectrumResult,
    db_to_r,
    db_to_v,
    effective_efficiency,
    enhancement_db,
    measured_variance,
    r_to_db,
    v_to_db,
)
from .sidebands import (  # noqa: E402
    SidebandPair,
    apply_symmetric_loss,
    homodyne_arc,
    joint_amplitude_variance,
    joint_phase_variance,
    prepare_pair,
)
from .optomech import (  # noqa: E402
    CavityParams,
    MechanicalMode,
    OptomechCoupling,
    cavity_transmission,
    mechanical_psd,
    modulation_index,
    sql_optimum,
    sql_total_noise,
    squeezing_after_cavity,
    transduce,
    transduced_spectrum,
)
