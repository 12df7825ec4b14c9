"""
Wavelet sets for dilation groups built from finite Coxeter groups.

Root systems and their reflection groups, exact box regions, lattice
tilings, scaling sets with their multiwavelet sets, iterative wavelet set
constructions and sampling of signals with box spectra.
"""

from importlib.metadata import version

from . import defaults, exceptions
from .groups import (
    Cone,
    MatrixGroup,
    ReflectionGroup,
    chamber_of,
    chambers_of,
    fundamental_cone,
    generate_group,
    reflection_group,
    rotation_group,
)
from .lattice import (
    DigitSet,
    DilationScheme,
    Lattice,
    digit_representatives,
    gram_max_offdiag,
    is_translation_tile,
    reduce_mod_lattice,
)
from .mra import (
    MRAConstruction,
    ScalingBoxSpec,
    construct_mra,
    is_scaling_set,
    multiwavelet_sets,
    split_scaling_set,
    standard_scaling_box,
)
from .multiplicity import (
    Annulus,
    dilation_multiplicity,
    multiplicative_multiplicity,
)
from .region import Box, Frame, Region, fourier_indicator
from .roots import (
    DualBasis,
    RootSystem,
    SimpleSystem,
    build_root_system,
    dual_basis,
    reflection_matrix,
    simple_system,
)
from .sampling import (
    BandlimitedSignal,
    SamplingPlan,
    directional_decompose,
    eval_tube_extension,
    sample_signal,
    wsk_reconstruct,
    wsk_reconstruct_dilated,
)
from .ux import init_logging
from .wavelet_sets import (
    construct_example31,
    construct_section5,
    verify_wavelet_set,
)

init_logging("INFO", True)

__version__ = version(__name__)

__all__ = (
    "Annulus",
    "BandlimitedSignal",
    "Box",
    "Cone",
    "DigitSet",
    "DilationScheme",
    "DualBasis",
    "Frame",
    "Lattice",
    "MRAConstruction",
    "MatrixGroup",
    "ReflectionGroup",
    "Region",
    "RootSystem",
    "SamplingPlan",
    "ScalingBoxSpec",
    "SimpleSystem",
    "build_root_system",
    "chamber_of",
    "chambers_of",
    "construct_example31",
    "construct_mra",
    "construct_section5",
    "defaults",
    "digit_representatives",
    "dilation_multiplicity",
    "directional_decompose",
    "dual_basis",
    "eval_tube_extension",
    "exceptions",
    "fourier_indicator",
    "fundamental_cone",
    "generate_group",
    "gram_max_offdiag",
    "is_scaling_set",
    "is_translation_tile",
    "multiplicative_multiplicity",
    "multiwavelet_sets",
    "reduce_mod_lattice",
    "reflection_group",
    "reflection_matrix",
    "rotation_group",
    "sample_signal",
    "simple_system",
    "split_scaling_set",
    "standard_scaling_box",
    "verify_wavelet_set",
    "wsk_reconstruct",
    "wsk_reconstruct_dilated",
)
