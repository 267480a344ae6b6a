"""Numerical toolkit for homogeneous complex self-similar measures.

The package computes with measures generated by maps z -> lam*z + a_i on
the complex plane chosen i.i.d. with probabilities p_i: transform
evaluation and decay fits, integer-shadow sequences and their inverse
problem plus parameter covers, exact cylinder-separation searches,
algebraic expansion classification, and measure rendering.  The
``fractalconv`` console script drives all of it in batch mode.
"""

__version__ = "0.1.0"

from .algebra import (
    IntPolynomial,
    PisotReport,
    PisotScanResult,
    is_complex_pisot,
    pisot_scan,
    poly_roots,
)
from .core import (
    Annulus,
    IFSSpec,
    RealRatioWarning,
    RegionH,
    bernoulli_spec,
    entropy,
    in_supercritical_region,
    load_spec,
    polar,
    save_spec,
    similarity_dimension,
    spec_from_dict,
    spec_to_dict,
    validate_ifs,
)
from .ek import (
    CoverBall,
    CoverResult,
    EKCalibration,
    EKSequence,
    EnumerationParams,
    TranslationEKSequence,
    calibrate_constants,
    ek_sequence,
    ek_sequence_translation,
    enumerate_covers,
    g_estimate,
    predict_K,
    reconstruct_theta,
    reconstruct_u,
    theta_ball,
)
from .errors import (
    BudgetError,
    ContourError,
    DegenerateInputError,
    FractalConvError,
    NonRealBetaError,
    PrecisionError,
    ValidationError,
)
from .fourier import (
    ACReport,
    DecayEstimate,
    DecayParams,
    FourierSample,
    SeparationParams,
    ac_report,
    aligned_frequencies,
    decay_exponent,
    default_c1,
    ek_upper_bound,
    ft_eval,
    ft_eval_many,
    ft_sup_on_annulus,
    smoothness_order,
)
from .measure import (
    DensityGrid,
    PointCloud,
    convolution_ifs,
    cylinder_points,
    decimate_ifs,
    gasket_spec,
    rasterize,
    rotate_ifs,
    sample_measure,
    save_grid,
    save_points_csv,
    truncation_depth,
)
from .separation import (
    ConcentrationReport,
    DecimationCheckRow,
    OverlapRoot,
    SeparationResult,
    ZeroCountReport,
    concentration_diagnostic,
    count_zeros_disk,
    decimation_separation_check,
    delta_n_brute,
    delta_n_pruned,
    difference_set,
    overlap_roots,
)

__all__ = [
    "__version__",
    # core
    "IFSSpec",
    "Annulus",
    "RegionH",
    "RealRatioWarning",
    "bernoulli_spec",
    "entropy",
    "in_supercritical_region",
    "load_spec",
    "polar",
    "save_spec",
    "similarity_dimension",
    "spec_from_dict",
    "spec_to_dict",
    "validate_ifs",
    # errors
    "FractalConvError",
    "ValidationError",
    "BudgetError",
    "PrecisionError",
    "DegenerateInputError",
    "NonRealBetaError",
    "ContourError",
    # measure
    "PointCloud",
    "DensityGrid",
    "sample_measure",
    "cylinder_points",
    "truncation_depth",
    "rasterize",
    "save_grid",
    "save_points_csv",
    "convolution_ifs",
    "decimate_ifs",
    "gasket_spec",
    "rotate_ifs",
    # fourier
    "FourierSample",
    "DecayEstimate",
    "DecayParams",
    "SeparationParams",
    "ACReport",
    "ft_eval",
    "ft_eval_many",
    "ft_sup_on_annulus",
    "decay_exponent",
    "aligned_frequencies",
    "default_c1",
    "ek_upper_bound",
    "smoothness_order",
    "ac_report",
    # separation
    "SeparationResult",
    "ConcentrationReport",
    "DecimationCheckRow",
    "OverlapRoot",
    "ZeroCountReport",
    "difference_set",
    "delta_n_brute",
    "delta_n_pruned",
    "concentration_diagnostic",
    "decimation_separation_check",
    "overlap_roots",
    "count_zeros_disk",
    # ek
    "EKSequence",
    "TranslationEKSequence",
    "EKCalibration",
    "EnumerationParams",
    "CoverBall",
    "CoverResult",
    "ek_sequence",
    "ek_sequence_translation",
    "reconstruct_theta",
    "g_estimate",
    "predict_K",
    "theta_ball",
    "reconstruct_u",
    "calibrate_constants",
    "enumerate_covers",
    # algebra
    "IntPolynomial",
    "PisotReport",
    "PisotScanResult",
    "poly_roots",
    "is_complex_pisot",
    "pisot_scan",
]
