"""Worst-case robust adaptive beamforming for general-rank signal models."""

from .models import (
    BeamWeights,
    UncertaintyModel,
    BeamformerOptions,
    CertificateReport,
    Algorithm1Diagnostics,
    canonicalize
)
from .sinr import (
    loaded_covariance,
    output_sinr,
    optimal_sinr,
    plugin_beamformer,
    worst_case_numerator,
    worst_case_denominator,
    worst_case_sinr,
    maximin_objective,
    sinr_db
)
from .certificates import (
    trace_norm_premise,
    qmi_holds,
    check_certificates,
    construct_rank_one_certificate,
    truncate_to_rank
)
from .robust import algorithm1

__all__ = [
    'BeamWeights',
    'UncertaintyModel',
    'BeamformerOptions',
    'CertificateReport',
    'Algorithm1Diagnostics',
    'canonicalize',
    'loaded_covariance',
    'output_sinr',
    'optimal_sinr',
    'plugin_beamformer',
    'worst_case_numerator',
    'worst_case_denominator',
    'worst_case_sinr',
    'maximin_objective',
    'sinr_db',
    'trace_norm_premise',
    'qmi_holds',
    'check_certificates',
    'construct_rank_one_certificate',
    'truncate_to_rank',
    'algorithm1'
]
