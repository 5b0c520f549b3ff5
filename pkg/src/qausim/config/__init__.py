"""qausim configuration."""
from .features import (
    FEATURE_HAI_ENABLED,
    FEATURE_OMEGA_STAR_QUARTIC,
    FEATURE_QCN_EFR_ENABLED,
    FEATURE_QCN_TRR_ENABLED,
    FEATURE_SAMPLING_DEDUP_ENABLED,
)

__all__ = [
    "FEATURE_HAI_ENABLED",
    "FEATURE_OMEGA_STAR_QUARTIC",
    "FEATURE_QCN_EFR_ENABLED",
    "FEATURE_QCN_TRR_ENABLED",
    "FEATURE_SAMPLING_DEDUP_ENABLED",
]
