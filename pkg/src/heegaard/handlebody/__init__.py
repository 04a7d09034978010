"""Disk sets of the standard handlebody: membership certificates, tight
positions, Whitehead graphs, full type, disk replacement, pants extension,
and bounded disk-set enumeration."""

from .model import (
    CutSystem,
    CutSystemError,
    HandlebodyModel,
    complement_pieces,
    cyclic_reduce,
    minimal_cut_system,
    pants_cut_system,
    standard_model,
    validate_cut_system,
)
from .membership import (
    CertificateError,
    MembershipResult,
    disk_membership,
    verify_membership_certificate,
    wave_resolutions,
)

__all__ = [
    "CertificateError",
    "CutSystem",
    "CutSystemError",
    "HandlebodyModel",
    "MembershipResult",
    "complement_pieces",
    "cyclic_reduce",
    "disk_membership",
    "minimal_cut_system",
    "pants_cut_system",
    "standard_model",
    "validate_cut_system",
    "verify_membership_certificate",
    "wave_resolutions",
]
