"""The rival formalisms: default-logic extensions and the Probably rule system."""

from .defaults import DefaultTheory, Extension, compute_extensions, is_extension
from .mh import (
    CONTRADICTION,
    DerivationTrace,
    MHSentence,
    MHStep,
    consistent_,
    mh_derive,
    normally,
    plain,
    probably,
    replay,
    verify_trace,
)

__all__ = [
    "CONTRADICTION",
    "DefaultTheory",
    "DerivationTrace",
    "Extension",
    "MHSentence",
    "MHStep",
    "compute_extensions",
    "consistent_",
    "is_extension",
    "mh_derive",
    "normally",
    "plain",
    "probably",
    "replay",
    "verify_trace",
]
