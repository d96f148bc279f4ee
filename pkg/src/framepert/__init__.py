"""Executable perturbation certificates for finite frames and Schauder frames."""

from .certificates import CertificateReport
from .errors import FrameError
from .hilbert import FrameBounds, VectorFamily, frame_bounds, riesz_bounds
from .schauder import SchauderFramePair

__version__ = "0.1.0"

__all__ = [
    "CertificateReport",
    "FrameBounds",
    "FrameError",
    "SchauderFramePair",
    "VectorFamily",
    "frame_bounds",
    "riesz_bounds",
]
