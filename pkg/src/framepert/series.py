"""Partial sums of truncated infinite series, with trend diagnostics.

A finite truncation can never prove divergence.  The trend verdict only
says that the increments keep pace with a reference series known to
diverge, such as the harmonic series.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

BOUNDED_BELOW_TARGET = "bounded_below_target"
EXCEEDS_TARGET = "exceeds_target"
INCREASING_UNBOUNDED_TREND = "increasing_unbounded_trend"


@dataclass(frozen=True)
class TruncatedSeriesTrace:
    partial_sums: tuple
    verdict_hint: str
    target: float | None = None
    label: str = ""
    notes: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.verdict_hint not in (BOUNDED_BELOW_TARGET, EXCEEDS_TARGET, INCREASING_UNBOUNDED_TREND):
            raise ValueError(f"unknown verdict {self.verdict_hint!r}")

    @property
    def increments(self) -> np.ndarray:
        s = np.asarray(self.partial_sums, dtype=float)
        return np.diff(np.concatenate([[0.0], s]))

    @property
    def final(self) -> float:
        return float(self.partial_sums[-1]) if self.partial_sums else 0.0

    def to_dict(self):
        return {
            "label": self.label,
            "partial_sums": [float(x) for x in self.partial_sums],
            "verdict_hint": self.verdict_hint,
            "target": self.target,
            **({"notes": self.notes} if self.notes else {}),
        }


def tracks_reference(increments, reference, window) -> bool:
    """True when the last ``window`` increments are positive and each is at
    least the matching term of ``reference``."""
    inc = np.asarray(increments, dtype=float)
    ref = np.asarray(reference, dtype=float)
    if window < 1 or inc.size < window or ref.size != inc.size:
        return False
    tail = slice(inc.size - window, inc.size)
    return bool(np.all(inc[tail] > 0) and np.all(inc[tail] >= ref[tail]))


def trace_from_terms(terms, target=None, reference=None, window=2, label="") -> TruncatedSeriesTrace:
    """Build a trace from the (non-negative) terms of a series.

    ``reference`` holds the terms of a divergent comparison series.  If the
    tail increments dominate it, the verdict is the unbounded trend.
    Otherwise the final partial sum is compared with ``target``.
    """
    terms = np.asarray(terms, dtype=float)
    sums = tuple(float(x) for x in np.cumsum(terms))
    notes = {}
    if reference is not None and tracks_reference(terms, reference, window):
        verdict = INCREASING_UNBOUNDED_TREND
        notes["reference_window"] = window
    elif target is not None and sums and sums[-1] >= target:
        verdict = EXCEEDS_TARGET
    else:
        verdict = BOUNDED_BELOW_TARGET
    return TruncatedSeriesTrace(sums, verdict, target, label, notes)
