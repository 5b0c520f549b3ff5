"""Deterministic discrete-event engine."""
from .events import EventHandle, EventKind, SimEvent
from .rng import RngStream
from .simulator import Simulator, SimSummary, seconds_to_ns

__all__ = [
    "EventHandle",
    "EventKind",
    "SimEvent",
    "RngStream",
    "Simulator",
    "SimSummary",
    "seconds_to_ns",
]
