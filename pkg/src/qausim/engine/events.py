"""Simulation events and cancellation handles.

Events order by (fire_time_ns, sequence). The sequence is assigned by the
simulator at schedule time, so equal fire times dispatch in insertion order.
"""
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Callable


class EventKind(Enum):
    PACKET_ARRIVAL = "packet_arrival"
    PACKET_DEPARTURE = "packet_departure"
    FEEDBACK_DELIVERY = "feedback_delivery"
    TIMER_EXPIRY = "timer_expiry"
    FLOW_START = "flow_start"
    FLOW_STOP = "flow_stop"
    TRACE_SAMPLE = "trace_sample"


Handler = Callable[["SimEvent"], None]


@dataclass
class SimEvent:
    """A scheduled event. `handler(event)` runs at dispatch."""
    fire_time_ns: int
    kind: EventKind
    handler: Handler
    payload: Any = None
    sequence: int = -1
    cancelled: bool = field(default=False, repr=False)

    @property
    def fire_time(self) -> float:
        """Fire time in seconds."""
        return self.fire_time_ns / 1e9


@dataclass(frozen=True)
class EventHandle:
    """Returned by schedule(); cancel() drops the event before dispatch."""
    event: SimEvent

    def cancel(self) -> None:
        self.event.cancelled = True

    @property
    def active(self) -> bool:
        return not self.event.cancelled
