"""Discrete-event loop over integer-nanosecond time."""
import heapq
import logging
import time
from collections import Counter
from dataclasses import dataclass, field
from typing import Any

from qausim.core.constants import NS_PER_S
from qausim.core.receipt import StopRule

from .events import EventHandle, EventKind, Handler, SimEvent

logger = logging.getLogger("qausim.engine")


def seconds_to_ns(seconds: float) -> int:
    return int(round(seconds * NS_PER_S))


@dataclass
class SimSummary:
    """Outcome of run_until. Wall time is excluded from equality."""
    end_time_ns: int
    events_dispatched: int
    events_by_kind: dict[str, int]
    events_cancelled: int
    wall_seconds: float = field(default=0.0, compare=False)


class Simulator:
    """Single-threaded event loop.

    Heap entries are (fire_time_ns, sequence, event); the sequence counter
    gives FIFO order among events with equal fire times.
    """

    def __init__(self):
        self._heap: list[tuple[int, int, SimEvent]] = []
        self._seq = 0
        self.now_ns = 0
        self._dispatched = 0
        self._cancelled = 0
        self._by_kind: Counter[str] = Counter()

    @property
    def now(self) -> float:
        """Clock in seconds."""
        return self.now_ns / NS_PER_S

    @property
    def pending(self) -> int:
        return len(self._heap)

    def schedule(self, event: SimEvent) -> EventHandle:
        """Queue an event; returns a handle that can cancel it.

        Raises:
            StopRule: event.fire_time_ns is before the current clock
        """
        if event.fire_time_ns < self.now_ns:
            raise StopRule(
                f"cannot schedule {event.kind.value} at {event.fire_time_ns} ns, "
                f"clock is {self.now_ns} ns"
            )
        event.sequence = self._seq
        self._seq += 1
        heapq.heappush(self._heap, (event.fire_time_ns, event.sequence, event))
        return EventHandle(event)

    def at(self, fire_time_ns: int, kind: EventKind, handler: Handler,
           payload: Any = None) -> EventHandle:
        return self.schedule(SimEvent(int(fire_time_ns), kind, handler, payload))

    def after(self, delay_ns: int, kind: EventKind, handler: Handler,
              payload: Any = None) -> EventHandle:
        return self.at(self.now_ns + int(delay_ns), kind, handler, payload)

    def run_until(self, t_end: float) -> SimSummary:
        """Dispatch every event with fire time <= t_end (seconds)."""
        return self.run_until_ns(seconds_to_ns(t_end))

    def run_until_ns(self, t_end_ns: int) -> SimSummary:
        if t_end_ns < self.now_ns:
            raise StopRule(f"run_until {t_end_ns} ns is before clock {self.now_ns} ns")

        t0 = time.perf_counter()
        heap = self._heap
        while heap and heap[0][0] <= t_end_ns:
            fire_ns, _, event = heapq.heappop(heap)
            if event.cancelled:
                self._cancelled += 1
                continue
            self.now_ns = fire_ns
            self._dispatched += 1
            self._by_kind[event.kind.value] += 1
            event.handler(event)

        self.now_ns = t_end_ns
        wall = time.perf_counter() - t0
        logger.debug("run_until %d ns: %d events in %.3fs", t_end_ns, self._dispatched, wall)

        return SimSummary(
            end_time_ns=self.now_ns,
            events_dispatched=self._dispatched,
            events_by_kind=dict(sorted(self._by_kind.items())),
            events_cancelled=self._cancelled,
            wall_seconds=wall,
        )
