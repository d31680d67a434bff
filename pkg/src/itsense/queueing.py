"""Nonvolatile FIFO sample queue: deadline enforcement and rate bookkeeping."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .errors import InputError, QueueOverflowError


@dataclass(frozen=True)
class Sample:
    """One collected reading awaiting processing and transmission."""

    tick: int
    value: float
    deadline: int  # last tick at which transmission still counts as fresh

    def __post_init__(self) -> None:
        if self.deadline <= self.tick:
            raise InputError("deadline must fall after the collection tick")


@dataclass(frozen=True)
class QueueDynamics:
    """Windowed enqueue/dequeue rates plus the instantaneous length."""

    length: int
    enqueue_rate: float  # samples per second over the window
    dequeue_rate: float


class SampleQueue:
    """FIFO with prefix expiry and sliding-window rate counters.

    Deadlines must be non-decreasing in arrival order (the runtime uses one
    latency constraint per run), which makes the head the earliest deadline
    and lets expiry stop at the first fresh sample.  Rates are computed over
    per-tick counters; call record_tick() once per simulated tick to close
    the current counters into the window.
    """

    def __init__(self, tick_period_s: float, history_s: float = 1.0,
                 capacity: int | None = None):
        if tick_period_s <= 0 or history_s <= 0:
            raise InputError("tick period and history window must be positive")
        if capacity is not None and capacity < 1:
            raise InputError("capacity must be at least 1 when bounded")
        self._tick_period = tick_period_s
        self._history_ticks = max(1, round(history_s / tick_period_s))
        self._capacity = capacity
        self._items: deque[Sample] = deque()
        self._enq_window: deque[int] = deque(maxlen=self._history_ticks)
        self._deq_window: deque[int] = deque(maxlen=self._history_ticks)
        self._enq_this_tick = 0
        self._deq_this_tick = 0

    def __len__(self) -> int:
        return len(self._items)

    def peek_oldest(self) -> Sample | None:
        return self._items[0] if self._items else None

    def enqueue(self, sample: Sample) -> None:
        if self._capacity is not None and len(self._items) >= self._capacity:
            raise QueueOverflowError(f"queue at capacity {self._capacity}")
        if self._items and sample.deadline < self._items[-1].deadline:
            raise InputError("deadlines must be non-decreasing in arrival order")
        self._items.append(sample)
        self._enq_this_tick += 1

    def dequeue_oldest(self, now: int) -> Sample | None:
        # now is unused: FIFO order alone decides what leaves.  Kept for
        # symmetry with drop_expired.
        if not self._items:
            return None
        self._deq_this_tick += 1
        return self._items.popleft()

    def drop_expired(self, now: int) -> int:
        """Remove every sample whose deadline has passed; returns the count."""
        dropped = 0
        items = self._items
        while items and items[0].deadline < now:
            items.popleft()
            dropped += 1
        return dropped

    def record_tick(self) -> None:
        """Close the current tick's counters into the sliding window."""
        self._enq_window.append(self._enq_this_tick)
        self._deq_window.append(self._deq_this_tick)
        self._enq_this_tick = 0
        self._deq_this_tick = 0

    def dynamics(self, window_s: float | None = None) -> QueueDynamics:
        """Length plus enqueue/dequeue rates over the last closed ticks."""
        if window_s is None:
            ticks = self._history_ticks
        else:
            if window_s <= 0:
                raise InputError("window must be positive")
            ticks = max(1, round(window_s / self._tick_period))
            if ticks > self._history_ticks:
                raise InputError("window exceeds recorded history")
        span_s = ticks * self._tick_period
        enq = sum(list(self._enq_window)[-ticks:])
        deq = sum(list(self._deq_window)[-ticks:])
        return QueueDynamics(length=len(self._items),
                             enqueue_rate=enq / span_s,
                             dequeue_rate=deq / span_s)
