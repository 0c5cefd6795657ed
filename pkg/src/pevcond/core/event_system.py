"""
Lifecycle events for Monte Carlo runs, sweeps and verification suites.

Experiment code publishes events on an EventBus; listeners registered for the
event types they care about receive them synchronously. Listeners are how the
CLI reports progress and how invalid trials are tallied without the harness
knowing who is watching.
"""

import enum
import logging
import threading
from datetime import datetime
from typing import Any, Dict, Iterable, List, Optional


logger = logging.getLogger(__name__)


class EventType(enum.Enum):
    """
    Enumeration of experiment lifecycle events.
    """
    RUN_STARTED = 1
    TRIALS_COMPLETED = 2
    TRIAL_INVALID = 3
    RUN_COMPLETED = 4
    CELL_COMPLETED = 5
    CHECK_COMPLETED = 6

    def __str__(self) -> str:
        return self.name


class Event:
    """
    An event with its payload and metadata.
    """

    def __init__(
        self,
        event_type: EventType,
        data: Dict[str, Any],
        source: Optional[str] = None
    ):
        """
        Initialize a new event.

        Args:
            event_type: Type of the event from EventType enum
            data: Payload; copied so later mutation by the publisher is not seen
            source: Optional identifier of the publishing component
        """
        self.type = event_type
        self.data = data.copy()
        self.timestamp = datetime.now()
        self.source = source

    def __eq__(self, other):
        if not isinstance(other, Event):
            return False
        return self.type == other.type and self.data == other.data

    def __str__(self) -> str:
        source_str = f", source: {self.source}" if self.source else ""
        return f"Event(type: {self.type}, data: {self.data}, time: {self.timestamp}{source_str})"


class EventListener:
    """
    Base class for components that react to events.
    """

    def __init__(self, name: str, event_types: Iterable[EventType]):
        """
        Args:
            name: Identifier of the listener
            event_types: Event types this listener handles
        """
        self.name = name
        self.event_types = set(event_types)

    def can_handle_event_type(self, event_type: EventType) -> bool:
        return event_type in self.event_types

    def handle_event(self, event: Event) -> None:
        """
        Handle an event. Subclasses override this.
        """
        pass


class EventBus:
    """
    Synchronous event distribution.

    Publishing takes a snapshot of the listener list under a lock, so listeners
    may be registered from other threads while a run is in progress. A listener
    that raises is logged and skipped; the run continues.
    """

    def __init__(self):
        self._listeners: List[EventListener] = []
        self._lock = threading.Lock()

    def register_listener(self, listener: EventListener) -> None:
        with self._lock:
            self._listeners.append(listener)

    def unregister_listener(self, listener: EventListener) -> None:
        with self._lock:
            if listener in self._listeners:
                self._listeners.remove(listener)

    def get_listeners(self) -> List[EventListener]:
        with self._lock:
            return self._listeners.copy()

    def publish(self, event: Event) -> None:
        """
        Deliver an event to every listener registered for its type.

        Args:
            event: The event to deliver
        """
        for listener in self.get_listeners():
            if listener.can_handle_event_type(event.type):
                try:
                    listener.handle_event(event)
                except Exception as e:
                    logger.error(f"Error in listener {listener.name}: {e}")

    def emit(self, event_type: EventType, source: Optional[str] = None, **data: Any) -> None:
        """
        Shorthand for publish(Event(event_type, data, source)).
        """
        self.publish(Event(event_type, data, source=source))


class LoggingListener(EventListener):
    """
    Writes every lifecycle event to the log at info level.
    """

    def __init__(self, name: str = "logging", event_types: Optional[Iterable[EventType]] = None):
        super().__init__(name, event_types if event_types is not None else list(EventType))

    def handle_event(self, event: Event) -> None:
        fields = ", ".join(f"{k}={v}" for k, v in event.data.items())
        logger.info(f"{event.type}: {fields}")


class InvalidTrialCounter(EventListener):
    """
    Counts TRIAL_INVALID events and keeps the last few error messages.
    """

    def __init__(self, name: str = "invalid-trials", keep: int = 10):
        super().__init__(name, [EventType.TRIAL_INVALID])
        self.count = 0
        self.keep = keep
        self.messages: List[str] = []

    def handle_event(self, event: Event) -> None:
        self.count += 1
        if len(self.messages) < self.keep:
            self.messages.append(f"trial {event.data.get('trial')}: {event.data.get('error')}")
