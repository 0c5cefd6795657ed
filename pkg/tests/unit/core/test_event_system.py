"""
Tests for the experiment lifecycle event bus.
"""
import logging
import threading
from unittest.mock import Mock

import pytest

from pevcond.core.event_system import (
    Event,
    EventBus,
    EventListener,
    EventType,
    InvalidTrialCounter,
    LoggingListener,
)


class TestEventTypes:
    """Tests for the EventType enumeration"""

    def test_event_type_uniqueness(self):
        """Test that event types have unique values"""
        values = [event_type.value for event_type in EventType]
        assert len(values) == len(set(values))

    def test_event_type_str_representation(self):
        """Test the string representation of event types"""
        assert str(EventType.RUN_STARTED) == "RUN_STARTED"
        assert str(EventType.TRIAL_INVALID) == "TRIAL_INVALID"


class TestEvent:
    """Tests for the Event class"""

    def test_event_initialization(self):
        """Test that an event carries its type, payload and a timestamp"""
        data = {"trial": 3, "error": "boom"}
        event = Event(EventType.TRIAL_INVALID, data)

        assert event.type == EventType.TRIAL_INVALID
        assert event.data == data
        assert event.timestamp is not None
        assert event.source is None

    def test_event_copies_payload(self):
        """Test that later changes to the payload dict are not seen by the event"""
        data = {"completed": 10}
        event = Event(EventType.TRIALS_COMPLETED, data, source="harness")
        data["completed"] = 20

        assert event.data == {"completed": 10}
        assert event.source == "harness"

    def test_event_equality(self):
        """Test that events compare by type and payload"""
        first = Event(EventType.RUN_COMPLETED, {"mom": 1.0})
        second = Event(EventType.RUN_COMPLETED, {"mom": 1.0})
        third = Event(EventType.RUN_STARTED, {"mom": 1.0})

        assert first == second
        assert first != third
        assert first != "RUN_COMPLETED"

    def test_event_string_representation(self):
        """Test that the string form names the type and payload"""
        event = Event(EventType.CELL_COMPLETED, {"n": 2}, source="sweep")

        assert "CELL_COMPLETED" in str(event)
        assert "{'n': 2}" in str(event)
        assert "sweep" in str(event)


class TestEventListener:
    """Tests for the EventListener base class"""

    def test_listener_event_types(self):
        """Test that a listener handles only the types it registered for"""
        listener = EventListener("test", [EventType.RUN_STARTED, EventType.RUN_COMPLETED])

        assert listener.name == "test"
        assert listener.can_handle_event_type(EventType.RUN_STARTED) is True
        assert listener.can_handle_event_type(EventType.TRIAL_INVALID) is False


class TestEventBus:
    """Tests for synchronous event distribution"""

    @pytest.fixture
    def bus(self):
        return EventBus()

    def test_bus_starts_empty(self, bus):
        """Test that a new bus has no listeners"""
        assert bus.get_listeners() == []

    def test_register_and_unregister(self, bus):
        """Test that listeners can be added and removed"""
        listener = EventListener("test", [EventType.RUN_STARTED])
        bus.register_listener(listener)
        assert listener in bus.get_listeners()

        bus.unregister_listener(listener)
        assert listener not in bus.get_listeners()

        # removing twice is harmless
        bus.unregister_listener(listener)

    def test_publish_delivers_to_matching_listeners(self, bus):
        """Test that only listeners registered for the event type receive it"""
        handler = Mock()
        other = Mock()

        class Recording(EventListener):
            def __init__(self, name, types, sink):
                super().__init__(name, types)
                self.sink = sink

            def handle_event(self, event):
                self.sink(event)

        bus.register_listener(Recording("runs", [EventType.RUN_STARTED], handler))
        bus.register_listener(Recording("cells", [EventType.CELL_COMPLETED], other))
        event = Event(EventType.RUN_STARTED, {"trials": 5})
        bus.publish(event)

        handler.assert_called_once_with(event)
        other.assert_not_called()

    def test_failing_listener_is_logged_and_skipped(self, bus, caplog):
        """Test that an exception in one listener does not stop delivery to others"""
        class Broken(EventListener):
            def handle_event(self, event):
                raise RuntimeError("listener failure")

        counter = InvalidTrialCounter()
        bus.register_listener(Broken("broken", [EventType.TRIAL_INVALID]))
        bus.register_listener(counter)

        with caplog.at_level(logging.ERROR, logger="pevcond.core.event_system"):
            bus.emit(EventType.TRIAL_INVALID, "harness", trial=1, error="x")

        assert counter.count == 1
        assert "listener failure" in caplog.text

    def test_emit_builds_event(self, bus):
        """Test that emit wraps keyword data and source into an Event"""
        received = []

        class Capture(EventListener):
            def handle_event(self, event):
                received.append(event)

        bus.register_listener(Capture("capture", list(EventType)))
        bus.emit(EventType.CHECK_COMPLETED, "verify", name="asymptotics", passed=True)

        assert received[0].type == EventType.CHECK_COMPLETED
        assert received[0].data == {"name": "asymptotics", "passed": True}
        assert received[0].source == "verify"

    def test_concurrent_registration(self, bus):
        """Test that listeners registered from several threads are all kept"""
        def register(i):
            bus.register_listener(EventListener(f"l{i}", [EventType.RUN_STARTED]))

        threads = [threading.Thread(target=register, args=(i,)) for i in range(20)]
        for thread in threads:
            thread.start()
        for thread in threads:
            thread.join()

        assert len(bus.get_listeners()) == 20


class TestBuiltinListeners:
    """Tests for the logging listener and the invalid-trial counter"""

    def test_logging_listener_logs_every_type(self, caplog):
        """Test that the logging listener writes events at info level"""
        listener = LoggingListener()
        assert all(listener.can_handle_event_type(t) for t in EventType)

        with caplog.at_level(logging.INFO, logger="pevcond.core.event_system"):
            listener.handle_event(Event(EventType.RUN_COMPLETED, {"mom": 5.0}))

        assert "RUN_COMPLETED: mom=5.0" in caplog.text

    def test_invalid_trial_counter_keeps_first_messages(self):
        """Test that the counter counts all events but keeps a bounded message list"""
        counter = InvalidTrialCounter(keep=2)
        for trial in range(5):
            counter.handle_event(Event(EventType.TRIAL_INVALID, {"trial": trial, "error": "bad"}))

        assert counter.count == 5
        assert counter.messages == ["trial 0: bad", "trial 1: bad"]
        assert counter.can_handle_event_type(EventType.RUN_STARTED) is False
