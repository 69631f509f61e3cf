from .logging_event_bus import LoggingEventBus

__all__ = ['LoggingEventBus']
