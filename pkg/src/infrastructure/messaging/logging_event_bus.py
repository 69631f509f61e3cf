from typing import List

from src.commons.utils import logger
from src.domain.events import DomainEvent


class LoggingEventBus:
    """Event bus that records run events as structured log lines"""

    def __init__(self):
        self.published: List[DomainEvent] = []

    def publish(self, events: List[DomainEvent]) -> None:
        """Publish run events to the log"""
        for event in events:
            logger.info(f"Run event: {event.__class__.__name__}", extra={"event": event.to_dict()})
            self.published.append(event)
