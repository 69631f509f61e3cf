from .base_event import DomainEvent
from .run_events import SpectrumComputed, CensusCompleted, HeatEvaluated, CriterionEvaluated

__all__ = ['DomainEvent', 'SpectrumComputed', 'CensusCompleted', 'HeatEvaluated', 'CriterionEvaluated']
