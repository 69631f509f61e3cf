from dataclasses import dataclass
from .base_event import DomainEvent

@dataclass
class SpectrumComputed(DomainEvent):
  """Event fired when a spectrum has been enumerated or solved."""
  domain: str
  n: int
  source: str
  lambda_max: float

  def to_dict(self) -> dict:
    data = super().to_dict()
    data.update({
      "domain": self.domain,
      "n": self.n,
      "source": self.source,
      "lambda_max": self.lambda_max,
    })
    return data

@dataclass
class CensusCompleted(DomainEvent):
  """Event fired when a nonzero-mean census is finished."""
  domain: str
  n_max: int
  count: int
  convention: str

  def to_dict(self) -> dict:
    data = super().to_dict()
    data.update({
      "domain": self.domain,
      "n_max": self.n_max,
      "count": self.count,
      "convention": self.convention,
    })
    return data

@dataclass
class HeatEvaluated(DomainEvent):
  """Event fired when a heat-mass curve has been evaluated."""
  domain: str
  method: str
  samples: int

  def to_dict(self) -> dict:
    data = super().to_dict()
    data.update({
      "domain": self.domain,
      "method": self.method,
      "samples": self.samples,
    })
    return data

@dataclass
class CriterionEvaluated(DomainEvent):
  """Event fired after each acceptance criterion."""
  name: str
  passed: bool
  seconds: float
  detail: str

  def to_dict(self) -> dict:
    data = super().to_dict()
    data.update({
      "name": self.name,
      "passed": self.passed,
      "seconds": self.seconds,
      "detail": self.detail,
    })
    return data
