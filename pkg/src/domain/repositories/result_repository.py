from abc import ABC, abstractmethod
from typing import Iterable, List, Mapping, Optional

class ResultRepository(ABC):
  """Abstract sink for command outputs.

  A write either produces the complete file or leaves nothing behind.
  """

  @abstractmethod
  def write_json_lines(self, path: Optional[str], rows: Iterable[Mapping]) -> None:
    """Write one JSON object per line"""
    pass

  @abstractmethod
  def write_json(self, path: Optional[str], document: Mapping) -> None:
    """Write a single JSON document"""
    pass

  @abstractmethod
  def write_csv(self, path: Optional[str], rows: Iterable[Mapping], columns: List[str]) -> None:
    """Write rows as CSV with the given column order"""
    pass
