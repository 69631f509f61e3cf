from abc import ABC, abstractmethod
from typing import List, Tuple
from ..entities import GridMask

class GeometryRepository(ABC):
  """Abstract source of rasterized and polygonal domains"""

  @abstractmethod
  def load_mask(self, path: str) -> GridMask:
    """Read a mask file: a header "nx ny h" followed by ny rows of nx '0'/'1' characters"""
    pass

  @abstractmethod
  def load_polygon(self, path: str) -> List[Tuple[float, float]]:
    """Read polygon vertices, one "x y" pair per line"""
    pass
