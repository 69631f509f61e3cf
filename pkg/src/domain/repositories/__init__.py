from .result_repository import ResultRepository
from .geometry_repository import GeometryRepository

__all__ = ['ResultRepository', 'GeometryRepository']
