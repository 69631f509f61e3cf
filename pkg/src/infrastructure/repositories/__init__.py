from .file_result_repository import FileResultRepository
from .file_geometry_repository import FileGeometryRepository

__all__ = ['FileResultRepository', 'FileGeometryRepository']
