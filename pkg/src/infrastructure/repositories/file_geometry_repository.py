from pathlib import Path
from typing import List, Tuple

import numpy as np

from src.domain.entities import GridMask
from src.domain.exceptions import DescriptorError
from src.domain.repositories import GeometryRepository
from src.domain.services import discrete_laplacian


def _data_lines(path: str) -> List[str]:
    source = Path(path)
    if not source.is_file():
        raise DescriptorError(f"Geometry file not found: {path}")
    lines = []
    for raw in source.read_text(encoding="utf-8").splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            lines.append(line)
    return lines


class FileGeometryRepository(GeometryRepository):
    """Reads mask and polygon files from disk"""

    def load_mask(self, path: str) -> GridMask:
        """Mask file: "nx ny h" then ny rows of nx '0'/'1' characters.

        Row j holds the nodes at y = j·h, character i the node at x = i·h.
        A header "nx h" declares a one-dimensional mask with a single row.
        """
        lines = _data_lines(path)
        if not lines:
            raise DescriptorError(f"Mask file {path} is empty")
        header = lines[0].split()
        try:
            if len(header) == 2:
                nx, ny, h = int(header[0]), 1, float(header[1])
                one_dimensional = True
            elif len(header) == 3:
                nx, ny, h = int(header[0]), int(header[1]), float(header[2])
                one_dimensional = False
            else:
                raise ValueError(header)
        except ValueError:
            raise DescriptorError(f"Mask file {path}: header must be 'nx ny h'") from None
        if nx < 1 or ny < 1 or not h > 0:
            raise DescriptorError(f"Mask file {path}: sizes must be positive")
        rows = lines[1:]
        if len(rows) != ny:
            raise DescriptorError(f"Mask file {path}: expected {ny} rows, found {len(rows)}")
        raster = np.zeros((ny, nx), dtype=bool)
        for j, row in enumerate(rows):
            if len(row) != nx or set(row) - {"0", "1"}:
                raise DescriptorError(f"Mask file {path}: row {j} must have {nx} characters of 0/1")
            raster[j] = [char == "1" for char in row]
        if one_dimensional:
            raster = raster[0]
        return discrete_laplacian.from_raster(raster, h)

    def load_polygon(self, path: str) -> List[Tuple[float, float]]:
        """Polygon file: one "x y" vertex per line"""
        vertices = []
        for number, line in enumerate(_data_lines(path), start=1):
            parts = line.replace(",", " ").split()
            try:
                if len(parts) != 2:
                    raise ValueError(line)
                vertices.append((float(parts[0]), float(parts[1])))
            except ValueError:
                raise DescriptorError(f"Polygon file {path}: vertex {number} is not 'x y'") from None
        return vertices
