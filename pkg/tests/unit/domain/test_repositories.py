import pytest
import numpy as np

from src.domain.repositories import GeometryRepository, ResultRepository
from src.domain.services import discrete_laplacian


class InMemoryResultRepository(ResultRepository):
    """In-memory ResultRepository for testing"""

    def __init__(self):
        self.written = {}

    def write_json_lines(self, path, rows):
        self.written[path] = ("jsonl", list(rows))

    def write_json(self, path, document):
        self.written[path] = ("json", dict(document))

    def write_csv(self, path, rows, columns):
        self.written[path] = ("csv", [{c: row[c] for c in columns} for row in rows])


class InMemoryGeometryRepository(GeometryRepository):
    """GeometryRepository returning fixed geometry"""

    def load_mask(self, path):
        return discrete_laplacian.from_raster(np.ones((2, 2), dtype=bool), 0.5)

    def load_polygon(self, path):
        return [(0.0, 0.0), (1.0, 0.0), (0.0, 1.0)]


@pytest.mark.domain
@pytest.mark.unit
class TestRepositoryInterfaces:
    """Test the repository contracts"""

    def test_abstract_repositories_cannot_be_instantiated(self):
        """Test that the ABCs enforce their methods"""
        with pytest.raises(TypeError):
            ResultRepository()
        with pytest.raises(TypeError):
            GeometryRepository()

    def test_partial_implementation_cannot_be_instantiated(self):
        """Test that every abstract method must be provided"""

        class JsonOnly(ResultRepository):
            def write_json(self, path, document):
                pass

        with pytest.raises(TypeError):
            JsonOnly()

    def test_result_repository_implementation(self):
        """Test a complete implementation records its writes"""
        repository = InMemoryResultRepository()
        repository.write_csv("out.csv", [{"t": 1.0, "value": 2.0, "extra": 3}], ["t", "value"])
        repository.write_json(None, {"a": 1})

        assert repository.written["out.csv"] == ("csv", [{"t": 1.0, "value": 2.0}])
        assert repository.written[None] == ("json", {"a": 1})

    def test_geometry_repository_implementation(self):
        """Test a complete geometry implementation"""
        repository = InMemoryGeometryRepository()

        assert repository.load_mask("any").n_inside == 4
        assert len(repository.load_polygon("any")) == 3
