from contextlib import contextmanager
import csv
import json
import math
import os
from pathlib import Path
import sys
import tempfile
from typing import Any, Iterable, Iterator, List, Mapping, Optional, TextIO

import numpy as np

from src.domain.repositories import ResultRepository


def _json_serializer(obj):
    """JSON serializer for numpy values not serializable by default"""
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.ndarray):
        return _clean(obj.tolist())
    if hasattr(obj, "value"):
        return obj.value
    raise TypeError(f"Object of type {type(obj).__name__} is not JSON serializable")


def _clean(value: Any) -> Any:
    """Replace non-finite floats by null so the output stays strict JSON"""
    if isinstance(value, float):
        return value if math.isfinite(value) else None
    if isinstance(value, Mapping):
        return {key: _clean(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [_clean(item) for item in value]
    return value


def _dumps(document: Any) -> str:
    return json.dumps(_clean(document), default=_json_serializer, allow_nan=False)


class FileResultRepository(ResultRepository):
    """Writes results to files (or stdout when no path is given).

    A file is written to a temporary sibling and renamed into place, so a
    failed run leaves no partial output behind.
    """

    def __init__(self, stdout: Optional[TextIO] = None):
        self._stdout = stdout

    @contextmanager
    def _open(self, path: Optional[str]) -> Iterator[TextIO]:
        if path is None:
            stream = self._stdout or sys.stdout
            yield stream
            stream.flush()
            return
        target = Path(path)
        target.parent.mkdir(parents=True, exist_ok=True)
        handle = tempfile.NamedTemporaryFile("w", encoding="utf-8", newline="", dir=target.parent,
                                             prefix=f".{target.name}.", suffix=".tmp", delete=False)
        try:
            with handle:
                yield handle
            os.replace(handle.name, target)
        except BaseException:
            Path(handle.name).unlink(missing_ok=True)
            raise

    def write_json_lines(self, path: Optional[str], rows: Iterable[Mapping]) -> None:
        """Write one JSON object per line"""
        lines = [_dumps(row) for row in rows]
        with self._open(path) as stream:
            for line in lines:
                stream.write(line + "\n")

    def write_json(self, path: Optional[str], document: Mapping) -> None:
        """Write a single JSON document"""
        text = _dumps(document)
        with self._open(path) as stream:
            stream.write(text + "\n")

    def write_csv(self, path: Optional[str], rows: Iterable[Mapping], columns: List[str]) -> None:
        """Write rows as CSV with the given column order; missing values are left empty"""
        rows = list(rows)
        with self._open(path) as stream:
            writer = csv.DictWriter(stream, fieldnames=columns, extrasaction="ignore", lineterminator="\n")
            writer.writeheader()
            for row in rows:
                writer.writerow({key: _csv_value(row.get(key)) for key in columns})


def _csv_value(value: Any) -> Any:
    if isinstance(value, np.generic):
        value = value.item()
    if isinstance(value, float) and not math.isfinite(value):
        return "nan" if math.isnan(value) else ("inf" if value > 0 else "-inf")
    return "" if value is None else value
