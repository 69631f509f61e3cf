from pathlib import Path
from typing import Dict

from src.domain.exceptions import DescriptorError


def load_key_values(path: str) -> Dict[str, str]:
    """Read "key = value" lines; blank lines and '#' comments are skipped.

    Keys use the long flag names with dashes or underscores (``grid-h`` and
    ``grid_h`` are the same key).
    """
    source = Path(path)
    if not source.is_file():
        raise DescriptorError(f"Config file not found: {path}")
    values: Dict[str, str] = {}
    for number, raw in enumerate(source.read_text(encoding="utf-8").splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise DescriptorError(f"{path}:{number}: expected key = value")
        key, value = (part.strip() for part in line.split("=", 1))
        if not key:
            raise DescriptorError(f"{path}:{number}: empty key")
        values[key.replace("-", "_")] = value
    return values
