"""Subcommands of the duality CLI; each module exposes setup(cli)."""
from typing import List, Optional

from errors import UsageError


def parse_vector(text: Optional[str]) -> Optional[List[float]]:
    """Parse 'v1,v2,...' (period decimal separator) into floats."""
    if text is None:
        return None
    try:
        values = [float(part) for part in text.split(",")]
    except ValueError:
        raise UsageError(f"Invalid vector {text!r}; expected comma-separated numbers such as 1.5,-2")
    if not values:
        raise UsageError("Empty vector")
    return values
