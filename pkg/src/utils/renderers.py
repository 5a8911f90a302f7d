import csv
import io
import json
from typing import Any, Dict, List, Union
from pydantic import BaseModel

Payload = Union[BaseModel, Dict[str, Any]]


def _as_dict(payload: Payload) -> Dict[str, Any]:
    if isinstance(payload, BaseModel):
        return payload.model_dump(exclude_none=True)
    return payload


def flatten(data: Dict[str, Any], prefix: str = "") -> Dict[str, Any]:
    """
    Flatten nested dictionaries into dotted keys ({"value": {"mid": ..}} -> "value.mid").

    Lists are kept as JSON text.
    """
    flat = {}
    for key, value in data.items():
        name = f"{prefix}{key}"
        if isinstance(value, dict):
            flat.update(flatten(value, f"{name}."))
        elif isinstance(value, list):
            flat[name] = json.dumps(value, sort_keys=True)
        else:
            flat[name] = value
    return flat


class Renderers:
    """Output formatting for command results."""

    @staticmethod
    def render_json(payload: Payload) -> str:
        """Sorted keys, two-space indentation; integers travel as decimal strings upstream."""
        return json.dumps(_as_dict(payload), sort_keys=True, indent=2)

    @staticmethod
    def render_csv(payload: Payload) -> str:
        """
        One CSV row per table row (or a single row for scalar results).

        Args:
            payload: Response model or dict

        Returns:
            CSV text with a sorted header
        """
        if isinstance(payload, BaseModel) and hasattr(payload, "table_rows"):
            rows: List[Dict[str, Any]] = [flatten(row) for row in payload.table_rows()]
        else:
            rows = [flatten(_as_dict(payload))]

        header = sorted({key for row in rows for key in row})
        buffer = io.StringIO()
        writer = csv.DictWriter(buffer, fieldnames=header, lineterminator="\n")
        writer.writeheader()
        for row in rows:
            writer.writerow(row)
        return buffer.getvalue()

    @staticmethod
    def render_plain(payload: Payload) -> str:
        flat = flatten(_as_dict(payload))
        width = max((len(key) for key in flat), default=0)
        return "\n".join(f"{key.ljust(width)}  {flat[key]}" for key in sorted(flat)) + "\n"

    @staticmethod
    def render(payload: Payload, fmt: str = "json") -> str:
        """
        Render a payload in the requested format.

        Args:
            payload: Response model or dict
            fmt: "json", "csv" or "plain"

        Returns:
            Rendered text
        """
        if fmt == "csv":
            return Renderers.render_csv(payload)
        if fmt == "plain":
            return Renderers.render_plain(payload)
        return Renderers.render_json(payload) + "\n"
