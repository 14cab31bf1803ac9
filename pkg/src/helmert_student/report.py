"""Machine-readable report documents.

Floats are written with 17 significant digits, which is enough for any
double to parse back to itself. Keys keep insertion order, and
``duration_ms`` always comes last because it is the one field that changes
between otherwise identical runs.
"""

from __future__ import annotations

import json
import math
from typing import Any

import numpy as np

SCHEMA_VERSION = "1"


def _render(obj: Any, out: list[str]) -> None:
    if obj is None or obj is True or obj is False:
        out.append(json.dumps(obj))
    elif isinstance(obj, (int, np.integer)):
        out.append(str(int(obj)))
    elif isinstance(obj, (float, np.floating)):
        x = float(obj)
        out.append(format(x, ".17g") if math.isfinite(x) else "null")
    elif isinstance(obj, str):
        out.append(json.dumps(obj, ensure_ascii=False))
    elif isinstance(obj, dict):
        out.append("{")
        for idx, (k, v) in enumerate(obj.items()):
            if idx:
                out.append(", ")
            out.append(json.dumps(str(k)))
            out.append(": ")
            _render(v, out)
        out.append("}")
    elif isinstance(obj, (list, tuple, np.ndarray)):
        out.append("[")
        for idx, v in enumerate(obj):
            if idx:
                out.append(", ")
            _render(v, out)
        out.append("]")
    else:
        raise TypeError(f"cannot render {type(obj).__name__} as JSON")


def dumps(obj: Any) -> str:
    out: list[str] = []
    _render(obj, out)
    return "".join(out)


def document(
    command: list[str], config: dict, results: list, overall_pass: bool, duration_ms: float
) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "config": config,
        "results": results,
        "overall_pass": overall_pass,
        "duration_ms": duration_ms,
    }


def stable_payload(text: str) -> str:
    """The document minus ``duration_ms``, re-rendered; used to compare runs."""
    doc = json.loads(text)
    doc.pop("duration_ms", None)
    return dumps(doc)
